#include "proxlaw/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <thread>
#include <vector>

#include "proxlaw/errors.hpp"
#include "proxlaw/metrics.hpp"
#include "proxlaw/rng.hpp"

namespace proxlaw {
namespace {

bool exceeds(double r_perm_abs, double r_obs_abs, CountingRule rule) {
  return rule == CountingRule::strict_greater ? r_perm_abs > r_obs_abs
                                              : r_perm_abs >= r_obs_abs;
}

// Permutations [begin, end) of the sampled test; each index i draws its own
// substream, so the count is independent of how the range is partitioned.
std::uint64_t count_sampled_range(std::span<const double> a,
                                  std::span<const double> b, double r_obs_abs,
                                  std::uint64_t seed, CountingRule rule,
                                  std::uint64_t begin, std::uint64_t end) {
  const std::size_t n = a.size();
  std::vector<double> permuted(n);
  std::uint64_t count = 0;
  for (std::uint64_t i = begin; i < end; ++i) {
    Pcg32 rng(substream_seed(seed, i));
    const std::vector<std::uint32_t> idx = shuffled_indices(n, rng);
    for (std::size_t j = 0; j < n; ++j) {
      permuted[j] = b[idx[j]];
    }
    const double r_perm = pearson(a, std::span<const double>(permuted)).r;
    if (exceeds(std::abs(r_perm), r_obs_abs, rule)) ++count;
  }
  return count;
}

std::uint64_t factorial(std::size_t n) {
  std::uint64_t f = 1;
  for (std::size_t i = 2; i <= n; ++i) f *= i;
  return f;
}

}  // namespace

PermutationResult permutation_test(std::span<const double> a,
                                   std::span<const double> b,
                                   std::uint64_t n_permutations,
                                   std::uint64_t seed, PermutationMode mode,
                                   CountingRule counting_rule,
                                   unsigned n_workers) {
  if (a.size() != b.size()) {
    throw Error(Errc::length_mismatch, "",
                "vectors have lengths " + std::to_string(a.size()) + " and " +
                    std::to_string(b.size()));
  }
  const double r_obs = pearson(a, b).r;
  const double r_obs_abs = std::abs(r_obs);

  PermutationResult result;
  result.r_obs = r_obs;
  result.seed = seed;
  result.mode = mode;
  result.counting_rule = counting_rule;

  if (mode == PermutationMode::exhaustive) {
    if (a.size() > 8) {
      throw Error(Errc::too_large_for_exhaustive, "",
                  "exhaustive mode is capped at n = 8 (n! alignments)");
    }
    const std::size_t n = a.size();
    std::vector<std::uint32_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0u);
    std::vector<double> permuted(n);
    std::uint64_t count = 0;
    do {
      for (std::size_t j = 0; j < n; ++j) {
        permuted[j] = b[idx[j]];
      }
      const double r_perm = pearson(a, std::span<const double>(permuted)).r;
      if (exceeds(std::abs(r_perm), r_obs_abs, counting_rule)) ++count;
    } while (std::next_permutation(idx.begin(), idx.end()));
    result.n_permutations = factorial(n);
    result.count_exceeding = count;
  } else {
    if (n_permutations == 0) {
      throw Error(Errc::bad_parameter, "n_permutations",
                  "n_permutations must be positive");
    }
    result.n_permutations = n_permutations;
    if (n_workers <= 1 || n_permutations < 2 * n_workers) {
      result.count_exceeding = count_sampled_range(
          a, b, r_obs_abs, seed, counting_rule, 0, n_permutations);
    } else {
      const std::uint64_t workers = n_workers;
      std::vector<std::uint64_t> counts(workers, 0);
      std::vector<std::thread> threads;
      threads.reserve(workers);
      for (std::uint64_t w = 0; w < workers; ++w) {
        const std::uint64_t begin = n_permutations * w / workers;
        const std::uint64_t end = n_permutations * (w + 1) / workers;
        threads.emplace_back([&, w, begin, end] {
          counts[w] = count_sampled_range(a, b, r_obs_abs, seed,
                                          counting_rule, begin, end);
        });
      }
      for (auto& t : threads) t.join();
      result.count_exceeding =
          std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
    }
  }

  result.p_value = static_cast<double>(result.count_exceeding) /
                   static_cast<double>(result.n_permutations);
  return result;
}

namespace {

// Continued fraction for the regularized incomplete beta (Lentz's method).
double beta_continued_fraction(double a, double b, double x) {
  constexpr int kMaxIterations = 300;
  constexpr double kEps = 3e-16;
  constexpr double kTiny = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::abs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const int m2 = 2 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::abs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::abs(del - 1.0) < kEps) break;
  }
  return h;
}

double regularized_incomplete_beta(double a, double b, double x) {
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) -
                           std::lgamma(b) + a * std::log(x) +
                           b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_continued_fraction(a, b, x) / a;
  }
  return 1.0 - front * beta_continued_fraction(b, a, 1.0 - x) / b;
}

}  // namespace

double student_t_sf(double t, std::uint64_t df) {
  if (df < 1) {
    throw Error(Errc::bad_parameter, "df", "df must be at least 1");
  }
  if (std::isnan(t) || t < 0.0) {
    throw Error(Errc::bad_parameter, "t", "t must be non-negative");
  }
  if (t == 0.0) return 0.5;
  if (std::isinf(t)) return 0.0;
  const double v = static_cast<double>(df);
  const double x = v / (v + t * t);
  return 0.5 * regularized_incomplete_beta(v / 2.0, 0.5, x);
}

TTestResult t_test_p(double r, std::size_t n) {
  if (n < 3) {
    throw Error(Errc::bad_parameter, "n", "t fallback needs n >= 3");
  }
  if (std::isnan(r) || std::abs(r) > 1.0) {
    throw Error(Errc::bad_parameter, "r", "r must lie in [-1, 1]");
  }
  TTestResult result;
  result.df = n - 2;
  if (std::abs(r) == 1.0) {
    result.t = std::copysign(std::numeric_limits<double>::infinity(), r);
    result.p_two_tailed = 0.0;
    result.saturated = true;
    return result;
  }
  const double t =
      r * std::sqrt(static_cast<double>(n - 2)) / std::sqrt(1.0 - r * r);
  result.t = t;
  result.p_two_tailed =
      std::min(1.0, 2.0 * student_t_sf(std::abs(t), result.df));
  return result;
}

namespace {

BinomialTail binom_sum(int k_begin, int k_end, int k, int n) {
  // Walk C(n, i) incrementally; every division is exact.
  BigUint coeff(1);
  BigUint numerator;
  for (int i = 0; i <= n; ++i) {
    if (i >= k_begin && i < k_end) {
      numerator += coeff;
    }
    if (i < n) {
      coeff.mul_small(static_cast<std::uint32_t>(n - i));
      coeff.divmod_small(static_cast<std::uint32_t>(i + 1));
    }
  }
  BinomialTail tail;
  tail.k = k;
  tail.n = n;
  tail.denominator = BigUint::pow2(static_cast<std::size_t>(n));
  tail.p_float = numerator.to_double_scaled(-n);
  tail.numerator = std::move(numerator);
  return tail;
}

}  // namespace

BinomialTail binom_tail(int k, int n) {
  if (k < 0 || n < 0 || k > n || n > 10000) {
    throw Error(Errc::bad_parameter, "k/n",
                "need 0 <= k <= n <= 10000");
  }
  return binom_sum(k, n + 1, k, n);
}

BinomialTail binom_tail_below(int k, int n) {
  if (k < 0 || n < 0 || k > n || n > 10000) {
    throw Error(Errc::bad_parameter, "k/n",
                "need 0 <= k <= n <= 10000");
  }
  return binom_sum(0, k, k, n);
}

std::string BinomialTail::fraction_string() const {
  return numerator.to_decimal() + "/" + denominator.to_decimal();
}

}  // namespace proxlaw
