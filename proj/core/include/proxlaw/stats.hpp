#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "proxlaw/biguint.hpp"

namespace proxlaw {

enum class PermutationMode { sampled, exhaustive };
enum class CountingRule { strict_greater, greater_or_equal };

struct PermutationResult {
  double r_obs = 0.0;
  std::uint64_t n_permutations = 0;
  std::uint64_t count_exceeding = 0;
  double p_value = 0.0;  // count_exceeding / n_permutations, no smoothing
  std::uint64_t seed = 0;
  PermutationMode mode = PermutationMode::sampled;
  CountingRule counting_rule = CountingRule::greater_or_equal;

  bool operator==(const PermutationResult&) const = default;
};

// Holds `a` fixed and permutes `b`. Sampled mode draws permutation i from
// Pcg32(substream_seed(seed, i)) via Fisher-Yates, so the result is
// bit-identical for any n_workers. Exhaustive mode enumerates all n!
// alignments (n <= 8) and reports n_permutations = n!; `seed` is echoed but
// unused. counting compares |r_perm| against |r_obs| under the rule.
PermutationResult permutation_test(
    std::span<const double> a, std::span<const double> b,
    std::uint64_t n_permutations = 200, std::uint64_t seed = 42,
    PermutationMode mode = PermutationMode::sampled,
    CountingRule counting_rule = CountingRule::greater_or_equal,
    unsigned n_workers = 1);

struct TTestResult {
  double t = 0.0;
  std::uint64_t df = 0;
  double p_two_tailed = 1.0;
  // |r| = 1 exactly: t is infinite, p reported as 0.
  bool saturated = false;
};

// Analytical fallback: t = r * sqrt(n-2) / sqrt(1 - r^2), two-tailed.
TTestResult t_test_p(double r, std::size_t n);

// One-sided Student t survival function, absolute error <= 1e-10:
// I_x(df/2, 1/2) / 2 with x = df / (df + t^2).
double student_t_sf(double t, std::uint64_t df);

// Exact fair-coin tail probabilities in integer arithmetic.
struct BinomialTail {
  int k = 0;
  int n = 0;
  BigUint numerator;    // sum over the tail of C(n, i)
  BigUint denominator;  // 2^n
  double p_float = 0.0;

  std::string fraction_string() const;  // "299/4096"
};

// P(X >= k) for X ~ Binomial(n, 1/2): numerator = sum_{i=k..n} C(n,i).
BinomialTail binom_tail(int k, int n);
// P(X < k): numerator = sum_{i=0..k-1} C(n,i). Complement of binom_tail.
BinomialTail binom_tail_below(int k, int n);

}  // namespace proxlaw
