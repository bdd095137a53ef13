#pragma once

#include <cstdint>
#include <span>
#include <vector>

// Exact finite-dimensional oracles: stable binomial numerics, the exact value
// of E max_j |B_j/n - p(j)| for independent binomials, exact mean absolute
// deviation, and the closed-form shifted-Bernoulli MGF. Everything here is
// deterministic and reproducible bit for bit.

namespace lgc::exact {

struct BinomialTable {
  int n = 0;
  double q = 0.0;
  std::vector<double> log_pmf;  // n+1 entries, -inf allowed
  std::vector<double> cdf;      // compensated cumulative sums

  double pmf(int k) const;
  // P(X >= m) and P(X <= m), freshly summed smallest-terms-first.
  double upper_tail(int m) const;
  double lower_tail(int m) const;
};

BinomialTable binomial_table(int n, double q);

// E max_{j<=d} |B_j/n - p(j)| with independent B_j ~ Binomial(n, p(j)),
// computed as int_0^1 (1 - prod_j P(|B_j/n - p(j)| <= t)) dt over the sorted
// breakpoint partition. pvec must be nonincreasing with entries in (0, 1/2].
// Cost O(d n log(d n)). The parallel variant builds per-coordinate tables
// concurrently; both return identical bits.
double delta_n(std::span<const double> pvec, int n);
double delta_n_serial(std::span<const double> pvec, int n);

// E |X - n q| for X ~ Binomial(n, q), by direct pmf summation.
double mad(int n, double q);

// E exp(t (X - s)) for X ~ Bernoulli(q): (1-q) e^{-ts} + q e^{t(1-s)}.
double mgf_shifted_bernoulli(double q, double s, double t);

}  // namespace lgc::exact
