#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"
#include "lgc/seq.hpp"

// The fully empirical high-probability bound on the expected sup deviation:
// an orientation vector from an independent second sample, the reoriented
// empirical mean, its reordered S value, and
//   bound = 16 sqrt(S(p_tilde sorted)/n) + sqrt(8 log(1/delta)/n),
// plus an empirical Rademacher diagnostic.

namespace lgc::estimator {

struct Sample {
  std::int64_t n = 0;  // rows = draws
  std::int64_t d = 0;  // columns = coordinates
  std::vector<std::uint8_t> bits;  // row-major, entries in {0,1}

  std::uint8_t at(std::int64_t i, std::int64_t j) const {
    return bits[static_cast<std::size_t>(i * d + j)];
  }
};

Sample make_sample(std::int64_t n, std::int64_t d,
                   std::vector<std::uint8_t> bits);

// Seeded product-measure sample: row i, column j is Bernoulli(pvec[j]).
Sample draw_product_sample(std::span<const double> pvec, std::int64_t n,
                           std::uint64_t seed, std::uint32_t stream);

// Dense CSV of 0/1 entries, one row per line.
Sample load_dense_csv(const std::string& path);
void save_dense_csv(const Sample& s, const std::string& path);
// Sparse coordinate list: first line "n d", then one "row col" pair
// (1-indexed) per line for each one-entry.
Sample load_coordinate_list(const std::string& path);

// Majority orientation from the second sample: a(j) = 1 iff the column sum
// strictly exceeds n/2 (ties give 0).
std::vector<std::uint8_t> orientation(const Sample& sample2);

// p_tilde(j) = (1-a(j)) p_hat(j) + a(j) (1 - p_hat(j)) with p_hat the column
// means of sample1.
std::vector<double> reoriented_mean(const Sample& sample1,
                                    std::span<const std::uint8_t> a);

struct BoundReport {
  double delta = 0.0;    // confidence parameter
  double s_value = 0.0;  // S of the sorted reoriented mean
  double bound = 0.0;
  std::vector<std::uint8_t> a;
  std::vector<double> tilde_p_sorted;

  nlohmann::json to_json() const;
};

BoundReport empirical_bound(const Sample& sample1, const Sample& sample2,
                            double delta);
// Same report for a caller-chosen orientation (the bound holds for any a).
BoundReport empirical_bound_with_orientation(const Sample& sample1,
                                             std::span<const std::uint8_t> a,
                                             double delta);

// Deterministic halving of a 2n-row sample into two independent halves.
std::pair<Sample, Sample> split_halves(const Sample& s);

// Monte Carlo average over R sign vectors of
// sup_j |n^-1 sum_i eps_i f_j(X_i)| with f_j(x) = (1-a_j) x_j + a_j (1-x_j).
double empirical_rademacher(const Sample& sample,
                            std::span<const std::uint8_t> a, std::int64_t R,
                            std::uint64_t seed);
double empirical_rademacher_serial(const Sample& sample,
                                   std::span<const std::uint8_t> a,
                                   std::int64_t R, std::uint64_t seed);

}  // namespace lgc::estimator
