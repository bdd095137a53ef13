#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

// Decreasing mean sequences p : N -> (0, 1/2] and the functionals that govern
// the dimension-free behaviour of the expected sup deviation:
//
//   S(p) = sup_j p(j) log(j+1)
//   T(p) = sup_j log(j+1) / log(1/p(j))
//
// plus entropy and the power-sum criterion inf_k sum_j p(j)^k < inf, whose
// finiteness is equivalent to T < inf on decreasing sequences.
//
// All sequences are reduced into (0, 1/2] at construction: values in (1/2, 1)
// reflect to 1-p, and analytic families cap at 1/2. Index origin is j = 1.

namespace lgc::seq {

enum class Family { kPowerLaw, kGeometric, kFinite, kLogInverse, kCustom };

struct Bracket {
  double lo = 0.0;
  double hi = 0.0;
};

// Family-specific analytic tail metadata for the S / T suprema over j > J.
struct TailSupInfo {
  double sup_bound = 0.0;   // upper bound on the tail supremum (+inf if unknown)
  bool sup_is_limit = false;  // the global sup equals sup_bound but is only
                              // approached as j -> inf (never attained)
  bool divergent = false;     // the tail supremum is provably +inf
};

struct CustomSpec {
  std::function<double(std::int64_t)> eval;  // raw mean; reduced at query time
  // Optional upper bound on sum_{j>J} p(j); +inf when absent.
  std::function<double(std::int64_t)> tail_sum_bound;
};

class MeanSequence {
 public:
  static MeanSequence power_law(double T);
  static MeanSequence geometric(double c, double rho);
  static MeanSequence finite(std::vector<double> values);
  static MeanSequence log_inverse(std::int64_t offset);
  static MeanSequence custom(CustomSpec spec);

  Family family() const { return family_; }

  // p(j), j >= 1. Throws std::out_of_range past the end of a finite vector.
  double eval(std::int64_t j) const;

  // Number of coordinates for the finite family, nullopt otherwise.
  std::optional<std::int64_t> dimension() const;

  // Upper bound on sum_{j>J} p(j); +inf when the tail sum diverges or the
  // family carries no majorant. Monotone nonincreasing in J.
  double tail_sum_bound(std::int64_t J) const;

  // sup_{j>J} p(j) = p(J+1) for decreasing sequences; 0 past a finite end.
  double tail_sup_bound(std::int64_t J) const;

  // Bracket for sum_{j>J} p(j)^k. {+inf, +inf} when provably divergent.
  Bracket tail_power_sum(std::int64_t J, int k) const;

  // Tail metadata for sup_{j>J} p(j) log(j+1) and
  // sup_{j>J} log(j+1)/log(1/p(j)).
  TailSupInfo s_tail_info(std::int64_t J) const;
  TailSupInfo t_tail_info(std::int64_t J) const;

  // Upper bound on sum_{j>J} h(p(j)) with h the Bernoulli entropy.
  double entropy_tail_bound(std::int64_t J) const;

  nlohmann::json to_json() const;
  static MeanSequence from_json(const nlohmann::json& j);
  std::string describe() const;

  // Finite family over the first J coordinates of this sequence.
  MeanSequence truncate(std::int64_t J) const;

 private:
  MeanSequence() = default;

  Family family_ = Family::kFinite;
  double T_ = 0.0;                 // power law
  double c_ = 0.0, rho_ = 0.0;     // geometric
  std::int64_t offset_ = 0;        // log inverse
  std::vector<double> values_;     // finite
  CustomSpec custom_;

  // First index from which the S / T terms are nonincreasing (geometric).
  std::int64_t geometric_s_peak() const;
  std::int64_t geometric_t_peak() const;
};

struct FunctionalValue {
  double value = 0.0;
  std::optional<std::int64_t> argmax_index;  // none when the sup is a limit
  std::int64_t prefix_J = 0;
  bool tail_certified = false;  // value provably equals the full supremum
};

// S over the first J terms, with family-specific tail certification. When a
// family's supremum is approached only in the limit, the limiting value is
// reported with no argmax.
FunctionalValue s_functional(const MeanSequence& p, std::int64_t J);

// T over the first J terms; +inf (uncertified) when the family majorant shows
// the ratio diverges.
FunctionalValue t_functional(const MeanSequence& p, std::int64_t J);

struct EntropyResult {
  double partial = 0.0;
  double tail_upper = 0.0;  // may be +inf
};
EntropyResult entropy(const MeanSequence& p, std::int64_t J);

struct ConditionBResult {
  double partial_sum = 0.0;
  Bracket tail;
};
ConditionBResult condition_b_partial(const MeanSequence& p, int k,
                                     std::int64_t J);

// Exact power sum of a raw vector (order-independent up to rounding).
double power_sum(std::span<const double> v, int k);

// Optimal sub-Gaussian variance proxy of Bernoulli(q); the removable
// singularity at q = 1/2 evaluates to 1/4.
double sigma2_proxy(double q);

std::vector<double> sort_decreasing(std::vector<double> v);

// max_j v(j) log(j+1) for an already-decreasing vector with entries in [0,1].
// This is the estimator-facing S: no reduction into (0,1/2] is applied.
double s_of_sorted(std::span<const double> decreasing);

}  // namespace lgc::seq
