#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "json.hpp"
#include "lgc/config.hpp"
#include "lgc/seq.hpp"

// Seeded Monte Carlo estimation of the expected sup deviation for finite and
// truncated-infinite product measures, with a certified truncation bracket.
// Randomness is counter-based per (seed, replicate, coordinate), so results
// are bitwise identical under any worker count.

namespace lgc::mc {

struct SimConfig {
  int n = 0;
  std::int64_t replicates = 0;
  std::uint64_t seed = 0;
  double tail_tolerance = config::kDefaultTailTolerance;
  std::int64_t max_truncation = config::kDefaultMaxTruncation;
  double confidence = config::kDefaultConfidence;

  void validate() const;
};

struct TruncationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Truncation chosen by the m-ones ladder: level m requires
// C(n,m) sum_{j>J} p(j)^m <= tail_tolerance; on the complement event every
// tail coordinate sees at most m-1 ones. m = 0 marks a finite family with no
// tail at all. Throws TruncationError when no m <= 3 is satisfiable within
// max_truncation.
struct TruncationPlan {
  std::int64_t J = 0;
  double tail_event_bound = 0.0;
  int ones_level = 0;
};

TruncationPlan choose_truncation(const seq::MeanSequence& p, int n,
                                 double tail_tolerance,
                                 std::int64_t max_truncation);

struct DeltaEstimate {
  double mean = 0.0;
  double ci_halfwidth = 0.0;  // Hoeffding, replicate values lie in [0,1]
  double bracket_lo = 0.0;    // certified truncation-bias bracket
  double bracket_hi = 0.0;
  std::int64_t J_used = 0;
  double tail_event_bound = 0.0;

  nlohmann::json to_json(const seq::MeanSequence& p, const SimConfig& cfg) const;
};

DeltaEstimate simulate_delta(const seq::MeanSequence& p, const SimConfig& cfg);
DeltaEstimate simulate_delta_serial(const seq::MeanSequence& p,
                                    const SimConfig& cfg);

// All replicate values M_r (same sampling as simulate_delta).
std::vector<double> sup_deviation_samples(const seq::MeanSequence& p,
                                          const SimConfig& cfg);

}  // namespace lgc::mc
