#include "lgc/mc.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lgc/parallel.hpp"
#include "lgc/rng.hpp"

namespace lgc::mc {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double binomial_coeff(int n, int m) {
  double c = 1.0;
  for (int i = 0; i < m; ++i) c = c * (n - i) / (i + 1);
  return c;
}

// One replicate: sup over simulated coordinates, floored by the exact tail
// contribution p(J+1) on the event that no tail coordinate sees m ones.
double replicate_value(std::span<const double> pvec, int n, double tail_sup,
                       std::uint64_t seed, std::int64_t r) {
  double m = tail_sup;
  for (std::size_t j = 0; j < pvec.size(); ++j) {
    rng::CounterRng g(seed, static_cast<std::uint64_t>(r), j + 1,
                      rng::kDomainBinomial);
    int b = rng::sample_binomial(n, pvec[j], g);
    m = std::max(m, std::fabs(static_cast<double>(b) / n - pvec[j]));
  }
  return m;
}

struct Prepared {
  TruncationPlan plan;
  std::vector<double> pvec;
  double tail_sup = 0.0;
};

Prepared prepare(const seq::MeanSequence& p, const SimConfig& cfg) {
  cfg.validate();
  Prepared out;
  out.plan = choose_truncation(p, cfg.n, cfg.tail_tolerance, cfg.max_truncation);
  out.pvec.reserve(static_cast<std::size_t>(out.plan.J));
  for (std::int64_t j = 1; j <= out.plan.J; ++j) out.pvec.push_back(p.eval(j));
  out.tail_sup = p.tail_sup_bound(out.plan.J);
  return out;
}

std::vector<double> replicate_values(const Prepared& prep, const SimConfig& cfg,
                                     bool parallel) {
  std::vector<double> values(static_cast<std::size_t>(cfg.replicates));
  auto one = [&](std::int64_t r) {
    values[static_cast<std::size_t>(r)] =
        replicate_value(prep.pvec, cfg.n, prep.tail_sup, cfg.seed, r);
  };
  if (parallel) {
    parallel_for_index(cfg.replicates, one);
  } else {
    for (std::int64_t r = 0; r < cfg.replicates; ++r) one(r);
  }
  return values;
}

DeltaEstimate estimate_from_values(const Prepared& prep, const SimConfig& cfg,
                                   std::span<const double> values) {
  DeltaEstimate est;
  est.mean = kahan_sum(values) / static_cast<double>(cfg.replicates);
  est.ci_halfwidth = std::sqrt(std::log(2.0 / (1.0 - cfg.confidence)) /
                               (2.0 * static_cast<double>(cfg.replicates)));
  est.J_used = prep.plan.J;
  est.tail_event_bound = prep.plan.tail_event_bound;
  const int m = prep.plan.ones_level;
  if (m <= 1) {
    // No tail (m = 0) or a tail with surely-zero coordinates on the good
    // event (m = 1): the replicate value is exact there.
    est.bracket_lo = est.mean;
    est.bracket_hi = est.mean + prep.plan.tail_event_bound;
  } else {
    // Good-event tail deviations lie within (m-1)/n of the p(J+1) surrogate.
    double slack = static_cast<double>(m - 1) / cfg.n;
    est.bracket_lo = std::max(0.0, est.mean - std::min(slack, prep.tail_sup));
    est.bracket_hi = est.mean + slack + prep.plan.tail_event_bound;
  }
  return est;
}

}  // namespace

void SimConfig::validate() const {
  if (n < 1) throw std::invalid_argument("SimConfig: n >= 1 required");
  if (replicates < 1) {
    throw std::invalid_argument("SimConfig: replicates >= 1 required");
  }
  if (!(tail_tolerance > 0.0) || tail_tolerance > 1.0) {
    throw std::invalid_argument("SimConfig: tail_tolerance must lie in (0,1]");
  }
  if (max_truncation < 1) {
    throw std::invalid_argument("SimConfig: max_truncation >= 1 required");
  }
  if (!(confidence > 0.0) || !(confidence < 1.0)) {
    throw std::invalid_argument("SimConfig: confidence must lie in (0,1)");
  }
}

TruncationPlan choose_truncation(const seq::MeanSequence& p, int n,
                                 double tail_tolerance,
                                 std::int64_t max_truncation) {
  if (auto d = p.dimension()) {
    return {*d, 0.0, 0};
  }
  for (int m = 1; m <= 3; ++m) {
    const double cnm = binomial_coeff(n, m);
    auto bound = [&](std::int64_t J) {
      return cnm * p.tail_power_sum(J, m).hi;
    };
    if (!(bound(max_truncation) <= tail_tolerance)) continue;
    std::int64_t lo = 1, hi = max_truncation;
    while (lo < hi) {
      std::int64_t mid = lo + (hi - lo) / 2;
      if (bound(mid) <= tail_tolerance) {
        hi = mid;
      } else {
        lo = mid + 1;
      }
    }
    return {lo, bound(lo), m};
  }
  throw TruncationError(
      "choose_truncation: no ones-level m <= 3 satisfies the tail tolerance "
      "within max_truncation for " +
      p.describe());
}

DeltaEstimate simulate_delta(const seq::MeanSequence& p, const SimConfig& cfg) {
  Prepared prep = prepare(p, cfg);
  std::vector<double> values = replicate_values(prep, cfg, true);
  return estimate_from_values(prep, cfg, values);
}

DeltaEstimate simulate_delta_serial(const seq::MeanSequence& p,
                                    const SimConfig& cfg) {
  Prepared prep = prepare(p, cfg);
  std::vector<double> values = replicate_values(prep, cfg, false);
  return estimate_from_values(prep, cfg, values);
}

std::vector<double> sup_deviation_samples(const seq::MeanSequence& p,
                                          const SimConfig& cfg) {
  Prepared prep = prepare(p, cfg);
  return replicate_values(prep, cfg, true);
}

nlohmann::json DeltaEstimate::to_json(const seq::MeanSequence& p,
                                      const SimConfig& cfg) const {
  return nlohmann::json{{"family", p.to_json()},
                        {"n", cfg.n},
                        {"R", cfg.replicates},
                        {"seed", cfg.seed},
                        {"J", J_used},
                        {"mean", mean},
                        {"ci", ci_halfwidth},
                        {"bracket_lo", bracket_lo},
                        {"bracket_hi", bracket_hi}};
}

}  // namespace lgc::mc
