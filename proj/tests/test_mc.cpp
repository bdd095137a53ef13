#include "lgc/mc.hpp"

#include <omp.h>

#include <cmath>

#include "doctest.h"
#include "lgc/exact.hpp"

using namespace lgc;
using seq::MeanSequence;

namespace {

mc::SimConfig cfg_of(int n, std::int64_t R, std::uint64_t seed) {
  mc::SimConfig cfg;
  cfg.n = n;
  cfg.replicates = R;
  cfg.seed = seed;
  return cfg;
}

}  // namespace

TEST_CASE("choose_truncation: finite family has no tail") {
  auto plan = mc::choose_truncation(MeanSequence::finite({0.5, 0.2}), 10, 1e-3,
                                    1 << 20);
  CHECK(plan.J == 2);
  CHECK(plan.tail_event_bound == 0.0);
  CHECK(plan.ones_level == 0);
}

TEST_CASE("choose_truncation: summable tail via the one-ones criterion") {
  // p(j) = (j+1)^-2: n * 1/(J+1) <= 1e-3 at n=100 forces J ~ 1e5
  auto plan = mc::choose_truncation(MeanSequence::power_law(0.5), 100, 1e-3,
                                    1 << 20);
  CHECK(plan.ones_level == 1);
  CHECK(plan.J == 99999);
  CHECK(plan.tail_event_bound <= 1e-3);
}

TEST_CASE("choose_truncation: non-summable powers fail the ladder") {
  CHECK_THROWS_AS((void)mc::choose_truncation(MeanSequence::power_law(2.0), 16,
                                              1e-3, 1 << 20),
                  mc::TruncationError);
  CHECK_THROWS_AS((void)mc::choose_truncation(MeanSequence::log_inverse(2), 16,
                                              1e-3, 1 << 20),
                  mc::TruncationError);
}

TEST_CASE("choose_truncation: two-ones level engages when sums diverge") {
  // p(j) = (j+1)^{-1/0.9}: sum p diverges? 1/T = 1.111 > 1 so it converges.
  // Use T = 1.2: sum p diverges (exponent 0.833), sum p^2 converges (1.67).
  auto plan = mc::choose_truncation(MeanSequence::power_law(1.2), 8, 1e-2,
                                    1 << 24);
  CHECK(plan.ones_level == 2);
  CHECK(plan.tail_event_bound <= 1e-2);
}

TEST_CASE("degenerate single fair coin at n=1") {
  auto est = mc::simulate_delta(MeanSequence::finite({0.5}), cfg_of(1, 2000, 9));
  CHECK(est.mean == 0.5);  // every replicate deviates by exactly 1/2
  CHECK(est.bracket_lo == 0.5);
  CHECK(est.bracket_hi == 0.5);
  auto samples =
      mc::sup_deviation_samples(MeanSequence::finite({0.5}), cfg_of(1, 50, 9));
  for (double v : samples) CHECK(v == 0.5);
}

TEST_CASE("replicate values live in [0,1] and the mean sits in the bracket") {
  auto p = MeanSequence::finite({0.5, 0.5, 0.3, 0.2, 0.1});
  auto cfg = cfg_of(20, 500, 123);
  auto samples = mc::sup_deviation_samples(p, cfg);
  for (double v : samples) {
    CHECK(v >= 0.0);
    CHECK(v <= 1.0);
  }
  auto est = mc::simulate_delta(p, cfg);
  CHECK(est.bracket_lo <= est.mean);
  CHECK(est.mean <= est.bracket_hi);
}

TEST_CASE("mc agrees with the exact oracle within 3 ci") {
  auto p = MeanSequence::finite({0.5, 0.5, 0.3, 0.2, 0.1});
  std::vector<double> pvec{0.5, 0.5, 0.3, 0.2, 0.1};
  double ex = exact::delta_n(pvec, 20);
  auto est = mc::simulate_delta(p, cfg_of(20, 100000, 2024));
  CHECK(std::fabs(est.mean - ex) <= 3.0 * est.ci_halfwidth);
}

TEST_CASE("hoeffding ci halfwidth formula") {
  auto est = mc::simulate_delta(MeanSequence::finite({0.3}), cfg_of(5, 1000, 1));
  CHECK(est.ci_halfwidth ==
        doctest::Approx(std::sqrt(std::log(2.0 / 0.05) / 2000.0))
            .epsilon(1e-15));
}

TEST_CASE("empirical distribution for a fair coin at n=2") {
  // sup deviation takes values 0 (B=1) or 1/2 (B in {0,2}), each w.p. 1/2
  auto samples =
      mc::sup_deviation_samples(MeanSequence::finite({0.5}), cfg_of(2, 40000, 5));
  std::int64_t zeros = 0, halves = 0;
  for (double v : samples) {
    if (v == 0.0) ++zeros;
    if (v == 0.5) ++halves;
  }
  CHECK(zeros + halves == 40000);
  CHECK(std::fabs(zeros / 40000.0 - 0.5) < 0.01);
}

TEST_CASE("mcdiarmid upper tail of the sup deviation") {
  auto p = MeanSequence::finite(std::vector<double>(4, 0.5));
  auto cfg = cfg_of(100, 20000, 77);
  auto samples = mc::sup_deviation_samples(p, cfg);
  double mean = 0.0;
  for (double v : samples) mean += v;
  mean /= static_cast<double>(samples.size());
  const double eps = 0.1;
  double frac = 0.0;
  for (double v : samples) frac += (v >= mean + eps) ? 1.0 : 0.0;
  frac /= static_cast<double>(samples.size());
  double slack = 3.0 * std::sqrt(0.25 / static_cast<double>(samples.size()));
  CHECK(frac <= std::exp(-2.0 * cfg.n * eps * eps) + slack);
}

TEST_CASE("determinism: serial, parallel, and worker counts all match") {
  auto p = MeanSequence::power_law(0.5);
  auto cfg = cfg_of(50, 400, 31);
  cfg.tail_tolerance = 1e-2;
  auto a = mc::simulate_delta_serial(p, cfg);
  int saved = omp_get_max_threads();
  omp_set_num_threads(1);
  auto b = mc::simulate_delta(p, cfg);
  omp_set_num_threads(8);
  auto c = mc::simulate_delta(p, cfg);
  omp_set_num_threads(saved);
  CHECK(a.mean == b.mean);
  CHECK(b.mean == c.mean);
  CHECK(a.bracket_hi == c.bracket_hi);
  CHECK(a.J_used == c.J_used);
}

TEST_CASE("truncated tail bracket for a summable family") {
  auto p = MeanSequence::power_law(0.5);
  auto cfg = cfg_of(100, 200, 4);
  auto est = mc::simulate_delta(p, cfg);
  CHECK(est.tail_event_bound <= 1e-3);
  CHECK(est.bracket_hi - est.bracket_lo <= 1e-3 + 1e-15);
  CHECK(est.J_used == 99999);
}

TEST_CASE("monotone truncation on paired streams") {
  // identical coordinate streams: growing the prefix only adds coordinates
  auto p = MeanSequence::log_inverse(2);
  auto cfg = cfg_of(50, 300, 17);
  double prev_mean = 0.0;
  for (std::int64_t J : {100, 400, 1600}) {
    auto est = mc::simulate_delta(p.truncate(J), cfg);
    CHECK(est.mean >= prev_mean - 1e-12);
    prev_mean = est.mean;
  }
}

TEST_CASE("json record fields") {
  auto p = MeanSequence::finite({0.4});
  auto cfg = cfg_of(3, 10, 21);
  auto est = mc::simulate_delta(p, cfg);
  auto j = est.to_json(p, cfg);
  CHECK(j["n"] == 3);
  CHECK(j["R"] == 10);
  CHECK(j["seed"] == 21);
  CHECK(j["J"] == 1);
  CHECK(j.contains("mean"));
  CHECK(j.contains("bracket_lo"));
  CHECK(j.contains("bracket_hi"));
  CHECK(j["family"]["family"] == "finite");
}

TEST_CASE("config validation") {
  mc::SimConfig bad;
  bad.n = 0;
  bad.replicates = 1;
  CHECK_THROWS((void)mc::simulate_delta(MeanSequence::finite({0.1}), bad));
  bad.n = 1;
  bad.replicates = 0;
  CHECK_THROWS((void)mc::simulate_delta(MeanSequence::finite({0.1}), bad));
  bad.replicates = 1;
  bad.tail_tolerance = 0.0;
  CHECK_THROWS((void)mc::simulate_delta(MeanSequence::finite({0.1}), bad));
}
