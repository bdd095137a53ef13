#include "lgc/rng.hpp"

#include <cmath>
#include <vector>

#include "doctest.h"
#include "lgc/exact.hpp"

using namespace lgc;

TEST_CASE("philox4x32-10 known-answer vectors") {
  // Published test vectors for the 10-round 4x32 configuration.
  auto r1 = rng::philox4x32({0, 0, 0, 0}, {0, 0});
  CHECK(r1 == std::array<std::uint32_t, 4>{0x6627e8d5u, 0xe169c58du,
                                           0xbc57ac4cu, 0x9b00dbd8u});
  auto r2 = rng::philox4x32({0xffffffffu, 0xffffffffu, 0xffffffffu, 0xffffffffu},
                            {0xffffffffu, 0xffffffffu});
  CHECK(r2 == std::array<std::uint32_t, 4>{0x408f276du, 0x41c83b0eu,
                                           0xa20bc7c6u, 0x6d5451fdu});
  auto r3 = rng::philox4x32({0x243f6a88u, 0x85a308d3u, 0x13198a2eu, 0x03707344u},
                            {0xa4093822u, 0x299f31d0u});
  CHECK(r3 == std::array<std::uint32_t, 4>{0xd16cfe09u, 0x94fdccebu,
                                           0x5001e420u, 0x24126ea1u});
}

TEST_CASE("counter streams are reproducible and distinct") {
  rng::CounterRng a(42, 3, 7, 0);
  rng::CounterRng b(42, 3, 7, 0);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

  rng::CounterRng c(42, 3, 8, 0);
  rng::CounterRng d(42, 4, 7, 0);
  rng::CounterRng e(43, 3, 7, 0);
  rng::CounterRng f(42, 3, 7, 1);
  rng::CounterRng base(42, 3, 7, 0);
  std::uint64_t first = base.next_u64();
  CHECK(c.next_u64() != first);
  CHECK(d.next_u64() != first);
  CHECK(e.next_u64() != first);
  CHECK(f.next_u64() != first);
}

TEST_CASE("uniforms live in [0,1) with sane mean") {
  rng::CounterRng g(1, 0, 0, 0);
  double sum = 0.0;
  const int N = 100000;
  for (int i = 0; i < N; ++i) {
    double u = g.next_uniform();
    REQUIRE(u >= 0.0);
    REQUIRE(u < 1.0);
    sum += u;
  }
  CHECK(std::fabs(sum / N - 0.5) < 0.005);
}

TEST_CASE("stirling tail matches log-gamma") {
  for (double k : {0.0, 1.0, 5.0, 9.0, 10.0, 37.0, 200.0, 5000.0}) {
    double exact = std::lgamma(k + 1.0) -
                   (0.5 * std::log(2.0 * M_PI) +
                    (k + 0.5) * std::log(k + 1.0) - (k + 1.0));
    CHECK(rng::stirling_tail(k) == doctest::Approx(exact).epsilon(1e-9));
  }
}

namespace {

// Chi-square goodness of fit of sampled frequencies against the exact pmf,
// pooling bins with tiny expected counts.
double chi_square_stat(int n, double p, long draws, std::uint64_t seed) {
  std::vector<long> counts(static_cast<std::size_t>(n) + 1, 0);
  for (long i = 0; i < draws; ++i) {
    rng::CounterRng g(seed, static_cast<std::uint64_t>(i), 0, 0);
    ++counts[static_cast<std::size_t>(rng::sample_binomial(n, p, g))];
  }
  exact::BinomialTable tab = exact::binomial_table(n, p);
  double stat = 0.0;
  double pool_exp = 0.0;
  long pool_obs = 0;
  int cells = 0;
  for (int k = 0; k <= n; ++k) {
    pool_exp += draws * tab.pmf(k);
    pool_obs += counts[static_cast<std::size_t>(k)];
    if (pool_exp >= 10.0) {
      double d = pool_obs - pool_exp;
      stat += d * d / pool_exp;
      pool_exp = 0.0;
      pool_obs = 0;
      ++cells;
    }
  }
  if (pool_exp > 0.0 && cells > 0) {
    double d = pool_obs - pool_exp;
    stat += d * d / pool_exp;
  }
  return stat;
}

}  // namespace

TEST_CASE("binomial samplers match the exact pmf") {
  // Inversion regime (n <= 1000) and the rejection regime (n > 1000, np >= 10).
  // Thresholds are generous chi-square quantiles for the pooled cell counts.
  CHECK(chi_square_stat(20, 0.3, 60000, 11) < 60.0);
  CHECK(chi_square_stat(50, 0.5, 60000, 12) < 100.0);
  CHECK(chi_square_stat(5000, 0.01, 40000, 13) < 130.0);   // BTRS, np = 50
  CHECK(chi_square_stat(2000, 0.4, 40000, 14) < 200.0);    // BTRS, np = 800
  CHECK(chi_square_stat(1500, 0.004, 40000, 15) < 60.0);   // inversion, np = 6
}

TEST_CASE("sampler selection is deterministic in (n, p)") {
  rng::CounterRng g1(5, 0, 0, 0), g2(5, 0, 0, 0);
  CHECK(rng::sample_binomial(400, 0.2, g1) == rng::sample_binomial(400, 0.2, g2));
  rng::CounterRng g3(5, 1, 0, 0), g4(5, 1, 0, 0);
  CHECK(rng::sample_binomial(4096, 0.3, g3) ==
        rng::sample_binomial(4096, 0.3, g4));
}

TEST_CASE("btrs acceptance identity: pmf ratio from stirling tails") {
  // The rejection test compares log(v ...) against
  // log pmf(k) - log pmf(m) written via stirling tails; check that identity.
  for (auto [n, p] : std::vector<std::pair<int, double>>{{2000, 0.01},
                                                         {5000, 0.4},
                                                         {1200, 0.1}}) {
    exact::BinomialTable tab = exact::binomial_table(n, p);
    double r = p / (1 - p);
    double m = std::floor((n + 1) * p);
    for (int k : {static_cast<int>(m) - 7, static_cast<int>(m) + 11,
                  static_cast<int>(m) + 40}) {
      double kd = k;
      double ub = (m + 0.5) * std::log((m + 1) / (r * (n - m + 1))) +
                  (n + 1) * std::log((n - m + 1) / (n - kd + 1)) +
                  (kd + 0.5) * std::log(r * (n - kd + 1) / (kd + 1)) +
                  rng::stirling_tail(m) + rng::stirling_tail(n - m) -
                  rng::stirling_tail(kd) - rng::stirling_tail(n - kd);
      double direct = tab.log_pmf[static_cast<std::size_t>(k)] -
                      tab.log_pmf[static_cast<std::size_t>(static_cast<int>(m))];
      CHECK(ub == doctest::Approx(direct).epsilon(1e-8));
    }
  }
}
