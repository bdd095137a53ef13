#include "lgc/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace lgc::rng {

namespace {

constexpr std::uint32_t kPhiloxM0 = 0xD2511F53u;
constexpr std::uint32_t kPhiloxM1 = 0xCD9E8D57u;
constexpr std::uint32_t kPhiloxW0 = 0x9E3779B9u;
constexpr std::uint32_t kPhiloxW1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                    std::uint32_t& lo) {
  std::uint64_t prod = static_cast<std::uint64_t>(a) * b;
  hi = static_cast<std::uint32_t>(prod >> 32);
  lo = static_cast<std::uint32_t>(prod);
}

inline std::array<std::uint32_t, 4> philox_round(
    const std::array<std::uint32_t, 4>& c,
    const std::array<std::uint32_t, 2>& k) {
  std::uint32_t hi0, lo0, hi1, lo1;
  mulhilo(kPhiloxM0, c[0], hi0, lo0);
  mulhilo(kPhiloxM1, c[2], hi1, lo1);
  return {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
}

}  // namespace

std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key) {
  for (int round = 0; round < 10; ++round) {
    ctr = philox_round(ctr, key);
    key[0] += kPhiloxW0;
    key[1] += kPhiloxW1;
  }
  return ctr;
}

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t replicate,
                       std::uint64_t coordinate, std::uint32_t domain)
    : key_{static_cast<std::uint32_t>(seed),
           static_cast<std::uint32_t>(seed >> 32)},
      replicate_(static_cast<std::uint32_t>(replicate)),
      coordinate_(static_cast<std::uint32_t>(coordinate)),
      domain_(domain) {
  if (replicate >> 32 || coordinate >> 32) {
    throw std::invalid_argument("CounterRng: replicate/coordinate exceed 2^32");
  }
}

std::uint64_t CounterRng::next_u64() {
  if (have_ < 2) {
    buf_ = philox4x32({block_++, replicate_, coordinate_, domain_}, key_);
    have_ = 4;
  }
  have_ -= 2;
  return static_cast<std::uint64_t>(buf_[have_]) |
         (static_cast<std::uint64_t>(buf_[have_ + 1]) << 32);
}

double CounterRng::next_uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double stirling_tail(double k) {
  // log(k!) minus its Stirling approximation; table for small k, series above.
  static const double kTable[] = {
      0.0810614667953272,  0.0413406959554092,  0.0276779256849983,
      0.02079067210376509, 0.0166446911898211,  0.0138761288230707,
      0.0118967099458917,  0.0104112652619720,  0.00925546218271273,
      0.00833056343336287};
  if (k <= 9.0) return kTable[static_cast<int>(k)];
  double kp1sq = (k + 1) * (k + 1);
  return (1.0 / 12 - (1.0 / 360 - 1.0 / 1260 / kp1sq) / kp1sq) / (k + 1);
}

int binomial_inversion(int n, double p, CounterRng& rng) {
  double u = rng.next_uniform();
  double q = std::exp(n * std::log1p(-p));  // pmf at 0; no underflow for p <= 1/2, n <= 1021
  double cum = q;
  double r = p / (1.0 - p);
  int k = 0;
  while (u >= cum && k < n) {
    ++k;
    q *= r * (n - k + 1) / k;
    cum += q;
  }
  return k;
}

int binomial_btrs(int n, double p, CounterRng& rng) {
  // Hormann's transformed rejection with squeeze; exact, requires np >= 10.
  const double np = n * p;
  const double spq = std::sqrt(np * (1.0 - p));
  const double b = 1.15 + 2.53 * spq;
  const double a = -0.0873 + 0.0248 * b + 0.01 * p;
  const double c = np + 0.5;
  const double vr = 0.92 - 4.2 / b;
  const double r = p / (1.0 - p);
  const double alpha = (2.83 + 5.1 / b) * spq;
  const double m = std::floor((n + 1) * p);
  for (;;) {
    double u = rng.next_uniform() - 0.5;
    double v = rng.next_uniform();
    double us = 0.5 - std::fabs(u);
    double kd = std::floor((2.0 * a / us + b) * u + c);
    if (kd < 0 || kd > n) continue;
    if (us >= 0.07 && v <= vr) return static_cast<int>(kd);
    v = std::log(v * alpha / (a / (us * us) + b));
    double ub = (m + 0.5) * std::log((m + 1) / (r * (n - m + 1))) +
                (n + 1) * std::log((n - m + 1) / (n - kd + 1)) +
                (kd + 0.5) * std::log(r * (n - kd + 1) / (kd + 1)) +
                stirling_tail(m) + stirling_tail(n - m) - stirling_tail(kd) -
                stirling_tail(n - kd);
    if (v <= ub) return static_cast<int>(kd);
  }
}

int sample_binomial(int n, double p, CounterRng& rng) {
  if (n <= 1000 || n * p < 10.0) return binomial_inversion(n, p, rng);
  return binomial_btrs(n, p, rng);
}

}  // namespace lgc::rng
