#pragma once

#include <array>
#include <cstdint>

// Counter-based random streams (Philox4x32-10). A stream is keyed by
// (seed, replicate, coordinate, domain) and yields an unbounded sequence of
// words, so replicates and coordinates can be simulated under any parallel
// partitioning with bitwise-reproducible results.

namespace lgc::rng {

// One Philox4x32-10 block. Counter and key layouts follow the original
// specification; known-answer vectors are pinned in the tests.
std::array<std::uint32_t, 4> philox4x32(std::array<std::uint32_t, 4> ctr,
                                        std::array<std::uint32_t, 2> key);

class CounterRng {
 public:
  // replicate and coordinate must fit in 32 bits; domain separates
  // independent uses of the same (seed, replicate, coordinate) triple.
  CounterRng(std::uint64_t seed, std::uint64_t replicate,
             std::uint64_t coordinate, std::uint32_t domain);

  std::uint64_t next_u64();
  // Uniform on [0,1) with 53 random bits.
  double next_uniform();

 private:
  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 4> buf_{};
  std::uint32_t replicate_, coordinate_, domain_;
  std::uint32_t block_ = 0;
  int have_ = 0;  // unread 32-bit words left in buf_
};

// Stream domains used across the repo. Values 0..3 are reserved; callers that
// need several independent streams of one kind add multiples of 4.
inline constexpr std::uint32_t kDomainBinomial = 0;
inline constexpr std::uint32_t kDomainSample = 1;
inline constexpr std::uint32_t kDomainRademacher = 2;

// Exact Binomial(n, p) draw for p in (0, 1/2]. Sequential cdf inversion for
// n <= 1000 or small np, a transformed-rejection sampler otherwise; the
// choice is a deterministic function of (n, p).
int sample_binomial(int n, double p, CounterRng& rng);

// Exposed for tests.
int binomial_inversion(int n, double p, CounterRng& rng);
int binomial_btrs(int n, double p, CounterRng& rng);
double stirling_tail(double k);

}  // namespace lgc::rng
