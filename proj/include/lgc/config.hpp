#pragma once

// Repo-wide numeric constants: certification grid densities, tolerances and
// simulation defaults. Tests and the CLI both read these, so changing a grid
// here changes it everywhere.

namespace lgc::config {

// Default tolerance for inequality certificates (pass <=> margin >= -tol).
inline constexpr double kCertTol = 1e-12;

// Monte Carlo defaults.
inline constexpr double kDefaultConfidence = 0.95;
inline constexpr double kDefaultTailTolerance = 1e-3;
inline constexpr long long kDefaultMaxTruncation = 1 << 20;

// Shifted-Bernoulli sub-gamma MGF certification grid:
// q log-spaced in [kSubgammaQMin, e^-3], s linear in [q, e^-3],
// t linear in [0, kSubgammaTFrac * t_max(q, s)].
inline constexpr int kSubgammaQPoints = 50;
inline constexpr int kSubgammaSPoints = 20;
inline constexpr int kSubgammaTPoints = 50;
inline constexpr double kSubgammaQMin = 1e-6;
inline constexpr double kSubgammaTFrac = 0.99;

// KL upper-bound grid: q linear in (0, 1/2], eps linear in [0, 1-q].
inline constexpr int kKlQPoints = 50;
inline constexpr int kKlEpsPoints = 50;

// Classical suite grids (all capped at n <= 200).
inline constexpr int kClassicalMaxN = 200;

// Left-closed breakpoint merge slack for the exact sup-deviation integral.
// Breakpoints are deduplicated by exact float equality after sorting; the
// residual error from distinct-but-adjacent floats is below this slack.
inline constexpr double kFloatDedupSlack = 1e-15;

}  // namespace lgc::config
