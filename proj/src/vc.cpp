#include "lgc/vc.hpp"

#include <stdexcept>

namespace lgc::vc {

std::string BinaryMatrix::row_string(int r) const {
  std::string s(static_cast<std::size_t>(cols), '0');
  for (int c = 0; c < cols; ++c) {
    if (at(r, c)) s[static_cast<std::size_t>(c)] = '1';
  }
  return s;
}

BinaryMatrix shattered_set(int k) {
  if (k < 1 || k > 20) throw std::invalid_argument("shattered_set: 1 <= k <= 20");
  BinaryMatrix m;
  m.rows = k;
  m.cols = 1 << k;
  m.bits.resize(static_cast<std::size_t>(m.rows) * m.cols);
  for (int c = 0; c < m.cols; ++c) {
    for (int r = 0; r < k; ++r) {
      int bit = (c >> (k - 1 - r)) & 1;  // row 1 holds the most significant bit
      m.bits[static_cast<std::size_t>(r) * m.cols + c] =
          static_cast<std::uint8_t>(bit);
    }
  }
  return m;
}

bool verify_shatter(const BinaryMatrix& points) {
  const int k = points.rows;
  if (k < 1 || k > 20) throw std::invalid_argument("verify_shatter: 1 <= k <= 20");
  std::vector<bool> seen(static_cast<std::size_t>(1) << k, false);
  std::size_t covered = 0;
  for (int c = 0; c < points.cols; ++c) {
    std::uint32_t pattern = 0;
    for (int r = 0; r < k; ++r) pattern = (pattern << 1) | points.at(r, c);
    if (!seen[pattern]) {
      seen[pattern] = true;
      ++covered;
    }
  }
  return covered == (static_cast<std::size_t>(1) << k);
}

int vc_bruteforce(int d) {
  if (d < 1 || d > 16) throw std::invalid_argument("vc_bruteforce: 1 <= d <= 16");
  // A set of k points is shattered iff its d induced column patterns cover
  // {0,1}^k, and every assignment of patterns to the d columns is realizable
  // by some choice of points. The search therefore runs over subsets of the
  // pattern universe with at most d elements. Covering 2^k patterns needs at
  // least 2^k distinct columns, so k with 2^k > d is infeasible outright.
  int best = 0;
  for (int k = 1; (1 << k) <= d; ++k) {
    const int patterns = 1 << k;
    bool feasible = false;
    for (std::uint32_t subset = 0;
         subset < (1u << patterns) && !feasible; ++subset) {
      if (__builtin_popcount(subset) > d) continue;
      bool covers = true;
      for (int p = 0; p < patterns && covers; ++p) {
        covers = ((subset >> p) & 1u) != 0;
      }
      feasible = covers;
    }
    if (!feasible) break;
    best = k;
  }
  return best;
}

}  // namespace lgc::vc
