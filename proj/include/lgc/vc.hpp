#pragma once

#include <cstdint>
#include <string>
#include <vector>

// Coordinate-projection function class over the Boolean cube: explicit
// shattered-set construction and a desk-scale brute-force VC dimension,
// validating vc(F) = floor(log2 d) for F = {x -> x(j) : j <= d}.

namespace lgc::vc {

struct BinaryMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<std::uint8_t> bits;  // row-major

  std::uint8_t at(int r, int c) const {
    return bits[static_cast<std::size_t>(r) * cols + c];
  }
  // 0/1 string of one row.
  std::string row_string(int r) const;
};

// k x 2^k matrix whose column i encodes the integer i-1 in binary, most
// significant bit in row 1. Its rows are shattered by the coordinate
// projections. Requires 1 <= k <= 20.
BinaryMatrix shattered_set(int k);

// True iff the coordinate projections realize all 2^k labelings of the rows,
// i.e. the set of column patterns covers {0,1}^k. Requires k <= 20.
bool verify_shatter(const BinaryMatrix& points);

// Largest k such that some k-subset of cube points is shattered by the d
// coordinate projections. A point set matters only through the set of column
// patterns it induces, and any pattern assignment is realizable by a choice
// of points, so the exhaustive search runs over column-pattern subsets of
// size <= d. Desk-scale validation: requires 1 <= d <= 16.
int vc_bruteforce(int d);

}  // namespace lgc::vc
