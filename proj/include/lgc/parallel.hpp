#pragma once

#include <cstdint>
#include <span>

// Deterministic parallelism helpers. The contract everywhere in this repo is
// that a parallel kernel writes per-index results to disjoint slots and any
// reduction happens afterwards in fixed index order, so results are bitwise
// independent of the number of workers.

namespace lgc {

template <typename F>
void parallel_for_index(std::int64_t n, F&& f) {
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < n; ++i) {
    f(i);
  }
}

// Compensated (Kahan) summation in index order.
inline double kahan_sum(std::span<const double> xs) {
  double s = 0.0, c = 0.0;
  for (double x : xs) {
    double y = x - c;
    double t = s + y;
    c = (t - s) - y;
    s = t;
  }
  return s;
}

class KahanAccumulator {
 public:
  void add(double x) {
    double y = x - c_;
    double t = s_ + y;
    c_ = (t - s_) - y;
    s_ = t;
  }
  double value() const { return s_; }

 private:
  double s_ = 0.0;
  double c_ = 0.0;
};

}  // namespace lgc
