// Wall-clock comparison of the OpenMP kernels against their serial reference
// implementations. Also asserts that both produce identical bits.

#include <omp.h>

#include <cstdio>
#include <cstdlib>
#include <cstring>

#include "lgc/estimator.hpp"
#include "lgc/exact.hpp"
#include "lgc/ineq.hpp"
#include "lgc/mc.hpp"
#include "lgc/seq.hpp"

namespace {

template <typename F>
double time_s(F&& f) {
  double t0 = omp_get_wtime();
  f();
  return omp_get_wtime() - t0;
}

void report(const char* name, double serial, double parallel, bool identical) {
  std::printf("%-24s serial %8.3fs   omp %8.3fs   speedup %5.2fx   %s\n", name,
              serial, parallel, serial / parallel,
              identical ? "identical" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
  if (argc > 1) omp_set_num_threads(std::atoi(argv[1]));
  std::printf("threads: %d\n", omp_get_max_threads());

  using namespace lgc;

  {
    auto p = seq::MeanSequence::power_law(0.5);
    mc::SimConfig cfg;
    cfg.n = 100;
    cfg.replicates = 2000;
    cfg.seed = 7;
    mc::DeltaEstimate a, b;
    double ts = time_s([&] { a = mc::simulate_delta_serial(p, cfg); });
    double tp = time_s([&] { b = mc::simulate_delta(p, cfg); });
    report("simulate_delta", ts, tp,
           std::memcmp(&a.mean, &b.mean, sizeof a.mean) == 0 &&
               a.bracket_hi == b.bracket_hi);
  }

  {
    std::vector<ineq::Certificate> a, b;
    double ts = time_s([&] { a = ineq::certify_subgamma_grid_serial(); });
    double tp = time_s([&] { b = ineq::certify_subgamma_grid(); });
    bool same = a.size() == b.size();
    for (std::size_t i = 0; same && i < a.size(); ++i) {
      same = a[i].margin == b[i].margin && a[i].pass == b[i].pass;
    }
    report("subgamma_grid", ts, tp, same);
  }

  {
    auto fam = seq::MeanSequence::power_law(2.0);
    std::vector<double> pvec;
    for (int j = 1; j <= 400; ++j) pvec.push_back(fam.eval(j));
    double a = 0, b = 0;
    double ts = time_s([&] { a = exact::delta_n_serial(pvec, 2048); });
    double tp = time_s([&] { b = exact::delta_n(pvec, 2048); });
    report("exact_delta_n", ts, tp, a == b);
  }

  {
    auto fam = seq::MeanSequence::power_law(2.0);
    std::vector<double> pvec;
    for (int j = 1; j <= 64; ++j) pvec.push_back(fam.eval(j));
    auto s = estimator::draw_product_sample(pvec, 400, 11, 0);
    std::vector<std::uint8_t> orient(pvec.size(), 0);
    double a = 0, b = 0;
    double ts = time_s(
        [&] { a = estimator::empirical_rademacher_serial(s, orient, 2000, 3); });
    double tp =
        time_s([&] { b = estimator::empirical_rademacher(s, orient, 2000, 3); });
    report("empirical_rademacher", ts, tp, a == b);
  }

  return 0;
}
