#include "lgc/estimator.hpp"

#include <omp.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "lgc/rng.hpp"
#include "lgc/seq.hpp"

using namespace lgc;
using estimator::Sample;

namespace {

Sample from_rows(std::vector<std::vector<int>> rows) {
  std::vector<std::uint8_t> bits;
  for (const auto& r : rows) {
    for (int v : r) bits.push_back(static_cast<std::uint8_t>(v));
  }
  return estimator::make_sample(static_cast<std::int64_t>(rows.size()),
                                static_cast<std::int64_t>(rows[0].size()),
                                std::move(bits));
}

}  // namespace

TEST_CASE("orientation majority rule with strict ties") {
  Sample zeros = from_rows({{0, 0}, {0, 0}});
  CHECK(estimator::orientation(zeros) == std::vector<std::uint8_t>{0, 0});

  // n=3, column sums (3,2,1) -> (1,1,0)
  Sample s = from_rows({{1, 1, 0}, {1, 1, 1}, {1, 0, 0}});
  CHECK(estimator::orientation(s) == std::vector<std::uint8_t>{1, 1, 0});

  // n=2, column sum 1: 1 > 1 is false, tie goes to 0
  Sample tie = from_rows({{1}, {0}});
  CHECK(estimator::orientation(tie) == std::vector<std::uint8_t>{0});
}

TEST_CASE("reoriented mean") {
  Sample s = from_rows({{1, 0}, {1, 0}, {1, 1}, {1, 0}, {1, 0},
                        {1, 0}, {1, 0}, {1, 0}, {1, 1}, {1, 0}});
  // p_hat = (1.0, 0.2)
  std::vector<std::uint8_t> id{0, 0};
  auto same = estimator::reoriented_mean(s, id);
  CHECK(same[0] == doctest::Approx(1.0));
  CHECK(same[1] == doctest::Approx(0.2));

  std::vector<std::uint8_t> flip{1, 0};
  auto r = estimator::reoriented_mean(s, flip);
  CHECK(r[0] == doctest::Approx(0.0));
  CHECK(r[1] == doctest::Approx(0.2));

  std::vector<std::uint8_t> wrong{1};
  CHECK_THROWS((void)estimator::reoriented_mean(s, wrong));
}

TEST_CASE("empirical bound on all-zero samples") {
  Sample z;
  z.n = 100;
  z.d = 5;
  z.bits.assign(500, 0);
  auto rep = estimator::empirical_bound(z, z, 0.05);
  CHECK(rep.s_value == 0.0);
  CHECK(rep.bound == doctest::Approx(0.4895493661361633).epsilon(1e-14));
}

TEST_CASE("bound reduces to the S term as delta approaches 1") {
  auto fam = seq::MeanSequence::power_law(2.0);
  std::vector<double> pvec;
  for (int j = 1; j <= 16; ++j) pvec.push_back(fam.eval(j));
  auto s1 = estimator::draw_product_sample(pvec, 64, 5, 0);
  auto s2 = estimator::draw_product_sample(pvec, 64, 5, 1);
  auto rep = estimator::empirical_bound(s1, s2, 1.0 - 1e-12);
  CHECK(rep.bound ==
        doctest::Approx(16.0 * std::sqrt(rep.s_value / 64.0)).epsilon(1e-6));
  CHECK_THROWS((void)estimator::empirical_bound(s1, s2, 0.0));
  CHECK_THROWS((void)estimator::empirical_bound(s1, s2, 1.0));
}

TEST_CASE("bound is monotone in s_value and log(1/delta)") {
  auto fam = seq::MeanSequence::power_law(2.0);
  std::vector<double> pvec;
  for (int j = 1; j <= 8; ++j) pvec.push_back(fam.eval(j));
  auto s1 = estimator::draw_product_sample(pvec, 32, 9, 0);
  auto s2 = estimator::draw_product_sample(pvec, 32, 9, 1);
  double prev = 0.0;
  for (double delta : {0.5, 0.2, 0.05, 0.01}) {
    double b = estimator::empirical_bound(s1, s2, delta).bound;
    CHECK(b >= prev);
    prev = b;
  }
}

TEST_CASE("joint column permutation leaves the bound unchanged") {
  auto fam = seq::MeanSequence::power_law(2.0);
  std::vector<double> pvec;
  for (int j = 1; j <= 6; ++j) pvec.push_back(fam.eval(j));
  auto s1 = estimator::draw_product_sample(pvec, 40, 77, 0);
  auto s2 = estimator::draw_product_sample(pvec, 40, 77, 1);
  double base = estimator::empirical_bound(s1, s2, 0.1).bound;

  std::vector<int> perm{3, 0, 5, 1, 4, 2};
  Sample p1, p2;
  p1.n = p2.n = s1.n;
  p1.d = p2.d = s1.d;
  p1.bits.resize(s1.bits.size());
  p2.bits.resize(s2.bits.size());
  for (std::int64_t i = 0; i < s1.n; ++i) {
    for (std::int64_t j = 0; j < s1.d; ++j) {
      p1.bits[static_cast<std::size_t>(i * s1.d + j)] =
          s1.at(i, perm[static_cast<std::size_t>(j)]);
      p2.bits[static_cast<std::size_t>(i * s2.d + j)] =
          s2.at(i, perm[static_cast<std::size_t>(j)]);
    }
  }
  CHECK(estimator::empirical_bound(p1, p2, 0.1).bound ==
        doctest::Approx(base).epsilon(1e-15));
}

TEST_CASE("joint bit flip flips clear-majority coordinates consistently") {
  auto fam = seq::MeanSequence::power_law(2.0);
  std::vector<double> pvec;
  for (int j = 1; j <= 6; ++j) pvec.push_back(fam.eval(j));
  auto s1 = estimator::draw_product_sample(pvec, 41, 13, 0);
  auto s2 = estimator::draw_product_sample(pvec, 41, 13, 1);
  auto a = estimator::orientation(s2);
  auto ptilde = estimator::reoriented_mean(s1, a);

  Sample f1 = s1, f2 = s2;
  for (auto& b : f1.bits) b ^= 1;
  for (auto& b : f2.bits) b ^= 1;
  auto af = estimator::orientation(f2);
  auto ptilde_f = estimator::reoriented_mean(f1, af);

  for (std::int64_t j = 0; j < s2.d; ++j) {
    std::int64_t colsum = 0;
    for (std::int64_t i = 0; i < s2.n; ++i) colsum += s2.at(i, j);
    // strict majority either way (n odd here, so always strict)
    if (2 * colsum != s2.n && 2 * (s2.n - colsum) != s2.n) {
      CHECK(af[static_cast<std::size_t>(j)] !=
            a[static_cast<std::size_t>(j)]);
      CHECK(ptilde_f[static_cast<std::size_t>(j)] ==
            doctest::Approx(ptilde[static_cast<std::size_t>(j)])
                .epsilon(1e-15));
    }
  }
}

TEST_CASE("rademacher diagnostic degenerate cases") {
  Sample z;
  z.n = 6;
  z.d = 3;
  z.bits.assign(18, 0);
  std::vector<std::uint8_t> a0(3, 0);
  CHECK(estimator::empirical_rademacher(z, a0, 25, 3) == 0.0);

  Sample one = from_rows({{1}});
  std::vector<std::uint8_t> a1(1, 0);
  CHECK(estimator::empirical_rademacher(one, a1, 10, 3) == 1.0);
}

TEST_CASE("rademacher matches exhaustive enumeration for d=3, n=10") {
  auto fam = seq::MeanSequence::power_law(2.0);
  std::vector<double> pvec;
  for (int j = 1; j <= 3; ++j) pvec.push_back(fam.eval(j));
  auto s = estimator::draw_product_sample(pvec, 10, 21, 0);
  std::vector<std::uint8_t> a{0, 1, 0};

  // exhaustive average over all 2^10 sign vectors
  double total = 0.0;
  for (int mask = 0; mask < 1024; ++mask) {
    double sup = 0.0;
    for (std::int64_t j = 0; j < 3; ++j) {
      double acc = 0.0;
      for (std::int64_t i = 0; i < 10; ++i) {
        double f = a[static_cast<std::size_t>(j)] ? 1.0 - s.at(i, j)
                                                  : static_cast<double>(s.at(i, j));
        acc += ((mask >> i) & 1) ? f : -f;
      }
      sup = std::max(sup, std::fabs(acc) / 10.0);
    }
    total += sup;
  }
  double exhaustive = total / 1024.0;

  double mc = estimator::empirical_rademacher(s, a, 60000, 4);
  CHECK(std::fabs(mc - exhaustive) < 0.01);
}

TEST_CASE("twice the rademacher mean dominates the head deviation") {
  auto fam = seq::MeanSequence::power_law(2.0);
  std::vector<double> pvec;
  for (int j = 1; j <= 12; ++j) pvec.push_back(fam.eval(j));
  const int n = 50;
  const int trials = 60;
  double dev_acc = 0.0, rad_acc = 0.0;
  for (int t = 0; t < trials; ++t) {
    auto s = estimator::draw_product_sample(
        pvec, n, 1234, static_cast<std::uint32_t>(t));
    std::vector<std::uint8_t> a(pvec.size(), 0);
    double sup = 0.0;
    for (std::size_t j = 0; j < pvec.size(); ++j) {
      std::int64_t colsum = 0;
      for (int i = 0; i < n; ++i) colsum += s.at(i, static_cast<std::int64_t>(j));
      sup = std::max(sup, std::fabs(static_cast<double>(colsum) / n - pvec[j]));
    }
    dev_acc += sup;
    rad_acc += estimator::empirical_rademacher(s, a, 200, 99 + t);
  }
  double mean_dev = dev_acc / trials;
  double mean_rad = rad_acc / trials;
  double slack = 3.0 * std::sqrt(0.25 / trials);
  CHECK(mean_dev <= 2.0 * mean_rad + slack);
}

TEST_CASE("rademacher serial equals parallel bitwise") {
  auto fam = seq::MeanSequence::power_law(2.0);
  std::vector<double> pvec;
  for (int j = 1; j <= 5; ++j) pvec.push_back(fam.eval(j));
  auto s = estimator::draw_product_sample(pvec, 30, 3, 0);
  std::vector<std::uint8_t> a(pvec.size(), 0);
  double ser = estimator::empirical_rademacher_serial(s, a, 500, 7);
  int saved = omp_get_max_threads();
  omp_set_num_threads(8);
  double par = estimator::empirical_rademacher(s, a, 500, 7);
  omp_set_num_threads(saved);
  CHECK(ser == par);
}

TEST_CASE("split halves and sample io") {
  Sample s = from_rows({{1, 0}, {0, 1}, {1, 1}, {0, 0}});
  auto [a, b] = estimator::split_halves(s);
  CHECK(a.n == 2);
  CHECK(b.n == 2);
  CHECK(a.at(0, 0) == 1);
  CHECK(b.at(1, 1) == 0);

  namespace fs = std::filesystem;
  auto dir = fs::temp_directory_path() / "lgc_sample_io";
  fs::create_directories(dir);
  auto dense = (dir / "dense.csv").string();
  estimator::save_dense_csv(s, dense);
  auto loaded = estimator::load_dense_csv(dense);
  CHECK(loaded.bits == s.bits);
  CHECK(loaded.n == 4);
  CHECK(loaded.d == 2);

  auto coord = (dir / "coords.txt").string();
  {
    std::ofstream out(coord);
    out << "4 2\n1 1\n2 2\n3 1\n3 2\n";
  }
  auto sparse = estimator::load_coordinate_list(coord);
  CHECK(sparse.bits == s.bits);
  fs::remove_all(dir);
}

TEST_CASE("bound report serializes") {
  Sample z;
  z.n = 10;
  z.d = 2;
  z.bits.assign(20, 0);
  auto rep = estimator::empirical_bound(z, z, 0.1);
  auto j = rep.to_json();
  CHECK(j["delta"] == 0.1);
  CHECK(j["index_origin"] == 1);
  CHECK(j["s_value"] == 0.0);
}
