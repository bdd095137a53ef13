#include "lgc/estimator.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "lgc/parallel.hpp"
#include "lgc/rng.hpp"

namespace lgc::estimator {

namespace {

void check_shape(const Sample& s) {
  if (s.n < 1 || s.d < 1) {
    throw std::invalid_argument("Sample: n and d must be >= 1");
  }
  if (s.bits.size() != static_cast<std::size_t>(s.n * s.d)) {
    throw std::invalid_argument("Sample: bit count does not match n*d");
  }
  for (std::uint8_t b : s.bits) {
    if (b > 1) throw std::invalid_argument("Sample: entries must be 0/1");
  }
}

double rademacher_replicate(const Sample& s, std::span<const std::uint8_t> a,
                            std::uint64_t seed, std::int64_t r) {
  rng::CounterRng g(seed, static_cast<std::uint64_t>(r), 0,
                    rng::kDomainRademacher);
  std::vector<double> col(static_cast<std::size_t>(s.d), 0.0);
  for (std::int64_t i = 0; i < s.n; ++i) {
    double eps = g.next_uniform() < 0.5 ? -1.0 : 1.0;
    const std::uint8_t* row = s.bits.data() + i * s.d;
    for (std::int64_t j = 0; j < s.d; ++j) {
      double f = a[static_cast<std::size_t>(j)] ? 1.0 - row[j]
                                                : static_cast<double>(row[j]);
      col[static_cast<std::size_t>(j)] += eps * f;
    }
  }
  double sup = 0.0;
  for (double v : col) sup = std::max(sup, std::fabs(v));
  return sup / static_cast<double>(s.n);
}

double rademacher_impl(const Sample& s, std::span<const std::uint8_t> a,
                       std::int64_t R, std::uint64_t seed, bool parallel) {
  check_shape(s);
  if (static_cast<std::int64_t>(a.size()) != s.d) {
    throw std::invalid_argument("empirical_rademacher: orientation length");
  }
  if (R < 1) throw std::invalid_argument("empirical_rademacher: R >= 1");
  std::vector<double> vals(static_cast<std::size_t>(R));
  auto one = [&](std::int64_t r) {
    vals[static_cast<std::size_t>(r)] = rademacher_replicate(s, a, seed, r);
  };
  if (parallel) {
    parallel_for_index(R, one);
  } else {
    for (std::int64_t r = 0; r < R; ++r) one(r);
  }
  return kahan_sum(vals) / static_cast<double>(R);
}

}  // namespace

Sample make_sample(std::int64_t n, std::int64_t d,
                   std::vector<std::uint8_t> bits) {
  Sample s{n, d, std::move(bits)};
  check_shape(s);
  return s;
}

Sample draw_product_sample(std::span<const double> pvec, std::int64_t n,
                           std::uint64_t seed, std::uint32_t stream) {
  const std::int64_t d = static_cast<std::int64_t>(pvec.size());
  Sample s;
  s.n = n;
  s.d = d;
  s.bits.resize(static_cast<std::size_t>(n * d));
  for (std::int64_t i = 0; i < n; ++i) {
    for (std::int64_t j = 0; j < d; ++j) {
      // Row acts as the replicate index; the stream tag separates samples
      // drawn under the same seed (domains 0..3 are reserved).
      rng::CounterRng g(seed, static_cast<std::uint64_t>(i),
                        static_cast<std::uint64_t>(j + 1),
                        rng::kDomainSample + 4u * stream);
      s.bits[static_cast<std::size_t>(i * d + j)] =
          g.next_uniform() < pvec[static_cast<std::size_t>(j)] ? 1 : 0;
    }
  }
  return s;
}

Sample load_dense_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  Sample s;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::int64_t cols = 0;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      int v = std::stoi(cell);
      if (v != 0 && v != 1) {
        throw std::runtime_error("dense sample entries must be 0/1");
      }
      s.bits.push_back(static_cast<std::uint8_t>(v));
      ++cols;
    }
    if (s.d == 0) {
      s.d = cols;
    } else if (cols != s.d) {
      throw std::runtime_error("ragged rows in " + path);
    }
    ++s.n;
  }
  check_shape(s);
  return s;
}

void save_dense_csv(const Sample& s, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (std::int64_t i = 0; i < s.n; ++i) {
    for (std::int64_t j = 0; j < s.d; ++j) {
      if (j) out << ',';
      out << static_cast<int>(s.at(i, j));
    }
    out << '\n';
  }
}

Sample load_coordinate_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::int64_t n = 0, d = 0;
  if (!(in >> n >> d)) throw std::runtime_error("missing n d header in " + path);
  Sample s;
  s.n = n;
  s.d = d;
  s.bits.assign(static_cast<std::size_t>(n * d), 0);
  std::int64_t i = 0, j = 0;
  while (in >> i >> j) {
    if (i < 1 || i > n || j < 1 || j > d) {
      throw std::runtime_error("coordinate out of range in " + path);
    }
    s.bits[static_cast<std::size_t>((i - 1) * d + (j - 1))] = 1;
  }
  check_shape(s);
  return s;
}

std::vector<std::uint8_t> orientation(const Sample& sample2) {
  check_shape(sample2);
  std::vector<std::uint8_t> a(static_cast<std::size_t>(sample2.d), 0);
  for (std::int64_t j = 0; j < sample2.d; ++j) {
    std::int64_t sum = 0;
    for (std::int64_t i = 0; i < sample2.n; ++i) sum += sample2.at(i, j);
    // strict majority; 2*sum > n avoids n/2 rounding
    a[static_cast<std::size_t>(j)] = (2 * sum > sample2.n) ? 1 : 0;
  }
  return a;
}

std::vector<double> reoriented_mean(const Sample& sample1,
                                    std::span<const std::uint8_t> a) {
  check_shape(sample1);
  if (static_cast<std::int64_t>(a.size()) != sample1.d) {
    throw std::invalid_argument("reoriented_mean: orientation length mismatch");
  }
  std::vector<double> out(static_cast<std::size_t>(sample1.d));
  for (std::int64_t j = 0; j < sample1.d; ++j) {
    std::int64_t sum = 0;
    for (std::int64_t i = 0; i < sample1.n; ++i) sum += sample1.at(i, j);
    double ph = static_cast<double>(sum) / static_cast<double>(sample1.n);
    out[static_cast<std::size_t>(j)] =
        a[static_cast<std::size_t>(j)] ? 1.0 - ph : ph;
  }
  return out;
}

BoundReport empirical_bound_with_orientation(const Sample& sample1,
                                             std::span<const std::uint8_t> a,
                                             double delta) {
  if (!(delta > 0.0) || !(delta < 1.0)) {
    throw std::invalid_argument("empirical_bound: delta must lie in (0,1)");
  }
  BoundReport rep;
  rep.delta = delta;
  rep.a.assign(a.begin(), a.end());
  rep.tilde_p_sorted = seq::sort_decreasing(reoriented_mean(sample1, a));
  rep.s_value = seq::s_of_sorted(rep.tilde_p_sorted);
  const double n = static_cast<double>(sample1.n);
  rep.bound = 16.0 * std::sqrt(rep.s_value / n) +
              std::sqrt(8.0 * std::log(1.0 / delta) / n);
  return rep;
}

BoundReport empirical_bound(const Sample& sample1, const Sample& sample2,
                            double delta) {
  check_shape(sample1);
  check_shape(sample2);
  if (sample1.n != sample2.n || sample1.d != sample2.d) {
    throw std::invalid_argument("empirical_bound: sample shapes must match");
  }
  return empirical_bound_with_orientation(sample1, orientation(sample2), delta);
}

std::pair<Sample, Sample> split_halves(const Sample& s) {
  check_shape(s);
  if (s.n % 2 != 0) {
    throw std::invalid_argument("split_halves: row count must be even");
  }
  std::int64_t half = s.n / 2;
  Sample a, b;
  a.n = b.n = half;
  a.d = b.d = s.d;
  a.bits.assign(s.bits.begin(), s.bits.begin() + half * s.d);
  b.bits.assign(s.bits.begin() + half * s.d, s.bits.end());
  return {std::move(a), std::move(b)};
}

double empirical_rademacher(const Sample& sample,
                            std::span<const std::uint8_t> a, std::int64_t R,
                            std::uint64_t seed) {
  return rademacher_impl(sample, a, R, seed, true);
}

double empirical_rademacher_serial(const Sample& sample,
                                   std::span<const std::uint8_t> a,
                                   std::int64_t R, std::uint64_t seed) {
  return rademacher_impl(sample, a, R, seed, false);
}

nlohmann::json BoundReport::to_json() const {
  return nlohmann::json{{"delta", delta},
                        {"s_value", s_value},
                        {"bound", bound},
                        {"a", a},
                        {"tilde_p_sorted", tilde_p_sorted},
                        {"index_origin", 1}};
}

}  // namespace lgc::estimator
