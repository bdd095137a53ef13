#include "lgc/exact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "lgc/parallel.hpp"

namespace lgc::exact {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();
constexpr double kLog2Pi = 1.8378770664093454836;

// stirlerr(n) = log(n!) - [(n+1/2) log n - n + log(2 pi)/2]; table for small n,
// asymptotic series beyond.
double stirlerr(double n) {
  static const std::vector<double> table = [] {
    std::vector<double> t(16, 0.0);
    for (int m = 1; m < 16; ++m) {
      t[static_cast<std::size_t>(m)] =
          std::lgamma(m + 1.0) -
          ((m + 0.5) * std::log(static_cast<double>(m)) - m + 0.5 * kLog2Pi);
    }
    return t;
  }();
  if (n < 16.0) return table[static_cast<std::size_t>(n)];
  const double s0 = 1.0 / 12, s1 = 1.0 / 360, s2 = 1.0 / 1260,
               s3 = 1.0 / 1680, s4 = 1.0 / 1188;
  double n1 = 1.0 / n, n2 = n1 * n1;
  if (n > 500.0) return (s0 - s1 * n2) * n1;
  if (n > 80.0) return (s0 - (s1 - s2 * n2) * n2) * n1;
  if (n > 35.0) return (s0 - (s1 - (s2 - s3 * n2) * n2) * n2) * n1;
  return (s0 - (s1 - (s2 - (s3 - s4 * n2) * n2) * n2) * n2) * n1;
}

// x log(x/np) + np - x, evaluated by series when x ~ np to avoid cancellation.
double bd0(double x, double np) {
  if (std::fabs(x - np) < 0.1 * (x + np)) {
    double v = (x - np) / (x + np);
    double s = (x - np) * v;
    double ej = 2.0 * x * v;
    for (int j = 1;; ++j) {
      ej *= v * v;
      double s1 = s + ej / (2 * j + 1);
      if (s1 == s) return s1;
      s = s1;
    }
  }
  return x * std::log(x / np) + np - x;
}

double log_binomial_pmf(int n, int k, double q) {
  if (q == 0.0) return k == 0 ? 0.0 : kNegInf;
  if (q == 1.0) return k == n ? 0.0 : kNegInf;
  if (k == 0) return n * std::log1p(-q);
  if (k == n) return n * std::log(q);
  double kd = k, nd = n;
  double lc = stirlerr(nd) - stirlerr(kd) - stirlerr(nd - kd) -
              bd0(kd, nd * q) - bd0(nd - kd, nd * (1.0 - q));
  return lc + 0.5 * (std::log(nd / (kd * (nd - kd))) - kLog2Pi);
}

struct Event {
  double t;        // breakpoint |k/n - p_j|
  double log_acc;  // log P(|B_j/n - p_j| <= t) after this breakpoint
  std::int32_t j;
  std::int32_t k;
};

// Per-coordinate events sorted by deviation, with compensated prefix masses.
void build_events(const BinomialTable& tab, double p, std::int32_t j,
                  std::span<Event> out) {
  const int n = tab.n;
  std::vector<std::int32_t> order(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) order[static_cast<std::size_t>(k)] = k;
  auto dev = [&](int k) { return std::fabs(static_cast<double>(k) / n - p); };
  std::sort(order.begin(), order.end(), [&](std::int32_t a, std::int32_t b) {
    double da = dev(a), db = dev(b);
    if (da != db) return da < db;
    return a < b;
  });
  KahanAccumulator acc;
  for (int i = 0; i <= n; ++i) {
    int k = order[static_cast<std::size_t>(i)];
    acc.add(tab.pmf(k));
    out[static_cast<std::size_t>(i)] = {
        dev(k), acc.value() > 0.0 ? std::log(acc.value()) : kNegInf, j,
        static_cast<std::int32_t>(k)};
  }
}

double delta_n_impl(std::span<const double> pvec, int n, bool parallel) {
  const std::int64_t d = static_cast<std::int64_t>(pvec.size());
  if (d < 1) throw std::invalid_argument("delta_n: empty mean vector");
  if (n < 1) throw std::invalid_argument("delta_n: n >= 1 required");
  for (std::int64_t j = 0; j < d; ++j) {
    if (!(pvec[j] > 0.0) || pvec[j] > 0.5) {
      throw std::invalid_argument("delta_n: means must lie in (0, 1/2]");
    }
    if (j > 0 && pvec[j] > pvec[j - 1]) {
      throw std::invalid_argument("delta_n: means must be nonincreasing");
    }
  }

  const std::int64_t per = n + 1;
  std::vector<Event> events(static_cast<std::size_t>(d * per));
  auto fill = [&](std::int64_t j) {
    BinomialTable tab = binomial_table(n, pvec[j]);
    build_events(tab, pvec[j], static_cast<std::int32_t>(j),
                 {events.data() + j * per, static_cast<std::size_t>(per)});
  };
  if (parallel) {
    parallel_for_index(d, fill);
  } else {
    for (std::int64_t j = 0; j < d; ++j) fill(j);
  }

  // Total order on breakpoints keeps the sweep deterministic under ties.
  std::sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
    if (a.t != b.t) return a.t < b.t;
    if (a.j != b.j) return a.j < b.j;
    return a.k < b.k;
  });

  // Sweep: maintain log prod_j P(|B_j/n - p_j| <= t) plus a zero-factor count;
  // each factor is right-continuous, so a segment [t_i, t_{i+1}) uses the
  // product after all events at t_i are applied.
  std::vector<double> logs(static_cast<std::size_t>(d), kNegInf);
  std::int64_t zero = d;
  KahanAccumulator logsum;
  KahanAccumulator integral;
  double t_cur = 0.0;
  for (const Event& e : events) {
    if (e.t > t_cur) {
      double one_minus_f = 1.0;
      if (zero == 0) one_minus_f = -std::expm1(std::min(logsum.value(), 0.0));
      integral.add(one_minus_f * (e.t - t_cur));
      t_cur = e.t;
    }
    double& cur = logs[static_cast<std::size_t>(e.j)];
    if (cur == kNegInf) {
      if (e.log_acc != kNegInf) {
        --zero;
        logsum.add(e.log_acc);
        cur = e.log_acc;
      }
    } else if (e.log_acc != cur) {
      logsum.add(e.log_acc - cur);
      cur = e.log_acc;
    }
  }
  // Beyond the largest breakpoint every factor is 1 and the integrand is 0.
  return integral.value();
}

}  // namespace

double BinomialTable::pmf(int k) const {
  return std::exp(log_pmf[static_cast<std::size_t>(k)]);
}

double BinomialTable::upper_tail(int m) const {
  if (m <= 0) return 1.0;
  if (m > n) return 0.0;
  KahanAccumulator acc;  // terms shrink as k grows past the mode
  for (int k = n; k >= m; --k) acc.add(pmf(k));
  return acc.value();
}

double BinomialTable::lower_tail(int m) const {
  if (m < 0) return 0.0;
  if (m >= n) return 1.0;
  KahanAccumulator acc;
  for (int k = 0; k <= m; ++k) acc.add(pmf(k));
  return acc.value();
}

BinomialTable binomial_table(int n, double q) {
  if (n < 1) throw std::invalid_argument("binomial_table: n >= 1 required");
  if (!(q >= 0.0) || !(q <= 1.0)) {
    throw std::invalid_argument("binomial_table: q must lie in [0,1]");
  }
  BinomialTable tab;
  tab.n = n;
  tab.q = q;
  tab.log_pmf.resize(static_cast<std::size_t>(n) + 1);
  tab.cdf.resize(static_cast<std::size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) {
    tab.log_pmf[static_cast<std::size_t>(k)] = log_binomial_pmf(n, k, q);
  }
  KahanAccumulator acc;
  for (int k = 0; k <= n; ++k) {
    acc.add(tab.pmf(k));
    tab.cdf[static_cast<std::size_t>(k)] = acc.value();
  }
  return tab;
}

double delta_n(std::span<const double> pvec, int n) {
  return delta_n_impl(pvec, n, true);
}

double delta_n_serial(std::span<const double> pvec, int n) {
  return delta_n_impl(pvec, n, false);
}

double mad(int n, double q) {
  if (n < 1) throw std::invalid_argument("mad: n >= 1 required");
  BinomialTable tab = binomial_table(n, q);
  KahanAccumulator acc;
  const double nq = n * q;
  for (int k = 0; k <= n; ++k) acc.add(tab.pmf(k) * std::fabs(k - nq));
  return acc.value();
}

double mgf_shifted_bernoulli(double q, double s, double t) {
  return (1.0 - q) * std::exp(-t * s) + q * std::exp(t * (1.0 - s));
}

}  // namespace lgc::exact
