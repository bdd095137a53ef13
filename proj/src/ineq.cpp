#include "lgc/ineq.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "lgc/exact.hpp"
#include "lgc/parallel.hpp"

namespace lgc::ineq {

namespace {

// Snap a real threshold to the nearest integer when it is one up to rounding,
// so P(X >= x) / P(X <= x) use the intended lattice point.
std::int64_t snapped_ceil(double x) {
  double r = std::round(x);
  if (std::fabs(x - r) < 1e-9 * (1.0 + std::fabs(x))) x = r;
  return static_cast<std::int64_t>(std::ceil(x));
}

std::int64_t snapped_floor(double x) {
  double r = std::round(x);
  if (std::fabs(x - r) < 1e-9 * (1.0 + std::fabs(x))) x = r;
  return static_cast<std::int64_t>(std::floor(x));
}

}  // namespace

nlohmann::json Certificate::to_json() const {
  nlohmann::json in = nlohmann::json::object();
  for (const auto& [k, v] : inputs) in[k] = v;
  return nlohmann::json{{"name", name}, {"inputs", in},   {"lhs", lhs},
                        {"rhs", rhs},   {"margin", margin}, {"tol", tol},
                        {"pass", pass}};
}

Certificate make_certificate(std::string name,
                             std::vector<std::pair<std::string, double>> inputs,
                             double lhs, double rhs, double tol) {
  Certificate c;
  c.name = std::move(name);
  c.inputs = std::move(inputs);
  c.lhs = lhs;
  c.rhs = rhs;
  c.margin = rhs - lhs;
  c.tol = tol;
  c.pass = c.margin >= -tol;
  return c;
}

Certificate check_subgamma_mgf(double q, double s, double t) {
  const double e3 = std::exp(-3.0);
  if (!(q > 0.0) || q > s || s > e3) {
    throw std::domain_error("check_subgamma_mgf: need 0 < q <= s <= e^-3");
  }
  const double tmax = std::log(1.0 / q) / std::log(1.0 / s);
  if (t < 0.0 || t >= tmax) {
    throw std::domain_error("check_subgamma_mgf: need 0 <= t < log(1/q)/log(1/s)");
  }
  double lhs = exact::mgf_shifted_bernoulli(q, s, t);
  double rhs = std::exp(q * t * t / (2.0 * (1.0 - t / tmax)));
  return make_certificate("subgamma_mgf", {{"q", q}, {"s", s}, {"t", t}}, lhs,
                          rhs);
}

Divergences divergences(double a, double b) {
  if (!(a >= 0.0) || a > 1.0) {
    throw std::domain_error("divergences: a must lie in [0,1]");
  }
  if (!(b > 0.0) || !(b < 1.0)) {
    throw std::domain_error("divergences: b must lie in (0,1)");
  }
  double kl = 0.0;
  if (a > 0.0) kl += a * std::log(a / b);
  if (a < 1.0) kl += (1.0 - a) * std::log((1.0 - a) / (1.0 - b));
  double d = a - b;
  double chi2 = d * d / b + d * d / (1.0 - b);
  return {kl, chi2};
}

Certificate check_kl_upper(double q, double eps) {
  if (!(q > 0.0) || q > 0.5) {
    throw std::domain_error("check_kl_upper: q must lie in (0, 1/2]");
  }
  if (eps < 0.0 || eps > 1.0 - q) {
    throw std::domain_error("check_kl_upper: eps must lie in [0, 1-q]");
  }
  double lhs = divergences(q + eps, q).kl;
  double rhs = 2.0 * std::min(eps * std::log(1.0 / q), eps * eps / q);
  return make_certificate("kl_upper", {{"q", q}, {"eps", eps}}, lhs, rhs);
}

Certificate check_reverse_chernoff(int n, double q, double eps) {
  if (!(eps > 0.0) || eps > 0.5 || !(q > 0.0) || q > 0.5) {
    throw std::domain_error("check_reverse_chernoff: need 0 < eps, q <= 1/2");
  }
  if (eps * eps * q * n < 3.0) {
    throw std::domain_error("check_reverse_chernoff: need eps^2 q n >= 3");
  }
  double lhs = std::exp(-9.0 * eps * eps * q * n);
  exact::BinomialTable tab = exact::binomial_table(n, q);
  std::int64_t m = snapped_ceil((1.0 + eps) * q * n);
  double rhs = tab.upper_tail(static_cast<int>(m));
  return make_certificate("reverse_chernoff",
                          {{"n", static_cast<double>(n)}, {"q", q}, {"eps", eps}},
                          lhs, rhs);
}

Certificate check_bk_mad(int n, double q) {
  if (n < 2) throw std::domain_error("check_bk_mad: n >= 2 required");
  if (q < 1.0 / n || q > 0.5) {
    throw std::domain_error("check_bk_mad: q must lie in [1/n, 1/2]");
  }
  double b1 = std::sqrt(n * q * (1.0 - q) / 2.0);
  double b2 = 0.5 * std::sqrt(n * q);
  double lhs = std::max(b1, b2);
  double rhs = exact::mad(n, q);
  return make_certificate(
      "bk_mad", {{"n", static_cast<double>(n)}, {"q", q}, {"b1", b1}, {"b2", b2}},
      lhs, rhs);
}

Certificate check_okamoto_lower_tail(int n, double q, double t) {
  if (!(q > 0.0) || !(q < 1.0)) {
    throw std::domain_error("check_okamoto_lower_tail: q must lie in (0,1)");
  }
  if (t < 0.0) throw std::domain_error("check_okamoto_lower_tail: t >= 0");
  double lhs = 0.0;
  std::int64_t m = snapped_floor(n * (q - t));
  if (m >= 0) {
    exact::BinomialTable tab = exact::binomial_table(n, q);
    lhs = tab.lower_tail(static_cast<int>(std::min<std::int64_t>(m, n)));
  }
  double rhs = std::exp(-n * t * t / (2.0 * q * (1.0 - q)));
  return make_certificate("okamoto_lower_tail",
                          {{"n", static_cast<double>(n)}, {"q", q}, {"t", t}},
                          lhs, rhs);
}

double maximal_subgaussian_bound(std::span<const double> sigma2) {
  double sup = 0.0;
  for (std::size_t i = 0; i < sigma2.size(); ++i) {
    if (!(sigma2[i] > 0.0)) {
      throw std::invalid_argument("maximal_subgaussian_bound: entries > 0");
    }
    sup = std::max(sup, sigma2[i] * std::log(static_cast<double>(i + 2)));
  }
  return 4.0 * std::sqrt(sup);
}

double maximal_subgamma_bound(std::span<const double> v,
                              std::span<const double> a) {
  if (v.size() != a.size()) {
    throw std::invalid_argument("maximal_subgamma_bound: length mismatch");
  }
  double sup_v = 0.0, sup_a = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!(v[i] > 0.0) || a[i] < 0.0) {
      throw std::invalid_argument(
          "maximal_subgamma_bound: need v > 0 and a >= 0");
    }
    double lg = std::log(static_cast<double>(i + 2));
    sup_v = std::max(sup_v, v[i] * lg);
    sup_a = std::max(sup_a, a[i] * lg);
  }
  return 12.0 * std::sqrt(sup_v) + 16.0 * sup_a;
}

double delta_upper_bound(double S, double T, int n) {
  if (S < 0.0 || !(T > 0.0)) {
    throw std::domain_error("delta_upper_bound: need S >= 0 and T > 0");
  }
  if (n < 21) {
    throw std::domain_error("delta_upper_bound: n >= 21 (e^3) required");
  }
  double root = std::sqrt(S / n);
  if (T >= 0.5) {
    return 28.0 * (root + T * std::log(static_cast<double>(n)) / n) + 1.0 / n;
  }
  return 16.0 * (root + T / n);
}

double delta_lower_bound(std::span<const double> pvec, int n) {
  if (n < 2) throw std::invalid_argument("delta_lower_bound: n >= 2 required");
  double best = 0.0;
  for (std::size_t i = 0; i < pvec.size(); ++i) {
    if (i > 0 && pvec[i] > pvec[i - 1]) {
      throw std::invalid_argument("delta_lower_bound: means must be nonincreasing");
    }
    double lg = std::log(static_cast<double>(i + 2));
    if (n * pvec[i] >= 20.0 * lg) {
      best = std::max(best, std::sqrt(pvec[i] * lg / n));
    }
  }
  return best / 180.0;
}

double fine_rate_epsilon(const seq::MeanSequence& p, std::int64_t j, int n) {
  if (j < 1 || n < 1) {
    throw std::invalid_argument("fine_rate_epsilon: j, n >= 1 required");
  }
  double pj = p.eval(j);
  double lg = std::log(static_cast<double>(j + 1));
  return std::max(lg / (n * std::log(1.0 / pj)), std::sqrt(pj * lg / n));
}

BaselineBounds baseline_bounds(std::int64_t d, int n, double eps) {
  if (d < 1 || n < 1 || eps < 0.0) {
    throw std::invalid_argument("baseline_bounds: need d, n >= 1 and eps >= 0");
  }
  double e2 = std::exp(-2.0 * n * eps * eps);
  return {2.0 * static_cast<double>(d) * e2, e2,
          2.0 * std::sqrt(std::log(static_cast<double>(d + 1)) / n)};
}

namespace {

struct SubgammaPoint {
  double q, s, t;
};

std::vector<SubgammaPoint> subgamma_grid_points() {
  using namespace config;
  const double e3 = std::exp(-3.0);
  std::vector<SubgammaPoint> pts;
  pts.reserve(static_cast<std::size_t>(kSubgammaQPoints) * kSubgammaSPoints *
              kSubgammaTPoints);
  const double lq0 = std::log(kSubgammaQMin), lq1 = std::log(e3);
  for (int i = 0; i < kSubgammaQPoints; ++i) {
    double q = std::exp(lq0 + (lq1 - lq0) * i / (kSubgammaQPoints - 1));
    q = std::min(q, e3);
    for (int j = 0; j < kSubgammaSPoints; ++j) {
      double s = std::min(q + (e3 - q) * j / (kSubgammaSPoints - 1), e3);
      double tmax = std::log(1.0 / q) / std::log(1.0 / s);
      for (int k = 0; k < kSubgammaTPoints; ++k) {
        double t = kSubgammaTFrac * tmax * k / (kSubgammaTPoints - 1);
        pts.push_back({q, s, t});
      }
    }
  }
  return pts;
}

std::vector<Certificate> subgamma_sweep(bool parallel) {
  std::vector<SubgammaPoint> pts = subgamma_grid_points();
  std::vector<Certificate> out(pts.size());
  auto one = [&](std::int64_t i) {
    const auto& p = pts[static_cast<std::size_t>(i)];
    out[static_cast<std::size_t>(i)] = check_subgamma_mgf(p.q, p.s, p.t);
  };
  if (parallel) {
    parallel_for_index(static_cast<std::int64_t>(pts.size()), one);
  } else {
    for (std::int64_t i = 0; i < static_cast<std::int64_t>(pts.size()); ++i) {
      one(i);
    }
  }
  return out;
}

}  // namespace

std::vector<Certificate> certify_subgamma_grid() { return subgamma_sweep(true); }

std::vector<Certificate> certify_subgamma_grid_serial() {
  return subgamma_sweep(false);
}

std::vector<Certificate> certify_classical_suite() {
  std::vector<Certificate> out;

  // KL upper bound: q in (0, 1/2], eps in [0, 1-q].
  for (int i = 1; i <= config::kKlQPoints; ++i) {
    double q = 0.5 * i / config::kKlQPoints;
    for (int j = 0; j < config::kKlEpsPoints; ++j) {
      double frac = static_cast<double>(j) / (config::kKlEpsPoints - 1);
      out.push_back(check_kl_upper(q, (1.0 - q) * frac));
    }
  }

  // Reverse Chernoff on its gate eps, q <= 1/2, eps^2 q n >= 3.
  for (int n = 2; n <= config::kClassicalMaxN; ++n) {
    for (int qi = 1; qi <= 10; ++qi) {
      double q = 0.05 * qi;
      for (int ei = 1; ei <= 10; ++ei) {
        double eps = 0.05 * ei;
        if (eps * eps * q * n >= 3.0) {
          out.push_back(check_reverse_chernoff(n, q, eps));
        }
      }
    }
  }

  // Mean absolute deviation lower bounds on q in [1/n, 1/2].
  for (int n = 2; n <= config::kClassicalMaxN; ++n) {
    for (int qi = 0; qi <= 24; ++qi) {
      double q = std::max(1.0 / n, 0.02 * (qi + 1));
      if (q > 0.5) continue;
      out.push_back(check_bk_mad(n, q));
    }
  }

  // Lower-tail Chernoff.
  for (int n : {2, 5, 10, 50, 100, config::kClassicalMaxN}) {
    for (int qi = 1; qi <= 25; ++qi) {
      double q = 0.02 * qi;
      for (int ti = 0; ti <= 40; ++ti) {
        out.push_back(check_okamoto_lower_tail(n, q, 0.0125 * ti));
      }
    }
  }

  return out;
}

}  // namespace lgc::ineq
