#include "lgc/seq.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "lgc/parallel.hpp"

namespace lgc::seq {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double reduce_mean(double v) {
  if (!(v >= 0.0) || v > 1.0) {
    throw std::invalid_argument("mean outside [0,1]");
  }
  if (v > 0.5) v = 1.0 - v;  // |u - v| = |(1-u) - (1-v)|
  return v;
}

double bernoulli_entropy(double p) {
  if (p <= 0.0 || p >= 1.0) return 0.0;
  return -p * std::log(p) - (1.0 - p) * std::log1p(-p);
}

// Integral of u^{-a} from x to infinity, a > 1.
double power_integral_tail(double x, double a) {
  return std::pow(x, 1.0 - a) / (a - 1.0);
}

}  // namespace

MeanSequence MeanSequence::power_law(double T) {
  if (!(T > 0.0)) throw std::invalid_argument("power_law: T must be positive");
  MeanSequence p;
  p.family_ = Family::kPowerLaw;
  p.T_ = T;
  return p;
}

MeanSequence MeanSequence::geometric(double c, double rho) {
  if (!(c > 0.0) || c > 0.5) {
    throw std::invalid_argument("geometric: c must lie in (0, 1/2]");
  }
  if (!(rho > 0.0) || !(rho < 1.0)) {
    throw std::invalid_argument("geometric: rho must lie in (0, 1)");
  }
  MeanSequence p;
  p.family_ = Family::kGeometric;
  p.c_ = c;
  p.rho_ = rho;
  return p;
}

MeanSequence MeanSequence::finite(std::vector<double> values) {
  std::vector<double> reduced;
  reduced.reserve(values.size());
  for (double v : values) {
    double r = reduce_mean(v);
    if (r <= 0.0) break;  // a zero truncates the sequence
    reduced.push_back(r);
  }
  for (std::size_t i = 1; i < reduced.size(); ++i) {
    if (reduced[i] > reduced[i - 1]) {
      throw std::invalid_argument("finite: values must be nonincreasing");
    }
  }
  MeanSequence p;
  p.family_ = Family::kFinite;
  p.values_ = std::move(reduced);
  return p;
}

MeanSequence MeanSequence::log_inverse(std::int64_t offset) {
  if (offset < 2) throw std::invalid_argument("log_inverse: offset must be >= 2");
  MeanSequence p;
  p.family_ = Family::kLogInverse;
  p.offset_ = offset;
  return p;
}

MeanSequence MeanSequence::custom(CustomSpec spec) {
  if (!spec.eval) throw std::invalid_argument("custom: eval function required");
  MeanSequence p;
  p.family_ = Family::kCustom;
  p.custom_ = std::move(spec);
  return p;
}

double MeanSequence::eval(std::int64_t j) const {
  if (j < 1) throw std::invalid_argument("eval: index origin is 1");
  switch (family_) {
    case Family::kPowerLaw:
      return std::min(0.5, std::pow(static_cast<double>(j + 1), -1.0 / T_));
    case Family::kGeometric:
      return c_ * std::pow(rho_, static_cast<double>(j - 1));
    case Family::kFinite:
      if (j > static_cast<std::int64_t>(values_.size())) {
        throw std::out_of_range("eval: past the end of a finite sequence");
      }
      return values_[static_cast<std::size_t>(j - 1)];
    case Family::kLogInverse:
      return std::min(0.5, 1.0 / std::log(static_cast<double>(j + offset_)));
    case Family::kCustom: {
      double v = reduce_mean(custom_.eval(j));
      if (v <= 0.0) {
        throw std::invalid_argument("custom: zero mean in an infinite family");
      }
      return v;
    }
  }
  throw std::logic_error("unreachable");
}

std::optional<std::int64_t> MeanSequence::dimension() const {
  if (family_ == Family::kFinite) {
    return static_cast<std::int64_t>(values_.size());
  }
  return std::nullopt;
}

double MeanSequence::tail_sum_bound(std::int64_t J) const {
  switch (family_) {
    case Family::kPowerLaw:
      if (T_ >= 1.0) return kInf;
      // sum_{j>J} (j+1)^{-1/T} = sum_{u>=J+2} u^{-1/T} <= int_{J+1}^inf
      return power_integral_tail(static_cast<double>(J + 1), 1.0 / T_);
    case Family::kGeometric:
      return c_ * std::pow(rho_, static_cast<double>(J)) / (1.0 - rho_);
    case Family::kFinite: {
      KahanAccumulator acc;
      for (std::size_t i = static_cast<std::size_t>(std::max<std::int64_t>(J, 0));
           i < values_.size(); ++i) {
        acc.add(values_[i]);
      }
      return acc.value();
    }
    case Family::kLogInverse:
      return kInf;
    case Family::kCustom:
      return custom_.tail_sum_bound ? custom_.tail_sum_bound(J) : kInf;
  }
  throw std::logic_error("unreachable");
}

double MeanSequence::tail_sup_bound(std::int64_t J) const {
  if (family_ == Family::kFinite &&
      J >= static_cast<std::int64_t>(values_.size())) {
    return 0.0;
  }
  return eval(J + 1);
}

Bracket MeanSequence::tail_power_sum(std::int64_t J, int k) const {
  if (k < 1) throw std::invalid_argument("tail_power_sum: k >= 1 required");
  switch (family_) {
    case Family::kPowerLaw: {
      double a = static_cast<double>(k) / T_;
      if (a <= 1.0) return {kInf, kInf};
      if (T_ > 60.0) return {0.0, kInf};  // cap region too wide to enumerate
      // Capped indices satisfy j+1 < 2^T; their terms are exactly (1/2)^k.
      std::int64_t jcap = static_cast<std::int64_t>(std::exp2(T_)) - 1;
      while (static_cast<double>(jcap + 1) >= std::exp2(T_)) --jcap;
      double capped = 0.0;
      if (jcap > J) {
        capped = static_cast<double>(jcap - J) * std::pow(0.5, k);
      }
      double M = static_cast<double>(std::max(J, jcap));
      return {capped + power_integral_tail(M + 2.0, a),
              capped + power_integral_tail(M + 1.0, a)};
    }
    case Family::kGeometric: {
      // sum_{j>J} (c rho^{j-1})^k = c^k rho^{kJ} / (1 - rho^k), exactly
      double rk = std::pow(rho_, k);
      double v = std::pow(c_, k) *
                 std::exp(static_cast<double>(k * J) * std::log(rho_)) /
                 (1.0 - rk);
      return {v, v};
    }
    case Family::kFinite: {
      KahanAccumulator acc;
      for (std::size_t i = static_cast<std::size_t>(std::max<std::int64_t>(J, 0));
           i < values_.size(); ++i) {
        acc.add(std::pow(values_[i], k));
      }
      return {acc.value(), acc.value()};
    }
    case Family::kLogInverse:
      // p(j) ~ 1/log j, and sum 1/log^k diverges for every k
      return {kInf, kInf};
    case Family::kCustom: {
      double sup = eval(J + 1);
      double hi = (k == 1) ? tail_sum_bound(J)
                           : std::pow(sup, k - 1) * tail_sum_bound(J);
      return {0.0, hi};
    }
  }
  throw std::logic_error("unreachable");
}

std::int64_t MeanSequence::geometric_s_peak() const {
  // Terms c rho^{j-1} log(j+1) decrease from the first j where
  // rho log(j+2) <= log(j+1); the ratio is decreasing in j.
  auto nonincreasing_at = [&](std::int64_t j) {
    return rho_ * std::log(static_cast<double>(j + 2)) <=
           std::log(static_cast<double>(j + 1));
  };
  std::int64_t hi = 1;
  while (!nonincreasing_at(hi)) hi *= 2;
  std::int64_t lo = hi / 2 < 1 ? 1 : hi / 2;
  while (lo < hi) {
    std::int64_t mid = lo + (hi - lo) / 2;
    if (nonincreasing_at(mid)) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return lo;
}

std::int64_t MeanSequence::geometric_t_peak() const {
  // Ratio log(j+1)/(A + B(j-1)) is unimodal; its derivative sign is that of
  // h(j) = (A + B(j-1))/(j+1) - B log(j+1), which is decreasing in j.
  double A = std::log(1.0 / c_);
  double B = std::log(1.0 / rho_);
  auto past_peak = [&](std::int64_t j) {
    double x = static_cast<double>(j);
    return (A + B * (x - 1.0)) / (x + 1.0) - B * std::log(x + 1.0) <= 0.0;
  };
  std::int64_t hi = 1;
  while (!past_peak(hi)) hi *= 2;
  std::int64_t lo = hi / 2 < 1 ? 1 : hi / 2;
  while (lo < hi) {
    std::int64_t mid = lo + (hi - lo) / 2;
    if (past_peak(mid)) {
      hi = mid;
    } else {
      lo = mid + 1;
    }
  }
  return lo;
}

TailSupInfo MeanSequence::s_tail_info(std::int64_t J) const {
  switch (family_) {
    case Family::kPowerLaw: {
      if (std::log(static_cast<double>(J + 2)) >= T_) {
        // Past the peak of x e^{-x/T}: tail terms decrease from j = J+1.
        return {eval(J + 1) * std::log(static_cast<double>(J + 2)), false,
                false};
      }
      return {T_ * std::exp(-1.0), false, false};
    }
    case Family::kGeometric: {
      std::int64_t peak = std::max(J + 1, geometric_s_peak());
      return {eval(peak) * std::log(static_cast<double>(peak + 1)), false,
              false};
    }
    case Family::kFinite: {
      double sup = 0.0;
      for (std::size_t i = static_cast<std::size_t>(std::max<std::int64_t>(J, 0));
           i < values_.size(); ++i) {
        sup = std::max(sup, values_[i] * std::log(static_cast<double>(i + 2)));
      }
      return {sup, false, false};
    }
    case Family::kLogInverse:
      // Terms log(j+1)/log(j+offset) increase strictly to 1 and never reach it.
      return {1.0, true, false};
    case Family::kCustom:
      return {kInf, false, false};
  }
  throw std::logic_error("unreachable");
}

TailSupInfo MeanSequence::t_tail_info(std::int64_t J) const {
  switch (family_) {
    case Family::kPowerLaw:
      // Uncapped indices have ratio exactly T; the tail always contains them.
      return {T_, false, false};
    case Family::kGeometric: {
      std::int64_t peak = std::max(J + 1, geometric_t_peak());
      return {std::log(static_cast<double>(peak + 1)) /
                  std::log(1.0 / eval(peak)),
              false, false};
    }
    case Family::kFinite: {
      double sup = 0.0;
      for (std::size_t i = static_cast<std::size_t>(std::max<std::int64_t>(J, 0));
           i < values_.size(); ++i) {
        sup = std::max(sup, std::log(static_cast<double>(i + 2)) /
                                std::log(1.0 / values_[i]));
      }
      return {sup, false, false};
    }
    case Family::kLogInverse:
      // log(j+1)/log(log(j+offset)) -> inf
      return {kInf, false, true};
    case Family::kCustom:
      return {kInf, false, false};
  }
  throw std::logic_error("unreachable");
}

double MeanSequence::entropy_tail_bound(std::int64_t J) const {
  switch (family_) {
    case Family::kPowerLaw: {
      if (T_ >= 1.0) return kInf;  // sum log(j)/j^{1/T} diverges for T >= 1
      double a = 1.0 / T_;
      double M = static_cast<double>(J + 1);
      // h(p) <= p log(1/p) + p; integral bound of u^{-a}(a log u + 1).
      double ilog = std::pow(M, 1.0 - a) * std::log(M) / (a - 1.0) +
                    std::pow(M, 1.0 - a) / ((a - 1.0) * (a - 1.0));
      return a * ilog + power_integral_tail(M, a);
    }
    case Family::kGeometric: {
      double A = std::log(1.0 / c_);
      double B = std::log(1.0 / rho_);
      double rJ = std::pow(rho_, static_cast<double>(J));
      double Jd = static_cast<double>(J);
      return c_ * ((A + 1.0) * rJ / (1.0 - rho_) +
                   B * rJ * (Jd / (1.0 - rho_) + rho_ / ((1.0 - rho_) * (1.0 - rho_))));
    }
    case Family::kFinite: {
      KahanAccumulator acc;
      for (std::size_t i = static_cast<std::size_t>(std::max<std::int64_t>(J, 0));
           i < values_.size(); ++i) {
        acc.add(bernoulli_entropy(values_[i]));
      }
      return acc.value();
    }
    case Family::kLogInverse:
    case Family::kCustom:
      return kInf;
  }
  throw std::logic_error("unreachable");
}

nlohmann::json MeanSequence::to_json() const {
  nlohmann::json j;
  j["index_origin"] = 1;
  switch (family_) {
    case Family::kPowerLaw:
      j["family"] = "power_law";
      j["params"] = {{"T", T_}};
      return j;
    case Family::kGeometric:
      j["family"] = "geometric";
      j["params"] = {{"c", c_}, {"rho", rho_}};
      return j;
    case Family::kFinite:
      j["family"] = "finite";
      j["params"] = {{"values", values_}};
      return j;
    case Family::kLogInverse:
      j["family"] = "log_inverse";
      j["params"] = {{"offset", offset_}};
      return j;
    case Family::kCustom:
      throw std::invalid_argument("custom sequences are not serializable");
  }
  throw std::logic_error("unreachable");
}

MeanSequence MeanSequence::from_json(const nlohmann::json& j) {
  const std::string fam = j.at("family").get<std::string>();
  const auto& params = j.at("params");
  if (fam == "power_law") return power_law(params.at("T").get<double>());
  if (fam == "geometric") {
    return geometric(params.at("c").get<double>(),
                     params.at("rho").get<double>());
  }
  if (fam == "finite") {
    return finite(params.at("values").get<std::vector<double>>());
  }
  if (fam == "log_inverse") {
    return log_inverse(params.at("offset").get<std::int64_t>());
  }
  throw std::invalid_argument("unknown family: " + fam);
}

std::string MeanSequence::describe() const {
  switch (family_) {
    case Family::kPowerLaw:
      return "power_law(T=" + std::to_string(T_) + ")";
    case Family::kGeometric:
      return "geometric(c=" + std::to_string(c_) +
             ",rho=" + std::to_string(rho_) + ")";
    case Family::kFinite:
      return "finite(d=" + std::to_string(values_.size()) + ")";
    case Family::kLogInverse:
      return "log_inverse(offset=" + std::to_string(offset_) + ")";
    case Family::kCustom:
      return "custom";
  }
  throw std::logic_error("unreachable");
}

MeanSequence MeanSequence::truncate(std::int64_t J) const {
  if (J < 1) throw std::invalid_argument("truncate: J >= 1 required");
  std::int64_t end = J;
  if (auto d = dimension()) end = std::min(end, *d);
  std::vector<double> v;
  v.reserve(static_cast<std::size_t>(end));
  for (std::int64_t j = 1; j <= end; ++j) v.push_back(eval(j));
  return finite(std::move(v));
}

namespace {

// Shared scan for the two functionals. term(j, p(j)) must be the quantity
// whose prefix maximum is sought; Custom sequences get a monotonicity check.
template <typename TermFn>
FunctionalValue prefix_max_functional(const MeanSequence& p, std::int64_t J,
                                      TermFn&& term, const TailSupInfo& tail) {
  if (J < 1) throw std::invalid_argument("prefix length must be >= 1");
  std::int64_t end = J;
  if (auto d = p.dimension()) end = std::min(end, *d);

  double best = 0.0;
  std::optional<std::int64_t> arg;
  double prev = 1.0;
  for (std::int64_t j = 1; j <= end; ++j) {
    double pj = p.eval(j);
    if (pj > prev) {
      throw std::invalid_argument("sequence is not nonincreasing at j=" +
                                  std::to_string(j));
    }
    prev = pj;
    double t = term(j, pj);
    if (t > best) {
      best = t;
      arg = j;
    }
  }

  FunctionalValue out;
  out.prefix_J = J;
  if (tail.divergent) {
    out.value = std::numeric_limits<double>::infinity();
    out.argmax_index = std::nullopt;
    out.tail_certified = false;
    return out;
  }
  if (tail.sup_bound <= best) {
    out.value = best;
    out.argmax_index = arg;
    out.tail_certified = true;
  } else if (tail.sup_is_limit) {
    // The full supremum is known analytically but approached only as j -> inf.
    out.value = tail.sup_bound;
    out.argmax_index = std::nullopt;
    out.tail_certified = true;
  } else {
    out.value = best;
    out.argmax_index = arg;
    out.tail_certified = false;
  }
  return out;
}

}  // namespace

FunctionalValue s_functional(const MeanSequence& p, std::int64_t J) {
  std::int64_t end = J;
  if (auto d = p.dimension()) end = std::min(end, *d);
  return prefix_max_functional(
      p, J,
      [](std::int64_t j, double pj) {
        return pj * std::log(static_cast<double>(j + 1));
      },
      p.s_tail_info(end));
}

FunctionalValue t_functional(const MeanSequence& p, std::int64_t J) {
  std::int64_t end = J;
  if (auto d = p.dimension()) end = std::min(end, *d);
  const TailSupInfo tail = p.t_tail_info(end);
  const bool power_law = p.family() == Family::kPowerLaw;
  return prefix_max_functional(
      p, J,
      [&](std::int64_t j, double pj) {
        if (power_law && pj < 0.5) {
          // Uncapped power-law index: the ratio is T by construction; return
          // it exactly instead of through pow/log round-trips.
          return tail.sup_bound;
        }
        return std::log(static_cast<double>(j + 1)) / std::log(1.0 / pj);
      },
      tail);
}

EntropyResult entropy(const MeanSequence& p, std::int64_t J) {
  if (J < 1) throw std::invalid_argument("prefix length must be >= 1");
  std::int64_t end = J;
  if (auto d = p.dimension()) end = std::min(end, *d);
  KahanAccumulator acc;
  for (std::int64_t j = 1; j <= end; ++j) acc.add(bernoulli_entropy(p.eval(j)));
  return {acc.value(), p.entropy_tail_bound(end)};
}

ConditionBResult condition_b_partial(const MeanSequence& p, int k,
                                     std::int64_t J) {
  if (k < 1) throw std::invalid_argument("condition_b_partial: k >= 1");
  if (J < 1) throw std::invalid_argument("prefix length must be >= 1");
  std::int64_t end = J;
  if (auto d = p.dimension()) end = std::min(end, *d);
  KahanAccumulator acc;
  for (std::int64_t j = 1; j <= end; ++j) acc.add(std::pow(p.eval(j), k));
  return {acc.value(), p.tail_power_sum(end, k)};
}

double power_sum(std::span<const double> v, int k) {
  KahanAccumulator acc;
  for (double x : v) acc.add(std::pow(x, k));
  return acc.value();
}

double sigma2_proxy(double q) {
  if (!(q > 0.0) || !(q < 1.0)) {
    throw std::domain_error("sigma2_proxy: q must lie in (0,1)");
  }
  double x = 1.0 - 2.0 * q;
  if (x == 0.0) return 0.25;
  // (1-2q) / (2 log(1/q - 1)) rewritten through atanh for stability near 1/2
  return x / (4.0 * std::atanh(x));
}

std::vector<double> sort_decreasing(std::vector<double> v) {
  std::sort(v.begin(), v.end(), std::greater<double>());
  return v;
}

double s_of_sorted(std::span<const double> decreasing) {
  double best = 0.0;
  for (std::size_t i = 0; i < decreasing.size(); ++i) {
    best = std::max(best,
                    decreasing[i] * std::log(static_cast<double>(i + 2)));
  }
  return best;
}

}  // namespace lgc::seq
