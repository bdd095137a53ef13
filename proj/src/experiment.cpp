#include "lgc/experiment.hpp"

#include <omp.h>

#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "lgc/estimator.hpp"
#include "lgc/exact.hpp"
#include "lgc/ineq.hpp"
#include "lgc/mc.hpp"
#include "lgc/parallel.hpp"
#include "lgc/rng.hpp"
#include "lgc/vc.hpp"

namespace lgc::experiment {

namespace {

namespace fs = std::filesystem;

constexpr std::uint32_t kDomainCrossval = 3;

class CsvWriter {
 public:
  CsvWriter(const std::string& path, std::vector<std::string> header)
      : out_(path, std::ios::binary) {
    if (!out_) throw std::runtime_error("cannot write " + path);
    for (std::size_t i = 0; i < header.size(); ++i) {
      if (i) out_ << ',';
      out_ << header[i];
    }
    out_ << '\n';
  }
  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out_ << ',';
      out_ << cells[i];
    }
    out_ << '\n';
  }

 private:
  std::ofstream out_;
};

std::string fmt_i(std::int64_t v) { return std::to_string(v); }
std::string fmt_u(std::uint64_t v) { return std::to_string(v); }

void write_sidecar(const std::string& path, const ExperimentSpec& spec) {
  nlohmann::json meta{
      {"created_unix",
       std::chrono::duration_cast<std::chrono::seconds>(
           std::chrono::system_clock::now().time_since_epoch())
           .count()},
      {"threads", omp_get_max_threads()},
      {"spec", spec.to_json()},
      {"spec_hash", fmt_u(spec_hash(spec))}};
  std::ofstream out(path, std::ios::binary);
  out << meta.dump(2) << '\n';
}

// Simulate the family at sample size n. Prefers the certified tail ladder;
// falls back to a fixed finite truncation when no ladder level works.
struct SimRow {
  mc::DeltaEstimate est;
  std::int64_t J;
  double s_prefix;
  double t_prefix;
};

SimRow simulate_at(const seq::MeanSequence& p, const ExperimentSpec& spec,
                   int n, std::optional<std::int64_t> forced_J) {
  mc::SimConfig cfg;
  cfg.n = n;
  cfg.replicates = spec.replicates;
  cfg.seed = spec.seed;
  cfg.tail_tolerance = spec.tail_tolerance;
  cfg.max_truncation = spec.max_truncation;

  std::int64_t J = 0;
  mc::DeltaEstimate est;
  if (forced_J) {
    J = *forced_J;
    est = mc::simulate_delta(p.truncate(J), cfg);
    est.J_used = J;
  } else {
    try {
      est = mc::simulate_delta(p, cfg);
      J = est.J_used;
    } catch (const mc::TruncationError&) {
      J = std::min<std::int64_t>(spec.max_truncation, kFallbackTruncation);
      est = mc::simulate_delta(p.truncate(J), cfg);
      est.J_used = J;
    }
  }
  SimRow row;
  row.est = est;
  row.J = J;
  row.s_prefix = seq::s_functional(p, J).value;
  row.t_prefix = seq::t_functional(p, J).value;
  return row;
}

int run_rates(const ExperimentSpec& spec, const std::string& out_path,
              bool t_probe) {
  seq::MeanSequence p = spec.family();
  std::vector<std::string> header =
      t_probe ? std::vector<std::string>{"n", "J", "delta_est", "ci", "n_delta",
                                         "T", "ratio", "seed", "spec_hash"}
              : std::vector<std::string>{"n", "J", "delta_est", "ci",
                                         "sqrtn_delta", "sqrt_S", "ratio",
                                         "seed", "spec_hash"};
  CsvWriter csv(out_path, header);
  const std::string hash = fmt_u(spec_hash(spec));
  for (int n : spec.n_grid) {
    std::vector<std::optional<std::int64_t>> js;
    if (spec.truncations.empty()) {
      js.push_back(std::nullopt);
    } else {
      for (std::int64_t J : spec.truncations) js.push_back(J);
    }
    for (const auto& forced : js) {
      SimRow r = simulate_at(p, spec, n, forced);
      if (t_probe) {
        double nd = n * r.est.mean;
        csv.row({fmt_i(n), fmt_i(r.J), format_double(r.est.mean),
                 format_double(r.est.ci_halfwidth), format_double(nd),
                 format_double(r.t_prefix), format_double(nd / r.t_prefix),
                 fmt_u(spec.seed), hash});
      } else {
        double sd = std::sqrt(static_cast<double>(n)) * r.est.mean;
        double ss = std::sqrt(r.s_prefix);
        csv.row({fmt_i(n), fmt_i(r.J), format_double(r.est.mean),
                 format_double(r.est.ci_halfwidth), format_double(sd),
                 format_double(ss), format_double(sd / ss), fmt_u(spec.seed),
                 hash});
      }
    }
  }
  return 0;
}

int run_certify(const ExperimentSpec& spec, const std::string& out_path) {
  std::vector<ineq::Certificate> certs = ineq::certify_subgamma_grid();
  std::vector<ineq::Certificate> classical = ineq::certify_classical_suite();
  certs.insert(certs.end(), classical.begin(), classical.end());

  std::ofstream jsonl(out_path + ".jsonl", std::ios::binary);
  for (const auto& c : certs) jsonl << c.to_json().dump() << '\n';

  CsvWriter csv(out_path,
                {"name", "lhs", "rhs", "margin", "pass", "seed", "spec_hash"});
  const std::string hash = fmt_u(spec_hash(spec));
  std::int64_t failures = 0;
  for (const auto& c : certs) {
    if (!c.pass) ++failures;
    csv.row({c.name, format_double(c.lhs), format_double(c.rhs),
             format_double(c.margin), c.pass ? "1" : "0", fmt_u(spec.seed),
             hash});
  }
  return failures == 0 ? 0 : 1;
}

int run_coverage(const ExperimentSpec& spec, const std::string& out_path) {
  seq::MeanSequence fam = spec.family();
  const std::int64_t d = spec.d;
  const int n = spec.n_grid.front();
  std::vector<double> pvec;
  for (std::int64_t j = 1; j <= d; ++j) pvec.push_back(fam.eval(j));
  const double exact_delta = exact::delta_n(pvec, n);

  std::vector<double> bounds(static_cast<std::size_t>(spec.replicates));
  parallel_for_index(spec.replicates, [&](std::int64_t r) {
    auto s1 = estimator::draw_product_sample(
        pvec, n, spec.seed, static_cast<std::uint32_t>(2 * r));
    auto s2 = estimator::draw_product_sample(
        pvec, n, spec.seed, static_cast<std::uint32_t>(2 * r + 1));
    bounds[static_cast<std::size_t>(r)] =
        estimator::empirical_bound(s1, s2, spec.delta).bound;
  });

  CsvWriter csv(out_path, {"replicate", "bound", "exact_delta", "covered",
                           "seed", "spec_hash"});
  const std::string hash = fmt_u(spec_hash(spec));
  for (std::int64_t r = 0; r < spec.replicates; ++r) {
    double b = bounds[static_cast<std::size_t>(r)];
    csv.row({fmt_i(r), format_double(b), format_double(exact_delta),
             b >= exact_delta ? "1" : "0", fmt_u(spec.seed), hash});
  }
  return 0;
}

int run_crossval(const ExperimentSpec& spec, const std::string& out_path) {
  const std::int64_t dmax = spec.d > 0 ? std::min<std::int64_t>(spec.d, 8) : 8;
  CsvWriter csv(out_path, {"case", "d", "n", "exact", "mc_mean", "mc_ci",
                           "pass", "seed", "spec_hash"});
  const std::string hash = fmt_u(spec_hash(spec));
  std::int64_t failures = 0;
  for (std::int64_t c = 0; c < spec.cases; ++c) {
    rng::CounterRng g(spec.seed, static_cast<std::uint64_t>(c), 0,
                      kDomainCrossval);
    std::int64_t d = 1 + static_cast<std::int64_t>(g.next_uniform() * dmax);
    int n = 5 + static_cast<int>(g.next_uniform() * 45);
    std::vector<double> pvec;
    for (std::int64_t j = 0; j < d; ++j) {
      pvec.push_back(0.005 + 0.495 * g.next_uniform());
    }
    pvec = seq::sort_decreasing(std::move(pvec));
    double ex = exact::delta_n(pvec, n);

    mc::SimConfig cfg;
    cfg.n = n;
    cfg.replicates = spec.replicates;
    cfg.seed = spec.seed + static_cast<std::uint64_t>(c) + 1;
    mc::DeltaEstimate est = mc::simulate_delta(seq::MeanSequence::finite(pvec), cfg);
    bool pass = std::fabs(est.mean - ex) <= 3.0 * est.ci_halfwidth;
    if (!pass) ++failures;
    csv.row({fmt_i(c), fmt_i(d), fmt_i(n), format_double(ex),
             format_double(est.mean), format_double(est.ci_halfwidth),
             pass ? "1" : "0", fmt_u(spec.seed), hash});
  }
  // Mirrors the MC-exact agreement tolerance: up to 2 of 50 flagged cases.
  return failures * 25 <= spec.cases ? 0 : 1;
}

int run_vc_demo(const ExperimentSpec& spec, const std::string& out_path) {
  vc::BinaryMatrix m = vc::shattered_set(spec.k);
  std::ostringstream text;
  for (int r = 0; r < m.rows; ++r) {
    text << "x_" << (r + 1) << " = " << m.row_string(r) << '\n';
  }
  std::cout << text.str();
  if (!spec.out.empty()) {
    std::ofstream out(out_path, std::ios::binary);
    out << text.str();
  }
  return 0;
}

}  // namespace

std::string kind_name(Kind k) {
  switch (k) {
    case Kind::kRatesS: return "rates_S";
    case Kind::kRatesTProbe: return "rates_T_probe";
    case Kind::kCertify: return "certify";
    case Kind::kCoverage: return "coverage";
    case Kind::kCrossval: return "crossval";
    case Kind::kVcDemo: return "vc_demo";
  }
  throw std::logic_error("unreachable");
}

std::optional<Kind> parse_kind(const std::string& name) {
  for (Kind k : {Kind::kRatesS, Kind::kRatesTProbe, Kind::kCertify,
                 Kind::kCoverage, Kind::kCrossval, Kind::kVcDemo}) {
    if (kind_name(k) == name) return k;
  }
  return std::nullopt;
}

ExperimentSpec ExperimentSpec::from_json(const nlohmann::json& doc) {
  std::vector<std::string> diags = validate(doc);
  if (!diags.empty()) {
    throw std::invalid_argument("invalid spec: " + diags.front());
  }
  ExperimentSpec s;
  s.kind = *parse_kind(doc.at("kind").get<std::string>());
  if (doc.contains("family")) s.family_json = doc.at("family");
  if (doc.contains("n_grid")) s.n_grid = doc.at("n_grid").get<std::vector<int>>();
  if (doc.contains("replicates")) s.replicates = doc.at("replicates").get<std::int64_t>();
  if (doc.contains("seed")) s.seed = doc.at("seed").get<std::uint64_t>();
  if (doc.contains("delta")) s.delta = doc.at("delta").get<double>();
  if (doc.contains("tail_tolerance")) s.tail_tolerance = doc.at("tail_tolerance").get<double>();
  if (doc.contains("max_truncation")) s.max_truncation = doc.at("max_truncation").get<std::int64_t>();
  if (doc.contains("truncations")) s.truncations = doc.at("truncations").get<std::vector<std::int64_t>>();
  if (doc.contains("d")) s.d = doc.at("d").get<std::int64_t>();
  if (doc.contains("cases")) s.cases = doc.at("cases").get<std::int64_t>();
  if (doc.contains("k")) s.k = doc.at("k").get<int>();
  if (doc.contains("out")) s.out = doc.at("out").get<std::string>();
  return s;
}

nlohmann::json ExperimentSpec::to_json() const {
  nlohmann::json doc;
  doc["kind"] = kind_name(kind);
  if (!family_json.is_null() && !family_json.empty()) doc["family"] = family_json;
  if (!n_grid.empty()) doc["n_grid"] = n_grid;
  doc["replicates"] = replicates;
  doc["seed"] = seed;
  doc["delta"] = delta;
  doc["tail_tolerance"] = tail_tolerance;
  doc["max_truncation"] = max_truncation;
  if (!truncations.empty()) doc["truncations"] = truncations;
  if (d > 0) doc["d"] = d;
  doc["cases"] = cases;
  doc["k"] = k;
  if (!out.empty()) doc["out"] = out;
  return doc;
}

seq::MeanSequence ExperimentSpec::family() const {
  return seq::MeanSequence::from_json(family_json);
}

std::vector<std::string> validate(const nlohmann::json& doc) {
  std::vector<std::string> diags;
  if (!doc.is_object()) {
    diags.push_back("spec must be a JSON object");
    return diags;
  }
  if (!doc.contains("kind") || !doc.at("kind").is_string()) {
    diags.push_back("missing string field 'kind'");
    return diags;
  }
  auto kind = parse_kind(doc.at("kind").get<std::string>());
  if (!kind) {
    diags.push_back("unknown kind '" + doc.at("kind").get<std::string>() + "'");
    return diags;
  }

  const bool needs_family = *kind == Kind::kRatesS ||
                            *kind == Kind::kRatesTProbe ||
                            *kind == Kind::kCoverage;
  if (needs_family) {
    if (!doc.contains("family")) {
      diags.push_back("kind '" + kind_name(*kind) + "' requires 'family'");
    } else {
      try {
        (void)seq::MeanSequence::from_json(doc.at("family"));
      } catch (const std::exception& e) {
        diags.push_back(std::string("bad family: ") + e.what());
      }
    }
    if (!doc.contains("n_grid") || !doc.at("n_grid").is_array() ||
        doc.at("n_grid").empty()) {
      diags.push_back("kind '" + kind_name(*kind) +
                      "' requires a nonempty 'n_grid'");
    } else {
      auto grid = doc.at("n_grid").get<std::vector<std::int64_t>>();
      for (std::size_t i = 0; i < grid.size(); ++i) {
        if (grid[i] < 1) diags.push_back("n_grid entries must be >= 1");
        if (i > 0 && grid[i] <= grid[i - 1]) {
          diags.push_back("n_grid must be strictly increasing");
          break;
        }
      }
    }
  }
  if (doc.contains("replicates") && doc.at("replicates").get<std::int64_t>() < 1) {
    diags.push_back("replicates must be >= 1");
  }
  if (doc.contains("delta")) {
    double dl = doc.at("delta").get<double>();
    if (!(dl > 0.0) || !(dl < 1.0)) diags.push_back("delta must lie in (0,1)");
  }
  if (doc.contains("truncations")) {
    auto tr = doc.at("truncations").get<std::vector<std::int64_t>>();
    for (std::size_t i = 0; i < tr.size(); ++i) {
      if (tr[i] < 1) diags.push_back("truncations must be >= 1");
      if (i > 0 && tr[i] <= tr[i - 1]) {
        diags.push_back("truncations must be strictly increasing");
        break;
      }
    }
  }
  if (*kind == Kind::kCoverage) {
    if (!doc.contains("d") || doc.at("d").get<std::int64_t>() < 1) {
      diags.push_back("coverage requires 'd' >= 1");
    }
  }
  if (*kind == Kind::kVcDemo && doc.contains("k")) {
    int k = doc.at("k").get<int>();
    if (k < 1 || k > 20) diags.push_back("vc_demo 'k' must lie in [1,20]");
  }
  const bool needs_out = *kind != Kind::kVcDemo;
  if (needs_out && (!doc.contains("out") || doc.at("out").get<std::string>().empty())) {
    diags.push_back("kind '" + kind_name(*kind) + "' requires 'out'");
  }
  return diags;
}

std::uint64_t spec_hash(const ExperimentSpec& spec) {
  const std::string body = spec.to_json().dump();
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a 64
  for (unsigned char c : body) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  if (ec != std::errc()) return "nan";
  return std::string(buf, end);
}

RunResult run(const ExperimentSpec& spec, const std::string& out_dir) {
  fs::create_directories(out_dir);
  const std::string out_path =
      (fs::path(out_dir) / (spec.out.empty() ? "out.csv" : spec.out)).string();

  int code = 0;
  switch (spec.kind) {
    case Kind::kRatesS: code = run_rates(spec, out_path, false); break;
    case Kind::kRatesTProbe: code = run_rates(spec, out_path, true); break;
    case Kind::kCertify: code = run_certify(spec, out_path); break;
    case Kind::kCoverage: code = run_coverage(spec, out_path); break;
    case Kind::kCrossval: code = run_crossval(spec, out_path); break;
    case Kind::kVcDemo: code = run_vc_demo(spec, out_path); break;
  }
  RunResult res;
  res.exit_code = code;
  if (!spec.out.empty() || spec.kind != Kind::kVcDemo) {
    res.artifacts.push_back(out_path);
    write_sidecar(out_path + ".meta.json", spec);
    if (spec.kind == Kind::kCertify) {
      res.artifacts.push_back(out_path + ".jsonl");
    }
  }
  return res;
}

}  // namespace lgc::experiment
