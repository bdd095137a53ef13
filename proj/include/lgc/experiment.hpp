#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "lgc/seq.hpp"

// Declarative experiment runner. A spec is a single JSON document; runs emit
// CSV bodies that are byte-identical across reruns and worker counts, with
// timestamps segregated into a .meta.json sidecar. Every output row carries
// the seed and the spec hash.

namespace lgc::experiment {

enum class Kind { kRatesS, kRatesTProbe, kCertify, kCoverage, kCrossval, kVcDemo };

std::string kind_name(Kind k);
std::optional<Kind> parse_kind(const std::string& name);

struct ExperimentSpec {
  Kind kind = Kind::kCertify;
  nlohmann::json family_json;  // empty for kinds without a family
  std::vector<int> n_grid;
  std::int64_t replicates = 1000;
  std::uint64_t seed = 0;
  double delta = 0.1;
  double tail_tolerance = 1e-3;
  std::int64_t max_truncation = 1 << 20;
  std::vector<std::int64_t> truncations;  // explicit truncation sweep
  std::int64_t d = 0;                     // coverage dimension / crossval cap
  std::int64_t cases = 50;                // crossval case count
  int k = 3;                              // vc_demo construction size
  std::string out;

  static ExperimentSpec from_json(const nlohmann::json& doc);
  nlohmann::json to_json() const;  // canonical form used for hashing
  seq::MeanSequence family() const;
};

// Schema and range diagnostics; empty means valid. Never executes anything.
std::vector<std::string> validate(const nlohmann::json& doc);

// 64-bit FNV-1a over the canonical spec serialization.
std::uint64_t spec_hash(const ExperimentSpec& spec);

// Shortest round-trip decimal form, identical across runs.
std::string format_double(double v);

struct RunResult {
  int exit_code = 0;  // 0 ok, 1 failed certificate/agreement check
  std::vector<std::string> artifacts;
};

// Executes the spec; artifacts land under out_dir. Fixed truncation policy
// for families whose tail ladder is unsatisfiable: J = min(max_truncation,
// kFallbackTruncation), reported per row in the J column.
RunResult run(const ExperimentSpec& spec, const std::string& out_dir);

inline constexpr std::int64_t kFallbackTruncation = 4096;

}  // namespace lgc::experiment
