// Experiment runner CLI: turns declarative JSON specs into reproducible
// CSV/JSON artifacts. Exit codes: 0 ok, 1 failed certificate or agreement
// check, 2 usage or spec error.

#include <omp.h>

#include <cstdlib>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "json.hpp"
#include "lgc/experiment.hpp"

namespace {

nlohmann::json load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open spec file " + path);
  return nlohmann::json::parse(in);
}

std::string default_out_dir() {
  if (const char* env = std::getenv("LGC_OUT_DIR")) return env;
  return ".";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"local Glivenko-Cantelli experiment runner"};
  app.require_subcommand(1);

  std::string spec_path;
  std::string out_dir = default_out_dir();
  int threads = 0;
  std::int64_t seed_override = -1;

  auto* run_cmd = app.add_subcommand("run", "execute an experiment spec");
  run_cmd->add_option("spec", spec_path, "spec JSON file")->required();
  run_cmd->add_option("--out-dir", out_dir, "output directory");
  run_cmd->add_option("--threads", threads, "worker count (0 = default)");
  run_cmd->add_option("--seed-override", seed_override,
                      "replace the spec seed");

  auto* val_cmd = app.add_subcommand("validate", "check a spec without running");
  val_cmd->add_option("spec", spec_path, "spec JSON file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    nlohmann::json doc = load_spec(spec_path);

    if (val_cmd->parsed()) {
      auto diags = lgc::experiment::validate(doc);
      for (const auto& d : diags) std::cout << d << '\n';
      return diags.empty() ? 0 : 2;
    }

    auto diags = lgc::experiment::validate(doc);
    if (!diags.empty()) {
      for (const auto& d : diags) std::cerr << "spec error: " << d << '\n';
      return 2;
    }
    auto spec = lgc::experiment::ExperimentSpec::from_json(doc);
    if (seed_override >= 0) {
      spec.seed = static_cast<std::uint64_t>(seed_override);
    }
    if (threads > 0) omp_set_num_threads(threads);

    auto result = lgc::experiment::run(spec, out_dir);
    for (const auto& a : result.artifacts) std::cout << a << '\n';
    return result.exit_code;
  } catch (const nlohmann::json::parse_error& e) {
    std::cerr << "spec parse error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
