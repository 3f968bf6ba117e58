#include <cstdio>
#include <cstdlib>
#include <string>

#include <CLI11.hpp>

#include "mgs/bench.hpp"

namespace {

int env_workers() {
  const char* s = std::getenv("MGBENCH_WORKERS");
  if (!s) return 1;
  const int v = std::atoi(s);
  return v > 0 ? v : 1;
}

int do_solve(const std::string& config_path, const std::string& out_dir) {
  mgs::ExperimentConfig cfg = mgs::load_config(config_path);
  mgs::RunReport report = mgs::run_experiment(cfg);
  std::filesystem::path dir(out_dir);
  std::filesystem::create_directories(dir);
  mgs::write_file_atomic(dir / (cfg.name + ".csv"), mgs::trace_csv(report.trace));
  mgs::write_file_atomic(dir / (cfg.name + ".json"),
                         mgs::report_to_json(report).dump(2) + "\n");
  std::printf("%s: %s after %d iterations (final metric %.3e)\n", cfg.name.c_str(),
              report.converged ? "converged" : "NOT converged",
              report.trace.records.empty() ? 0 : report.trace.records.back().iter,
              report.trace.records.empty() ? 0.0 : report.trace.records.back().metric);
  return report.converged ? 0 : 3;
}

int do_analyze(const std::string& config_path, const std::string& out_dir) {
  mgs::ExperimentConfig cfg = mgs::load_config(config_path);
  mgs::AnalysisReport report = mgs::run_analysis(cfg);
  std::filesystem::path dir(out_dir);
  std::filesystem::create_directories(dir);
  mgs::write_file_atomic(dir / (cfg.name + ".json"),
                         mgs::analysis_to_json(report).dump(2) + "\n");
  std::printf("%s: E_h=%.4f ordinary=%.4f optimized=%.4f (alpha*=%.4f)\n",
              cfg.name.c_str(), report.h_ellipticity, report.ordinary_factor,
              report.optimized_factor, report.alpha_star);
  return 0;
}

int do_dump_presets(const std::string& out_dir) {
  std::filesystem::path dir(out_dir);
  std::filesystem::create_directories(dir);
  for (const std::string& name : mgs::preset_names()) {
    nlohmann::json arr = nlohmann::json::array();
    for (const mgs::PresetRun& run : mgs::preset_runs(name, 1.0, 0)) {
      nlohmann::json entry = mgs::config_to_json(run.config);
      arr.push_back({{"analysis_only", run.analysis_only}, {"config", entry}});
    }
    mgs::write_file_atomic(dir / (name + ".json"), arr.dump(2) + "\n");
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multigrid-accelerated subspace-optimization benchmark runner"};
  app.require_subcommand(1);

  std::string config_path, out_dir = ".";
  double scale = 1.0;
  std::uint64_t seed = 0;

  CLI::App* solve = app.add_subcommand("solve", "Run one experiment from a JSON config");
  solve->add_option("config", config_path, "config file")->required();
  solve->add_option("--out", out_dir, "output directory");

  CLI::App* analyze =
      app.add_subcommand("analyze", "Convergence-factor analysis only (no solve)");
  analyze->add_option("config", config_path, "config file")->required();
  analyze->add_option("--out", out_dir, "output directory");

  std::vector<CLI::App*> preset_cmds;
  for (const std::string& name : mgs::preset_names()) {
    CLI::App* cmd = app.add_subcommand(name, "Run the " + name + " preset suite");
    cmd->add_option("--scale", scale, "grid-size scale factor (default 1.0)");
    cmd->add_option("--seed", seed, "base seed");
    cmd->add_option("--out", out_dir, "output directory");
    preset_cmds.push_back(cmd);
  }

  CLI::App* dump = app.add_subcommand("dump-presets", "Write all preset configs as JSON");
  dump->add_option("dir", out_dir, "output directory")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return do_solve(config_path, out_dir);
    if (analyze->parsed()) return do_analyze(config_path, out_dir);
    if (dump->parsed()) return do_dump_presets(out_dir);
    for (size_t i = 0; i < preset_cmds.size(); ++i) {
      if (preset_cmds[i]->parsed()) {
        const bool ok = mgs::run_preset(mgs::preset_names()[i], scale, seed, out_dir,
                                        env_workers());
        std::printf("%s: %s (results in %s)\n", mgs::preset_names()[i].c_str(),
                    ok ? "all runs converged" : "some runs did not converge",
                    out_dir.c_str());
        return ok ? 0 : 3;
      }
    }
  } catch (const mgs::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
