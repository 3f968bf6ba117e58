#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "mgs/sesop.hpp"

namespace mgs {

// Thrown on malformed experiment configs; exit code 2 in the CLI.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One fully reproducible experiment: problem + grids + solver + stopping
// rule + seed. Parsed from nested JSON; unknown keys are rejected with a
// diagnostic naming the offending field.
struct ExperimentConfig {
  std::string name = "run";

  // problem
  std::string problem = "rotated";  // rotated | exp | plap
  double epsilon = 1.0;
  double phi = 0.0;
  double p = 1.5;
  double xi = 1e-4;
  double gamma = 10.0;

  // grids
  int fine_n = 63;
  int coarsest_n = 31;

  // solver
  std::string solver = "sesop";  // sesop | fixed-step | tg | mg | cg | pcg |
                                 // sd | nesterov | lbfgs | nonlinear-mg
  int history = 1;
  bool use_cgc = true;
  int cycle_type = 1;
  int v1 = 0, v2 = 0;
  std::string preconditioner = "jacobi";    // identity | jacobi | sgs
  std::string prolongation = "bilinear";    // bilinear | bicubic
  std::string coeff_mode = "subspace-min";  // subspace-min | fixed-ordinary |
                                            // fixed-optimized
  int analysis_n = 0;  // stepsize-determination grid; 0 = fine_n
  int lfa_m = 64;
  std::string rhs_kind = "zero";  // zero | random (linear problems)

  // stopping
  double residual_tol = 1e-8;
  double gap_tol_rel = 1e-10;  // nonlinear: stop at F - F* <= rel * |F*|
  int max_iterations = 20000;

  std::uint64_t seed = 0;
  bool zero_init = false;
};

ExperimentConfig parse_config(const nlohmann::json& j);
ExperimentConfig load_config(const std::filesystem::path& file);
nlohmann::json config_to_json(const ExperimentConfig& cfg);

struct RunReport {
  ExperimentConfig config;
  ConvergenceTrace trace;
  bool converged = false;
  std::optional<double> measured_factor;   // needs >= 11 trace records
  std::optional<double> predicted_factor;  // fixed-* coefficient modes only
  std::optional<double> r_ratio;           // analysis_n < fine_n only
};

// Executes the configured solver; deterministic given config + seed.
RunReport run_experiment(const ExperimentConfig& cfg);

// Analysis-only results (no solve): h-ellipticity, ideal factors, and the
// ordinary / optimized fixed-coefficient predictions for the linear stencil.
struct AnalysisReport {
  ExperimentConfig config;
  double h_ellipticity = 0.0;
  double ideal_no_history = 0.0;
  double ideal_one_history = 0.0;
  double ordinary_factor = 0.0;
  double optimized_factor = 0.0;
  double alpha_star = 0.0;
  double kappa_star = 0.0;
  std::optional<double> r_ratio;  // when analysis_n differs from fine_n
};
AnalysisReport run_analysis(const ExperimentConfig& cfg);

// Relative degradation of the log convergence factor when fixed stepsizes
// are determined on an analysis_n grid instead of the target grid:
// log(r_target) / log(r_analysis) - 1.
double r_ratio_value(const ExperimentConfig& cfg);

// CSV trace: header "iteration,metric,seconds" + one row per record. The
// seconds column is wall-clock and excluded from reproducibility checks.
std::string trace_csv(const ConvergenceTrace& trace);
// The iteration-indexed part only (determinism surface).
std::string trace_csv_deterministic(const ConvergenceTrace& trace);

nlohmann::json report_to_json(const RunReport& report);
nlohmann::json analysis_to_json(const AnalysisReport& report);

// Atomic write (temp file + rename).
void write_file_atomic(const std::filesystem::path& file, const std::string& content);

// Named preset suites: "table1", "table2", "fig1" .. "fig8". Desk-scaled by
// default; `scale` multiplies the default fine grid (rounded to 2^k - 1).
struct PresetRun {
  std::string name;
  bool analysis_only = false;
  ExperimentConfig config;
};
std::vector<PresetRun> preset_runs(const std::string& preset, double scale,
                                   std::uint64_t seed);
std::vector<std::string> preset_names();

// Runs a preset with up to `workers` parallel solves (each solve remains
// single-threaded), writing <name>.csv / <name>.json per run plus
// summary.csv into out_dir. Returns false if any run fails to converge
// within its budget.
bool run_preset(const std::string& preset, double scale, std::uint64_t seed,
                const std::filesystem::path& out_dir, int workers);

}  // namespace mgs
