#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "hyloc/types.hpp"

namespace hyloc {

enum class SweepVar { Sigma, Radius, Anchors, NlosBeta, NlosPaths };

const char* sweep_var_name(SweepVar v) noexcept;
SweepVar parse_sweep_var(const std::string& name);

/// Name used in reports for the one-shot weighted least-squares
/// comparison method (full TDRA mask).
inline constexpr const char* kBaselineMethodName = "TDRAW";

/// Full description of one Monte-Carlo experiment. The report is a pure
/// function of this struct: geometry, noise, NLOS subsets and solver
/// initializations all derive from master_seed and trial/grid indices,
/// so thread count and scheduling never change the results.
struct ExperimentConfig {
  SweepVar var = SweepVar::Sigma;
  std::vector<double> grid;
  std::vector<TypeMask> methods;
  bool include_baseline = false;
  int trials = 1000;
  std::uint64_t master_seed = 1;

  // Fixed parameters (the swept one is overridden per grid point).
  int n_anchors = 8;
  double radius = 50.0;
  double sigma = 1.0;  // equal across anchors and measurement types
  double l0 = 20.0;
  double gamma = 2.5;
  int t_max = 1000;
  double eps_c = 1e-3;
  double nlos_beta = 0.0;
  int nlos_paths = 0;

  bool timing = true;  // false writes mean_ms = 0 for byte-stable artifacts
  int threads = 0;     // 0 = hardware concurrency

  void validate() const;

  bool operator==(const ExperimentConfig&) const = default;
};

struct TrialRecord {
  double error_m = 0.0;  // ||s - s_hat||; 0 when failed (see `failed`)
  int iterations = 0;
  double ms = 0.0;
  bool failed = false;

  bool operator==(const TrialRecord&) const = default;
};

/// Aggregates plus the per-trial detail for one (method, grid point) cell.
struct MethodCell {
  std::string method;
  double grid_value = 0.0;
  double rmse_m = 0.0;
  double crlb_rmse_m = 0.0;  // sqrt of the trial-mean CRLB trace for the mask
  double mean_iters = 0.0;
  double mean_ms = 0.0;
  int failures = 0;
  std::vector<TrialRecord> trials;

  bool operator==(const MethodCell&) const = default;
};

struct RmseReport {
  std::string schema = "hyloc-report/1";
  ExperimentConfig config;
  std::vector<MethodCell> cells;  // method-major, grid inner, baseline last

  bool operator==(const RmseReport&) const = default;
};

/// sqrt(mean of squared errors). Rejects an empty list.
double rmse(const std::vector<double>& errors);

/// Runs the full experiment described by `cfg`.
RmseReport run_experiment(const ExperimentConfig& cfg);

enum class ReportFormat { Csv, Json };

/// Fixed-order CSV, one row per method x grid point. Header:
/// method,grid_var,grid_value,rmse_m,crlb_rmse_m,mean_iters,mean_ms,failures
std::string report_csv(const RmseReport& report);

/// Full-detail JSON (schema "hyloc-report/1"); round-trips losslessly
/// through parse_report.
std::string report_json(const RmseReport& report);
RmseReport parse_report(const std::string& json_text);

/// Writes the report to `path` in the requested format. Throws
/// std::runtime_error when the path is unwritable.
void emit(const RmseReport& report, ReportFormat format, const std::string& path);

}  // namespace hyloc
