#pragma once

// Experiment runner: sweep plans, named presets, JSON plan files, seeded
// parallel repetitions, CSV/SVG outputs with byte-identical results for any
// worker count.

#include <cstdint>
#include <string>
#include <vector>

#include "costid/metrics.hpp"
#include "costid/model.hpp"
#include "costid/simgen.hpp"

namespace costid {

enum class SweepVariable { snr, n, k, pi0, eps };

std::string sweep_name(SweepVariable v);
SweepVariable sweep_from_name(const std::string& name);

struct DetectorSpec {
  bool run_lfdr = true;  // lfdr-mult-cost
  double alpha = 0.1;
  double alpha_cmp = 0.1;
  bool run_ts = true;  // two-step baseline
  double alpha_fa1 = 0.1;
  double alpha_fa2 = 0.1;
};

struct ExperimentPlan {
  std::string name = "custom";
  ScenarioConfig base;  // scenario before the sweep value is applied
  SweepVariable sweep = SweepVariable::snr;
  std::vector<double> grid;  // nonempty
  int repetitions = 100;
  DetectorSpec detectors;
  int B = 300;                // bootstrap resamples
  std::uint64_t seed = 12345; // master seed
  std::string out_dir = "out";
  int workers = 0;  // 0: use COSTID_WORKERS env, else 1
  double ridge = 0.0;

  void validate() const;  // throws std::invalid_argument
};

// Returns base with the sweep value substituted (snr_db, N, K, pi0, or
// contamination.eps). N and K values must be positive integers.
ScenarioConfig apply_sweep(const ScenarioConfig& base, SweepVariable v,
                           double value);

struct GridPointSummary {
  double param = 0.0;
  MetricSummary lfdr;  // over successful repetitions
  MetricSummary ts;
  double ts_mean_d_hat = 0.0;
  int rowsum_violations = 0;  // lfdr-mult-cost rows with sum exactly 1
  int plugin_violations = 0;  // FDR_hat > alpha or FDR_cmp_hat > alpha_cmp
  int failed = 0;             // repetitions aborted by errors
  std::vector<std::string> errors;  // one message per failed repetition
};

struct RunOutcome {
  std::vector<GridPointSummary> points;  // one per grid value, in order
};

// Runs the full sweep, writes summary CSVs, per-detector per-grid-point
// mean-activation SVG heatmaps, a manifest, and (when repetitions fail) a
// failures CSV into plan.out_dir. A failing repetition is recorded and
// excluded from aggregation; it does not abort the run.
RunOutcome run(const ExperimentPlan& plan);

// Named presets: exp1, exp2, exp3, exp3b, exp4, exp5a, exp5b.
std::vector<std::string> preset_names();
ExperimentPlan preset(const std::string& name);  // throws on unknown name

// JSON plan files (schema documented in the README).
ExperimentPlan load_plan(const std::string& path);
std::string plan_to_json(const ExperimentPlan& plan);

// Worker-count resolution: explicit plan/flag value, else COSTID_WORKERS,
// else 1.
int resolve_workers(int requested);

}  // namespace costid
