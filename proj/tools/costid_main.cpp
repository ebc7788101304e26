// costid: correlation-structure identification across multiple data sets.
//
// Subcommands:
//   run <plan-file>   execute an experiment plan (or --preset NAME)
//   presets           list built-in experiment presets (--dump NAME for JSON)
//   detect <data-dir> run both detectors on external observation CSVs

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "costid/baseline_ts.hpp"
#include "costid/bootstrap.hpp"
#include "costid/coherence.hpp"
#include "costid/csv.hpp"
#include "costid/detector.hpp"
#include "costid/harness.hpp"
#include "costid/kernels.hpp"
#include "costid/lfdr.hpp"
#include "costid/rng.hpp"
#include "costid/svg.hpp"

namespace {

using namespace costid;

struct RunArgs {
  std::string plan_path;
  std::string preset_name;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::optional<std::string> out_dir;
  std::optional<double> alpha, alpha_cmp, alpha_fa1, alpha_fa2;
  std::optional<int> B;
  std::optional<int> repetitions;
  std::optional<double> ridge;
};

int cmd_run(const RunArgs& a) {
  ExperimentPlan plan;
  if (!a.preset_name.empty()) {
    plan = preset(a.preset_name);
  } else if (!a.plan_path.empty()) {
    plan = load_plan(a.plan_path);
  } else {
    std::cerr << "error: run needs a plan file or --preset NAME\n";
    return 2;
  }
  if (a.seed) plan.seed = *a.seed;
  if (a.workers) plan.workers = *a.workers;
  if (a.out_dir) plan.out_dir = *a.out_dir;
  if (a.alpha) plan.detectors.alpha = *a.alpha;
  if (a.alpha_cmp) plan.detectors.alpha_cmp = *a.alpha_cmp;
  if (a.alpha_fa1) plan.detectors.alpha_fa1 = *a.alpha_fa1;
  if (a.alpha_fa2) plan.detectors.alpha_fa2 = *a.alpha_fa2;
  if (a.B) plan.B = *a.B;
  if (a.repetitions) plan.repetitions = *a.repetitions;
  if (a.ridge) plan.ridge = *a.ridge;

  const RunOutcome outcome = run(plan);
  std::cout << "plan '" << plan.name << "': " << plan.grid.size()
            << " grid point(s) x " << plan.repetitions
            << " repetition(s) -> " << plan.out_dir << "\n";
  for (const GridPointSummary& g : outcome.points) {
    std::cout << "  " << sweep_name(plan.sweep) << " = "
              << format_double(g.param);
    if (plan.detectors.run_lfdr) {
      std::cout << " | lfdr-mult-cost fdr=" << format_double(g.lfdr.fdr)
                << " power=" << format_double(g.lfdr.power)
                << " fdr_cmp=" << format_double(g.lfdr.fdr_cmp);
    }
    if (plan.detectors.run_ts) {
      std::cout << " | two-step fdr=" << format_double(g.ts.fdr)
                << " power=" << format_double(g.ts.power)
                << " mean_d_hat=" << format_double(g.ts_mean_d_hat);
    }
    if (g.failed) std::cout << " | failed=" << g.failed;
    std::cout << "\n";
  }
  int failed = 0;
  for (const GridPointSummary& g : outcome.points) failed += g.failed;
  if (failed) {
    std::cerr << "warning: " << failed
              << " repetition(s) failed; see failures.csv\n";
  }
  return 0;
}

int cmd_presets(const std::string& dump_name) {
  if (!dump_name.empty()) {
    std::cout << plan_to_json(preset(dump_name));
    return 0;
  }
  const char* blurb[] = {
      "exp1   small-sample SNR sweep, K=15, fixed 6-component structure",
      "exp2   sample-size sweep, K=20, pi0=0.7",
      "exp3   set-count sweep, Laplacian components, pi0=0.8",
      "exp3b  set-count sweep, Laplacian components, pi0=0.9",
      "exp4   sparsity sweep, K=25, N=600",
      "exp5a  wideband contamination sweep, K=12, N=1000",
      "exp5b  point-mass contamination sweep, K=12, N=1000",
  };
  for (const char* line : blurb) std::cout << line << "\n";
  return 0;
}

struct DetectArgs {
  std::string data_dir;
  std::string out_dir = "detect_out";
  double alpha = 0.1, alpha_cmp = 0.1, alpha_fa1 = 0.1, alpha_fa2 = 0.1;
  int B = 300;
  std::uint64_t seed = 12345;
  double ridge = 0.0;
  int workers = 0;
  int J = 0;  // 0: min_k I_k
};

int cmd_detect(const DetectArgs& a) {
  namespace fs = std::filesystem;
  std::vector<std::string> files;
  {
    std::error_code ec;
    fs::directory_iterator it(a.data_dir, ec);
    if (ec) {
      std::cerr << "error: cannot read data directory '" << a.data_dir
                << "': " << ec.message() << "\n";
      return 2;
    }
    for (const auto& entry : it) {
      if (entry.is_regular_file() && entry.path().extension() == ".csv") {
        files.push_back(entry.path().string());
      }
    }
  }
  std::sort(files.begin(), files.end());
  if (files.size() < 2) {
    std::cerr << "error: '" << a.data_dir
              << "' must contain at least 2 set CSVs (one per set, rows = "
                 "dimensions, columns = samples)\n";
    return 2;
  }

  MultiSetSample sample;
  for (const std::string& f : files) sample.sets.push_back(read_matrix_csv(f));
  sample.N = sample.sets.front().cols;
  validate_sample(sample);
  std::cout << "read " << sample.K() << " sets, N = " << sample.N << "\n";

  const CoherenceSpectrum spec = coherence_spectrum(sample, a.J, a.ridge);
  const BootstrapNull null =
      bootstrap_chunk_norms(sample, a.J, a.B, rng::derive(a.seed, {1}), a.ridge,
                            resolve_workers(a.workers));
  const Mat T = test_statistics(spec, null);
  const PValueMatrix P = p_values(T, null);
  const PvalueMixtureModel model = fit_lfdr_model(P);
  const Mat L = atom_lfdrs(P, model);
  const DetectionResult res =
      detect(L, a.alpha, a.alpha_cmp, rng::derive(a.seed, {2}));
  const int d_hat = ts_step1(spec, null, a.alpha_fa1);
  const ActivationMatrix m_ts = ts_step2(spec, null, d_hat, a.alpha_fa2);

  fs::create_directories(a.out_dir);
  write_activation_csv(a.out_dir + "/m_lfdr_mult_cost.csv", res.M);
  write_activation_csv(a.out_dir + "/m_two_step.csv", m_ts);
  write_vector_csv(a.out_dir + "/eigenvalues.csv", spec.eigenvalues);
  write_matrix_csv(a.out_dir + "/chunk_norms.csv", spec.chunk_norms);
  write_matrix_csv(a.out_dir + "/p_values.csv", P.p);
  write_text_file(a.out_dir + "/chunk_norms.svg",
                  heatmap_svg(spec.chunk_norms, "chunk norms"));

  nlohmann::json diag;
  diag["fdr_hat"] = res.fdr_hat;
  diag["fdr_cmp_hat"] = res.fdr_cmp_hat;
  diag["rejections"] = res.m_final;
  diag["removed_components"] = res.removed_components;
  diag["fixup_triggered"] = res.fixup_triggered;
  diag["two_step_d_hat"] = d_hat;
  diag["mixture"] = {{"pi0", model.pi0},
                     {"weights", model.w},
                     {"shapes", model.a},
                     {"zero_class_weight", model.w0},
                     {"converged", model.converged},
                     {"bic", model.bic}};
  write_text_file(a.out_dir + "/diagnostics.json", diag.dump(2) + "\n");

  std::cout << "lfdr-mult-cost: " << res.m_final << " rejection(s), fdr_hat="
            << format_double(res.fdr_hat)
            << ", fdr_cmp_hat=" << format_double(res.fdr_cmp_hat) << "\n"
            << "two-step: d_hat=" << d_hat << "\n"
            << "outputs in " << a.out_dir << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "costid: detect which latent components are correlated across which "
      "data sets, with FDR control"};
  app.require_subcommand(1);
  std::string kernels_choice;
  app.add_option("--kernels", kernels_choice,
                 "compute backend: auto, scalar, avx2, neon")
      ->check(CLI::IsMember({"auto", "scalar", "avx2", "neon"}));

  RunArgs ra;
  CLI::App* run_cmd =
      app.add_subcommand("run", "execute an experiment plan (JSON file)");
  run_cmd->add_option("plan", ra.plan_path, "plan file path");
  run_cmd->add_option("--preset", ra.preset_name,
                      "built-in preset name instead of a plan file");
  run_cmd->add_option("--seed", ra.seed, "master seed");
  run_cmd->add_option("--workers", ra.workers,
                      "worker threads (default: COSTID_WORKERS or 1)");
  run_cmd->add_option("--out", ra.out_dir, "output directory");
  run_cmd->add_option("--alpha", ra.alpha, "atom-level FDR target");
  run_cmd->add_option("--alpha-cmp", ra.alpha_cmp,
                      "component-level FDR target");
  run_cmd->add_option("--alpha-fa1", ra.alpha_fa1,
                      "two-step Step-I false-alarm level");
  run_cmd->add_option("--alpha-fa2", ra.alpha_fa2,
                      "two-step Step-II false-alarm level");
  run_cmd->add_option("-B,--bootstrap-samples", ra.B, "bootstrap resamples");
  run_cmd->add_option("--reps", ra.repetitions, "repetitions per grid point");
  run_cmd->add_option("--ridge", ra.ridge,
                      "diagonal loading for near-singular covariances");

  std::string dump_name;
  CLI::App* presets_cmd =
      app.add_subcommand("presets", "list built-in experiment presets");
  presets_cmd->add_option("--dump", dump_name,
                          "print the named preset as a plan JSON");

  DetectArgs da;
  CLI::App* detect_cmd = app.add_subcommand(
      "detect", "run both detectors on a directory of set CSVs");
  detect_cmd->add_option("data-dir", da.data_dir, "directory of set CSVs")
      ->required();
  detect_cmd->add_option("--out", da.out_dir, "output directory");
  detect_cmd->add_option("--alpha", da.alpha, "atom-level FDR target");
  detect_cmd->add_option("--alpha-cmp", da.alpha_cmp,
                         "component-level FDR target");
  detect_cmd->add_option("--alpha-fa1", da.alpha_fa1,
                         "two-step Step-I false-alarm level");
  detect_cmd->add_option("--alpha-fa2", da.alpha_fa2,
                         "two-step Step-II false-alarm level");
  detect_cmd->add_option("-B,--bootstrap-samples", da.B,
                         "bootstrap resamples");
  detect_cmd->add_option("--seed", da.seed, "seed (bootstrap and tie coin)");
  detect_cmd->add_option("--ridge", da.ridge,
                         "diagonal loading for near-singular covariances");
  detect_cmd->add_option("--workers", da.workers, "bootstrap worker threads");
  detect_cmd->add_option("-J,--components", da.J,
                         "number of leading components (default: min set "
                         "dimension)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (!kernels_choice.empty()) kern::force_backend(kernels_choice);
    if (run_cmd->parsed()) return cmd_run(ra);
    if (presets_cmd->parsed()) return cmd_presets(dump_name);
    if (detect_cmd->parsed()) return cmd_detect(da);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
