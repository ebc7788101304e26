#include "costid/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <utility>

#include <json.hpp>

#include "costid/baseline_ts.hpp"
#include "costid/bootstrap.hpp"
#include "costid/coherence.hpp"
#include "costid/csv.hpp"
#include "costid/detector.hpp"
#include "costid/kernels.hpp"
#include "costid/lfdr.hpp"
#include "costid/parallel.hpp"
#include "costid/rng.hpp"
#include "costid/svg.hpp"

namespace costid {

namespace {

using nlohmann::json;

// Substream tags under the per-repetition seed. The generator owns tags
// 1..6 of the same seed, so these start higher.
constexpr std::uint64_t kBootTag = 101;
constexpr std::uint64_t kDetectTag = 102;

struct UnitResult {
  bool ok = false;
  std::string error;
  ConfusionCounts lfdr_counts;
  ConfusionCounts ts_counts;
  ActivationMatrix lfdr_m;
  ActivationMatrix ts_m;
  int d_hat = 0;
  bool rowsum_violation = false;
  bool plugin_violation = false;
};

UnitResult run_unit(const ExperimentPlan& plan, const ScenarioConfig& cfg) {
  UnitResult u;
  const CorrelationStructure cs = random_structure(cfg);
  auto [sample, truth] = generate(cfg, cs);

  const CoherenceSpectrum spec = coherence_spectrum(sample, cfg.J, plan.ridge);
  const BootstrapNull null = bootstrap_chunk_norms(
      sample, cfg.J, plan.B, rng::derive(cfg.seed, {kBootTag}), plan.ridge, 1);

  const DetectorSpec& det = plan.detectors;
  if (det.run_lfdr) {
    const Mat T = test_statistics(spec, null);
    const PValueMatrix P = p_values(T, null);
    const PvalueMixtureModel model = fit_lfdr_model(P);
    const Mat L = atom_lfdrs(P, model);
    const DetectionResult res =
        detect(L, det.alpha, det.alpha_cmp, rng::derive(cfg.seed, {kDetectTag}));
    u.lfdr_counts = score(res.M, truth);
    u.lfdr_m = res.M;
    u.rowsum_violation = !res.M.rows_feasible();
    u.plugin_violation =
        res.fdr_hat > det.alpha || res.fdr_cmp_hat > det.alpha_cmp;
  }
  if (det.run_ts) {
    const int d_hat = ts_step1(spec, null, det.alpha_fa1);
    const ActivationMatrix m = ts_step2(spec, null, d_hat, det.alpha_fa2);
    u.ts_counts = score(m, truth);
    u.ts_m = m;
    u.d_hat = d_hat;
  }
  u.ok = true;
  return u;
}

std::string summary_header(bool with_d_hat) {
  std::string h = "param,fdr,power,fdr_cmp,power_cmp";
  if (with_d_hat) h += ",mean_d_hat";
  h += ",repetitions,failed\n";
  return h;
}

void append_summary_row(std::string& out, const GridPointSummary& g,
                        const MetricSummary& m, const double* mean_d_hat) {
  out += format_double(g.param);
  out += ',';
  out += format_double(m.fdr);
  out += ',';
  out += format_double(m.power);
  out += ',';
  out += format_double(m.fdr_cmp);
  out += ',';
  out += format_double(m.power_cmp);
  if (mean_d_hat) {
    out += ',';
    out += format_double(*mean_d_hat);
  }
  out += ',';
  out += std::to_string(m.repetitions);
  out += ',';
  out += std::to_string(g.failed);
  out += '\n';
}

json contamination_to_json(const Contamination& c) {
  json j;
  switch (c.kind) {
    case Contamination::Kind::none: j["kind"] = "none"; break;
    case Contamination::Kind::wideband: j["kind"] = "wideband"; break;
    case Contamination::Kind::pointmass: j["kind"] = "pointmass"; break;
  }
  j["eps"] = c.eps;
  if (c.kind == Contamination::Kind::pointmass) {
    j["delta"] = c.delta;
    j["rows"] = c.rows;
    j["sets"] = c.sets;
  }
  return j;
}

Contamination contamination_from_json(const json& j) {
  Contamination c;
  const std::string kind = j.value("kind", "none");
  if (kind == "none") {
    c.kind = Contamination::Kind::none;
  } else if (kind == "wideband") {
    c.kind = Contamination::Kind::wideband;
  } else if (kind == "pointmass") {
    c.kind = Contamination::Kind::pointmass;
  } else {
    throw std::invalid_argument("plan: unknown contamination kind '" + kind +
                                "'");
  }
  c.eps = j.value("eps", 0.0);
  c.delta = j.value("delta", 10.0);
  if (j.contains("rows")) c.rows = j.at("rows").get<std::vector<int>>();
  if (j.contains("sets")) c.sets = j.at("sets").get<std::vector<int>>();
  return c;
}

json scenario_to_json(const ScenarioConfig& s) {
  json j;
  j["K"] = s.K;
  j["J"] = s.J;
  j["N"] = s.N;
  j["I"] = s.I;
  j["snr_db"] = s.snr_db;
  j["pi0"] = s.pi0;
  j["dist"] = s.dist == ComponentDist::gaussian ? "gaussian" : "laplacian";
  j["contamination"] = contamination_to_json(s.contamination);
  if (!s.fixed_components.empty()) {
    json fc = json::array();
    for (const auto& [count, rho] : s.fixed_components) {
      fc.push_back({{"count", count}, {"rho", rho}});
    }
    j["fixed_components"] = fc;
  }
  return j;
}

ScenarioConfig scenario_from_json(const json& j) {
  ScenarioConfig s;
  s.K = j.value("K", s.K);
  s.J = j.value("J", s.J);
  s.N = j.value("N", s.N);
  s.I = j.value("I", s.I);
  s.snr_db = j.value("snr_db", s.snr_db);
  s.pi0 = j.value("pi0", s.pi0);
  const std::string dist = j.value("dist", "gaussian");
  if (dist == "gaussian") {
    s.dist = ComponentDist::gaussian;
  } else if (dist == "laplacian") {
    s.dist = ComponentDist::laplacian;
  } else {
    throw std::invalid_argument("plan: unknown dist '" + dist + "'");
  }
  if (j.contains("contamination")) {
    s.contamination = contamination_from_json(j.at("contamination"));
  }
  if (j.contains("fixed_components")) {
    for (const json& fc : j.at("fixed_components")) {
      s.fixed_components.emplace_back(fc.at("count").get<int>(),
                                      fc.at("rho").get<double>());
    }
  }
  return s;
}

}  // namespace

std::string sweep_name(SweepVariable v) {
  switch (v) {
    case SweepVariable::snr: return "snr";
    case SweepVariable::n: return "n";
    case SweepVariable::k: return "k";
    case SweepVariable::pi0: return "pi0";
    case SweepVariable::eps: return "eps";
  }
  return "snr";
}

SweepVariable sweep_from_name(const std::string& name) {
  if (name == "snr") return SweepVariable::snr;
  if (name == "n") return SweepVariable::n;
  if (name == "k") return SweepVariable::k;
  if (name == "pi0") return SweepVariable::pi0;
  if (name == "eps") return SweepVariable::eps;
  throw std::invalid_argument("unknown sweep variable '" + name +
                              "' (expected snr, n, k, pi0, or eps)");
}

void ExperimentPlan::validate() const {
  if (grid.empty()) throw std::invalid_argument("plan: grid must be nonempty");
  if (repetitions < 1) {
    throw std::invalid_argument("plan: repetitions must be >= 1");
  }
  if (B < 50) throw std::invalid_argument("plan: B must be >= 50");
  if (!detectors.run_lfdr && !detectors.run_ts) {
    throw std::invalid_argument("plan: no detector enabled");
  }
  if (out_dir.empty()) throw std::invalid_argument("plan: out_dir is empty");
  for (double v : grid) {
    apply_sweep(base, sweep, v);  // validates each grid value
  }
}

ScenarioConfig apply_sweep(const ScenarioConfig& base, SweepVariable v,
                           double value) {
  ScenarioConfig cfg = base;
  switch (v) {
    case SweepVariable::snr:
      cfg.snr_db = value;
      break;
    case SweepVariable::n:
    case SweepVariable::k: {
      const int iv = static_cast<int>(std::lround(value));
      if (iv < 1 || std::abs(value - iv) > 1e-9) {
        throw std::invalid_argument("sweep: " + sweep_name(v) +
                                    " grid values must be positive integers");
      }
      if (v == SweepVariable::n) {
        cfg.N = iv;
      } else {
        cfg.K = iv;
      }
      break;
    }
    case SweepVariable::pi0:
      if (value < 0.0 || value >= 1.0) {
        throw std::invalid_argument("sweep: pi0 grid values must be in [0,1)");
      }
      cfg.pi0 = value;
      break;
    case SweepVariable::eps:
      if (value < 0.0 || value > 1.0) {
        throw std::invalid_argument("sweep: eps grid values must be in [0,1]");
      }
      cfg.contamination.eps = value;
      break;
  }
  return cfg;
}

int resolve_workers(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("COSTID_WORKERS")) {
    const int w = std::atoi(env);
    if (w > 0) return w;
  }
  return 1;
}

RunOutcome run(const ExperimentPlan& plan) {
  plan.validate();
  namespace fs = std::filesystem;
  fs::create_directories(plan.out_dir);

  const int G = static_cast<int>(plan.grid.size());
  const int R = plan.repetitions;
  const std::size_t n_units = static_cast<std::size_t>(G) * R;
  std::vector<UnitResult> results(n_units);
  const int workers = resolve_workers(plan.workers);

  parallel_for(n_units, workers, [&](std::size_t u) {
    const int g = static_cast<int>(u) / R;
    const int r = static_cast<int>(u) % R;
    ScenarioConfig cfg = apply_sweep(plan.base, plan.sweep, plan.grid[g]);
    cfg.seed = rng::derive(plan.seed, {static_cast<std::uint64_t>(g),
                                  static_cast<std::uint64_t>(r)});
    UnitResult& out = results[u];
    try {
      out = run_unit(plan, cfg);
    } catch (const std::exception& e) {
      out.ok = false;
      out.error = e.what();
    }
  });

  RunOutcome outcome;
  outcome.points.reserve(G);
  std::string lfdr_csv = summary_header(false);
  std::string ts_csv = summary_header(true);
  std::string failures;

  for (int g = 0; g < G; ++g) {
    GridPointSummary gp;
    gp.param = plan.grid[g];
    std::vector<ConfusionCounts> lfdr_counts, ts_counts;
    std::vector<ActivationMatrix> lfdr_ms, ts_ms;
    double d_hat_sum = 0.0;
    for (int r = 0; r < R; ++r) {
      const UnitResult& u = results[static_cast<std::size_t>(g) * R + r];
      if (!u.ok) {
        ++gp.failed;
        gp.errors.push_back(u.error);
        failures += format_double(gp.param);
        failures += ',';
        failures += std::to_string(r);
        failures += ",\"";
        failures += u.error;
        failures += "\"\n";
        continue;
      }
      if (plan.detectors.run_lfdr) {
        lfdr_counts.push_back(u.lfdr_counts);
        lfdr_ms.push_back(u.lfdr_m);
        gp.rowsum_violations += u.rowsum_violation ? 1 : 0;
        gp.plugin_violations += u.plugin_violation ? 1 : 0;
      }
      if (plan.detectors.run_ts) {
        ts_counts.push_back(u.ts_counts);
        ts_ms.push_back(u.ts_m);
        d_hat_sum += u.d_hat;
      }
    }
    const std::string tag = format_double(gp.param);
    if (plan.detectors.run_lfdr) {
      gp.lfdr = aggregate(lfdr_counts);
      append_summary_row(lfdr_csv, gp, gp.lfdr, nullptr);
      if (!lfdr_ms.empty()) {
        write_text_file(
            plan.out_dir + "/heatmap_lfdr_mult_cost_" + sweep_name(plan.sweep) +
                "_" + tag + ".svg",
            heatmap_svg(mean_activation(lfdr_ms),
                        "lfdr-mult-cost: mean activation, " +
                            sweep_name(plan.sweep) + " = " + tag));
      }
    }
    if (plan.detectors.run_ts) {
      gp.ts = aggregate(ts_counts);
      gp.ts_mean_d_hat =
          ts_counts.empty() ? 0.0 : d_hat_sum / static_cast<double>(ts_counts.size());
      append_summary_row(ts_csv, gp, gp.ts, &gp.ts_mean_d_hat);
      if (!ts_ms.empty()) {
        write_text_file(
            plan.out_dir + "/heatmap_two_step_" + sweep_name(plan.sweep) + "_" +
                tag + ".svg",
            heatmap_svg(mean_activation(ts_ms),
                        "two-step: mean activation, " + sweep_name(plan.sweep) +
                            " = " + tag));
      }
    }
    outcome.points.push_back(std::move(gp));
  }

  if (plan.detectors.run_lfdr) {
    write_text_file(plan.out_dir + "/summary_lfdr_mult_cost.csv", lfdr_csv);
  }
  if (plan.detectors.run_ts) {
    write_text_file(plan.out_dir + "/summary_two_step.csv", ts_csv);
  }
  if (!failures.empty()) {
    write_text_file(plan.out_dir + "/failures.csv",
                    "param,repetition,error\n" + failures);
  }

  // Manifest: enough to reproduce the run byte-for-byte. The worker count
  // does not influence results and is normalized out.
  ExperimentPlan normalized = plan;
  normalized.workers = 0;
  json manifest;
  manifest["plan"] = json::parse(plan_to_json(normalized));
  manifest["kernels"] = kern::active().name;
  write_text_file(plan.out_dir + "/manifest.json", manifest.dump(2) + "\n");

  return outcome;
}

std::vector<std::string> preset_names() {
  return {"exp1", "exp2", "exp3", "exp3b", "exp4", "exp5a", "exp5b"};
}

ExperimentPlan preset(const std::string& name) {
  ExperimentPlan p;
  p.name = name;
  p.out_dir = "out/" + name;
  if (name == "exp1") {
    // Fixed six-component structure with random memberships, small sample.
    p.base.K = 15;
    p.base.J = 10;
    p.base.N = 300;
    p.base.dist = ComponentDist::gaussian;
    p.base.fixed_components = {{7, 0.7}, {6, 0.7},  {5, 0.65},
                               {4, 0.6}, {3, 0.6},  {2, 0.55}};
    p.sweep = SweepVariable::snr;
    p.grid = {-10, -5, 0, 5, 10};
  } else if (name == "exp2") {
    p.base.K = 20;
    p.base.J = 10;
    p.base.snr_db = 5.0;
    p.base.pi0 = 0.7;
    p.base.dist = ComponentDist::gaussian;
    p.sweep = SweepVariable::n;
    p.grid = {175, 250, 375, 500, 750};
  } else if (name == "exp3" || name == "exp3b") {
    p.base.N = 500;
    p.base.J = 10;
    p.base.snr_db = 5.0;
    p.base.pi0 = (name == "exp3") ? 0.8 : 0.9;
    p.base.dist = ComponentDist::laplacian;
    p.sweep = SweepVariable::k;
    p.grid = {9, 16, 23, 30};
  } else if (name == "exp4") {
    p.base.K = 25;
    p.base.N = 600;
    p.base.J = 10;
    p.base.snr_db = 5.0;
    p.base.dist = ComponentDist::gaussian;
    p.sweep = SweepVariable::pi0;
    p.grid = {0.7, 0.8, 0.9, 0.95, 0.975};
  } else if (name == "exp5a" || name == "exp5b") {
    p.base.K = 12;
    p.base.J = 6;
    p.base.N = 1000;
    p.base.snr_db = 5.0;
    p.base.pi0 = 0.7;
    p.base.dist = ComponentDist::gaussian;
    if (name == "exp5a") {
      p.base.contamination = Contamination::wideband(0.0);
    } else {
      p.base.contamination =
          Contamination::pointmass(0.0, 10.0, {0, 1, 2, 3},
                                   {0, 1, 2, 3, 4, 5, 6, 7});
    }
    p.sweep = SweepVariable::eps;
    p.grid = {0.0, 0.25, 0.5, 1.0};
  } else {
    throw std::invalid_argument("unknown preset '" + name +
                                "' (run `costid presets` for the list)");
  }
  return p;
}

std::string plan_to_json(const ExperimentPlan& plan) {
  json j;
  j["name"] = plan.name;
  j["scenario"] = scenario_to_json(plan.base);
  j["sweep"] = sweep_name(plan.sweep);
  j["grid"] = plan.grid;
  j["repetitions"] = plan.repetitions;
  j["detectors"] = {
      {"lfdr_mult_cost",
       {{"enabled", plan.detectors.run_lfdr},
        {"alpha", plan.detectors.alpha},
        {"alpha_cmp", plan.detectors.alpha_cmp}}},
      {"two_step",
       {{"enabled", plan.detectors.run_ts},
        {"alpha_fa1", plan.detectors.alpha_fa1},
        {"alpha_fa2", plan.detectors.alpha_fa2}}}};
  j["bootstrap_samples"] = plan.B;
  j["seed"] = plan.seed;
  j["out_dir"] = plan.out_dir;
  if (plan.workers > 0) j["workers"] = plan.workers;
  j["ridge"] = plan.ridge;
  return j.dump(2) + "\n";
}

ExperimentPlan load_plan(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("plan: cannot open '" + path + "'");
  }
  json j;
  try {
    j = json::parse(in);
  } catch (const json::parse_error& e) {
    throw std::runtime_error("plan: '" + path + "' is not valid JSON: " +
                             e.what());
  }
  ExperimentPlan p;
  try {
    if (j.contains("preset")) {
      p = preset(j.at("preset").get<std::string>());
    }
    p.name = j.value("name", p.name);
    if (j.contains("scenario")) p.base = scenario_from_json(j.at("scenario"));
    if (j.contains("sweep")) {
      p.sweep = sweep_from_name(j.at("sweep").get<std::string>());
    }
    if (j.contains("grid")) p.grid = j.at("grid").get<std::vector<double>>();
    p.repetitions = j.value("repetitions", p.repetitions);
    if (j.contains("detectors")) {
      const json& d = j.at("detectors");
      if (d.contains("lfdr_mult_cost")) {
        const json& l = d.at("lfdr_mult_cost");
        p.detectors.run_lfdr = l.value("enabled", p.detectors.run_lfdr);
        p.detectors.alpha = l.value("alpha", p.detectors.alpha);
        p.detectors.alpha_cmp = l.value("alpha_cmp", p.detectors.alpha_cmp);
      }
      if (d.contains("two_step")) {
        const json& t = d.at("two_step");
        p.detectors.run_ts = t.value("enabled", p.detectors.run_ts);
        p.detectors.alpha_fa1 = t.value("alpha_fa1", p.detectors.alpha_fa1);
        p.detectors.alpha_fa2 = t.value("alpha_fa2", p.detectors.alpha_fa2);
      }
    }
    p.B = j.value("bootstrap_samples", p.B);
    p.seed = j.value("seed", p.seed);
    p.out_dir = j.value("out_dir", p.out_dir);
    p.workers = j.value("workers", p.workers);
    p.ridge = j.value("ridge", p.ridge);
  } catch (const json::exception& e) {
    throw std::runtime_error("plan: '" + path + "': " + e.what());
  }
  p.validate();
  return p;
}

}  // namespace costid
