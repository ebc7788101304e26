#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

#include "costid/csv.hpp"
#include "costid/simgen.hpp"

using namespace costid;
namespace fs = std::filesystem;

namespace {

// The binary under test; exported by the build as COSTID_CLI.
std::string cli_path() {
  const char* p = std::getenv("COSTID_CLI");
  REQUIRE_MESSAGE(p != nullptr, "COSTID_CLI must point at the costid binary");
  return p;
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& tag) {
    path = fs::temp_directory_path() /
           ("costid_cli_" + tag + "_" + std::to_string(::getpid()));
    std::error_code ec;
    fs::remove_all(path, ec);
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string dir(const std::string& name) const {
    return (path / name).string();
  }
};

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in.good()) return {};
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

struct CliResult {
  int exit_code = -1;
  std::string out;
  std::string err;
};

CliResult run_cli(const std::string& args) {
  static int counter = 0;
  const fs::path base = fs::temp_directory_path() /
                        ("costid_cli_io_" + std::to_string(::getpid()) + "_" +
                         std::to_string(counter++));
  const std::string out_file = base.string() + ".out";
  const std::string err_file = base.string() + ".err";
  const std::string cmd = "\"" + cli_path() + "\" " + args + " > \"" +
                          out_file + "\" 2> \"" + err_file + "\"";
  const int status = std::system(cmd.c_str());
  CliResult r;
  REQUIRE(status != -1);
  REQUIRE(WIFEXITED(status));
  r.exit_code = WEXITSTATUS(status);
  r.out = slurp(out_file);
  r.err = slurp(err_file);
  std::error_code ec;
  fs::remove(out_file, ec);
  fs::remove(err_file, ec);
  return r;
}

}  // namespace

TEST_CASE("presets lists every built-in experiment") {
  const CliResult r = run_cli("presets");
  CHECK(r.exit_code == 0);
  for (const char* name :
       {"exp1", "exp2", "exp3", "exp3b", "exp4", "exp5a", "exp5b"}) {
    INFO(name);
    CHECK(r.out.find(name) != std::string::npos);
  }
}

TEST_CASE("presets --dump emits a loadable plan JSON") {
  const CliResult r = run_cli("presets --dump exp1");
  CHECK(r.exit_code == 0);
  const nlohmann::json j = nlohmann::json::parse(r.out);
  CHECK(j.at("sweep") == "snr");
  CHECK(j.at("scenario").at("K") == 15);
  CHECK(j.at("bootstrap_samples") == 300);

  const CliResult bad = run_cli("presets --dump exp99");
  CHECK(bad.exit_code == 1);
  CHECK(bad.err.find("exp99") != std::string::npos);
}

TEST_CASE("run rejects missing inputs with a useful message") {
  const CliResult none = run_cli("run");
  CHECK(none.exit_code == 2);
  CHECK(none.err.find("plan") != std::string::npos);

  const CliResult missing = run_cli("run /no/such/plan.json");
  CHECK(missing.exit_code == 1);
  CHECK(missing.err.find("/no/such/plan.json") != std::string::npos);

  const CliResult preset = run_cli("run --preset exp99");
  CHECK(preset.exit_code == 1);
  CHECK(preset.err.find("exp99") != std::string::npos);
}

TEST_CASE("run executes a plan file end to end") {
  TempDir tmp("run");
  const std::string out_dir = tmp.dir("out");
  const std::string plan_path = tmp.dir("plan.json");
  write_text_file(plan_path, std::string(R"({
    "name": "cli-smoke",
    "scenario": {"K": 2, "J": 10, "N": 100, "pi0": 0.8, "snr_db": 0},
    "sweep": "snr",
    "grid": [-60],
    "repetitions": 1,
    "bootstrap_samples": 60,
    "seed": 2024,
    "out_dir": ")") + out_dir + "\"}\n");

  const CliResult r = run_cli("run \"" + plan_path + "\"");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("cli-smoke") != std::string::npos);
  CHECK(r.out.find("lfdr-mult-cost fdr=") != std::string::npos);
  CHECK(r.out.find("two-step fdr=") != std::string::npos);
  CHECK(fs::exists(fs::path(out_dir) / "summary_lfdr_mult_cost.csv"));
  CHECK(fs::exists(fs::path(out_dir) / "summary_two_step.csv"));
  CHECK(fs::exists(fs::path(out_dir) / "manifest.json"));
}

TEST_CASE("run flags override the plan") {
  TempDir tmp("override");
  const std::string out_dir = tmp.dir("moved");
  // Same smoke plan, but relocated via --out and resized via --reps.
  const std::string plan_path = tmp.dir("plan.json");
  write_text_file(plan_path, std::string(R"({
    "name": "cli-smoke",
    "scenario": {"K": 2, "J": 10, "N": 100, "pi0": 0.8},
    "sweep": "snr",
    "grid": [-60],
    "repetitions": 3,
    "bootstrap_samples": 60,
    "seed": 2024,
    "out_dir": ")") + tmp.dir("ignored") + "\"}\n");

  const CliResult r = run_cli("run \"" + plan_path + "\" --out \"" + out_dir +
                              "\" --reps 1 -B 50");
  CHECK(r.exit_code == 0);
  CHECK(fs::exists(fs::path(out_dir) / "manifest.json"));
  CHECK(!fs::exists(fs::path(tmp.dir("ignored")) / "manifest.json"));
  const std::string manifest = slurp((fs::path(out_dir) / "manifest.json").string());
  const nlohmann::json j = nlohmann::json::parse(manifest);
  CHECK(j.at("plan").at("repetitions") == 1);
  CHECK(j.at("plan").at("bootstrap_samples") == 50);
}

TEST_CASE("detect runs both detectors on exported set CSVs") {
  TempDir tmp("detect");
  const std::string data_dir = tmp.dir("data");
  fs::create_directories(data_dir);

  // Export a strongly correlated 3-set scenario, one CSV per set.
  ScenarioConfig cfg;
  cfg.K = 3;
  cfg.J = 8;
  cfg.N = 400;
  cfg.pi0 = 0.5;
  cfg.snr_db = 10.0;
  cfg.seed = 60001;
  const CorrelationStructure cs = random_structure(cfg);
  const auto [sample, truth] = generate(cfg, cs);
  for (int k = 0; k < cfg.K; ++k) {
    write_matrix_csv(data_dir + "/set" + std::to_string(k) + ".csv",
                     sample.sets[k]);
  }

  const std::string out_dir = tmp.dir("out");
  const CliResult r = run_cli("detect \"" + data_dir + "\" --out \"" + out_dir +
                              "\" -B 80 --seed 7");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("read 3 sets, N = 400") != std::string::npos);
  CHECK(r.out.find("lfdr-mult-cost:") != std::string::npos);
  CHECK(r.out.find("two-step: d_hat=") != std::string::npos);

  const ActivationMatrix m =
      read_activation_csv(out_dir + "/m_lfdr_mult_cost.csv");
  CHECK(m.J == 8);  // min set dimension
  CHECK(m.K == 3);
  CHECK(m.rows_feasible());
  const ActivationMatrix m_ts = read_activation_csv(out_dir + "/m_two_step.csv");
  CHECK(m_ts.J == 8);
  CHECK(fs::exists(fs::path(out_dir) / "eigenvalues.csv"));
  CHECK(fs::exists(fs::path(out_dir) / "chunk_norms.csv"));
  CHECK(fs::exists(fs::path(out_dir) / "p_values.csv"));
  CHECK(fs::exists(fs::path(out_dir) / "chunk_norms.svg"));

  const nlohmann::json diag =
      nlohmann::json::parse(slurp(out_dir + "/diagnostics.json"));
  CHECK(diag.contains("fdr_hat"));
  CHECK(diag.contains("two_step_d_hat"));
  CHECK(diag.at("mixture").contains("pi0"));
}

TEST_CASE("detect rejects unusable data directories") {
  TempDir tmp("detect_bad");
  const std::string empty_dir = tmp.dir("empty");
  fs::create_directories(empty_dir);
  const CliResult r = run_cli("detect \"" + empty_dir + "\"");
  CHECK(r.exit_code == 2);
  CHECK(r.err.find("at least 2") != std::string::npos);

  const CliResult gone = run_cli("detect \"" + tmp.dir("missing") + "\"");
  CHECK(gone.exit_code == 2);
}

TEST_CASE("kernel backend flag is validated") {
  const CliResult ok = run_cli("--kernels scalar presets");
  CHECK(ok.exit_code == 0);
  const CliResult bad = run_cli("--kernels sse9000 presets");
  CHECK(bad.exit_code != 0);
}
