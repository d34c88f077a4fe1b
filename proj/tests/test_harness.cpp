#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "prodlaw/config.hpp"
#include "prodlaw/experiment.hpp"
#include "prodlaw/report.hpp"

using prodlaw::cd;
using prodlaw::ExperimentConfig;

namespace {

namespace fs = std::filesystem;

struct TempDir {
  fs::path path;
  TempDir() : path(fs::temp_directory_path() / "prodlaw_test_io") {
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

ExperimentConfig tiny_config() {
  ExperimentConfig cfg;
  cfg.ensemble.m = 2;
  cfg.ensemble.n = 12;
  cfg.ensemble.seed = 321;
  cfg.trials = 3;
  return cfg;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("complex literal grammar") {
  CHECK(prodlaw::parse_complex("2") == cd(2, 0));
  CHECK(prodlaw::parse_complex("-1.5") == cd(-1.5, 0));
  CHECK(prodlaw::parse_complex("i") == cd(0, 1));
  CHECK(prodlaw::parse_complex("-i") == cd(0, -1));
  CHECK(prodlaw::parse_complex("2i") == cd(0, 2));
  CHECK(prodlaw::parse_complex("1+2i") == cd(1, 2));
  CHECK(prodlaw::parse_complex("1-2i") == cd(1, -2));
  CHECK(prodlaw::parse_complex(" 0.5 + 0.25i ") == cd(0.5, 0.25));
  CHECK(prodlaw::parse_complex("1.5e-3-2e1i") == cd(1.5e-3, -20));
  CHECK(prodlaw::parse_complex("+0.5i") == cd(0, 0.5));
  CHECK(prodlaw::parse_complex("1e2+i") == cd(100, 1));

  // all interior whitespace is stripped before parsing
  CHECK(prodlaw::parse_complex("2 3") == cd(23, 0));

  for (const char* bad : {"", "2+", "1x", "i2", "1+2", "--3"}) {
    CHECK_THROWS_AS((void)prodlaw::parse_complex(bad), std::invalid_argument);
  }
}

TEST_CASE("settings grammar covers every key and rejects unknown ones") {
  ExperimentConfig cfg;
  prodlaw::apply_setting(cfg, "m", "3");
  prodlaw::apply_setting(cfg, "n", "32");
  prodlaw::apply_setting(cfg, "dist", "rademacher");
  prodlaw::apply_setting(cfg, "sigmas", "1, 2, 0.5");
  prodlaw::apply_setting(cfg, "seed", "18446744073709551615");
  prodlaw::apply_setting(cfg, "moment_eta", "0.5");
  prodlaw::apply_setting(cfg, "trials", "7");
  prodlaw::apply_setting(cfg, "n_sweep", "16, 32, 64");
  prodlaw::apply_setting(cfg, "delta", "0.25");
  prodlaw::apply_setting(cfg, "out", "somewhere/run1");
  prodlaw::apply_setting(cfg, "format", "csv");
  prodlaw::apply_setting(cfg, "workers", "4");
  prodlaw::apply_setting(cfg, "probe", "0.5 ; 2+1i");
  prodlaw::apply_setting(cfg, "probe_grid", "1, 2i ; 3+1i, 4i");

  CHECK(cfg.ensemble.m == 3);
  CHECK(cfg.ensemble.n == 32);
  CHECK(cfg.ensemble.dist == prodlaw::Dist::rademacher);
  CHECK(cfg.ensemble.sigmas == std::vector<double>{1.0, 2.0, 0.5});
  CHECK(cfg.ensemble.seed == 18446744073709551615ull);
  CHECK(cfg.ensemble.moment_eta == 0.5);
  CHECK(cfg.trials == 7);
  CHECK(cfg.n_sweep == std::vector<int>{16, 32, 64});
  CHECK(cfg.truncation_delta == 0.25);
  CHECK(cfg.output == "somewhere/run1");
  CHECK(cfg.format == "csv");
  CHECK(cfg.workers == 4);
  REQUIRE(cfg.probes.size() == 5);
  CHECK(cfg.probes[0].z == cd(0.5, 0));
  CHECK(cfg.probes[0].alpha == cd(2, 1));
  // grid order: z outer, alpha inner
  CHECK(cfg.probes[1].z == cd(1, 0));
  CHECK(cfg.probes[1].alpha == cd(3, 1));
  CHECK(cfg.probes[2].z == cd(1, 0));
  CHECK(cfg.probes[2].alpha == cd(0, 4));
  CHECK(cfg.probes[3].z == cd(0, 2));
  CHECK(cfg.probes[4].alpha == cd(0, 4));

  CHECK_THROWS_AS(prodlaw::apply_setting(cfg, "nn", "3"), std::invalid_argument);
  CHECK_THROWS_AS(prodlaw::apply_setting(cfg, "m", "two"), std::invalid_argument);
  CHECK_THROWS_AS(prodlaw::apply_setting(cfg, "probe", "0.5"), std::invalid_argument);

  // format values are stored verbatim; the domain check happens in validate()
  CHECK_NOTHROW(cfg.validate());
  prodlaw::apply_setting(cfg, "format", "xml");
  CHECK(cfg.format == "xml");
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("config files parse with comments and report the offending line") {
  TempDir tmp;
  const fs::path good = tmp.path / "good.cfg";
  {
    std::ofstream out(good);
    out << "# header comment\n"
        << "m = 2\n"
        << "\n"
        << "n = 24   # trailing comment\n"
        << "probe = 1.5 ; 2+1i\n";
  }
  ExperimentConfig cfg = prodlaw::parse_config_file(good.string());
  CHECK(cfg.ensemble.m == 2);
  CHECK(cfg.ensemble.n == 24);
  REQUIRE(cfg.probes.size() == 1);
  CHECK(cfg.probes[0].z == cd(1.5, 0));

  const fs::path bad = tmp.path / "bad.cfg";
  {
    std::ofstream out(bad);
    out << "m = 2\n"
        << "trials == 4\n";
  }
  try {
    (void)prodlaw::parse_config_file(bad.string());
    FAIL("expected a parse error");
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    CHECK(msg.find(":2") != std::string::npos);
  }

  CHECK_THROWS_AS((void)prodlaw::parse_config_file((tmp.path / "absent.cfg").string()),
                  std::invalid_argument);
}

TEST_CASE("config validation") {
  ExperimentConfig cfg = tiny_config();
  CHECK_NOTHROW(cfg.validate());

  cfg.trials = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = tiny_config();
  cfg.workers = 0;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = tiny_config();
  cfg.format = "yaml";
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = tiny_config();
  cfg.truncation_delta = -0.1;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = tiny_config();
  cfg.n_sweep = {16, 16};
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = tiny_config();
  cfg.n_sweep = {32, 16};
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = tiny_config();
  cfg.probes = {{cd(0.5, 0), cd(1, 0)}};  // alpha on the real axis
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
  cfg = tiny_config();
  cfg.probes = {{cd(11, 0), cd(1, 1)}};  // z outside the probe window
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
}

TEST_CASE("semantic hash tracks exactly the meaningful fields") {
  const ExperimentConfig base = tiny_config();
  const std::uint64_t h0 = base.semantic_hash();
  CHECK(h0 == tiny_config().semantic_hash());

  auto changed = [&](auto&& mutate) {
    ExperimentConfig c = tiny_config();
    mutate(c);
    return c.semantic_hash() != h0;
  };

  CHECK(changed([](ExperimentConfig& c) { c.ensemble.m = 3; }));
  CHECK(changed([](ExperimentConfig& c) { c.ensemble.n = 13; }));
  CHECK(changed([](ExperimentConfig& c) { c.ensemble.dist = prodlaw::Dist::rademacher; }));
  CHECK(changed([](ExperimentConfig& c) { c.ensemble.seed = 322; }));
  CHECK(changed([](ExperimentConfig& c) { c.ensemble.sigmas = {2.0, 0.5}; }));
  CHECK(changed([](ExperimentConfig& c) { c.ensemble.moment_eta = 0.25; }));
  CHECK(changed([](ExperimentConfig& c) { c.trials = 4; }));
  CHECK(changed([](ExperimentConfig& c) { c.n_sweep = {12, 24}; }));
  CHECK(changed([](ExperimentConfig& c) { c.truncation_delta = 0.5; }));
  CHECK(changed([](ExperimentConfig& c) { c.probes.push_back({cd(1, 0), cd(2, 1)}); }));

  CHECK_FALSE(changed([](ExperimentConfig& c) { c.output = "elsewhere"; }));
  CHECK_FALSE(changed([](ExperimentConfig& c) { c.format = "csv"; }));
  CHECK_FALSE(changed([](ExperimentConfig& c) { c.workers = 9; }));
}

TEST_CASE("doubles serialize to the shortest lossless form") {
  for (double v : {0.1, 1.0 / 3.0, 1e-17, 6.75, 0.0, -2.5e300}) {
    const std::string s = prodlaw::format_double(v);
    CHECK(std::stod(s) == v);
  }
  CHECK(prodlaw::format_double(0.1) == "0.1");
  CHECK(prodlaw::format_double(2.0) == "2");
}

TEST_CASE("report json round-trips every numeric field exactly") {
  ExperimentConfig cfg = tiny_config();
  cfg.probes = {{cd(1.2, 0), cd(2, 1)}};
  cfg.truncation_delta = 0.25;
  prodlaw::Report r = prodlaw::run_experiment(cfg);
  REQUIRE(r.trials.size() == 3);

  const std::string once = prodlaw::report_to_json(r);
  prodlaw::Report back = prodlaw::report_from_json(once);
  const std::string twice = prodlaw::report_to_json(back);
  CHECK(prodlaw::strip_timestamp_line(once) == prodlaw::strip_timestamp_line(twice));

  CHECK(back.config_hash == r.config_hash);
  CHECK(back.seed == r.seed);
  CHECK(back.failed == 0);
  REQUIRE(back.trials.size() == r.trials.size());
  for (std::size_t i = 0; i < r.trials.size(); ++i) {
    CHECK(back.trials[i].radial_ks == r.trials[i].radial_ks);
    CHECK(back.trials[i].probe_stieltjes_err == r.trials[i].probe_stieltjes_err);
    CHECK(back.trials[i].trunc_levy == r.trials[i].trunc_levy);
  }
  CHECK(back.radius_hist.counts == r.radius_hist.counts);
}

TEST_CASE("aggregates are recomputable from the records") {
  prodlaw::Report r = prodlaw::run_experiment(tiny_config());
  const auto again = prodlaw::compute_aggregates(r.trials);
  REQUIRE(again.size() == r.aggregates.size());
  for (const auto& [key, stats] : r.aggregates) {
    REQUIRE(again.count(key) == 1);
    CHECK(again.at(key).mean == stats.mean);
    CHECK(again.at(key).max == stats.max);
    CHECK(again.at(key).q50 == stats.q50);
  }

  // failed trials carry no statistics and are skipped by the pooling
  prodlaw::TrialRecord failed;
  failed.status = "failed";
  failed.error = "synthetic";
  auto trials = r.trials;
  trials.push_back(failed);
  const auto pooled = prodlaw::compute_aggregates(trials);
  CHECK(pooled.at("radial_ks").mean == r.aggregates.at("radial_ks").mean);
}

TEST_CASE("csv export shape") {
  prodlaw::Report empty;
  const std::string header = prodlaw::report_to_csv(empty);
  CHECK(header ==
        "trial,n,m,dist,radial_ks,angular_ks,sigma_min,stieltjes_err_max,"
        "g_identity_resid,horn_margin,status\n");

  prodlaw::Report r = prodlaw::run_experiment(tiny_config());
  std::istringstream csv(prodlaw::report_to_csv(r));
  std::string line;
  int rows = 0;
  while (std::getline(csv, line)) ++rows;
  CHECK(rows == 1 + 3);

  // a failed trial keeps its row with empty statistic cells
  prodlaw::TrialRecord failed;
  failed.trial = 9;
  failed.n = 12;
  failed.m = 2;
  failed.dist = "complex-gaussian";
  failed.status = "failed";
  prodlaw::Report rf;
  rf.trials.push_back(failed);
  const std::string out = prodlaw::report_to_csv(rf);
  CHECK(out.find("9,12,2,complex-gaussian,,,,,,,failed") != std::string::npos);
}

TEST_CASE("experiment reports are deterministic and worker-count independent") {
  ExperimentConfig cfg = tiny_config();
  cfg.probes = {{cd(1.2, 0), cd(2, 1)}};

  prodlaw::Report serial = prodlaw::run_experiment(cfg);
  ExperimentConfig par = cfg;
  par.workers = 4;
  prodlaw::Report parallel = prodlaw::run_experiment(par);
  prodlaw::Report rerun = prodlaw::run_experiment(cfg);

  const std::string a = prodlaw::strip_timestamp_line(prodlaw::report_to_json(serial));
  const std::string b = prodlaw::strip_timestamp_line(prodlaw::report_to_json(parallel));
  const std::string c = prodlaw::strip_timestamp_line(prodlaw::report_to_json(rerun));
  CHECK(a == b);
  CHECK(a == c);

  for (int i = 0; i < 3; ++i) {
    CHECK(serial.trials[i].trial == i);
    CHECK(serial.trials[i].n == 12);
    CHECK(serial.trials[i].m == 2);
    CHECK(serial.trials[i].dist == "complex-gaussian");
    CHECK(serial.trials[i].status == "ok");
  }

  std::uint64_t pooled = 0;
  for (auto cnt : serial.radius_hist.counts) pooled += cnt;
  CHECK(pooled == 3ull * 12ull);
}

TEST_CASE("experiment file export writes the declared artifacts") {
  TempDir tmp;
  ExperimentConfig cfg = tiny_config();
  cfg.output = (tmp.path / "run").string();

  prodlaw::run_experiment(cfg);
  CHECK(fs::exists(tmp.path / "run.json"));
  CHECK(fs::exists(tmp.path / "run.radius_hist.csv"));
  CHECK(fs::exists(tmp.path / "run.radial_density.csv"));

  prodlaw::Report parsed = prodlaw::report_from_json(slurp(tmp.path / "run.json"));
  CHECK(parsed.trials.size() == 3);

  ExperimentConfig csv_cfg = cfg;
  csv_cfg.output = (tmp.path / "run2").string();
  csv_cfg.format = "csv";
  prodlaw::run_experiment(csv_cfg);
  CHECK(fs::exists(tmp.path / "run2.csv"));
  CHECK_FALSE(fs::exists(tmp.path / "run2.json"));

  ExperimentConfig bad = cfg;
  bad.output = (tmp.path / "missing_dir" / "run").string();
  CHECK_THROWS_AS((void)prodlaw::run_experiment(bad), prodlaw::IoError);
}

TEST_CASE("sweep merges per-dimension runs and checks the trend") {
  ExperimentConfig cfg;
  cfg.ensemble.m = 2;
  cfg.ensemble.seed = 808;
  cfg.trials = 2;
  cfg.n_sweep = {8, 16};

  prodlaw::Report sweep = prodlaw::convergence_sweep(cfg);
  CHECK(sweep.sweep_ns == std::vector<int>{8, 16});
  REQUIRE(sweep.sweep_mean_radial_ks.size() == 2);
  CHECK(sweep.trials.size() == 4);
  REQUIRE(sweep.sweep_monotone_ok.has_value());

  // single-element sweep degenerates to the plain run
  ExperimentConfig single = cfg;
  single.n_sweep = {16};
  prodlaw::Report one = prodlaw::convergence_sweep(single);
  ExperimentConfig plain = cfg;
  plain.n_sweep.clear();
  plain.ensemble.n = 16;
  prodlaw::Report direct = prodlaw::run_experiment(plain);
  CHECK(prodlaw::strip_timestamp_line(prodlaw::report_to_json(one)) ==
        prodlaw::strip_timestamp_line(prodlaw::report_to_json(direct)));

  ExperimentConfig empty = cfg;
  empty.n_sweep.clear();
  empty.ensemble.n = 16;
  CHECK_THROWS_AS((void)prodlaw::convergence_sweep(empty), std::invalid_argument);
}
