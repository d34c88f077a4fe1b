#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "prodlaw/config.hpp"
#include "prodlaw/experiment.hpp"
#include "prodlaw/limitlaw.hpp"
#include "prodlaw/report.hpp"
#include "prodlaw/verify.hpp"

namespace {

using namespace prodlaw;

struct CliOverride {
  std::string key;
  std::string value;
};

// Shared flag set for simulate/sweep; every flag funnels through the same
// key=value grammar as the config file, CLI winning over file.
void add_override_options(CLI::App* sub, std::vector<CliOverride>& overrides) {
  const auto bind = [sub, &overrides](const char* flag, const char* key, const char* help) {
    sub->add_option_function<std::string>(
        flag, [key, &overrides](const std::string& v) { overrides.push_back({key, v}); },
        help);
  };
  bind("--trials", "trials", "number of independent trials");
  bind("--n", "n", "matrix dimension");
  bind("--m", "m", "number of factors");
  bind("--dist", "dist",
       "entry law: complex-gaussian | real-gaussian | rademacher | uniform-disc");
  bind("--seed", "seed", "master seed");
  bind("--sigmas", "sigmas", "comma list of per-factor scales");
  bind("--moment-eta", "moment_eta", "recorded 2+eta moment assumption");
  bind("--delta", "delta", "truncation exponent; 0 disables");
  bind("--workers", "workers", "worker thread count");
  bind("--out", "out", "output path prefix");
  bind("--format", "format", "report format: json | csv");
  bind("--n-sweep", "n_sweep", "comma list of dimensions, strictly increasing");
  sub->add_option_function<std::vector<std::string>>(
      "--probe",
      [&overrides](const std::vector<std::string>& vs) {
        for (const std::string& v : vs) overrides.push_back({"probe", v});
      },
      "one probe as 'z ; alpha' (repeatable)");
  sub->add_option_function<std::string>(
      "--probe-grid",
      [&overrides](const std::string& v) { overrides.push_back({"probe_grid", v}); },
      "probe cross product as 'z1,z2 ; a1,a2'");
}

ExperimentConfig load_config(const std::string& config_path,
                             const std::vector<CliOverride>& overrides) {
  ExperimentConfig cfg;
  if (!config_path.empty()) cfg = parse_config_file(config_path);
  for (const CliOverride& o : overrides) apply_setting(cfg, o.key, o.value);
  return cfg;
}

void print_run_summary(const Report& r) {
  std::printf("trials: %zu ok, %d failed\n", r.trials.size() - static_cast<std::size_t>(r.failed),
              r.failed);
  for (const auto& [key, s] : r.aggregates) {
    std::printf("  %-18s mean=%-12.6g max=%-12.6g q50=%.6g\n", key.c_str(), s.mean, s.max,
                s.q50);
  }
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw IoError("write failed for '" + path + "'");
}

int run_simulate(const std::string& config_path, const std::vector<CliOverride>& overrides,
                 bool strict) {
  ExperimentConfig cfg = load_config(config_path, overrides);
  const Report r = run_experiment(cfg);
  print_run_summary(r);
  if (!cfg.output.empty()) {
    std::printf("report written to %s.%s\n", cfg.output.c_str(), cfg.format.c_str());
  }
  return (strict && r.failed > 0) ? 2 : 0;
}

int run_sweep(const std::string& config_path, const std::vector<CliOverride>& overrides,
              bool strict) {
  ExperimentConfig cfg = load_config(config_path, overrides);
  const Report r = convergence_sweep(cfg);
  for (std::size_t i = 0; i < r.sweep_ns.size(); ++i) {
    std::printf("n=%-6d mean radial KS = %.6g\n", r.sweep_ns[i], r.sweep_mean_radial_ks[i]);
  }
  const bool monotone = r.sweep_monotone_ok.value_or(true);
  std::printf("trend non-increasing within 0.01: %s\n", monotone ? "yes" : "NO");
  if (strict && (!monotone || r.failed > 0)) return 2;
  return 0;
}

int run_limit(int m, double sigma, int grid, std::optional<double> z_mod, double alpha_im,
              double y_eps, const std::string& out) {
  LimitLawParams law;
  law.m = m;
  law.sigma = sigma;
  law.validate();
  if (grid < 1) throw std::invalid_argument("--grid must be >= 1");
  if (!(alpha_im > 0.0)) throw std::invalid_argument("--alpha-im must be > 0");

  std::ostringstream radial;
  radial << "r,density,radial_cdf\n";
  for (int k = 0; k <= grid; ++k) {
    const double r = 1.05 * sigma * k / grid;
    radial << format_double(r) << ',' << format_double(limit_density(law, cd(r, 0.0))) << ','
           << format_double(radial_cdf(law, r)) << '\n';
  }

  std::ostringstream nu, stj;
  std::string support_line;
  if (z_mod) {
    const SupportInterval si = support_endpoints(*z_mod);
    support_line = "support: x1=" + format_double(si.x1) + " x2=" + format_double(si.x2);
    nu << "x,nu_density\n";
    for (int k = 0; k <= grid; ++k) {
      const double x = si.x1 + (si.x2 - si.x1) * k / grid;
      nu << format_double(x) << ',' << format_double(nu_density(x, *z_mod, y_eps)) << '\n';
    }
    stj << "re_alpha,re_delta,im_delta\n";
    for (int k = 0; k <= grid; ++k) {
      const double a = si.x1 - 2.0 + (si.x2 - si.x1 + 4.0) * k / grid;
      const cd d = stieltjes_branch(cd(a, alpha_im), *z_mod);
      stj << format_double(a) << ',' << format_double(d.real()) << ','
          << format_double(d.imag()) << '\n';
    }
  }

  if (out.empty()) {
    std::printf("# radial law m=%d sigma=%s\n%s", m, format_double(sigma).c_str(),
                radial.str().c_str());
    if (z_mod) {
      std::printf("# %s\n# nu density at |z|=%s\n%s", support_line.c_str(),
                  format_double(*z_mod).c_str(), nu.str().c_str());
      std::printf("# stieltjes branch at Im(alpha)=%s\n%s", format_double(alpha_im).c_str(),
                  stj.str().c_str());
    }
  } else {
    write_text_file(out + ".radial.csv", radial.str());
    std::printf("wrote %s.radial.csv\n", out.c_str());
    if (z_mod) {
      std::printf("%s\n", support_line.c_str());
      write_text_file(out + ".nu.csv", nu.str());
      write_text_file(out + ".stieltjes.csv", stj.str());
      std::printf("wrote %s.nu.csv and %s.stieltjes.csv\n", out.c_str(), out.c_str());
    }
  }
  return 0;
}

int run_verify(bool strict) {
  const std::vector<CheckResult> results = run_identity_suite();
  for (const CheckResult& r : results) {
    std::printf("%-3s %s  worst=%.3e  bound=%.0e  %s\n", r.id.c_str(),
                r.pass ? "PASS" : "FAIL", r.worst, r.bound, r.label.c_str());
  }
  const bool ok = all_pass(results);
  std::printf("identity suite: %s\n", ok ? "all checks passed" : "FAILURES PRESENT");
  return (!ok && strict) ? 2 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"product random matrix spectra: sampling, limit laws, verification"};
  app.require_subcommand(1);

  std::string sim_config, sweep_config;
  std::vector<CliOverride> sim_overrides, sweep_overrides;
  bool sim_strict = false, sweep_strict = false, verify_strict = false;

  CLI::App* sim = app.add_subcommand("simulate", "run Monte Carlo trials and report");
  sim->add_option("--config", sim_config, "key=value config file");
  add_override_options(sim, sim_overrides);
  sim->add_flag("--strict", sim_strict, "exit 2 when any trial failed");

  CLI::App* sweep = app.add_subcommand("sweep", "convergence sweep over dimensions");
  sweep->add_option("--config", sweep_config, "key=value config file");
  add_override_options(sweep, sweep_overrides);
  sweep->add_flag("--strict", sweep_strict, "exit 2 when the KS trend or a trial fails");

  int lim_m = 1, lim_grid = 100;
  double lim_sigma = 1.0, lim_alpha_im = 1.0, lim_y_eps = 1e-6;
  std::optional<double> lim_z_mod;
  std::string lim_out;
  CLI::App* lim = app.add_subcommand("limit", "tabulate the limiting laws");
  lim->add_option("--m", lim_m, "number of factors");
  lim->add_option("--sigma", lim_sigma, "scale product");
  lim->add_option("--grid", lim_grid, "table resolution");
  lim->add_option("--z-mod", lim_z_mod, "also tabulate nu and the branch at this |z|");
  lim->add_option("--alpha-im", lim_alpha_im, "Im(alpha) for the branch table");
  lim->add_option("--y-eps", lim_y_eps, "inversion height for nu_density");
  lim->add_option("--out", lim_out, "file prefix; omit to print");

  CLI::App* ver = app.add_subcommand("verify", "run the deterministic identity suite");
  ver->add_flag("--strict", verify_strict, "exit 2 when any identity fails");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (sim->parsed()) return run_simulate(sim_config, sim_overrides, sim_strict);
    if (sweep->parsed()) return run_sweep(sweep_config, sweep_overrides, sweep_strict);
    if (lim->parsed()) {
      return run_limit(lim_m, lim_sigma, lim_grid, lim_z_mod, lim_alpha_im, lim_y_eps, lim_out);
    }
    if (ver->parsed()) return run_verify(verify_strict);
  } catch (const IoError& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return 3;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "invalid configuration: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
