#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "prodlaw/config.hpp"

namespace prodlaw {

inline constexpr char kCodeVersion[] = "prodlaw 0.1.0";

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Everything measured on one realization. Optional fields stay empty when
// the trial failed or the config did not request them.
struct TrialRecord {
  int trial = 0;
  int n = 0;
  int m = 1;
  std::string dist;
  std::string status = "ok";  // "ok" | "failed"
  std::string error;          // failure reason when status == "failed"

  std::optional<double> radial_ks;
  std::optional<double> angular_ks;
  std::uint64_t angular_excluded = 0;
  // min over k of (sum of top-k s^2 - sum of top-k |lambda|^2); >= -1e-8 when
  // the majorization holds
  std::optional<double> horn_margin;
  std::optional<double> g_identity_resid;
  std::optional<double> sigma_min;          // min over probes
  std::optional<double> stieltjes_err_max;  // max over probes
  std::vector<double> probe_sigma_min;
  std::vector<double> probe_stieltjes_err;
  std::vector<double> probe_outlier_frac;
  std::optional<double> op_norm;
  std::optional<double> trace_avg;
  bool norm_flagged = false;
  std::optional<double> trunc_levy;
};

struct Stats {
  double mean = 0.0;
  double max = 0.0;
  double q25 = 0.0;
  double q50 = 0.0;
  double q75 = 0.0;
};

// Uniform bins on [lo, hi); values past hi land in the last bin so the total
// count always equals the pooled sample size.
struct RadiusHistogram {
  double lo = 0.0;
  double hi = 0.0;
  std::vector<std::uint64_t> counts;
};

struct Report {
  std::vector<TrialRecord> trials;
  std::map<std::string, Stats> aggregates;
  int failed = 0;
  std::string config_hash;  // hex of ExperimentConfig::semantic_hash
  std::uint64_t seed = 0;
  std::string code_version = kCodeVersion;
  std::string timestamp;  // write-time metadata, excluded from the hash
  RadiusHistogram radius_hist;

  // set only by convergence_sweep
  std::vector<int> sweep_ns;
  std::vector<double> sweep_mean_radial_ks;
  std::optional<bool> sweep_monotone_ok;
};

// Recomputes every aggregate from the records; the stored aggregates must
// always equal this.
std::map<std::string, Stats> compute_aggregates(const std::vector<TrialRecord>& trials);

// Shortest decimal form that parses back to the same double.
std::string format_double(double v);

std::string report_to_json(const Report& r);
Report report_from_json(const std::string& text);
std::string report_to_csv(const Report& r);

// Removes the line carrying the timestamp so two runs of the same config
// compare byte-equal.
std::string strip_timestamp_line(const std::string& json_text);

// Writes <output>.json or <output>.csv per cfg.format plus the plot tables
// <output>.radius_hist.csv and <output>.radial_density.csv. No-op when
// cfg.output is empty.
void export_report(const Report& r, const ExperimentConfig& cfg);

std::string utc_timestamp();

}  // namespace prodlaw
