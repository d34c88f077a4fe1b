#include "prodlaw/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <ctime>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "prodlaw/limitlaw.hpp"

namespace prodlaw {

using ordered_json = nlohmann::ordered_json;

std::string format_double(double v) {
  char buf[48];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string utc_timestamp() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

namespace {

double quantile(const std::vector<double>& sorted, double p) {
  if (sorted.size() == 1) return sorted[0];
  const double h = p * static_cast<double>(sorted.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(h);
  const std::size_t hi = std::min(lo + 1, sorted.size() - 1);
  const double frac = h - static_cast<double>(lo);
  return sorted[lo] + frac * (sorted[hi] - sorted[lo]);
}

Stats stats_of(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  Stats s;
  double sum = 0.0;
  for (double v : values) sum += v;
  s.mean = sum / static_cast<double>(values.size());
  s.max = values.back();
  s.q25 = quantile(values, 0.25);
  s.q50 = quantile(values, 0.50);
  s.q75 = quantile(values, 0.75);
  return s;
}

}  // namespace

std::map<std::string, Stats> compute_aggregates(const std::vector<TrialRecord>& trials) {
  std::map<std::string, std::vector<double>> pools;
  const auto pool = [&](const char* key, const std::optional<double>& v) {
    if (v) pools[key].push_back(*v);
  };
  for (const TrialRecord& t : trials) {
    if (t.status != "ok") continue;
    pool("radial_ks", t.radial_ks);
    pool("angular_ks", t.angular_ks);
    pool("horn_margin", t.horn_margin);
    pool("g_identity_resid", t.g_identity_resid);
    pool("sigma_min", t.sigma_min);
    pool("stieltjes_err_max", t.stieltjes_err_max);
    pool("op_norm", t.op_norm);
    pool("trace_avg", t.trace_avg);
    pool("trunc_levy", t.trunc_levy);
  }
  std::map<std::string, Stats> out;
  for (auto& [key, values] : pools) out[key] = stats_of(std::move(values));
  return out;
}

namespace {

ordered_json trial_to_json(const TrialRecord& t) {
  ordered_json j;
  j["trial"] = t.trial;
  j["n"] = t.n;
  j["m"] = t.m;
  j["dist"] = t.dist;
  j["status"] = t.status;
  if (!t.error.empty()) j["error"] = t.error;
  const auto put = [&](const char* key, const std::optional<double>& v) {
    if (v) j[key] = *v;
  };
  put("radial_ks", t.radial_ks);
  put("angular_ks", t.angular_ks);
  if (t.angular_ks) j["angular_excluded"] = t.angular_excluded;
  put("horn_margin", t.horn_margin);
  put("g_identity_resid", t.g_identity_resid);
  put("sigma_min", t.sigma_min);
  put("stieltjes_err_max", t.stieltjes_err_max);
  if (!t.probe_sigma_min.empty()) j["probe_sigma_min"] = t.probe_sigma_min;
  if (!t.probe_stieltjes_err.empty()) j["probe_stieltjes_err"] = t.probe_stieltjes_err;
  if (!t.probe_outlier_frac.empty()) j["probe_outlier_frac"] = t.probe_outlier_frac;
  put("op_norm", t.op_norm);
  put("trace_avg", t.trace_avg);
  if (t.op_norm) j["norm_flagged"] = t.norm_flagged;
  put("trunc_levy", t.trunc_levy);
  return j;
}

TrialRecord trial_from_json(const ordered_json& j) {
  TrialRecord t;
  t.trial = j.at("trial").get<int>();
  t.n = j.at("n").get<int>();
  t.m = j.at("m").get<int>();
  t.dist = j.at("dist").get<std::string>();
  t.status = j.at("status").get<std::string>();
  if (j.contains("error")) t.error = j.at("error").get<std::string>();
  const auto get = [&](const char* key, std::optional<double>& v) {
    if (j.contains(key)) v = j.at(key).get<double>();
  };
  get("radial_ks", t.radial_ks);
  get("angular_ks", t.angular_ks);
  if (j.contains("angular_excluded")) {
    t.angular_excluded = j.at("angular_excluded").get<std::uint64_t>();
  }
  get("horn_margin", t.horn_margin);
  get("g_identity_resid", t.g_identity_resid);
  get("sigma_min", t.sigma_min);
  get("stieltjes_err_max", t.stieltjes_err_max);
  if (j.contains("probe_sigma_min")) {
    t.probe_sigma_min = j.at("probe_sigma_min").get<std::vector<double>>();
  }
  if (j.contains("probe_stieltjes_err")) {
    t.probe_stieltjes_err = j.at("probe_stieltjes_err").get<std::vector<double>>();
  }
  if (j.contains("probe_outlier_frac")) {
    t.probe_outlier_frac = j.at("probe_outlier_frac").get<std::vector<double>>();
  }
  get("op_norm", t.op_norm);
  get("trace_avg", t.trace_avg);
  if (j.contains("norm_flagged")) t.norm_flagged = j.at("norm_flagged").get<bool>();
  get("trunc_levy", t.trunc_levy);
  return t;
}

ordered_json stats_to_json(const Stats& s) {
  ordered_json j;
  j["mean"] = s.mean;
  j["max"] = s.max;
  j["q25"] = s.q25;
  j["q50"] = s.q50;
  j["q75"] = s.q75;
  return j;
}

}  // namespace

std::string report_to_json(const Report& r) {
  ordered_json j;
  j["schema_version"] = 1;
  ordered_json prov;
  prov["code_version"] = r.code_version;
  prov["config_hash"] = r.config_hash;
  prov["seed"] = r.seed;
  prov["timestamp"] = r.timestamp;
  j["provenance"] = prov;
  j["failed_trials"] = r.failed;
  ordered_json trials = ordered_json::array();
  for (const TrialRecord& t : r.trials) trials.push_back(trial_to_json(t));
  j["trials"] = trials;
  ordered_json aggs;
  for (const auto& [key, s] : r.aggregates) aggs[key] = stats_to_json(s);
  j["aggregates"] = aggs;
  ordered_json hist;
  hist["lo"] = r.radius_hist.lo;
  hist["hi"] = r.radius_hist.hi;
  hist["counts"] = r.radius_hist.counts;
  j["radius_histogram"] = hist;
  if (!r.sweep_ns.empty()) {
    ordered_json sweep;
    sweep["ns"] = r.sweep_ns;
    sweep["mean_radial_ks"] = r.sweep_mean_radial_ks;
    sweep["monotone_ok"] = r.sweep_monotone_ok.value_or(false);
    j["sweep"] = sweep;
  }
  return j.dump(2) + "\n";
}

Report report_from_json(const std::string& text) {
  const ordered_json j = ordered_json::parse(text);
  Report r;
  const auto& prov = j.at("provenance");
  r.code_version = prov.at("code_version").get<std::string>();
  r.config_hash = prov.at("config_hash").get<std::string>();
  r.seed = prov.at("seed").get<std::uint64_t>();
  r.timestamp = prov.at("timestamp").get<std::string>();
  r.failed = j.at("failed_trials").get<int>();
  for (const auto& t : j.at("trials")) r.trials.push_back(trial_from_json(t));
  for (const auto& [key, s] : j.at("aggregates").items()) {
    Stats st;
    st.mean = s.at("mean").get<double>();
    st.max = s.at("max").get<double>();
    st.q25 = s.at("q25").get<double>();
    st.q50 = s.at("q50").get<double>();
    st.q75 = s.at("q75").get<double>();
    r.aggregates[key] = st;
  }
  const auto& hist = j.at("radius_histogram");
  r.radius_hist.lo = hist.at("lo").get<double>();
  r.radius_hist.hi = hist.at("hi").get<double>();
  r.radius_hist.counts = hist.at("counts").get<std::vector<std::uint64_t>>();
  if (j.contains("sweep")) {
    const auto& sweep = j.at("sweep");
    r.sweep_ns = sweep.at("ns").get<std::vector<int>>();
    r.sweep_mean_radial_ks = sweep.at("mean_radial_ks").get<std::vector<double>>();
    r.sweep_monotone_ok = sweep.at("monotone_ok").get<bool>();
  }
  return r;
}

std::string report_to_csv(const Report& r) {
  std::ostringstream os;
  os << "trial,n,m,dist,radial_ks,angular_ks,sigma_min,stieltjes_err_max,"
        "g_identity_resid,horn_margin,status\n";
  const auto cell = [](const std::optional<double>& v) {
    return v ? format_double(*v) : std::string();
  };
  for (const TrialRecord& t : r.trials) {
    os << t.trial << ',' << t.n << ',' << t.m << ',' << t.dist << ',' << cell(t.radial_ks)
       << ',' << cell(t.angular_ks) << ',' << cell(t.sigma_min) << ','
       << cell(t.stieltjes_err_max) << ',' << cell(t.g_identity_resid) << ','
       << cell(t.horn_margin) << ',' << t.status << '\n';
  }
  return os.str();
}

std::string strip_timestamp_line(const std::string& json_text) {
  std::istringstream in(json_text);
  std::ostringstream out;
  std::string line;
  while (std::getline(in, line)) {
    const std::size_t pos = line.find_first_not_of(" \t");
    const bool is_timestamp =
        pos != std::string::npos && line.compare(pos, 12, "\"timestamp\":") == 0;
    if (!is_timestamp) out << line << '\n';
  }
  return out.str();
}

namespace {

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw IoError("write failed for '" + path + "'");
}

std::string histogram_csv(const RadiusHistogram& h) {
  std::ostringstream os;
  os << "bin_lo,bin_hi,count\n";
  const std::size_t bins = h.counts.size();
  const double width = bins ? (h.hi - h.lo) / static_cast<double>(bins) : 0.0;
  for (std::size_t k = 0; k < bins; ++k) {
    os << format_double(h.lo + width * static_cast<double>(k)) << ','
       << format_double(h.lo + width * static_cast<double>(k + 1)) << ',' << h.counts[k]
       << '\n';
  }
  return os.str();
}

std::string density_table_csv(const ExperimentConfig& cfg) {
  LimitLawParams law;
  law.m = cfg.ensemble.m;
  law.sigma = cfg.ensemble.sigma_product();
  std::ostringstream os;
  os << "r,density,radial_cdf\n";
  for (int k = 0; k <= 100; ++k) {
    const double r = 1.05 * law.sigma * k / 100.0;
    os << format_double(r) << ',' << format_double(limit_density(law, cd(r, 0.0))) << ','
       << format_double(radial_cdf(law, r)) << '\n';
  }
  return os.str();
}

}  // namespace

void export_report(const Report& r, const ExperimentConfig& cfg) {
  if (cfg.output.empty()) return;
  if (cfg.format == "csv") {
    write_file(cfg.output + ".csv", report_to_csv(r));
  } else {
    write_file(cfg.output + ".json", report_to_json(r));
  }
  write_file(cfg.output + ".radius_hist.csv", histogram_csv(r.radius_hist));
  write_file(cfg.output + ".radial_density.csv", density_table_csv(cfg));
}

}  // namespace prodlaw
