#include "prodlaw/config.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "prodlaw/estimator.hpp"

namespace prodlaw {

namespace {

std::string strip_space(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    if (!std::isspace(static_cast<unsigned char>(c))) out.push_back(c);
  }
  return out;
}

double parse_double(const std::string& s, const char* what) {
  // from_chars rejects a leading '+'
  const std::size_t start = (!s.empty() && s[0] == '+') ? 1 : 0;
  double v = 0.0;
  const auto res = std::from_chars(s.data() + start, s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || s.size() == start) {
    throw std::invalid_argument(std::string(what) + ": bad number '" + s + "'");
  }
  return v;
}

long long parse_int(const std::string& s, const char* what) {
  long long v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size()) {
    throw std::invalid_argument(std::string(what) + ": bad integer '" + s + "'");
  }
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  parts.push_back(cur);
  return parts;
}

}  // namespace

cd parse_complex(const std::string& text) {
  const std::string s = strip_space(text);
  if (s.empty()) throw std::invalid_argument("parse_complex: empty value");
  if (s.back() != 'i') return cd(parse_double(s, "parse_complex"), 0.0);

  const std::string body = s.substr(0, s.size() - 1);
  std::size_t cut = std::string::npos;
  for (std::size_t p = 1; p < body.size(); ++p) {
    const char c = body[p];
    const char prev = body[p - 1];
    if ((c == '+' || c == '-') && prev != 'e' && prev != 'E') cut = p;
  }
  const auto imag_of = [](const std::string& part) {
    if (part.empty() || part == "+") return 1.0;
    if (part == "-") return -1.0;
    return parse_double(part, "parse_complex");
  };
  if (cut == std::string::npos) return cd(0.0, imag_of(body));
  return cd(parse_double(body.substr(0, cut), "parse_complex"), imag_of(body.substr(cut)));
}

namespace {

std::vector<cd> parse_complex_list(const std::string& value, const char* what) {
  std::vector<cd> out;
  for (const std::string& part : split(value, ',')) {
    const std::string t = strip_space(part);
    if (t.empty()) throw std::invalid_argument(std::string(what) + ": empty list entry");
    out.push_back(parse_complex(t));
  }
  return out;
}

// "z ; alpha" with single entries, or two comma lists crossed pairwise.
void append_probes(ExperimentConfig& cfg, const std::string& value, bool grid) {
  const std::vector<std::string> halves = split(value, ';');
  if (halves.size() != 2) {
    throw std::invalid_argument("probe: expected 'z ; alpha'");
  }
  const std::vector<cd> zs = parse_complex_list(halves[0], "probe z");
  const std::vector<cd> alphas = parse_complex_list(halves[1], "probe alpha");
  if (!grid && (zs.size() != 1 || alphas.size() != 1)) {
    throw std::invalid_argument("probe: one z ; one alpha (use probe_grid for lists)");
  }
  for (const cd& z : zs) {
    for (const cd& a : alphas) cfg.probes.push_back({z, a});
  }
}

}  // namespace

void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "m") {
    cfg.ensemble.m = static_cast<int>(parse_int(strip_space(value), "m"));
  } else if (key == "n") {
    cfg.ensemble.n = static_cast<int>(parse_int(strip_space(value), "n"));
  } else if (key == "dist") {
    cfg.ensemble.dist = parse_dist(strip_space(value));
  } else if (key == "sigmas") {
    cfg.ensemble.sigmas.clear();
    for (const std::string& part : split(value, ',')) {
      cfg.ensemble.sigmas.push_back(parse_double(strip_space(part), "sigmas"));
    }
  } else if (key == "seed") {
    const std::string t = strip_space(value);
    std::uint64_t v = 0;
    const auto res = std::from_chars(t.data(), t.data() + t.size(), v);
    if (res.ec != std::errc() || res.ptr != t.data() + t.size()) {
      throw std::invalid_argument("seed: bad integer '" + t + "'");
    }
    cfg.ensemble.seed = v;
  } else if (key == "moment_eta") {
    cfg.ensemble.moment_eta = parse_double(strip_space(value), "moment_eta");
  } else if (key == "trials") {
    cfg.trials = static_cast<int>(parse_int(strip_space(value), "trials"));
  } else if (key == "n_sweep") {
    cfg.n_sweep.clear();
    for (const std::string& part : split(value, ',')) {
      cfg.n_sweep.push_back(static_cast<int>(parse_int(strip_space(part), "n_sweep")));
    }
  } else if (key == "delta") {
    cfg.truncation_delta = parse_double(strip_space(value), "delta");
  } else if (key == "out") {
    cfg.output = strip_space(value);
  } else if (key == "format") {
    cfg.format = strip_space(value);
  } else if (key == "workers") {
    cfg.workers = static_cast<int>(parse_int(strip_space(value), "workers"));
  } else if (key == "probe") {
    append_probes(cfg, value, false);
  } else if (key == "probe_grid") {
    append_probes(cfg, value, true);
  } else {
    throw std::invalid_argument("unknown config key '" + key + "'");
  }
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open config file '" + path + "'");
  ExperimentConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    if (strip_space(line).empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": expected key = value");
    }
    try {
      apply_setting(cfg, strip_space(line.substr(0, eq)), line.substr(eq + 1));
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  return cfg;
}

void ExperimentConfig::validate() const {
  ensemble.validate();
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (workers < 1) throw std::invalid_argument("workers must be >= 1");
  if (format != "json" && format != "csv") {
    throw std::invalid_argument("format must be json or csv");
  }
  if (!(truncation_delta >= 0.0) || !std::isfinite(truncation_delta)) {
    throw std::invalid_argument("delta must be finite and >= 0");
  }
  for (std::size_t i = 0; i < n_sweep.size(); ++i) {
    if (n_sweep[i] < 1) throw std::invalid_argument("n_sweep entries must be >= 1");
    if (i > 0 && n_sweep[i] <= n_sweep[i - 1]) {
      throw std::invalid_argument("n_sweep must be strictly increasing");
    }
  }
  for (const ProbePoint& p : probes) {
    if (!(p.alpha.imag() > 0.0)) {
      throw std::invalid_argument("probe alpha must have Im > 0");
    }
    if (std::abs(p.z) > kProbeRadiusBound) {
      throw std::invalid_argument("probe z must satisfy |z| <= 10");
    }
  }
}

namespace {

void hash_bytes(std::uint64_t& h, const void* data, std::size_t len) {
  const auto* p = static_cast<const unsigned char*>(data);
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
}

void hash_text(std::uint64_t& h, const std::string& s) { hash_bytes(h, s.data(), s.size()); }

std::string canonical_double(double v) {
  char buf[40];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

std::string canonical_complex(cd v) {
  return canonical_double(v.real()) + "|" + canonical_double(v.imag());
}

}  // namespace

std::uint64_t ExperimentConfig::semantic_hash() const {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  std::ostringstream os;
  // a sweep list shadows ensemble.n, so a stale n must not perturb the hash
  os << "m=" << ensemble.m << ";n=";
  if (n_sweep.empty()) os << ensemble.n;
  os << ";dist=" << dist_tag(ensemble.dist)
     << ";seed=" << ensemble.seed << ";eta=" << canonical_double(ensemble.moment_eta)
     << ";sigmas=";
  for (int j = 1; j <= ensemble.m; ++j) os << canonical_double(ensemble.sigma(j)) << ",";
  os << ";trials=" << trials << ";sweep=";
  for (int n : n_sweep) os << n << ",";
  os << ";delta=" << canonical_double(truncation_delta) << ";probes=";
  for (const ProbePoint& p : probes) {
    os << canonical_complex(p.z) << "/" << canonical_complex(p.alpha) << ",";
  }
  hash_text(h, os.str());
  return h;
}

}  // namespace prodlaw
