#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "prodlaw/complex_matrix.hpp"
#include "prodlaw/ensemble.hpp"

namespace prodlaw {

// One resolvent probe: shift z for R = Y - zI plus a spectral parameter
// alpha in the upper half plane.
struct ProbePoint {
  cd z;
  cd alpha;
};

struct ExperimentConfig {
  EnsembleConfig ensemble;
  int trials = 4;
  std::vector<int> n_sweep;        // empty unless sweeping; strictly increasing
  std::vector<ProbePoint> probes;
  double truncation_delta = 0.0;   // 0 disables the truncation comparison
  std::string output;              // path prefix; empty writes nothing
  std::string format = "json";     // "json" or "csv"
  int workers = 1;

  void validate() const;  // throws std::invalid_argument

  // Hash over the fields that determine report contents. output, format and
  // workers are presentation/scheduling knobs and stay out.
  std::uint64_t semantic_hash() const;
};

// "a", "bi", "a+bi", "a-bi", "i", "-i"; components in any std::from_chars
// float syntax. Whitespace-tolerant.
cd parse_complex(const std::string& text);

// One "key = value" assignment; the same grammar backs config files and CLI
// overrides. Unknown key or malformed value throws std::invalid_argument.
void apply_setting(ExperimentConfig& cfg, const std::string& key, const std::string& value);

// Flat key=value file, '#' starts a comment, blank lines skipped. Returned
// config is not yet validated so CLI overrides can complete it.
ExperimentConfig parse_config_file(const std::string& path);

}  // namespace prodlaw
