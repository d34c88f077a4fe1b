#pragma once

#include "prodlaw/config.hpp"
#include "prodlaw/report.hpp"

namespace prodlaw {

// One realization: sample the factors, run every statistic the config asks
// for. QL/QR non-convergence marks the trial failed instead of throwing.
TrialRecord run_trial(const ExperimentConfig& cfg, int trial);

// All trials (worker pool, deterministic merge by trial index), aggregates,
// file export per cfg.output/cfg.format.
Report run_experiment(const ExperimentConfig& cfg);

// run_experiment once per n_sweep entry; the merged report records per-n
// mean radial KS and whether the sequence is non-increasing within slack
// 0.01. A single-element sweep degenerates to run_experiment.
Report convergence_sweep(const ExperimentConfig& cfg);

}  // namespace prodlaw
