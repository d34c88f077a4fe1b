#include "prodlaw/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <map>
#include <mutex>
#include <thread>
#include <utility>

#include "prodlaw/ensemble.hpp"
#include "prodlaw/estimator.hpp"
#include "prodlaw/limitlaw.hpp"
#include "prodlaw/linalg.hpp"

namespace prodlaw {

namespace {

// Fixed probe for the two-route g identity; any point off the sampled
// spectrum works, the identity is exact up to O(h^2).
constexpr cd kGProbeZ{1.7, 0.3};
constexpr std::size_t kHistBins = 64;
// g needs a full eigendecomposition of the linearization; cap its size
constexpr std::size_t kGDimCap = 256;

struct TrialOutput {
  TrialRecord record;
  std::vector<double> radii;
};

double horn_margin_of(const std::vector<cd>& eigs, const std::vector<double>& sv) {
  std::vector<double> lam_sq(eigs.size());
  for (std::size_t i = 0; i < eigs.size(); ++i) lam_sq[i] = std::norm(eigs[i]);
  std::sort(lam_sq.begin(), lam_sq.end(), std::greater<>());
  double margin = std::numeric_limits<double>::infinity();
  double lam_sum = 0.0, sv_sum = 0.0;
  for (std::size_t k = 0; k < lam_sq.size(); ++k) {
    lam_sum += lam_sq[k];
    sv_sum += sv[k] * sv[k];
    margin = std::min(margin, sv_sum - lam_sum);
  }
  return margin;
}

TrialOutput run_trial_full(const ExperimentConfig& cfg, int trial) {
  const EnsembleConfig& ens = cfg.ensemble;
  TrialOutput out;
  TrialRecord& rec = out.record;
  rec.trial = trial;
  rec.n = ens.n;
  rec.m = ens.m;
  rec.dist = dist_tag(ens.dist);
  try {
    std::vector<ComplexMatrix> factors;
    factors.reserve(static_cast<std::size_t>(ens.m));
    for (int j = 1; j <= ens.m; ++j) factors.push_back(sample_factor(ens, j, trial));
    const ComplexMatrix x = build_product(factors);

    SpectralSample eig = eigenvalues(x);
    eig.trial = trial;
    LimitLawParams law;
    law.m = ens.m;
    law.sigma = ens.sigma_product();
    const EmpiricalDistribution radii = esd_radii(eig);
    rec.radial_ks = ks_statistic(radii, [&law](double r) { return radial_cdf(law, r); });
    const AngularKs ang = angular_ks(eig);
    rec.angular_ks = ang.stat;
    rec.angular_excluded = ang.excluded;
    out.radii = radii.sorted();

    rec.horn_margin = horn_margin_of(eig.values, singular_values(x).reals());

    const std::size_t big = static_cast<std::size_t>(ens.m) * static_cast<std::size_t>(ens.n);
    const bool need_y =
        !cfg.probes.empty() || cfg.truncation_delta > 0.0 || big <= kGDimCap;
    ComplexMatrix y;
    if (need_y) y = build_linearization(factors);

    if (big <= kGDimCap) {
      try {
        const GTwoWays g = g_empirical_two_ways(y, kGProbeZ, 1e-4);
        rec.g_identity_resid = std::abs(g.g_via_logdet - g.g_via_eigs);
      } catch (const std::invalid_argument&) {
        // probe collided with this realization's spectrum; field stays empty
      }
    }

    // squared singular values of Y - z, cached per distinct shift
    std::map<std::pair<double, double>, std::vector<double>> h_cache;
    const auto h_eigs_at = [&](cd z) -> const std::vector<double>& {
      const auto key = std::make_pair(z.real(), z.imag());
      auto it = h_cache.find(key);
      if (it == h_cache.end()) {
        const std::vector<double> s = singular_values(y.shifted(z)).reals();
        std::vector<double> sq(s.size());
        for (std::size_t i = 0; i < s.size(); ++i) sq[i] = s[i] * s[i];
        it = h_cache.emplace(key, std::move(sq)).first;
      }
      return it->second;
    };

    if (!cfg.probes.empty()) {
      double worst_err = 0.0;
      double min_sig = std::numeric_limits<double>::infinity();
      for (const ProbePoint& p : cfg.probes) {
        const std::vector<double>& hsq = h_eigs_at(p.z);
        const double sig = std::sqrt(hsq.back());

        SpectralSample hs;
        hs.values.reserve(hsq.size());
        for (double v : hsq) hs.values.emplace_back(v, 0.0);
        hs.dim = y.rows();
        hs.trial = trial;
        hs.z_probe = p.z;
        const cd delta_n = empirical_stieltjes(hs, p.alpha);
        const cd delta = stieltjes_branch(p.alpha, std::abs(p.z));
        const double err = std::abs(delta_n - delta);

        const SupportInterval si = support_endpoints(std::abs(p.z));
        std::size_t outside = 0;
        for (double v : hsq) {
          if (v < si.x1 - 0.5 || v > si.x2 + 0.5) ++outside;
        }

        rec.probe_sigma_min.push_back(sig);
        rec.probe_stieltjes_err.push_back(err);
        rec.probe_outlier_frac.push_back(static_cast<double>(outside) /
                                         static_cast<double>(hsq.size()));
        worst_err = std::max(worst_err, err);
        min_sig = std::min(min_sig, sig);
      }
      rec.sigma_min = min_sig;
      rec.stieltjes_err_max = worst_err;
    }

    if (need_y) {
      const NormGrowth ng = norm_growth_check(y, static_cast<std::size_t>(ens.n));
      rec.op_norm = ng.op_norm;
      rec.trace_avg = ng.trace_avg;
      rec.norm_flagged = ng.flagged;
    }

    if (cfg.truncation_delta > 0.0) {
      const cd zt = cfg.probes.empty() ? cd(1.0, 0.0) : cfg.probes.front().z;
      const std::vector<double> base = h_eigs_at(zt);
      const ComplexMatrix yt = truncate_rescale(y, ens.n, cfg.truncation_delta);
      const std::vector<double> st = singular_values(yt.shifted(zt)).reals();
      std::vector<double> tsq(st.size());
      for (std::size_t i = 0; i < st.size(); ++i) tsq[i] = st[i] * st[i];
      rec.trunc_levy =
          levy_distance(EmpiricalDistribution(base), EmpiricalDistribution(std::move(tsq)));
    }
  } catch (const ConvergenceError& e) {
    rec.status = "failed";
    rec.error = e.what();
  }
  return out;
}

std::string hash_hex(const ExperimentConfig& cfg) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(cfg.semantic_hash()));
  return buf;
}

void fill_histogram(Report& r, const std::vector<TrialOutput>& outs, double sigma) {
  r.radius_hist.lo = 0.0;
  r.radius_hist.hi = 1.25 * sigma;
  r.radius_hist.counts.assign(kHistBins, 0);
  const double width = r.radius_hist.hi / static_cast<double>(kHistBins);
  for (const TrialOutput& o : outs) {
    for (double v : o.radii) {
      const auto bin = static_cast<std::size_t>(
          std::min(static_cast<double>(kHistBins - 1), std::floor(v / width)));
      ++r.radius_hist.counts[bin];
    }
  }
}

}  // namespace

TrialRecord run_trial(const ExperimentConfig& cfg, int trial) {
  return run_trial_full(cfg, trial).record;
}

Report run_experiment(const ExperimentConfig& cfg) {
  cfg.validate();
  Report r;
  r.config_hash = hash_hex(cfg);
  r.seed = cfg.ensemble.seed;
  r.timestamp = utc_timestamp();

  std::vector<TrialOutput> outs(static_cast<std::size_t>(cfg.trials));
  const int nworkers = std::min(cfg.workers, cfg.trials);
  if (nworkers <= 1) {
    for (int i = 0; i < cfg.trials; ++i) outs[static_cast<std::size_t>(i)] = run_trial_full(cfg, i);
  } else {
    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::mutex err_mutex;
    const auto work = [&] {
      try {
        while (true) {
          const int i = next.fetch_add(1);
          if (i >= cfg.trials) break;
          outs[static_cast<std::size_t>(i)] = run_trial_full(cfg, i);
        }
      } catch (...) {
        const std::lock_guard<std::mutex> lock(err_mutex);
        if (!first_error) first_error = std::current_exception();
      }
    };
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(nworkers));
    for (int w = 0; w < nworkers; ++w) pool.emplace_back(work);
    for (std::thread& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
  }

  for (const TrialOutput& o : outs) {
    r.trials.push_back(o.record);
    if (o.record.status != "ok") ++r.failed;
  }
  r.aggregates = compute_aggregates(r.trials);
  fill_histogram(r, outs, cfg.ensemble.sigma_product());
  export_report(r, cfg);
  return r;
}

Report convergence_sweep(const ExperimentConfig& cfg) {
  if (cfg.n_sweep.empty()) {
    throw std::invalid_argument("convergence_sweep: n_sweep must be nonempty");
  }
  // ensemble.n is shadowed by the sweep list; resolve before validating
  ExperimentConfig base = cfg;
  base.ensemble.n = cfg.n_sweep.front();
  base.validate();
  if (cfg.n_sweep.size() == 1) {
    base.n_sweep.clear();
    return run_experiment(base);
  }

  Report merged;
  merged.config_hash = hash_hex(base);
  merged.seed = cfg.ensemble.seed;
  merged.timestamp = utc_timestamp();
  merged.radius_hist.lo = 0.0;
  merged.radius_hist.hi = 1.25 * cfg.ensemble.sigma_product();
  merged.radius_hist.counts.assign(kHistBins, 0);

  for (int n : cfg.n_sweep) {
    ExperimentConfig sub = base;
    sub.ensemble.n = n;
    sub.n_sweep.clear();
    sub.output.clear();  // only the merged report is written
    const Report rn = run_experiment(sub);
    merged.trials.insert(merged.trials.end(), rn.trials.begin(), rn.trials.end());
    merged.failed += rn.failed;
    merged.sweep_ns.push_back(n);
    const auto it = rn.aggregates.find("radial_ks");
    merged.sweep_mean_radial_ks.push_back(
        it != rn.aggregates.end() ? it->second.mean
                                  : std::numeric_limits<double>::quiet_NaN());
    for (std::size_t k = 0; k < kHistBins; ++k) {
      merged.radius_hist.counts[k] += rn.radius_hist.counts[k];
    }
  }
  merged.aggregates = compute_aggregates(merged.trials);

  bool ok = true;
  for (std::size_t i = 0; i + 1 < merged.sweep_mean_radial_ks.size(); ++i) {
    if (!(merged.sweep_mean_radial_ks[i + 1] <= merged.sweep_mean_radial_ks[i] + 0.01)) {
      ok = false;
    }
  }
  merged.sweep_monotone_ok = ok;
  export_report(merged, cfg);
  return merged;
}

}  // namespace prodlaw
