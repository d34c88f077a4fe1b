#include "prodlaw/ensemble.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace prodlaw {

Dist parse_dist(const std::string& tag) {
  if (tag == "complex-gaussian") return Dist::complex_gaussian;
  if (tag == "real-gaussian") return Dist::real_gaussian;
  if (tag == "rademacher") return Dist::rademacher;
  if (tag == "uniform-disc") return Dist::uniform_disc;
  throw std::invalid_argument("unknown distribution tag: " + tag);
}

const char* dist_tag(Dist d) {
  switch (d) {
    case Dist::complex_gaussian: return "complex-gaussian";
    case Dist::real_gaussian: return "real-gaussian";
    case Dist::rademacher: return "rademacher";
    case Dist::uniform_disc: return "uniform-disc";
  }
  return "?";
}

void EnsembleConfig::validate() const {
  if (m < 1) throw std::invalid_argument("ensemble: m must be >= 1");
  if (n < 1) throw std::invalid_argument("ensemble: n must be >= 1");
  if (!sigmas.empty() && static_cast<int>(sigmas.size()) != m) {
    throw std::invalid_argument("ensemble: sigmas must have exactly m entries");
  }
  for (double s : sigmas) {
    if (!(s > 0.0)) throw std::invalid_argument("ensemble: every sigma_j must be > 0");
  }
  if (!(moment_eta > 0.0)) throw std::invalid_argument("ensemble: moment_eta must be > 0");
}

double EnsembleConfig::sigma(int j) const {
  if (j < 1 || j > m) throw std::invalid_argument("ensemble: factor index out of range");
  return sigmas.empty() ? 1.0 : sigmas[static_cast<std::size_t>(j - 1)];
}

double EnsembleConfig::sigma_product() const {
  double p = 1.0;
  for (int j = 1; j <= m; ++j) p *= sigma(j);
  return p;
}

cd standardized_draw(Dist d, SubstreamRng& rng) {
  switch (d) {
    case Dist::complex_gaussian: {
      auto [g1, g2] = rng.gauss_pair();
      return cd(g1, g2) * std::numbers::sqrt2 * 0.5;  // 1/sqrt(2) scaling
    }
    case Dist::real_gaussian: {
      auto [g1, g2] = rng.gauss_pair();
      (void)g2;  // fixed draw count per entry keeps streams alignment-free
      return cd(g1, 0.0);
    }
    case Dist::rademacher:
      return cd(rng.uniform01() < 0.5 ? -1.0 : 1.0, 0.0);
    case Dist::uniform_disc: {
      // radius sqrt(2)*sqrt(u) has E|xi|^2 = 1
      const double r = std::numbers::sqrt2 * std::sqrt(rng.uniform01());
      const double th = 2.0 * std::numbers::pi * rng.uniform01();
      return cd(r * std::cos(th), r * std::sin(th));
    }
  }
  throw std::invalid_argument("unknown distribution");
}

ComplexMatrix sample_factor(const EnsembleConfig& cfg, int j, int trial) {
  cfg.validate();
  if (j < 1 || j > cfg.m) throw std::invalid_argument("sample_factor: j out of range");
  if (trial < 0) throw std::invalid_argument("sample_factor: trial must be >= 0");
  SubstreamRng rng(cfg.seed, static_cast<std::uint64_t>(j), static_cast<std::uint64_t>(trial));
  const std::size_t n = static_cast<std::size_t>(cfg.n);
  const double scale = cfg.sigma(j) / std::sqrt(static_cast<double>(cfg.n));
  ComplexMatrix x(n, n);
  for (cd& e : x.data()) e = scale * standardized_draw(cfg.dist, rng);
  return x;
}

ComplexMatrix build_product(const std::vector<ComplexMatrix>& factors) {
  if (factors.empty()) throw std::invalid_argument("build_product: empty factor list");
  const std::size_t n = factors.front().rows();
  for (const auto& f : factors) {
    if (!f.square() || f.rows() != n) {
      throw std::invalid_argument("build_product: factors must be square, equal dimension");
    }
  }
  ComplexMatrix x = factors.front();
  for (std::size_t k = 1; k < factors.size(); ++k) x = matmul(x, factors[k]);
  return x;
}

ComplexMatrix build_linearization(const std::vector<ComplexMatrix>& factors) {
  if (factors.empty()) throw std::invalid_argument("build_linearization: empty factor list");
  const std::size_t m = factors.size();
  const std::size_t n = factors.front().rows();
  for (const auto& f : factors) {
    if (!f.square() || f.rows() != n) {
      throw std::invalid_argument("build_linearization: factors must be square, equal dimension");
    }
  }
  if (m == 1) return factors.front();
  ComplexMatrix y(m * n, m * n);
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t bc = (k + 1) % m;  // X_k sits in block (k, k+1), X_m wraps to (m, 1)
    const ComplexMatrix& f = factors[k];
    for (std::size_t i = 0; i < n; ++i) {
      cd* dst = y.row(k * n + i) + bc * n;
      const cd* src = f.row(i);
      for (std::size_t jj = 0; jj < n; ++jj) dst[jj] = src[jj];
    }
  }
  return y;
}

ComplexMatrix truncate_rescale(const ComplexMatrix& Y, int n, double delta) {
  if (!(delta > 0.0)) throw std::invalid_argument("truncate_rescale: delta must be > 0");
  if (!Y.square() || n < 1 || Y.rows() % static_cast<std::size_t>(n) != 0) {
    throw std::invalid_argument("truncate_rescale: Y must be square with dimension a multiple of n");
  }
  const std::size_t nn = static_cast<std::size_t>(n);
  const std::size_t m = Y.rows() / nn;
  const double thresh = std::pow(static_cast<double>(n), delta) / std::sqrt(static_cast<double>(n));

  ComplexMatrix out(Y.rows(), Y.cols());
  for (std::size_t k = 0; k < m; ++k) {
    const std::size_t bc = (m == 1) ? 0 : (k + 1) % m;
    // pass 1: clip and accumulate plug-in moments of the clipped block
    std::size_t clipped = 0;
    cd mean(0.0, 0.0);
    for (std::size_t i = 0; i < nn; ++i) {
      const cd* src = Y.row(k * nn + i) + bc * nn;
      for (std::size_t jj = 0; jj < nn; ++jj) {
        if (std::abs(src[jj]) > thresh) {
          ++clipped;
        } else {
          mean += src[jj];
        }
      }
    }
    const double cnt = static_cast<double>(nn * nn);
    if (clipped == 0) {
      // nothing truncated: the block passes through exactly
      for (std::size_t i = 0; i < nn; ++i) {
        cd* dst = out.row(k * nn + i) + bc * nn;
        const cd* src = Y.row(k * nn + i) + bc * nn;
        for (std::size_t jj = 0; jj < nn; ++jj) dst[jj] = src[jj];
      }
      continue;
    }
    mean /= cnt;
    double var = 0.0;
    for (std::size_t i = 0; i < nn; ++i) {
      const cd* src = Y.row(k * nn + i) + bc * nn;
      for (std::size_t jj = 0; jj < nn; ++jj) {
        const cd v = (std::abs(src[jj]) > thresh) ? cd(0.0, 0.0) : src[jj];
        var += std::norm(v - mean);
      }
    }
    var /= cnt;
    // target standardized variance 1 means entry variance 1/n
    const double rescale = (var > 0.0) ? 1.0 / std::sqrt(var * static_cast<double>(n)) : 0.0;
    for (std::size_t i = 0; i < nn; ++i) {
      cd* dst = out.row(k * nn + i) + bc * nn;
      const cd* src = Y.row(k * nn + i) + bc * nn;
      for (std::size_t jj = 0; jj < nn; ++jj) {
        const cd v = (std::abs(src[jj]) > thresh) ? cd(0.0, 0.0) : src[jj];
        dst[jj] = (v - mean) * rescale;
      }
    }
  }
  return out;
}

}  // namespace prodlaw
