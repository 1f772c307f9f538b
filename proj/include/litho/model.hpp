#pragma once

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "litho/linalg.hpp"
#include "litho/random.hpp"

namespace litho {

enum class Family { Sand, Carbonate, Shale, Porosity, Other };

inline const char* family_name(Family f) {
  switch (f) {
    case Family::Sand: return "Sand";
    case Family::Carbonate: return "Carbonate";
    case Family::Shale: return "Shale";
    case Family::Porosity: return "Porosity";
    case Family::Other: return "Other";
  }
  return "?";
}

inline Family family_from_name(const std::string& s) {
  if (s == "Sand") return Family::Sand;
  if (s == "Carbonate") return Family::Carbonate;
  if (s == "Shale") return Family::Shale;
  if (s == "Porosity") return Family::Porosity;
  if (s == "Other") return Family::Other;
  throw std::invalid_argument("unknown family: " + s);
}

struct CurveDesc {
  std::string name;
  std::string unit;
};

// One mineral or fluid: its name, family, and response of each log curve
// to the pure component (one column of the forward matrix).
struct ComponentSpec {
  std::string name;
  Family family = Family::Other;
  std::vector<double> endpoints;
};

using LogVector = std::vector<double>;

// Point on the (M-1)-simplex: volumetric fractions of the M components.
struct VolumeVector {
  std::vector<double> values;

  static constexpr double kSumTol = 1e-9;

  bool on_simplex() const {
    double s = 0.0;
    for (double v : values) {
      if (!(v >= 0.0)) return false;
      s += v;
    }
    return std::fabs(s - 1.0) <= kSumTol;
  }
};

// The d x M linear operator mapping volumes to noiseless log responses,
// with component metadata. Immutable after construction.
class EndpointTable {
 public:
  EndpointTable(std::vector<CurveDesc> curves, std::vector<ComponentSpec> components)
      : curves_(std::move(curves)), components_(std::move(components)) {
    if (curves_.empty() || components_.empty())
      throw std::invalid_argument("EndpointTable: need at least one curve and component");
    std::set<std::string> names;
    for (const auto& c : components_) {
      if (!names.insert(c.name).second)
        throw std::invalid_argument("EndpointTable: duplicate component " + c.name);
      if (c.endpoints.size() != curves_.size())
        throw std::invalid_argument("EndpointTable: endpoint count mismatch for " + c.name);
    }
    g_ = Matrix(curves_.size(), components_.size());
    for (std::size_t j = 0; j < components_.size(); ++j)
      for (std::size_t i = 0; i < curves_.size(); ++i)
        g_(i, j) = components_[j].endpoints[i];
  }

  std::size_t num_curves() const { return curves_.size(); }
  std::size_t num_components() const { return components_.size(); }
  const std::vector<CurveDesc>& curves() const { return curves_; }
  const std::vector<ComponentSpec>& components() const { return components_; }
  const Matrix& g() const { return g_; }

  int component_index(const std::string& name) const {
    for (std::size_t j = 0; j < components_.size(); ++j)
      if (components_[j].name == name) return static_cast<int>(j);
    return -1;
  }

  int curve_index(const std::string& name) const {
    for (std::size_t i = 0; i < curves_.size(); ++i)
      if (curves_[i].name == name) return static_cast<int>(i);
    return -1;
  }

  // Sub-table over a component subset (order preserved).
  EndpointTable restrict_components(const std::vector<std::size_t>& indices) const {
    std::vector<ComponentSpec> comps;
    comps.reserve(indices.size());
    for (std::size_t j : indices) comps.push_back(components_.at(j));
    return EndpointTable(curves_, comps);
  }

  // Sub-table over a curve subset, in the given order.
  EndpointTable restrict_curves(const std::vector<std::string>& names) const {
    std::vector<CurveDesc> curves;
    std::vector<std::size_t> rows;
    for (const auto& n : names) {
      const int i = curve_index(n);
      if (i < 0) throw std::invalid_argument("restrict_curves: unknown curve " + n);
      rows.push_back(static_cast<std::size_t>(i));
      curves.push_back(curves_[i]);
    }
    std::vector<ComponentSpec> comps = components_;
    for (auto& c : comps) {
      std::vector<double> e;
      for (std::size_t r : rows) e.push_back(c.endpoints[r]);
      c.endpoints = std::move(e);
    }
    return EndpointTable(curves, comps);
  }

 private:
  std::vector<CurveDesc> curves_;
  std::vector<ComponentSpec> components_;
  Matrix g_;
};

// Zero-mean multivariate Gaussian noise with covariance sigma.
// Singular or slightly indefinite covariances are handled by
// eigendecomposition with negative eigenvalues clamped to zero.
class NoiseSpec {
 public:
  explicit NoiseSpec(Matrix covariance) : cov_(std::move(covariance)) {
    const std::size_t d = cov_.rows();
    if (cov_.cols() != d) throw std::invalid_argument("NoiseSpec: covariance not square");
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = i + 1; j < d; ++j)
        if (std::fabs(cov_(i, j) - cov_(j, i)) > 1e-12)
          throw std::invalid_argument("NoiseSpec: covariance not symmetric");
    Matrix l;
    if (cholesky(cov_, l)) {
      factor_ = std::move(l);
    } else {
      std::vector<double> vals;
      Matrix vecs;
      jacobi_eigen(cov_, vals, vecs);
      for (double& v : vals) {
        if (v < -1e-12) throw std::invalid_argument("NoiseSpec: covariance not PSD");
        if (v < 0.0) v = 0.0;
      }
      factor_ = Matrix(d, d);
      for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
          factor_(i, j) = vecs(i, j) * std::sqrt(vals[j]);
    }
  }

  static NoiseSpec diagonal(const std::vector<double>& variances) {
    Matrix m(variances.size(), variances.size());
    for (std::size_t i = 0; i < variances.size(); ++i) m(i, i) = variances[i];
    return NoiseSpec(std::move(m));
  }

  static NoiseSpec zero(std::size_t d) { return NoiseSpec(Matrix(d, d)); }

  std::size_t dim() const { return cov_.rows(); }
  const Matrix& covariance() const { return cov_; }

  LogVector sample(Rng& rng) const {
    const std::size_t d = dim();
    std::vector<double> z(d);
    for (std::size_t i = 0; i < d; ++i) z[i] = rng.normal();
    return factor_.matvec(z);
  }

  // Inverse (or pseudo-inverse when singular) of the covariance.
  Matrix precision() const {
    const std::size_t d = dim();
    std::vector<double> vals;
    Matrix vecs;
    jacobi_eigen(cov_, vals, vecs);
    double vmax = 0.0;
    for (double v : vals) vmax = std::max(vmax, v);
    const double cut = std::max(vmax * 1e-12, 1e-300);
    Matrix w(d, d);
    for (std::size_t i = 0; i < d; ++i)
      for (std::size_t j = 0; j < d; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < d; ++k)
          if (vals[k] > cut) s += vecs(i, k) * vecs(j, k) / vals[k];
        w(i, j) = s;
      }
    return w;
  }

 private:
  Matrix cov_;
  Matrix factor_;  // A with A A^T = cov
};

// Depth-indexed block of log curves assumed to share one lithology.
struct LayerLogs {
  std::vector<double> depths;
  std::vector<LogVector> samples;
  std::vector<CurveDesc> curves;

  void validate() const {
    if (depths.size() != samples.size())
      throw std::invalid_argument("LayerLogs: depth/sample count mismatch");
    for (std::size_t i = 1; i < depths.size(); ++i)
      if (!(depths[i] > depths[i - 1]))
        throw std::invalid_argument("LayerLogs: depths not strictly increasing");
    for (const auto& s : samples)
      if (s.size() != curves.size())
        throw std::invalid_argument("LayerLogs: sample width mismatch");
  }
};

// Noiseless forward response G * v.
inline LogVector forward(const VolumeVector& v, const EndpointTable& table) {
  if (v.values.size() != table.num_components())
    throw std::invalid_argument("forward: volume dimension mismatch");
  return table.g().matvec(v.values);
}

inline LogVector add_noise(const LogVector& l, const NoiseSpec& noise, Rng& rng) {
  if (l.size() != noise.dim())
    throw std::invalid_argument("add_noise: dimension mismatch");
  LogVector x = noise.sample(rng);
  LogVector out(l.size());
  for (std::size_t i = 0; i < l.size(); ++i) out[i] = l[i] + x[i];
  return out;
}

struct InversionResult {
  VolumeVector volumes;
  double objective = 0.0;
  bool converged = false;
};

namespace detail {

// Minimize (Gv-L)^T W (Gv-L) over the simplex by a primal active-set
// method. Pivoting order is fixed (lowest index first) so the solve is
// bit-reproducible.
inline InversionResult simplex_qp(const Matrix& g, const LogVector& l, const Matrix& w) {
  const std::size_t m = g.cols();
  const std::size_t d = g.rows();

  // H = G^T W G, c = -G^T W L
  Matrix wg(d, m);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < d; ++k) s += w(i, k) * g(k, j);
      wg(i, j) = s;
    }
  Matrix h(m, m);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j) {
      double s = 0.0;
      for (std::size_t k = 0; k < d; ++k) s += g(k, i) * wg(k, j);
      h(i, j) = s;
    }
  std::vector<double> c(m, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    double s = 0.0;
    for (std::size_t k = 0; k < d; ++k) s += wg(k, j) * l[k];
    c[j] = -s;
  }
  auto objective = [&](const std::vector<double>& v) {
    double r = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      double gi = 0.0;
      for (std::size_t j = 0; j < m; ++j) gi += g(i, j) * v[j];
      gi -= l[i];
      for (std::size_t k = 0; k < d; ++k) {
        double gk = 0.0;
        for (std::size_t j = 0; j < m; ++j) gk += g(k, j) * v[j];
        gk -= l[k];
        r += gi * w(i, k) * gk;
      }
    }
    return r;
  };

  std::vector<double> x(m, 1.0 / static_cast<double>(m));
  std::vector<bool> active(m, false);
  const double tol = 1e-10;
  const int max_iter = 100 * static_cast<int>(m) + 50;
  bool converged = false;

  for (int iter = 0; iter < max_iter; ++iter) {
    // Equality-constrained solve on the free set:
    // [2H_FF  1][v_F]   [-2 c_F]
    // [1^T    0][ mu] = [   1  ]
    std::vector<std::size_t> free_idx;
    for (std::size_t j = 0; j < m; ++j)
      if (!active[j]) free_idx.push_back(j);
    const std::size_t f = free_idx.size();
    std::vector<double> vfull(m, 0.0);
    double mu = 0.0;
    double ridge = 0.0;
    for (;;) {
      Matrix kkt(f + 1, f + 1);
      std::vector<double> rhs(f + 1, 0.0);
      for (std::size_t a = 0; a < f; ++a) {
        for (std::size_t b = 0; b < f; ++b)
          kkt(a, b) = 2.0 * h(free_idx[a], free_idx[b]);
        kkt(a, a) += ridge;
        kkt(a, f) = 1.0;
        kkt(f, a) = 1.0;
        rhs[a] = -2.0 * c[free_idx[a]];
      }
      rhs[f] = 1.0;
      try {
        std::vector<double> sol = solve_linear(kkt, rhs);
        for (std::size_t a = 0; a < f; ++a) vfull[free_idx[a]] = sol[a];
        mu = sol[f];
        break;
      } catch (const std::runtime_error&) {
        ridge = (ridge == 0.0) ? 1e-10 : ridge * 100.0;
        if (ridge > 1.0) throw;
      }
    }

    double vmin = 0.0;
    for (std::size_t j : free_idx) vmin = std::min(vmin, vfull[j]);
    if (vmin >= -tol) {
      for (std::size_t j : free_idx) vfull[j] = std::max(vfull[j], 0.0);
      x = vfull;
      // Multipliers of the active bounds; all non-negative means KKT holds.
      int release = -1;
      for (std::size_t j = 0; j < m; ++j) {
        if (!active[j]) continue;
        double grad = 2.0 * c[j];
        for (std::size_t k = 0; k < m; ++k) grad += 2.0 * h(j, k) * x[k];
        const double lambda = grad + mu;
        if (lambda < -1e-8 && release < 0) release = static_cast<int>(j);
      }
      if (release < 0) {
        converged = true;
        break;
      }
      active[release] = false;
      continue;
    }

    // Step from the current feasible x toward vfull until a bound blocks.
    double alpha = 1.0;
    int block = -1;
    for (std::size_t j : free_idx) {
      if (vfull[j] < -tol) {
        const double a = x[j] / (x[j] - vfull[j]);
        if (a < alpha - 1e-15) {
          alpha = a;
          block = static_cast<int>(j);
        }
      }
    }
    for (std::size_t j = 0; j < m; ++j)
      x[j] = active[j] ? 0.0 : x[j] + alpha * (vfull[j] - x[j]);
    if (block >= 0) {
      x[block] = 0.0;
      active[block] = true;
    }
  }

  // Clean up tiny negatives and renormalize.
  double sum = 0.0;
  for (double& v : x) {
    if (v < 0.0) v = 0.0;
    sum += v;
  }
  if (sum > 0.0)
    for (double& v : x) v /= sum;

  InversionResult res;
  res.volumes.values = x;
  res.objective = objective(x);
  res.converged = converged;
  return res;
}

}  // namespace detail

// Per-depth constrained inversion: argmin over the simplex of
// (Gv-L)^T Sigma^-1 (Gv-L). Intended for small component sets (M <= d+1).
inline std::vector<InversionResult> invert_constrained(const LayerLogs& layer,
                                                       const EndpointTable& sub,
                                                       const NoiseSpec& noise) {
  layer.validate();
  if (layer.curves.size() != sub.num_curves())
    throw std::invalid_argument("invert_constrained: curve count mismatch");
  if (noise.dim() != sub.num_curves())
    throw std::invalid_argument("invert_constrained: noise dimension mismatch");
  const Matrix w = noise.precision();
  std::vector<InversionResult> out;
  out.reserve(layer.samples.size());
  for (const auto& l : layer.samples)
    out.push_back(detail::simplex_qp(sub.g(), l, w));
  return out;
}

inline InversionResult invert_constrained_one(const LogVector& l,
                                              const EndpointTable& sub,
                                              const NoiseSpec& noise) {
  return detail::simplex_qp(sub.g(), l, noise.precision());
}

}  // namespace litho
