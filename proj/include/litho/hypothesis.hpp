#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "litho/abc.hpp"
#include "litho/hdbscan.hpp"
#include "litho/linalg.hpp"
#include "litho/model.hpp"

namespace litho {

struct ComponentQuantiles {
  double p5 = 0.0, p25 = 0.0, median = 0.0, p75 = 0.0, p95 = 0.0;
};

// One cluster's lithological summary.
struct Hypothesis {
  std::int32_t cluster_id = -1;
  std::uint32_t size = 0;          // m_i
  double p_hat = 0.0;              // m_i / N_ABC
  std::vector<double> mean_volumes;
  std::vector<ComponentQuantiles> quantiles;
  std::vector<std::size_t> main_components;  // indices with mean >= threshold
  std::vector<std::size_t> member_indices;   // rows of the clustered set
  double coverage = 0.0;           // fraction of layer depths with >= 1 member
  bool refit_done = false;
  bool refit_skipped = false;      // too many main components
  std::vector<VolumeVector> refit_volumes;   // per depth, over main components
  std::vector<double> refit_mean;            // over main components
  double refit_error = 0.0;
};

struct PcaSummary {
  std::vector<std::vector<double>> components;  // 2 loading vectors, length M
  std::vector<double> explained_variance_ratio;
  std::vector<std::array<double, 2>> projections;
};

struct MixtureDistribution {
  std::string component;
  std::vector<std::pair<double, double>> weighted_samples;  // (value, weight)
  double p10 = 0.0, median = 0.0, p90 = 0.0;
};

namespace detail {

inline double weighted_quantile(std::vector<std::pair<double, double>> vw, double q) {
  if (vw.empty()) throw std::invalid_argument("quantile of empty set");
  std::sort(vw.begin(), vw.end());
  double total = 0.0;
  for (const auto& [v, w] : vw) total += w;
  double acc = 0.0;
  const double target = q * total;
  for (const auto& [v, w] : vw) {
    acc += w;
    if (acc >= target) return v;
  }
  return vw.back().first;
}

inline double quantile(std::vector<double> v, double q) {
  if (v.empty()) throw std::invalid_argument("quantile of empty set");
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(pos);
  const std::size_t hi = std::min(lo + 1, v.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return v[lo] * (1.0 - frac) + v[hi] * frac;
}

// Full eigendecomposition of the sample covariance of the rows.
// Loadings are the columns of eigvecs; eigenvalues descending.
inline void pca_full(const std::vector<std::vector<double>>& rows,
                     std::vector<double>& mean, std::vector<double>& eigvals,
                     Matrix& eigvecs) {
  const std::size_t n = rows.size();
  const std::size_t m = rows[0].size();
  mean.assign(m, 0.0);
  for (const auto& r : rows)
    for (std::size_t j = 0; j < m; ++j) mean[j] += r[j];
  for (double& v : mean) v /= static_cast<double>(n);
  Matrix cov(m, m);
  for (const auto& r : rows)
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = i; j < m; ++j)
        cov(i, j) += (r[i] - mean[i]) * (r[j] - mean[j]);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = i; j < m; ++j) {
      cov(i, j) /= static_cast<double>(n - 1);
      cov(j, i) = cov(i, j);
    }
  jacobi_eigen(cov, eigvals, eigvecs);
}

}  // namespace detail

// Top-2 principal components of the accepted volumes. Sign convention:
// the largest-magnitude entry of each loading is positive.
inline PcaSummary pca_project(const std::vector<std::vector<double>>& rows) {
  if (rows.size() < 3) throw std::invalid_argument("pca_project: need N >= 3");
  std::vector<double> mean, eigvals;
  Matrix eigvecs;
  detail::pca_full(rows, mean, eigvals, eigvecs);
  const std::size_t m = rows[0].size();
  double total = 0.0;
  for (double v : eigvals) total += std::max(v, 0.0);
  PcaSummary out;
  for (int k = 0; k < 2; ++k) {
    std::vector<double> load(m);
    for (std::size_t j = 0; j < m; ++j) load[j] = eigvecs(j, k);
    std::size_t imax = 0;
    for (std::size_t j = 1; j < m; ++j)
      if (std::fabs(load[j]) > std::fabs(load[imax])) imax = j;
    if (load[imax] < 0.0)
      for (double& v : load) v = -v;
    out.components.push_back(load);
    out.explained_variance_ratio.push_back(
        total > 0.0 ? std::max(eigvals[k], 0.0) / total : 0.0);
  }
  out.projections.reserve(rows.size());
  for (const auto& r : rows) {
    std::array<double, 2> p{0.0, 0.0};
    for (int k = 0; k < 2; ++k)
      for (std::size_t j = 0; j < m; ++j)
        p[k] += (r[j] - mean[j]) * out.components[k][j];
    out.projections.push_back(p);
  }
  return out;
}

// One Hypothesis per cluster, sorted by size descending (ties by cluster
// id). p_hat uses the full acceptance count as denominator.
inline std::vector<Hypothesis> summarize_clusters(const AbcResult& result,
                                                  const ClusterLabels& labels,
                                                  const EndpointTable& table,
                                                  std::size_t n_layer_depths,
                                                  double main_threshold = 0.05) {
  if (labels.labels.size() != result.accepted.size())
    throw std::invalid_argument("summarize_clusters: label count mismatch");
  const std::size_t m = table.num_components();
  const std::size_t k = labels.num_clusters();
  std::vector<Hypothesis> hyps(k);
  for (std::size_t c = 0; c < k; ++c) {
    hyps[c].cluster_id = static_cast<std::int32_t>(c);
    hyps[c].mean_volumes.assign(m, 0.0);
  }
  for (std::size_t i = 0; i < labels.labels.size(); ++i) {
    const std::int32_t l = labels.labels[i];
    if (l < 0) continue;
    hyps[l].member_indices.push_back(i);
    const auto& v = result.accepted[i].second.values;
    for (std::size_t j = 0; j < m; ++j) hyps[l].mean_volumes[j] += v[j];
  }
  const double n_abc = static_cast<double>(labels.labels.size());
  for (auto& h : hyps) {
    h.size = static_cast<std::uint32_t>(h.member_indices.size());
    h.p_hat = n_abc > 0 ? static_cast<double>(h.size) / n_abc : 0.0;
    if (h.size == 0) continue;
    for (double& v : h.mean_volumes) v /= static_cast<double>(h.size);
    h.quantiles.resize(m);
    std::vector<double> col(h.size);
    for (std::size_t j = 0; j < m; ++j) {
      for (std::size_t r = 0; r < h.size; ++r)
        col[r] = result.accepted[h.member_indices[r]].second.values[j];
      h.quantiles[j].p5 = detail::quantile(col, 0.05);
      h.quantiles[j].p25 = detail::quantile(col, 0.25);
      h.quantiles[j].median = detail::quantile(col, 0.50);
      h.quantiles[j].p75 = detail::quantile(col, 0.75);
      h.quantiles[j].p95 = detail::quantile(col, 0.95);
    }
    for (std::size_t j = 0; j < m; ++j)
      if (h.mean_volumes[j] >= main_threshold) h.main_components.push_back(j);
    if (n_layer_depths > 0) {
      std::vector<char> seen(n_layer_depths, 0);
      for (std::size_t r : h.member_indices) seen[result.accepted[r].first] = 1;
      std::size_t covered = 0;
      for (char s : seen) covered += s;
      h.coverage = static_cast<double>(covered) / static_cast<double>(n_layer_depths);
    }
  }
  std::sort(hyps.begin(), hyps.end(), [](const Hypothesis& a, const Hypothesis& b) {
    if (a.size != b.size) return a.size > b.size;
    return a.cluster_id < b.cluster_id;
  });
  return hyps;
}

// Pooled empirical distribution of one component across clusters, cluster
// i weighted by m_i / sum m_j. Noise is excluded.
inline MixtureDistribution mixture_distribution(const std::vector<Hypothesis>& hyps,
                                                const AbcResult& result,
                                                const EndpointTable& table,
                                                const std::string& component) {
  const int j = table.component_index(component);
  if (j < 0) throw std::invalid_argument("mixture_distribution: unknown component " + component);
  double total = 0.0;
  for (const auto& h : hyps) total += static_cast<double>(h.size);
  if (total <= 0.0) throw std::invalid_argument("mixture_distribution: no clusters");
  MixtureDistribution out;
  out.component = component;
  for (const auto& h : hyps) {
    const double w = 1.0 / total;  // m_i/total split evenly over m_i members
    for (std::size_t r : h.member_indices)
      out.weighted_samples.emplace_back(
          result.accepted[r].second.values[static_cast<std::size_t>(j)], w);
  }
  out.p10 = detail::weighted_quantile(out.weighted_samples, 0.10);
  out.median = detail::weighted_quantile(out.weighted_samples, 0.50);
  out.p90 = detail::weighted_quantile(out.weighted_samples, 0.90);
  return out;
}

// Histogram mode of a mixture distribution (bin centers over [0,1]).
inline double mixture_mode(const MixtureDistribution& mix, double bin_width = 0.02) {
  const std::size_t bins = static_cast<std::size_t>(std::ceil(1.0 / bin_width));
  std::vector<double> mass(bins, 0.0);
  for (const auto& [v, w] : mix.weighted_samples) {
    std::size_t b = static_cast<std::size_t>(v / bin_width);
    if (b >= bins) b = bins - 1;
    mass[b] += w;
  }
  std::size_t best = 0;
  for (std::size_t b = 1; b < bins; ++b)
    if (mass[b] > mass[best]) best = b;
  return (static_cast<double>(best) + 0.5) * bin_width;
}

// Classical-inversion refit over the hypothesis' main components, run per
// depth. refit_error is the total weighted residual, used as a secondary
// ranking key.
inline void refit_hypothesis(Hypothesis& h, const LayerLogs& layer,
                             const EndpointTable& table, const NoiseSpec& noise) {
  const std::size_t d = table.num_curves();
  if (h.main_components.empty() || h.main_components.size() > d + 1) {
    h.refit_skipped = true;
    return;
  }
  const EndpointTable sub = table.restrict_components(h.main_components);
  const std::vector<InversionResult> inv = invert_constrained(layer, sub, noise);
  h.refit_volumes.clear();
  h.refit_mean.assign(h.main_components.size(), 0.0);
  h.refit_error = 0.0;
  for (const auto& r : inv) {
    h.refit_volumes.push_back(r.volumes);
    h.refit_error += r.objective;
    for (std::size_t j = 0; j < h.refit_mean.size(); ++j)
      h.refit_mean[j] += r.volumes.values[j];
  }
  for (double& v : h.refit_mean) v /= static_cast<double>(inv.size());
  h.refit_done = true;
}

}  // namespace litho
