#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace litho {

struct SegmentationConfig {
  double penalty = 0.0;          // 0: use the BIC-like default 3.5 d log n
  std::size_t min_segment_len = 10;
  std::vector<std::string> curves;  // subset used; empty means all

  void validate() const {
    if (penalty < 0.0) throw std::invalid_argument("SegmentationConfig: penalty < 0");
    if (min_segment_len < 2)
      throw std::invalid_argument("SegmentationConfig: min_segment_len must be >= 2");
  }
};

struct Zonation {
  std::vector<std::size_t> changepoints;              // segment start indices, excluding 0
  std::vector<std::pair<std::size_t, std::size_t>> segments;  // half-open [start, end)
};

// Multivariate series, one vector per curve.
using MultiSeries = std::vector<std::vector<double>>;

namespace detail {

// Prefix sums per curve for O(1) Gaussian segment costs.
struct CostCache {
  std::vector<std::vector<double>> sum, sum2;
  std::size_t n = 0;

  explicit CostCache(const MultiSeries& series) {
    n = series.empty() ? 0 : series[0].size();
    for (const auto& c : series) {
      if (c.size() != n) throw std::invalid_argument("segment cost: ragged series");
      std::vector<double> s(n + 1, 0.0), s2(n + 1, 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        s[i + 1] = s[i] + c[i];
        s2[i + 1] = s2[i] + c[i] * c[i];
      }
      sum.push_back(std::move(s));
      sum2.push_back(std::move(s2));
    }
  }

  // -2 times the maximized Gaussian log-likelihood of [start, end) with
  // per-curve mean and variance, up to an additive constant:
  // sum over curves of len * (log(2 pi sigma^2) + 1). Variance clamped.
  double cost(std::size_t start, std::size_t end) const {
    const double len = static_cast<double>(end - start);
    double total = 0.0;
    for (std::size_t c = 0; c < sum.size(); ++c) {
      const double s = sum[c][end] - sum[c][start];
      const double s2 = sum2[c][end] - sum2[c][start];
      double var = (s2 - s * s / len) / len;
      if (var < 1e-8) var = 1e-8;
      total += len * (std::log(2.0 * M_PI * var) + 1.0);
    }
    return total;
  }
};

inline Zonation backtrack(const std::vector<std::int64_t>& prev, std::size_t n) {
  Zonation z;
  std::size_t t = n;
  std::vector<std::size_t> starts;
  while (t > 0) {
    const std::size_t s = static_cast<std::size_t>(prev[t]);
    starts.push_back(s);
    t = s;
  }
  std::reverse(starts.begin(), starts.end());
  for (std::size_t i = 0; i < starts.size(); ++i) {
    const std::size_t end = (i + 1 < starts.size()) ? starts[i + 1] : n;
    z.segments.emplace_back(starts[i], end);
    if (starts[i] != 0) z.changepoints.push_back(starts[i]);
  }
  return z;
}

}  // namespace detail

inline double gaussian_segment_cost(const MultiSeries& series, std::size_t start,
                                    std::size_t end) {
  if (end <= start) throw std::invalid_argument("gaussian_segment_cost: empty segment");
  detail::CostCache cache(series);
  if (end > cache.n) throw std::invalid_argument("gaussian_segment_cost: out of range");
  return cache.cost(start, end);
}

// BIC-style per-changepoint cost. The factor is calibrated so pure white
// noise stays unsegmented in >= 99% of trials; with a per-segment variance
// parameter the textbook 2 d log n overfits noticeably.
inline double default_penalty(std::size_t n_samples, std::size_t n_curves) {
  return 3.5 * static_cast<double>(n_curves) * std::log(static_cast<double>(n_samples));
}

// Exact penalized-cost minimizer with PELT pruning. The Gaussian cost is
// subadditive, so pruning preserves the optimum of the O(n^2) dynamic
// program.
inline Zonation pelt_segment(const MultiSeries& series, const SegmentationConfig& cfg) {
  cfg.validate();
  detail::CostCache cache(series);
  const std::size_t n = cache.n;
  const std::size_t minlen = cfg.min_segment_len;
  Zonation z;
  if (n < 2 * minlen) {
    z.segments.emplace_back(0, n);
    return z;
  }
  const double beta = cfg.penalty > 0.0 ? cfg.penalty : default_penalty(n, series.size());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> f(n + 1, inf);
  std::vector<std::int64_t> prev(n + 1, -1);
  f[0] = -beta;
  // Candidate start s with a drop time: once dominated at time t, s stays
  // usable until t + minlen because the dominating candidate t cannot end
  // a segment before then.
  constexpr std::size_t kNever = static_cast<std::size_t>(-1);
  std::vector<std::pair<std::size_t, std::size_t>> candidates{{0, kNever}};
  for (std::size_t t = minlen; t <= n; ++t) {
    double best = inf;
    std::int64_t arg = -1;
    for (const auto& [s, expiry] : candidates) {
      if (expiry <= t) continue;
      const double val = f[s] + cache.cost(s, t) + beta;
      if (val < best) {
        best = val;
        arg = static_cast<std::int64_t>(s);
      }
    }
    f[t] = best;
    prev[t] = arg;
    std::vector<std::pair<std::size_t, std::size_t>> kept;
    kept.reserve(candidates.size() + 1);
    for (auto [s, expiry] : candidates) {
      if (expiry <= t) continue;  // gone for good
      if (expiry == kNever && f[s] + cache.cost(s, t) > f[t] + beta)
        expiry = t + minlen;  // dominated; keep only through the blind window
      kept.push_back({s, expiry});
    }
    // the start t + 1 - minlen becomes usable at the next time step
    if (t + 1 <= n) kept.push_back({t + 1 - minlen, kNever});
    candidates = std::move(kept);
  }
  return detail::backtrack(prev, n);
}

// Unpruned O(n^2) optimal partitioning; the oracle PELT must match.
inline Zonation optimal_partition(const MultiSeries& series, const SegmentationConfig& cfg) {
  cfg.validate();
  detail::CostCache cache(series);
  const std::size_t n = cache.n;
  const std::size_t minlen = cfg.min_segment_len;
  Zonation z;
  if (n < 2 * minlen) {
    z.segments.emplace_back(0, n);
    return z;
  }
  const double beta = cfg.penalty > 0.0 ? cfg.penalty : default_penalty(n, series.size());
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> f(n + 1, inf);
  std::vector<std::int64_t> prev(n + 1, -1);
  f[0] = -beta;
  for (std::size_t t = minlen; t <= n; ++t) {
    for (std::size_t s = 0; s + minlen <= t; ++s) {
      if (f[s] == inf) continue;
      const double val = f[s] + cache.cost(s, t) + beta;
      if (val < f[t]) {
        f[t] = val;
        prev[t] = static_cast<std::int64_t>(s);
      }
    }
  }
  return detail::backtrack(prev, n);
}

// Z-score each curve over the well so unit scales do not dominate the cost.
inline MultiSeries standardize(const MultiSeries& series) {
  MultiSeries out;
  for (const auto& c : series) {
    const double n = static_cast<double>(c.size());
    double mean = 0.0;
    for (double v : c) mean += v;
    mean /= n;
    double var = 0.0;
    for (double v : c) var += (v - mean) * (v - mean);
    var /= n;
    const double sd = var > 0.0 ? std::sqrt(var) : 1.0;
    std::vector<double> z(c.size());
    for (std::size_t i = 0; i < c.size(); ++i) z[i] = (c[i] - mean) / sd;
    out.push_back(std::move(z));
  }
  return out;
}

}  // namespace litho
