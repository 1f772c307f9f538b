#pragma once

#include <atomic>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <thread>
#include <vector>

#include "litho/model.hpp"
#include "litho/prior.hpp"

namespace litho {

struct AbcConfig {
  std::uint64_t j_draws = 1000000;       // candidate count J
  std::vector<double> deltas;            // per-curve acceptance half-widths
  double min_accept_per_depth = 50.0;    // quality gate threshold
  std::uint64_t seed = 0;
  bool simulate_noise = false;  // add Gaussian noise to candidate logs
  bool shared_pool = true;      // one candidate pool shared by all depths
  unsigned threads = 1;

  void validate() const {
    if (j_draws < 1) throw std::invalid_argument("AbcConfig: j_draws must be >= 1");
    if (deltas.empty()) throw std::invalid_argument("AbcConfig: no deltas");
    for (double d : deltas)
      if (!(d > 0.0)) throw std::invalid_argument("AbcConfig: deltas must be > 0");
  }

  // Default noise model: diagonal, sigma_i = delta_i / 2.
  NoiseSpec default_noise() const {
    std::vector<double> var(deltas.size());
    for (std::size_t i = 0; i < deltas.size(); ++i)
      var[i] = (deltas[i] / 2.0) * (deltas[i] / 2.0);
    return NoiseSpec::diagonal(var);
  }
};

struct AbcResult {
  // (depth index, accepted volume), ordered by candidate then depth.
  std::vector<std::pair<std::uint32_t, VolumeVector>> accepted;
  std::vector<std::uint64_t> per_depth_counts;
  std::uint64_t n_abc = 0;

  double mean_accept_per_depth() const {
    if (per_depth_counts.empty()) return 0.0;
    return static_cast<double>(n_abc) / static_cast<double>(per_depth_counts.size());
  }
};

// Strict per-coordinate box test of Algorithm "accept iff |c_i - o_i| < delta_i".
inline bool abc_accept(const LogVector& candidate, const LogVector& observed,
                       const std::vector<double>& deltas) {
  if (candidate.size() != observed.size() || candidate.size() != deltas.size())
    throw std::invalid_argument("abc_accept: dimension mismatch");
  for (std::size_t i = 0; i < candidate.size(); ++i) {
    const double r = candidate[i] - observed[i];
    if (!(r < deltas[i] && -r < deltas[i])) return false;
  }
  return true;
}

inline bool quality_gate(const AbcResult& result, double threshold) {
  return result.mean_accept_per_depth() >= threshold;
}

namespace detail {

// Candidates are generated in fixed-size chunks, each with its own seeded
// stream, and merged in chunk order. The result is therefore independent
// of the number of worker threads.
constexpr std::uint64_t kAbcChunk = 8192;

struct ChunkOut {
  std::vector<std::pair<std::uint32_t, VolumeVector>> accepted;
};

}  // namespace detail

inline AbcResult run_abc_layer(const LayerLogs& layer, const PriorModel& prior,
                               const EndpointTable& table, const AbcConfig& cfg) {
  layer.validate();
  cfg.validate();
  prior.validate();
  if (layer.curves.size() != table.num_curves())
    throw std::invalid_argument("run_abc_layer: curve count mismatch");
  for (std::size_t i = 0; i < layer.curves.size(); ++i)
    if (layer.curves[i].name != table.curves()[i].name)
      throw std::invalid_argument("run_abc_layer: curve order mismatch: " +
                                  layer.curves[i].name);
  if (cfg.deltas.size() != table.num_curves())
    throw std::invalid_argument("run_abc_layer: delta count mismatch");

  const std::size_t n_depths = layer.samples.size();
  const std::size_t d = table.num_curves();
  const std::uint64_t n_chunks = (cfg.j_draws + detail::kAbcChunk - 1) / detail::kAbcChunk;
  std::vector<detail::ChunkOut> chunks(n_chunks);
  const std::optional<NoiseSpec> noise =
      cfg.simulate_noise ? std::optional<NoiseSpec>(cfg.default_noise()) : std::nullopt;

  auto scan_chunk = [&](std::uint64_t c) {
    const std::uint64_t begin = c * detail::kAbcChunk;
    const std::uint64_t end = std::min(begin + detail::kAbcChunk, cfg.j_draws);
    Rng rng(stream_seed(cfg.seed, c));
    auto& out = chunks[c];
    for (std::uint64_t i = begin; i < end; ++i) {
      const VolumeVector v = sample_lithology(prior, rng);
      LogVector cand = table.g().matvec(v.values);
      if (noise) {
        const LogVector x = noise->sample(rng);
        for (std::size_t k = 0; k < d; ++k) cand[k] += x[k];
      }
      for (std::size_t depth = 0; depth < n_depths; ++depth) {
        const LogVector& obs = layer.samples[depth];
        bool ok = true;
        for (std::size_t k = 0; k < d; ++k) {
          const double r = cand[k] - obs[k];
          if (!(r < cfg.deltas[k] && -r < cfg.deltas[k])) {
            ok = false;
            break;
          }
        }
        if (ok) out.accepted.emplace_back(static_cast<std::uint32_t>(depth), v);
      }
    }
  };

  const unsigned nthreads = std::max(1u, cfg.threads);
  if (nthreads == 1 || n_chunks == 1) {
    for (std::uint64_t c = 0; c < n_chunks; ++c) scan_chunk(c);
  } else {
    std::atomic<std::uint64_t> next{0};
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < nthreads; ++t)
      pool.emplace_back([&] {
        for (;;) {
          const std::uint64_t c = next.fetch_add(1);
          if (c >= n_chunks) return;
          scan_chunk(c);
        }
      });
    for (auto& th : pool) th.join();
  }

  AbcResult res;
  res.per_depth_counts.assign(n_depths, 0);
  std::size_t total = 0;
  for (const auto& c : chunks) total += c.accepted.size();
  res.accepted.reserve(total);
  for (auto& c : chunks)
    for (auto& a : c.accepted) {
      res.per_depth_counts[a.first]++;
      res.accepted.push_back(std::move(a));
    }
  res.n_abc = res.accepted.size();
  return res;
}

// Fidelity variant: an independent candidate pool per depth (J draws each).
inline AbcResult run_abc_layer_per_depth(const LayerLogs& layer, const PriorModel& prior,
                                         const EndpointTable& table, const AbcConfig& cfg) {
  AbcResult res;
  const std::size_t n_depths = layer.samples.size();
  res.per_depth_counts.assign(n_depths, 0);
  for (std::size_t depth = 0; depth < n_depths; ++depth) {
    LayerLogs one;
    one.curves = layer.curves;
    one.depths = {layer.depths[depth]};
    one.samples = {layer.samples[depth]};
    AbcConfig sub = cfg;
    sub.seed = stream_seed(cfg.seed, 0x5eed0000ull + depth);
    AbcResult r = run_abc_layer(one, prior, table, sub);
    for (auto& a : r.accepted)
      res.accepted.emplace_back(static_cast<std::uint32_t>(depth), std::move(a.second));
    res.per_depth_counts[depth] = r.n_abc;
  }
  res.n_abc = res.accepted.size();
  return res;
}

}  // namespace litho
