#pragma once

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "litho/abc.hpp"
#include "litho/hdbscan.hpp"
#include "litho/hypothesis.hpp"
#include "litho/io.hpp"
#include "litho/model.hpp"
#include "litho/prior.hpp"
#include "litho/segmentation.hpp"
#include "litho/svg.hpp"

namespace litho {

constexpr const char* kReportSchema = "litho-abc/report/v1";

struct RunConfig {
  std::string logs_path;
  std::string endpoints_path;
  std::string out_dir = "out";

  std::vector<std::string> curves;  // curve subset used by ABC; empty = all table curves

  // prior
  double water_lo = 0.0;
  double water_hi = 0.35;
  double within_alpha = 0.1;

  // abc
  AbcConfig abc;
  bool per_depth_pool = false;

  // segmentation
  SegmentationConfig seg;
  std::vector<std::size_t> explicit_zonation;  // changepoint row indices
  bool use_explicit_zonation = false;

  // clustering
  double m_pts_frac = 0.05;
  double m_clsize_frac = 0.05;
  std::size_t max_cluster_points = 20000;  // subsample cap before HDBSCAN

  // report
  bool plots = true;
  double main_threshold = 0.05;
  bool include_timings = false;

  std::uint64_t seed = 0;
  unsigned threads = 1;

  void validate() const {
    if (!(m_pts_frac > 0.0 && m_pts_frac <= 0.5))
      throw std::invalid_argument("RunConfig: m_pts_frac out of (0, 0.5]");
    if (!(m_clsize_frac > 0.0 && m_clsize_frac <= 0.5))
      throw std::invalid_argument("RunConfig: m_clsize_frac out of (0, 0.5]");
    if (!(water_lo >= 0.0 && water_lo <= water_hi && water_hi <= 1.0))
      throw std::invalid_argument("RunConfig: bad water range");
    abc.validate();
    seg.validate();
  }

  static RunConfig from_config(const Config& c) {
    RunConfig r;
    r.logs_path = c.get("paths.logs");
    r.endpoints_path = c.get("paths.endpoints");
    r.out_dir = c.get("paths.out", "out");
    r.curves = c.get_strings("abc.curves");
    r.water_lo = c.get_double("prior.water_lo", 0.0);
    r.water_hi = c.get_double("prior.water_hi", 0.35);
    r.within_alpha = c.get_double("prior.within_alpha", 0.1);
    r.abc.j_draws = static_cast<std::uint64_t>(c.get_int("abc.j_draws", 1000000));
    r.abc.deltas = c.get_doubles("abc.deltas");
    r.abc.min_accept_per_depth = c.get_double("abc.min_accept_per_depth", 50.0);
    r.abc.simulate_noise = c.get_bool("abc.simulate_noise", false);
    r.abc.shared_pool = c.get_bool("abc.shared_pool", true);
    r.per_depth_pool = !r.abc.shared_pool;
    r.seg.penalty = c.get_double("segmentation.penalty", 0.0);
    r.seg.min_segment_len =
        static_cast<std::size_t>(c.get_int("segmentation.min_segment_len", 10));
    r.seg.curves = c.get_strings("segmentation.curves");
    for (double v : c.get_doubles("segmentation.zonation"))
      r.explicit_zonation.push_back(static_cast<std::size_t>(v));
    r.use_explicit_zonation = !r.explicit_zonation.empty() ||
                              c.get_bool("segmentation.single_segment", false);
    r.m_pts_frac = c.get_double("hdbscan.m_pts_frac", 0.05);
    r.m_clsize_frac = c.get_double("hdbscan.m_clsize_frac", 0.05);
    r.max_cluster_points =
        static_cast<std::size_t>(c.get_int("hdbscan.max_points", 20000));
    r.plots = c.get_bool("report.plots", true);
    r.main_threshold = c.get_double("report.main_threshold", 0.05);
    r.include_timings = c.get_bool("report.include_timings", false);
    r.seed = static_cast<std::uint64_t>(c.get_int("seed", 0));
    r.threads = static_cast<unsigned>(c.get_int("threads", 1));
    return r;
  }

  static std::string config_template() {
    return
        "# litho-abc run configuration (all values shown are the defaults)\n"
        "[paths]\n"
        "logs = well.csv          # CSV (DEPT,curve...) or LAS 2.0\n"
        "endpoints = endpoints.csv\n"
        "out = out\n"
        "\n"
        "[prior]\n"
        "water_lo = 0.0           # uniform water fraction range\n"
        "water_hi = 0.35\n"
        "within_alpha = 0.1       # sparse within-family Dirichlet\n"
        "\n"
        "[abc]\n"
        "curves =                 # subset of endpoint curves; empty = all\n"
        "j_draws = 1000000\n"
        "deltas =                 # per-curve half-widths, curve units\n"
        "min_accept_per_depth = 50\n"
        "simulate_noise = false   # add Gaussian noise to candidate logs\n"
        "shared_pool = true       # one candidate pool for the whole layer\n"
        "\n"
        "[segmentation]\n"
        "penalty = 0              # 0 = BIC-like default 3.5 d log n\n"
        "min_segment_len = 10\n"
        "curves =                 # curves used by PELT; empty = all\n"
        "zonation =               # explicit changepoint rows; overrides PELT\n"
        "single_segment = false   # treat the whole well as one layer\n"
        "\n"
        "[hdbscan]\n"
        "m_pts_frac = 0.05\n"
        "m_clsize_frac = 0.05\n"
        "max_points = 20000       # subsample cap before clustering\n"
        "\n"
        "[report]\n"
        "plots = true\n"
        "main_threshold = 0.05\n"
        "include_timings = false  # timings break byte-identical reports\n"
        "\n"
        "seed = 0\n"
        "threads = 1\n";
  }
};

struct LayerReport {
  int layer_id = 0;
  double depth_start = 0.0, depth_end = 0.0;
  std::size_t n_rows = 0;       // rows in the zonation segment
  std::size_t n_depths = 0;     // usable (non-missing) depths
  std::size_t missing_rows = 0;
  std::uint64_t n_abc = 0;
  double mean_accept_per_depth = 0.0;
  bool gate = false;
  std::size_t n_clustered = 0;  // points actually clustered (after the cap)
  double noise_fraction = 0.0;
  std::vector<Hypothesis> hypotheses;
  double pca_ratio1 = 0.0, pca_ratio2 = 0.0;
  std::vector<std::array<double, 2>> pca_projections;  // for the cross-plot
  std::vector<std::int32_t> point_labels;
  std::optional<MixtureDistribution> water_mix;
  bool ok = true;
  std::string error;
  double wall_seconds = 0.0;
};

namespace detail {

// Deterministic stride subsample of [0, n) down to at most cap indices.
inline std::vector<std::size_t> stride_sample(std::size_t n, std::size_t cap) {
  std::vector<std::size_t> idx;
  if (n <= cap) {
    idx.resize(n);
    for (std::size_t i = 0; i < n; ++i) idx[i] = i;
    return idx;
  }
  idx.reserve(cap);
  for (std::size_t i = 0; i < cap; ++i)
    idx.push_back((i * n) / cap);
  return idx;
}

}  // namespace detail

// Run ABC + clustering + hypothesis ranking on one layer.
inline LayerReport analyze_layer(int layer_id, const LayerLogs& layer,
                                 const PriorModel& prior, const EndpointTable& table,
                                 const RunConfig& cfg) {
  const auto t0 = std::chrono::steady_clock::now();
  LayerReport rep;
  rep.layer_id = layer_id;
  rep.n_depths = layer.depths.size();
  if (!layer.depths.empty()) {
    rep.depth_start = layer.depths.front();
    rep.depth_end = layer.depths.back();
  }
  AbcConfig abc_cfg = cfg.abc;
  abc_cfg.seed = stream_seed(cfg.seed, 0xABCull * 1000 + static_cast<std::uint64_t>(layer_id));
  abc_cfg.threads = cfg.threads;
  const AbcResult full = cfg.per_depth_pool
                             ? run_abc_layer_per_depth(layer, prior, table, abc_cfg)
                             : run_abc_layer(layer, prior, table, abc_cfg);
  rep.n_abc = full.n_abc;
  rep.mean_accept_per_depth = full.mean_accept_per_depth();
  rep.gate = quality_gate(full, abc_cfg.min_accept_per_depth);
  if (!rep.gate) {
    rep.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return rep;  // no hypothesis for a gated-out layer
  }

  // Clustering works on a capped deterministic subsample; ratios (p_hat,
  // noise fraction, quantiles) are preserved in expectation.
  const std::vector<std::size_t> keep =
      detail::stride_sample(full.accepted.size(), cfg.max_cluster_points);
  AbcResult sub;
  sub.per_depth_counts.assign(layer.depths.size(), 0);
  sub.accepted.reserve(keep.size());
  for (std::size_t i : keep) {
    sub.accepted.push_back(full.accepted[i]);
    sub.per_depth_counts[full.accepted[i].first]++;
  }
  sub.n_abc = sub.accepted.size();
  rep.n_clustered = sub.n_abc;

  PointSet points;
  points.points.reserve(sub.accepted.size());
  for (const auto& [depth, v] : sub.accepted) points.points.push_back(v.values);

  const std::size_t n = points.size();
  const std::size_t m_pts =
      std::max<std::size_t>(2, static_cast<std::size_t>(std::llround(cfg.m_pts_frac * n)));
  const std::size_t m_clsize =
      std::max<std::size_t>(2, static_cast<std::size_t>(std::llround(cfg.m_clsize_frac * n)));
  const ClusterLabels labels = hdbscan(points, m_pts, m_clsize, cfg.threads);
  rep.noise_fraction =
      n > 0 ? static_cast<double>(labels.noise_count()) / static_cast<double>(n) : 0.0;

  rep.hypotheses = summarize_clusters(sub, labels, table, layer.depths.size(),
                                      cfg.main_threshold);
  const NoiseSpec noise = abc_cfg.default_noise();
  for (auto& h : rep.hypotheses) refit_hypothesis(h, layer, table, noise);

  if (!rep.hypotheses.empty()) {
    const int wi = table.component_index("XWater");
    if (wi >= 0)
      rep.water_mix = mixture_distribution(rep.hypotheses, sub, table, "XWater");
  }
  if (n >= 3) {
    const PcaSummary pca = pca_project(points.points);
    rep.pca_ratio1 = pca.explained_variance_ratio[0];
    rep.pca_ratio2 = pca.explained_variance_ratio[1];
    rep.pca_projections = pca.projections;
    rep.point_labels = labels.labels;
  }
  rep.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

// Zonation of the well rows: explicit, or PELT over standardized curves.
inline Zonation zonate(const WellTable& well, const RunConfig& cfg) {
  if (cfg.use_explicit_zonation) {
    Zonation z;
    std::vector<std::size_t> cps = cfg.explicit_zonation;
    std::sort(cps.begin(), cps.end());
    std::size_t start = 0;
    for (std::size_t cp : cps) {
      if (cp <= start || cp >= well.depths.size()) continue;
      z.segments.emplace_back(start, cp);
      z.changepoints.push_back(cp);
      start = cp;
    }
    z.segments.emplace_back(start, well.depths.size());
    return z;
  }
  const WellTable sel = cfg.seg.curves.empty() ? well : select_curves(well, cfg.seg.curves);
  MultiSeries series(sel.curves.size());
  for (std::size_t c = 0; c < sel.curves.size(); ++c) {
    series[c].reserve(sel.rows.size());
    double last = 0.0;
    for (const auto& row : sel.rows) {
      const double v = row[c] == kMissingSentinel ? last : row[c];
      series[c].push_back(v);
      last = v;
    }
  }
  return pelt_segment(standardize(series), cfg.seg);
}

struct PipelineResult {
  Zonation zonation;
  std::vector<LayerReport> layers;
  std::vector<std::string> curve_names;
  std::vector<double> depths;  // full well depth column
};

inline PipelineResult run_pipeline(const RunConfig& cfg) {
  cfg.validate();
  const EndpointTable full_table = load_endpoint_table(cfg.endpoints_path);
  const EndpointTable table = cfg.curves.empty()
                                  ? full_table
                                  : full_table.restrict_curves(cfg.curves);
  if (cfg.abc.deltas.size() != table.num_curves())
    throw std::invalid_argument("run_pipeline: need one delta per curve");

  WellTable well = load_logs(cfg.logs_path);
  std::vector<std::string> names;
  for (const auto& c : table.curves()) names.push_back(c.name);
  well = select_curves(well, names);

  PriorModel prior = PriorModel::standard(table, cfg.within_alpha);
  prior.water_lo = cfg.water_lo;
  prior.water_hi = cfg.water_hi;
  prior.validate();

  PipelineResult out;
  out.curve_names = names;
  out.depths = well.depths;
  out.zonation = zonate(well, cfg);
  int id = 0;
  for (const auto& [start, end] : out.zonation.segments) {
    LayerReport rep;
    try {
      const LayerLogs layer = well.slice(start, end);
      if (layer.depths.empty()) throw std::runtime_error("no usable rows in layer");
      rep = analyze_layer(id, layer, prior, table, cfg);
    } catch (const std::exception& e) {
      rep.layer_id = id;
      rep.ok = false;
      rep.error = e.what();
    }
    rep.n_rows = end - start;
    std::size_t missing = 0;
    for (std::size_t i = start; i < end; ++i) missing += well.row_missing[i];
    rep.missing_rows = missing;
    if (rep.depth_start == 0.0 && rep.depth_end == 0.0 && end > start) {
      rep.depth_start = well.depths[start];
      rep.depth_end = well.depths[end - 1];
    }
    out.layers.push_back(std::move(rep));
    ++id;
  }
  return out;
}

namespace detail {

inline nlohmann::ordered_json hypothesis_json(const Hypothesis& h,
                                              const EndpointTable& table) {
  nlohmann::ordered_json j;
  j["cluster_id"] = h.cluster_id;
  j["size"] = h.size;
  j["p_hat"] = h.p_hat;
  j["coverage"] = h.coverage;
  j["suspect_coverage"] = h.coverage < 0.5;
  nlohmann::ordered_json comps = nlohmann::ordered_json::object();
  for (std::size_t k = 0; k < h.mean_volumes.size(); ++k) {
    const auto& name = table.components()[k].name;
    nlohmann::ordered_json c;
    c["mean"] = h.mean_volumes[k];
    if (k < h.quantiles.size()) {
      c["p5"] = h.quantiles[k].p5;
      c["p25"] = h.quantiles[k].p25;
      c["median"] = h.quantiles[k].median;
      c["p75"] = h.quantiles[k].p75;
      c["p95"] = h.quantiles[k].p95;
    }
    comps[name] = c;
  }
  j["components"] = comps;
  nlohmann::ordered_json mains = nlohmann::ordered_json::array();
  for (std::size_t k : h.main_components) mains.push_back(table.components()[k].name);
  j["main_components"] = mains;
  j["refit_done"] = h.refit_done;
  j["refit_skipped"] = h.refit_skipped;
  if (h.refit_done) {
    j["refit_error"] = h.refit_error;
    nlohmann::ordered_json rm = nlohmann::ordered_json::object();
    for (std::size_t k = 0; k < h.main_components.size(); ++k)
      rm[table.components()[h.main_components[k]].name] = h.refit_mean[k];
    j["refit_mean"] = rm;
  }
  return j;
}

inline void write_hypothesis_csv(const std::string& path, const LayerReport& rep,
                                 const EndpointTable& table) {
  std::ofstream out(path);
  out << "hypothesis,component,mean,p5,p25,median,p75,p95\n";
  char buf[256];
  for (std::size_t hi = 0; hi < rep.hypotheses.size(); ++hi) {
    const auto& h = rep.hypotheses[hi];
    for (std::size_t k = 0; k < h.mean_volumes.size(); ++k) {
      const auto& q = h.quantiles[k];
      std::snprintf(buf, sizeof(buf), "%zu,%s,%.6g,%.6g,%.6g,%.6g,%.6g,%.6g\n", hi,
                    table.components()[k].name.c_str(), h.mean_volumes[k], q.p5, q.p25,
                    q.median, q.p75, q.p95);
      out << buf;
    }
  }
}

// Per-cluster boxplot: p25-p75 box, median bar, p5/p95 whiskers.
inline void plot_boxplot(const std::string& path, const Hypothesis& h,
                         const EndpointTable& table) {
  const std::size_t m = h.mean_volumes.size();
  const double w = 80.0 + 60.0 * static_cast<double>(m), hgt = 360.0;
  SvgCanvas svg(w, hgt);
  const double y0 = 40.0, y1 = 300.0;
  auto y_of = [&](double v) { return y1 - (y1 - y0) * v; };
  for (double g : {0.0, 0.25, 0.5, 0.75, 1.0}) {
    svg.line(50, y_of(g), w - 20, y_of(g), "#dddddd");
    char lab[16];
    std::snprintf(lab, sizeof(lab), "%.2f", g);
    svg.text(45, y_of(g) + 4, lab, 10, "end");
  }
  for (std::size_t k = 0; k < m; ++k) {
    const double x = 80.0 + 60.0 * static_cast<double>(k);
    const auto& q = h.quantiles[k];
    const std::string col = component_color(k);
    svg.line(x, y_of(q.p5), x, y_of(q.p95), "#333333");
    svg.rect(x - 15, y_of(q.p75), 30, y_of(q.p25) - y_of(q.p75), col, "#333333");
    svg.line(x - 15, y_of(q.median), x + 15, y_of(q.median), "#000000", 2.0);
    svg.text(x, y1 + 16, table.components()[k].name, 9, "middle");
  }
  char title[64];
  std::snprintf(title, sizeof(title), "cluster %d  (m=%u, p=%.2f)", h.cluster_id,
                h.size, h.p_hat);
  svg.text(50, 22, title, 13);
  svg.save(path);
}

inline void plot_pca(const std::string& path, const PcaSummary& pca,
                     const std::vector<std::int32_t>& labels) {
  SvgCanvas svg(420, 420);
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const auto& p : pca.projections) {
    xmin = std::min(xmin, p[0]); xmax = std::max(xmax, p[0]);
    ymin = std::min(ymin, p[1]); ymax = std::max(ymax, p[1]);
  }
  const double pad = 30.0;
  auto sx = [&](double x) { return pad + (x - xmin) / std::max(xmax - xmin, 1e-12) * (420 - 2 * pad); };
  auto sy = [&](double y) { return 420 - pad - (y - ymin) / std::max(ymax - ymin, 1e-12) * (420 - 2 * pad); };
  for (std::size_t i = 0; i < pca.projections.size(); ++i) {
    const std::int32_t l = i < labels.size() ? labels[i] : -1;
    svg.circle(sx(pca.projections[i][0]), sy(pca.projections[i][1]), 1.5,
               l < 0 ? "#cccccc" : component_color(static_cast<std::size_t>(l)));
  }
  char title[96];
  std::snprintf(title, sizeof(title), "PCA projection (ratios %.2f / %.2f)",
                pca.explained_variance_ratio[0], pca.explained_variance_ratio[1]);
  svg.text(pad, 18, title, 12);
  svg.save(path);
}

inline void plot_mixture(const std::string& path, const MixtureDistribution& mix) {
  const std::size_t bins = 50;
  std::vector<double> mass(bins, 0.0);
  for (const auto& [v, w] : mix.weighted_samples) {
    std::size_t b = static_cast<std::size_t>(v * bins);
    if (b >= bins) b = bins - 1;
    mass[b] += w;
  }
  double peak = 1e-12;
  for (double m : mass) peak = std::max(peak, m);
  SvgCanvas svg(520, 320);
  const double x0 = 40, x1 = 500, y0 = 40, y1 = 280;
  for (std::size_t b = 0; b < bins; ++b) {
    const double bw = (x1 - x0) / bins;
    const double h = (y1 - y0) * mass[b] / peak;
    svg.rect(x0 + bw * b, y1 - h, bw - 1, h, "#4d94ff");
  }
  for (double q : {mix.p10, mix.median, mix.p90})
    svg.line(x0 + (x1 - x0) * q, y0, x0 + (x1 - x0) * q, y1, "#e60000");
  svg.text(x0, 22, "mixture distribution: " + mix.component +
                       " (p10/median/p90 in red)", 12);
  svg.save(path);
}

inline void plot_tracks(const std::string& path, const PipelineResult& res,
                        const EndpointTable& table) {
  const double depth_top = res.depths.empty() ? 0.0 : res.depths.front();
  const double depth_bot = res.depths.empty() ? 1.0 : res.depths.back();
  const double h = 600.0, w = 760.0;
  SvgCanvas svg(w, h);
  auto y_of = [&](double d) {
    return 40.0 + (d - depth_top) / std::max(depth_bot - depth_top, 1e-12) * (h - 80.0);
  };
  // track 1: zonation
  svg.text(20, 30, "zones", 11);
  for (const auto& rep : res.layers) {
    const double ya = y_of(rep.depth_start), yb = y_of(rep.depth_end);
    svg.rect(20, ya, 40, std::max(yb - ya, 1.0), rep.gate ? "#d9f2d9" : "#f2d9d9",
             "#888888");
    char lab[16];
    std::snprintf(lab, sizeof(lab), "%d", rep.layer_id);
    svg.text(40, (ya + yb) / 2 + 4, lab, 10, "middle");
  }
  // track 2+: mean lithology of the top hypothesis per layer
  svg.text(80, 30, "top hypothesis mean lithology", 11);
  for (const auto& rep : res.layers) {
    if (rep.hypotheses.empty()) continue;
    const auto& hyp = rep.hypotheses.front();
    const double ya = y_of(rep.depth_start), yb = y_of(rep.depth_end);
    double x = 80.0;
    for (std::size_t k = 0; k < hyp.mean_volumes.size(); ++k) {
      const double frac = hyp.mean_volumes[k];
      if (frac <= 0.0) continue;
      svg.rect(x, ya, 300.0 * frac, std::max(yb - ya, 1.0), component_color(k));
      x += 300.0 * frac;
    }
  }
  // legend
  double lx = 420.0;
  for (std::size_t k = 0; k < table.num_components(); ++k) {
    svg.rect(lx, 40.0 + 18.0 * k, 12, 12, component_color(k));
    svg.text(lx + 16, 50.0 + 18.0 * k, table.components()[k].name, 10);
  }
  svg.save(path);
}

}  // namespace detail

// Write the versioned JSON report, per-layer hypothesis CSVs and the
// optional SVG plots into cfg.out_dir.
inline void emit_report(const PipelineResult& res, const RunConfig& cfg) {
  namespace fs = std::filesystem;
  fs::create_directories(cfg.out_dir);
  const EndpointTable full_table = load_endpoint_table(cfg.endpoints_path);
  const EndpointTable table =
      cfg.curves.empty() ? full_table : full_table.restrict_curves(cfg.curves);

  nlohmann::ordered_json root;
  root["schema"] = kReportSchema;
  root["seed"] = cfg.seed;
  nlohmann::ordered_json zon = nlohmann::ordered_json::array();
  for (std::size_t cp : res.zonation.changepoints) zon.push_back(cp);
  root["zonation_changepoints"] = zon;
  nlohmann::ordered_json layers = nlohmann::ordered_json::array();
  for (const auto& rep : res.layers) {
    nlohmann::ordered_json j;
    j["layer_id"] = rep.layer_id;
    j["depth_start"] = rep.depth_start;
    j["depth_end"] = rep.depth_end;
    j["n_rows"] = rep.n_rows;
    j["n_depths"] = rep.n_depths;
    j["missing_rows"] = rep.missing_rows;
    j["ok"] = rep.ok;
    if (!rep.ok) j["error"] = rep.error;
    j["n_abc"] = rep.n_abc;
    j["mean_accept_per_depth"] = rep.mean_accept_per_depth;
    j["gate"] = rep.gate;
    j["n_clustered"] = rep.n_clustered;
    j["noise_fraction"] = rep.noise_fraction;
    j["pca_ratio1"] = rep.pca_ratio1;
    j["pca_ratio2"] = rep.pca_ratio2;
    nlohmann::ordered_json hyps = nlohmann::ordered_json::array();
    for (const auto& h : rep.hypotheses)
      hyps.push_back(detail::hypothesis_json(h, table));
    j["hypotheses"] = hyps;
    if (rep.water_mix) {
      nlohmann::ordered_json mj;
      mj["component"] = rep.water_mix->component;
      mj["p10"] = rep.water_mix->p10;
      mj["median"] = rep.water_mix->median;
      mj["p90"] = rep.water_mix->p90;
      j["water_mixture"] = mj;
    }
    if (cfg.include_timings) j["wall_seconds"] = rep.wall_seconds;
    layers.push_back(j);
  }
  root["layers"] = layers;
  {
    std::ofstream out(fs::path(cfg.out_dir) / "report.json");
    out << root.dump(2) << "\n";
  }

  for (const auto& rep : res.layers) {
    if (rep.hypotheses.empty()) continue;  // no files for gated-out layers
    const std::string base =
        (fs::path(cfg.out_dir) / ("layer_" + std::to_string(rep.layer_id))).string();
    detail::write_hypothesis_csv(base + "_hypotheses.csv", rep, table);
    if (cfg.plots) {
      for (std::size_t hi = 0; hi < rep.hypotheses.size(); ++hi)
        detail::plot_boxplot(base + "_cluster" + std::to_string(hi) + "_boxplot.svg",
                             rep.hypotheses[hi], table);
      if (rep.water_mix)
        detail::plot_mixture(base + "_water_mixture.svg", *rep.water_mix);
      if (!rep.pca_projections.empty()) {
        PcaSummary view;
        view.projections = rep.pca_projections;
        view.explained_variance_ratio = {rep.pca_ratio1, rep.pca_ratio2};
        detail::plot_pca(base + "_pca.svg", view, rep.point_labels);
      }
    }
  }
  if (cfg.plots) detail::plot_tracks((fs::path(cfg.out_dir) / "tracks.svg").string(), res, table);
}

}  // namespace litho
