#include <catch2/catch_amalgamated.hpp>

#include "litho/hypothesis.hpp"
#include "test_util.hpp"

using namespace litho;
using test::matrix_from_rows;
using test::table_from_matrix;

namespace {

// Synthetic acceptance set: counts[c] copies of center[c] per cluster,
// plus n_noise stray rows. Depth indices cycle through n_depths.
struct Synth {
  AbcResult result;
  ClusterLabels labels;
};

Synth make_synth(const std::vector<std::vector<double>>& centers,
                 const std::vector<std::size_t>& counts, std::size_t n_noise,
                 std::size_t n_depths, Rng& rng, double jitter = 0.0) {
  Synth s;
  const std::size_t m = centers[0].size();
  std::size_t row = 0;
  for (std::size_t c = 0; c < centers.size(); ++c) {
    for (std::size_t i = 0; i < counts[c]; ++i, ++row) {
      VolumeVector v;
      v.values = centers[c];
      if (jitter > 0.0) {
        double sum = 0.0;
        for (double& x : v.values) {
          x = std::max(0.0, x + rng.uniform(-jitter, jitter));
          sum += x;
        }
        for (double& x : v.values) x /= sum;
      }
      s.result.accepted.emplace_back(static_cast<std::uint32_t>(row % n_depths), v);
      s.labels.labels.push_back(static_cast<std::int32_t>(c));
    }
  }
  for (std::size_t i = 0; i < n_noise; ++i, ++row) {
    VolumeVector v;
    v.values.assign(m, 1.0 / static_cast<double>(m));
    s.result.accepted.emplace_back(static_cast<std::uint32_t>(row % n_depths), v);
    s.labels.labels.push_back(-1);
  }
  s.result.n_abc = s.result.accepted.size();
  s.result.per_depth_counts.assign(n_depths, 0);
  for (const auto& a : s.result.accepted) s.result.per_depth_counts[a.first]++;
  s.labels.cluster_sizes.assign(counts.begin(), counts.end());
  return s;
}

EndpointTable table3() {
  return table_from_matrix(matrix_from_rows({{10, 120, 0}, {0.0, 0.25, 1.0}}));
}

}  // namespace

TEST_CASE("summarize_clusters: p_hat ratios and ordering") {
  Rng rng(1);
  const auto table = table3();
  // 400, 150, 100 members plus 350 noise rows in a pool of 1000
  const Synth s = make_synth({{0.7, 0.1, 0.2}, {0.1, 0.7, 0.2}, {0.3, 0.3, 0.4}},
                             {150, 400, 100}, 350, 10, rng);
  const auto hyps = summarize_clusters(s.result, s.labels, table, 10);
  REQUIRE(hyps.size() == 3);
  CHECK(hyps[0].size == 400);
  CHECK(hyps[1].size == 150);
  CHECK(hyps[2].size == 100);
  CHECK(hyps[0].p_hat == Catch::Approx(0.40));
  CHECK(hyps[1].p_hat == Catch::Approx(0.15));
  CHECK(hyps[2].p_hat == Catch::Approx(0.10));
  // p_hat total plus noise fraction is one
  double total = 0.0;
  for (const auto& h : hyps) total += h.p_hat;
  const double noise_frac =
      static_cast<double>(s.labels.noise_count()) / static_cast<double>(s.result.n_abc);
  CHECK(total + noise_frac == Catch::Approx(1.0));
  // cluster 1 (the 400-member one) centers on (0.1, 0.7, 0.2)
  CHECK(hyps[0].mean_volumes[0] == Catch::Approx(0.1));
  CHECK(hyps[0].mean_volumes[1] == Catch::Approx(0.7));
  CHECK(hyps[0].mean_volumes[2] == Catch::Approx(0.2));
  CHECK(hyps[0].coverage == Catch::Approx(1.0));
}

TEST_CASE("summarize_clusters: main components respect the threshold") {
  Rng rng(2);
  const auto table = table3();
  const Synth s = make_synth({{0.93, 0.04, 0.03}}, {50}, 0, 5, rng);
  const auto hyps = summarize_clusters(s.result, s.labels, table, 5, 0.05);
  REQUIRE(hyps.size() == 1);
  CHECK(hyps[0].main_components == std::vector<std::size_t>{0});
  const auto loose = summarize_clusters(s.result, s.labels, table, 5, 0.03);
  CHECK(loose[0].main_components == std::vector<std::size_t>{0, 1, 2});
}

TEST_CASE("summarize_clusters: quantiles of a jittered cluster bracket the center") {
  Rng rng(3);
  const auto table = table3();
  const Synth s = make_synth({{0.5, 0.3, 0.2}}, {500}, 0, 5, rng, 0.05);
  const auto hyps = summarize_clusters(s.result, s.labels, table, 5);
  REQUIRE(hyps.size() == 1);
  const auto& q = hyps[0].quantiles[0];
  CHECK(q.p5 <= q.p25);
  CHECK(q.p25 <= q.median);
  CHECK(q.median <= q.p75);
  CHECK(q.p75 <= q.p95);
  CHECK(q.median == Catch::Approx(0.5).margin(0.02));
  CHECK(q.p5 < 0.5);
  CHECK(q.p95 > 0.5);
}

TEST_CASE("summarize_clusters: label count mismatch throws") {
  Rng rng(4);
  const auto table = table3();
  Synth s = make_synth({{0.5, 0.3, 0.2}}, {10}, 0, 2, rng);
  s.labels.labels.pop_back();
  CHECK_THROWS_AS(summarize_clusters(s.result, s.labels, table, 2), std::invalid_argument);
}

TEST_CASE("pca_project: rank-1 data puts all variance on the first axis") {
  std::vector<std::vector<double>> rows;
  const std::vector<double> dir{0.6, -0.8, 0.0};
  for (int i = -10; i <= 10; ++i)
    rows.push_back({0.5 + dir[0] * 0.01 * i, 0.5 + dir[1] * 0.01 * i, dir[2]});
  const PcaSummary pca = pca_project(rows);
  CHECK(pca.explained_variance_ratio[0] == Catch::Approx(1.0).margin(1e-9));
  CHECK(pca.explained_variance_ratio[1] == Catch::Approx(0.0).margin(1e-9));
  // first loading is parallel to dir with the dominant entry positive
  CHECK(std::fabs(pca.components[0][0]) == Catch::Approx(0.6).margin(1e-9));
  CHECK(std::fabs(pca.components[0][1]) == Catch::Approx(0.8).margin(1e-9));
  CHECK(pca.components[0][1] > 0.0);  // sign convention
  // projections spread along the line, centered on zero
  double mean = 0.0;
  for (const auto& p : pca.projections) mean += p[0];
  CHECK(mean == Catch::Approx(0.0).margin(1e-9));
}

TEST_CASE("pca_project: isotropic data splits the variance evenly") {
  Rng rng(5);
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < 5000; ++i) rows.push_back({rng.normal(), rng.normal()});
  const PcaSummary pca = pca_project(rows);
  CHECK(pca.explained_variance_ratio[0] == Catch::Approx(0.5).margin(0.03));
  CHECK(pca.explained_variance_ratio[1] == Catch::Approx(0.5).margin(0.03));
  // loadings orthonormal
  const auto& a = pca.components[0];
  const auto& b = pca.components[1];
  CHECK(a[0] * b[0] + a[1] * b[1] == Catch::Approx(0.0).margin(1e-9));
  CHECK(a[0] * a[0] + a[1] * a[1] == Catch::Approx(1.0).margin(1e-9));
}

TEST_CASE("pca_project: fewer than 3 rows throws") {
  CHECK_THROWS_AS(pca_project({{1.0, 2.0}, {2.0, 1.0}}), std::invalid_argument);
}

TEST_CASE("mixture_distribution: weights are uniform across the pooled members") {
  Rng rng(6);
  const auto table = table3();
  const Synth s = make_synth({{0.8, 0.1, 0.1}, {0.1, 0.8, 0.1}}, {300, 100}, 50, 5, rng);
  const auto hyps = summarize_clusters(s.result, s.labels, table, 5);
  const auto mix = mixture_distribution(hyps, s.result, table, "M0");
  REQUIRE(mix.weighted_samples.size() == 400);  // noise excluded
  double total = 0.0;
  for (const auto& [v, w] : mix.weighted_samples) total += w;
  CHECK(total == Catch::Approx(1.0));
  // 75% of the mass sits at 0.8, so the median lands there
  CHECK(mix.median == Catch::Approx(0.8));
  CHECK(mix.p10 == Catch::Approx(0.1));
  CHECK(mix.p90 == Catch::Approx(0.8));
  CHECK(mixture_mode(mix) == Catch::Approx(0.81).margin(0.011));
  CHECK_THROWS_AS(mixture_distribution(hyps, s.result, table, "Nope"),
                  std::invalid_argument);
}

TEST_CASE("mixture_distribution: symmetric two-cluster mixture has a central median") {
  Rng rng(7);
  const auto table = table3();
  const Synth s = make_synth({{0.2, 0.4, 0.4}, {0.6, 0.2, 0.2}}, {200, 200}, 0, 5, rng);
  const auto hyps = summarize_clusters(s.result, s.labels, table, 5);
  const auto mix = mixture_distribution(hyps, s.result, table, "M0");
  // equal masses at 0.2 and 0.6; the weighted 50% quantile hits the lower atom
  CHECK(mix.median == Catch::Approx(0.2));
  CHECK(mix.p10 == Catch::Approx(0.2));
  CHECK(mix.p90 == Catch::Approx(0.6));
}

TEST_CASE("refit_hypothesis: noiseless logs are reproduced by the refit") {
  const auto g = matrix_from_rows({{10, 120, 0}, {0.0, 0.25, 1.0}, {2.65, 2.78, 1.0}});
  const auto table = table_from_matrix(g);
  const VolumeVector truth{{0.55, 0.25, 0.20}};
  LayerLogs layer;
  layer.curves = table.curves();
  for (int i = 0; i < 4; ++i) {
    layer.depths.push_back(1000.0 + i);
    layer.samples.push_back(forward(truth, table));
  }
  Hypothesis h;
  h.main_components = {0, 1, 2};
  refit_hypothesis(h, layer, table, NoiseSpec(Matrix::identity(3)));
  REQUIRE(h.refit_done);
  CHECK_FALSE(h.refit_skipped);
  REQUIRE(h.refit_mean.size() == 3);
  CHECK(h.refit_mean[0] == Catch::Approx(0.55).margin(1e-6));
  CHECK(h.refit_mean[1] == Catch::Approx(0.25).margin(1e-6));
  CHECK(h.refit_mean[2] == Catch::Approx(0.20).margin(1e-6));
  CHECK(h.refit_error == Catch::Approx(0.0).margin(1e-8));
  for (const auto& v : h.refit_volumes) CHECK(v.on_simplex());
}

TEST_CASE("refit_hypothesis: restricted support still sums to one") {
  const auto g = matrix_from_rows({{10, 120, 0}, {0.0, 0.25, 1.0}});
  const auto table = table_from_matrix(g);
  LayerLogs layer;
  layer.curves = table.curves();
  layer.depths = {1000.0};
  layer.samples = {{40.0, 0.3}};
  Hypothesis h;
  h.main_components = {0, 2};  // drop the middle component
  refit_hypothesis(h, layer, table, NoiseSpec(Matrix::identity(2)));
  REQUIRE(h.refit_done);
  CHECK(h.refit_volumes[0].on_simplex());
  CHECK(h.refit_mean.size() == 2);
}

TEST_CASE("refit_hypothesis: skip flags") {
  const auto table = table3();  // 2 curves
  LayerLogs layer;
  layer.curves = table.curves();
  layer.depths = {0.0};
  layer.samples = {{40.0, 0.3}};
  const NoiseSpec noise(Matrix::identity(2));
  Hypothesis empty;
  refit_hypothesis(empty, layer, table, noise);
  CHECK(empty.refit_skipped);
  CHECK_FALSE(empty.refit_done);
  Hypothesis wide;
  wide.main_components = {0, 1, 2};  // d + 1 = 3 is still allowed
  refit_hypothesis(wide, layer, table, noise);
  CHECK(wide.refit_done);
}
