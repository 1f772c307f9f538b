#pragma once

#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "litho/model.hpp"
#include "litho/prior.hpp"
#include "litho/random.hpp"

namespace litho {

// One synthetic layer recipe: Dirichlet concentration per component (zero
// means absent), depth count, per-component bridge scale and log noise.
struct Scenario {
  std::string name;
  std::map<std::string, double> alpha_row;  // component name -> concentration
  std::size_t n_samples = 250;
  double bridge_sigma = 0.03;
  std::vector<double> noise_variances;  // per curve; empty = noiseless
  std::uint64_t seed = 0;

  void validate() const {
    if (n_samples < 1) throw std::invalid_argument("Scenario: n_samples < 1");
    bool any = false;
    for (const auto& [k, a] : alpha_row) {
      if (a < 0.0) throw std::invalid_argument("Scenario: negative alpha for " + k);
      if (a > 0.0) any = true;
    }
    if (!any) throw std::invalid_argument("Scenario: all-zero alpha row");
  }
};

// Brownian bridge B(t) on [0,1] sampled at n uniform times, B(0)=B(1)=0,
// marginal variance sigma^2 t (1 - t). Built as W(t) - t W(1).
inline std::vector<double> brownian_bridge(std::size_t n, double sigma, Rng& rng) {
  if (n < 2) throw std::invalid_argument("brownian_bridge: need n >= 2");
  std::vector<double> w(n, 0.0);
  const double dt = 1.0 / static_cast<double>(n - 1);
  const double step_sd = sigma * std::sqrt(dt);
  for (std::size_t i = 1; i < n; ++i) w[i] = w[i - 1] + step_sd * rng.normal();
  const double w1 = w[n - 1];
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) * dt;
    w[i] -= t * w1;
  }
  return w;
}

struct SyntheticLayer {
  std::vector<VolumeVector> volumes;  // ground truth per depth
  VolumeVector mean_volumes;          // the drawn average lithology
  LayerLogs logs;
};

// Draw an average lithology from Dir(alpha_row), perturb each present
// component along depth with an independent Brownian bridge, clamp and
// renormalize to the simplex, then map through the forward model and add
// Gaussian noise. Deterministic per seed.
inline SyntheticLayer generate_layer(const Scenario& s, const EndpointTable& table) {
  s.validate();
  const std::size_t m = table.num_components();
  std::vector<std::size_t> present;
  std::vector<double> alpha;
  for (const auto& [name, a] : s.alpha_row) {
    if (a <= 0.0) continue;
    const int j = table.component_index(name);
    if (j < 0) throw std::invalid_argument("generate_layer: component not in table: " + name);
    present.push_back(static_cast<std::size_t>(j));
    alpha.push_back(a);
  }

  Rng rng(s.seed);
  const std::vector<double> mean = sample_dirichlet(DirichletParams{alpha}, rng);

  SyntheticLayer out;
  out.mean_volumes.values.assign(m, 0.0);
  for (std::size_t k = 0; k < present.size(); ++k)
    out.mean_volumes.values[present[k]] = mean[k];

  std::vector<std::vector<double>> bridges;
  for (std::size_t k = 0; k < present.size(); ++k) {
    if (s.bridge_sigma > 0.0 && s.n_samples >= 2)
      bridges.push_back(brownian_bridge(s.n_samples, s.bridge_sigma, rng));
    else
      bridges.push_back(std::vector<double>(s.n_samples, 0.0));
  }

  NoiseSpec noise = s.noise_variances.empty() ? NoiseSpec::zero(table.num_curves())
                                              : NoiseSpec::diagonal(s.noise_variances);
  if (noise.dim() != table.num_curves())
    throw std::invalid_argument("generate_layer: noise dimension mismatch");

  out.logs.curves = table.curves();
  for (std::size_t i = 0; i < s.n_samples; ++i) {
    VolumeVector v;
    v.values.assign(m, 0.0);
    double sum = 0.0;
    for (std::size_t k = 0; k < present.size(); ++k) {
      double x = mean[k] + bridges[k][i];
      if (x < 0.0) x = 0.0;
      v.values[present[k]] = x;
      sum += x;
    }
    if (sum <= 0.0) {
      v = out.mean_volumes;  // degenerate perturbation; fall back to the mean
    } else {
      for (double& x : v.values) x /= sum;
    }
    out.volumes.push_back(v);
    out.logs.depths.push_back(static_cast<double>(i));
    out.logs.samples.push_back(add_noise(forward(v, table), noise, rng));
  }
  return out;
}

// The scenario catalog of the synthetic study. Concentrations are the
// table rows; Sandy Oil is shipped but involves a hydrocarbon component.
inline std::vector<Scenario> scenario_catalog() {
  auto mk = [](std::string name, std::map<std::string, double> row) {
    Scenario s;
    s.name = std::move(name);
    s.alpha_row = std::move(row);
    return s;
  };
  return {
      mk("Sandy", {{"Quartz", 80}, {"XWater", 20}}),
      mk("Sandy Oil", {{"Quartz", 80}, {"XWater", 5}, {"XOil", 15}}),
      mk("Shaly-Sand 1", {{"Illite", 40}, {"Quartz", 40}, {"XWater", 20}}),
      mk("Shaly-Sand 2", {{"Illite", 80}, {"Quartz", 10}, {"XWater", 10}}),
      mk("Shaly-Sand 3", {{"Smectite", 80}, {"Quartz", 10}, {"XWater", 10}}),
      mk("Shaly-Sand 4", {{"Chlorite", 40}, {"Illite", 40}, {"Quartz", 10}, {"XWater", 10}}),
      mk("Shaly-Carbonate 1", {{"Smectite", 60}, {"Calcite", 20}, {"XWater", 20}}),
      mk("Shaly-Carbonate 2", {{"Kaolinite", 30}, {"Calcite", 50}, {"XWater", 20}}),
      mk("Shaly-Carbonate 3", {{"Illite", 20}, {"Kaolinite", 20}, {"Dolomite", 40}, {"XWater", 20}}),
      mk("Carbonate-Shaly", {{"Illite", 20}, {"Calcite", 30}, {"Dolomite", 30}, {"XWater", 20}}),
      mk("Carbonate", {{"Calcite", 40}, {"Dolomite", 40}, {"XWater", 20}}),
  };
}

inline Scenario find_scenario(const std::string& name) {
  for (auto& s : scenario_catalog())
    if (s.name == name) return s;
  throw std::invalid_argument("unknown scenario: " + name);
}

}  // namespace litho
