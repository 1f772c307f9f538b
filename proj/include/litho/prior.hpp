#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "litho/model.hpp"
#include "litho/random.hpp"

namespace litho {

struct DirichletParams {
  std::vector<double> alpha;

  void validate() const {
    if (alpha.empty()) throw std::invalid_argument("Dirichlet: empty alpha");
    for (double a : alpha)
      if (!(a > 0.0)) throw std::invalid_argument("Dirichlet: alpha must be > 0");
  }
};

// Normalized vector of independent Gamma(alpha_i, 1) draws.
inline std::vector<double> sample_dirichlet(const DirichletParams& params, Rng& rng) {
  params.validate();
  std::vector<double> x(params.alpha.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = rng.gamma(params.alpha[i]);
    sum += x[i];
  }
  if (sum <= 0.0) {
    // All gammas underflowed (tiny alphas); fall back to the max index.
    std::size_t imax = 0;
    for (std::size_t i = 0; i < x.size(); ++i) x[i] = 0.0;
    x[imax] = 1.0;
    return x;
  }
  for (double& v : x) v /= sum;
  return x;
}

// mean_i = alpha_i / a0, var_i = alpha_i (a0 - alpha_i) / (a0^2 (a0 + 1)).
inline void dirichlet_moments(const DirichletParams& params,
                              std::vector<double>& mean,
                              std::vector<double>& variance) {
  params.validate();
  double a0 = 0.0;
  for (double a : params.alpha) a0 += a;
  mean.resize(params.alpha.size());
  variance.resize(params.alpha.size());
  for (std::size_t i = 0; i < params.alpha.size(); ++i) {
    const double ai = params.alpha[i];
    mean[i] = ai / a0;
    variance[i] = ai * (a0 - ai) / (a0 * a0 * (a0 + 1.0));
  }
}

// One mineral family of the hierarchical prior: the component indices it
// owns in the endpoint table and the within-family concentration.
struct FamilyGroup {
  std::string name;
  std::vector<std::size_t> component_indices;
  DirichletParams within_alpha;
};

// Hierarchical prior: water uniform, family split Dirichlet, sparse
// within-family Dirichlet. Components assigned to no family (e.g. unused
// fluids) always draw volume zero.
struct PriorModel {
  double water_lo = 0.0;
  double water_hi = 0.35;
  std::size_t water_index = 0;  // index of the water component in the table
  DirichletParams family_alpha;
  std::vector<FamilyGroup> families;
  std::size_t num_components = 0;

  void validate() const {
    if (!(water_lo >= 0.0 && water_lo <= water_hi && water_hi <= 1.0))
      throw std::invalid_argument("PriorModel: bad water range");
    if (families.size() != family_alpha.alpha.size())
      throw std::invalid_argument("PriorModel: family_alpha size mismatch");
    family_alpha.validate();
    std::vector<int> seen(num_components, 0);
    for (const auto& f : families) {
      if (f.component_indices.size() != f.within_alpha.alpha.size())
        throw std::invalid_argument("PriorModel: within_alpha size mismatch in " + f.name);
      f.within_alpha.validate();
      for (std::size_t j : f.component_indices) {
        if (j >= num_components || j == water_index)
          throw std::invalid_argument("PriorModel: bad component index in " + f.name);
        if (seen[j]++)
          throw std::invalid_argument("PriorModel: component in two families");
      }
    }
    if (water_index >= num_components)
      throw std::invalid_argument("PriorModel: water index out of range");
  }

  // Default model of the synthetic study: water U[0,0.35], family split
  // Dir(1,1,1), within-family alpha 0.1 per component.
  static PriorModel standard(const EndpointTable& table,
                             double within_alpha_value = 0.1) {
    PriorModel m;
    m.num_components = table.num_components();
    const int wi = table.component_index("XWater");
    if (wi < 0) throw std::invalid_argument("PriorModel: table has no XWater");
    m.water_index = static_cast<std::size_t>(wi);
    FamilyGroup sand{"Sand", {}, {}};
    FamilyGroup shale{"Shale", {}, {}};
    FamilyGroup carb{"Carbonate", {}, {}};
    FamilyGroup other{"Other", {}, {}};
    const auto& comps = table.components();
    for (std::size_t j = 0; j < comps.size(); ++j) {
      if (comps[j].family == Family::Porosity) continue;  // fluids not drawn
      switch (comps[j].family) {
        case Family::Sand: sand.component_indices.push_back(j); break;
        case Family::Shale: shale.component_indices.push_back(j); break;
        case Family::Carbonate: carb.component_indices.push_back(j); break;
        default: other.component_indices.push_back(j); break;
      }
    }
    for (auto* f : {&sand, &shale, &carb, &other}) {
      if (f->component_indices.empty()) continue;
      f->within_alpha.alpha.assign(f->component_indices.size(), within_alpha_value);
      m.families.push_back(*f);
    }
    m.family_alpha.alpha.assign(m.families.size(), 1.0);
    m.validate();
    return m;
  }
};

inline VolumeVector sample_lithology(const PriorModel& model, Rng& rng) {
  VolumeVector v;
  v.values.assign(model.num_components, 0.0);
  const double water = rng.uniform(model.water_lo, model.water_hi);
  v.values[model.water_index] = water;
  const double rest = 1.0 - water;
  const std::vector<double> fam = sample_dirichlet(model.family_alpha, rng);
  for (std::size_t fi = 0; fi < model.families.size(); ++fi) {
    const auto& grp = model.families[fi];
    const double mass = rest * fam[fi];
    const std::vector<double> within = sample_dirichlet(grp.within_alpha, rng);
    for (std::size_t k = 0; k < grp.component_indices.size(); ++k)
      v.values[grp.component_indices[k]] = mass * within[k];
  }
  // Guard against accumulated rounding drift.
  double s = 0.0;
  for (double x : v.values) s += x;
  if (s > 0.0)
    for (double& x : v.values) x /= s;
  return v;
}

}  // namespace litho
