#include "scenarios.hpp"

#include <cmath>

namespace bhankel::app {

EvolveScenario blowup_scenario() {
    EvolveScenario s;
    s.params = derive_params(2, 0.0, 0);
    s.design.age_min = 2e-3;
    s.design.age_max = 1.2;
    s.design.decay = 20.0;
    s.design.panels = 232;
    s.amplitude = 10.0;
    s.age = 1.0;
    s.config.t_end = 1.0;
    s.config.steps = 20;
    s.config.substeps = 2;
    s.config.picard_tol = 1e-9;
    s.config.q = 16.0;
    s.config.blowup_threshold = 1.5e4;
    s.config.spectral_tail_tol = 1e-3;
    s.config.nonlinearity = make_nonlinearity(1.0, Sign::focusing, s.params);
    return s;
}

GridFunction initial_data(const EvolveScenario& scenario, const TransformPlan& plan) {
    const auto& p = scenario.params;
    const double e = 2.0 - p.beta;
    return sample(
        plan.physical_grid,
        [&](double r) { return scenario.amplitude * std::pow(r, p.k) * std::exp(-std::pow(r, e) / (e * e * scenario.age)); },
        Space::physical, p);
}

}  // namespace bhankel::app
