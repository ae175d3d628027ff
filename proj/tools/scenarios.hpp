#pragma once

#include "bhankel/evolution.hpp"
#include "bhankel/hankel.hpp"

namespace bhankel::app {

/// A complete evolution setup: model, grids, data and solver settings.
struct EvolveScenario {
    ModelParams params;
    GridDesign design;
    double amplitude = 1.0;  ///< data = amplitude * r^k exp(-r^(2-beta) / ((2-beta)^2 age))
    double age = 1.0;
    EvolutionConfig config;
};

/// Focusing b = 1 run in n = 2 with L^16 monitoring; blows up near t = 0.11.
EvolveScenario blowup_scenario();

GridFunction initial_data(const EvolveScenario& scenario, const TransformPlan& plan);

}  // namespace bhankel::app
