#pragma once

#include "bhankel/hankel.hpp"
#include "bhankel/model.hpp"
#include "bhankel/radial.hpp"

#include <optional>
#include <string>
#include <vector>

namespace bhankel {

struct EvolutionConfig {
    double t_end = 1.0;
    int steps = 10;                   ///< t_end / steps caps each window
    double picard_tol = 1e-10;        ///< relative fixed-point residual in L^q
    int picard_max_iter = 50;
    double blowup_threshold = 1e12;   ///< L^q norm treated as divergence
    NonlinearitySpec nonlinearity;
    double q = 2.0;                   ///< exponent of the reported norm
    std::optional<Triplet> triplet;   ///< enables the t^(1/m) ||u||_p column
    int substeps = 4;                 ///< Duhamel nodes per window
    int max_halvings = 12;
    /// Stop when |Hu| on the last spectral panel exceeds this fraction of
    /// max |Hu|: the grid no longer resolves the solution.
    double spectral_tail_tol = 1e-6;
};

/// Time-indexed states with their k-weighted norms.
struct Trajectory {
    std::vector<double> times;
    std::vector<GridFunction> states;
    std::vector<double> norms_q;
    std::vector<double> norms_p_weighted;  ///< t^(1/m) ||u||_p, empty without triplet
    double q = 2.0;
    std::optional<Triplet> triplet;

    [[nodiscard]] std::size_t size() const { return times.size(); }
    /// Appends a state and its norms; times must increase strictly.
    void push(double t, GridFunction u);
    /// Linear interpolation in time between stored states.
    [[nodiscard]] GridFunction state_at(double t) const;
};

struct ContractionConstants {
    double C1 = 0.0;      ///< max_probe ||S(.)psi||_X / ||psi||_q
    double C2 = 0.0;      ///< max of ||G(F(S psi))||_X / (T^(1-b gamma/q) ||S psi||_X^(b+1)) and the difference form
    double T_exist = 0.0; ///< existence time for unit-norm data, infinite at q = gamma b
    double c1_linf = 0.0; ///< L^inf(L^q) part of C1
    double c1_lm = 0.0;   ///< L^m(L^p) part of C1
    std::size_t probe_C1 = 0;
    std::size_t probe_C2 = 0;
};

struct BlowupReport {
    bool detected = false;
    double T_star_fit = 0.0;
    double exponent_fit = 0.0;
    double C_fit = 0.0;
    double lower_bound_exponent = 0.0;  ///< 1/b - gamma/q
    std::size_t samples_used = 0;
    bool fitted = false;
    std::string note;
};

enum class StopReason { completed, blowup, unresolved };

std::string_view to_string(StopReason reason);

struct EvolutionResult {
    Trajectory trajectory;
    BlowupReport blowup;
    StopReason stop = StopReason::completed;
    int windows = 0;
    int halvings = 0;
    int max_iterations = 0;  ///< largest Picard count over windows
};

/// S(t) a = H^-1(exp(-rho^(2-beta) t) Ha); t = 0 returns a unchanged.
GridFunction semigroup_apply(const GridFunction& a, double t, const TransformPlan& plan);

/// int_0^t S(t - tau) f(tau) dtau by the composite midpoint rule on `steps`
/// panels, summed in spectral space. The forcing is interpolated linearly
/// in time between its stored states.
GridFunction duhamel(const Trajectory& forcing, double t, const TransformPlan& plan, int steps);

/// G f at every time of `forcing`: midpoint rule between consecutive times
/// with the forcing averaged over each panel.
std::vector<GridFunction> duhamel_trajectory(const Trajectory& forcing, const TransformPlan& plan);

/// Window-wise Picard iteration of u = S(t)u0 + G(F(u)).
///
/// Throws NumericalError when a window fails to converge after
/// cfg.max_halvings halvings, or on a non-finite state.
EvolutionResult picard_solve(const GridFunction& u0, const EvolutionConfig& cfg, const TransformPlan& plan);

/// ||.||_X on a trajectory: sup_t ||u/r^k||_q + (int ||u/r^k||_p^m dt)^(1/m).
double x_norm(const Trajectory& traj, const Triplet& triplet, int k);

/// Runs the Picard map on one window [0, T] with `steps` time panels and
/// returns ||u^(j+1) - u^j||_X / ||u^j - u^(j-1)||_X for each iteration.
std::vector<double> picard_contraction_ratios(const GridFunction& u0, double T, int steps, const Triplet& triplet,
                                              const NonlinearitySpec& nl, const TransformPlan& plan, int iterations);

/// Empirical constants of the homogeneous and Duhamel estimates on [0, horizon].
ContractionConstants measure_contraction_constants(const Triplet& triplet, const ModelParams& params,
                                                   const TransformPlan& plan, const std::vector<GridFunction>& probes,
                                                   double horizon, int steps, const NonlinearitySpec& nl,
                                                   int horizon_levels = 1);

/// T = [(2C1)^-b / (2 C2 ||u0||^b)]^(1/(1 - b gamma/q)). Infinite for zero
/// data. Throws std::invalid_argument unless q > gamma b.
double existence_time(double u0_norm, const ContractionConstants& constants, const NonlinearitySpec& nl, double q,
                      double gamma);

/// Fits value = C (T* - t)^-e to the last decade of growth.
///
/// Needs at least 8 samples and growth beyond 1e3 times the first value;
/// otherwise throws std::invalid_argument. lower_bound_exponent is copied
/// into the report.
BlowupReport blowup_fit(const std::vector<double>& times, const std::vector<double>& values,
                        double lower_bound_exponent = 0.0);

}  // namespace bhankel
