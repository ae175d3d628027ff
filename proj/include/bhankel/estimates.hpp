#pragma once

#include "bhankel/evolution.hpp"
#include "bhankel/hankel.hpp"
#include "bhankel/model.hpp"
#include "bhankel/radial.hpp"

#include <iosfwd>
#include <string>
#include <vector>

namespace bhankel {

/// Space-time norms of one trajectory for one triplet.
struct NormReport {
    std::string probe;
    Triplet triplet;
    double value_Lm_Lp = 0.0;
    double value_Linf_Lq = 0.0;
    double value_Cm = 0.0;          ///< sup_t t^(1/m) ||u||_p
    double fitted_exponent = 0.0;   ///< log-log slope of ||u(t)||_p, NaN if not fittable
};

/// (int ||u(t)/r^k||_p^m dt)^(1/m), trapezoid on the trajectory times;
/// m = inf gives the max over samples.
double spacetime_norm(const Trajectory& traj, double m, double p, int k);

/// sup_t t^(1/m) ||u(t)/r^k||_p.
double cm_norm(const Trajectory& traj, double m, double p, int k);

NormReport norm_report(const Trajectory& traj, const Triplet& triplet, int k, std::string probe = {});

/// One CSV row per report.
void write_csv(std::ostream& os, const std::vector<NormReport>& reports);

/// Young exponent m of the smoothing estimate: 1 + 1/p = 1/m + 1/q.
double smoothing_young_exponent(double p, double q);

/// C(beta,mu,p,q) = [(2-beta)^(2mu+1) Gamma(mu+1)]^(1/p-1/q) m^(-gamma/m).
/// Requires 1 <= q <= p <= inf.
double smoothing_constant(double p, double q, const ModelParams& params);

/// ||S(t)psi/r^k||_p / (C(p,q) t^(gamma(1/p-1/q)) ||psi/r^k||_q) for each t.
std::vector<double> smoothing_ratios(const GridFunction& psi, const std::vector<double>& times, double p, double q,
                                     const TransformPlan& plan);

/// ||K_mu(., t)/r^k||_{L^m_deta} by quadrature on the grid.
double kernel_norm(double t, double m, const ModelParams& params, const RadialGrid& grid);

/// Least-squares slope of log(value) against log(t). Needs >= 5 samples,
/// all positive.
double decay_exponent_fit(const std::vector<double>& times, const std::vector<double>& values);

/// Both sides of the Duhamel-term estimates for a forcing trajectory on
/// I = [0, T], T its last time.
struct DuhamelAudit {
    NormReport lhs;               ///< norms of G f = int_0^t S(t - tau) f dtau
    double time_factor = 0.0;     ///< T^(1 - b gamma / q)
    bool interpolated = false;    ///< p > q(b+1)
    double theta = 0.0;           ///< (p - q(b+1)) / ((b+1)(p - q)) when interpolated
    double rhs_L = 0.0;           ///< forcing norm in the L^m framework
    double rhs_C = 0.0;           ///< forcing norm in the C_m framework
    double ratio_linf_L = 0.0;    ///< ||G f||_{L^inf L^q} / (time_factor rhs_L)
    double ratio_lm_L = 0.0;      ///< ||G f||_{L^m L^p} / (time_factor rhs_L)
    double ratio_linf_C = 0.0;    ///< ||G f||_{L^inf L^q} / (time_factor rhs_C)
    double ratio_cm_C = 0.0;      ///< ||G f||_{C_m L^p} / (time_factor rhs_C)

    [[nodiscard]] double max_ratio() const;
};

/// Throws std::invalid_argument unless the triplet is admissible with p > b+1.
DuhamelAudit duhamel_estimate_audit(const Trajectory& forcing, const Triplet& triplet, const NonlinearitySpec& nl,
                                    const ModelParams& params, const TransformPlan& plan);

}  // namespace bhankel
