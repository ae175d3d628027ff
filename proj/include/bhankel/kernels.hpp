#pragma once

#include "bhankel/hankel.hpp"
#include "bhankel/model.hpp"
#include "bhankel/radial.hpp"

#include <functional>

namespace bhankel {

/// Gamma(mu+1)^-1 (2-beta)^-mu: the mass of the Delsarte kernel in each
/// of its variables and the constant of the Young inequality.
double delsarte_mass(const ModelParams& params);

/// K_mu(r,t) = ((2-beta)t)^(-mu-1) exp(-r^(2-beta)/((2-beta)^2 t)) r^k,
/// the inverse transform of rho^(k-beta) exp(-rho^(2-beta) t).
double kernel_K(double r, double t, const ModelParams& params);

/// Two-point kernel of S(t): S(t)a(r) = int K~(rho, r, t) a(rho) rho^(n-1) drho.
///
///   K~ = r^-lambda rho^(-lambda-beta) / ((2-beta)t)
///        * exp(-(R-P)^2/((2-beta)^2 t)) * [e^-x I_mu(x)],
///   R = r^c, P = rho^c, x = 2(r rho)^c/((2-beta)^2 t).
///
/// The Gaussian factors of the unscaled form are combined with e^x before
/// evaluation, so nothing overflows.
double semigroup_kernel(double rho, double r, double t, const ModelParams& params);

/// Evaluation context for kernels at a fixed time.
struct KernelEval {
    ModelParams params;
    double t = 1.0;

    [[nodiscard]] double K(double r) const { return kernel_K(r, t, params); }
    [[nodiscard]] double K_tilde(double rho, double r) const { return semigroup_kernel(rho, r, t, params); }
};

struct DelsarteValue {
    double value = 0.0;
    /// Stretched sides within 1e-12 (relative) of a degenerate triangle.
    bool degenerate = false;
};

/// Delsarte kernel D(x,y,z) in closed form: zero unless the stretched
/// sides s0 x^c, s0 y^c, s0 z^c form a triangle, otherwise
///   s0 x^-lambda (yz)^(-lambda-beta) (XYZ)^-mu 2^(mu-1) Area^(2mu-1)
///   / (Gamma(mu+1/2) sqrt(pi)).
DelsarteValue delsarte_eval(double x, double y, double z, const ModelParams& params);
double delsarte_D(double x, double y, double z, const ModelParams& params);

enum class DelsarteVariable { x, y, z };

/// Integrates v^w D(x,y,z) v^(n-1) over the variable `which` with the
/// remaining two fixed (a, b in x, y, z order), where w = k - beta for x and
/// w = k otherwise. The support is an interval in the stretched variable; a
/// cosine substitution removes the area singularities at its ends.
double delsarte_moment(DelsarteVariable which, double a, double b, const ModelParams& params, int nodes = 96);

/// Right-hand side of the moment identity matching delsarte_moment.
double delsarte_moment_exact(DelsarteVariable which, double a, double b, const ModelParams& params);

/// f # g = H^-1(eta^(beta-k) Hf Hg). Commutative bit for bit.
GridFunction sharp_convolve(const GridFunction& f, const GridFunction& g, const TransformPlan& plan);

/// Oracle: f # g(x) = int g(y) y^(n-1) int f(z) D(x,y,z) z^(n-1) dz dy by
/// direct quadrature on `nodes` points per integral. y is split at x, where
/// the translate has a kink, and truncated at y_max.
double sharp_convolve_direct(const std::function<double(double)>& f, const std::function<double(double)>& g,
                             double x, double y_max, const ModelParams& params, int nodes = 64);

struct YoungResult {
    double lhs = 0.0;  ///< ||f # g / r^k||_a
    double rhs = 0.0;  ///< Gamma(mu+1)^-1 (2-beta)^-mu ||f/r^k||_b ||g/r^k||_c
};

/// Both sides of the Young inequality for #. Requires 1 + 1/a = 1/b + 1/c
/// to 1e-12 and all exponents >= 1.
YoungResult young_audit(const GridFunction& f, const GridFunction& g, double a, double b, double c,
                        const TransformPlan& plan);

/// int_0^inf J_nu(a t) exp(-p^2 t^2) t^(nu+1) dt by panel quadrature on `grid`.
double watson_quadrature(double nu, double a, double p, const RadialGrid& grid);
/// a^nu / (2p^2)^(nu+1) exp(-a^2/(4p^2)).
double watson_closed_form(double nu, double a, double p);

}  // namespace bhankel
