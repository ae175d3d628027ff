#pragma once

namespace bhankel {

/// Evaluation knobs for the real-order Bessel routines.
struct SpecFunConfig {
    double series_switch = 12.0;  ///< power series for x <= switch
    int series_terms_max = 200;
    int asymptotic_terms = 10;    ///< terms kept in each of P and Q
    double abs_floor = 1e-300;
};

/// Gamma function for x > 0.
double gamma_fn(double x);

/// log Gamma(x) for x > 0, without touching the global signgam.
double log_gamma(double x);

/// Bessel function of the first kind J_mu(x), mu > -1/2, x >= 0.
///
/// Ascending series up to series_switch. Beyond it the Hankel expansion is
/// evaluated at the two orders nearest zero and carried up to mu by forward
/// recurrence, which is stable while mu < x; for mu >= x the series is used.
double bessel_j(double mu, double x, const SpecFunConfig& cfg = {});

/// J_mu(x) / (x/2)^mu, finite and positive-limit at x = 0 (equals
/// 1/Gamma(mu+1) there). Used to avoid under/overflow at tiny arguments.
double bessel_j_reduced(double mu, double x, const SpecFunConfig& cfg = {});

/// Oracle: J_mu from the Poisson integral
///   (x/2)^mu / (Gamma(mu+1/2) sqrt(pi)) * int_{-1}^{1} cos(x t) (1-t^2)^(mu-1/2) dt
/// by tanh-sinh quadrature. Independent of bessel_j.
double bessel_j_poisson(double mu, double x);

/// e^{-x} I_mu(x) for mu > -1/2, x >= 0. Never overflows.
double bessel_i_scaled(double mu, double x, const SpecFunConfig& cfg = {});

}  // namespace bhankel
