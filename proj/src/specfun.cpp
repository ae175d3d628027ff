#include "bhankel/specfun.hpp"

#include <boost/math/quadrature/tanh_sinh.hpp>

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace bhankel {

namespace {

constexpr double kPi = std::numbers::pi;

void check_order(double mu) {
    if (!(mu > -0.5)) throw std::domain_error("Bessel order must exceed -1/2");
}

void check_arg(double x) {
    if (!(x >= 0.0)) throw std::domain_error("Bessel argument must be >= 0");
}

/// sum_k (-1)^k (x/2)^(2k) / (k! Gamma(mu+k+1)); multiply by (x/2)^mu for J.
double reduced_series(double mu, double x, int max_terms) {
    const double q = 0.25 * x * x;
    double term = std::exp(-log_gamma(mu + 1.0));
    double sum = term;
    const int cap = std::max(max_terms, static_cast<int>(2.0 * x) + 40);
    for (int k = 1; k < cap; ++k) {
        term *= -q / (k * (mu + k));
        sum += term;
        if (std::abs(term) <= 1e-17 * std::abs(sum) && k > x) break;
    }
    return sum;
}

double series_j(double mu, double x, const SpecFunConfig& cfg) {
    if (x == 0.0) return mu == 0.0 ? 1.0 : (mu > 0.0 ? 0.0 : std::numeric_limits<double>::infinity());
    const double s = reduced_series(mu, x, cfg.series_terms_max);
    const double log_pref = mu * std::log(0.5 * x);
    if (log_pref < std::log(cfg.abs_floor)) return 0.0;
    return s * std::exp(log_pref);
}

/// Hankel large-argument expansion of J_nu(x).
double hankel_asymptotic_j(double nu, double x, int terms_each) {
    const double four_nu2 = 4.0 * nu * nu;
    double p = 1.0;
    double q = 0.0;
    double t = 1.0;
    double prev = 1.0;
    const int max_k = 2 * terms_each;
    for (int k = 1; k <= max_k; ++k) {
        const double odd = 2.0 * k - 1.0;
        t *= (four_nu2 - odd * odd) / (8.0 * k * x);
        if (std::abs(t) > std::abs(prev) && k > 2) break;  // expansion started diverging
        // k = 1,2,3,4,... contribute to Q, -P, -Q, P, ...
        switch (k % 4) {
            case 1: q += t; break;
            case 2: p -= t; break;
            case 3: q -= t; break;
            case 0: p += t; break;
        }
        if (std::abs(t) < 1e-17) break;
        prev = t;
    }
    const double omega = x - (0.5 * nu + 0.25) * kPi;
    return std::sqrt(2.0 / (kPi * x)) * (p * std::cos(omega) - q * std::sin(omega));
}

}  // namespace

double gamma_fn(double x) {
    if (!(x > 0.0)) throw std::domain_error("gamma_fn requires x > 0");
    return std::tgamma(x);
}

double log_gamma(double x) {
    if (!(x > 0.0)) throw std::domain_error("log_gamma requires x > 0");
    if (x < 100.0) return std::log(std::tgamma(x));
    // Stirling series.
    const double inv = 1.0 / x;
    const double inv2 = inv * inv;
    const double corr = inv * (1.0 / 12.0 - inv2 * (1.0 / 360.0 - inv2 * (1.0 / 1260.0 - inv2 / 1680.0)));
    return (x - 0.5) * std::log(x) - x + 0.5 * std::log(2.0 * kPi) + corr;
}

double bessel_j(double mu, double x, const SpecFunConfig& cfg) {
    check_order(mu);
    check_arg(x);
    if (x <= cfg.series_switch || mu >= x) return series_j(mu, x, cfg);

    const double steps = std::round(mu);
    const double nu0 = mu - steps;  // in [-1/2, 1/2]
    double j_lo = hankel_asymptotic_j(nu0, x, cfg.asymptotic_terms);
    if (steps == 0.0) return j_lo;
    double j_hi = hankel_asymptotic_j(nu0 + 1.0, x, cfg.asymptotic_terms);
    double nu = nu0 + 1.0;
    for (int s = 1; s < static_cast<int>(steps); ++s) {
        const double next = 2.0 * nu / x * j_hi - j_lo;
        j_lo = j_hi;
        j_hi = next;
        nu += 1.0;
    }
    return j_hi;
}

double bessel_j_reduced(double mu, double x, const SpecFunConfig& cfg) {
    check_order(mu);
    check_arg(x);
    if (x <= 1.0) return reduced_series(mu, x, cfg.series_terms_max);
    return bessel_j(mu, x, cfg) / std::pow(0.5 * x, mu);
}

double bessel_j_poisson(double mu, double x) {
    check_order(mu);
    check_arg(x);
    if (x == 0.0) {
        if (mu == 0.0) return 1.0;
        return mu > 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    }
    const long double a = mu - 0.5;
    // Symmetric integrand: integrate over [0, 1] and double. tc is the
    // distance to the nearest endpoint, which keeps (1 - t^2) accurate.
    // The integral cancels heavily for large mu and x, hence long double.
    boost::math::quadrature::tanh_sinh<long double> integrator(15);
    const long double xl = x;
    auto f = [&](long double t, long double tc) {
        const long double one_minus_t = (t > 0.5L) ? tc : 1.0L - t;
        const long double w = std::pow(one_minus_t * (1.0L + t), a);
        return std::cos(xl * t) * w;
    };
    const double integral = static_cast<double>(2.0L * integrator.integrate(f, 0.0L, 1.0L));
    const double pref = std::exp(mu * std::log(0.5 * x) - log_gamma(mu + 0.5) - 0.5 * std::log(kPi));
    return pref * integral;
}

double bessel_i_scaled(double mu, double x, const SpecFunConfig& cfg) {
    check_order(mu);
    check_arg(x);
    (void)cfg;
    if (x == 0.0) return mu == 0.0 ? 1.0 : (mu > 0.0 ? 0.0 : std::numeric_limits<double>::infinity());

    const double x_asym = std::max(40.0, 1.5 * mu * mu);
    if (x >= x_asym) {
        const double four_nu2 = 4.0 * mu * mu;
        double sum = 1.0;
        double t = 1.0;
        double prev = 1.0;
        for (int k = 1; k <= 200; ++k) {
            const double odd = 2.0 * k - 1.0;
            t *= -(four_nu2 - odd * odd) / (8.0 * k * x);
            if (std::abs(t) > std::abs(prev) && k > 2) break;
            sum += t;
            if (std::abs(t) < 1e-17 * std::abs(sum)) break;
            prev = t;
        }
        return sum / std::sqrt(2.0 * kPi * x);
    }

    // Positive series accumulated in log space: no cancellation, no overflow.
    const double log_q = 2.0 * std::log(0.5 * x);
    double log_term = mu * std::log(0.5 * x) - log_gamma(mu + 1.0) - x;
    double sum = std::exp(log_term);
    const int cap = static_cast<int>(4.0 * x) + 400;
    for (int k = 1; k < cap; ++k) {
        log_term += log_q - std::log(k * (mu + k));
        const double term = std::exp(log_term);
        sum += term;
        if (term <= 1e-17 * sum && k > 0.5 * x) break;
    }
    return sum;
}

}  // namespace bhankel
