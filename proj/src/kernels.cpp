#include "bhankel/kernels.hpp"

#include "bhankel/errors.hpp"
#include "bhankel/parallel.hpp"
#include "bhankel/quadrature.hpp"
#include "bhankel/specfun.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace bhankel {

namespace {

constexpr double kDegenerateSlack = 1e-12;

void check_time(double t) {
    if (!(t > 0.0)) throw std::invalid_argument("kernel time must be > 0");
}

/// log of the x-, y-, z-independent factor of D.
double log_delsarte_constant(const ModelParams& p) {
    return std::log(p.stretch_scale()) + (p.mu - 1.0) * std::numbers::ln2 - log_gamma(p.mu + 0.5) -
           0.5 * std::log(std::numbers::pi);
}

/// Maps the Gauss rule onto [0, pi] for the cosine substitution.
const GaussRule& theta_rule(int nodes) {
    thread_local int cached_nodes = -1;
    thread_local GaussRule rule;
    if (cached_nodes != nodes) {
        GaussRule base = gauss_legendre(nodes);
        rule.nodes.clear();
        rule.weights.clear();
        map_rule(base, 0.0, std::numbers::pi, rule.nodes, rule.weights);
        cached_nodes = nodes;
    }
    return rule;
}

/// Stretched variable V = s0 v^c and its inverse.
double stretched(double v, const ModelParams& p) { return p.stretch_scale() * std::pow(v, p.stretch()); }
double unstretched(double V, const ModelParams& p) { return std::pow(V / p.stretch_scale(), 1.0 / p.stretch()); }

}  // namespace

double delsarte_mass(const ModelParams& params) {
    return std::exp(-log_gamma(params.mu + 1.0) - params.mu * std::log(2.0 - params.beta));
}

double kernel_K(double r, double t, const ModelParams& p) {
    check_time(t);
    if (r < 0.0) throw std::invalid_argument("kernel_K needs r >= 0");
    const double e = 2.0 - p.beta;
    if (r == 0.0) return p.k == 0 ? std::exp(-(p.mu + 1.0) * std::log(e * t)) : 0.0;
    const double log_k = -(p.mu + 1.0) * std::log(e * t) - std::pow(r, e) / (e * e * t) + p.k * std::log(r);
    return std::exp(log_k);
}

double semigroup_kernel(double rho, double r, double t, const ModelParams& p) {
    check_time(t);
    if (!(rho > 0.0 && r > 0.0)) throw std::invalid_argument("semigroup_kernel needs positive radii");
    const double e = 2.0 - p.beta;
    const double c = p.stretch();
    const double R = std::pow(r, c);
    const double P = std::pow(rho, c);
    const double x = 2.0 * R * P / (e * e * t);
    const double log_pref = -p.lambda * std::log(r) - (p.lambda + p.beta) * std::log(rho) - std::log(e * t) -
                            (R - P) * (R - P) / (e * e * t);
    return std::exp(log_pref) * bessel_i_scaled(p.mu, x);
}

DelsarteValue delsarte_eval(double x, double y, double z, const ModelParams& p) {
    if (!(x > 0.0 && y > 0.0 && z > 0.0)) throw std::invalid_argument("delsarte_D needs positive arguments");
    std::array<double, 3> s{stretched(x, p), stretched(y, p), stretched(z, p)};
    std::sort(s.begin(), s.end(), std::greater<>());
    const double a = s[0], b = s[1], c = s[2];
    const double excess = b + c - a;
    if (std::abs(excess) <= kDegenerateSlack * a) return {0.0, true};
    if (excess < 0.0) return {0.0, false};
    // Heron's formula with sides sorted a >= b >= c (Kahan's arrangement).
    const double prod = (a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c));
    const double log_area = 0.5 * std::log(prod) - std::log(4.0);
    const double log_d = log_delsarte_constant(p) - p.lambda * std::log(x) - (p.lambda + p.beta) * std::log(y * z) -
                         p.mu * (std::log(a) + std::log(b) + std::log(c)) + (2.0 * p.mu - 1.0) * log_area;
    return {std::exp(log_d), false};
}

double delsarte_D(double x, double y, double z, const ModelParams& params) {
    return delsarte_eval(x, y, z, params).value;
}

double delsarte_moment(DelsarteVariable which, double a, double b, const ModelParams& p, int nodes) {
    if (!(a > 0.0 && b > 0.0)) throw std::invalid_argument("delsarte_moment needs positive fixed arguments");
    const double A = stretched(a, p);
    const double B = stretched(b, p);
    const double lo = std::abs(A - B);
    const double hi = A + B;
    const double mid = 0.5 * (lo + hi);
    const double half = 0.5 * (hi - lo);
    const double w = which == DelsarteVariable::x ? p.k - p.beta : static_cast<double>(p.k);
    const GaussRule& rule = theta_rule(nodes);
    double sum = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        const double V = mid - half * std::cos(rule.nodes[i]);
        const double dV = half * std::sin(rule.nodes[i]) * rule.weights[i];
        if (!(V > 0.0)) continue;
        const double v = unstretched(V, p);
        const double dv = dV * v / (p.stretch() * V);
        double d = 0.0;
        switch (which) {
            case DelsarteVariable::x: d = delsarte_D(v, a, b, p); break;
            case DelsarteVariable::y: d = delsarte_D(a, v, b, p); break;
            case DelsarteVariable::z: d = delsarte_D(a, b, v, p); break;
        }
        sum += std::pow(v, w + p.n - 1.0) * d * dv;
    }
    return sum;
}

double delsarte_moment_exact(DelsarteVariable which, double a, double b, const ModelParams& p) {
    const double L = delsarte_mass(p);
    const double kb = p.k - p.beta;
    switch (which) {
        case DelsarteVariable::x: return L * std::pow(a * b, kb);
        case DelsarteVariable::y:
        case DelsarteVariable::z: return L * std::pow(a, p.k) * std::pow(b, kb);
    }
    return 0.0;
}

GridFunction sharp_convolve(const GridFunction& f, const GridFunction& g, const TransformPlan& plan) {
    require_compatible(f, g);
    const auto Ff = hankel_forward(f, plan);
    const auto Fg = hankel_forward(g, plan);
    auto prod = Ff;
    const double alpha = plan.params.alpha;
    for (std::size_t i = 0; i < prod.size(); ++i) {
        prod.values[i] = std::pow(prod.grid->nodes[i], alpha) * (Ff.values[i] * Fg.values[i]);
    }
    return hankel_inverse(prod, plan);
}

double sharp_convolve_direct(const std::function<double(double)>& f, const std::function<double(double)>& g,
                             double x, double y_max, const ModelParams& p, int nodes) {
    if (!(x > 0.0 && y_max > x)) throw std::invalid_argument("sharp_convolve_direct needs 0 < x < y_max");
    if (nodes < 16) throw std::invalid_argument("sharp_convolve_direct needs at least 16 nodes");
    const double X = stretched(x, p);
    const double Ymax = stretched(y_max, p);
    const double c = p.stretch();

    // Outer nodes in Y: a quarter below the kink at Y = X, the rest above.
    const int order = 8;
    const int panels = std::max(2, nodes / order);
    const int panels_lo = std::max(1, panels / 4);
    const int panels_hi = panels - panels_lo;
    const GaussRule base = gauss_legendre(order);
    std::vector<double> Ys, Yw;
    for (int i = 0; i < panels_lo; ++i) map_rule(base, X * i / panels_lo, X * (i + 1) / panels_lo, Ys, Yw);
    for (int i = 0; i < panels_hi; ++i) {
        map_rule(base, X + (Ymax - X) * i / panels_hi, X + (Ymax - X) * (i + 1) / panels_hi, Ys, Yw);
    }

    const GaussRule& rule = theta_rule(nodes);
    double total = 0.0;
    for (std::size_t iy = 0; iy < Ys.size(); ++iy) {
        const double Y = Ys[iy];
        const double y = unstretched(Y, p);
        const double dy = Yw[iy] * y / (c * Y);
        const double lo = std::abs(X - Y);
        const double hi = X + Y;
        const double mid = 0.5 * (lo + hi);
        const double half = 0.5 * (hi - lo);
        double inner = 0.0;
        for (std::size_t iz = 0; iz < rule.nodes.size(); ++iz) {
            const double Z = mid - half * std::cos(rule.nodes[iz]);
            if (!(Z > 0.0)) continue;
            const double dZ = half * std::sin(rule.nodes[iz]) * rule.weights[iz];
            const double z = unstretched(Z, p);
            const double dz = dZ * z / (c * Z);
            inner += f(z) * delsarte_D(x, y, z, p) * std::pow(z, p.n - 1.0) * dz;
        }
        total += g(y) * std::pow(y, p.n - 1.0) * inner * dy;
    }
    return total;
}

YoungResult young_audit(const GridFunction& f, const GridFunction& g, double a, double b, double c,
                        const TransformPlan& plan) {
    if (!(a >= 1.0 && b >= 1.0 && c >= 1.0)) throw std::invalid_argument("Young exponents must be >= 1");
    const double lhs_rel = 1.0 + 1.0 / a;
    const double rhs_rel = 1.0 / b + 1.0 / c;
    if (std::abs(lhs_rel - rhs_rel) > 1e-12 * lhs_rel) {
        throw std::invalid_argument("Young exponents violate 1 + 1/a = 1/b + 1/c");
    }
    const int k = plan.params.k;
    const auto conv = sharp_convolve(f, g, plan);
    YoungResult out;
    out.lhs = lp_norm_deta(conv, a, k);
    out.rhs = delsarte_mass(plan.params) * lp_norm_deta(f, b, k) * lp_norm_deta(g, c, k);
    return out;
}

double watson_quadrature(double nu, double a, double p, const RadialGrid& grid) {
    double sum = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double t = grid.nodes[i];
        sum += bessel_j(nu, a * t) * std::exp(-p * p * t * t) * std::pow(t, nu + 1.0) * grid.weights[i];
    }
    if (!std::isfinite(sum)) throw NumericalError("Watson quadrature produced a non-finite value");
    return sum;
}

double watson_closed_form(double nu, double a, double p) {
    return std::pow(a, nu) / std::pow(2.0 * p * p, nu + 1.0) * std::exp(-a * a / (4.0 * p * p));
}

}  // namespace bhankel
