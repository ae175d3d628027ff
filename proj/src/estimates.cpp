#include "bhankel/estimates.hpp"

#include "bhankel/kernels.hpp"
#include "bhankel/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace bhankel {

namespace {

void require_nonempty(const Trajectory& traj) {
    if (traj.size() == 0) throw std::invalid_argument("empty trajectory");
}

/// |f/r^k|^(1/(b+1)) r^k, so that lp_norm_deta sees |f/r^k|^(1/(b+1)).
GridFunction root_power(const GridFunction& f, double b) {
    GridFunction out = f;
    const int k = f.params.k;
    const auto& r = f.grid->nodes;
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double v = std::pow(std::abs(divide_by_power(f.values[i], r[i], k)), 1.0 / (b + 1.0));
        out.values[i] = v * std::pow(r[i], k);
    }
    return out;
}

Trajectory map_states(const Trajectory& traj, GridFunction (*fn)(const GridFunction&, double), double arg) {
    Trajectory out;
    out.q = traj.q;
    for (std::size_t j = 0; j < traj.size(); ++j) out.push(traj.times[j], fn(traj.states[j], arg));
    return out;
}

/// Trapezoid L^m-in-time of ||u/r^k||_p for any m > 0 (a quasi-norm below 1).
double lm_lp(const Trajectory& traj, double m, double p, int k) {
    if (std::isinf(m)) {
        double s = 0.0;
        for (const auto& u : traj.states) s = std::max(s, lp_norm_deta(u, p, k));
        return s;
    }
    double integral = 0.0;
    double prev = std::pow(lp_norm_deta(traj.states[0], p, k), m);
    for (std::size_t j = 1; j < traj.size(); ++j) {
        const double cur = std::pow(lp_norm_deta(traj.states[j], p, k), m);
        integral += 0.5 * (traj.times[j] - traj.times[j - 1]) * (prev + cur);
        prev = cur;
    }
    return std::pow(integral, 1.0 / m);
}

double safe_ratio(double num, double den) {
    if (num == 0.0) return 0.0;
    return num / den;
}

}  // namespace

double spacetime_norm(const Trajectory& traj, double m, double p, int k) {
    require_nonempty(traj);
    if (!(m >= 1.0)) throw std::invalid_argument("spacetime_norm needs m >= 1");
    return lm_lp(traj, m, p, k);
}

double cm_norm(const Trajectory& traj, double m, double p, int k) {
    require_nonempty(traj);
    if (!(m > 0.0)) throw std::invalid_argument("cm_norm needs m > 0");
    double s = 0.0;
    for (std::size_t j = 0; j < traj.size(); ++j) {
        const double w = std::isinf(m) ? 1.0 : std::pow(traj.times[j], 1.0 / m);
        if (w == 0.0) continue;
        s = std::max(s, w * lp_norm_deta(traj.states[j], p, k));
    }
    return s;
}

NormReport norm_report(const Trajectory& traj, const Triplet& triplet, int k, std::string probe) {
    NormReport r;
    r.probe = std::move(probe);
    r.triplet = triplet;
    r.value_Lm_Lp = spacetime_norm(traj, triplet.m, triplet.p, k);
    r.value_Linf_Lq = spacetime_norm(traj, kInf, triplet.q, k);
    r.value_Cm = cm_norm(traj, triplet.m, triplet.p, k);
    std::vector<double> t, v;
    for (std::size_t j = 0; j < traj.size(); ++j) {
        const double n = lp_norm_deta(traj.states[j], triplet.p, k);
        if (traj.times[j] > 0.0 && n > 0.0) {
            t.push_back(traj.times[j]);
            v.push_back(n);
        }
    }
    r.fitted_exponent = t.size() >= 5 ? decay_exponent_fit(t, v) : std::numeric_limits<double>::quiet_NaN();
    return r;
}

void write_csv(std::ostream& os, const std::vector<NormReport>& reports) {
    os << "probe,m,p,q,value_Lm_Lp,value_Linf_Lq,value_Cm,fitted_exponent\n";
    char buf[512];
    for (const auto& r : reports) {
        std::snprintf(buf, sizeof buf, "%s,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.probe.c_str(), r.triplet.m,
                      r.triplet.p, r.triplet.q, r.value_Lm_Lp, r.value_Linf_Lq, r.value_Cm, r.fitted_exponent);
        os << buf;
    }
}

double smoothing_young_exponent(double p, double q) {
    if (!(q >= 1.0) || !(p >= q)) throw std::invalid_argument("smoothing estimate needs 1 <= q <= p <= inf");
    const double inv_m = 1.0 + 1.0 / p - 1.0 / q;
    return inv_m == 0.0 ? kInf : 1.0 / inv_m;
}

double smoothing_constant(double p, double q, const ModelParams& params) {
    const double m = smoothing_young_exponent(p, q);
    const double e = 2.0 - params.beta;
    const double s = 1.0 / p - 1.0 / q;
    if (s == 0.0) return 1.0;
    const double log_base = (2.0 * params.mu + 1.0) * std::log(e) + log_gamma(params.mu + 1.0);
    const double m_factor = std::isinf(m) ? 0.0 : -params.gamma / m * std::log(m);
    return std::exp(s * log_base + m_factor);
}

std::vector<double> smoothing_ratios(const GridFunction& psi, const std::vector<double>& times, double p, double q,
                                     const TransformPlan& plan) {
    const int k = plan.params.k;
    const double C = smoothing_constant(p, q, plan.params);
    const double psi_norm = lp_norm_deta(psi, q, k);
    if (!(psi_norm > 0.0)) throw std::invalid_argument("smoothing_ratios needs nonzero data");
    const double rate = plan.params.gamma * (1.0 / p - 1.0 / q);
    std::vector<double> out;
    out.reserve(times.size());
    for (double t : times) {
        if (!(t > 0.0)) throw std::invalid_argument("smoothing_ratios needs t > 0");
        const auto u = semigroup_apply(psi, t, plan);
        out.push_back(lp_norm_deta(u, p, k) / (C * std::pow(t, rate) * psi_norm));
    }
    return out;
}

double kernel_norm(double t, double m, const ModelParams& params, const RadialGrid& grid) {
    if (!(t > 0.0) || !(m >= 1.0)) throw std::invalid_argument("kernel_norm needs t > 0 and m >= 1");
    const double w_exp = params.measure_exponent(params.k);
    if (std::isinf(m)) {
        double s = 0.0;
        for (double r : grid.nodes) s = std::max(s, divide_by_power(kernel_K(r, t, params), r, params.k));
        return s;
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const double r = grid.nodes[i];
        const double v = divide_by_power(kernel_K(r, t, params), r, params.k);
        sum += grid.weights[i] * std::pow(v, m) * std::pow(r, w_exp);
    }
    return std::pow(sum, 1.0 / m);
}

double decay_exponent_fit(const std::vector<double>& times, const std::vector<double>& values) {
    if (times.size() != values.size()) throw std::invalid_argument("decay_exponent_fit: size mismatch");
    if (times.size() < 5) throw std::invalid_argument("decay_exponent_fit needs at least 5 samples");
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!(times[i] > 0.0) || !(values[i] > 0.0)) throw std::invalid_argument("decay_exponent_fit needs positive samples");
        const double x = std::log(times[i]);
        const double y = std::log(values[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double n = static_cast<double>(times.size());
    const double den = n * sxx - sx * sx;
    if (!(den > 0.0)) throw std::invalid_argument("decay_exponent_fit needs distinct times");
    return (n * sxy - sx * sy) / den;
}

double DuhamelAudit::max_ratio() const {
    return std::max({ratio_linf_L, ratio_lm_L, ratio_linf_C, ratio_cm_C});
}

DuhamelAudit duhamel_estimate_audit(const Trajectory& forcing, const Triplet& triplet, const NonlinearitySpec& nl,
                                    const ModelParams& params, const TransformPlan& plan) {
    require_nonempty(forcing);
    if (triplet.kind != TripletKind::admissible) throw std::invalid_argument("Duhamel audit needs an admissible triplet");
    const double b = nl.b;
    if (!(triplet.p > b + 1.0)) throw std::invalid_argument("Duhamel audit needs p > b + 1");
    const int k = params.k;
    const double m = triplet.m, p = triplet.p, q = triplet.q;

    Trajectory g;
    g.q = q;
    auto states = duhamel_trajectory(forcing, plan);
    for (std::size_t j = 0; j < states.size(); ++j) g.push(forcing.times[j], std::move(states[j]));

    DuhamelAudit out;
    out.lhs = norm_report(g, triplet, k, "duhamel");
    out.time_factor = std::pow(forcing.times.back(), 1.0 - b * params.gamma / q);
    out.interpolated = p > q * (b + 1.0);
    if (out.interpolated) {
        out.theta = (p - q * (b + 1.0)) / ((b + 1.0) * (p - q));
        const auto root = map_states(forcing, root_power, b);
        const double a = lm_lp(root, kInf, q, k);
        const double e1 = out.theta * (b + 1.0);
        const double e2 = (1.0 - out.theta) * (b + 1.0);
        out.rhs_L = std::pow(a, e1) * std::pow(lm_lp(root, m, p, k), e2);
        out.rhs_C = std::pow(a, e1) * std::pow(cm_norm(root, m, p, k), e2);
    } else {
        out.rhs_L = lm_lp(forcing, m / (b + 1.0), p / (b + 1.0), k);
        out.rhs_C = cm_norm(forcing, m / (b + 1.0), p / (b + 1.0), k);
    }
    out.ratio_linf_L = safe_ratio(out.lhs.value_Linf_Lq, out.time_factor * out.rhs_L);
    out.ratio_lm_L = safe_ratio(out.lhs.value_Lm_Lp, out.time_factor * out.rhs_L);
    out.ratio_linf_C = safe_ratio(out.lhs.value_Linf_Lq, out.time_factor * out.rhs_C);
    out.ratio_cm_C = safe_ratio(out.lhs.value_Cm, out.time_factor * out.rhs_C);
    return out;
}

}  // namespace bhankel
