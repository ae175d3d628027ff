#include "bhankel/evolution.hpp"

#include "bhankel/errors.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace bhankel {

namespace {

std::vector<double> symbol_exponents(const TransformPlan& plan) {
    const double e = 2.0 - plan.params.beta;
    std::vector<double> out(plan.spectral_grid->size());
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::pow(plan.spectral_grid->nodes[i], e);
    return out;
}

/// v <- exp(-rho^e t) v
void damp(std::vector<double>& v, const std::vector<double>& rho_e, double t) {
    if (t == 0.0) return;
    for (std::size_t i = 0; i < v.size(); ++i) v[i] *= std::exp(-rho_e[i] * t);
}

GridFunction apply_nonlinearity(const GridFunction& u, const NonlinearitySpec& nl) {
    GridFunction out = u;
    for (auto& v : out.values) v = nl.apply(v);
    return out;
}

double sup_norm(const GridFunction& u) { return lp_norm_deta(u, kInf, u.params.k); }

bool all_finite(const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

/// max over the last spectral panel of |F| relative to max |F|.
double spectral_tail(const GridFunction& F) {
    const std::size_t order = static_cast<std::size_t>(F.grid->order());
    double all = 0.0;
    double tail = 0.0;
    for (std::size_t i = 0; i < F.size(); ++i) {
        const double a = std::abs(F.values[i]);
        all = std::max(all, a);
        if (i + order >= F.size()) tail = std::max(tail, a);
    }
    return all > 0.0 ? tail / all : 0.0;
}

struct WindowOutcome {
    bool converged = false;
    int iterations = 0;
    std::vector<GridFunction> states;  ///< physical states at substeps 1..M
    GridFunction final_spectral;
};

/// Picard iteration on [t0, t0 + h] with M midpoint panels.
WindowOutcome solve_window(const GridFunction& u0, const GridFunction& u0_hat, double h, const EvolutionConfig& cfg,
                           const TransformPlan& plan, const std::vector<double>& rho_e) {
    const int M = cfg.substeps;
    const double dt = h / M;
    const int k = u0.params.k;
    WindowOutcome out;
    std::vector<GridFunction> u(M + 1, u0);
    std::vector<GridFunction> F_hat(M + 1);
    F_hat[0] = hankel_forward(apply_nonlinearity(u0, cfg.nonlinearity), plan);

    std::vector<std::vector<double>> linear(M + 1);
    for (int j = 1; j <= M; ++j) {
        linear[j] = u0_hat.values;
        damp(linear[j], rho_e, j * dt);
    }

    double prev_residual = std::numeric_limits<double>::infinity();
    int rising = 0;
    for (int it = 1; it <= cfg.picard_max_iter; ++it) {
        out.iterations = it;
        for (int j = 1; j <= M; ++j) F_hat[j] = hankel_forward(apply_nonlinearity(u[j], cfg.nonlinearity), plan);

        std::vector<double> G(u0_hat.size(), 0.0);
        double diff = 0.0;
        double scale = 0.0;
        GridFunction last_hat = u0_hat;
        for (int j = 1; j <= M; ++j) {
            damp(G, rho_e, dt);
            for (std::size_t i = 0; i < G.size(); ++i) {
                G[i] += dt * std::exp(-rho_e[i] * 0.5 * dt) * 0.5 * (F_hat[j - 1].values[i] + F_hat[j].values[i]);
            }
            GridFunction U_hat = u0_hat;
            for (std::size_t i = 0; i < G.size(); ++i) U_hat.values[i] = linear[j][i] + G[i];
            auto next = hankel_inverse(U_hat, plan);
            if (!all_finite(next.values)) return out;
            auto delta = next;
            for (std::size_t i = 0; i < delta.size(); ++i) delta.values[i] -= u[j].values[i];
            diff = std::max(diff, lp_norm_deta(delta, cfg.q, k));
            scale = std::max(scale, lp_norm_deta(next, cfg.q, k));
            u[j] = std::move(next);
            if (j == M) last_hat = std::move(U_hat);
        }
        const double residual = scale > 0.0 ? diff / scale : 0.0;
        if (!std::isfinite(residual)) return out;
        if (residual <= cfg.picard_tol) {
            out.converged = true;
            out.states.assign(u.begin() + 1, u.end());
            out.final_spectral = std::move(last_hat);
            return out;
        }
        rising = residual >= prev_residual ? rising + 1 : 0;
        if (rising >= 3 || (it > 2 && residual > 10.0)) return out;
        prev_residual = residual;
    }
    return out;
}

void require_triplet_norms(const Triplet& t) {
    if (!(t.p >= 1.0 && t.q >= 1.0 && t.m >= 1.0)) throw std::invalid_argument("triplet exponents must be >= 1");
}

/// Trapezoid of ||u(t)/r^k||_p^m over the trajectory times, root 1/m.
double lm_lp(const std::vector<double>& times, const std::vector<GridFunction>& states, double m, double p, int k) {
    if (std::isinf(m)) {
        double s = 0.0;
        for (const auto& u : states) s = std::max(s, lp_norm_deta(u, p, k));
        return s;
    }
    double integral = 0.0;
    double prev = std::pow(lp_norm_deta(states[0], p, k), m);
    for (std::size_t j = 1; j < states.size(); ++j) {
        const double cur = std::pow(lp_norm_deta(states[j], p, k), m);
        integral += 0.5 * (times[j] - times[j - 1]) * (prev + cur);
        prev = cur;
    }
    return std::pow(integral, 1.0 / m);
}

double linf_lq(const std::vector<GridFunction>& states, double q, int k) {
    double s = 0.0;
    for (const auto& u : states) s = std::max(s, lp_norm_deta(u, q, k));
    return s;
}

}  // namespace

std::string_view to_string(StopReason reason) {
    switch (reason) {
        case StopReason::completed: return "completed";
        case StopReason::blowup: return "blowup";
        case StopReason::unresolved: return "unresolved";
    }
    return "unknown";
}

void Trajectory::push(double t, GridFunction u) {
    if (!times.empty() && !(t > times.back())) throw std::invalid_argument("trajectory times must increase");
    const int k = u.params.k;
    norms_q.push_back(lp_norm_deta(u, q, k));
    if (triplet) {
        const double w = std::isinf(triplet->m) ? 1.0 : std::pow(t, 1.0 / triplet->m);
        norms_p_weighted.push_back(w * lp_norm_deta(u, triplet->p, k));
    }
    times.push_back(t);
    states.push_back(std::move(u));
}

GridFunction Trajectory::state_at(double t) const {
    if (times.empty()) throw std::invalid_argument("empty trajectory");
    const double slack = 1e-12 * std::max(1.0, std::abs(times.back()));
    if (t < times.front() - slack || t > times.back() + slack) {
        throw std::invalid_argument("time outside the trajectory range");
    }
    auto it = std::upper_bound(times.begin(), times.end(), t);
    if (it == times.begin()) return states.front();
    if (it == times.end()) return states.back();
    const std::size_t j = static_cast<std::size_t>(it - times.begin());
    const double w = (t - times[j - 1]) / (times[j] - times[j - 1]);
    GridFunction out = states[j - 1];
    for (std::size_t i = 0; i < out.size(); ++i) {
        out.values[i] = (1.0 - w) * states[j - 1].values[i] + w * states[j].values[i];
    }
    return out;
}

GridFunction semigroup_apply(const GridFunction& a, double t, const TransformPlan& plan) {
    if (t < 0.0) throw std::invalid_argument("semigroup time must be >= 0");
    if (t == 0.0) return a;
    auto F = hankel_forward(a, plan);
    damp(F.values, symbol_exponents(plan), t);
    return hankel_inverse(F, plan);
}

GridFunction duhamel(const Trajectory& forcing, double t, const TransformPlan& plan, int steps) {
    if (steps < 1) throw std::invalid_argument("duhamel needs steps >= 1");
    if (t < 0.0) throw std::invalid_argument("duhamel time must be >= 0");
    if (forcing.times.empty()) throw std::invalid_argument("duhamel needs a forcing trajectory");
    const double slack = 1e-12 * std::max(1.0, t);
    if (forcing.times.front() > slack || forcing.times.back() < t - slack) {
        throw std::invalid_argument("forcing does not cover [0, t]");
    }
    const auto rho_e = symbol_exponents(plan);
    GridFunction acc{plan.spectral_grid, std::vector<double>(plan.spectral_grid->size(), 0.0), Space::spectral,
                     plan.params};
    if (t == 0.0) return hankel_inverse(acc, plan);
    const double dt = t / steps;
    for (int s = 0; s < steps; ++s) {
        const double tau = (s + 0.5) * dt;
        auto F = hankel_forward(forcing.state_at(tau), plan);
        damp(F.values, rho_e, t - tau);
        for (std::size_t i = 0; i < acc.size(); ++i) acc.values[i] += dt * F.values[i];
    }
    return hankel_inverse(acc, plan);
}

std::vector<GridFunction> duhamel_trajectory(const Trajectory& forcing, const TransformPlan& plan) {
    if (forcing.times.empty()) throw std::invalid_argument("duhamel needs a forcing trajectory");
    const auto rho_e = symbol_exponents(plan);
    std::vector<GridFunction> out;
    out.reserve(forcing.size());
    GridFunction G{plan.spectral_grid, std::vector<double>(plan.spectral_grid->size(), 0.0), Space::spectral,
                   plan.params};
    out.push_back(hankel_inverse(G, plan));
    GridFunction prev = hankel_forward(forcing.states[0], plan);
    for (std::size_t j = 1; j < forcing.size(); ++j) {
        const double dt = forcing.times[j] - forcing.times[j - 1];
        GridFunction cur = hankel_forward(forcing.states[j], plan);
        damp(G.values, rho_e, dt);
        for (std::size_t i = 0; i < G.size(); ++i) {
            G.values[i] += dt * std::exp(-rho_e[i] * 0.5 * dt) * 0.5 * (prev.values[i] + cur.values[i]);
        }
        out.push_back(hankel_inverse(G, plan));
        prev = std::move(cur);
    }
    return out;
}

double existence_time(double u0_norm, const ContractionConstants& constants, const NonlinearitySpec& nl, double q,
                      double gamma) {
    const double b = nl.b;
    const double exponent = 1.0 - b * gamma / q;
    if (!(exponent > 0.0)) {
        throw std::invalid_argument("existence_time requires q > gamma b (critical or supercritical data space)");
    }
    if (!(constants.C1 > 0.0 && constants.C2 > 0.0)) throw std::invalid_argument("contraction constants must be > 0");
    if (u0_norm < 0.0) throw std::invalid_argument("norm must be >= 0");
    if (u0_norm == 0.0) return kInf;
    const double base = std::pow(2.0 * constants.C1, -b) / (2.0 * constants.C2 * std::pow(u0_norm, b));
    return std::pow(base, 1.0 / exponent);
}

EvolutionResult picard_solve(const GridFunction& u0, const EvolutionConfig& cfg, const TransformPlan& plan) {
    if (!(cfg.t_end > 0.0) || cfg.steps < 1 || !(cfg.picard_tol > 0.0) || cfg.picard_max_iter < 1 ||
        !(cfg.blowup_threshold > 0.0) || cfg.substeps < 1 || cfg.max_halvings < 0 || !(cfg.q >= 1.0)) {
        throw std::invalid_argument("invalid evolution configuration");
    }
    if (u0.space != Space::physical || u0.grid != plan.physical_grid) {
        throw std::invalid_argument("picard_solve expects physical data on the plan grid");
    }
    if (!all_finite(u0.values)) throw NumericalError("initial data is not finite");

    const auto rho_e = symbol_exponents(plan);
    EvolutionResult result;
    result.trajectory.q = cfg.q;
    result.trajectory.triplet = cfg.triplet;
    result.trajectory.push(0.0, u0);
    result.blowup.lower_bound_exponent = 1.0 / cfg.nonlinearity.b - plan.params.gamma / cfg.q;

    GridFunction u = u0;
    GridFunction u_hat = hankel_forward(u0, plan);
    const double tail_limit = std::max(cfg.spectral_tail_tol, 10.0 * spectral_tail(u_hat));
    const ContractionConstants unit{1.0, 1.0, 0.0};
    const double cap = cfg.t_end / cfg.steps;
    double t = 0.0;

    while (cfg.t_end - t > 1e-14 * cfg.t_end) {
        const double sup = sup_norm(u);
        double h = std::min(cap, cfg.t_end - t);
        if (sup > 0.0) h = std::min(h, existence_time(sup, unit, cfg.nonlinearity, kInf, plan.params.gamma));

        WindowOutcome w;
        for (int halving = 0;; ++halving) {
            w = solve_window(u, u_hat, h, cfg, plan, rho_e);
            if (w.converged) break;
            if (halving == cfg.max_halvings) {
                throw NumericalError("Picard iteration failed to converge after " + std::to_string(cfg.max_halvings) +
                                     " window halvings at t = " + std::to_string(t));
            }
            h *= 0.5;
            ++result.halvings;
        }
        ++result.windows;
        result.max_iterations = std::max(result.max_iterations, w.iterations);

        const double dt = h / cfg.substeps;
        bool blown = false;
        for (int j = 0; j < cfg.substeps; ++j) {
            const double tj = (j + 1 == cfg.substeps) ? t + h : t + (j + 1) * dt;
            result.trajectory.push(tj, w.states[j]);
            if (result.trajectory.norms_q.back() > cfg.blowup_threshold) {
                blown = true;
                break;
            }
        }
        t += h;
        u = w.states.back();
        u_hat = std::move(w.final_spectral);
        if (blown) {
            result.stop = StopReason::blowup;
            break;
        }
        if (spectral_tail(u_hat) > tail_limit) {
            result.stop = StopReason::unresolved;
            break;
        }
    }

    result.blowup.detected = result.stop == StopReason::blowup;
    if (result.stop != StopReason::completed) {
        try {
            auto fit = blowup_fit(result.trajectory.times, result.trajectory.norms_q, result.blowup.lower_bound_exponent);
            fit.detected = result.blowup.detected;
            result.blowup = fit;
        } catch (const std::invalid_argument& e) {
            result.blowup.note = e.what();
        }
    }
    return result;
}

double x_norm(const Trajectory& traj, const Triplet& triplet, int k) {
    if (traj.size() == 0) throw std::invalid_argument("empty trajectory");
    require_triplet_norms(triplet);
    return linf_lq(traj.states, triplet.q, k) + lm_lp(traj.times, traj.states, triplet.m, triplet.p, k);
}

std::vector<double> picard_contraction_ratios(const GridFunction& u0, double T, int steps, const Triplet& triplet,
                                              const NonlinearitySpec& nl, const TransformPlan& plan, int iterations) {
    if (!(T > 0.0) || steps < 1 || iterations < 2) throw std::invalid_argument("invalid contraction probe setup");
    const int k = u0.params.k;
    Trajectory linear;
    linear.q = triplet.q;
    for (int j = 0; j <= steps; ++j) linear.push(T * j / steps, semigroup_apply(u0, T * j / steps, plan));

    Trajectory current = linear;
    std::vector<double> diffs;
    for (int it = 0; it < iterations; ++it) {
        Trajectory forcing;
        forcing.q = triplet.q;
        for (std::size_t j = 0; j < current.size(); ++j) forcing.push(current.times[j], apply_nonlinearity(current.states[j], nl));
        const auto g = duhamel_trajectory(forcing, plan);
        Trajectory next;
        next.q = triplet.q;
        Trajectory delta;
        delta.q = triplet.q;
        for (std::size_t j = 0; j < current.size(); ++j) {
            GridFunction s = linear.states[j];
            for (std::size_t i = 0; i < s.size(); ++i) s.values[i] += g[j].values[i];
            GridFunction d = s;
            for (std::size_t i = 0; i < d.size(); ++i) d.values[i] -= current.states[j].values[i];
            next.push(current.times[j], std::move(s));
            delta.push(current.times[j], std::move(d));
        }
        const double dn = x_norm(delta, triplet, k);
        if (dn <= 1e-13 * x_norm(next, triplet, k)) break;
        diffs.push_back(dn);
        current = std::move(next);
    }
    std::vector<double> ratios;
    for (std::size_t j = 1; j < diffs.size(); ++j) ratios.push_back(diffs[j] / diffs[j - 1]);
    return ratios;
}

namespace {

// unit-norm existence time; the critical case has no time scale
double unit_existence_time(const ContractionConstants& c, const NonlinearitySpec& nl, double q, double gamma) {
    if (q <= nl.b * gamma * (1.0 + 1e-12)) return kInf;
    return existence_time(1.0, c, nl, q, gamma);
}

}  // namespace

ContractionConstants measure_contraction_constants(const Triplet& triplet, const ModelParams& params,
                                                   const TransformPlan& plan, const std::vector<GridFunction>& probes,
                                                   double horizon, int steps, const NonlinearitySpec& nl, int horizon_levels) {
    if (probes.empty()) throw std::invalid_argument("measure_contraction_constants needs probes");
    if (horizon_levels < 1) throw std::invalid_argument("horizon_levels must be >= 1");
    if (horizon_levels > 1) {
        // sup over horizon, horizon/4, ...
        ContractionConstants out;
        for (int level = 0; level < horizon_levels; ++level) {
            const auto c = measure_contraction_constants(triplet, params, plan, probes, horizon * std::pow(0.25, level), steps, nl, 1);
            if (c.C1 > out.C1) {
                out.C1 = c.C1;
                out.probe_C1 = c.probe_C1;
            }
            if (c.C2 > out.C2) {
                out.C2 = c.C2;
                out.probe_C2 = c.probe_C2;
            }
            out.c1_linf = std::max(out.c1_linf, c.c1_linf);
            out.c1_lm = std::max(out.c1_lm, c.c1_lm);
        }
        out.T_exist = unit_existence_time(out, nl, triplet.q, params.gamma);
        return out;
    }
    if (triplet.kind == TripletKind::neither) throw std::invalid_argument("contraction constants need a valid triplet");
    if (!(horizon > 0.0) || steps < 1) throw std::invalid_argument("invalid horizon or step count");
    require_triplet_norms(triplet);
    const int k = params.k;
    const double time_factor = std::pow(horizon, 1.0 - nl.b * params.gamma / triplet.q);
    ContractionConstants out;
    const std::size_t count = probes.size();
    std::vector<Trajectory> lin(count), duh(count);
    std::vector<double> lin_x(count), duh_x(count);
    auto to_trajectory = [&](const std::vector<double>& times, std::vector<GridFunction> states) {
        Trajectory tr;
        tr.q = triplet.q;
        for (std::size_t j = 0; j < states.size(); ++j) tr.push(times[j], std::move(states[j]));
        return tr;
    };
    for (std::size_t idx = 0; idx < count; ++idx) {
        const auto& psi = probes[idx];
        const double psi_norm = lp_norm_deta(psi, triplet.q, k);
        if (!(psi_norm > 0.0)) throw std::invalid_argument("zero probe");
        lin[idx].q = triplet.q;
        Trajectory forcing;
        forcing.q = triplet.q;
        for (int j = 0; j <= steps; ++j) {
            const double tj = horizon * j / steps;
            auto s = semigroup_apply(psi, tj, plan);
            forcing.push(tj, apply_nonlinearity(s, nl));
            lin[idx].push(tj, std::move(s));
        }
        const double linf = linf_lq(lin[idx].states, triplet.q, k) / psi_norm;
        const double lm = lm_lp(lin[idx].times, lin[idx].states, triplet.m, triplet.p, k) / psi_norm;
        if (linf + lm > out.C1) {
            out.C1 = linf + lm;
            out.probe_C1 = idx;
        }
        out.c1_linf = std::max(out.c1_linf, linf);
        out.c1_lm = std::max(out.c1_lm, lm);

        duh[idx] = to_trajectory(forcing.times, duhamel_trajectory(forcing, plan));
        lin_x[idx] = x_norm(lin[idx], triplet, k);
        duh_x[idx] = x_norm(duh[idx], triplet, k);
        const double c2 = duh_x[idx] / (time_factor * std::pow(lin_x[idx], nl.b + 1.0));
        if (c2 > out.C2) {
            out.C2 = c2;
            out.probe_C2 = idx;
        }
    }

    // difference form: ||G(|u|^b w)||_X <= C2 T^theta ||u||_X^b ||w||_X, with w
    // ranging over linear flows and Duhamel terms
    for (std::size_t i = 0; i < count; ++i) {
        for (std::size_t j = 0; j < count; ++j) {
            for (const auto* w : {&lin[j], &duh[j]}) {
                const double w_x = (w == &lin[j]) ? lin_x[j] : duh_x[j];
                if (!(w_x > 0.0)) continue;
                Trajectory forcing;
                forcing.q = triplet.q;
                for (std::size_t s = 0; s < w->size(); ++s) {
                    GridFunction f = w->states[s];
                    const auto& u = lin[i].states[s];
                    for (std::size_t r = 0; r < f.size(); ++r) f.values[r] *= std::pow(std::abs(u.values[r]), nl.b);
                    forcing.push(w->times[s], std::move(f));
                }
                const auto g = to_trajectory(forcing.times, duhamel_trajectory(forcing, plan));
                const double c2 = x_norm(g, triplet, k) / (time_factor * std::pow(lin_x[i], nl.b) * w_x);
                if (c2 > out.C2) {
                    out.C2 = c2;
                    out.probe_C2 = i;
                }
            }
        }
    }
    out.T_exist = unit_existence_time(out, nl, triplet.q, params.gamma);
    return out;
}

BlowupReport blowup_fit(const std::vector<double>& times, const std::vector<double>& values, double lower_bound_exponent) {
    if (times.size() != values.size()) throw std::invalid_argument("blowup_fit: size mismatch");
    if (times.size() < 8) throw std::invalid_argument("blowup_fit needs at least 8 samples");
    for (double v : values) {
        if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument("blowup_fit needs positive finite values");
    }
    const double last = values.back();
    if (!(last > 1e3 * values.front())) throw std::invalid_argument("insufficient growth for a blow-up fit");

    // last decade of growth, at least 8 samples
    std::size_t first = times.size() - 1;
    while (first > 0 && values[first - 1] >= 0.1 * last) --first;
    first = std::min(first, times.size() - 8);
    const std::size_t count = times.size() - first;
    const double t_last = times.back();
    const double span = t_last - times[first];

    struct Line {
        double intercept, slope, sse;
    };
    auto fit_line = [&](double gap) {
        // y = log C + e * x with x = -log(T* - t)
        const double T_star = t_last + gap;
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = first; i < times.size(); ++i) {
            const double x = -std::log(T_star - times[i]);
            const double y = std::log(values[i]);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        const double n = static_cast<double>(count);
        const double det = n * sxx - sx * sx;
        const double slope = det != 0.0 ? (n * sxy - sx * sy) / det : 0.0;
        const double intercept = (sy - slope * sx) / n;
        double sse = 0.0;
        for (std::size_t i = first; i < times.size(); ++i) {
            const double r = std::log(values[i]) - intercept + slope * std::log(T_star - times[i]);
            sse += r * r;
        }
        return Line{intercept, slope, sse};
    };

    const double lo = std::log(span * 1e-8);
    const double hi = std::log(span * 1e3);
    std::uintmax_t max_iter = 500;
    const auto best = boost::math::tools::brent_find_minima([&](double lg) { return fit_line(std::exp(lg)).sse; }, lo,
                                                            hi, std::numeric_limits<double>::digits / 2, max_iter);
    const double gap = std::exp(best.first);
    const Line line = fit_line(gap);
    BlowupReport rep;
    rep.detected = true;
    rep.fitted = true;
    rep.T_star_fit = t_last + gap;
    rep.exponent_fit = line.slope;
    rep.C_fit = std::exp(line.intercept);
    rep.lower_bound_exponent = lower_bound_exponent;
    rep.samples_used = count;
    return rep;
}

}  // namespace bhankel
