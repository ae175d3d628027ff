#include "doctest.h"

#include "bhankel/errors.hpp"
#include "bhankel/evolution.hpp"
#include "bhankel/kernels.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

using namespace bhankel;

namespace {

double natural_gaussian(double r, const ModelParams& p, double s, double c = 0.0) {
    const double e = 2.0 - p.beta;
    const double re = std::pow(r, e);
    return std::pow(r, p.k) * std::exp(-re / (e * e * s)) * (1.0 + c * re);
}

PlanPtr plan_for(const ModelParams& p, double age_min, double age_max, int panels = 64, double decay = 46.0) {
    GridDesign d;
    d.decay = decay;
    d.age_min = age_min;
    d.age_max = age_max;
    d.panels = panels;
    return plan_transform(p, d);
}

double max_abs_diff(const GridFunction& a, const GridFunction& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a.values[i] - b.values[i]));
    return m;
}

double max_abs(const GridFunction& a) {
    double m = 0.0;
    for (double v : a.values) m = std::max(m, std::abs(v));
    return m;
}

}  // namespace

TEST_CASE("semigroup_apply") {
    const auto p = derive_params(3, 0.0, 0);
    const auto plan = plan_for(p, 1.0, 3.0);
    auto a = sample(plan->physical_grid, [](double r) { return std::exp(-r * r / 4.0); }, Space::physical, p);
    CHECK(semigroup_apply(a, 0.0, *plan).values == a.values);
    CHECK_THROWS_AS(semigroup_apply(a, -1.0, *plan), std::invalid_argument);

    // radial heat solution (s/(s+t))^{3/2} e^{-r^2/(4(s+t))}
    auto u = semigroup_apply(a, 1.0, *plan);
    auto exact = sample(plan->physical_grid, [](double r) { return std::pow(0.5, 1.5) * std::exp(-r * r / 8.0); },
                        Space::physical, p);
    CHECK(max_abs_diff(u, exact) < 1e-6 * max_abs(exact));

    auto ts = semigroup_apply(semigroup_apply(a, 0.7, *plan), 0.5, *plan);
    auto direct = semigroup_apply(a, 1.2, *plan);
    CHECK(max_abs_diff(ts, direct) < 1e-8 * max_abs(direct));
}

TEST_CASE("mass conservation and positivity of the linear flow") {
    for (auto [n, beta] : {std::pair{3, 1.0}, std::pair{2, 0.5}, std::pair{3, 0.0}}) {
        const auto p = derive_params(n, beta, 0);
        const auto plan = plan_for(p, 1.0, 6.0, 96);
        auto a = sample(plan->physical_grid, [&](double r) { return natural_gaussian(r, p, 1.0, 0.4); }, Space::physical, p);
        const double m0 = integrate_weighted(a, n - 1.0 - beta);
        for (double t : {0.5, 1.0, 2.5, 5.0}) {
            auto u = semigroup_apply(a, t, *plan);
            CHECK(integrate_weighted(u, n - 1.0 - beta) == doctest::Approx(m0).epsilon(1e-6));
            for (double v : u.values) CHECK(v >= -1e-12);
        }
    }
}

TEST_CASE("Trajectory bookkeeping") {
    const auto p = derive_params(3, 1.0, 0);
    auto g = build_grid(0.01, 5.0, 4, 4);
    Trajectory tr;
    tr.q = 2.0;
    tr.triplet = Triplet{3.0, 3.0, 2.0, TripletKind::admissible};
    tr.push(0.0, sample(g, [](double) { return 1.0; }, Space::physical, p));
    tr.push(1.0, sample(g, [](double) { return 3.0; }, Space::physical, p));
    CHECK_THROWS_AS(tr.push(1.0, tr.states[0]), std::invalid_argument);
    CHECK(tr.norms_p_weighted.front() == 0.0);
    CHECK(tr.norms_q.size() == 2);
    CHECK(tr.state_at(0.25).values[0] == doctest::Approx(1.5));
    CHECK_THROWS_AS((void)tr.state_at(1.5), std::invalid_argument);
}

TEST_CASE("duhamel") {
    const auto p = derive_params(3, 1.0, 0);
    const auto plan = plan_for(p, 0.5, 2.0);
    auto f = sample(plan->physical_grid, [&](double r) { return natural_gaussian(r, p, 1.0); }, Space::physical, p);
    const double t = 1.0;

    Trajectory zero;
    zero.push(0.0, zeros_like(f));
    zero.push(t, zeros_like(f));
    for (double v : duhamel(zero, t, *plan, 8).values) CHECK(v == 0.0);

    // time-constant forcing: (1 - e^{-rho^e t}) / rho^e Hf
    Trajectory constant;
    constant.push(0.0, f);
    constant.push(t, f);
    const double e = 2.0 - p.beta;
    auto Hf = hankel_forward(f, *plan);
    auto exact = spectral_multiply(Hf, [&](double rho) {
        const double l = std::pow(rho, e);
        return l > 1e-12 ? (1.0 - std::exp(-l * t)) / l : t;
    });
    double prev_err = 0.0;
    for (int steps : {8, 16, 32}) {
        auto G = hankel_forward(duhamel(constant, t, *plan, steps), *plan);
        double num = 0.0, den = 0.0;
        for (std::size_t i = 0; i < G.size(); ++i) {
            num += std::pow(G.values[i] - exact.values[i], 2) * plan->spectral_grid->weights[i];
            den += std::pow(exact.values[i], 2) * plan->spectral_grid->weights[i];
        }
        const double err = std::sqrt(num / den);
        CHECK(err < 0.5 / (steps * steps));
        if (prev_err > 0.0) CHECK(err < 0.3 * prev_err);
        prev_err = err;
    }

    // forcing S(tau) g: every midpoint contributes S(t) g
    const int steps = 4;
    Trajectory sg;
    sg.push(0.0, f);
    for (int s = 0; s < steps; ++s) {
        const double tau = (s + 0.5) * t / steps;
        sg.push(tau, semigroup_apply(f, tau, *plan));
    }
    sg.push(t, semigroup_apply(f, t, *plan));
    auto G = duhamel(sg, t, *plan, steps);
    auto tS = semigroup_apply(f, t, *plan);
    for (auto& v : tS.values) v *= t;
    CHECK(max_abs_diff(G, tS) < 1e-10 * max_abs(tS));

    Trajectory short_forcing;
    short_forcing.push(0.0, f);
    short_forcing.push(0.5, f);
    CHECK_THROWS_AS(duhamel(short_forcing, t, *plan, 4), std::invalid_argument);
}

TEST_CASE("existence_time") {
    const auto p = derive_params(3, 1.0, 0);
    ContractionConstants c{1.0, 1.0, 0.0};
    const auto nl = make_nonlinearity(1.0, Sign::focusing, p);
    // gamma / q = 1/2
    CHECK(existence_time(1.0, c, nl, 2.0 * p.gamma, p.gamma) == doctest::Approx(1.0 / 16.0).epsilon(1e-14));
    CHECK(std::isinf(existence_time(0.0, c, nl, 2.0 * p.gamma, p.gamma)));
    double prev = 0.0;
    for (double norm : {10.0, 1.0, 0.1, 1e-3}) {
        const double T = existence_time(norm, c, nl, 5.0, p.gamma);
        CHECK(T > prev);
        prev = T;
    }
    CHECK_THROWS_AS(existence_time(1.0, c, nl, nl.q0, p.gamma), std::invalid_argument);
    CHECK_THROWS_AS(existence_time(1.0, c, nl, 1.5, p.gamma), std::invalid_argument);
}

TEST_CASE("blowup_fit on synthetic series") {
    std::vector<double> t, v;
    for (int i = 0; i < 60; ++i) {
        const double gap = std::pow(10.0, -i / 15.0);
        t.push_back(1.0 - gap);
        v.push_back(std::pow(gap, -2.0));
    }
    auto rep = blowup_fit(t, v, 1.5);
    CHECK(rep.fitted);
    CHECK(rep.T_star_fit == doctest::Approx(1.0).epsilon(1e-6));
    CHECK(std::abs(rep.exponent_fit - 2.0) < 1e-6);
    CHECK(rep.lower_bound_exponent == 1.5);

    std::mt19937_64 rng(2024);
    std::normal_distribution<double> noise(0.0, 0.01);
    auto noisy = v;
    for (auto& x : noisy) x *= 1.0 + noise(rng);
    CHECK(std::abs(blowup_fit(t, noisy).exponent_fit - 2.0) < 0.05);

    std::vector<double> flat(20, 1.0), ft(20);
    for (int i = 0; i < 20; ++i) ft[i] = i;
    CHECK_THROWS_AS(blowup_fit(ft, flat), std::invalid_argument);
    CHECK_THROWS_AS(blowup_fit({0, 1, 2}, {1, 10, 1e5}), std::invalid_argument);
}

TEST_CASE("picard_solve: zero data") {
    const auto p = derive_params(3, 1.0, 0);
    const auto plan = plan_for(p, 1.0, 2.0);
    EvolutionConfig cfg;
    cfg.t_end = 1.0;
    cfg.steps = 4;
    cfg.nonlinearity = make_nonlinearity(1.0, Sign::focusing, p);
    auto res = picard_solve(zeros_like(sample(plan->physical_grid, [](double) { return 0.0; }, Space::physical, p)), cfg, *plan);
    CHECK(res.stop == StopReason::completed);
    CHECK(res.trajectory.times.back() == doctest::Approx(1.0));
    for (double n : res.trajectory.norms_q) CHECK(n == 0.0);
}

TEST_CASE("picard_solve: defocusing small data decays") {
    const auto p = derive_params(3, 1.0, 0);
    const auto plan = plan_for(p, 1.0, 4.0);
    EvolutionConfig cfg;
    cfg.t_end = 2.0;
    cfg.steps = 8;
    cfg.q = 3.0;
    cfg.nonlinearity = make_nonlinearity(1.0, Sign::defocusing, p);
    auto u0 = sample(plan->physical_grid, [&](double r) { return 0.5 * natural_gaussian(r, p, 1.0); }, Space::physical, p);
    auto res = picard_solve(u0, cfg, *plan);
    CHECK(res.stop == StopReason::completed);
    CHECK(res.trajectory.times.back() == doctest::Approx(2.0));
    const auto& n = res.trajectory.norms_q;
    for (std::size_t i = 1; i < n.size(); ++i) CHECK(n[i] <= n[i - 1] * (1.0 + 1e-12));
    // the linear flow dominates the defocusing solution for positive data
    auto lin = semigroup_apply(u0, 2.0, *plan);
    const auto& u = res.trajectory.states.back();
    for (std::size_t i = 0; i < u.size(); ++i) CHECK(u.values[i] <= lin.values[i] + 1e-10);
}

TEST_CASE("picard_solve: focusing large data follows the ODE early on") {
    const auto p = derive_params(2, 0.0, 0);
    GridDesign d;
    d.age_min = 2e-3;
    d.age_max = 1.2;
    d.decay = 20.0;
    d.panels = 232;
    const auto plan = plan_transform(p, d);
    const double A = 10.0;
    auto u0 = sample(plan->physical_grid, [&](double r) { return A * std::exp(-r * r / 4.0); }, Space::physical, p);
    EvolutionConfig cfg;
    cfg.t_end = 1.0;
    cfg.steps = 20;
    cfg.q = 16.0;
    cfg.substeps = 2;
    cfg.picard_tol = 1e-9;
    cfg.blowup_threshold = 1e3;
    cfg.nonlinearity = make_nonlinearity(1.0, Sign::focusing, p);
    auto res = picard_solve(u0, cfg, *plan);
    CHECK(res.stop == StopReason::blowup);
    CHECK(res.blowup.detected);
    if (res.blowup.fitted) CHECK(res.blowup.T_star_fit > res.trajectory.times.back());
    // T*_ODE = 1 / max u0
    CHECK(res.trajectory.times.back() == doctest::Approx(1.0 / A).epsilon(0.2));
    // sup norm tracks u0 / (1 - t u0) while diffusion is negligible
    for (std::size_t i = 0; i < res.trajectory.size(); ++i) {
        const double t = res.trajectory.times[i];
        if (t > 0.05) break;
        double sup = 0.0;
        for (double v : res.trajectory.states[i].values) sup = std::max(sup, v);
        CHECK(sup == doctest::Approx(A / (1.0 - t * A)).epsilon(0.2));
    }
}

TEST_CASE("contraction constants and the Picard contraction certificate") {
    const auto p = derive_params(3, 0.0, 0);
    const auto nl = make_nonlinearity(1.0, Sign::focusing, p);
    const auto plan = plan_for(p, 0.5, 3.0);
    std::vector<GridFunction> probes;
    for (double s : {0.5, 1.0, 1.5}) {
        probes.push_back(sample(plan->physical_grid, [&](double r) { return natural_gaussian(r, p, s, 0.3); }, Space::physical, p));
    }

    // p = q, m = inf: each half of the X norm is bounded by ||psi||_q
    const auto same = classify_triplet(kInf, 2.0, 2.0, p);
    REQUIRE(same.kind == TripletKind::admissible);
    const auto c_same = measure_contraction_constants(same, p, *plan, probes, 1.0, 20, nl);
    CHECK(c_same.c1_linf <= 1.0 + 1e-6);
    CHECK(c_same.c1_lm <= 1.0 + 1e-6);
    CHECK(c_same.C1 <= 2.0 + 1e-6);

    const auto trip = classify_triplet(4.0, 3.0, 2.0, p);
    REQUIRE(trip.kind == TripletKind::admissible);
    const auto c = measure_contraction_constants(trip, p, *plan, probes, 1.0, 20, nl);
    CHECK(c.C1 > 0.0);
    CHECK(c.C2 > 0.0);
    CHECK(std::isfinite(c.T_exist));
    CHECK_THROWS_AS(measure_contraction_constants(trip, p, *plan, {}, 1.0, 20, nl), std::invalid_argument);

    // sup over horizons 4, 1, 1/4, 1/16 covers every T below
    const auto cs = measure_contraction_constants(trip, p, *plan, probes, 4.0, 16, nl, 4);
    for (double scale : {0.5, 1.0, 2.0, 4.0, 8.0}) {
        auto u0 = probes[1];
        for (auto& v : u0.values) v *= scale;
        const double T = existence_time(lp_norm_deta(u0, 2.0, 0), cs, nl, 2.0, p.gamma);
        const auto ratios = picard_contraction_ratios(u0, T, 16, trip, nl, *plan, 6);
        REQUIRE(!ratios.empty());
        for (double r : ratios) CHECK(r <= 0.55);
    }
}

TEST_CASE("contraction constants are stable under grid doubling") {
    const auto p = derive_params(3, 0.0, 0);
    const auto nl = make_nonlinearity(1.0, Sign::focusing, p);
    const auto trip = classify_triplet(4.0, 3.0, 2.0, p);
    ContractionConstants c[2];
    for (int level = 0; level < 2; ++level) {
        const auto plan = plan_for(p, 0.5, 3.0, 64 << level);
        std::vector<GridFunction> probes;
        for (double s : {0.5, 1.0, 1.5}) {
            probes.push_back(sample(plan->physical_grid, [&](double r) { return natural_gaussian(r, p, s, 0.3); }, Space::physical, p));
        }
        c[level] = measure_contraction_constants(trip, p, *plan, probes, 1.0, 16, nl);
    }
    CHECK(c[1].C1 == doctest::Approx(c[0].C1).epsilon(0.1));
    CHECK(c[1].C2 == doctest::Approx(c[0].C2).epsilon(0.1));
    CHECK(c[1].T_exist == doctest::Approx(c[0].T_exist).epsilon(0.1));
}

TEST_CASE("C1 over 20 probes is stable under grid refinement") {
    const auto p = derive_params(3, 1.0, 0);
    const auto nl = make_nonlinearity(1.0, Sign::focusing, p);
    const auto trip = classify_triplet(3.0, 3.0, 2.0, p);
    REQUIRE(trip.kind == TripletKind::admissible);
    const int steps = 8;
    double c1[2];
    for (int level = 0; level < 2; ++level) {
        const auto plan = plan_for(p, 0.5, 3.0, 64 << level);
        std::vector<GridFunction> probes;
        for (int i = 0; i < 20; ++i) {
            const double s = 0.5 + 0.075 * i;
            const double c = 0.05 * (i % 5);
            probes.push_back(sample(plan->physical_grid, [&](double r) { return natural_gaussian(r, p, s, c); }, Space::physical, p));
        }
        // C1 = sup ||S psi||_X / ||psi||_q
        c1[level] = 0.0;
        for (const auto& psi : probes) {
            Trajectory lin;
            lin.q = trip.q;
            for (int j = 0; j <= steps; ++j) lin.push(double(j) / steps, semigroup_apply(psi, double(j) / steps, *plan));
            c1[level] = std::max(c1[level], x_norm(lin, trip, 0) / lp_norm_deta(psi, trip.q, 0));
        }
        CHECK(std::isfinite(c1[level]));
        if (level == 0) {
            const std::vector<GridFunction> few(probes.begin(), probes.begin() + 3);
            double c1_few = 0.0;
            for (const auto& psi : few) {
                Trajectory lin;
                lin.q = trip.q;
                for (int j = 0; j <= steps; ++j) lin.push(double(j) / steps, semigroup_apply(psi, double(j) / steps, *plan));
                c1_few = std::max(c1_few, x_norm(lin, trip, 0) / lp_norm_deta(psi, trip.q, 0));
            }
            const auto cs = measure_contraction_constants(trip, p, *plan, few, 1.0, steps, nl);
            CHECK(cs.C1 == doctest::Approx(c1_few).epsilon(1e-12));
            CHECK(std::isinf(cs.T_exist));
        }
    }
    CHECK(c1[1] == doctest::Approx(c1[0]).epsilon(0.01));
}

TEST_CASE("large-time decay follows the kernel rate") {
    const auto p = derive_params(3, 0.0, 0);
    const auto plan = plan_for(p, 1.0, 1.6e3, 384, 20.0);
    auto a = sample(plan->physical_grid, [&](double r) { return natural_gaussian(r, p, 1.0); }, Space::physical, p);
    for (double pp : {1.0, 2.0, 4.0}) {
        std::vector<double> t, v;
        for (int i = 0; i < 6; ++i) {
            t.push_back(1.5e2 * std::pow(10.0, i / 5.0));
            v.push_back(lp_norm_deta(semigroup_apply(a, t.back(), *plan), pp, 0));
        }
        // log-log slope by least squares
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < t.size(); ++i) {
            const double x = std::log(t[i]), y = std::log(v[i]);
            sx += x;
            sy += y;
            sxx += x * x;
            sxy += x * y;
        }
        const double n = static_cast<double>(t.size());
        const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        CHECK(std::abs(slope - p.gamma * (1.0 / pp - 1.0)) < 1e-2);
    }
}

TEST_CASE("small data at the critical exponent exist to t = 1000") {
    const auto p = derive_params(3, 0.0, 0);
    const auto nl = make_nonlinearity(1.0, Sign::focusing, p);
    const auto plan = plan_for(p, 1.0, 1.001e3, 320, 20.0);
    EvolutionConfig cfg;
    cfg.t_end = 1e3;
    cfg.steps = 40;
    cfg.substeps = 2;
    cfg.q = nl.q0;
    cfg.nonlinearity = nl;
    auto u0 = sample(plan->physical_grid, [&](double r) { return 0.05 * natural_gaussian(r, p, 1.0); }, Space::physical, p);
    const auto res = picard_solve(u0, cfg, *plan);
    CHECK(res.stop == StopReason::completed);
    CHECK(res.trajectory.times.back() == doctest::Approx(1e3));
    const auto& n = res.trajectory.norms_q;
    CHECK(*std::max_element(n.begin(), n.end()) <= n.front() * (1.0 + 1e-9));
}
