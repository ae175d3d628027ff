#include "suites.hpp"

#include "scenarios.hpp"

#include "bhankel/estimates.hpp"
#include "bhankel/evolution.hpp"
#include "bhankel/hankel.hpp"
#include "bhankel/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <stdexcept>
#include <tuple>

namespace bhankel::app {

namespace {

struct Lattice {
    int n;
    double beta;
    int k;
};

std::string fmt(const char* format, double a) {
    char buf[64];
    std::snprintf(buf, sizeof buf, format, a);
    return buf;
}

std::string tag(const ModelParams& p) {
    return "n=" + std::to_string(p.n) + " beta=" + fmt("%g", p.beta) + " k=" + std::to_string(p.k);
}

Check make_check(std::string name, std::string anchor, double measured, double tolerance) {
    Check c{std::move(name), std::move(anchor), measured, tolerance, false};
    c.pass = std::isfinite(measured) && measured <= tolerance;
    return c;
}

std::vector<Lattice> select(const std::vector<Lattice>& all, const SuiteOptions& o) {
    std::vector<Lattice> out;
    for (const auto& l : all) {
        if (o.n && *o.n != l.n) continue;
        if (o.beta && *o.beta != l.beta) continue;
        if (o.k && *o.k != l.k) continue;
        out.push_back(l);
    }
    if (out.empty()) throw std::invalid_argument("parameter filter selects no lattice point of this suite");
    return out;
}

std::vector<Lattice> full_lattice() {
    std::vector<Lattice> out;
    for (int n : {2, 3})
        for (double beta : {0.0, 0.5, 1.0})
            for (int k : {0, 1, 2}) out.push_back({n, beta, k});
    return out;
}

const std::vector<Lattice> kThreeSets{{3, 1.0, 0}, {2, 0.5, 1}, {3, 0.0, 2}};

/// r^k exp(-r^e/(e^2 s)) (1 + c r^e), e = 2 - beta
double natural_gaussian(double r, const ModelParams& p, double s, double c = 0.0) {
    const double e = 2.0 - p.beta;
    const double re = std::pow(r, e);
    return std::pow(r, p.k) * std::exp(-re / (e * e * s)) * (1.0 + c * re);
}

GridFunction gaussian_on(const PlanPtr& plan, double s, double c = 0.0) {
    const auto& p = plan->params;
    return sample(plan->physical_grid, [&](double r) { return natural_gaussian(r, p, s, c); }, Space::physical, p);
}

double rel_l2(const GridFunction& a, const GridFunction& b, double weight_exponent) {
    auto d = a;
    auto sq = a;
    for (std::size_t i = 0; i < d.size(); ++i) {
        d.values[i] = (a.values[i] - b.values[i]) * (a.values[i] - b.values[i]);
        sq.values[i] = b.values[i] * b.values[i];
    }
    return std::sqrt(integrate_weighted(d, weight_exponent) / integrate_weighted(sq, weight_exponent));
}

double rel_max(const std::vector<double>& a, const std::vector<double>& ref) {
    double scale = 0.0, worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        scale = std::max(scale, std::abs(ref[i]));
        worst = std::max(worst, std::abs(a[i] - ref[i]));
    }
    return worst / scale;
}

std::vector<double> logspace(double a, double b, int count) {
    std::vector<double> out;
    for (int i = 0; i < count; ++i) out.push_back(a * std::pow(b / a, static_cast<double>(i) / (count - 1)));
    return out;
}

std::vector<Check> suite_watson(const SuiteOptions&) {
    std::vector<Check> out;
    for (double nu : {0.5, 1.0, 2.5})
        for (double a : {0.5, 1.0, 2.0})
            for (double p : {0.7, 1.0}) {
                GridSpec s;
                s.r_min = 1e-3;
                s.r_max = std::sqrt(60.0) / p;
                s.panels = 24;
                s.order = 16;
                s.origin_panel = true;
                const auto g = build_grid(s);
                const double exact = watson_closed_form(nu, a, p);
                const double err = std::abs(watson_quadrature(nu, a, p, *g) - exact) / std::abs(exact);
                out.push_back(make_check("watson nu=" + fmt("%g", nu) + " a=" + fmt("%g", a) + " p=" + fmt("%g", p),
                                         "Watson exponential integral", err, 1e-8));
            }
    return out;
}

std::vector<Check> suite_transform(const SuiteOptions& o) {
    std::vector<Check> out;
    for (const auto& l : select(full_lattice(), o)) {
        const auto p = derive_params(l.n, l.beta, l.k);
        const auto plan = plan_transform(p);
        for (double c : {0.0, 0.5}) {
            const auto phi = gaussian_on(plan, 1.0, c);
            const auto F = hankel_forward(phi, *plan);
            const auto back = hankel_inverse(F, *plan);
            const std::string t = tag(p) + " c=" + fmt("%g", c);
            out.push_back(make_check("round_trip " + t, "transform inversion", rel_l2(back, phi, l.n - 1.0 - l.beta), 1e-6));
            auto F2 = F;
            auto phi2 = phi;
            for (auto& v : F2.values) v *= v;
            for (auto& v : phi2.values) v *= v;
            const double iso = integrate_weighted(F2, l.beta + l.n - 1.0) / integrate_weighted(phi2, l.n - 1.0 - l.beta);
            out.push_back(make_check("isometry " + t, "transform isometry", std::abs(iso - 1.0), 1e-6));
        }
    }
    return out;
}

std::vector<Check> suite_diagonalization(const SuiteOptions& o) {
    std::vector<Check> out;
    for (const auto& l : select(full_lattice(), o)) {
        const auto p = derive_params(l.n, l.beta, l.k);
        const auto plan = plan_transform(p);
        for (double c : {0.0, 0.5}) {
            const auto phi = gaussian_on(plan, 1.0, c);
            const auto F = hankel_forward(phi, *plan);
            auto rbA = apply_operator_A(phi, p).value;
            for (std::size_t i = 0; i < rbA.size(); ++i) rbA.values[i] *= std::pow(rbA.node(i), l.beta);
            const auto lhs = hankel_forward(rbA, *plan);
            const auto rhs = spectral_multiply(F, [&](double rho) { return std::pow(rho, 2.0 - l.beta); });
            // interior: two spectral nodes dropped at each end
            double num = 0.0, den = 0.0;
            const auto& sg = *plan->spectral_grid;
            for (std::size_t i = 2; i + 2 < sg.size(); ++i) {
                const double w = std::pow(sg.nodes[i], l.beta + l.n - 1.0) * sg.weights[i];
                num += (lhs.values[i] - rhs.values[i]) * (lhs.values[i] - rhs.values[i]) * w;
                den += rhs.values[i] * rhs.values[i] * w;
            }
            out.push_back(make_check("diagonalization " + tag(p) + " c=" + fmt("%g", c), "transform diagonalizes r^beta A",
                                     std::sqrt(num / den), 1e-4));
        }
    }
    return out;
}

std::vector<Check> suite_kernel(const SuiteOptions& o) {
    std::vector<Check> out;
    for (const auto& l : select(kThreeSets, o)) {
        const auto p = derive_params(l.n, l.beta, l.k);
        for (double t : {0.1, 1.0, 10.0}) {
            GridDesign d;
            d.age_min = d.age_max = t;
            const auto plan = plan_transform(p, d);
            const auto K = sample(plan->physical_grid, [&](double r) { return kernel_K(r, t, p); }, Space::physical, p);
            const auto sym = sample(
                plan->spectral_grid,
                [&](double rho) { return std::pow(rho, l.k - l.beta) * std::exp(-std::pow(rho, 2.0 - l.beta) * t); },
                Space::spectral, p);
            const std::string tt = tag(p) + " t=" + fmt("%g", t);
            out.push_back(make_check("kernel_inverse " + tt, "evolution kernel closed form",
                                     rel_max(hankel_inverse(sym, *plan).values, K.values), 1e-6));
            out.push_back(make_check("kernel_forward " + tt, "evolution kernel closed form",
                                     rel_max(hankel_forward(K, *plan).values, sym.values), 1e-6));
        }
    }
    return out;
}

std::vector<Check> suite_heat(const SuiteOptions&) {
    std::vector<Check> out;
    const auto p = derive_params(3, 0.0, 0);
    GridDesign d;
    d.age_min = 1.0;
    d.age_max = 3.0;
    const auto plan = plan_transform(p, d);
    const auto a = sample(plan->physical_grid, [](double r) { return std::exp(-r * r / 4.0); }, Space::physical, p);
    for (double t : {0.25, 1.0, 2.0}) {
        const auto u = semigroup_apply(a, t, *plan);
        const auto exact = sample(
            plan->physical_grid, [&](double r) { return std::pow(1.0 / (1.0 + t), 1.5) * std::exp(-r * r / (4.0 * (1.0 + t))); },
            Space::physical, p);
        out.push_back(make_check("heat n=3 t=" + fmt("%g", t), "beta = 0 heat reduction", rel_max(u.values, exact.values), 1e-6));
    }
    for (auto [s, t] : {std::pair{0.7, 0.5}, std::pair{0.3, 1.4}}) {
        const auto ts = semigroup_apply(semigroup_apply(a, s, *plan), t, *plan);
        const auto direct = semigroup_apply(a, s + t, *plan);
        out.push_back(make_check("composition s=" + fmt("%g", s) + " t=" + fmt("%g", t), "semigroup property",
                                 rel_max(ts.values, direct.values), 1e-8));
    }
    return out;
}

std::vector<Check> suite_power_law(const SuiteOptions&) {
    std::vector<Check> out;
    for (auto [l, m] : {std::pair{Lattice{3, 1.0, 0}, 1.0}, std::pair{Lattice{3, 1.0, 0}, 2.0}, std::pair{Lattice{2, 0.5, 1}, 3.0},
                        std::pair{Lattice{3, 0.0, 2}, 1.5}, std::pair{Lattice{4, 1.5, 1}, 4.0}, std::pair{Lattice{2, 0.0, 0}, kInf}}) {
        const auto p = derive_params(l.n, l.beta, l.k);
        GridDesign d;
        d.age_min = std::isinf(m) ? 0.1 : 0.1 / m;
        d.age_max = 10.0;
        const auto grids = design_grids(p, d);
        const auto times = logspace(0.1, 10.0, 9);
        std::vector<double> norms;
        for (double t : times) norms.push_back(kernel_norm(t, m, p, *grids.physical));
        const double expected = p.gamma * (1.0 / m - 1.0);
        out.push_back(make_check("kernel_norm_exponent " + tag(p) + " m=" + fmt("%g", m), "kernel norm decay rate",
                                 std::abs(decay_exponent_fit(times, norms) - expected), 1e-3));
    }
    return out;
}

std::vector<Check> suite_young(const SuiteOptions& o) {
    std::vector<Check> out;
    const auto p = derive_params(3, 0.5, 1);
    GridDesign d;
    d.age_min = 0.5;
    d.age_max = 4.0;
    d.panels = 96;
    const auto plan = plan_transform(p, d);
    std::mt19937_64 rng(o.seed);
    std::uniform_real_distribution<double> age(0.5, 2.0), unit(0.0, 1.0);
    const std::vector<std::tuple<double, double, double>> triples{{2.0, 4.0 / 3.0, 4.0 / 3.0}, {3.0, 1.5, 1.5}, {1.0, 1.0, 1.0}};
    std::vector<double> worst(triples.size(), -kInf);
    auto random_data = [&] {
        // nonnegative mix of two natural Gaussians
        const double s1 = age(rng), s2 = age(rng), c1 = unit(rng), c2 = unit(rng), w = unit(rng);
        return sample(plan->physical_grid,
                      [&](double r) { return natural_gaussian(r, p, s1, c1) + w * natural_gaussian(r, p, s2, c2); },
                      Space::physical, p);
    };
    for (int trial = 0; trial < o.young_pairs; ++trial) {
        const auto f = random_data();
        const auto g = random_data();
        for (std::size_t j = 0; j < triples.size(); ++j) {
            const auto [a, b, c] = triples[j];
            const auto y = young_audit(f, g, a, b, c, *plan);
            worst[j] = std::max(worst[j], y.lhs / y.rhs - 1.0);
        }
    }
    for (std::size_t j = 0; j < triples.size(); ++j) {
        const auto [a, b, c] = triples[j];
        out.push_back(make_check("young a=" + fmt("%g", a) + " b=" + fmt("%g", b) + " c=" + fmt("%g", c) + " pairs=" +
                                     std::to_string(o.young_pairs),
                                 "Young inequality for the sharp convolution", worst[j], 1e-8));
    }
    return out;
}

std::vector<Check> suite_delsarte(const SuiteOptions& o) {
    std::vector<Check> out;
    const std::vector<std::pair<double, double>> points{{0.5, 0.8}, {1.0, 1.0}, {1.3, 0.4}, {2.0, 2.5}, {0.2, 3.0}};
    const char* names[] = {"x", "y", "z"};
    for (const auto& l : select({{3, 1.0, 0}, {3, 0.5, 1}, {2, 0.5, 0}}, o)) {
        const auto p = derive_params(l.n, l.beta, l.k);
        int v = 0;
        for (auto which : {DelsarteVariable::x, DelsarteVariable::y, DelsarteVariable::z}) {
            for (auto [a, b] : points) {
                const double num = delsarte_moment(which, a, b, p);
                const double exact = delsarte_moment_exact(which, a, b, p);
                out.push_back(make_check("delsarte_moment_" + std::string(names[v]) + " " + tag(p) + " at (" + fmt("%g", a) +
                                             "," + fmt("%g", b) + ")",
                                         "Delsarte kernel integral identities", std::abs(num - exact) / std::abs(exact), 1e-4));
            }
            ++v;
        }

        // spectral route vs the Delsarte double integral
        const double sf = 0.6, sg = 0.9;
        GridDesign d;
        d.age_min = sf;
        d.age_max = sf + sg;
        const auto plan = plan_transform(p, d);
        auto fn = [&](double r) { return natural_gaussian(r, p, sf, 0.5); };
        auto gn = [&](double r) { return natural_gaussian(r, p, sg); };
        const auto conv = sharp_convolve(sample(plan->physical_grid, fn, Space::physical, p),
                                         sample(plan->physical_grid, gn, Space::physical, p), *plan);
        double scale = 0.0;
        for (double x : conv.values) scale = std::max(scale, std::abs(x));
        const double e = 2.0 - l.beta;
        const double y_max = std::pow(40.0 * e * e * sg, 1.0 / e);
        int checked = 0;
        for (std::size_t i = 120; i < conv.size() && checked < 8; i += 30, ++checked) {
            const double x = conv.node(i);
            const double direct = sharp_convolve_direct(fn, gn, x, std::max(y_max, 2 * x), p, 64);
            out.push_back(make_check("sharp_vs_direct " + tag(p) + " x=" + fmt("%.6g", x), "sharp convolution product rule",
                                     std::abs(direct - conv.values[i]) / scale, 1e-4));
        }
    }
    return out;
}

std::vector<Check> suite_smoothing(const SuiteOptions&) {
    std::vector<Check> out;
    const auto p = derive_params(3, 1.0, 0);
    GridDesign d;
    d.age_min = 10.0;
    d.age_max = 110.0;
    d.panels = 96;
    const auto plan = plan_transform(p, d);
    const auto psi = gaussian_on(plan, 10.0);
    const auto times = logspace(1e-2, 1e2, 25);
    for (auto [pp, qq] : {std::pair{2.0, 1.0}, std::pair{4.0, 2.0}, std::pair{kInf, 2.0}, std::pair{3.0, 1.5},
                          std::pair{kInf, 1.0}, std::pair{6.0, 3.0}}) {
        const auto r = smoothing_ratios(psi, times, pp, qq, *plan);
        out.push_back(make_check("smoothing p=" + fmt("%g", pp) + " q=" + fmt("%g", qq), "L^q to L^p smoothing bound",
                                 *std::max_element(r.begin(), r.end()) - 1.0, 1e-6));
    }
    for (double e : {1.0, 2.0, 3.5, kInf}) {
        out.push_back(make_check("smoothing_constant p=q=" + fmt("%g", e), "smoothing constant at p = q",
                                 std::abs(smoothing_constant(e, e, p) - 1.0), 0.0));
    }
    return out;
}

std::vector<Check> suite_mass(const SuiteOptions& o) {
    std::vector<Check> out;
    for (const auto& l : select({{3, 1.0, 0}, {2, 0.5, 0}, {3, 0.0, 0}}, o)) {
        const auto p = derive_params(l.n, l.beta, l.k);
        GridDesign d;
        d.age_min = 1.0;
        d.age_max = 6.0;
        d.panels = 96;
        const auto plan = plan_transform(p, d);
        const auto a = gaussian_on(plan, 1.0, 0.4);
        const double w = l.n - 1.0 - l.beta;
        const double m0 = integrate_weighted(a, w);
        double drift = 0.0, negative = 0.0;
        for (double t : {0.5, 1.0, 2.5, 5.0}) {
            const auto u = semigroup_apply(a, t, *plan);
            drift = std::max(drift, std::abs(integrate_weighted(u, w) / m0 - 1.0));
            for (double v : u.values) negative = std::max(negative, -v);
        }
        out.push_back(make_check("mass " + tag(p), "mass conservation of the linear flow", drift, 1e-6));
        out.push_back(make_check("positivity " + tag(p), "positivity of the linear flow", negative, 1e-12));
    }
    return out;
}

std::vector<Check> suite_contraction(const SuiteOptions&) {
    std::vector<Check> out;
    const auto p = derive_params(3, 0.0, 0);
    const auto nl = make_nonlinearity(1.0, Sign::focusing, p);
    const auto trip = classify_triplet(4.0, 3.0, 2.0, p);
    std::vector<ContractionConstants> c;
    for (int level = 0; level < 2; ++level) {
        GridDesign d;
        d.age_min = 0.5;
        d.age_max = 3.0;
        d.panels = 64 << level;
        const auto plan = plan_transform(p, d);
        std::vector<GridFunction> probes;
        for (double s : {0.5, 1.0, 1.5}) probes.push_back(gaussian_on(plan, s, 0.3));
        c.push_back(measure_contraction_constants(trip, p, *plan, probes, 1.0, 16, nl));
        if (level > 0) continue;
        // sup over horizons 4, 1, 1/4, 1/16 covers every T below
        const auto cs = measure_contraction_constants(trip, p, *plan, probes, 4.0, 16, nl, 4);
        for (double scale : {0.5, 1.0, 2.0, 4.0, 8.0}) {
            auto u0 = probes[1];
            for (auto& v : u0.values) v *= scale;
            const double T = existence_time(lp_norm_deta(u0, 2.0, 0), cs, nl, 2.0, p.gamma);
            const auto ratios = picard_contraction_ratios(u0, T, 16, trip, nl, *plan, 6);
            const double worst = ratios.empty() ? 0.0 : *std::max_element(ratios.begin(), ratios.end());
            out.push_back(make_check("picard_ratio scale=" + fmt("%g", scale) + " T=" + fmt("%.6g", T),
                                     "Picard map contracts up to the existence time", worst, 0.55));
        }
    }
    out.push_back(make_check("C1 grid doubling", "measured contraction constants", std::abs(c[1].C1 / c[0].C1 - 1.0), 0.1));
    out.push_back(make_check("C2 grid doubling", "measured contraction constants", std::abs(c[1].C2 / c[0].C2 - 1.0), 0.1));
    return out;
}

std::vector<Check> suite_blowup(const SuiteOptions& o) {
    std::vector<Check> out;
    const auto s = blowup_scenario();
    const auto plan = plan_transform(s.params, s.design);
    const auto res = picard_solve(initial_data(s, *plan), s.config, *plan);
    out.push_back(make_check("blowup detected", "focusing blow-up", res.blowup.detected && res.blowup.fitted ? 0.0 : 1.0, 0.0));
    const double lb = res.blowup.lower_bound_exponent;
    out.push_back(make_check("blowup exponent deficit (lower bound " + fmt("%.6g", lb) + ", fit " +
                                 fmt("%.6g", res.blowup.exponent_fit) + ")",
                             "blow-up rate lower bound", res.blowup.fitted ? (lb - 0.1) - res.blowup.exponent_fit : kInf, 0.0));

    std::vector<double> t, v;
    for (int i = 0; i < 60; ++i) {
        const double gap = std::pow(10.0, -i / 15.0);
        t.push_back(1.0 - gap);
        v.push_back(std::pow(gap, -2.0));
    }
    const auto clean = blowup_fit(t, v);
    out.push_back(make_check("synthetic fit exponent, noiseless", "blow-up rate fitting", std::abs(clean.exponent_fit - 2.0), 1e-6));
    std::mt19937_64 rng(o.seed);
    std::normal_distribution<double> noise(0.0, 0.01);
    for (auto& x : v) x *= 1.0 + noise(rng);
    const auto noisy = blowup_fit(t, v);
    out.push_back(make_check("synthetic fit exponent, 1% noise", "blow-up rate fitting", std::abs(noisy.exponent_fit - 2.0), 0.05));
    return out;
}

using SuiteFn = std::vector<Check> (*)(const SuiteOptions&);

const std::map<std::string, SuiteFn>& registry() {
    static const std::map<std::string, SuiteFn> r{
        {"watson", suite_watson},         {"transform", suite_transform},   {"diagonalization", suite_diagonalization},
        {"kernel", suite_kernel},         {"heat", suite_heat},             {"power-law", suite_power_law},
        {"young", suite_young},           {"delsarte", suite_delsarte},     {"smoothing", suite_smoothing},
        {"mass", suite_mass},             {"contraction", suite_contraction}, {"blowup", suite_blowup},
    };
    return r;
}

}  // namespace

const std::vector<std::string>& suite_names() {
    static const std::vector<std::string> names{"watson", "transform", "diagonalization", "kernel", "heat", "power-law",
                                                "young",  "delsarte",  "smoothing",       "mass",   "contraction", "blowup"};
    return names;
}

std::vector<Check> run_suite(const std::string& name, const SuiteOptions& options) {
    const auto& r = registry();
    const auto it = r.find(name);
    if (it == r.end()) throw std::invalid_argument("unknown suite '" + name + "'");
    return it->second(options);
}

bool all_pass(const std::vector<Check>& checks) {
    return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

}  // namespace bhankel::app
