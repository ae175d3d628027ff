#include "bhankel/radial.hpp"

#include "bhankel/errors.hpp"
#include "bhankel/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace bhankel {

namespace {

constexpr double kAbsFloor = 1e-300;

/// Inverts g(r) = ln r + kappa r^c on [lo, hi] by bisection.
double invert_grading(double target, double kappa, double c, double lo, double hi) {
    auto g = [&](double r) { return std::log(r) + kappa * std::pow(r, c); };
    for (int it = 0; it < 200; ++it) {
        const double mid = std::sqrt(lo * hi);
        if (g(mid) < target) lo = mid; else hi = mid;
        if (hi / lo - 1.0 < 1e-15) break;
    }
    return std::sqrt(lo * hi);
}

}  // namespace

GridPtr build_grid(double r_min, double r_max, int panels, int order) {
    GridSpec gs;
    gs.r_min = r_min;
    gs.r_max = r_max;
    gs.panels = panels;
    gs.order = order;
    return build_grid(gs);
}

GridPtr build_grid(const GridSpec& gs) {
    if (!(gs.r_min > 0.0)) throw std::invalid_argument("grid r_min must be > 0");
    if (!(gs.r_max > gs.r_min)) throw std::invalid_argument("grid requires r_max > r_min");
    if (gs.panels < 1) throw std::invalid_argument("grid needs at least one panel");
    if (gs.order < 2) throw std::invalid_argument("grid order must be >= 2");
    if (gs.origin_panel && gs.panels < 2) {
        throw std::invalid_argument("origin panel needs at least two panels");
    }
    if (!(gs.log_share > 0.0 && gs.log_share <= 1.0)) {
        throw std::invalid_argument("log_share must lie in (0, 1]");
    }
    if (!(gs.far_exponent > 0.0)) throw std::invalid_argument("far_exponent must be > 0");

    auto grid = std::make_shared<RadialGrid>();
    grid->gs = gs;
    const int graded = gs.origin_panel ? gs.panels - 1 : gs.panels;

    const double log_range = std::log(gs.r_max / gs.r_min);
    const double c = gs.far_exponent;
    double kappa = 0.0;
    if (gs.log_share < 1.0) {
        kappa = log_range * (1.0 - gs.log_share) / (gs.log_share * (std::pow(gs.r_max, c) - std::pow(gs.r_min, c)));
    }
    const double g0 = std::log(gs.r_min) + kappa * std::pow(gs.r_min, c);
    const double g1 = std::log(gs.r_max) + kappa * std::pow(gs.r_max, c);

    if (gs.origin_panel) grid->edges.push_back(0.0);
    grid->edges.push_back(gs.r_min);
    for (int i = 1; i < graded; ++i) {
        const double target = g0 + (g1 - g0) * i / graded;
        grid->edges.push_back(invert_grading(target, kappa, c, gs.r_min, gs.r_max));
    }
    grid->edges.push_back(gs.r_max);

    const GaussRule rule = gauss_legendre(gs.order);
    for (std::size_t p = 0; p + 1 < grid->edges.size(); ++p) {
        map_rule(rule, grid->edges[p], grid->edges[p + 1], grid->nodes, grid->weights);
    }
    return grid;
}

std::string_view to_string(Space space) {
    return space == Space::physical ? "physical" : "spectral";
}

GridFunction sample(const GridPtr& grid, const std::function<double(double)>& f, Space space,
                    const ModelParams& params) {
    GridFunction out{grid, std::vector<double>(grid->size()), space, params};
    for (std::size_t i = 0; i < grid->size(); ++i) out.values[i] = f(grid->nodes[i]);
    return out;
}

GridFunction zeros_like(const GridFunction& f) {
    return GridFunction{f.grid, std::vector<double>(f.size(), 0.0), f.space, f.params};
}

void require_compatible(const GridFunction& a, const GridFunction& b) {
    if (a.grid != b.grid || a.size() != b.size()) throw std::invalid_argument("grid mismatch");
    if (a.space != b.space) throw std::invalid_argument("space mismatch");
}

double integrate_weighted(const GridFunction& f, double weight_exponent) {
    const auto& g = *f.grid;
    double sum = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        if (f.values[i] == 0.0) continue;
        sum += f.values[i] * std::pow(g.nodes[i], weight_exponent) * g.weights[i];
    }
    if (!std::isfinite(sum)) throw NumericalError("integrate_weighted: non-finite accumulation");
    return sum;
}

double divide_by_power(double value, double r, int k) {
    const double a = std::abs(value);
    if (k == 0) return a;
    if (a < kAbsFloor) return 0.0;
    return std::exp(std::log(a) - k * std::log(r));
}

double lp_norm_deta(const GridFunction& f, double p, int k) {
    if (!(p >= 1.0)) throw std::invalid_argument("lp_norm_deta requires p >= 1");
    const auto& g = *f.grid;
    if (std::isinf(p)) {
        double mx = 0.0;
        for (std::size_t i = 0; i < f.size(); ++i) mx = std::max(mx, divide_by_power(f.values[i], g.nodes[i], k));
        return mx;
    }
    const double w_exp = f.params.measure_exponent(k);
    double sum = 0.0;
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double a = divide_by_power(f.values[i], g.nodes[i], k);
        if (a == 0.0) continue;
        sum += std::pow(a, p) * std::pow(g.nodes[i], w_exp) * g.weights[i];
    }
    if (!std::isfinite(sum)) throw NumericalError("lp_norm_deta: non-finite accumulation");
    return std::pow(sum, 1.0 / p);
}

void write_csv(std::ostream& os, const GridFunction& f) {
    os << (f.space == Space::physical ? "r,value\n" : "rho,value\n");
    char buf[80];
    for (std::size_t i = 0; i < f.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", f.grid->nodes[i], f.values[i]);
        os << buf;
    }
}

std::string to_csv(const GridFunction& f) {
    std::ostringstream os;
    write_csv(os, f);
    return os.str();
}

}  // namespace bhankel
