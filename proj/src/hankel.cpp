#include "bhankel/hankel.hpp"

#include "bhankel/errors.hpp"
#include "bhankel/parallel.hpp"
#include "bhankel/quadrature.hpp"
#include "bhankel/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace bhankel {

void DenseMatrix::apply(const std::vector<double>& x, std::vector<double>& y) const {
    if (x.size() != cols) throw std::invalid_argument("matrix-vector size mismatch");
    y.assign(rows, 0.0);
    parallel_for(rows, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            const double* row = &data[i * cols];
            double s = 0.0;
            for (std::size_t j = 0; j < cols; ++j) s += row[j] * x[j];
            y[i] = s;
        }
    });
}

GridPair design_grids(const ModelParams& params, const GridDesign& design) {
    if (!(design.age_min > 0.0 && design.age_max >= design.age_min)) {
        throw std::invalid_argument("grid design needs 0 < age_min <= age_max");
    }
    if (!(design.decay > 0.0)) throw std::invalid_argument("grid design decay must be > 0");
    const double e = 2.0 - params.beta;
    GridSpec gs;
    gs.r_min = design.r_min;
    gs.panels = design.panels;
    gs.order = design.order;
    gs.far_exponent = params.stretch();
    gs.log_share = design.log_share;
    gs.origin_panel = true;

    GridSpec phys = gs;
    phys.r_max = std::pow(design.decay * e * e * design.age_max, 1.0 / e);
    GridSpec spectral_gs = gs;
    spectral_gs.r_max = std::pow(design.decay / design.age_min, 1.0 / e);
    return {build_grid(phys), build_grid(spectral_gs)};
}

double kernel_U(double w, const ModelParams& p) {
    const double x = p.stretch_scale() * std::pow(w, p.stretch());
    return std::pow(0.5 * p.stretch_scale(), p.mu) * std::pow(w, p.k - p.beta) * bessel_j_reduced(p.mu, x);
}

double kernel_V(double w, const ModelParams& p) {
    const double x = p.stretch_scale() * std::pow(w, p.stretch());
    return std::pow(0.5 * p.stretch_scale(), p.mu) * std::pow(w, p.k) * bessel_j_reduced(p.mu, x);
}

double min_nodes_per_period(const RadialGrid& grid, double other_max, const ModelParams& params) {
    const double c = params.stretch();
    const double scale = params.stretch_scale() * std::pow(other_max, c);
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t p = 0; p + 1 < grid.edges.size(); ++p) {
        const double phase = scale * (std::pow(grid.edges[p + 1], c) - std::pow(grid.edges[p], c));
        if (phase <= 0.0) continue;
        worst = std::min(worst, grid.order() * 2.0 * std::numbers::pi / phase);
    }
    return worst;
}

PlanPtr plan_transform(GridPtr physical, GridPtr spectral, const ModelParams& params) {
    if (!physical || !spectral) throw std::invalid_argument("plan_transform needs two grids");
    const double phys_ratio = min_nodes_per_period(*physical, spectral->upper(), params);
    const double spec_ratio = min_nodes_per_period(*spectral, physical->upper(), params);
    const double ratio = std::min(phys_ratio, spec_ratio);
    if (ratio < kMinNodesPerPeriod) {
        throw NumericalError("transform grids under-resolve the kernel oscillation: " + std::to_string(ratio) +
                             " nodes per period, need " + std::to_string(kMinNodesPerPeriod));
    }

    auto plan = std::make_shared<TransformPlan>();
    plan->physical_grid = physical;
    plan->spectral_grid = spectral;
    plan->params = params;
    const auto& r = physical->nodes;
    const auto& rho = spectral->nodes;
    const std::size_t nr = r.size();
    const std::size_t ns = rho.size();
    plan->kernel_matrix_U = DenseMatrix(ns, nr);
    plan->kernel_matrix_V = DenseMatrix(nr, ns);

    // U and V share J_mu(s0 (r rho)^c); every power of r rho factors into a
    // row part and a column part.
    const double c = params.stretch();
    const double s0 = params.stretch_scale();
    const double pref = std::pow(0.5 * s0, params.mu);
    std::vector<double> r_c(nr), rho_c(ns), u_col(nr), u_row(ns), v_row(nr), v_col(ns);
    for (std::size_t j = 0; j < nr; ++j) {
        r_c[j] = std::pow(r[j], c);
        u_col[j] = pref * std::pow(r[j], params.k - params.beta + params.n - 1.0) * physical->weights[j];
        v_row[j] = std::pow(r[j], static_cast<double>(params.k));
    }
    for (std::size_t i = 0; i < ns; ++i) {
        rho_c[i] = std::pow(rho[i], c);
        u_row[i] = std::pow(rho[i], params.k - params.beta);
        v_col[i] = pref * std::pow(rho[i], params.k + params.n - 1.0) * spectral->weights[i];
    }
    auto& U = plan->kernel_matrix_U;
    auto& V = plan->kernel_matrix_V;
    parallel_for(ns, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t i = lo; i < hi; ++i) {
            for (std::size_t j = 0; j < nr; ++j) {
                const double jr = bessel_j_reduced(params.mu, s0 * rho_c[i] * r_c[j]);
                U(i, j) = u_row[i] * jr * u_col[j];
                V(j, i) = v_row[j] * jr * v_col[i];
            }
        }
    });
    for (double v : U.data) {
        if (!std::isfinite(v)) throw NumericalError("non-finite entry in transform matrix U");
    }
    for (double v : V.data) {
        if (!std::isfinite(v)) throw NumericalError("non-finite entry in transform matrix V");
    }
    return plan;
}

PlanPtr plan_transform(const ModelParams& params, const GridDesign& design) {
    const auto grids = design_grids(params, design);
    return plan_transform(grids.physical, grids.spectral, params);
}

GridFunction hankel_forward(const GridFunction& f, const TransformPlan& plan) {
    if (f.space != Space::physical) throw std::invalid_argument("hankel_forward expects physical-space data");
    if (f.grid != plan.physical_grid) throw std::invalid_argument("hankel_forward: grid mismatch");
    GridFunction out{plan.spectral_grid, {}, Space::spectral, plan.params};
    plan.kernel_matrix_U.apply(f.values, out.values);
    return out;
}

GridFunction hankel_inverse(const GridFunction& F, const TransformPlan& plan) {
    if (F.space != Space::spectral) throw std::invalid_argument("hankel_inverse expects spectral data");
    if (F.grid != plan.spectral_grid) throw std::invalid_argument("hankel_inverse: grid mismatch");
    GridFunction out{plan.physical_grid, {}, Space::physical, plan.params};
    plan.kernel_matrix_V.apply(F.values, out.values);
    return out;
}

GridFunction spectral_multiply(const GridFunction& F, const std::function<double(double)>& symbol) {
    if (F.space != Space::spectral) throw std::invalid_argument("spectral_multiply expects spectral data");
    GridFunction out = F;
    for (std::size_t i = 0; i < out.size(); ++i) {
        const double s = symbol(F.grid->nodes[i]);
        if (!std::isfinite(s)) throw NumericalError("spectral symbol is not finite");
        out.values[i] *= s;
    }
    return out;
}

OperatorResult apply_operator_A(const GridFunction& f, const ModelParams& params, int stencil) {
    const std::size_t n = f.size();
    if (stencil < 3) throw std::invalid_argument("operator stencil needs at least 3 nodes");
    if (n < 5 || n < static_cast<std::size_t>(stencil)) {
        throw std::invalid_argument("grid too coarse for apply_operator_A");
    }
    const auto& r = f.grid->nodes;
    const double potential = params.mu_k * params.mu_k - params.lambda * params.lambda;
    const std::size_t half = static_cast<std::size_t>(stencil) / 2;
    OperatorResult out{zeros_like(f), std::vector<std::uint8_t>(n, 0)};
    parallel_for(n, [&](std::size_t lo_i, std::size_t hi_i) {
        for (std::size_t i = lo_i; i < hi_i; ++i) {
            const std::size_t lo = std::min(i >= half ? i - half : 0, n - stencil);
            const auto w = fornberg_weights(r[i], &r[lo], stencil, 2);
            double d1 = 0.0;
            double d2 = 0.0;
            for (int s = 0; s < stencil; ++s) {
                d1 += w[1][s] * f.values[lo + s];
                d2 += w[2][s] * f.values[lo + s];
            }
            out.value.values[i] = -d2 - (params.n - 1.0) / r[i] * d1 + potential / (r[i] * r[i]) * f.values[i];
            out.boundary[i] = (i < half || i + half >= n) ? 1 : 0;
        }
    });
    return out;
}

}  // namespace bhankel
