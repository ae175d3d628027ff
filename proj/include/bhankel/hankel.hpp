#pragma once

#include "bhankel/model.hpp"
#include "bhankel/radial.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <vector>

namespace bhankel {

/// Row-major dense matrix.
struct DenseMatrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    DenseMatrix() = default;
    DenseMatrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
    double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

    /// y = M x, rows in parallel, each row summed in ascending column order.
    void apply(const std::vector<double>& x, std::vector<double>& y) const;
};

/// Physical and spectral grid extents for data whose profile is no wider
/// than the natural Gaussian r^k exp(-r^(2-beta) / ((2-beta)^2 s)) with
/// s in [age_min, age_max].
///
/// The physical grid ends where that Gaussian at s = age_max has decayed by
/// e^-decay; the spectral grid ends where exp(-rho^(2-beta) age_min) has.
/// Both are graded in r^((2-beta)/2), the variable in which the transform
/// kernel oscillates uniformly.
struct GridDesign {
    double age_min = 1.0;
    double age_max = 1.0;
    double decay = 46.0;
    int panels = 64;
    int order = 8;
    double log_share = 0.33;
    double r_min = 1e-5;
};

struct GridPair {
    GridPtr physical;
    GridPtr spectral;
};

GridPair design_grids(const ModelParams& params, const GridDesign& design);

/// Kernels of the transform pair:
///   U(w) = w^((2-n-2beta)/2) J_mu(s0 w^c),  V(w) = w^((2-n)/2) J_mu(s0 w^c)
/// with c = (2-beta)/2 and s0 = 2/(2-beta).
double kernel_U(double w, const ModelParams& params);
double kernel_V(double w, const ModelParams& params);

/// Precomputed quadrature matrices of the forward and inverse transform.
///   U(i,j) = U(r_j rho_i) r_j^(n-1) w_j    (spectral rows, physical columns)
///   V(i,j) = V(rho_j r_i) rho_j^(n-1) w_j  (physical rows, spectral columns)
struct TransformPlan {
    GridPtr physical_grid;
    GridPtr spectral_grid;
    ModelParams params;
    DenseMatrix kernel_matrix_U;
    DenseMatrix kernel_matrix_V;
};

using PlanPtr = std::shared_ptr<const TransformPlan>;

/// Minimum nodes per kernel period demanded of every panel.
inline constexpr double kMinNodesPerPeriod = 8.0;

/// Throws NumericalError if some panel of either grid sees fewer than
/// kMinNodesPerPeriod nodes per period of J_mu(s0 (r rho)^c) at the largest
/// value of the other variable.
PlanPtr plan_transform(GridPtr physical, GridPtr spectral, const ModelParams& params);
PlanPtr plan_transform(const ModelParams& params, const GridDesign& design = {});

/// Smallest nodes-per-period ratio over the panels of `grid` when the other
/// variable reaches other_max.
double min_nodes_per_period(const RadialGrid& grid, double other_max, const ModelParams& params);

GridFunction hankel_forward(const GridFunction& f, const TransformPlan& plan);
GridFunction hankel_inverse(const GridFunction& F, const TransformPlan& plan);

/// Pointwise F(rho) * symbol(rho). Throws NumericalError on a non-finite
/// symbol value.
GridFunction spectral_multiply(const GridFunction& F, const std::function<double(double)>& symbol);

struct OperatorResult {
    GridFunction value;
    /// 1 where the stencil could not be centred; excluded from comparisons.
    std::vector<std::uint8_t> boundary;
};

/// A f = -f'' - (n-1)/r f' + (mu_k^2 - lambda^2)/r^2 f by finite differences
/// on `stencil` neighbouring nodes (Fornberg weights, non-uniform spacing).
OperatorResult apply_operator_A(const GridFunction& f, const ModelParams& params, int stencil = 5);

}  // namespace bhankel
