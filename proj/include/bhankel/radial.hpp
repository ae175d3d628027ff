#pragma once

#include "bhankel/model.hpp"

#include <functional>
#include <iosfwd>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace bhankel {

/// Layout of a panelized Gauss-Legendre grid on (0, r_max].
///
/// Panel edges are equispaced in g(r) = ln r + kappa * r^far_exponent, which
/// is logarithmic near the origin and uniform in r^far_exponent far out.
/// kappa is chosen so that a fraction log_share of the g-range is taken by
/// the logarithmic part; log_share = 1 gives purely log-spaced panels.
struct GridSpec {
    double r_min = 1e-4;
    double r_max = 40.0;
    int panels = 64;
    int order = 8;
    double far_exponent = 1.0;
    double log_share = 1.0;
    /// Adds [0, r_min] as the first panel (counted in `panels`).
    bool origin_panel = false;
};

/// Immutable quadrature grid for integrals over r.
struct RadialGrid {
    GridSpec gs;
    std::vector<double> edges;    ///< panel boundaries, ascending
    std::vector<double> nodes;    ///< strictly increasing, all > 0
    std::vector<double> weights;  ///< plain weights for int f dr

    [[nodiscard]] std::size_t size() const { return nodes.size(); }
    [[nodiscard]] double lower() const { return edges.front(); }
    [[nodiscard]] double upper() const { return edges.back(); }
    [[nodiscard]] int order() const { return gs.order; }
};

using GridPtr = std::shared_ptr<const RadialGrid>;

/// Log-spaced panels between r_min and r_max, `order` nodes each.
GridPtr build_grid(double r_min, double r_max, int panels, int order);
GridPtr build_grid(const GridSpec& gs);

enum class Space { physical, spectral };

std::string_view to_string(Space space);

/// Samples of a radial (physical) or spectral function on a grid.
struct GridFunction {
    GridPtr grid;
    std::vector<double> values;
    Space space = Space::physical;
    ModelParams params;

    [[nodiscard]] std::size_t size() const { return values.size(); }
    [[nodiscard]] double node(std::size_t i) const { return grid->nodes[i]; }
};

GridFunction sample(const GridPtr& grid, const std::function<double(double)>& f, Space space,
                    const ModelParams& params);
GridFunction zeros_like(const GridFunction& f);

/// Throws std::invalid_argument unless both live on the same grid and space.
void require_compatible(const GridFunction& a, const GridFunction& b);

/// int f(r) r^w dr over the grid. Throws std::runtime_error if the sum is
/// not finite (NumericalError).
double integrate_weighted(const GridFunction& f, double weight_exponent);

/// (int |f/r^k|^p r^(2k+n-1-beta) dr)^(1/p); p = inf gives max |f/r^k|.
double lp_norm_deta(const GridFunction& f, double p, int k);

/// |f(r)| / r^k evaluated through logarithms, floored at abs_floor.
double divide_by_power(double value, double r, int k);

/// CSV with header "r,value" or "rho,value", 17 significant digits.
void write_csv(std::ostream& os, const GridFunction& f);
std::string to_csv(const GridFunction& f);

}  // namespace bhankel
