#pragma once

#include <vector>

namespace bhankel {

/// Gauss-Legendre rule on [-1, 1]: nodes ascending, weights positive.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Newton iteration on P_n from Chebyshev initial guesses; accurate to a
/// few ulps for the orders used here (n <= 512).
GaussRule gauss_legendre(int order);

/// Affine map of a rule onto [a, b]; appends to the output vectors.
void map_rule(const GaussRule& rule, double a, double b, std::vector<double>& nodes,
              std::vector<double>& weights);

/// Finite-difference weights (Fornberg 1988) for derivatives 0..max_deriv
/// at x0 from arbitrary distinct nodes. Result is indexed [deriv][node].
std::vector<std::vector<double>> fornberg_weights(double x0, const double* x, int count, int max_deriv);

}  // namespace bhankel
