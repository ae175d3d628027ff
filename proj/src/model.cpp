#include "bhankel/model.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace bhankel {

namespace {

constexpr double kRelSlack = 1e-12;

bool strictly_less(double a, double bound) {
    if (std::isinf(bound)) return !std::isinf(a);
    return a < bound - kRelSlack * std::max(1.0, std::abs(bound));
}

bool strictly_greater(double a, double bound) {
    return a > bound + kRelSlack * std::max(1.0, std::abs(bound));
}

double inv(double x) { return std::isinf(x) ? 0.0 : 1.0 / x; }

void check_exponent(double e, const char* name) {
    if (!(e > 1.0) || std::isnan(e)) {
        throw std::invalid_argument(std::string("exponent ") + name + " must lie in (1, inf]");
    }
}

}  // namespace

ModelParams derive_params(int n, double beta, int k) {
    if (n < 2) throw std::invalid_argument("dimension n must be >= 2");
    if (k < 0) throw std::invalid_argument("harmonic degree k must be >= 0");
    if (!(beta >= 0.0 && beta <= 2.0 - kBetaGuard)) {
        throw std::invalid_argument("beta must lie in [0, 2 - 1e-3] (the weight is singular at beta = 2)");
    }
    ModelParams p;
    p.n = n;
    p.beta = beta;
    p.k = k;
    p.lambda = 0.5 * (n - 2);
    p.mu_k = p.lambda + k;
    p.mu = 2.0 * p.mu_k / (2.0 - beta);
    p.gamma = (n - beta + 2.0 * k) / (2.0 - beta);
    p.alpha = beta - k;
    return p;
}

std::string_view to_string(TripletKind kind) {
    switch (kind) {
        case TripletKind::admissible: return "admissible";
        case TripletKind::generalized: return "generalized";
        case TripletKind::neither: return "neither";
    }
    return "neither";
}

std::string_view to_string(Sign sign) {
    return sign == Sign::focusing ? "focusing" : "defocusing";
}

double admissible_m(double p, double q, const ModelParams& params) {
    if (!(q > 1.0)) throw std::invalid_argument("admissible_m requires q > 1");
    if (!(p >= q)) throw std::invalid_argument("admissible_m requires p >= q");
    const double inv_m = params.gamma * (1.0 / q - inv(p));
    if (inv_m == 0.0) return kInf;
    return 1.0 / inv_m;
}

Triplet classify_triplet(double m, double p, double q, const ModelParams& params) {
    check_exponent(m, "m");
    check_exponent(p, "p");
    check_exponent(q, "q");
    Triplet t{m, p, q, TripletKind::neither};
    if (p < q) return t;

    const double lhs = inv(m);
    const double rhs = params.gamma * (1.0 / q - inv(p));
    const bool relation = std::abs(lhs - rhs) <= kRelSlack * std::max({std::abs(lhs), std::abs(rhs), 1e-300}) ||
                          (lhs == 0.0 && rhs == 0.0);
    if (!relation) return t;

    const double n = params.n;
    const double beta = params.beta;
    const double k2 = 2.0 * params.k;

    // Admissible: p < q(n - beta + 2k)/(n + 2k - 2) when n > 2 - 2k.
    double bound_adm = kInf;
    if (strictly_greater(n, 2.0 - k2)) bound_adm = q * (n - beta + k2) / (n + k2 - 2.0);
    // Generalized: p < q(n - beta + 2k)/(n + 2k - 2q + (q-1)beta) when
    // n > 2q + (1-q)beta - 2k.
    double bound_gen = kInf;
    if (!std::isinf(q)) {
        if (strictly_greater(n, 2.0 * q + (1.0 - q) * beta - k2)) {
            bound_gen = q * (n - beta + k2) / (n + k2 - 2.0 * q + (q - 1.0) * beta);
        }
    }

    if (strictly_less(p, bound_adm)) {
        t.kind = TripletKind::admissible;
    } else if (strictly_less(p, bound_gen)) {
        t.kind = TripletKind::generalized;
    }
    return t;
}

double NonlinearitySpec::apply(double u) const {
    return sign_factor() * std::pow(std::abs(u), b) * u;
}

NonlinearitySpec make_nonlinearity(double b, Sign sign, const ModelParams& params) {
    if (!(b > 0.0)) throw std::invalid_argument("nonlinearity power b must be > 0");
    return NonlinearitySpec{b, sign, params.gamma * b};
}

}  // namespace bhankel
