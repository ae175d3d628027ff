#pragma once

#include <limits>
#include <string>
#include <string_view>

namespace bhankel {

/// Smallest admissible distance of beta from 2. Every constant in the
/// theory degenerates as beta -> 2.
inline constexpr double kBetaGuard = 1e-3;

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Model parameters for the k-th radial model of
///   u_t - |x|^beta Delta u = F(u)
/// together with every exponent derived from (n, beta, k).
struct ModelParams {
    int n = 3;          ///< spatial dimension, n >= 2
    double beta = 0.0;  ///< weight exponent, 0 <= beta <= 2 - kBetaGuard
    int k = 0;          ///< spherical harmonic degree

    double lambda = 0.0;  ///< (n-2)/2
    double mu_k = 0.0;    ///< (n-2)/2 + k
    double mu = 0.0;      ///< Bessel order 2 mu_k / (2 - beta)
    double gamma = 0.0;   ///< (n - beta + 2k) / (2 - beta); equals mu + 1
    double alpha = 0.0;   ///< beta - k

    /// (2 - beta) / 2, the exponent of the stretched Bessel argument.
    [[nodiscard]] double stretch() const { return 0.5 * (2.0 - beta); }
    /// 2 / (2 - beta), the prefactor of the stretched Bessel argument.
    [[nodiscard]] double stretch_scale() const { return 2.0 / (2.0 - beta); }
    /// Exponent of the k-weighted measure r^(2k+n-1-beta) dr.
    [[nodiscard]] double measure_exponent(int kk) const { return 2.0 * kk + n - 1.0 - beta; }

    friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

/// Throws std::invalid_argument when n < 2, k < 0 or beta is outside
/// [0, 2 - kBetaGuard].
ModelParams derive_params(int n, double beta, int k);

enum class TripletKind { admissible, generalized, neither };

std::string_view to_string(TripletKind kind);

/// Lebesgue exponent triplet (m, p, q); any of them may be +infinity.
struct Triplet {
    double m = kInf;
    double p = 2.0;
    double q = 2.0;
    TripletKind kind = TripletKind::neither;
};

/// m determined by 1/m = gamma (1/q - 1/p). Returns infinity for p == q.
double admissible_m(double p, double q, const ModelParams& params);

/// Classifies (m, p, q) against the admissible and generalized admissible
/// conditions. Upper bounds on p are strict; a p within 1e-12 (relative)
/// of its bound is rejected.
Triplet classify_triplet(double m, double p, double q, const ModelParams& params);

enum class Sign { focusing, defocusing };

std::string_view to_string(Sign sign);

/// F(u) = +|u|^b u (focusing) or -|u|^b u (defocusing).
struct NonlinearitySpec {
    double b = 1.0;
    Sign sign = Sign::focusing;
    double q0 = 0.0;  ///< critical exponent gamma * b

    [[nodiscard]] double apply(double u) const;
    [[nodiscard]] double sign_factor() const { return sign == Sign::focusing ? 1.0 : -1.0; }
};

NonlinearitySpec make_nonlinearity(double b, Sign sign, const ModelParams& params);

}  // namespace bhankel
