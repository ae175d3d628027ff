#include "doctest.h"

#include "bhankel/model.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

using namespace bhankel;

TEST_CASE("derive_params evaluates the exponent formulas") {
    auto p = derive_params(3, 0.0, 0);
    CHECK(p.lambda == doctest::Approx(0.5));
    CHECK(p.mu_k == doctest::Approx(0.5));
    CHECK(p.mu == doctest::Approx(0.5));
    CHECK(p.gamma == doctest::Approx(1.5));
    CHECK(p.alpha == doctest::Approx(0.0));

    p = derive_params(4, 1.0, 1);
    CHECK(p.lambda == doctest::Approx(1.0));
    CHECK(p.mu_k == doctest::Approx(2.0));
    CHECK(p.mu == doctest::Approx(4.0));
    CHECK(p.gamma == doctest::Approx(5.0));
    CHECK(p.alpha == doctest::Approx(0.0));

    p = derive_params(2, 1.5, 0);
    CHECK(p.lambda == 0.0);
    CHECK(p.mu == 0.0);
    CHECK(p.gamma == doctest::Approx(1.0));
    CHECK(p.alpha == doctest::Approx(1.5));
}

TEST_CASE("derived fields are reproducible and gamma = mu + 1") {
    for (int n = 2; n <= 6; ++n)
        for (double beta : {0.0, 0.3, 1.0, 1.7, 1.999})
            for (int k = 0; k <= 4; ++k) {
                const auto a = derive_params(n, beta, k);
                const auto b = derive_params(n, beta, k);
                CHECK(a == b);
                CHECK(a.gamma == doctest::Approx(a.mu + 1.0).epsilon(1e-14));
                CHECK(a.mu > -0.5);
            }
}

TEST_CASE("derive_params validation") {
    CHECK_THROWS_AS(derive_params(1, 0.0, 0), std::invalid_argument);
    CHECK_THROWS_AS(derive_params(3, -0.1, 0), std::invalid_argument);
    CHECK_THROWS_AS(derive_params(3, 2.0, 0), std::invalid_argument);
    CHECK_THROWS_AS(derive_params(3, 2.5, 0), std::invalid_argument);
    CHECK_THROWS_AS(derive_params(3, 1.0, -1), std::invalid_argument);
    CHECK_NOTHROW(derive_params(3, 2.0 - kBetaGuard, 0));
}

TEST_CASE("admissible_m") {
    const auto p = derive_params(3, 1.0, 0);
    CHECK(admissible_m(3.0, 2.0, p) == doctest::Approx(3.0));
    CHECK(admissible_m(4.0, 2.0, p) == doctest::Approx(2.0));
    CHECK(std::isinf(admissible_m(2.0, 2.0, p)));
    CHECK_THROWS_AS(admissible_m(3.0, 1.0, p), std::invalid_argument);
    CHECK_THROWS_AS(admissible_m(2.0, 3.0, p), std::invalid_argument);
}

TEST_CASE("classify_triplet examples") {
    const auto p = derive_params(3, 1.0, 0);
    CHECK(classify_triplet(3.0, 3.0, 2.0, p).kind == TripletKind::admissible);
    CHECK(classify_triplet(2.0, 4.0, 2.0, p).kind == TripletKind::generalized);
    CHECK(classify_triplet(5.0, 3.0, 2.0, p).kind == TripletKind::neither);
    // p = q, m = inf is always admissible
    CHECK(classify_triplet(kInf, 2.0, 2.0, p).kind == TripletKind::admissible);
}

TEST_CASE("classic heat triplets at beta = 0, k = 0") {
    // gamma = n/2; bound p < q n/(n-2)
    const auto p3 = derive_params(3, 0.0, 0);
    CHECK(p3.gamma == doctest::Approx(1.5));
    // q = 2, p = 5: 1/m = 1.5 (1/2 - 1/5) = 0.45; bound 6
    CHECK(classify_triplet(1.0 / 0.45, 5.0, 2.0, p3).kind == TripletKind::admissible);
    // p = 6 sits on the bound
    CHECK(classify_triplet(1.0 / (1.5 * (0.5 - 1.0 / 6.0)), 6.0, 2.0, p3).kind != TripletKind::admissible);
    const auto p4 = derive_params(4, 0.0, 0);
    CHECK(p4.gamma == doctest::Approx(2.0));
    CHECK(classify_triplet(4.0, 4.0, 2.0, p4).kind == TripletKind::neither);  // 1/m = 1/2
    CHECK(classify_triplet(2.0, 4.0, 2.0, p4).kind == TripletKind::generalized);
}

TEST_CASE("random admissible samples satisfy q < m") {
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> nd(2, 5), kd(0, 3);
    std::uniform_real_distribution<double> bd(0.0, 1.9), u(0.0, 1.0);
    int admissible = 0;
    for (int s = 0; s < 20000 && admissible < 1000; ++s) {
        const auto prm = derive_params(nd(rng), bd(rng), kd(rng));
        const double q = 1.01 + 5.0 * u(rng);
        const double p = q * (1.0 + 3.0 * u(rng));
        const double m = admissible_m(p, q, prm);
        if (!(m > 1.0)) continue;
        const auto t = classify_triplet(m, p, q, prm);
        if (t.kind == TripletKind::neither) continue;
        CHECK(t.m > 1.0);
        if (t.kind == TripletKind::admissible) {
            ++admissible;
            CHECK(q < t.m);
        }
    }
    CHECK(admissible == 1000);
}

TEST_CASE("classified triplets satisfy the exponent relation") {
    for (int n = 2; n <= 5; ++n)
        for (double beta : {0.0, 0.5, 1.0, 1.5})
            for (int k = 0; k <= 2; ++k) {
                const auto prm = derive_params(n, beta, k);
                for (double q = 1.1; q < 6.0; q += 0.37)
                    for (double f = 1.0; f < 5.0; f += 0.23) {
                        const double p = q * f;
                        const double m = admissible_m(p, q, prm);
                        if (!(m > 1.0)) continue;
                        const auto t = classify_triplet(m, p, q, prm);
                        if (t.kind != TripletKind::neither) {
                            CHECK(1.0 / t.m == doctest::Approx(prm.gamma * (1.0 / q - 1.0 / p)).epsilon(1e-12));
                        }
                    }
            }
}

TEST_CASE("nonlinearity") {
    const auto prm = derive_params(3, 1.0, 0);
    const auto f = make_nonlinearity(1.0, Sign::focusing, prm);
    CHECK(f.q0 == prm.gamma * 1.0);
    CHECK(f.apply(-2.0) == doctest::Approx(-4.0));
    const auto d = make_nonlinearity(2.0, Sign::defocusing, prm);
    CHECK(d.apply(2.0) == doctest::Approx(-8.0));
    CHECK_THROWS_AS(make_nonlinearity(0.0, Sign::focusing, prm), std::invalid_argument);
}
