#include "doctest.h"

#include "bhankel/radial.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

using namespace bhankel;

TEST_CASE("build_grid layout") {
    auto g = build_grid(1e-4, 20.0, 1, 2);
    REQUIRE(g->size() == 2);
    CHECK(g->nodes[0] > 1e-4);
    CHECK(g->nodes[1] < 20.0);

    g = build_grid(1e-4, 20.0, 64, 8);
    REQUIRE(g->size() == 512);
    double sum = 0.0;
    for (std::size_t i = 0; i < g->size(); ++i) {
        if (i > 0) CHECK(g->nodes[i] > g->nodes[i - 1]);
        CHECK(g->weights[i] > 0.0);
        sum += g->weights[i];
    }
    CHECK(sum == doctest::Approx(20.0 - 1e-4).epsilon(1e-10));
    // log spacing: equal panel ratios
    CHECK(g->edges[1] / g->edges[0] == doctest::Approx(g->edges[40] / g->edges[39]).epsilon(1e-9));

    CHECK_THROWS_AS(build_grid(0.0, 1.0, 4, 4), std::invalid_argument);
    CHECK_THROWS_AS(build_grid(1.0, 0.5, 4, 4), std::invalid_argument);
    CHECK_THROWS_AS(build_grid(1e-3, 1.0, 0, 4), std::invalid_argument);
    CHECK_THROWS_AS(build_grid(1e-3, 1.0, 4, 1), std::invalid_argument);
}

TEST_CASE("graded grid with origin panel") {
    GridSpec s;
    s.r_min = 1e-3;
    s.r_max = 30.0;
    s.panels = 40;
    s.order = 10;
    s.far_exponent = 0.5;
    s.log_share = 0.3;
    s.origin_panel = true;
    auto g = build_grid(s);
    CHECK(g->size() == 400);
    CHECK(g->lower() == 0.0);
    double sum = 0.0;
    for (double w : g->weights) sum += w;
    CHECK(sum == doctest::Approx(30.0).epsilon(1e-12));
    for (std::size_t i = 1; i < g->edges.size(); ++i) CHECK(g->edges[i] > g->edges[i - 1]);
    // far panels are near-uniform in sqrt(r)
    const auto& e = g->edges;
    const double d1 = std::sqrt(e[e.size() - 1]) - std::sqrt(e[e.size() - 2]);
    const double d2 = std::sqrt(e[e.size() - 2]) - std::sqrt(e[e.size() - 3]);
    CHECK(d1 / d2 == doctest::Approx(1.0).epsilon(0.05));
}

TEST_CASE("quadrature of 1/r on [1, e]") {
    auto g = build_grid(1.0, std::numbers::e, 4, 8);
    ModelParams p = derive_params(2, 0.0, 0);
    auto f = sample(g, [](double r) { return 1.0 / r; }, Space::physical, p);
    CHECK(integrate_weighted(f, 0.0) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("integrate_weighted Gaussian moments") {
    auto g = build_grid(1e-4, 40.0, 64, 8);
    auto p = derive_params(3, 1.0, 0);
    auto f = sample(g, [](double r) { return std::exp(-r * r); }, Space::physical, p);
    CHECK(integrate_weighted(f, p.n - 1 - p.beta) == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(integrate_weighted(f, 2.0) == doctest::Approx(std::sqrt(std::numbers::pi) / 4).epsilon(1e-10));
    CHECK(integrate_weighted(zeros_like(f), 2.0) == 0.0);

    auto bad = f;
    bad.values[3] = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(integrate_weighted(bad, 2.0), std::runtime_error);
}

TEST_CASE("refinement stability") {
    auto p = derive_params(3, 0.0, 0);
    auto gauss = [](double r) { return std::exp(-r * r); };
    auto a = integrate_weighted(sample(build_grid(1e-4, 40.0, 64, 8), gauss, Space::physical, p), 2.0);
    auto b = integrate_weighted(sample(build_grid(1e-4, 40.0, 128, 8), gauss, Space::physical, p), 2.0);
    CHECK(std::abs(a - b) <= 1e-10 * std::abs(b));
}

TEST_CASE("lp_norm_deta") {
    auto g = build_grid(1e-4, 40.0, 64, 8);
    auto p = derive_params(3, 1.0, 0);
    auto f = sample(g, [](double r) { return std::exp(-r * r); }, Space::physical, p);
    CHECK(lp_norm_deta(f, 2.0, 0) == doctest::Approx(0.5).epsilon(1e-8));
    CHECK(lp_norm_deta(zeros_like(f), 3.0, 0) == 0.0);
    CHECK(lp_norm_deta(f, kInf, 0) == doctest::Approx(1.0).epsilon(1e-7));
    CHECK_THROWS_AS(lp_norm_deta(f, 0.5, 0), std::invalid_argument);

    auto p0 = derive_params(3, 0.0, 1);
    auto h = sample(g, [](double r) { return r * std::exp(-r * r); }, Space::physical, p0);
    // int_0^inf r^4 e^{-2 r^2} dr = 3 sqrt(pi) / (8 * 2^{5/2})
    const double ref = std::sqrt(3.0 * std::sqrt(std::numbers::pi) / (8.0 * std::pow(2.0, 2.5)));
    CHECK(lp_norm_deta(h, 2.0, 1) == doctest::Approx(ref).epsilon(1e-10));
}

TEST_CASE("Hoelder inequality on random smooth functions") {
    auto g = build_grid(1e-4, 40.0, 64, 8);
    auto prm = derive_params(3, 0.5, 0);
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0.2, 2.0);
    for (int trial = 0; trial < 50; ++trial) {
        const double a = u(rng), b = u(rng), c = u(rng), d = u(rng);
        auto f = sample(g, [&](double r) { return (1 + c * r) * std::exp(-a * r * r); }, Space::physical, prm);
        auto h = sample(g, [&](double r) { return std::cos(d * r) * std::exp(-b * r); }, Space::physical, prm);
        auto fh = f;
        for (std::size_t i = 0; i < fh.size(); ++i) fh.values[i] *= h.values[i];
        const double pp = 1.0 + 3.0 * u(rng) / 2.0;
        const double pq = pp / (pp - 1.0);
        CHECK(lp_norm_deta(fh, 1.0, 0) <= lp_norm_deta(f, pp, 0) * lp_norm_deta(h, pq, 0) * (1 + 1e-12));
    }
}

TEST_CASE("truncation audit for Gaussians") {
    // mass of r^2 e^{-r^2} beyond 40 and below 1e-4 relative to the total
    const double total = std::sqrt(std::numbers::pi) / 4;
    const double tail_hi = 40.0 * std::exp(-1600.0) / 2;  // leading term of the upper tail
    const double tail_lo = std::pow(1e-4, 3) / 3;
    CHECK((tail_hi + tail_lo) / total < 1e-11);
}

TEST_CASE("csv serialization") {
    auto g = build_grid(1.0, 2.0, 1, 2);
    auto p = derive_params(2, 0.0, 0);
    auto f = sample(g, [](double r) { return r; }, Space::spectral, p);
    const auto csv = to_csv(f);
    CHECK(csv.rfind("rho,value\n", 0) == 0);
    f.space = Space::physical;
    CHECK(to_csv(f).rfind("r,value\n", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 3);
}
