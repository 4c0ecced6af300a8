#include "doctest.h"
#include "negrate/fdm.hpp"

#include <array>
#include <cmath>
#include <vector>

#define CHECK_NEAR(a, b, tol) CHECK(std::abs((a) - (b)) <= (tol))

using namespace negrate;

static MarketParams put_p(double S, double K, double r, double q, double sigma, double T) {
    return {S, K, r, q, sigma, T, OptionKind::put};
}

TEST_CASE("grid structure") {
    const FdGrid g = fd_grid(100.0, 0.2, 1.0, 20, 25.0, 200.0);
    CHECK(g.S.size() == 201);
    CHECK(g.tau.size() == 21);
    CHECK(g.S.front() <= 25.0 + 1e-9);
    CHECK(g.S.back() >= 200.0 - 1e-9);
    for (size_t i = 1; i < g.S.size(); ++i) CHECK(g.S[i] > g.S[i - 1]);
    // strike bracketed by interior nodes
    bool bracketed = false;
    for (size_t i = 1; i + 2 < g.S.size(); ++i)
        if (g.S[i] < 100.0 && 100.0 < g.S[i + 1]) bracketed = true;
    CHECK(bracketed);
    // sqrt-uniform time levels
    CHECK(g.tau.front() == 0.0);
    CHECK(g.tau.back() == doctest::Approx(1.0));
    CHECK(g.tau[10] == doctest::Approx(0.25));
}

TEST_CASE("cubic interpolation is exact on cubics") {
    FdGrid g = fd_grid(100.0, 0.3, 2.0, 10, 25.0, 200.0);
    std::vector<double> v(g.S.size());
    for (size_t i = 0; i < g.S.size(); ++i) {
        const double s = g.S[i];
        v[i] = 2.0 + 0.5 * s - 0.01 * s * s + 1e-4 * s * s * s;
    }
    for (double s : {26.0, 60.5, 99.7, 100.0, 148.2, 199.0}) {
        const double exact = 2.0 + 0.5 * s - 0.01 * s * s + 1e-4 * s * s * s;
        CHECK(fd_interp(g, v, s) == doctest::Approx(exact).epsilon(1e-12));
    }
}

TEST_CASE("European mode converges to the closed form") {
    for (auto [r, q, sigma, T] : std::vector<std::array<double, 4>>{
             {0.10, 0.01, 0.10, 3.0}, {-0.005, -0.01, 0.08, 15.0}, {-0.01, -0.03, 0.22, 5.0}}) {
        const MarketParams p = put_p(100, 100, r, q, sigma, T);
        const PriceResult res =
            fd_price(p, 400, LcpSolverKind::policy_iteration, /*american=*/false);
        CHECK_NEAR(res.price, european_price(p), 1e-3);
    }
}

TEST_CASE("positive-rate American anchor") {
    const PriceResult res = fd_price(put_p(100, 100, 0.10, 0.01, 0.10, 3.0), 400);
    CHECK_NEAR(res.price, 1.94358, 5e-4);
    CHECK(res.residual <= 1e-10);
}

TEST_CASE("negative-rate American reference cells") {
    struct Cell {
        double r, q, sigma, T, S, want;
    };
    const std::vector<Cell> cells = {
        {-0.005, -0.01, 0.08, 10, 100, 8.598},  {-0.005, -0.01, 0.08, 10, 120, 2.952},
        {-0.005, -0.01, 0.08, 15, 100, 10.287}, {-0.005, -0.01, 0.08, 15, 120, 4.410},
        {-0.005, -0.01, 0.08, 20, 100, 11.684}, {-0.005, -0.01, 0.08, 20, 120, 5.687},
        {-0.01, -0.03, 0.22, 3, 100, 13.321},   {-0.01, -0.03, 0.22, 3, 120, 7.102},
        {-0.01, -0.03, 0.22, 5, 100, 16.763},   {-0.01, -0.03, 0.22, 5, 120, 10.525},
        {-0.01, -0.03, 0.22, 7, 100, 19.494},   {-0.01, -0.03, 0.22, 7, 120, 13.315},
    };
    for (const Cell& c : cells) {
        const PriceResult res = fd_price(put_p(c.S, 100, c.r, c.q, c.sigma, c.T), 400);
        CHECK_NEAR(res.price, c.want, 2e-3);
    }
}

TEST_CASE("LCP complementarity holds at every stage") {
    for (auto [r, q, sigma, T] : std::vector<std::array<double, 4>>{
             {0.05, 0.02, 0.25, 1.0}, {-0.005, -0.01, 0.08, 10.0}}) {
        const FdSolution sol = fd_solve(put_p(100, 100, r, q, sigma, T), 50);
        CHECK(sol.lcp_residual <= 1e-10);
    }
}

TEST_CASE("Brennan-Schwartz matches policy iteration on one-sided problems") {
    const MarketParams p = put_p(100, 100, 0.06, 0.02, 0.3, 1.5);
    const double a = fd_price(p, 100, LcpSolverKind::policy_iteration).price;
    const double b = fd_price(p, 100, LcpSolverKind::brennan_schwartz).price;
    CHECK_NEAR(a, b, 1e-9);

    MarketParams c{100, 100, 0.02, 0.05, 0.3, 1.5, OptionKind::call};
    const double ac = fd_price(c, 100, LcpSolverKind::policy_iteration).price;
    const double bc = fd_price(c, 100, LcpSolverKind::brennan_schwartz).price;
    CHECK_NEAR(ac, bc, 1e-9);
}

TEST_CASE("Brennan-Schwartz is rejected for negative rates") {
    CHECK_THROWS_AS(fd_price(put_p(100, 100, -0.005, -0.01, 0.08, 10.0), 50,
                             LcpSolverKind::brennan_schwartz),
                    std::invalid_argument);
}

TEST_CASE("American dominates European and intrinsic") {
    for (double r : {0.04, -0.005}) {
        const double q = r > 0 ? 0.02 : -0.01;
        for (double S : {60.0, 100.0, 140.0}) {
            const MarketParams p = put_p(S, 100, r, q, 0.2, 2.0);
            const PriceResult res = fd_price(p, 100);
            CHECK(res.price >= res.european - 1e-6);
            CHECK(res.price >= std::max(100.0 - S, 0.0) - 1e-6);
        }
    }
}

TEST_CASE("low-volatility band is wide and pinned at its limits") {
    const MarketParams p = put_p(100, 100, -0.005, -0.01, 0.04, 5.0);
    const BandSamples band = fd_boundary(p, 200);
    REQUIRE(!band.t.empty());
    CHECK_FALSE(band.crossed);
    // first sample sits next to expiry: limits K and rK/q
    REQUIRE(band.upper.front().has_value());
    REQUIRE(band.lower.front().has_value());
    CHECK_NEAR(*band.upper.front(), 100.0, 0.25);
    CHECK_NEAR(*band.lower.front(), 50.0, 0.25);
    // every level has a band and the band never closes
    for (size_t k = 0; k < band.t.size(); ++k) {
        REQUIRE(band.upper[k].has_value());
        REQUIRE(band.lower[k].has_value());
        CHECK(*band.upper[k] > *band.lower[k]);
    }
}

TEST_CASE("higher volatility closes the exercise region before a known date") {
    const MarketParams p = put_p(100, 100, -0.005, -0.01, 0.15, 5.0);
    const BandSamples band = fd_boundary(p, 200);
    CHECK(band.crossed);
    // largest calendar time with an empty exercise region ~ 2.4
    double t_edge = 0.0;
    bool seen_present = false;
    for (size_t k = 0; k < band.t.size(); ++k) {
        if (band.upper[k].has_value()) seen_present = true;
        if (seen_present && !band.upper[k].has_value()) t_edge = std::max(t_edge, band.t[k]);
    }
    CHECK_NEAR(t_edge, 2.4, 0.3);
}
