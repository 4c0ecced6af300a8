#include "doctest.h"
#include "negrate/quadrature.hpp"

#include <cmath>

// absolute-tolerance comparison used where published values are rounded
#define CHECK_NEAR(a, b, tol) CHECK(std::abs((a) - (b)) <= (tol))

using namespace negrate;

TEST_CASE("polynomials up to degree 3 are exact to 1e-12 at 31 points") {
    const auto rule = tanh_sinh01(31);
    CHECK_NEAR(integrate01([](double) { return 1.0; }, rule), 1.0, 1e-13);
    CHECK_NEAR(integrate01([](double x) { return x; }, rule), 0.5, 1e-13);
    CHECK_NEAR(integrate01([](double x) { return x * x * x; }, rule), 0.25, 1e-12);
    CHECK_NEAR(integrate01([](double x) { return 1.0 - 2.0 * x + 3.0 * x * x - x * x * x; }, rule),
               0.75, 1e-12);
}

TEST_CASE("accuracy at the pricing default of 21 points") {
    // h is fixed by the point count, so 21 points carries ~1e-8 discretization
    // error on smooth integrands; the boundary-approximation error dominates it
    const auto rule = tanh_sinh01(21);
    CHECK_NEAR(integrate01([](double) { return 1.0; }, rule), 1.0, 1e-9);
    CHECK_NEAR(integrate01([](double x) { return x * x * x; }, rule), 0.25, 1e-7);
    CHECK_NEAR(integrate01([](double x) { return std::pow(x, 1.5); }, rule), 0.4, 1e-8);
}

TEST_CASE("endpoint square-root singularity") {
    const auto rule = tanh_sinh01(21);
    CHECK_NEAR(integrate01([](double x) { return 1.0 / std::sqrt(x); }, rule), 2.0, 1e-10);
}

TEST_CASE("node layout") {
    for (int n : {11, 15, 21, 31}) {
        const auto rule = tanh_sinh01(n);
        CHECK(rule.x.size() == rule.w.size());
        CHECK(rule.x.size() == size_t(n % 2 ? n : n - 1));
        for (size_t i = 0; i < rule.x.size(); ++i) {
            CHECK(rule.x[i] > 0.0);
            // the top-end node rounds to exactly 1.0 in double precision;
            // integrand code must tolerate evaluation at the endpoint
            CHECK(rule.x[i] <= 1.0);
            CHECK(rule.w[i] > 0.0);
        }
        CHECK(rule.x.front() < 1e-10);
        CHECK(rule.x.back() == 1.0);
    }
}

TEST_CASE("interval wrapper") {
    CHECK_NEAR(tanh_sinh_integrate([](double x) { return std::exp(x); }, 0.0, 1.0, 21),
               std::exp(1.0) - 1.0, 1e-9);
    CHECK_NEAR(tanh_sinh_integrate([](double x) { return x; }, 2.0, 5.0, 21), 10.5, 1e-8);
    CHECK_THROWS(tanh_sinh01(2));
}
