#pragma once

#include <vector>
#include <functional>

namespace negrate {

// fixed tanh-sinh rule on [0,1]; integrates endpoint square-root
// singularities to near machine precision with a few dozen points
struct Quadrature {
    std::vector<double> x;
    std::vector<double> w;
};

Quadrature tanh_sinh01(int points, double tmax = 3.2);

double integrate01(const std::function<double(double)>& f, const Quadrature& rule);

// convenience wrapper on [a, b]
double tanh_sinh_integrate(const std::function<double(double)>& f, double a, double b,
                           int points, double tmax = 3.2);

} // namespace negrate
