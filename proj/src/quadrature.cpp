#include "negrate/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace negrate {

Quadrature tanh_sinh01(int points, double tmax) {
    if (points < 3) throw std::invalid_argument("tanh_sinh01 needs at least 3 points");
    const int M = (points - 1) / 2;
    const double h = tmax / M;
    Quadrature rule;
    rule.x.reserve(2 * M + 1);
    rule.w.reserve(2 * M + 1);
    for (int k = -M; k <= M; ++k) {
        const double t = k * h;
        const double u = 0.5 * M_PI * std::sinh(t);
        const double s = 1.0 / (1.0 + std::exp(-2.0 * u));
        const double c = std::cosh(u);
        const double w = h * 0.5 * M_PI * std::cosh(t) / (c * c);
        rule.x.push_back(s);
        rule.w.push_back(0.5 * w);   // jacobian of [-1,1] -> [0,1]
    }
    return rule;
}

double integrate01(const std::function<double(double)>& f, const Quadrature& rule) {
    double acc = 0.0;
    for (size_t i = 0; i < rule.x.size(); ++i) acc += rule.w[i] * f(rule.x[i]);
    return acc;
}

double tanh_sinh_integrate(const std::function<double(double)>& f, double a, double b,
                           int points, double tmax) {
    const Quadrature rule = tanh_sinh01(points, tmax);
    const double len = b - a;
    double acc = 0.0;
    for (size_t i = 0; i < rule.x.size(); ++i) acc += rule.w[i] * f(a + len * rule.x[i]);
    return acc * len;
}

} // namespace negrate
