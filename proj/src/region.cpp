#include "negrate/region.hpp"

#include <cmath>

namespace negrate {

std::array<bool, 3> battauz_condition(double r, double q, double sigma) {
    const double a = r - q - 0.5 * sigma * sigma;
    return {r < 0.0, a > 0.0, a * a + 2.0 * r * sigma * sigma > 0.0};
}

RegionClass classify(OptionKind kind, double r, double q, double sigma) {
    RegionClass rc;
    if (kind == OptionKind::put) {
        rc.never_optimal = (r <= 0.0 && r <= q);
        rc.double_boundary_possible = (r < 0.0 && !rc.never_optimal);
    } else {
        rc.never_optimal = (q <= 0.0 && q <= r);
        rc.double_boundary_possible = (q < 0.0 && !rc.never_optimal);
    }
    if (sigma > 0.0 && rc.double_boundary_possible) {
        // stated for puts; the call case goes through the symmetry swap
        const double rr = kind == OptionKind::put ? r : q;
        const double qq = kind == OptionKind::put ? q : r;
        const auto b = battauz_condition(rr, qq, sigma);
        rc.battauz_holds = b[0] && b[1] && b[2];
    }
    return rc;
}

MaturityLimits maturity_limits(double K, double r, double q) {
    MaturityLimits ml;
    ml.u_limit = K;
    if (q != 0.0) ml.l_limit = K * std::min(1.0, r / q);
    return ml;
}

AsymptoticBoundaries asymptotic_boundaries(const MarketParams& p, double t) {
    p.validate();
    const auto rc = classify(p.kind, p.r, p.q);
    if (p.kind != OptionKind::put || !rc.double_boundary_possible)
        throw std::domain_error("asymptotic boundaries defined for double-boundary puts only");
    if (!(t < p.T)) throw std::domain_error("need t < T");

    const double dt = p.T - t;
    const double drift = p.r - p.q;
    const double sig2 = p.sigma * p.sigma;
    const double logarg = sig2 / (8.0 * M_PI * dt * drift * drift);
    if (!(logarg > 1.0))
        throw std::domain_error("upper-boundary asymptotic undefined this far from expiry");

    static const double alpha0 = 0.451723;
    AsymptoticBoundaries ab;
    ab.u_star = p.K - p.K * p.sigma * std::sqrt(dt * std::log(logarg));
    ab.l_star = (p.r * p.K / p.q) * (1.0 + alpha0 * p.sigma * std::sqrt(2.0 * dt));
    return ab;
}

} // namespace negrate
