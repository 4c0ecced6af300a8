#pragma once

#include "negrate/blackscholes.hpp"

#include <array>
#include <optional>

namespace negrate {

// exercise-regime classification in the (r, q) plane
struct RegionClass {
    bool never_optimal = false;            // early exercise never pays; American = European
    bool double_boundary_possible = false; // exercise region is a band between two boundaries
    bool battauz_holds = false;            // sufficient condition for two boundaries to exist
};

// The sufficient condition needs sigma; pass it when available, otherwise
// battauz_holds is reported false and only the (r, q) classification is made.
RegionClass classify(OptionKind kind, double r, double q, double sigma = 0.0);

// the triple (r < 0, r - q - sigma^2/2 > 0, (r - q - sigma^2/2)^2 + 2 r sigma^2 > 0)
std::array<bool, 3> battauz_condition(double r, double q, double sigma);

// boundary values at expiry for a put: u(T-) = K, l(T-) = K*min(1, r/q).
// l_limit is absent when q = 0 (the ratio is unbounded; that regime is
// never-optimal anyway, so the value is never needed).
struct MaturityLimits {
    double u_limit = 0.0;
    std::optional<double> l_limit;
};

MaturityLimits maturity_limits(double K, double r, double q);

// near-expiry asymptotics of the two put boundaries in the double-boundary
// regime; t is calendar time < T. Throws std::domain_error outside the
// regime or where the log argument of the upper formula turns <= 0.
struct AsymptoticBoundaries {
    double u_star = 0.0;
    double l_star = 0.0;
};

AsymptoticBoundaries asymptotic_boundaries(const MarketParams& p, double t);

} // namespace negrate
