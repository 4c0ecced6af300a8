#pragma once

#include <optional>
#include <vector>

namespace negrate {

// Boundary curve collocated as H(z) = ln(B/X)^2 on Chebyshev-Gauss-Lobatto
// nodes of the transformed variable, with tau = tau_max ((1+z)/2)^2.
// sign = -1 evaluates below the reference level X (upper curve / positive-rate
// single curve), sign = +1 above it (lower curve).
class BoundaryCurve {
public:
    BoundaryCurve(int m, double tau_max, double X, double sign);

    int knot_count() const { return m_; }
    double tau_max() const { return tau_max_; }
    double reference_level() const { return X_; }
    double curve_sign() const { return sign_; }
    const std::vector<double>& knots() const { return tau_; }

    // boundary price at any time-to-maturity (clamped to [0, tau_max])
    double value(double tau) const;
    std::vector<double> knot_values() const;

    // assign boundary prices at the knots; clips to B >= 1e-10, pins H(0) = 0
    void set_values(const std::vector<double>& B);

    // collocation ordinates, exposed for least-squares solvers
    std::vector<double>& ordinates() { return H_; }
    const std::vector<double>& ordinates() const { return H_; }

private:
    double interp_H(double z) const;

    int m_;
    double tau_max_, X_, sign_;
    std::vector<double> z_, tau_, H_, bw_;
};

BoundaryCurve chebyshev_boundary(const std::vector<double>& values, double tau_max,
                                 double X, double sign);

// Exercise band: upper curve always present; lower curve and crossing time
// only in the two-boundary regime. Curves live on tau in [0, tau_s] where
// tau_s = T - t_s when crossed, T otherwise.
struct DoubleBoundary {
    BoundaryCurve upper;
    std::optional<BoundaryCurve> lower;
    std::optional<double> t_s;   // calendar crossing time
};

}
