#include "negrate/boundary_curve.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace negrate {

BoundaryCurve::BoundaryCurve(int m, double tau_max, double X, double sign)
    : m_(m), tau_max_(tau_max), X_(X), sign_(sign) {
    if (m < 2) throw std::invalid_argument("need at least 2 collocation knots");
    if (!(tau_max > 0.0)) throw std::invalid_argument("tau_max must be positive");
    if (!(X > 0.0)) throw std::invalid_argument("reference level must be positive");
    z_.resize(m);
    tau_.resize(m);
    H_.assign(m, 0.0);
    bw_.resize(m);
    for (int i = 0; i < m; ++i) {
        z_[i] = -std::cos(M_PI * i / (m - 1));     // ascending, z[0] = -1 (tau = 0)
        const double f = (1.0 + z_[i]) / 2.0;
        tau_[i] = tau_max * f * f;
        bw_[i] = (i == 0 || i == m - 1 ? 0.5 : 1.0) * (i % 2 == 0 ? 1.0 : -1.0);
    }
}

double BoundaryCurve::interp_H(double z) const {
    // barycentric form; exact hits bypass the divided differences
    double num = 0.0, den = 0.0;
    for (int k = 0; k < m_; ++k) {
        const double diff = z - z_[k];
        if (std::abs(diff) < 1e-14) return H_[k];
        const double t = bw_[k] / diff;
        num += t * H_[k];
        den += t;
    }
    return num / den;
}

double BoundaryCurve::value(double tau) const {
    const double f = std::clamp(tau / tau_max_, 0.0, 1.0);
    const double z = 2.0 * std::sqrt(f) - 1.0;
    const double H = std::max(interp_H(z), 0.0);
    return X_ * std::exp(sign_ * std::sqrt(H));
}

std::vector<double> BoundaryCurve::knot_values() const {
    std::vector<double> out(m_);
    for (int i = 0; i < m_; ++i) out[i] = X_ * std::exp(sign_ * std::sqrt(std::max(H_[i], 0.0)));
    return out;
}

void BoundaryCurve::set_values(const std::vector<double>& B) {
    if (static_cast<int>(B.size()) != m_)
        throw std::invalid_argument("value count must match knot count");
    for (int i = 0; i < m_; ++i) {
        const double b = std::max(B[i], 1e-10);
        const double l = std::log(b / X_);
        H_[i] = l * l;
    }
    H_[0] = 0.0;   // tau = 0 is pinned to the reference level
}

BoundaryCurve chebyshev_boundary(const std::vector<double>& values, double tau_max,
                                 double X, double sign) {
    BoundaryCurve c(static_cast<int>(values.size()), tau_max, X, sign);
    c.set_values(values);
    return c;
}

}
