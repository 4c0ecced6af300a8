#include "negrate/blackscholes.hpp"

#include <cmath>
#include <limits>

namespace negrate {

void MarketParams::validate() const {
    if (!(S > 0.0)) throw std::domain_error("spot must be positive");
    if (!(K > 0.0)) throw std::domain_error("strike must be positive");
    if (!(sigma > 0.0)) throw std::domain_error("vol must be positive");
    if (!(T > 0.0)) throw std::domain_error("maturity must be positive");
}

double norm_pdf(double x) {
    static const double inv_sqrt_2pi = 0.3989422804014326779;
    return inv_sqrt_2pi * std::exp(-0.5 * x * x);
}

double norm_cdf(double x) {
    static const double inv_sqrt2 = 0.7071067811865475244;
    return 0.5 * std::erfc(-x * inv_sqrt2);
}

D1D2 d1d2(double x, double b, double r, double q, double sigma, double tau) {
    const double w = sigma * std::sqrt(tau);
    const double d1 = (std::log(x / b) + (r - q + 0.5 * sigma * sigma) * tau) / w;
    return {d1, d1 - w, tau};
}

double european_put(double S, double K, double r, double q, double sigma, double T) {
    const auto d = d1d2(S, K, r, q, sigma, T);
    return K * std::exp(-r * T) * norm_cdf(-d.d2) - S * std::exp(-q * T) * norm_cdf(-d.d1);
}

double european_call(double S, double K, double r, double q, double sigma, double T) {
    const auto d = d1d2(S, K, r, q, sigma, T);
    return S * std::exp(-q * T) * norm_cdf(d.d1) - K * std::exp(-r * T) * norm_cdf(d.d2);
}

double european_price(const MarketParams& p) {
    p.validate();
    return p.kind == OptionKind::call ? european_call(p.S, p.K, p.r, p.q, p.sigma, p.T)
                                      : european_put(p.S, p.K, p.r, p.q, p.sigma, p.T);
}

double european_theta(const MarketParams& p) {
    p.validate();
    const auto d = d1d2(p.S, p.K, p.r, p.q, p.sigma, p.T);
    const double dfq = std::exp(-p.q * p.T);
    const double dfr = std::exp(-p.r * p.T);
    // dV/dT, then flip sign for the calendar-time convention
    double dVdT = p.S * dfq * norm_pdf(d.d1) * p.sigma / (2.0 * std::sqrt(p.T));
    if (p.kind == OptionKind::call) {
        dVdT += -p.q * p.S * dfq * norm_cdf(d.d1) + p.r * p.K * dfr * norm_cdf(d.d2);
    } else {
        dVdT += p.q * p.S * dfq * norm_cdf(-d.d1) - p.r * p.K * dfr * norm_cdf(-d.d2);
    }
    return -dVdT;
}

MarketParams symmetric_put_params(const MarketParams& p) {
    if (p.kind != OptionKind::call) throw std::domain_error("symmetric_put_params expects a call");
    MarketParams s = p;
    s.S = p.K;
    s.K = p.S;
    s.r = p.q;
    s.q = p.r;
    s.kind = OptionKind::put;
    return s;
}

namespace {

using cplx = std::complex<double>;

const double two_over_sqrt_pi = 1.1283791670955125739;

// Maclaurin series of erf, adequate to machine precision for |z| <= 1
cplx erfc_series(cplx z) {
    const cplx z2 = z * z;
    cplx term = z;
    cplx sum = z;
    for (int n = 1; n <= 25; ++n) {
        term *= -z2 / static_cast<double>(n);
        sum += term / static_cast<double>(2 * n + 1);
    }
    return 1.0 - two_over_sqrt_pi * sum;
}

// both the expansion and its pole-correction term have poles at z = i*h*Z;
// near the imaginary axis pick h so the lattice stays away from z
double pick_h(cplx z) {
    if (std::abs(z.real()) >= 0.05) return 0.5;
    const double y = std::abs(z.imag());
    for (int j = 0; j < 20; ++j) {
        const double h = 0.5 * (1.0 - 0.013 * j);
        const double m = y / h;
        if (std::abs(m - std::round(m)) * h > 0.1) return h;
    }
    return 0.5;
}

// trapezoidal expansion with pole correction, Re z >= 0:
// erfc(z) = e^{-z^2} (h z/pi) [1/z^2 + 2 sum_k e^{-k^2 h^2}/(k^2 h^2 + z^2)]
//           + 2/(1 - e^{2 pi z/h})
cplx erfc_trapezoid(cplx z, double h) {
    const int n = static_cast<int>(std::ceil(7.3 / h)) + 1;
    const cplx z2 = z * z;
    cplx s = 1.0 / z2;
    for (int k = 1; k <= n; ++k) {
        const double kh2 = (k * h) * (k * h);
        s += 2.0 * std::exp(-kh2) / (kh2 + z2);
    }
    const cplx w = (h / M_PI) * z * s;
    cplx val(0.0, 0.0);
    if (w != cplx(0.0, 0.0)) {
        // keep the exponent and prefactor fused: e^{-z^2} alone can overflow
        // while the product is still representable
        const cplx ex = -z2 + std::log(w);
        if (ex.real() > 709.0) {
            const double huge = std::numeric_limits<double>::infinity();
            val = cplx(huge * std::cos(ex.imag()), huge * std::sin(ex.imag()));
        } else {
            val = std::exp(ex);
        }
    }
    if (z.real() <= 7.0) val += 2.0 / (1.0 - std::exp(2.0 * M_PI * z / h));
    return val;
}

} // namespace

std::complex<double> complex_erfc(std::complex<double> z) {
    if (z.imag() == 0.0) return {std::erfc(z.real()), 0.0};
    if (z.real() < 0.0) return 2.0 - complex_erfc(-z);
    if (std::abs(z) <= 1.0) return erfc_series(z);
    return erfc_trapezoid(z, pick_h(z));
}

std::complex<double> norm_cdf_complex(std::complex<double> w) {
    static const double inv_sqrt2 = 0.7071067811865475244;
    return 0.5 * complex_erfc(-w * inv_sqrt2);
}

} // namespace negrate
