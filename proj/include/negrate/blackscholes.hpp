#pragma once

#include <complex>
#include <stdexcept>

namespace negrate {

enum class OptionKind { call, put };

struct MarketParams {
    double S = 0.0;   // spot
    double K = 0.0;   // strike
    double r = 0.0;   // continuously compounded rate, any sign
    double q = 0.0;   // dividend yield, any sign
    double sigma = 0.0;
    double T = 0.0;   // maturity in years
    OptionKind kind = OptionKind::put;

    void validate() const;
    double eta() const { return kind == OptionKind::call ? 1.0 : -1.0; }
};

// standard normal density and CDF
double norm_pdf(double x);
double norm_cdf(double x);

struct D1D2 {
    double d1;
    double d2;
    double tau;
};

// d1/d2 for asset level x against reference level b over year-fraction tau
D1D2 d1d2(double x, double b, double r, double q, double sigma, double tau);

double european_price(const MarketParams& p);
double european_put(double S, double K, double r, double q, double sigma, double T);
double european_call(double S, double K, double r, double q, double sigma, double T);

// calendar-time derivative dV/dt at fixed maturity (so dV/dT = -theta)
double european_theta(const MarketParams& p);

// maps a call to the put with swapped (S,K) and (r,q); American prices coincide
MarketParams symmetric_put_params(const MarketParams& p);

// complementary error function for complex argument.
// Relative error <= 1e-12 for |Im z| <= 50 wherever the value fits in a double;
// erfc(z) + erfc(-z) = 2 up to rounding of the final subtraction.
std::complex<double> complex_erfc(std::complex<double> z);

// normal CDF of a complex argument, Phi(w) = erfc(-w/sqrt(2))/2
std::complex<double> norm_cdf_complex(std::complex<double> w);

} // namespace negrate
