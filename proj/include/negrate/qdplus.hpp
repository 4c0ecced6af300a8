#pragma once

#include "negrate/blackscholes.hpp"
#include "negrate/types.hpp"

namespace negrate {

// Coefficients of the quadratic boundary approximation at one time point.
// lambda' = dlambda/dh enters the refinement only through the product
// alpha*lambda' = +-omega^2/sq, which stays finite in the r -> 0 limit
// (where alpha and h both vanish), so that product is what is stored.
struct QDCoefficients {
    double alpha = 0.0;   // 2r/sigma^2
    double beta = 0.0;    // 2(r-q)/sigma^2
    double h = 0.0;       // 1 - exp(-r tau)
    double omega = 0.0;   // alpha/h, with the analytic 2/(sigma^2 tau) limit at r=0
    double sq = 0.0;      // sqrt((beta-1)^2 + 4 omega)
    double lambda1 = 0.0; // lower root, < 0 when omega > 0
    double lambda2 = 0.0; // upper root, > 0 when omega > 0

    double lambda(int branch) const { return branch == 1 ? lambda1 : lambda2; }
    double alpha_lambda_prime(int branch) const {
        return branch == 1 ? omega * omega / sq : -omega * omega / sq;
    }
};

// tau = T - t is the time left to maturity
QDCoefficients qd_coefficients(double r, double q, double sigma, double tau);
QDCoefficients qd_coefficients(const MarketParams& p, double t);

// Boundary equation residual for a put at asset level s, with analytic
// first and second derivatives in s. branch selects lambda1 (boundary
// below the reference, positive-rate put or negative-rate upper curve)
// or lambda2 (negative-rate lower curve).
struct ResidualTriple {
    double f;
    double fp;
    double fpp;
};

ResidualTriple qdplus_residual(double s, double K, double r, double q, double sigma,
                               double tau, int branch);
ResidualTriple qdplus_residual(double s, const MarketParams& p, double t, int branch);

struct BoundaryPointSolution {
    double s_star = 0.0;
    double a = 0.0;          // early-exercise premium coefficient (K - s*) - V_E(s*)
    int iterations = 0;      // residual evaluations, 1 when converged at entry
    double residual = 0.0;   // strike-scaled residual s*f at exit
    bool converged = false;
};

// One boundary point by the selected third-order scheme, iterating on the
// scaled residual s*f(s). Throws NonConvergence (carrying the last two
// iterates) when the iteration cap is reached; the §-style Halley 2-cycle
// is observable through that exception.
BoundaryPointSolution solve_boundary_point(const MarketParams& p, double t, int branch,
                                           double s0, RootSolver solver, double tol = 1e-6,
                                           int max_iter = 64);

// same, but with the fallback chain: retry with c_method(0.5) from the last
// iterate, then bisection on [1e-4 K, 10 K]; never throws, converged=false
// signals total failure
BoundaryPointSolution solve_boundary_point_robust(const MarketParams& p, double t, int branch,
                                                  double s0, RootSolver solver,
                                                  double tol = 1e-6, int max_iter = 64);

// Both boundary curves of a negative-rate put sampled on an ascending
// calendar-time grid. Solves warm-started backwards from the time closest
// to maturity; per-time failures become absent samples.
BandSamples qdplus_double_boundary(const MarketParams& p, const std::vector<double>& times,
                                   RootSolver solver = RootSolver::halley());

// single positive-rate put boundary on a calendar grid, same conventions
BoundarySamples qdplus_single_boundary(const MarketParams& p, const std::vector<double>& times,
                                       RootSolver solver = RootSolver::halley());

// Approximate American price built on the QD+ boundary. Under negative
// rates only the nearer boundary contributes; if the two boundary solves
// fail or cross, the European price is returned with degraded=true.
PriceResult juzhong_price(const MarketParams& p, RootSolver solver = RootSolver::halley());

} // namespace negrate
