#pragma once

#include "negrate/blackscholes.hpp"
#include "negrate/types.hpp"

#include <vector>

namespace negrate {

enum class LcpSolverKind { policy_iteration, brennan_schwartz };

// space nodes concentrated around K by a sinh map, time levels uniform in sqrt(tau)
struct FdGrid {
    std::vector<double> S;     // 10m+1 ascending prices
    std::vector<double> tau;   // m+1 levels, tau[0]=0 at expiry
};

FdGrid fd_grid(double K, double sigma, double T, int m, double lo_need, double hi_need);

struct FdSolution {
    FdGrid grid;
    std::vector<double> value;     // option values at valuation time on grid.S
    double lcp_residual = 0.0;     // worst complementarity residual across all stages
    BandSamples boundary;          // filled when requested (calendar times)
};

// lo_need/hi_need extend the sinh domain so the given prices are covered
FdSolution fd_solve_range(const MarketParams& p, int m, double lo_need, double hi_need,
                          LcpSolverKind solver = LcpSolverKind::policy_iteration,
                          bool american = true, bool want_boundary = false);

FdSolution fd_solve(const MarketParams& p, int m,
                    LcpSolverKind solver = LcpSolverKind::policy_iteration,
                    bool american = true, bool want_boundary = false);

// local 4-point cubic Lagrange interpolation on the space grid
double fd_interp(const FdGrid& g, const std::vector<double>& v, double spot);

PriceResult fd_price(const MarketParams& p, int m,
                     LcpSolverKind solver = LcpSolverKind::policy_iteration,
                     bool american = true);

// exercise band per time level from the sign structure of value - payoff
BandSamples fd_boundary(const MarketParams& p, int m);

}
