#pragma once

#include <stdexcept>
#include <string>
#include <vector>
#include <optional>

namespace negrate {

enum class Method {
    european,
    qdplus,
    juzhong,
    kim_fpb,
    kim_fpa,
    kim_fpbprime,
    kim_gn,
    fdm,
    bounds,
};

struct RootSolver {
    enum class Kind { newton, halley, super_halley, inverse_quadratic, c_method };
    Kind kind = Kind::halley;
    double C = 0.0;   // only used by c_method, must lie in [0,2]

    static RootSolver newton() { return {Kind::newton, 0.0}; }
    static RootSolver halley() { return {Kind::halley, 0.0}; }
    static RootSolver super_halley() { return {Kind::super_halley, 0.0}; }
    static RootSolver inverse_quadratic() { return {Kind::inverse_quadratic, 0.0}; }
    static RootSolver c_method(double C) { return {Kind::c_method, C}; }
};

// knobs shared by the boundary solvers:
//   m  collocation knots per boundary curve
//   n  fixed-point sweeps
//   l  quadrature points inside the boundary equations
//   p  quadrature points of the final pricing integral
struct SolverConfig {
    int m = 5;
    int n = 4;
    int l = 11;
    int p = 21;
    double tol = 1e-8;     // Gauss-Newton residual tolerance
    int max_iter = 100;    // Gauss-Newton iteration cap
    RootSolver root = RootSolver::super_halley();
};

struct PriceResult {
    double price = 0.0;
    double european = 0.0;
    double premium = 0.0;      // price - european
    int iterations = 0;
    double residual = 0.0;
    bool converged = true;
    bool degraded = false;     // method fell back to a weaker answer
    std::string method;
};

// raw boundary points sampled on a calendar-time grid; a gap (nullopt)
// means the solver found no boundary at that time level
struct BoundarySamples {
    std::vector<double> t;
    std::vector<std::optional<double>> value;
};

struct BandSamples {
    std::vector<double> t;
    std::vector<std::optional<double>> upper;
    std::vector<std::optional<double>> lower;
    bool crossed = false;   // upper < lower somewhere on the grid
};

// thrown by iterative solvers when the iteration cap is hit; carries the
// last two iterates so callers can inspect cycles and decide on a fallback
struct NonConvergence : std::runtime_error {
    double prev_iterate;
    double last_iterate;
    NonConvergence(const std::string& msg, double prev, double last)
        : std::runtime_error(msg), prev_iterate(prev), last_iterate(last) {}
};

} // namespace negrate
