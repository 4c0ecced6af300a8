#include "negrate/fdm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <stdexcept>

namespace negrate {

namespace {

const double kGamma = 2.0 - std::sqrt(2.0);

struct Tridiag {
    std::vector<double> lo, di, up;
};

// Black-Scholes generator on the non-uniform grid; central 3-point stencil
// inside, first-order linearity rows at the ends (second derivative dropped)
Tridiag operator_rows(const std::vector<double>& S, double r, double q, double sigma) {
    const int n = static_cast<int>(S.size());
    Tridiag A{std::vector<double>(n, 0.0), std::vector<double>(n, 0.0),
              std::vector<double>(n, 0.0)};
    for (int i = 0; i < n; ++i) {
        if (i > 0 && i < n - 1) {
            const double hm = S[i] - S[i - 1];
            const double hp = S[i + 1] - S[i];
            const double a = 0.5 * sigma * sigma * S[i] * S[i];
            const double b = (r - q) * S[i];
            A.lo[i] = (2.0 * a - b * hp) / (hm * (hm + hp));
            A.di[i] = (-2.0 * a + b * (hp - hm)) / (hm * hp) - r;
            A.up[i] = (2.0 * a + b * hm) / (hp * (hm + hp));
        } else if (i == 0) {
            const double h = S[1] - S[0];
            const double b = (r - q) * S[0];
            A.di[i] = -b / h - r;
            A.up[i] = b / h;
        } else {
            const double h = S[n - 1] - S[n - 2];
            const double b = (r - q) * S[n - 1];
            A.lo[i] = -b / h;
            A.di[i] = b / h - r;
        }
    }
    return A;
}

std::vector<double> apply_tri(const Tridiag& A, const std::vector<double>& v) {
    const int n = static_cast<int>(v.size());
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) {
        double s = A.di[i] * v[i];
        if (i > 0) s += A.lo[i] * v[i - 1];
        if (i < n - 1) s += A.up[i] * v[i + 1];
        out[i] = s;
    }
    return out;
}

// Thomas algorithm; the stepping matrices are near-identity so no pivoting
std::vector<double> solve_tri(std::vector<double> lo, std::vector<double> di,
                              std::vector<double> up, std::vector<double> b) {
    const int n = static_cast<int>(b.size());
    for (int i = 1; i < n; ++i) {
        const double w = lo[i] / di[i - 1];
        di[i] -= w * up[i - 1];
        b[i] -= w * b[i - 1];
    }
    std::vector<double> v(n);
    v[n - 1] = b[n - 1] / di[n - 1];
    for (int i = n - 2; i >= 0; --i) v[i] = (b[i] - up[i] * v[i + 1]) / di[i];
    return v;
}

struct LcpOut {
    std::vector<double> v;
    double residual = 0.0;
};

// min(Mv - rhs, v - g) = 0 by policy iteration on the active (exercised) set
LcpOut solve_lcp_policy(const Tridiag& M, const std::vector<double>& rhs,
                        const std::vector<double>& g, double tol = 1e-10, int maxit = 50) {
    const int n = static_cast<int>(rhs.size());
    std::vector<char> active(n, 0);
    LcpOut out;
    for (int it = 0; it < maxit; ++it) {
        std::vector<double> lo(n), di(n), up(n), b(n);
        for (int i = 0; i < n; ++i) {
            lo[i] = active[i] ? 0.0 : M.lo[i];
            di[i] = active[i] ? 1.0 : M.di[i];
            up[i] = active[i] ? 0.0 : M.up[i];
            b[i] = active[i] ? g[i] : rhs[i];
        }
        out.v = solve_tri(std::move(lo), std::move(di), std::move(up), std::move(b));
        const std::vector<double> Mv = apply_tri(M, out.v);
        double resid = 0.0;
        std::vector<char> next(n, 0);
        for (int i = 0; i < n; ++i) {
            const double a = Mv[i] - rhs[i];
            const double c = out.v[i] - g[i];
            resid = std::max(resid, std::abs(std::min(a, c)));
            next[i] = c < a;
        }
        out.residual = resid;
        if (resid <= tol) return out;
        if (next == active) return out;
        active = std::move(next);
    }
    return out;
}

// put: eliminate the super-diagonal from the top, substitute upward clamping to
// the payoff; call: mirrored sweep. Exact when the continuation region is one-sided.
LcpOut solve_lcp_brennan(const Tridiag& M, const std::vector<double>& rhs0,
                         const std::vector<double>& g, OptionKind kind) {
    const int n = static_cast<int>(rhs0.size());
    std::vector<double> lo = M.lo, di = M.di, up = M.up, rhs = rhs0;
    LcpOut out;
    out.v.resize(n);
    if (kind == OptionKind::put) {
        for (int i = n - 2; i >= 0; --i) {
            const double w = up[i] / di[i + 1];
            di[i] -= w * lo[i + 1];
            rhs[i] -= w * rhs[i + 1];
        }
        out.v[0] = std::max(rhs[0] / di[0], g[0]);
        for (int i = 1; i < n; ++i)
            out.v[i] = std::max((rhs[i] - lo[i] * out.v[i - 1]) / di[i], g[i]);
    } else {
        for (int i = 1; i < n; ++i) {
            const double w = lo[i] / di[i - 1];
            di[i] -= w * up[i - 1];
            rhs[i] -= w * rhs[i - 1];
        }
        out.v[n - 1] = std::max(rhs[n - 1] / di[n - 1], g[n - 1]);
        for (int i = n - 2; i >= 0; --i)
            out.v[i] = std::max((rhs[i] - up[i] * out.v[i + 1]) / di[i], g[i]);
    }
    const std::vector<double> Mv = apply_tri(M, out.v);
    double resid = 0.0;
    for (int i = 0; i < n; ++i)
        resid = std::max(resid, std::abs(std::min(Mv[i] - rhs0[i], out.v[i] - g[i])));
    out.residual = resid;
    return out;
}

std::vector<double> payoff_cell_avg(const std::vector<double>& S, double K, OptionKind kind) {
    // intrinsic everywhere except the strike-straddling cell, which gets the
    // cell average of the kink (plain nodal values elsewhere keep exercised-node
    // detection exact on the non-uniform grid)
    const int n = static_cast<int>(S.size());
    std::vector<double> v(n);
    for (int i = 0; i < n; ++i)
        v[i] = kind == OptionKind::put ? std::max(K - S[i], 0.0) : std::max(S[i] - K, 0.0);
    for (int i = 0; i < n; ++i) {
        const double a = 0.5 * ((i > 0 ? S[i - 1] : S[i]) + S[i]);
        const double b = 0.5 * ((i < n - 1 ? S[i + 1] : S[i]) + S[i]);
        if (a < K && K < b) {
            v[i] = kind == OptionKind::put ? (K - a) * (K - a) / (2.0 * (b - a))
                                           : (b - K) * (b - K) / (2.0 * (b - a));
        }
    }
    return v;
}

struct Frontier {
    std::optional<double> lower, upper;
};

// exercise band from the sign structure of value - payoff, with linear
// sub-node refinement toward the continuation side
Frontier extract_band(const std::vector<double>& S, const std::vector<double>& v,
                      const std::vector<double>& g) {
    const int n = static_cast<int>(S.size());
    int il = -1, iu = -1;
    for (int i = 0; i < n; ++i) {
        if (v[i] - g[i] <= 1e-12 && g[i] > 0.0) {
            if (il < 0) il = i;
            iu = i;
        }
    }
    if (il < 0) return {};
    std::vector<double> d(n);
    for (int i = 0; i < n; ++i) d[i] = v[i] - g[i];
    double u = S[iu];
    if (iu + 1 < n && d[iu + 1] > d[iu]) {
        const double t = d[iu + 1] != d[iu] ? (0.0 - d[iu]) / (d[iu + 1] - d[iu]) : 0.0;
        u = S[iu] + t * (S[iu + 1] - S[iu]);
    }
    double l = S[il];
    if (il - 1 >= 0 && d[il - 1] > d[il]) {
        const double t = d[il - 1] != d[il] ? (0.0 - d[il]) / (d[il - 1] - d[il]) : 0.0;
        l = S[il] - t * (S[il] - S[il - 1]);
    }
    return {l, u};
}

}  // namespace

FdGrid fd_grid(double K, double sigma, double T, int m, double lo_need, double hi_need) {
    if (m < 2) throw std::invalid_argument("need at least 2 time steps");
    const int n = 10 * m;
    const double c = K * sigma * std::sqrt(T) / 4.0;
    const double lo = std::min(K * std::exp(-5.0 * sigma * std::sqrt(T)), lo_need);
    const double hi = std::max(K * std::exp(5.0 * sigma * std::sqrt(T)), hi_need);
    const double xa = std::asinh((lo - K) / c);
    const double xb = std::asinh((hi - K) / c);
    FdGrid g;
    g.S.resize(n + 1);
    for (int i = 0; i <= n; ++i) {
        const double xi = xa + (xb - xa) * i / n;
        g.S[i] = K + c * std::sinh(xi);
    }
    g.tau.resize(m + 1);
    for (int k = 0; k <= m; ++k) {
        const double f = static_cast<double>(k) / m;
        g.tau[k] = T * f * f;
    }
    return g;
}

FdSolution fd_solve_range(const MarketParams& p, int m, double lo_need, double hi_need,
                          LcpSolverKind solver, bool american, bool want_boundary) {
    p.validate();
    if (solver == LcpSolverKind::brennan_schwartz && p.r < 0.0)
        throw std::invalid_argument(
            "brennan_schwartz assumes a one-sided exercise region; use policy_iteration "
            "when r < 0");
    FdSolution sol;
    sol.grid = fd_grid(p.K, p.sigma, p.T, m, lo_need, hi_need);
    const std::vector<double>& S = sol.grid.S;
    const int n = static_cast<int>(S.size());
    std::vector<double> g(n);
    for (int i = 0; i < n; ++i)
        g[i] = p.kind == OptionKind::put ? std::max(p.K - S[i], 0.0)
                                         : std::max(S[i] - p.K, 0.0);
    std::vector<double> v = payoff_cell_avg(S, p.K, p.kind);
    const Tridiag A = operator_rows(S, p.r, p.q, p.sigma);

    auto step = [&](double w, const std::vector<double>& rhs) {
        Tridiag M;
        M.lo.resize(n);
        M.di.resize(n);
        M.up.resize(n);
        for (int i = 0; i < n; ++i) {
            M.lo[i] = -w * A.lo[i];
            M.di[i] = 1.0 - w * A.di[i];
            M.up[i] = -w * A.up[i];
        }
        if (!american) {
            LcpOut out;
            out.v = solve_tri(M.lo, M.di, M.up, rhs);
            return out;
        }
        if (solver == LcpSolverKind::brennan_schwartz)
            return solve_lcp_brennan(M, rhs, g, p.kind);
        return solve_lcp_policy(M, rhs, g);
    };

    if (want_boundary) sol.boundary.t.reserve(m);
    for (int k = 0; k < m; ++k) {
        const double dt = sol.grid.tau[k + 1] - sol.grid.tau[k];

        std::vector<double> Av = apply_tri(A, v);
        std::vector<double> rhs(n);
        const double w = 0.5 * kGamma * dt;
        for (int i = 0; i < n; ++i) rhs[i] = v[i] + w * Av[i];
        LcpOut tr = step(w, rhs);
        sol.lcp_residual = std::max(sol.lcp_residual, tr.residual);

        const double w2 = (1.0 - kGamma) / (2.0 - kGamma) * dt;
        const double c1 = 1.0 / (kGamma * (2.0 - kGamma));
        const double c2 = (1.0 - kGamma) * (1.0 - kGamma) / (kGamma * (2.0 - kGamma));
        for (int i = 0; i < n; ++i) rhs[i] = c1 * tr.v[i] - c2 * v[i];
        LcpOut bdf = step(w2, rhs);
        sol.lcp_residual = std::max(sol.lcp_residual, bdf.residual);
        v = std::move(bdf.v);

        if (want_boundary) {
            const Frontier f = extract_band(S, v, g);
            sol.boundary.t.push_back(p.T - sol.grid.tau[k + 1]);
            sol.boundary.lower.push_back(f.lower);
            sol.boundary.upper.push_back(f.upper);
        }
    }
    if (want_boundary) {
        bool any = false, last_absent = true;
        for (size_t k = 0; k < sol.boundary.t.size(); ++k) {
            const bool present = sol.boundary.upper[k].has_value();
            any = any || present;
            last_absent = !present;
        }
        sol.boundary.crossed = any && last_absent;
    }
    sol.value = std::move(v);
    return sol;
}

FdSolution fd_solve(const MarketParams& p, int m, LcpSolverKind solver, bool american,
                    bool want_boundary) {
    const double lo_need = std::min(p.K / 4.0, p.S);
    const double hi_need = std::max(2.0 * p.K, p.S);
    return fd_solve_range(p, m, lo_need, hi_need, solver, american, want_boundary);
}

double fd_interp(const FdGrid& g, const std::vector<double>& v, double spot) {
    const int n = static_cast<int>(g.S.size());
    if (n < 4) throw std::invalid_argument("grid too small to interpolate");
    const int i = static_cast<int>(std::lower_bound(g.S.begin(), g.S.end(), spot) -
                                   g.S.begin());
    const int i0 = std::min(std::max(i - 2, 0), n - 4);
    double out = 0.0;
    for (int a = 0; a < 4; ++a) {
        double w = 1.0;
        for (int b = 0; b < 4; ++b)
            if (a != b) w *= (spot - g.S[i0 + b]) / (g.S[i0 + a] - g.S[i0 + b]);
        out += w * v[i0 + a];
    }
    return out;
}

PriceResult fd_price(const MarketParams& p, int m, LcpSolverKind solver, bool american) {
    const FdSolution sol = fd_solve(p, m, solver, american);
    PriceResult res;
    res.european = european_price(p);
    res.price = fd_interp(sol.grid, sol.value, p.S);
    res.premium = res.price - res.european;
    res.iterations = m;
    res.residual = sol.lcp_residual;
    res.converged = sol.lcp_residual <= 1e-8;
    res.method = "fdm";
    return res;
}

BandSamples fd_boundary(const MarketParams& p, int m) {
    FdSolution sol = fd_solve(p, m, LcpSolverKind::policy_iteration, true, true);
    return std::move(sol.boundary);
}

}
