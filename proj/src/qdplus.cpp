#include "negrate/qdplus.hpp"
#include "negrate/region.hpp"

#include <cmath>
#include <algorithm>

namespace negrate {

QDCoefficients qd_coefficients(double r, double q, double sigma, double tau) {
    if (!(tau > 0.0)) throw std::domain_error("qd_coefficients needs tau > 0");
    const double sig2 = sigma * sigma;
    QDCoefficients c;
    c.alpha = 2.0 * r / sig2;
    c.beta = 2.0 * (r - q) / sig2;
    c.h = -std::expm1(-r * tau);
    c.omega = std::abs(r) > 1e-14 ? c.alpha / c.h : 2.0 / (sig2 * tau);
    const double disc = (c.beta - 1.0) * (c.beta - 1.0) + 4.0 * c.omega;
    if (disc < 0.0) throw std::domain_error("complex lambda roots");
    c.sq = std::sqrt(disc);
    c.lambda1 = 0.5 * (-(c.beta - 1.0) - c.sq);
    c.lambda2 = 0.5 * (-(c.beta - 1.0) + c.sq);
    return c;
}

QDCoefficients qd_coefficients(const MarketParams& p, double t) {
    return qd_coefficients(p.r, p.q, p.sigma, p.T - t);
}

ResidualTriple qdplus_residual(double s, double K, double r, double q, double sigma,
                               double tau, int branch) {
    if (!(s > 0.0)) throw std::domain_error("boundary residual needs s > 0");
    const QDCoefficients c = qd_coefficients(r, q, sigma, tau);
    const double lam = c.lambda(branch);
    const double M = 2.0 * lam + c.beta - 1.0;
    const double alamp = c.alpha_lambda_prime(branch);
    const double sig2 = sigma * sigma;

    const double w = sigma * std::sqrt(tau);
    const double d1 = (std::log(s / K) + (r - q) * tau) / w + 0.5 * w;
    const double d2 = d1 - w;
    const double eq = std::exp(-q * tau);
    const double er = std::exp(-r * tau);
    const double p1 = norm_pdf(d1);
    const double cnd1 = norm_cdf(-d1);
    const double cnd2 = norm_cdf(-d2);
    const double u = 1.0 / (s * w);

    const double A = eq * cnd1;                 // exp(-q tau) Phi(-d1), = -dVE/ds for a put
    const double G = eq * p1 * u;               // gamma
    const double Ap = -G;
    const double App = (G / s) * (d1 / w + 1.0);

    const double VE = K * er * cnd2 - s * eq * cnd1;
    const double P = K - s - VE;                // early-exercise premium at the boundary
    if (P == 0.0) throw std::domain_error("premium vanishes at this asset level");
    const double Pp = A - 1.0;
    const double Ppp = -G;

    // calendar theta and its first two derivatives in s
    const double k1 = sigma * eq / (2.0 * std::sqrt(tau));
    const double Th = -k1 * s * p1 - q * eq * s * cnd1 + r * K * er * cnd2;
    const double Thp = -k1 * p1 * (1.0 - d1 / w) - q * eq * cnd1 + (q - r) * eq * p1 / w;
    const double Thpp = eq * p1 * u * ((sigma / (2.0 * std::sqrt(tau))) * (d1 * (1.0 - d1 / w) + 1.0 / w)
                                       + q - (q - r) * d1 / w);

    const double fac = std::exp(r * tau);
    const double rho = Th * fac / P;
    const double rhop = Thp * fac / P - rho * Pp / P;
    const double rhopp = Thpp * fac / P - 2.0 * rhop * Pp / P - rho * Ppp / P;

    const double cc = (1.0 - c.h) / M;
    const double c0 = -cc * (c.omega - (2.0 / sig2) * rho + alamp / M);
    const double c0p = cc * (2.0 / sig2) * rhop;
    const double c0pp = cc * (2.0 / sig2) * rhopp;

    const double g = P / s;
    const double gp = Pp / s - P / (s * s);
    const double gpp = Ppp / s - 2.0 * Pp / (s * s) + 2.0 * P / (s * s * s);

    ResidualTriple out;
    out.f = 1.0 - A + (lam + c0) * g;
    out.fp = -Ap + c0p * g + (lam + c0) * gp;
    out.fpp = -App + c0pp * g + 2.0 * c0p * gp + (lam + c0) * gpp;
    return out;
}

ResidualTriple qdplus_residual(double s, const MarketParams& p, double t, int branch) {
    return qdplus_residual(s, p.K, p.r, p.q, p.sigma, p.T - t, branch);
}

namespace {

// strike-scaled residual ft = s*f with its analytic derivatives; scaling
// removes the 1/s of the premium term and makes tolerances price-like
ResidualTriple scaled_residual(double s, double K, double r, double q, double sigma,
                               double tau, int branch) {
    const ResidualTriple rt = qdplus_residual(s, K, r, q, sigma, tau, branch);
    return {s * rt.f, rt.f + s * rt.fp, 2.0 * rt.fp + s * rt.fpp};
}

double premium_at(double s, double K, double r, double q, double sigma, double tau) {
    return (K - s) - european_put(s, K, r, q, sigma, tau);
}

} // namespace

BoundaryPointSolution solve_boundary_point(const MarketParams& p, double t, int branch,
                                           double s0, RootSolver solver, double tol,
                                           int max_iter) {
    if (!(s0 > 0.0)) throw std::domain_error("initial guess must be positive");
    if (!(tol > 0.0)) throw std::domain_error("tolerance must be positive");
    const double tau = p.T - t;
    double s = s0;
    double prev = s0;
    for (int it = 0; it < max_iter; ++it) {
        const ResidualTriple rt = scaled_residual(s, p.K, p.r, p.q, p.sigma, tau, branch);
        if (std::abs(rt.f) <= tol) {
            BoundaryPointSolution sol;
            sol.s_star = s;
            sol.a = premium_at(s, p.K, p.r, p.q, p.sigma, tau);
            sol.iterations = it + 1;
            sol.residual = rt.f;
            sol.converged = true;
            return sol;
        }
        const double L = rt.f * rt.fpp / (rt.fp * rt.fp);
        double step;
        switch (solver.kind) {
            case RootSolver::Kind::newton:
                step = -rt.f / rt.fp;
                break;
            case RootSolver::Kind::halley:
                step = -1.0 / (1.0 - 0.5 * L) * rt.f / rt.fp;
                break;
            case RootSolver::Kind::super_halley:
                step = -(1.0 + L / (2.0 * (1.0 - L))) * rt.f / rt.fp;
                break;
            case RootSolver::Kind::inverse_quadratic:
                step = -(1.0 + 0.5 * L) * rt.f / rt.fp;
                break;
            case RootSolver::Kind::c_method:
            default:
                step = -(1.0 + 0.5 * L + solver.C * L * L) * rt.f / rt.fp;
                break;
        }
        prev = s;
        s += step;
        if (s <= 0.0) s = (s - step) / 2.0;   // retract to half the previous iterate
    }
    throw NonConvergence("boundary solve hit the iteration cap", prev, s);
}

BoundaryPointSolution solve_boundary_point_robust(const MarketParams& p, double t, int branch,
                                                  double s0, RootSolver solver, double tol,
                                                  int max_iter) {
    try {
        return solve_boundary_point(p, t, branch, s0, solver, tol, max_iter);
    } catch (const NonConvergence& nc) {
        try {
            return solve_boundary_point(p, t, branch, nc.last_iterate,
                                        RootSolver::c_method(0.5), tol, max_iter);
        } catch (const NonConvergence&) {
            // bisection on the scaled residual over a wide bracket
            const double tau = p.T - t;
            double a = 1e-4 * p.K, b = 10.0 * p.K;
            double fa = scaled_residual(a, p.K, p.r, p.q, p.sigma, tau, branch).f;
            double fb = scaled_residual(b, p.K, p.r, p.q, p.sigma, tau, branch).f;
            BoundaryPointSolution sol;
            if (fa * fb > 0.0) {
                sol.s_star = s0;
                sol.iterations = 2 * max_iter + 2;
                sol.residual = fa;
                sol.converged = false;
                return sol;
            }
            int evals = 2;
            double mid = 0.5 * (a + b), fm = fa;
            for (int it = 0; it < 200; ++it) {
                mid = 0.5 * (a + b);
                fm = scaled_residual(mid, p.K, p.r, p.q, p.sigma, tau, branch).f;
                ++evals;
                if (std::abs(fm) <= tol || b - a < 1e-12 * p.K) break;
                if (fa * fm <= 0.0) {
                    b = mid;
                    fb = fm;
                } else {
                    a = mid;
                    fa = fm;
                }
            }
            sol.s_star = mid;
            sol.a = premium_at(mid, p.K, p.r, p.q, p.sigma, tau);
            sol.iterations = 2 * max_iter + evals;
            sol.residual = fm;
            sol.converged = std::abs(fm) <= tol;
            return sol;
        }
    }
}

namespace {

double lower_guess(double K, double r, double q) {
    return q != 0.0 ? K * std::min(1.0, r / q) : K;
}

} // namespace

BandSamples qdplus_double_boundary(const MarketParams& p, const std::vector<double>& times,
                                   RootSolver solver) {
    p.validate();
    if (p.kind != OptionKind::put)
        throw std::domain_error("double boundary is stated for puts; use symmetric_put_params");
    const auto rc = classify(p.kind, p.r, p.q);
    if (rc.never_optimal) throw std::domain_error("never-optimal regime has no boundary");
    if (!rc.double_boundary_possible) throw std::domain_error("single-boundary regime");

    BandSamples out;
    out.t = times;
    out.upper.assign(times.size(), std::nullopt);
    out.lower.assign(times.size(), std::nullopt);

    double gu = p.K;
    double gl = lower_guess(p.K, p.r, p.q);
    for (size_t k = times.size(); k-- > 0;) {   // backward sweep, warm-started
        const double t = times[k];
        if (!(t < p.T)) continue;
        auto su = solve_boundary_point_robust(p, t, 1, gu, solver);
        auto sl = solve_boundary_point_robust(p, t, 2, gl, solver);
        if (su.converged) {
            out.upper[k] = su.s_star;
            gu = su.s_star;
        }
        if (sl.converged) {
            out.lower[k] = sl.s_star;
            gl = sl.s_star;
        }
        if (su.converged && sl.converged && su.s_star < sl.s_star) out.crossed = true;
    }
    return out;
}

BoundarySamples qdplus_single_boundary(const MarketParams& p, const std::vector<double>& times,
                                       RootSolver solver) {
    p.validate();
    if (p.kind != OptionKind::put)
        throw std::domain_error("boundary sampling is stated for puts; use symmetric_put_params");
    const auto rc = classify(p.kind, p.r, p.q);
    if (rc.never_optimal) throw std::domain_error("never-optimal regime has no boundary");
    if (rc.double_boundary_possible) throw std::domain_error("double-boundary regime");

    BoundarySamples out;
    out.t = times;
    out.value.assign(times.size(), std::nullopt);
    double g = p.q > 0.0 ? p.K * std::min(1.0, p.r / p.q) : p.K;
    for (size_t k = times.size(); k-- > 0;) {
        const double t = times[k];
        if (!(t < p.T)) continue;
        auto s = solve_boundary_point_robust(p, t, 1, g, solver);
        if (s.converged) {
            out.value[k] = s.s_star;
            g = s.s_star;
        }
    }
    return out;
}

namespace {

// refined approximate price from one boundary point (put form)
double refined_price(double S, double K, double r, double q, double sigma, double T,
                     double s_star, int branch) {
    const QDCoefficients c = qd_coefficients(r, q, sigma, T);
    const double lam = c.lambda(branch);
    const double M = 2.0 * lam + c.beta - 1.0;
    const double VE = european_put(S, K, r, q, sigma, T);

    const double hA = premium_at(s_star, K, r, q, sigma, T);
    const double theta_scaled = [&] {
        MarketParams bp{s_star, K, r, q, sigma, T, OptionKind::put};
        return european_theta(bp) * std::exp(r * T);
    }();
    const double c0 = -((1.0 - c.h) / M) *
                      (c.omega - (2.0 / (sigma * sigma)) * theta_scaled / hA +
                       c.alpha_lambda_prime(branch) / M);
    const double b = (1.0 - c.h) * c.alpha_lambda_prime(branch) / (2.0 * M);
    const double x = std::log(S / s_star);
    const double chi = b * x * x + c0 * x;
    return VE + (hA / (1.0 - chi)) * std::pow(S / s_star, lam);
}

} // namespace

PriceResult juzhong_price(const MarketParams& p, RootSolver solver) {
    p.validate();
    if (p.kind == OptionKind::call) {
        PriceResult r = juzhong_price(symmetric_put_params(p), solver);
        r.method = "juzhong";
        return r;
    }

    PriceResult res;
    res.method = "juzhong";
    res.european = european_price(p);
    const auto rc = classify(p.kind, p.r, p.q);
    if (rc.never_optimal) {
        res.price = res.european;
        return res;
    }

    if (!rc.double_boundary_possible) {
        // single boundary below the strike
        const double g = p.q > 0.0 ? p.K * std::min(1.0, p.r / p.q) : p.K;
        const auto sol = solve_boundary_point_robust(p, 0.0, 1, g, solver);
        res.iterations = sol.iterations;
        res.residual = sol.residual;
        res.converged = sol.converged;
        if (!sol.converged) {
            res.price = res.european;
            res.degraded = true;
            return res;
        }
        res.price = p.S <= sol.s_star ? p.K - p.S
                                      : refined_price(p.S, p.K, p.r, p.q, p.sigma, p.T,
                                                      sol.s_star, 1);
        res.premium = res.price - res.european;
        return res;
    }

    // negative-rate band: price from the nearer boundary only
    const auto su = solve_boundary_point_robust(p, 0.0, 1, p.K, solver);
    const auto sl = solve_boundary_point_robust(p, 0.0, 2, lower_guess(p.K, p.r, p.q), solver);
    res.iterations = su.iterations + sl.iterations;
    res.residual = std::max(std::abs(su.residual), std::abs(sl.residual));
    res.converged = su.converged && sl.converged;
    if (!res.converged || su.s_star <= sl.s_star) {
        res.price = res.european;
        res.degraded = true;
        return res;
    }
    if (p.S >= su.s_star)
        res.price = refined_price(p.S, p.K, p.r, p.q, p.sigma, p.T, su.s_star, 1);
    else if (p.S <= sl.s_star)
        res.price = refined_price(p.S, p.K, p.r, p.q, p.sigma, p.T, sl.s_star, 2);
    else
        res.price = p.K - p.S;
    res.premium = res.price - res.european;
    return res;
}

} // namespace negrate
