#include "weingarten/rho_solver.hpp"

#include <algorithm>
#include <cmath>

#include "weingarten/errors.hpp"
#include "weingarten/numerics.hpp"
#include "weingarten/trig.hpp"

namespace weingarten {

std::string to_string(Terminal t) {
    switch (t) {
        case Terminal::ReachesOne: return "reaches-one";
        case Terminal::SlopeZero: return "slope-zero";
        case Terminal::Truncated: return "truncated";
        case Terminal::DomainBoundary: return "domain-boundary";
    }
    return "?";
}

std::string to_string(TerminalKind k) {
    switch (k) {
        case TerminalKind::SphereCap: return "sphere-cap";
        case TerminalKind::Cusp: return "cusp";
        case TerminalKind::Equator: return "equator";
        case TerminalKind::Entire: return "entire";
        case TerminalKind::Indeterminate: return "indeterminate";
    }
    return "?";
}

namespace {

void check_pair(const PairConfig& pair) {
    if (pair.W.arity != pair.family.dim)
        throw OutOfRangeError("pair: W arity " + std::to_string(pair.W.arity) +
                              " != family dimension " + std::to_string(pair.family.dim));
}

// horizontal curvature slots -α_j(s)·ρ expanded by multiplicity; slot n-1 left for ρ′
void fill_horizontal(const PairConfig& pair, double s, double rho, std::vector<double>& k) {
    k.resize(static_cast<size_t>(pair.family.dim));
    size_t slot = 0;
    for (int j = 0; j < pair.family.branch_count(); ++j) {
        const double v = -pair.family.branch_curvature(j, s) * rho;
        for (int m = 0; m < pair.family.branches[static_cast<size_t>(j)].multiplicity; ++m)
            k[slot++] = v;
    }
}

// same, at the singular origin where -α_j(s)ρ(s) → -r_j·m with m = ρ′(0)
void fill_horizontal_origin(const PairConfig& pair, double rho_prime, std::vector<double>& k) {
    k.resize(static_cast<size_t>(pair.family.dim));
    size_t slot = 0;
    for (int j = 0; j < pair.family.branch_count(); ++j) {
        const double v = -pair.family.residues[static_cast<size_t>(j)] * rho_prime;
        for (int m = 0; m < pair.family.branches[static_cast<size_t>(j)].multiplicity; ++m)
            k[slot++] = v;
    }
}

}  // namespace

double relation_residual(const PairConfig& pair, double s, double rho, double rho_prime) {
    check_pair(pair);
    std::vector<double> k;
    if (pair.family.origin_singular && s == 0.0)
        fill_horizontal_origin(pair, rho_prime, k);
    else
        fill_horizontal(pair, s, rho, k);
    k.back() = rho_prime;
    return std::fabs(pair.W.value(k, 1.0 - rho * rho) - pair.c);
}

double initial_slope(const PairConfig& pair) {
    check_pair(pair);
    const AmbientFamily& fam = pair.family;
    if (!fam.origin_singular)
        throw NonSingularFamilyError("initial_slope: family '" + fam.name +
                                     "' is not singular at s = 0");

    std::vector<double> k;
    auto g = [&](double m) {
        fill_horizontal_origin(pair, m, k);
        k.back() = m;
        return pair.W.value(k, 1.0) - pair.c;
    };

    // degenerate horizontal hyperplane: W(0,…,0,1) = c exactly
    try {
        if (std::fabs(g(0.0)) <= 1e-9) return 0.0;
    } catch (const Error&) {
        // W undefined at the origin of the cone; fine
    }

    // geometric scan upward: the first sign change gives the smallest positive root
    double prev_m = 0.0;
    bool have_prev = false;
    double prev_g = 0.0;
    double lo = 0.0, hi = 0.0;
    bool bracketed = false;
    for (double m = 1e-9; m <= 1.1e12; m *= 2.0) {
        double gm;
        try {
            gm = g(m);
        } catch (const Error&) {
            have_prev = false;
            continue;
        }
        if (gm == 0.0) return m;
        if (have_prev && prev_g * gm < 0.0) {
            lo = prev_m;
            hi = m;
            bracketed = true;
            break;
        }
        prev_m = m;
        prev_g = gm;
        have_prev = true;
    }
    if (!bracketed)
        throw NoOriginRootError("initial_slope: W(m·1, 1) = " + std::to_string(pair.c) +
                                " has no root for m in (0, 1e12]");

    auto dg = [&](double m) {
        fill_horizontal_origin(pair, m, k);
        k.back() = m;
        const std::vector<double> grad = pair.W.grad_k(k, 1.0);
        double d = grad.back();
        size_t slot = 0;
        for (int j = 0; j < fam.branch_count(); ++j)
            for (int mm = 0; mm < fam.branches[static_cast<size_t>(j)].multiplicity; ++mm)
                d += grad[slot++] * (-fam.residues[static_cast<size_t>(j)]);
        return d;
    };
    return find_root(g, lo, hi, dg, {1e-12, 1e-15, 200});
}

double step_slope(const PairConfig& pair, double s, double rho) {
    check_pair(pair);
    if (!(rho >= 0.0 && rho < 1.0))
        throw OutOfRangeError("step_slope: rho = " + std::to_string(rho) +
                              " outside [0, 1)");
    const double theta2 = 1.0 - rho * rho;

    std::vector<double> k;
    fill_horizontal(pair, s, rho, k);
    auto g = [&](double x) {
        k.back() = x;
        return pair.W.value(k, theta2) - pair.c;
    };
    auto safe_g = [&](double x) -> std::optional<double> {
        try {
            return g(x);
        } catch (const Error&) {
            return std::nullopt;
        }
    };

    // monotone bracket: track the largest x with g<0 and the smallest with g>0
    double neg_x = 0.0, pos_x = 0.0;
    bool have_neg = false, have_pos = false;
    auto offer = [&](double x, double gx) {
        if (gx < 0.0 && (!have_neg || x > neg_x)) {
            neg_x = x;
            have_neg = true;
        }
        if (gx > 0.0 && (!have_pos || x < pos_x)) {
            pos_x = x;
            have_pos = true;
        }
        if (gx == 0.0) {
            neg_x = pos_x = x;
            have_neg = have_pos = true;
        }
    };
    if (auto g0 = safe_g(0.0)) offer(0.0, *g0);
    for (double B = 1.0; !(have_neg && have_pos); B *= 2.0) {
        if (B > 1e12)
            throw NoRootError("step_slope: no root in [-1e12, 1e12] at s = " +
                              std::to_string(s) + ", rho = " + std::to_string(rho));
        if (auto gp = safe_g(B)) offer(B, *gp);
        if (have_neg && have_pos) break;
        if (auto gm = safe_g(-B)) offer(-B, *gm);
    }
    if (neg_x == pos_x) return neg_x;

    auto dg = [&](double x) {
        k.back() = x;
        return pair.W.grad_k(k, theta2).back();
    };
    const double lo = std::min(neg_x, pos_x), hi = std::max(neg_x, pos_x);
    return find_root(g, lo, hi, dg, {1e-12, 1e-15, 200});
}

namespace {

// Dormand–Prince 5(4) single trial step; exceptions from f propagate.
struct Dp45Result {
    double y;
    double err;
};

template <typename F>
Dp45Result dp45_step(F&& f, double s, double y, double h) {
    const double k1 = f(s, y);
    const double k2 = f(s + h / 5, y + h * (k1 / 5));
    const double k3 = f(s + 3 * h / 10, y + h * (3.0 / 40 * k1 + 9.0 / 40 * k2));
    const double k4 = f(s + 4 * h / 5, y + h * (44.0 / 45 * k1 - 56.0 / 15 * k2 + 32.0 / 9 * k3));
    const double k5 =
        f(s + 8 * h / 9, y + h * (19372.0 / 6561 * k1 - 25360.0 / 2187 * k2 +
                                  64448.0 / 6561 * k3 - 212.0 / 729 * k4));
    const double k6 = f(s + h, y + h * (9017.0 / 3168 * k1 - 355.0 / 33 * k2 +
                                        46732.0 / 5247 * k3 + 49.0 / 176 * k4 -
                                        5103.0 / 18656 * k5));
    const double y5 = y + h * (35.0 / 384 * k1 + 500.0 / 1113 * k3 + 125.0 / 192 * k4 -
                               2187.0 / 6784 * k5 + 11.0 / 84 * k6);
    const double k7 = f(s + h, y5);
    const double err = h * (71.0 / 57600 * k1 - 71.0 / 16695 * k3 + 71.0 / 1920 * k4 -
                            17253.0 / 339200 * k5 + 22.0 / 525 * k6 - 1.0 / 40 * k7);
    return {y5, std::fabs(err)};
}

// advance (s0,y0) to exactly s_target with adaptive steps; no recording
template <typename F>
double advance_to(F&& f, double s0, double y0, double s_target, double tol) {
    double s = s0, y = y0;
    double h = s_target - s0;
    while (s < s_target) {
        h = std::min(h, s_target - s);
        if (h < 1e-15 * std::max(1.0, std::fabs(s))) break;
        Dp45Result r{};
        bool failed = false;
        try {
            r = dp45_step(f, s, y, h);
        } catch (const Error&) {
            failed = true;
        }
        const double scale = tol * std::max({1.0, std::fabs(y), failed ? 0.0 : std::fabs(r.y)});
        if (failed || r.err > scale) {
            h *= 0.5;
            if (h < 1e-15 * std::max(1.0, std::fabs(s)))
                throw StepUnderflowError("event sub-integration step underflow at s = " +
                                         std::to_string(s));
            continue;
        }
        s += h;
        y = r.y;
        h *= 2.0;
    }
    return y;
}

// recording density: keep h ≤ κ / |d log φ′ / ds| so that second-order
// difference quotients of φ stay within 1e-4 relative of the integrand.
double record_cap(double rho, double rho_prime, double rho_pp,
                  const IntegrateOptions& opts) {
    const double th2 = std::max(1.0 - rho * rho, 1e-12);
    const double L =
        std::fabs(rho_prime) * (1.0 / std::max(rho, 1e-6) + rho / th2);
    double cap = opts.h_max;
    if (L > 0.0) cap = std::min(cap, opts.record_kappa / L);
    // |φ'''/φ'| = |ρ''/(ρθ²) + 3ρ'²/θ⁴| controls the centred-difference error
    // of the height function; without it plateaus under curvature spikes
    // (interior minima of ρ) would be recorded too sparsely.
    const double q = std::fabs(rho_pp) / (std::max(rho, 1e-6) * th2) +
                     3.0 * rho_prime * rho_prime / (th2 * th2);
    if (q > 0.0) cap = std::min(cap, 0.009 / std::sqrt(q));
    return std::max(cap, 1e-6);
}

}  // namespace

RhoSolution integrate_rho(const PairConfig& pair, Launch launch, IntegrateOptions opts) {
    check_pair(pair);
    const AmbientFamily& fam = pair.family;

    RhoSolution out;
    auto record = [&](double s, double rho, double rp) {
        out.s.push_back(s);
        out.rho.push_back(rho);
        out.rho_prime.push_back(rp);
        if (relation_residual(pair, s, rho, rp) > opts.residual_tol)
            throw Error("integrate_rho: relation residual above " +
                        std::to_string(opts.residual_tol) + " at s = " + std::to_string(s));
    };

    const double dom_hi = std::isinf(fam.s_hi) ? fam.s_hi : fam.s_hi - 1e-9;
    const double cap = std::min(opts.s_max, dom_hi);
    const bool cap_is_domain = dom_hi <= opts.s_max;

    double s, y;
    if (launch.origin) {
        const double m0 = initial_slope(pair);
        out.s_start = 0.0;
        if (m0 == 0.0) {
            // horizontal hyperplane sentinel
            out.degenerate = true;
            const double end = cap;
            const int nsamp = 51;
            for (int i = 0; i < nsamp; ++i) {
                const double si = end * i / (nsamp - 1);
                out.s.push_back(si);
                out.rho.push_back(0.0);
                out.rho_prime.push_back(0.0);
            }
            out.delta = end;
            out.terminal = Terminal::Truncated;
            out.rho_prime_at_delta = 0.0;
            out.admissibility = {true, false, false, end, end};
            return out;
        }
        record(0.0, 0.0, m0);
        s = 1e-4;  // series launch ρ = m₀·s, local error O(s³)
        y = m0 * s;
        record(s, y, step_slope(pair, s, y));
    } else {
        if (!fam.contains(launch.s0))
            throw OutOfRangeError("integrate_rho: interior launch s0 outside the family domain");
        if (!(launch.rho0 > 0.0 && launch.rho0 < 1.0))
            throw OutOfRangeError("integrate_rho: interior launch needs rho0 in (0,1)");
        out.s_start = launch.s0;
        s = launch.s0;
        y = launch.rho0;
        record(s, y, step_slope(pair, s, y));
    }

    auto F = [&pair](double ss, double yy) { return step_slope(pair, ss, yy); };
    const double one_thr = 1.0 - opts.reach_one_margin;
    double rp = out.rho_prime.back();
    double rpp_est = 0.0;
    double h = opts.h_init;
    bool done = false;

    while (!done) {
        if (cap - s <= 1e-12 * std::max(1.0, std::fabs(s))) {
            out.terminal = cap_is_domain ? Terminal::DomainBoundary : Terminal::Truncated;
            out.delta = cap;
            out.rho_prime_at_delta = rp;
            break;
        }
        h = std::min({h, record_cap(y, rp, rpp_est, opts), cap - s});
        if (h < 1e-14 * std::max(1.0, std::fabs(s)))
            throw StepUnderflowError("integrate_rho: step underflow at s = " +
                                     std::to_string(s) + ", rho = " + std::to_string(y) +
                                     ", rho' = " + std::to_string(rp));
        Dp45Result trial{};
        bool failed = false;
        try {
            trial = dp45_step(F, s, y, h);
        } catch (const Error&) {
            failed = true;
        }
        if (!failed && !std::isfinite(trial.y)) failed = true;
        const double scale =
            opts.tol * std::max({1.0, std::fabs(y), failed ? 0.0 : std::fabs(trial.y)});
        if (failed || trial.err > scale) {
            const double shrink =
                failed ? 0.5
                       : std::clamp(0.9 * std::pow(scale / trial.err, 0.2), 0.2, 0.9);
            h *= shrink;
            continue;
        }

        const double s_new = s + h;
        const double y_new = trial.y;

        // vertical tangency event: ρ crosses 1 - margin going up
        if (y_new >= one_thr) {
            double lo = s, hi = s_new;
            while (hi - lo > opts.event_tol) {
                const double mid = 0.5 * (lo + hi);
                const double ymid = advance_to(F, s, y, mid, opts.tol);
                (ymid >= one_thr ? hi : lo) = mid;
            }
            const double y_e = std::min(advance_to(F, s, y, hi, opts.tol), 1.0 - 1e-12);
            const double rp_e = step_slope(pair, hi, y_e);
            record(hi, y_e, rp_e);
            out.rho_prime_at_delta = rp_e;
            if (rp_e > opts.transversal_rho_prime) {
                out.terminal = Terminal::ReachesOne;
                // extend to the exact tangency: ds/dρ = 1/ρ′, error O(margin²)
                out.delta = hi + (1.0 - y_e) / rp_e;
            } else {
                out.terminal = Terminal::Truncated;  // asymptotic saturation
                out.saturated = true;
                out.delta = hi;
            }
            done = true;
            break;
        }

        double rp_new;
        try {
            rp_new = F(s_new, y_new);
        } catch (const Error&) {
            h *= 0.5;
            continue;
        }

        // slope-collapse event: ρ′ descends through the threshold
        if (rp > opts.slope_zero_eps && rp_new <= opts.slope_zero_eps) {
            const double rate = std::fabs(rp_new - rp) / h;
            if (rate > opts.transversal_slope_rate) {
                double lo = s, hi = s_new;
                while (hi - lo > opts.event_tol) {
                    const double mid = 0.5 * (lo + hi);
                    const double ymid = advance_to(F, s, y, mid, opts.tol);
                    (F(mid, ymid) <= opts.slope_zero_eps ? hi : lo) = mid;
                }
                const double y_e = advance_to(F, s, y, hi, opts.tol);
                const double rp_e = F(hi, y_e);
                record(hi, y_e, rp_e);
                out.delta = hi;
                out.rho_prime_at_delta = rp_e;
                out.terminal = Terminal::SlopeZero;
                done = true;
                break;
            }
            // exponentially decaying slope: not a terminal, keep going
        }

        rpp_est = std::fabs(rp_new - rp) / h;
        s = s_new;
        y = y_new;
        rp = rp_new;
        record(s, y, rp);
        h = std::min(h * std::clamp(0.9 * std::pow(scale / std::max(trial.err, 1e-300), 0.2),
                                    1.0, 5.0),
                     opts.h_max);
    }

    // admissibility over interior samples
    Admissibility adm{};
    adm.c1 = launch.origin;
    adm.c2 = true;
    adm.c3 = true;
    double worst_c2 = std::numeric_limits<double>::infinity();
    double worst_c3 = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < out.size(); ++i) {
        if (!(out.s[i] > out.s_start && out.s[i] < out.delta)) continue;
        const double margin2 = std::min(out.rho[i], 1.0 - out.rho[i]);
        if (margin2 < worst_c2) {
            worst_c2 = margin2;
            adm.c2_worst_s = out.s[i];
        }
        if (out.rho_prime[i] < worst_c3) {
            worst_c3 = out.rho_prime[i];
            adm.c3_worst_s = out.s[i];
        }
        if (!(out.rho[i] > 0.0 && out.rho[i] < 1.0)) adm.c2 = false;
        // slopes below the cancellation scale of the relation solve are
        // sign-indeterminate (genuine descents trip the SlopeZero event instead)
        if (!(out.rho_prime[i] > -1e-10)) adm.c3 = false;
    }
    out.admissibility = adm;
    return out;
}

TerminalKind classify_terminal(const RhoSolution& sol) {
    if (sol.degenerate) return TerminalKind::Indeterminate;
    switch (sol.terminal) {
        case Terminal::ReachesOne:
            return sol.rho_prime_at_delta > 0.0 ? TerminalKind::SphereCap : TerminalKind::Cusp;
        case Terminal::SlopeZero:
            return TerminalKind::Equator;
        case Terminal::Truncated:
            return (sol.admissibility.c1 && sol.admissibility.c2 && sol.admissibility.c3)
                       ? TerminalKind::Entire
                       : TerminalKind::Indeterminate;
        case Terminal::DomainBoundary:
            return TerminalKind::Indeterminate;
    }
    return TerminalKind::Indeterminate;
}

std::function<double(double)> solve_linear_tau(const LinearODECoefficients& coeffs,
                                               double s0, double tau0) {
    if (!(s0 >= coeffs.s_lo && s0 <= coeffs.s_hi))
        throw OutOfRangeError("solve_linear_tau: s0 outside the coefficient domain");
    const auto a = coeffs.a;
    const auto b = coeffs.b;
    const QuadratureOptions q{1e-12, 1e-12, 60};
    // variation of parameters: τ(s) = e^{A(s)} (τ₀ + ∫_{s0}^{s} b(u) e^{-A(u)} du),
    // A(s) = ∫_{s0}^{s} a
    return [a, b, s0, tau0, q](double s) {
        auto A = [&](double x) { return integrate(a, s0, x, q); };
        auto integrand = [&](double u) { return b(u) * std::exp(-A(u)); };
        const double I = integrate(integrand, s0, s, q);
        return std::exp(A(s)) * (tau0 + I);
    };
}

CscParameters CscParameters::make(int n, int epsilon, double c) {
    if (n < 2) throw OutOfRangeError("CscParameters: n must be >= 2");
    if (epsilon != 1 && epsilon != -1)
        throw OutOfRangeError("CscParameters: epsilon must be +1 or -1");
    CscParameters p;
    p.n = n;
    p.epsilon = epsilon;
    p.c = c;
    p.frak_c = (c - epsilon * n * (n - 1)) / (n * (n - 1));
    return p;
}

CscClosedForm csc_closed_form(CscMode mode, const CscParameters& p, double lambda) {
    const int n = p.n, eps = p.epsilon;
    const double fr = p.frak_c;
    CscClosedForm cf;

    switch (mode) {
        case CscMode::RotationalSeed: {
            if (fr < 0.0)
                throw OutOfRangeError("rotational seed needs c >= eps·n(n-1) (frak_c >= 0)");
            const double sq = std::sqrt(fr);
            cf.rho = [sq, eps](double s) { return sq * tan_e(eps, s); };
            cf.rho_prime = [sq, eps](double s) { return sq * dtan_e(eps, s); };
            cf.s_lo = 0.0;
            cf.s_hi = fiber_radius(eps);
            if (fr > 0.0 && p.c > 0.0) cf.delta = arctan_e(eps, 1.0 / sq);
            cf.limit = eps < 0 ? fr : std::nan("");
            return cf;
        }
        case CscMode::ParabolicConstant: {
            if (eps != -1) throw OutOfRangeError("parabolic modes require epsilon = -1");
            if (!(fr >= 0.0 && fr < 1.0))
                throw OutOfRangeError("parabolic constant needs -n(n-1) <= c < 0");
            const double r0 = std::sqrt(fr);
            cf.rho = [r0](double) { return r0; };
            cf.rho_prime = [](double) { return 0.0; };
            cf.s_lo = -std::numeric_limits<double>::infinity();
            cf.s_hi = std::numeric_limits<double>::infinity();
            cf.limit = fr;
            return cf;
        }
        case CscMode::ParabolicGraph: {
            if (eps != -1) throw OutOfRangeError("parabolic modes require epsilon = -1");
            if (!(fr >= 0.0 && fr < 1.0))
                throw OutOfRangeError("parabolic graph needs -n(n-1) <= c < 0");
            auto tau = [fr, n](double s) { return (1.0 - fr) * std::exp(n * s) + fr; };
            cf.rho = [tau](double s) { return std::sqrt(tau(s)); };
            cf.rho_prime = [tau, fr, n](double s) {
                return 0.5 * n * (1.0 - fr) * std::exp(n * s) / std::sqrt(tau(s));
            };
            cf.s_lo = -std::numeric_limits<double>::infinity();
            cf.s_hi = 0.0;
            cf.delta = 0.0;
            cf.limit = fr;
            return cf;
        }
        case CscMode::Hyperbolic: {
            if (eps != -1) throw OutOfRangeError("the translational mode requires epsilon = -1");
            if (!(fr >= 0.0 && fr < 1.0))
                throw OutOfRangeError("translational graph needs -n(n-1) <= c < 0");
            if (!(lambda > 0.0))
                throw OutOfRangeError("translational graph needs lambda > 0");
            const double chl = std::cosh(lambda), shl = std::sinh(lambda);
            const double boundary = std::pow(chl, n - 2) * shl * shl;
            const double chn = std::pow(chl, n);
            auto tau = [fr, n, boundary, chn](double s) {
                const double ch = std::cosh(s), sh = std::sinh(s);
                const double denom = std::pow(ch, n - 2) * sh * sh;
                return (fr * (std::pow(ch, n) - chn) + boundary) / denom;
            };
            auto tau_prime = [tau, fr, n](double s) {
                // τ′ = a τ + b on the equidistant family
                const double a = -2.0 * std::cosh(s) / std::sinh(s) - (n - 2) * std::tanh(s);
                const double b = n * fr * std::cosh(s) / std::sinh(s);
                return a * tau(s) + b;
            };
            cf.rho = [tau](double s) { return std::sqrt(tau(s)); };
            cf.rho_prime = [tau, tau_prime](double s) {
                return tau_prime(s) / (2.0 * std::sqrt(tau(s)));
            };
            cf.s_lo = lambda;
            cf.s_hi = std::numeric_limits<double>::infinity();
            cf.delta = lambda;
            cf.limit = fr;
            return cf;
        }
    }
    throw Error("csc_closed_form: unknown mode");
}

TauIntegration integrate_tau_return(const LinearODECoefficients& coeffs, double lambda,
                                    double s_cap, IntegrateOptions opts) {
    TauIntegration out;
    auto F = [&coeffs](double s, double tau) { return coeffs.a(s) * tau + coeffs.b(s); };

    const double dom_hi = std::isinf(coeffs.s_hi) ? coeffs.s_hi : coeffs.s_hi - 1e-9;
    const double cap = std::min(s_cap, dom_hi);
    double s = lambda, y = 1.0;
    double rp = F(s, y);
    out.s.push_back(s);
    out.tau.push_back(y);
    out.tau_prime.push_back(rp);
    if (rp >= 0.0)
        throw OutOfRangeError("integrate_tau_return: tau'(lambda) = " + std::to_string(rp) +
                              " >= 0; lambda is not below the annulus threshold");

    double h = opts.h_init;
    double rpp_est = 0.0;
    for (;;) {
        if (cap - s <= 1e-12 * std::max(1.0, std::fabs(s))) {
            out.returned = false;
            break;
        }
        {
            const double rho = std::sqrt(std::max(y, 1e-12));
            h = std::min({h, record_cap(rho, rp / (2.0 * rho), rpp_est, opts), cap - s});
        }
        if (h < 1e-14 * std::max(1.0, std::fabs(s)))
            throw StepUnderflowError("integrate_tau_return: step underflow at s = " +
                                     std::to_string(s));
        Dp45Result trial{};
        bool failed = false;
        try {
            trial = dp45_step(F, s, y, h);
        } catch (const Error&) {
            failed = true;
        }
        if (!failed && !std::isfinite(trial.y)) failed = true;
        const double scale =
            opts.tol * std::max({1.0, std::fabs(y), failed ? 0.0 : std::fabs(trial.y)});
        if (failed || trial.err > scale) {
            h *= failed ? 0.5 : std::clamp(0.9 * std::pow(scale / trial.err, 0.2), 0.2, 0.9);
            continue;
        }
        const double s_new = s + h, y_new = trial.y;

        // ascending return to τ = 1 (launch leaves τ=1 downward, so y < 1 here)
        if (y < 1.0 && y_new >= 1.0) {
            double lo = s, hi = s_new;
            while (hi - lo > opts.event_tol) {
                const double mid = 0.5 * (lo + hi);
                const double ymid = advance_to(F, s, y, mid, opts.tol);
                (ymid >= 1.0 ? hi : lo) = mid;
            }
            const double y_e = advance_to(F, s, y, hi, opts.tol);
            const double rp_e = F(hi, y_e);
            out.s.push_back(hi);
            out.tau.push_back(y_e);
            out.tau_prime.push_back(rp_e);
            out.returned = true;
            out.end_s = hi;
            out.end_tau = y_e;
            out.tau_prime_at_end = rp_e;
            return out;
        }
        const double rp_new = F(s_new, y_new);
        {
            const double r0 = std::sqrt(std::max(y, 1e-12));
            const double r1 = std::sqrt(std::max(y_new, 1e-12));
            rpp_est = std::fabs(rp_new / (2.0 * r1) - rp / (2.0 * r0)) / h;
        }
        s = s_new;
        y = y_new;
        rp = rp_new;
        out.s.push_back(s);
        out.tau.push_back(y);
        out.tau_prime.push_back(rp);
        h = std::min(h * std::clamp(0.9 * std::pow(scale / std::max(trial.err, 1e-300), 0.2),
                                    1.0, 5.0),
                     opts.h_max);
    }
    out.end_s = s;
    out.end_tau = y;
    out.tau_prime_at_end = rp;
    return out;
}

}  // namespace weingarten
