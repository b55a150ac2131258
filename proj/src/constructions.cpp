#include "weingarten/constructions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <string>

#include "weingarten/errors.hpp"
#include "weingarten/numerics.hpp"
#include "weingarten/trig.hpp"

namespace weingarten {

namespace {

// Closed-form grids use the same density rule as the integrator's recorder,
// so downstream quadrature and finite-difference audits see comparable meshes.
void walk_closed_form(const std::function<double(double)>& rho,
                      const std::function<double(double)>& rho_prime, double s_lo, double s_hi,
                      std::vector<double>& S, std::vector<double>& R, std::vector<double>& RP) {
    const double h_max = 0.05, kappa = 0.01, kappa2 = 0.009;
    double s = s_lo;
    S.push_back(s);
    R.push_back(rho(s));
    RP.push_back(rho_prime(s));
    while (s < s_hi) {
        double y = R.back(), rp = RP.back();
        const double th2 = std::max(1.0 - y * y, 1e-12);
        double L = std::abs(rp) * (1.0 / std::max(y, 1e-6) + y / th2);
        double h = kappa / std::max(L, kappa / h_max);
        // same curvature control as the integrator's recording rule, with
        // ρ'' from a centred difference of the closed-form slope
        const double e = 1e-5;
        const double a = std::max(s - e, s_lo), b = std::min(s + e, s_hi);
        const double rpp = b > a ? (rho_prime(b) - rho_prime(a)) / (b - a) : 0.0;
        const double q =
            std::abs(rpp) / (std::max(y, 1e-6) * th2) + 3.0 * rp * rp / (th2 * th2);
        if (q > 0.0) h = std::min(h, kappa2 / std::sqrt(q));
        h = std::clamp(h, 1e-6, h_max);
        s = (s + h >= s_hi - 1e-12) ? s_hi : s + h;
        S.push_back(s);
        R.push_back(std::min(rho(s), 1.0));
        RP.push_back(rho_prime(s));
    }
}

RhoSolution solution_from_grid(std::vector<double> s, std::vector<double> rho,
                               std::vector<double> rho_prime, Terminal terminal,
                               double rho_prime_at_delta) {
    RhoSolution sol;
    sol.s = std::move(s);
    sol.rho = std::move(rho);
    sol.rho_prime = std::move(rho_prime);
    sol.s_start = sol.s.front();
    sol.delta = sol.s.back();
    sol.terminal = terminal;
    sol.rho_prime_at_delta = rho_prime_at_delta;

    auto& adm = sol.admissibility;
    adm.c1 = sol.s_start == 0.0 && sol.rho.front() == 0.0;
    adm.c2 = true;
    adm.c3 = true;
    double margin = std::numeric_limits<double>::infinity(), slope = margin;
    for (size_t i = 1; i + 1 < sol.size(); ++i) {
        double m = std::min(sol.rho[i], 1.0 - sol.rho[i]);
        if (m < margin) {
            margin = m;
            adm.c2_worst_s = sol.s[i];
        }
        if (sol.rho_prime[i] < slope) {
            slope = sol.rho_prime[i];
            adm.c3_worst_s = sol.s[i];
        }
    }
    adm.c2 = margin > 0.0;
    adm.c3 = slope > -1e-10;
    return sol;
}

ModelInfo make_info(const std::string& construction, int n, int epsilon, double c) {
    ModelInfo info;
    info.construction = construction;
    info.w_name = "WS";
    info.n = n;
    info.epsilon = epsilon;
    info.c = c;
    return info;
}

}  // namespace

LinearODECoefficients csc_tau_coefficients(FamilyKind kind, int n, int epsilon, double c) {
    CscParameters p = CscParameters::make(n, epsilon, c);
    LinearODECoefficients co;
    switch (kind) {
        case FamilyKind::GeodesicSpheres:
            co.a = [n, epsilon](double s) {
                return -(n - 2) * cot_e(epsilon, s) + 2.0 * epsilon * tan_e(epsilon, s);
            };
            co.b = [n, epsilon, p](double s) { return n * p.frak_c * tan_e(epsilon, s); };
            co.s_lo = 0.0;
            co.s_hi = fiber_radius(epsilon);
            break;
        case FamilyKind::Horospheres:
            if (epsilon != -1) throw OutOfRangeError("horospheres require eps = -1");
            co.a = [n](double) { return static_cast<double>(n); };
            co.b = [n, p](double) { return -n * p.frak_c; };
            co.s_lo = -std::numeric_limits<double>::infinity();
            co.s_hi = std::numeric_limits<double>::infinity();
            break;
        case FamilyKind::Equidistants:
            if (epsilon != -1) throw OutOfRangeError("equidistants require eps = -1");
            co.a = [n](double s) { return -2.0 / std::tanh(s) - (n - 2) * std::tanh(s); };
            co.b = [n, p](double s) { return n * p.frak_c / std::tanh(s); };
            co.s_lo = 0.0;
            co.s_hi = std::numeric_limits<double>::infinity();
            break;
        default:
            throw OutOfRangeError("no scalar-relation reduction for custom families");
    }
    return co;
}

HypersurfaceModel build_rotational_csc(int n, int epsilon, double c, IntegrateOptions opts) {
    const double floor_c = epsilon * n * (n - 1.0);
    if (c == floor_c)
        throw DegenerateHyperplaneError(
            "c = eps n(n-1): the construction degenerates to a horizontal hyperplane");
    if (c < floor_c)
        throw OutOfRangeError("rotational CSC requires c >= eps n(n-1)");

    AmbientFamily fam = make_family(FamilyKind::GeodesicSpheres, n, epsilon);
    PairConfig pair{c, builtin_scalar(epsilon, n), fam};
    RhoSolution sol = integrate_rho(pair, Launch::at_origin(), opts);
    ProfileCurve curve = fields_along(sol, fam, c);

    HypersurfaceModel model =
        assemble(curve, c > 0 ? AssemblyMode::Sphere : AssemblyMode::Entire);
    model.info = make_info("rotational_csc", n, epsilon, c);
    if (c > 0) model.info.delta = sol.delta;
    return model;
}

double annuli_threshold(int n, int epsilon, double c) {
    CscParameters p = CscParameters::make(n, epsilon, c);
    if (c <= epsilon * n * (n - 1.0))
        throw OutOfRangeError("annuli exist only for c > eps n(n-1)");
    double denom = n * p.frak_c + 2.0 * epsilon;
    if (denom <= 0.0) return std::numeric_limits<double>::infinity();
    double arg = std::sqrt((n - 2.0) / denom);
    // eps = -1 with frak_c <= 1: every lambda > 0 gives the unbounded bigraph
    if (epsilon == -1 && arg >= 1.0) return std::numeric_limits<double>::infinity();
    return arctan_e(epsilon, arg);
}

HypersurfaceModel build_annulus(int n, int epsilon, double c, double lambda,
                                IntegrateOptions opts) {
    CscParameters p = CscParameters::make(n, epsilon, c);
    double thr = annuli_threshold(n, epsilon, c);
    if (!(lambda > 0.0) || !(lambda < thr))
        throw OutOfRangeError("annulus parameter must satisfy 0 < lambda < " +
                              std::to_string(thr));

    AmbientFamily fam = make_family(FamilyKind::GeodesicSpheres, n, epsilon);
    LinearODECoefficients co = csc_tau_coefficients(FamilyKind::GeodesicSpheres, n, epsilon, c);
    const bool periodic = epsilon == 1 || p.frak_c > 1.0;
    const double s_cap = epsilon == 1 ? fiber_radius(1) - 1e-9 : 30.0;
    TauIntegration ti = integrate_tau_return(co, lambda, s_cap, opts);

    std::vector<double> rho(ti.s.size()), rho_prime(ti.s.size());
    for (size_t i = 0; i < ti.s.size(); ++i) {
        double t = std::clamp(ti.tau[i], 0.0, 1.0);
        rho[i] = std::sqrt(t);
        rho_prime[i] = ti.tau_prime[i] / (2.0 * std::max(rho[i], 1e-12));
    }

    HypersurfaceModel model;
    if (periodic) {
        if (!ti.returned)
            throw Error("annulus: no return to tau = 1 before the domain cap");
        if (std::abs(ti.end_tau - 1.0) > 1e-8 || ti.tau_prime_at_end <= 0.0)
            throw Error("annulus: return event failed the tangency audit");
        rho.back() = 1.0;  // the mathematical junction; residual audited above
        rho_prime.back() = ti.tau_prime_at_end / 2.0;
        RhoSolution sol = solution_from_grid(std::move(ti.s), std::move(rho),
                                             std::move(rho_prime), Terminal::ReachesOne,
                                             ti.tau_prime_at_end / 2.0);
        ProfileCurve curve = fields_along(sol, fam, c);
        model = assemble(curve, AssemblyMode::Periodic);
        model.info = make_info("annulus", n, epsilon, c);
        model.info.lambda_bar = sol.delta;
    } else {
        if (ti.returned) throw Error("annulus: unexpected return event for frak_c <= 1");
        if (ti.end_tau < p.frak_c - 1e-6)
            throw Error("annulus: tau fell below its asymptotic level");
        const double rp_end = rho_prime.back();
        RhoSolution sol = solution_from_grid(std::move(ti.s), std::move(rho),
                                             std::move(rho_prime), Terminal::Truncated, rp_end);
        ProfileCurve curve = fields_along(sol, fam, c);
        model = assemble(curve, AssemblyMode::Double);
        model.info = make_info("annulus", n, epsilon, c);
    }
    model.info.lambda = lambda;
    return model;
}

HypersurfaceModel build_parabolic(int n, double c, ParabolicVariant variant) {
    if (!(c >= -n * (n - 1.0)) || !(c < 0.0))
        throw OutOfRangeError("parabolic constructions require -n(n-1) <= c < 0");
    CscParameters p = CscParameters::make(n, -1, c);
    AmbientFamily fam = make_family(FamilyKind::Horospheres, n, -1);

    if (variant == ParabolicVariant::EntireConstant) {
        if (p.frak_c == 0.0)
            throw DegenerateHyperplaneError(
                "c = -n(n-1): the constant-angle graph degenerates to a hyperplane");
        const double r = std::sqrt(p.frak_c);
        std::vector<double> s, rho, rho_prime;
        walk_closed_form([r](double) { return r; }, [](double) { return 0.0; }, -10.0, 10.0, s,
                         rho, rho_prime);
        RhoSolution sol = solution_from_grid(std::move(s), std::move(rho), std::move(rho_prime),
                                             Terminal::Truncated, 0.0);
        sol.admissibility.c3 = false;  // ρ′ ≡ 0
        sol.admissibility.c3_worst_s = 0.0;
        ProfileCurve curve = fields_along(sol, fam, c);
        curve.diverges_start = true;  // the height is linear through both open ends
        HypersurfaceModel model = assemble(curve, AssemblyMode::Graph);
        model.info = make_info("parabolic_entire", n, -1, c);
        return model;
    }

    // SymmetricBiGraph: τ = (1-𝔠)e^{ns} + 𝔠 on (-∞, 0], vertical at s = 0
    CscClosedForm cf = csc_closed_form(CscMode::ParabolicGraph, p);
    double s_min = std::min(-10.0, (-18.42 - std::log1p(-p.frak_c)) / n);
    s_min = std::max(s_min, -50.0);
    std::vector<double> s, rho, rho_prime;
    walk_closed_form(cf.rho, cf.rho_prime, s_min, 0.0, s, rho, rho_prime);
    rho.back() = 1.0;
    RhoSolution sol = solution_from_grid(std::move(s), std::move(rho), std::move(rho_prime),
                                         Terminal::ReachesOne, n * (1.0 - p.frak_c) / 2.0);
    ProfileCurve curve = fields_along(sol, fam, c);
    curve.diverges_start = p.frak_c > 0.0;  // ρ → √𝔠 > 0 keeps the height growing
    HypersurfaceModel model = assemble(curve, AssemblyMode::Double);
    model.info = make_info("parabolic_bigraph", n, -1, c);
    if (p.frak_c == 0.0 && !(curve.phi_total < M_PI / n))
        throw Error("parabolic bigraph: slab width exceeds pi/n");
    return model;
}

double hyperbolic_threshold(int n, double c) {
    if (!(c >= -n * (n - 1.0)) || !(c < 0.0))
        throw OutOfRangeError("hyperbolic threshold requires -n(n-1) <= c < 0");
    CscParameters p = CscParameters::make(n, -1, c);
    if (n * p.frak_c <= 2.0) return 0.0;
    return std::atanh(std::sqrt(p.frak_c));
}

double hyperbolic_threshold_tight(int n, double c) {
    if (!(c >= -n * (n - 1.0)) || !(c < 0.0))
        throw OutOfRangeError("hyperbolic threshold requires -n(n-1) <= c < 0");
    CscParameters p = CscParameters::make(n, -1, c);
    double num = n * p.frak_c - 2.0;
    if (num <= 0.0) return 0.0;
    return std::atanh(std::sqrt(num / (n - 2.0)));
}

HypersurfaceModel build_hyperbolic(int n, double c, double lambda) {
    double thr = hyperbolic_threshold(n, c);
    if (!(lambda > thr))
        throw OutOfRangeError("hyperbolic bigraph requires lambda > " + std::to_string(thr));
    CscParameters p = CscParameters::make(n, -1, c);
    AmbientFamily fam = make_family(FamilyKind::Equidistants, n, -1);
    CscClosedForm cf = csc_closed_form(CscMode::Hyperbolic, p, lambda);

    const double s_end = std::max(lambda + 10.0, 12.0);
    std::vector<double> s, rho, rho_prime;
    walk_closed_form(cf.rho, cf.rho_prime, lambda, s_end, s, rho, rho_prime);
    rho.front() = 1.0;

    // τ must decrease monotonically from 1 to 𝔠
    for (size_t i = 0; i + 1 < rho.size(); ++i)
        if (rho[i + 1] > rho[i] + 1e-12)
            throw Error("hyperbolic bigraph: tau is not decreasing");
    if (std::abs(rho.back() * rho.back() - p.frak_c) > 1e-6)
        throw Error("hyperbolic bigraph: tau missed its asymptotic level");

    const double rp_end = rho_prime.back();
    RhoSolution sol = solution_from_grid(std::move(s), std::move(rho), std::move(rho_prime),
                                         Terminal::Truncated, rp_end);
    ProfileCurve curve = fields_along(sol, fam, c);
    if (p.frak_c == 0.0) {
        curve.diverges = false;  // ρ decays exponentially: finite slab
        if (!(curve.phi_total < M_PI / n))
            throw Error("hyperbolic bigraph: slab width exceeds pi/n");
    }
    HypersurfaceModel model = assemble(curve, AssemblyMode::Double);
    model.info = make_info("hyperbolic_bigraph", n, -1, c);
    model.info.lambda = lambda;
    return model;
}

CscClosedForm csc_sectional_rho(int n, int epsilon, double K, CscSectionalMode mode) {
    const double c = K * n * (n - 1.0);
    switch (mode) {
        case CscSectionalMode::Rotational: {
            if (!(K > epsilon))
                throw OutOfRangeError("rotational seed requires K > eps");
            return csc_closed_form(CscMode::RotationalSeed,
                                   CscParameters::make(n, epsilon, c));
        }
        case CscSectionalMode::Hyperbolic: {
            if (epsilon != -1) throw OutOfRangeError("hyperbolic seed requires eps = -1");
            if (!(K > -1.0) || !(K < 0.0))
                throw OutOfRangeError("hyperbolic seed requires -1 < K < 0");
            const double A = std::sqrt(1.0 + K);
            CscClosedForm cf;
            cf.rho = [A](double s) { return A / std::tanh(s); };
            cf.rho_prime = [A](double s) {
                double sh = std::sinh(s);
                return -A / (sh * sh);
            };
            cf.s_lo = std::atanh(A);
            cf.s_hi = std::numeric_limits<double>::infinity();
            cf.delta = cf.s_lo;  // vertical tangency at the left endpoint
            cf.limit = 1.0 + K;
            return cf;
        }
        case CscSectionalMode::ParabolicConstant: {
            if (epsilon != -1) throw OutOfRangeError("parabolic seed requires eps = -1");
            if (!(K >= -1.0) || !(K < 0.0))
                throw OutOfRangeError("parabolic seed requires -1 <= K < 0");
            return csc_closed_form(CscMode::ParabolicConstant,
                                   CscParameters::make(n, -1, c));
        }
    }
    throw OutOfRangeError("unknown sectional mode");
}

RescaledRho rescale_homogeneous(const RhoSolution& base, double c0, double c, double degree) {
    if (!(degree > 0.0)) throw OutOfRangeError("rescaling requires a positive degree");
    if (!(c0 > 0.0) || !(c > 0.0)) throw OutOfRangeError("rescaling requires c, c0 > 0");
    if (base.size() < 2) throw OutOfRangeError("rescaling needs a nontrivial base grid");

    RescaledRho out;
    out.factor = std::pow(c / c0, 1.0 / degree);
    out.s_lo = base.s.front();
    out.s_hi = base.s.back();

    auto segs = std::make_shared<std::vector<HermiteSegment>>();
    segs->reserve(base.size() - 1);
    for (size_t i = 0; i + 1 < base.size(); ++i)
        segs->push_back({base.s[i], base.s[i + 1], base.rho[i], base.rho[i + 1],
                         base.rho_prime[i], base.rho_prime[i + 1]});

    if (out.factor > 1.0) {
        const double target = 1.0 / out.factor;
        for (const auto& seg : *segs) {
            if ((seg.y0 - target) * (seg.y1 - target) <= 0.0 && seg.y1 >= target) {
                out.delta = seg.inverse(target);
                out.s_hi = out.delta;
                break;
            }
        }
    }

    const double f = out.factor, hi = out.s_hi;
    auto locate = [segs, hi](double s) -> const HermiteSegment& {
        size_t lo = 0, up = segs->size();
        while (up - lo > 1) {
            size_t mid = (lo + up) / 2;
            if ((*segs)[mid].s0 <= s) lo = mid;
            else up = mid;
        }
        return (*segs)[lo];
    };
    out.rho = [segs, locate, f, hi](double s) {
        if (s < (*segs)[0].s0 || s > hi + 1e-12)
            throw OutOfRangeError("rescaled profile evaluated outside its domain");
        return f * locate(std::min(s, (*segs).back().s1)).value(s);
    };
    out.rho_prime = [segs, locate, f, hi](double s) {
        if (s < (*segs)[0].s0 || s > hi + 1e-12)
            throw OutOfRangeError("rescaled profile evaluated outside its domain");
        return f * locate(std::min(s, (*segs).back().s1)).slope(s);
    };
    return out;
}

double cylinder_radius(const WeingartenSpec& W, double c, int epsilon, int n) {
    if (W.arity != n) throw OutOfRangeError("cylinder_radius: W arity must equal n");
    auto g = [&](double s) {
        std::vector<double> k(n, cot_e(epsilon, s));
        k[n - 1] = 0.0;  // the vertical direction is flat on a cylinder
        return W.value(k, 0.0) - c;
    };
    auto dg = [&](double s) {
        std::vector<double> k(n, cot_e(epsilon, s));
        k[n - 1] = 0.0;
        auto grad = W.grad_k(k, 0.0);
        double cot = cot_e(epsilon, s), sum = 0.0;
        for (int i = 0; i + 1 < n; ++i) sum += grad[i];
        return -sum * (epsilon + cot * cot);
    };

    if (epsilon == -1) {
        std::vector<double> ones(n, 1.0);
        ones[n - 1] = 0.0;
        if (W.value(ones, 0.0) >= c)
            throw NoRootError("no cylinder: W(1,...,1,0) >= c, the relation is unreachable");
    }
    double lo = 1e-8;
    if (g(lo) <= 0.0) throw NoRootError("no cylinder: W - c has no sign change");
    double hi = epsilon == 1 ? fiber_radius(1) - 1e-8 : 1.0;
    if (epsilon == -1) {
        while (g(hi) > 0.0) {
            hi *= 2.0;
            if (hi > 128.0) throw NoRootError("no cylinder: W - c stays positive");
        }
    } else if (g(hi) > 0.0) {
        throw NoRootError("no cylinder: W - c stays positive on (0, pi/2)");
    }
    RootOptions ro;
    ro.f_tol = 1e-13;
    ro.x_tol = 1e-13;
    return find_root(g, lo, hi, dg, ro);
}

}  // namespace weingarten
