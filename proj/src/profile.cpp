#include "weingarten/profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "weingarten/errors.hpp"
#include "weingarten/numerics.hpp"

namespace weingarten {

namespace {

constexpr double kNearVertical = 1e-4;   // 1-ρ below this switches the variable
constexpr double kTransversalSlope = 1e-3;

// ∫ ρ/√(1-ρ²) ds over one recorded interval, on the cubic Hermite model of ρ.
double interval_phi(double s0, double s1, double y0, double y1, double d0, double d1) {
    if (s1 <= s0) return 0.0;
    HermiteSegment seg{s0, s1, y0, y1, d0, d1};
    QuadratureOptions q;
    q.abs_tol = 1e-13;
    q.rel_tol = 1e-12;

    const bool near_one = std::max(y0, y1) >= 1.0 - kNearVertical;
    const bool monotone = d0 * d1 > 0.0;
    const double end_slope = std::abs(y1 >= y0 ? d1 : d0);
    if (near_one && monotone && end_slope >= kTransversalSlope) {
        // ψ = arcsin ρ: dφ = sin ψ / ρ′ dψ, finite up to ρ = 1; sign-correct for
        // descending ρ since reversed limits and a negative slope cancel.
        double p0 = std::asin(std::min(y0, 1.0));
        double p1 = std::asin(std::min(y1, 1.0));
        auto f = [&](double psi) {
            double y = std::sin(psi);
            double sv = seg.inverse(y);
            double sl = seg.slope(sv);
            if (std::abs(sl) < 1e-12) sl = sl < 0 ? -1e-12 : 1e-12;
            return y / sl;
        };
        return std::max(0.0, integrate(f, p0, p1, q));
    }

    // rounding noise of the interpolant is amplified by dφ'/dρ ~ 1/θ³, so the
    // quadrature cannot resolve the integrand below ~ε·h/θ³; without this floor
    // the error estimate on deep-saturation plateaus (θ² ~ 1e-5) never converges
    const double th2_min = std::max(1.0 - std::max(y0, y1) * std::max(y0, y1), 1e-12);
    q.abs_tol = std::max(q.abs_tol, 1e-15 * (s1 - s0) / std::pow(th2_min, 1.5));

    auto f = [&](double s) {
        double y = std::min(seg.value(s), 1.0 - 1e-12);
        return y / std::sqrt(1.0 - y * y);
    };
    return std::max(0.0, integrate(f, s0, s1, q));
}

}  // namespace

PhiResult integrate_phi(const RhoSolution& sol) {
    PhiResult out;
    const size_t m = sol.size();
    out.phi.assign(m, 0.0);
    if (m == 0) return out;
    if (sol.degenerate) return out;  // horizontal hyperplane: φ ≡ 0

    for (size_t i = 0; i + 1 < m; ++i) {
        double d = interval_phi(sol.s[i], sol.s[i + 1], sol.rho[i], sol.rho[i + 1],
                                sol.rho_prime[i], sol.rho_prime[i + 1]);
        out.phi[i + 1] = out.phi[i] + d;
    }
    out.total = out.phi.back();

    const bool transversal_end =
        sol.terminal == Terminal::ReachesOne && !sol.saturated && sol.rho_prime_at_delta > 0.0;
    if (transversal_end && sol.rho.back() < 1.0) {
        double yb = sol.rho.back();
        out.total += std::sqrt(std::max(0.0, 1.0 - yb * yb)) / sol.rho_prime_at_delta;
    }
    out.diverges = sol.terminal == Terminal::Truncated ||
                   (sol.terminal == Terminal::ReachesOne && !transversal_end);

    if (transversal_end) {
        // ρ′ ≥ a > 0 up to the tangency forces φ(δ) ≤ 1/a ≤ π/(2a); a gross
        // violation means the grid and the end data disagree.
        double a = std::numeric_limits<double>::infinity();
        for (size_t i = 0; i < m; ++i) a = std::min(a, sol.rho_prime[i]);
        if (a > 0.0 && out.total > M_PI / (2.0 * a) + 1e-9)
            throw Error("integrate_phi: total height exceeds the vertical-tangency bound");
    }
    return out;
}

std::string to_string(Convexity c) {
    switch (c) {
        case Convexity::Strict: return "Strict";
        case Convexity::Weak: return "Weak";
        default: return "None";
    }
}

double ProfileCurve::k_min(size_t i) const {
    double v = rho_prime[i];
    for (const auto& row : k_h) v = std::min(v, row[i]);
    return v;
}

double ProfileCurve::k_max(size_t i) const {
    double v = rho_prime[i];
    for (const auto& row : k_h) v = std::max(v, row[i]);
    return v;
}

double ProfileCurve::k_tan_min(size_t i) const {
    if (K_tan.empty()) return std::nan("");
    double v = K_tan[0][i];
    for (const auto& row : K_tan) v = std::min(v, row[i]);
    return v;
}

double ProfileCurve::k_mix_min(size_t i) const {
    double v = K_mix[0][i];
    for (const auto& row : K_mix) v = std::min(v, row[i]);
    return v;
}

ProfileCurve fields_along(const RhoSolution& sol, const AmbientFamily& family, double c) {
    ProfileCurve out;
    out.family = family;
    out.c = c;
    out.s = sol.s;
    out.rho = sol.rho;
    out.rho_prime = sol.rho_prime;
    out.s_start = sol.s_start;
    out.delta = sol.delta;
    out.terminal = sol.terminal;
    out.rho_prime_at_delta = sol.rho_prime_at_delta;
    out.saturated = sol.saturated;
    out.degenerate = sol.degenerate;
    out.admissibility = sol.admissibility;

    PhiResult pr = integrate_phi(sol);
    out.phi = std::move(pr.phi);
    out.phi_total = pr.total;
    out.diverges = pr.diverges;

    const size_t m = sol.size();
    const int B = family.branch_count();
    const int n = family.dim;
    const double eps = family.epsilon;

    out.theta.resize(m);
    out.k_h.assign(B, std::vector<double>(m));
    out.H1.resize(m);
    out.H2.resize(m);
    out.S.resize(m);
    for (int a = 0; a < B; ++a)
        for (int b = a; b < B; ++b)
            if (a != b || family.branches[a].multiplicity >= 2) out.tan_pairs.emplace_back(a, b);
    out.K_tan.assign(out.tan_pairs.size(), std::vector<double>(m));
    out.K_mix.assign(B, std::vector<double>(m));

    for (size_t i = 0; i < m; ++i) {
        double si = sol.s[i], y = sol.rho[i], rp = sol.rho_prime[i];
        double theta2 = std::max(0.0, 1.0 - y * y);
        out.theta[i] = std::sqrt(theta2);
        if (std::abs(rp) > 1e6) out.low_regularity = true;

        const bool axis = family.origin_singular && si == 0.0;
        double e1 = rp, sumsq = rp * rp;
        for (int j = 0; j < B; ++j) {
            double k = axis ? -family.residues[j] * rp : -family.branch_curvature(j, si) * y;
            out.k_h[j][i] = k;
            int mult = family.branches[j].multiplicity;
            e1 += mult * k;
            sumsq += mult * k * k;
        }
        out.H1[i] = e1;
        out.H2[i] = 0.5 * (e1 * e1 - sumsq);
        out.S[i] = 2.0 * out.H2[i] + eps * (n - 1) * (2.0 * theta2 + n - 2);
        for (size_t p = 0; p < out.tan_pairs.size(); ++p) {
            auto [a, b] = out.tan_pairs[p];
            out.K_tan[p][i] = out.k_h[a][i] * out.k_h[b][i] + eps;
        }
        for (int j = 0; j < B; ++j) out.K_mix[j][i] = out.k_h[j][i] * rp + eps * theta2;
    }
    return out;
}

Convexity convexity_of(const ProfileCurve& curve) {
    const double tol = 1e-10;
    double gmin = std::numeric_limits<double>::infinity(), gmax = -gmin;
    for (size_t i = 0; i < curve.size(); ++i) {
        gmin = std::min(gmin, curve.k_min(i));
        gmax = std::max(gmax, curve.k_max(i));
    }
    if (gmin > tol || gmax < -tol) return Convexity::Strict;
    if (gmin >= -tol || gmax <= tol) return Convexity::Weak;
    return Convexity::None;
}

std::string to_string(Topology t) {
    switch (t) {
        case Topology::Sphere: return "Sphere";
        case Topology::EntireGraph: return "EntireGraph";
        case Topology::PeriodicAnnulus: return "PeriodicAnnulus";
        case Topology::BiGraph: return "BiGraph";
        default: return "Graph";
    }
}

HypersurfaceModel assemble(const ProfileCurve& curve, AssemblyMode mode) {
    if (curve.size() == 0) throw Error("assemble: empty curve");
    const double gap = 1e-6;
    const bool vertical_end = curve.rho.back() >= 1.0 - gap;
    const bool vertical_start = curve.rho.front() >= 1.0 - gap;

    HypersurfaceModel model;
    model.convexity = convexity_of(curve);
    switch (mode) {
        case AssemblyMode::Sphere: {
            if (!vertical_end)
                throw TangencyMismatchError(
                    "sphere assembly: end sample is not a vertical junction (rho = " +
                    std::to_string(curve.rho.back()) + ")");
            double plane = curve.phi_total;
            model.topology = Topology::Sphere;
            model.pieces = {{curve, 0.0, false}, {curve, 2.0 * plane, true}};
            model.symmetry_planes = {plane};
            break;
        }
        case AssemblyMode::Periodic: {
            if (!vertical_start || !vertical_end)
                throw TangencyMismatchError("periodic assembly: both ends must be vertical");
            double half = curve.phi_total;
            model.topology = Topology::PeriodicAnnulus;
            model.pieces = {{curve, 0.0, false}, {curve, 2.0 * half, true}};
            model.symmetry_planes = {0.0, half};
            model.period = 2.0 * half;
            break;
        }
        case AssemblyMode::Double: {
            model.topology = Topology::BiGraph;
            if (vertical_start) {
                model.pieces = {{curve, 0.0, false}, {curve, 0.0, true}};
            } else if (vertical_end) {
                model.pieces = {{curve, -curve.phi_total, false}, {curve, curve.phi_total, true}};
            } else {
                throw TangencyMismatchError("double assembly: no vertical junction to glue at");
            }
            model.symmetry_planes = {0.0};
            break;
        }
        case AssemblyMode::Entire:
            model.topology = Topology::EntireGraph;
            model.pieces = {{curve, 0.0, false}};
            break;
        case AssemblyMode::Graph:
            model.topology = Topology::Graph;
            model.pieces = {{curve, 0.0, false}};
            break;
    }
    return model;
}

HeightExtent height_extent(const HypersurfaceModel& model) {
    HeightExtent ext;
    ext.t_min = std::numeric_limits<double>::infinity();
    ext.t_max = -ext.t_min;
    for (const auto& piece : model.pieces) {
        const ProfileCurve& cv = piece.curve;
        for (size_t i = 0; i < cv.size(); ++i) {
            double t = piece.height(i);
            ext.t_min = std::min(ext.t_min, t);
            ext.t_max = std::max(ext.t_max, t);
        }
        // the height grows through a divergent end: +t for a plain copy, -t mirrored
        bool far_up = !piece.reflected, near_up = piece.reflected;
        if (cv.diverges) (far_up ? ext.unbounded_above : ext.unbounded_below) = true;
        if (cv.diverges_start) (near_up ? ext.unbounded_above : ext.unbounded_below) = true;

        Convexity cvx = convexity_of(cv);
        if (cvx == Convexity::Strict && cv.admissibility.c1) {
            // one orientation has all curvatures ≥ a > 0
            double a = std::numeric_limits<double>::infinity();
            for (size_t i = 0; i < cv.size(); ++i) {
                double lo = cv.k_min(i), hi = cv.k_max(i);
                a = std::min(a, lo > 0 ? lo : -hi);
            }
            if (a > 0 && cv.phi_total > 1.0 / a + 1e-6)
                throw Error("height_extent: strictly convex piece exceeds the 1/k bound");
        }
    }
    if (model.topology == Topology::PeriodicAnnulus)
        ext.unbounded_above = ext.unbounded_below = true;
    return ext;
}

}  // namespace weingarten
