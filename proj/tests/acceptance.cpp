// release gate: one timed line per checklist item, nonzero exit on any failure.
// every tolerance here is a contract, not a measurement — the unit suite pins
// the sharper observed margins.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include "weingarten/constructions.hpp"
#include "weingarten/errors.hpp"
#include "weingarten/serialization.hpp"
#include "weingarten/trig.hpp"
#include "weingarten/verify.hpp"

using namespace weingarten;

namespace {

int failures = 0;

struct Timer {
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
    double secs() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
};

void report(int id, const char* name, bool pass, double secs, const std::string& detail) {
    std::printf("[%s] %2d. %-34s (%5.2fs)  %s\n", pass ? "PASS" : "FAIL", id, name, secs,
                detail.c_str());
    if (!pass) ++failures;
}

std::string g(double v) { return format_g17(v); }

// every model built along the way feeds the identity/estimate criteria
std::vector<HypersurfaceModel> matrix;

void rotational_oracle() {
    Timer t;
    struct Case {
        int eps;
        double c;
    };
    const Case cases[] = {{1, 12.0}, {1, 9.0}, {-1, 3.0}, {-1, 0.0}, {-1, -3.0}};
    bool ok = true;
    double worst_sup = 0.0, worst_delta = 0.0, worst_time = 0.0;
    for (const Case& k : cases) {
        Timer each;
        HypersurfaceModel model = build_rotational_csc(3, k.eps, k.c);
        const double dt = each.secs();
        worst_time = std::max(worst_time, dt);
        if (dt >= 1.0) ok = false;

        const ProfileCurve& cv = model.pieces.front().curve;
        const double frak = (k.c - k.eps * 6.0) / 6.0;
        const double root = std::sqrt(frak);
        double sup = 0.0;
        for (size_t i = 0; i < cv.size(); ++i) {
            if (cv.s[i] > 0.95 * cv.delta) break;
            sup = std::max(sup, std::fabs(cv.rho[i] - root * tan_e(k.eps, cv.s[i])));
        }
        worst_sup = std::max(worst_sup, sup);
        if (sup > 1e-6) ok = false;

        if (frak > (k.eps == 1 ? 0.0 : 1.0)) {
            const double closed = arctan_e(k.eps, 1.0 / root);
            worst_delta = std::max(worst_delta, std::fabs(cv.delta - closed));
            if (std::fabs(cv.delta - closed) > 1e-6) ok = false;
        }
        matrix.push_back(std::move(model));
    }
    report(1, "rotational CSC oracle", ok, t.secs(),
           "sup " + g(worst_sup) + ", delta gap " + g(worst_delta) + ", slowest case " +
               g(worst_time) + "s");
}

void sphere_assembly() {
    Timer t;
    const HypersurfaceModel& model = matrix.front();  // (eps=1, c=12)
    bool ok = model.topology == Topology::Sphere && model.pieces.size() == 2;

    const ProfileCurve& cv = model.pieces.front().curve;
    const double gap = std::fabs(1.0 - cv.rho.back());
    ok = ok && gap <= 1e-6;

    // the mirrored piece shares the sample arrays; reflection is bookkeeping
    const Piece& top = model.pieces.back();
    ok = ok && top.reflected && top.offset == 2.0 * cv.phi_total &&
         top.curve.phi == cv.phi;

    WeingartenSpec W = builtin("WS", 3, 1);
    CheckResult res = residual_weingarten(model, W, 12.0, 1e-8);
    ok = ok && res.pass;

    double kdev = 0.0;
    for (size_t i = 0; i < cv.size(); ++i) {
        for (const auto& row : cv.K_tan) kdev = std::max(kdev, std::fabs(row[i] - 2.0));
        for (const auto& row : cv.K_mix) kdev = std::max(kdev, std::fabs(row[i] - 2.0));
    }
    ok = ok && kdev <= 1e-8;
    report(2, "sphere assembly", ok, t.secs(),
           "junction " + g(gap) + ", residual " + g(res.max_residual) + ", |K-2| " + g(kdev));
}

void annulus_periodicity() {
    Timer t;
    bool ok = true;

    auto co = csc_tau_coefficients(FamilyKind::GeodesicSpheres, 3, 1, 12.0);
    TauIntegration ti = integrate_tau_return(co, 0.2, fiber_radius(1) - 1e-9);
    ok = ok && ti.returned && std::fabs(ti.end_tau - 1.0) <= 1e-8 && ti.tau_prime_at_end > 0.0;

    HypersurfaceModel ann = build_annulus(3, 1, 12.0, 0.2);
    const ProfileCurve& cv = ann.pieces.front().curve;
    ok = ok && ann.topology == Topology::PeriodicAnnulus && ann.period > 0.0 &&
         ann.period == 2.0 * cv.phi_total;

    // tau against its integrating-factor closed form, anchored at lambda
    const double lam = 0.2, sl = std::sin(lam), cl = std::cos(lam);
    double sup = 0.0;
    for (size_t i = 0; i < cv.size(); ++i) {
        const double s = cv.s[i], ss = std::sin(s), cs = std::cos(s);
        const double tau = (ss * ss * ss - sl * sl * sl + sl * cl * cl) / (ss * cs * cs);
        sup = std::max(sup, std::fabs(cv.rho[i] * cv.rho[i] - tau));
    }
    ok = ok && sup <= 1e-6;
    matrix.push_back(std::move(ann));

    HypersurfaceModel big = build_annulus(3, -1, -3.0, 1.0);
    const ProfileCurve& bv = big.pieces.front().curve;
    const double tail = bv.rho.back() * bv.rho.back();
    ok = ok && big.topology == Topology::BiGraph && bv.s.back() >= 30.0 - 1e-9 &&
         std::fabs(tail - 0.5) <= 1e-4;
    matrix.push_back(std::move(big));

    report(3, "annulus periodicity", ok, t.secs(),
           "return tau gap " + g(std::fabs(ti.end_tau - 1.0)) + ", closed form " + g(sup) +
               ", tail " + g(std::fabs(tail - 0.5)));
}

void parabolic_slab() {
    Timer t;
    HypersurfaceModel model = build_parabolic(3, -6.0, ParabolicVariant::SymmetricBiGraph);
    const ProfileCurve& cv = model.pieces.front().curve;
    const double half = cv.phi_total;
    bool ok = half > M_PI / 3.0 - 1e-3 && half < M_PI / 3.0;

    double sup = 0.0;
    for (size_t i = 0; i < cv.size(); ++i) {
        const double closed =
            (2.0 / 3.0) * (std::asin(std::min(cv.rho[i], 1.0)) - std::asin(cv.rho.front()));
        sup = std::max(sup, std::fabs(cv.phi[i] - closed));
    }
    ok = ok && sup <= 1e-6;
    matrix.push_back(std::move(model));
    report(4, "parabolic slab width", ok, t.secs(),
           "pi/3 - sup|phi| = " + g(M_PI / 3.0 - half) + ", quadrature vs closed " + g(sup));
}

void hyperbolic_family() {
    Timer t;
    const double target = std::atanh(std::sqrt(5.0 / 6.0));
    const double got = hyperbolic_threshold(4, -2.0);
    bool ok = std::fabs(got - target) <= 1e-10;

    // rho_lambda approaches the sectional coth profile from below as the
    // launch point descends to lambda_0
    const double lam0 = std::atanh(1.0 / std::sqrt(2.0));
    const double root = std::sqrt(0.5);
    double prev = std::numeric_limits<double>::infinity();
    double last = prev;
    for (double d : {0.5, 0.4, 0.3, 0.2, 0.1}) {
        HypersurfaceModel model = build_hyperbolic(3, -3.0, lam0 + d);
        const ProfileCurve& cv = model.pieces.front().curve;
        double err = 0.0;
        for (size_t i = 0; i < cv.size(); ++i)
            err = std::max(err, std::fabs(cv.rho[i] - root / std::tanh(cv.s[i])));
        ok = ok && err < prev;
        prev = err;
        last = err;
        matrix.push_back(std::move(model));
    }
    report(5, "hyperbolic thresholds", ok, t.secs(),
           "delta gap " + g(std::fabs(got - target)) + ", final coth distance " + g(last));
}

void ellipticity_audit() {
    Timer t;
    bool ok = true;
    int audited = 0;
    double worst = std::numeric_limits<double>::infinity();
    auto audit = [&](const WeingartenSpec& W) {
        EllipticityReport rep = check_ellipticity(W, {1000, 2026, false});
        worst = std::min(worst, rep.min_partial);
        ok = ok && rep.pass() && rep.samples == 1000;
        ++audited;
    };
    for (int n : {3, 4}) {
        for (int r = 1; r <= n; ++r) audit(builtin_hr(r, n));
        audit(builtin_norm_a(n));
        audit(builtin_scalar(1, n));
        audit(builtin_scalar(-1, n));
    }
    report(6, "ellipticity audit", ok, t.secs(),
           "min partial " + g(worst) + " over " + std::to_string(audited) + " relations");
}

void identity_suites() {
    Timer t;
    bool ok = true;
    double worst_theta = 0.0, worst_gauss = 0.0, worst_fd = 0.0;
    for (const HypersurfaceModel& model : matrix) {
        for (const Piece& piece : model.pieces) {
            CheckResult th = theta_identity(piece.curve, 1e-12);
            CheckResult ga = gauss_consistency(piece.curve, 1e-9);
            CheckResult fd = phi_slope_check(piece.curve, 1e-4);
            worst_theta = std::max(worst_theta, th.max_residual);
            worst_gauss = std::max(worst_gauss, ga.max_residual);
            worst_fd = std::max(worst_fd, fd.max_residual);
            ok = ok && th.pass && ga.pass && fd.pass;
        }
    }

    // first-order curvature identity on the constant-sectional evaluators
    auto edo = [&](const CscClosedForm& cf, const std::function<double(double)>& alpha, int eps,
                   double lo, double hi) {
        double worst = 0.0;
        for (int j = 0; j <= 500; ++j) {
            const double s = lo + (hi - lo) * j / 500.0;
            const double a = alpha(s), r = cf.rho(s), rp = cf.rho_prime(s);
            worst = std::max(worst, std::fabs(a * r * rp + (a * a + eps) * r * r));
        }
        ok = ok && worst <= 1e-10;
        return worst;
    };
    auto cfR = csc_sectional_rho(3, 1, 2.0, CscSectionalMode::Rotational);
    double e1 = edo(cfR, [](double s) { return -1.0 / std::tan(s); }, 1, 0.02, 0.95 * cfR.delta);
    auto cfH = csc_sectional_rho(3, -1, -0.5, CscSectionalMode::Hyperbolic);
    double e2 = edo(cfH, [](double s) { return -std::tanh(s); }, -1, cfH.s_lo + 1e-3,
                    cfH.s_lo + 5.0);
    auto cfP = csc_sectional_rho(3, -1, -0.5, CscSectionalMode::ParabolicConstant);
    double e3 = edo(cfP, [](double) { return 1.0; }, -1, -5.0, 5.0);

    report(7, "identity suites", ok, t.secs(),
           "theta " + g(worst_theta) + ", gauss " + g(worst_gauss) + ", fd " + g(worst_fd) +
               ", edo " + g(std::max({e1, e2, e3})) + " over " + std::to_string(matrix.size()) +
               " models");
}

void rescaling() {
    Timer t;
    WeingartenSpec W = builtin("H1", 3, -1);
    AmbientFamily fam = make_family(FamilyKind::GeodesicSpheres, 3, -1);
    RhoSolution base = integrate_rho({2.0, W, fam}, Launch::at_origin());
    RescaledRho rs = rescale_homogeneous(base, 2.0, 4.0, 1.0);
    RhoSolution direct = integrate_rho({4.0, W, fam}, Launch::at_origin());
    double sup = 0.0;
    for (size_t i = 0; i < direct.size(); ++i) {
        if (direct.s[i] < rs.s_lo || direct.s[i] > rs.s_hi) continue;
        sup = std::max(sup, std::fabs(rs.rho(direct.s[i]) - direct.rho[i]));
    }
    report(8, "homogeneous rescaling", sup <= 1e-6, t.secs(), "sup gap " + g(sup));
}

void height_estimate() {
    Timer t;
    bool ok = true;
    int caps = 0;
    double worst = -std::numeric_limits<double>::infinity();
    for (const HypersurfaceModel& model : matrix) {
        if (model.topology != Topology::Sphere || model.convexity != Convexity::Strict) continue;
        const ProfileCurve& cv = model.pieces.front().curve;
        double inf_k = std::numeric_limits<double>::infinity();
        for (size_t i = 0; i < cv.size(); ++i) inf_k = std::min(inf_k, cv.k_min(i));
        if (!(inf_k > 0.0)) continue;
        ++caps;
        worst = std::max(worst, cv.phi_total - 1.0 / inf_k);
        ok = ok && cv.phi_total <= 1.0 / inf_k + 1e-6;
    }
    ok = ok && caps >= 3;
    report(9, "height estimate", ok, t.secs(),
           "max(phi - 1/inf k) = " + g(worst) + " over " + std::to_string(caps) + " caps");
}

void cylinder_radius_check() {
    Timer t;
    WeingartenSpec W = builtin("H1", 3, -1);
    const double s0 = cylinder_radius(W, 4.0, -1, 3);
    bool ok = std::fabs(s0 - std::atanh(0.5)) <= 1e-10;
    bool threw = false;
    try {
        cylinder_radius(W, 2.0, -1, 3);
    } catch (const NoRootError&) {
        threw = true;
    }
    ok = ok && threw;
    report(10, "cylinder radius", ok, t.secs(),
           "s0 gap " + g(std::fabs(s0 - std::atanh(0.5))) + ", subcritical level rejected: " +
               (threw ? "yes" : "no"));
}

void determinism(const Timer& total) {
    Timer t;
    WeingartenSpec W = builtin("WS", 3, 1);
    HypersurfaceModel a = build_rotational_csc(3, 1, 12.0);
    HypersurfaceModel b = build_rotational_csc(3, 1, 12.0);
    bool ok = model_to_json(a, W) == model_to_json(b, W) &&
              profile_csv(a.pieces.front()) == profile_csv(b.pieces.front());
    const double elapsed = total.secs() + t.secs();
    ok = ok && elapsed < 60.0;
    report(11, "determinism and runtime", ok, t.secs(),
           std::string("rebuild byte-identical, total ") + g(elapsed) + "s < 60s");
}

}  // namespace

int main() {
    Timer total;
    rotational_oracle();
    sphere_assembly();
    annulus_periodicity();
    parabolic_slab();
    hyperbolic_family();
    ellipticity_audit();
    identity_suites();
    rescaling();
    height_estimate();
    cylinder_radius_check();
    determinism(total);
    if (failures) std::printf("%d criterion(s) failed\n", failures);
    return failures ? 1 : 0;
}
