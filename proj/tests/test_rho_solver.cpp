#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "weingarten/errors.hpp"
#include "weingarten/rho_solver.hpp"
#include "weingarten/trig.hpp"

using namespace weingarten;

namespace {

PairConfig spheres_pair(const WeingartenSpec& W, int n, int eps, double c) {
    return {c, W, make_family(FamilyKind::GeodesicSpheres, n, eps)};
}

double max_dev(const RhoSolution& sol, double (*model)(double)) {
    double worst = 0.0;
    for (size_t i = 0; i < sol.size(); ++i)
        worst = std::max(worst, std::fabs(sol.rho[i] - model(sol.s[i])));
    return worst;
}

}  // namespace

TEST_CASE("axis launch slope") {
    // scalar relation, spherical fiber: 6 m^2 + 6 = 12  =>  m0 = 1
    auto p = spheres_pair(builtin_scalar(1, 3), 3, 1, 12.0);
    CHECK(initial_slope(p) == doctest::Approx(1.0).epsilon(1e-12));

    // hyperbolic fiber, c = 0: 6 m^2 - 6 = 0
    auto ph = spheres_pair(builtin_scalar(-1, 3), 3, -1, 0.0);
    CHECK(initial_slope(ph) == doctest::Approx(1.0).epsilon(1e-12));

    // mean curvature: 3 m = 2
    auto pm = spheres_pair(builtin_hr(1, 3), 3, 1, 2.0);
    CHECK(initial_slope(pm) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));

    // degenerate horizontal hyperplane: W(0,1) = c exactly
    auto pd = spheres_pair(builtin_scalar(-1, 3), 3, -1, -6.0);
    CHECK(initial_slope(pd) == 0.0);

    // c below the attainable range
    auto pn = spheres_pair(builtin_scalar(-1, 3), 3, -1, -10.0);
    CHECK_THROWS_AS(initial_slope(pn), NoOriginRootError);

    // horospheres are regular at s = 0
    PairConfig horo{3.0, builtin_hr(1, 4), make_family(FamilyKind::Horospheres, 4, -1)};
    CHECK_THROWS_AS(initial_slope(horo), NonSingularFamilyError);
    CHECK_THROWS_AS(integrate_rho(horo, Launch::at_origin()), NonSingularFamilyError);
}

TEST_CASE("per-step slope solve") {
    auto p = spheres_pair(builtin_scalar(1, 3), 3, 1, 12.0);
    const double s = 0.5, rho = 0.5;
    // horizontal slots cot(s)·rho twice; solve 2(kh^2 + 2 kh x) + 2(2 th2 + 1) = 12
    const double kh = std::cos(s) / std::sin(s) * rho;
    const double th2 = 1.0 - rho * rho;
    const double expect = (12.0 - 2.0 * kh * kh - 2.0 * (2.0 * th2 + 1.0)) / (4.0 * kh);
    const double x = step_slope(p, s, rho);
    CHECK(x == doctest::Approx(expect).epsilon(1e-12));
    CHECK(relation_residual(p, s, rho, x) <= 1e-12);

    CHECK_THROWS_AS(step_slope(p, 0.5, 1.0), OutOfRangeError);
    CHECK_THROWS_AS(step_slope(p, 0.5, -0.1), OutOfRangeError);
    CHECK_THROWS_AS(step_slope(p, 2.0, 0.5), OutOfRangeError);  // outside (0, pi/2)
}

TEST_CASE("spherical cap of the scalar relation") {
    // rho = tan(s), vertical at s = pi/4
    auto p = spheres_pair(builtin_scalar(1, 3), 3, 1, 12.0);
    auto sol = integrate_rho(p, Launch::at_origin());

    CHECK(sol.terminal == Terminal::ReachesOne);
    CHECK(!sol.saturated);
    CHECK(!sol.degenerate);
    CHECK(sol.delta == doctest::Approx(0.785398163397448310).epsilon(1e-10));
    CHECK(sol.rho_prime_at_delta == doctest::Approx(2.0).epsilon(1e-5));
    CHECK(max_dev(sol, [](double s) { return std::tan(s); }) <= 1e-9);
    CHECK(sol.admissibility.c1);
    CHECK(sol.admissibility.c2);
    CHECK(sol.admissibility.c3);
    CHECK(classify_terminal(sol) == TerminalKind::SphereCap);
    CHECK(sol.size() > 100);
    CHECK(sol.rho.front() == 0.0);
    CHECK(sol.rho.back() >= 1.0 - 1e-6);

    // reruns are bit-identical
    auto sol2 = integrate_rho(p, Launch::at_origin());
    CHECK(sol.s == sol2.s);
    CHECK(sol.rho == sol2.rho);
    CHECK(sol.rho_prime == sol2.rho_prime);
}

TEST_CASE("entire graph of the flat scalar relation") {
    // rho = tanh(s) solves the relation with c = 0 identically
    auto p = spheres_pair(builtin_scalar(-1, 3), 3, -1, 0.0);
    auto sol = integrate_rho(p, Launch::at_origin());

    CHECK(sol.terminal == Terminal::Truncated);
    CHECK(sol.saturated);  // asymptotic contact with rho = 1, not a cap
    CHECK(max_dev(sol, [](double s) { return std::tanh(s); }) <= 1e-9);
    CHECK(classify_terminal(sol) == TerminalKind::Entire);
    // contact with 1 - 1e-6 happens at atanh(1 - 1e-6)
    CHECK(sol.delta == doctest::Approx(7.25432861926204721).epsilon(1e-5));
}

TEST_CASE("mean curvature sweep over hyperbolic sphere families") {
    // rho = c (sinh s cosh s - s) / (2 sinh^2 s)
    SUBCASE("c = 1 stalls at the cylinder radius") {
        auto p = spheres_pair(builtin_hr(1, 3), 3, -1, 1.0);
        auto sol = integrate_rho(p, Launch::at_origin());
        CHECK(sol.terminal == Terminal::Truncated);
        CHECK(!sol.saturated);
        CHECK(sol.delta == 50.0);
        CHECK(sol.rho.back() == doctest::Approx(0.5).epsilon(1e-9));
        CHECK(classify_terminal(sol) == TerminalKind::Entire);
    }
    SUBCASE("c = 2 saturates toward a vertical end") {
        auto p = spheres_pair(builtin_hr(1, 3), 3, -1, 2.0);
        auto sol = integrate_rho(p, Launch::at_origin());
        CHECK(sol.terminal == Terminal::Truncated);
        CHECK(sol.saturated);
        CHECK(sol.delta == doctest::Approx(8.64990566747997631).epsilon(1e-6));
        CHECK(classify_terminal(sol) == TerminalKind::Entire);
    }
    SUBCASE("c = 3 closes up as a cap") {
        auto p = spheres_pair(builtin_hr(1, 3), 3, -1, 3.0);
        auto sol = integrate_rho(p, Launch::at_origin());
        CHECK(sol.terminal == Terminal::ReachesOne);
        CHECK(sol.delta == doctest::Approx(1.18403114812277238).epsilon(1e-8));
        CHECK(sol.rho_prime_at_delta ==
              doctest::Approx(0.586635255461565266).epsilon(1e-4));
        CHECK(classify_terminal(sol) == TerminalKind::SphereCap);
    }
    SUBCASE("c = 6 closes up faster") {
        auto p = spheres_pair(builtin_hr(1, 3), 3, -1, 6.0);
        auto sol = integrate_rho(p, Launch::at_origin());
        CHECK(sol.delta == doctest::Approx(0.517829239700946597).epsilon(1e-8));
        CHECK(sol.rho_prime_at_delta ==
              doctest::Approx(1.79852125471790563).epsilon(1e-4));
    }
}

TEST_CASE("interior launch hitting a genuine slope zero") {
    // equidistant family, H1 = 1: rho' = 1 - 2 tanh(s) rho, launched off the profile
    // of any axis solution; closed form (C + s/2 + sinh(2s)/4) / cosh^2
    PairConfig p{1.0, builtin_hr(1, 3), make_family(FamilyKind::Equidistants, 3, -1)};
    auto sol = integrate_rho(p, Launch::interior(0.1, 0.3));

    CHECK(sol.terminal == Terminal::SlopeZero);
    CHECK(sol.s_start == 0.1);
    CHECK(sol.delta == doctest::Approx(0.948029781053990582).epsilon(1e-6));
    CHECK(sol.rho.back() == doctest::Approx(0.676690903234583171).epsilon(1e-6));
    CHECK(classify_terminal(sol) == TerminalKind::Equator);
    CHECK(!sol.admissibility.c1);

    const double C = 0.3 * std::cosh(0.1) * std::cosh(0.1) - 0.05 - std::sinh(0.2) / 4;
    double worst = 0.0;
    for (size_t i = 0; i < sol.size(); ++i) {
        const double model = (C + sol.s[i] / 2 + std::sinh(2 * sol.s[i]) / 4) /
                             (std::cosh(sol.s[i]) * std::cosh(sol.s[i]));
        worst = std::max(worst, std::fabs(sol.rho[i] - model));
    }
    CHECK(worst <= 1e-9);

    CHECK_THROWS_AS(integrate_rho(p, Launch::interior(0.1, 1.5)), OutOfRangeError);
    CHECK_THROWS_AS(integrate_rho(p, Launch::interior(0.1, 0.0)), OutOfRangeError);
    PairConfig sph = spheres_pair(builtin_hr(1, 3), 3, 1, 1.0);
    CHECK_THROWS_AS(integrate_rho(sph, Launch::interior(-0.5, 0.3)), OutOfRangeError);
}

TEST_CASE("running into the fiber cut locus") {
    // tiny mean curvature on the spherical fiber: rho stays small up to s = pi/2
    auto p = spheres_pair(builtin_hr(1, 3), 3, 1, 0.1);
    auto sol = integrate_rho(p, Launch::at_origin());
    CHECK(sol.terminal == Terminal::DomainBoundary);
    CHECK(sol.rho.back() == doctest::Approx(0.0785398163397448310).epsilon(1e-7));
    CHECK(classify_terminal(sol) == TerminalKind::Indeterminate);
}

TEST_CASE("degenerate hyperplane sentinel") {
    auto p = spheres_pair(builtin_scalar(-1, 3), 3, -1, -6.0);
    auto sol = integrate_rho(p, Launch::at_origin());
    CHECK(sol.degenerate);
    CHECK(std::all_of(sol.rho.begin(), sol.rho.end(), [](double r) { return r == 0.0; }));
    CHECK(classify_terminal(sol) == TerminalKind::Indeterminate);
    CHECK(sol.admissibility.c1);
    CHECK(!sol.admissibility.c2);
}

TEST_CASE("csc parameters and closed forms") {
    auto p = CscParameters::make(3, 1, 12.0);
    CHECK(p.frak_c == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(CscParameters::make(3, -1, -6.0).frak_c == doctest::Approx(0.0).epsilon(1e-15));
    CHECK(CscParameters::make(3, -1, -3.0).frak_c == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(CscParameters::make(4, 1, 24.0).frak_c == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(CscParameters::make(1, 1, 3.0), OutOfRangeError);
    CHECK_THROWS_AS(CscParameters::make(3, 0, 3.0), OutOfRangeError);

    SUBCASE("rotational seed") {
        auto cf = csc_closed_form(CscMode::RotationalSeed, p);
        CHECK(cf.rho(0.3) == doctest::Approx(std::tan(0.3)).epsilon(1e-14));
        CHECK(cf.rho_prime(0.3) == doctest::Approx(1.09568891532254713).epsilon(1e-14));
        CHECK(cf.delta == doctest::Approx(0.785398163397448310).epsilon(1e-14));
        CHECK_THROWS_AS(
            csc_closed_form(CscMode::RotationalSeed, CscParameters::make(3, 1, 3.0)),
            OutOfRangeError);
    }
    SUBCASE("parabolic constant and graph") {
        auto ph = CscParameters::make(3, -1, -3.0);
        auto cc = csc_closed_form(CscMode::ParabolicConstant, ph);
        CHECK(cc.rho(-4.0) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-14));
        CHECK(cc.rho_prime(2.0) == 0.0);
        CHECK(cc.limit == doctest::Approx(0.5).epsilon(1e-14));

        auto cg = csc_closed_form(CscMode::ParabolicGraph, ph);
        CHECK(cg.rho(0.0) == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(cg.delta == 0.0);
        CHECK(cg.rho(-0.5) == doctest::Approx(0.782026265591006166).epsilon(1e-13));
        CHECK_THROWS_AS(csc_closed_form(CscMode::ParabolicGraph, p), OutOfRangeError);
    }
    SUBCASE("translational family") {
        auto ph = CscParameters::make(3, -1, -3.0);
        auto ct = csc_closed_form(CscMode::Hyperbolic, ph, 1.0);
        CHECK(ct.rho(1.0) == doctest::Approx(1.0).epsilon(1e-13));
        CHECK(ct.rho(2.0) * ct.rho(2.0) ==
              doctest::Approx(0.543952359575353717).epsilon(1e-13));
        CHECK(ct.rho(12.0) * ct.rho(12.0) ==
              doctest::Approx(0.500000000075503237).epsilon(1e-12));
        CHECK(ct.s_lo == 1.0);
        // slope consistency against central differences
        const double fd = (ct.rho(2.0 + 1e-6) - ct.rho(2.0 - 1e-6)) / 2e-6;
        CHECK(ct.rho_prime(2.0) == doctest::Approx(fd).epsilon(1e-8));
        CHECK_THROWS_AS(csc_closed_form(CscMode::Hyperbolic, ph, 0.0), OutOfRangeError);
    }
}

TEST_CASE("linear tau solver matches the closed forms") {
    SUBCASE("parabolic") {
        LinearODECoefficients co{[](double) { return 3.0; },
                                 [](double) { return -1.5; },
                                 -std::numeric_limits<double>::infinity(), 0.0};
        auto tau = solve_linear_tau(co, 0.0, 1.0);
        CHECK(tau(-0.5) == doctest::Approx(0.611565080074214914).epsilon(1e-12));
        CHECK(tau(0.0) == doctest::Approx(1.0).epsilon(1e-14));
    }
    SUBCASE("rotational") {
        LinearODECoefficients co{
            [](double s) { return -1.0 / std::tan(s) + 2.0 * std::tan(s); },
            [](double s) { return 3.0 * std::tan(s); }, 0.0, 1.57079632679489662};
        auto tau = solve_linear_tau(co, 0.2, 1.0);
        CHECK(tau(0.35) == doctest::Approx(0.737999636114543083).epsilon(1e-11));
        CHECK_THROWS_AS(solve_linear_tau(co, -1.0, 1.0), OutOfRangeError);
    }
    SUBCASE("translational") {
        LinearODECoefficients co{
            [](double s) { return -2.0 / std::tanh(s) - std::tanh(s); },
            [](double s) { return 1.5 / std::tanh(s); }, 1.0,
            std::numeric_limits<double>::infinity()};
        auto tau = solve_linear_tau(co, 1.0, 1.0);
        CHECK(tau(2.0) == doctest::Approx(0.543952359575353717).epsilon(1e-11));
    }
}

TEST_CASE("tau excursion and return") {
    LinearODECoefficients co{
        [](double s) { return -1.0 / std::tan(s) + 2.0 * std::tan(s); },
        [](double s) { return 3.0 * std::tan(s); }, 0.0, 1.57079632679489662};

    auto ti = integrate_tau_return(co, 0.2, 10.0);
    CHECK(ti.returned);
    CHECK(ti.end_s == doctest::Approx(0.626756605507921769).epsilon(1e-9));
    CHECK(ti.end_tau == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(ti.tau_prime_at_end == doctest::Approx(2.23988156578634620).epsilon(1e-8));

    // grid minimum sits within one h_max sample of the continuum minimum
    const double tau_min = *std::min_element(ti.tau.begin(), ti.tau.end());
    CHECK(tau_min == doctest::Approx(0.731448846131901001).epsilon(1e-3));
    CHECK(tau_min >= 0.731448846131901001 - 1e-9);

    // beyond the dip threshold tau'(lambda) >= 0: no excursion exists
    CHECK_THROWS_AS(integrate_tau_return(co, 0.5, 10.0), OutOfRangeError);
}
