#include <algorithm>
#include <cmath>
#include <vector>

#include "doctest.h"
#include "weingarten/ambient.hpp"
#include "weingarten/constructions.hpp"
#include "weingarten/errors.hpp"
#include "weingarten/profile.hpp"
#include "weingarten/rho_solver.hpp"
#include "weingarten/verify.hpp"
#include "weingarten/weingarten_function.hpp"

using namespace weingarten;
using doctest::Approx;

TEST_CASE("weingarten residual and its sensitivity") {
    auto model = build_rotational_csc(3, 1, 12.0);
    auto chk = residual_weingarten(model, builtin_scalar(1, 3), 12.0);
    CHECK(chk.pass);
    CHECK(chk.max_residual <= 1e-8);

    // one corrupted sample must trip the audit
    auto bad = model;
    const size_t mid = bad.pieces[0].curve.size() / 2;
    bad.pieces[0].curve.rho[mid] += 1e-3;
    auto chk2 = residual_weingarten(bad, builtin_scalar(1, 3), 12.0);
    CHECK(!chk2.pass);
    CHECK(chk2.max_residual > 1e-4);
    CHECK(chk2.worst_s == bad.pieces[0].curve.s[mid]);
}

TEST_CASE("exact residual on the degenerate hyperplane") {
    PairConfig pair{-6.0, builtin_scalar(-1, 3), make_family(FamilyKind::GeodesicSpheres, 3, -1)};
    auto sol = integrate_rho(pair, Launch::at_origin());
    REQUIRE(sol.degenerate);
    auto curve = fields_along(sol, pair.family, pair.c);
    auto chk = residual_weingarten(curve, pair.W, -6.0);
    CHECK(chk.pass);
    CHECK(chk.max_residual == 0.0);  // every term is integer arithmetic
}

TEST_CASE("gauss consistency") {
    auto model = build_rotational_csc(3, 1, 12.0);
    auto chk = gauss_consistency(model.pieces[0].curve);
    CHECK(chk.pass);
    CHECK(chk.max_residual <= 1e-9);

    // two branches with multiplicities 2 + 1 exercise the pair bookkeeping
    std::vector<CurvatureBranch> branches;
    branches.push_back({2, [](double s) { return -1.0 / std::tanh(s); }, "-coth(s)"});
    branches.push_back({1, [](double s) { return -2.0 / std::tanh(2.0 * s); }, "-2*coth(2*s)"});
    auto fam = make_custom_family(std::move(branches), 4, -1, {0.0, 100.0}, {-1.0, -1.0});
    PairConfig pc{3.0, builtin_hr(1, 4), fam};
    IntegrateOptions io;
    io.s_max = 2.0;
    auto sol = integrate_rho(pc, Launch::interior(0.5, 0.3), io);
    auto chk2 = gauss_consistency(fields_along(sol, fam, pc.c));
    CHECK(chk2.pass);

    // a corrupted H2 column shifts the published route by 2 x the corruption
    auto badcv = model.pieces[0].curve;
    badcv.H2[badcv.size() / 2] += 1e-6;
    auto chk3 = gauss_consistency(badcv);
    CHECK(!chk3.pass);
    CHECK(chk3.max_residual == Approx(2e-6).epsilon(1e-4));
}

TEST_CASE("admissibility conditions") {
    PairConfig pair{12.0, builtin_scalar(1, 3), make_family(FamilyKind::GeodesicSpheres, 3, 1)};
    auto cap = integrate_rho(pair, Launch::at_origin());
    auto adm = admissibility_check(cap);
    REQUIRE(adm.size() == 3);
    for (const auto& a : adm) {
        CAPTURE(a.name);
        CHECK(a.pass);
        CHECK(!a.skipped);
    }

    // outer annulus branch: launched at (lambda, 1) with tau decreasing
    auto co = csc_tau_coefficients(FamilyKind::GeodesicSpheres, 3, 1, 12.0);
    auto ti = integrate_tau_return(co, 0.2, M_PI / 2 - 1e-9);
    RhoSolution branch;
    branch.s = ti.s;
    for (size_t i = 0; i < ti.s.size(); ++i) {
        const double r = std::sqrt(std::clamp(ti.tau[i], 0.0, 1.0));
        branch.rho.push_back(r);
        branch.rho_prime.push_back(ti.tau_prime[i] / (2.0 * std::max(r, 1e-12)));
    }
    branch.s_start = branch.s.front();
    branch.delta = branch.s.back();
    branch.terminal = Terminal::ReachesOne;
    auto adm2 = admissibility_check(branch);
    CHECK(!adm2[0].pass);  // does not start on the axis
    CHECK(adm2[1].pass);
    CHECK(!adm2[2].pass);  // rho decreasing near the inner junction
    CHECK(adm2[2].max_residual > 0.0);
    CHECK(adm2[2].worst_s < 0.4);

    // the axis sentinel rho = 0 sits on the boundary of C2
    PairConfig dp{-6.0, builtin_scalar(-1, 3), make_family(FamilyKind::GeodesicSpheres, 3, -1)};
    auto degen = integrate_rho(dp, Launch::at_origin());
    auto adm3 = admissibility_check(degen);
    CHECK(adm3[0].pass);
    CHECK(!adm3[1].pass);
    CHECK(adm3[1].max_residual == 0.0);
}

TEST_CASE("height estimate") {
    auto model = build_rotational_csc(3, 1, 12.0);
    auto chk = height_estimate_check(model);
    CHECK(chk.pass);
    CHECK(!chk.skipped);
    CHECK(chk.max_residual == Approx(0.623225240140230513 - 1.0).epsilon(1e-6));

    auto weak = build_parabolic(3, -3.0, ParabolicVariant::EntireConstant);
    auto chk2 = height_estimate_check(weak);
    CHECK(chk2.skipped);
    CHECK(chk2.pass);

    auto bad = model;
    for (auto& p : bad.pieces) p.curve.phi_total = 1.2;
    auto chk3 = height_estimate_check(bad);
    CHECK(!chk3.pass);
    CHECK(chk3.max_residual == Approx(0.2).epsilon(1e-6));
}

TEST_CASE("oracle comparison") {
    auto model = build_rotational_csc(3, -1, 3.0);
    auto ref = reference_profile(model.info);
    REQUIRE(static_cast<bool>(ref));
    const auto& cv = model.pieces[0].curve;
    auto chk = oracle_compare(cv.s, cv.rho, ref, 1e-6);
    CHECK(chk.pass);

    auto off = oracle_compare(
        cv.s, cv.rho, [](double s) { return std::sqrt(1.5) * std::tanh(0.99 * s); }, 1e-6);
    CHECK(!off.pass);
    CHECK(off.max_residual > 1e-3);

    CHECK(!reference_profile(ModelInfo{}));  // nothing known for a blank model
}

TEST_CASE("full verification of every construction") {
    struct Item {
        HypersurfaceModel model;
        WeingartenSpec W;
    };
    std::vector<Item> items;
    items.push_back({build_rotational_csc(3, 1, 12.0), builtin_scalar(1, 3)});
    items.push_back({build_rotational_csc(3, -1, 0.0), builtin_scalar(-1, 3)});
    items.push_back({build_rotational_csc(3, -1, -3.0), builtin_scalar(-1, 3)});
    items.push_back({build_annulus(3, 1, 12.0, 0.2), builtin_scalar(1, 3)});
    items.push_back({build_annulus(3, -1, -3.0, 1.0), builtin_scalar(-1, 3)});
    items.push_back({build_parabolic(3, -6.0, ParabolicVariant::SymmetricBiGraph),
                     builtin_scalar(-1, 3)});
    items.push_back({build_parabolic(3, -3.0, ParabolicVariant::EntireConstant),
                     builtin_scalar(-1, 3)});
    items.push_back({build_hyperbolic(3, -3.0, 1.0), builtin_scalar(-1, 3)});

    for (const auto& it : items) {
        CAPTURE(it.model.info.construction);
        CAPTURE(it.model.info.c);
        auto rep = verify_model(it.model, it.W);
        CHECK(rep.overall_pass);

        const auto* res = rep.find("residual_weingarten");
        REQUIRE(res);
        CHECK(res->max_residual <= 1e-8);

        const auto* oc = rep.find("oracle_compare");
        REQUIRE(oc);
        CHECK(!oc->skipped);  // every builder has a closed-form reference
        CHECK(oc->max_residual <= 1e-6);
    }
}

TEST_CASE("report schema and determinism") {
    auto model = build_rotational_csc(3, 1, 12.0);
    auto rep = verify_model(model, builtin_scalar(1, 3));
    CHECK(rep.overall_pass);

    // admissibility runs on the origin-launched cap
    const auto* c3 = rep.find("admissibility_c3");
    REQUIRE(c3);
    CHECK(!c3->skipped);
    CHECK(c3->pass);

    auto text = to_json(rep);
    CHECK(text.find("\"overall_pass\": true") != std::string::npos);
    CHECK(text.find("\"residual_weingarten\"") != std::string::npos);
    CHECK(text.find("\"worst_s\"") != std::string::npos);
    CHECK(text == to_json(verify_model(model, builtin_scalar(1, 3))));

    // annulus models skip the admissibility block
    auto ann = verify_model(build_annulus(3, 1, 12.0, 0.2), builtin_scalar(1, 3));
    const auto* a1 = ann.find("admissibility_c1");
    REQUIRE(a1);
    CHECK(a1->skipped);
    CHECK(ann.overall_pass);
}
