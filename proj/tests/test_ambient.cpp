#include <cmath>

#include "doctest.h"
#include "weingarten/ambient.hpp"
#include "weingarten/errors.hpp"
#include "weingarten/expression.hpp"

using namespace weingarten;

TEST_CASE("geodesic sphere families") {
    auto fam = make_family(FamilyKind::GeodesicSpheres, 3, 1);
    CHECK(fam.dim == 3);
    CHECK(fam.epsilon == 1);
    REQUIRE(fam.branch_count() == 1);
    CHECK(fam.branches[0].multiplicity == 2);
    CHECK(fam.s_lo == 0.0);
    CHECK(fam.s_hi == doctest::Approx(1.57079632679489662).epsilon(1e-16));
    CHECK(fam.origin_singular);
    REQUIRE(fam.residues.size() == 1);
    CHECK(fam.residues[0] == -1.0);
    CHECK(fam.branch_curvature(0, 0.3) ==
          doctest::Approx(-std::cos(0.3) / std::sin(0.3)).epsilon(1e-15));
    CHECK(!fam.contains(0.0));
    CHECK(fam.contains(1.5));
    CHECK_THROWS_AS(fam.branch_curvature(0, 2.0), OutOfRangeError);
    CHECK_THROWS_AS(fam.branch_curvature(0, -0.1), OutOfRangeError);

    auto hyp = make_family(FamilyKind::GeodesicSpheres, 4, -1);
    CHECK(hyp.branches[0].multiplicity == 3);
    CHECK(std::isinf(hyp.s_hi));
    CHECK(hyp.branch_curvature(0, 1.0) ==
          doctest::Approx(-1.31303528549933130).epsilon(1e-15));
}

TEST_CASE("horospheres and equidistants need the hyperbolic fiber") {
    auto horo = make_family(FamilyKind::Horospheres, 5, -1);
    CHECK(horo.branches[0].multiplicity == 4);
    CHECK(horo.branch_curvature(0, -3.0) == 1.0);
    CHECK(horo.branch_curvature(0, 7.0) == 1.0);
    CHECK(!horo.origin_singular);
    CHECK(horo.residues.empty());
    CHECK(std::isinf(-horo.s_lo));
    CHECK_THROWS_AS(make_family(FamilyKind::Horospheres, 3, 1), OutOfRangeError);

    auto eq = make_family(FamilyKind::Equidistants, 3, -1);
    CHECK(eq.branch_curvature(0, 1.0) ==
          doctest::Approx(-0.761594155955764888).epsilon(1e-15));
    CHECK(eq.branch_curvature(0, 0.0) == 0.0);
    CHECK(!eq.origin_singular);
    CHECK_THROWS_AS(make_family(FamilyKind::Equidistants, 3, 1), OutOfRangeError);
}

TEST_CASE("custom families") {
    // two-branch family mimicking a rank-two sphere foliation
    auto a0 = Expression::parse("-cot(s)", {"s"});
    auto a1 = Expression::parse("-2*cot(2*s)", {"s"});
    std::vector<CurvatureBranch> branches{
        {2, [a0](double s) { return a0.eval(std::vector<double>{s}); }, "-cot(s)"},
        {1, [a1](double s) { return a1.eval(std::vector<double>{s}); }, "-2*cot(2*s)"},
    };
    auto fam = make_custom_family(branches, 4, 1, {0.0, 0.785398163397448310},
                                  {-1.0, -1.0}, "two-branch");
    CHECK(fam.kind == FamilyKind::Custom);
    CHECK(fam.origin_singular);
    CHECK(fam.branch_curvature(1, 0.3) ==
          doctest::Approx(-2.0 * std::cos(0.6) / std::sin(0.6)).epsilon(1e-14));

    auto pcs = principal_curvatures_at(fam, 0.5);
    REQUIRE(pcs.size() == 2);
    CHECK(pcs[0].second == 2);
    CHECK(pcs[1].second == 1);
    CHECK(pcs[0].first == doctest::Approx(-std::cos(0.5) / std::sin(0.5)).epsilon(1e-14));

    // multiplicities must sum to n-1, residues must match branch count
    CHECK_THROWS_AS(make_custom_family(branches, 5, 1, {0.0, 1.0}, {-1.0, -1.0}),
                    OutOfRangeError);
    CHECK_THROWS_AS(make_custom_family(branches, 4, 1, {0.0, 1.0}, {-1.0}),
                    OutOfRangeError);
    CHECK_THROWS_AS(make_custom_family(branches, 4, 1, {1.0, 1.0}, {-1.0, -1.0}),
                    OutOfRangeError);

    // regular custom family: no residues, origin not singular
    std::vector<CurvatureBranch> flat{{3, [](double) { return 0.5; }, "0.5"}};
    auto reg = make_custom_family(flat, 4, -1, {-5.0, 5.0});
    CHECK(!reg.origin_singular);
    CHECK(reg.branch_curvature(0, -2.0) == 0.5);
}
