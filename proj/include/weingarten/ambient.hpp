#pragma once

// Isoparametric parallel families f_s of the fiber M_ε, described by the
// principal curvatures of the leaves: B branches (α_j(s), multiplicity m_j)
// with Σ m_j = n-1.  Built-ins cover geodesic sphere families (ε=±1),
// horospheres and equidistant hypersurfaces (ε=-1); custom families come from
// expression data (one α per branch).

#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace weingarten {

enum class FamilyKind { GeodesicSpheres, Horospheres, Equidistants, Custom };

std::string to_string(FamilyKind k);

struct CurvatureBranch {
    int multiplicity;
    std::function<double(double)> alpha;
    std::string alpha_text;  // expression source when data-defined, else descriptive
};

struct AmbientFamily {
    FamilyKind kind = FamilyKind::Custom;
    int dim = 0;       // n = dim(M) + 1, the hypersurface dimension of the graphs
    int epsilon = 0;   // curvature sign of the fiber
    std::vector<CurvatureBranch> branches;
    double s_lo = 0.0;
    double s_hi = std::numeric_limits<double>::infinity();
    bool origin_singular = false;
    std::vector<double> residues;  // per branch: lim s·α_j(s) as s→0⁺
    std::string name;

    int branch_count() const { return static_cast<int>(branches.size()); }
    bool contains(double s) const { return s > s_lo && s < s_hi; }
    // α_j(s); throws OutOfRangeError outside (s_lo, s_hi), EvaluatorError on NaN.
    double branch_curvature(int j, double s) const;
};

AmbientFamily make_family(FamilyKind kind, int n, int epsilon);

// residues may be empty for families regular at s=0.
AmbientFamily make_custom_family(std::vector<CurvatureBranch> branches, int n, int epsilon,
                                 std::pair<double, double> domain,
                                 std::vector<double> residues = {},
                                 const std::string& name = "custom");

// (α_j(s), m_j) per branch, in declaration order.
std::vector<std::pair<double, int>> principal_curvatures_at(const AmbientFamily& family,
                                                            double s);

}  // namespace weingarten
