#include "weingarten/ambient.hpp"

#include <cmath>

#include "weingarten/errors.hpp"
#include "weingarten/trig.hpp"

namespace weingarten {

std::string to_string(FamilyKind k) {
    switch (k) {
        case FamilyKind::GeodesicSpheres: return "geodesic-spheres";
        case FamilyKind::Horospheres: return "horospheres";
        case FamilyKind::Equidistants: return "equidistants";
        case FamilyKind::Custom: return "custom";
    }
    return "?";
}

double AmbientFamily::branch_curvature(int j, double s) const {
    if (!contains(s))
        throw OutOfRangeError("family '" + name + "': s = " + std::to_string(s) +
                              " outside (" + std::to_string(s_lo) + ", " +
                              std::to_string(s_hi) + ")");
    const double v = branches[static_cast<size_t>(j)].alpha(s);
    if (std::isnan(v))
        throw EvaluatorError("family '" + name + "': branch " + std::to_string(j) +
                             " evaluated to NaN at s = " + std::to_string(s));
    return v;
}

AmbientFamily make_family(FamilyKind kind, int n, int epsilon) {
    if (n < 2) throw OutOfRangeError("make_family: n must be >= 2");
    if (epsilon != 1 && epsilon != -1)
        throw OutOfRangeError("make_family: epsilon must be +1 or -1");

    AmbientFamily f;
    f.kind = kind;
    f.dim = n;
    f.epsilon = epsilon;
    f.name = to_string(kind);

    switch (kind) {
        case FamilyKind::GeodesicSpheres: {
            const int eps = epsilon;
            f.s_lo = 0.0;
            f.s_hi = fiber_radius(eps);
            f.origin_singular = true;
            f.branches.push_back({n - 1, [eps](double s) { return -cot_e(eps, s); },
                                  eps > 0 ? "-cot(s)" : "-coth(s)"});
            f.residues.assign(1, -1.0);
            break;
        }
        case FamilyKind::Horospheres: {
            if (epsilon != -1)
                throw OutOfRangeError("horospheres require epsilon = -1");
            f.s_lo = -std::numeric_limits<double>::infinity();
            f.s_hi = std::numeric_limits<double>::infinity();
            f.branches.push_back({n - 1, [](double) { return 1.0; }, "1"});
            break;
        }
        case FamilyKind::Equidistants: {
            if (epsilon != -1)
                throw OutOfRangeError("equidistant hypersurfaces require epsilon = -1");
            f.s_lo = -std::numeric_limits<double>::infinity();
            f.s_hi = std::numeric_limits<double>::infinity();
            f.branches.push_back({n - 1, [](double s) { return -std::tanh(s); }, "-tanh(s)"});
            break;
        }
        case FamilyKind::Custom:
            throw OutOfRangeError("make_family: custom families need make_custom_family");
    }
    return f;
}

AmbientFamily make_custom_family(std::vector<CurvatureBranch> branches, int n, int epsilon,
                                 std::pair<double, double> domain,
                                 std::vector<double> residues, const std::string& name) {
    if (n < 2) throw OutOfRangeError("make_custom_family: n must be >= 2");
    if (epsilon != 1 && epsilon != -1)
        throw OutOfRangeError("make_custom_family: epsilon must be +1 or -1");
    if (!(domain.first < domain.second))
        throw OutOfRangeError("make_custom_family: empty domain");
    int total = 0;
    for (const auto& b : branches) {
        if (b.multiplicity < 1)
            throw OutOfRangeError("make_custom_family: branch multiplicity must be >= 1");
        total += b.multiplicity;
    }
    if (total != n - 1)
        throw OutOfRangeError("make_custom_family: multiplicities sum to " +
                              std::to_string(total) + ", expected n-1 = " +
                              std::to_string(n - 1));
    if (!residues.empty() && residues.size() != branches.size())
        throw OutOfRangeError("make_custom_family: one residue per branch required");

    AmbientFamily f;
    f.kind = FamilyKind::Custom;
    f.dim = n;
    f.epsilon = epsilon;
    f.branches = std::move(branches);
    f.s_lo = domain.first;
    f.s_hi = domain.second;
    f.origin_singular = !residues.empty();
    f.residues = std::move(residues);
    f.name = name;
    return f;
}

std::vector<std::pair<double, int>> principal_curvatures_at(const AmbientFamily& family,
                                                            double s) {
    std::vector<std::pair<double, int>> out;
    out.reserve(family.branches.size());
    for (int j = 0; j < family.branch_count(); ++j)
        out.emplace_back(family.branch_curvature(j, s),
                         family.branches[static_cast<size_t>(j)].multiplicity);
    return out;
}

}  // namespace weingarten
