#pragma once

// Profile curves: the ρ-solution lifted to the full geometric data of the
// graph it generates — height function φ, angle θ, principal curvatures per
// branch, mean/sectional curvatures — and the assembly of complete
// hypersurfaces (spheres, annuli, bigraphs) from mirrored copies.

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "weingarten/ambient.hpp"
#include "weingarten/rho_solver.hpp"

namespace weingarten {

struct PhiResult {
    std::vector<double> phi;   // cumulative height, phi[0] = 0 at the first sample
    double total = 0.0;        // φ(δ), including the vertical-tangency tail
    bool diverges = false;     // open truncated end: the height integral keeps growing
};

// φ(s) = ∫ ρ/√(1-ρ²) du, per-interval Gauss–Kronrod on the Hermite interpolant
// of the samples.  Near-vertical intervals (ρ ≥ 1-1e-4 with |ρ′| ≥ 1e-3,
// monotone) are integrated in ψ = arcsin ρ, which removes the endpoint
// singularity; a ReachesOne end short of ρ=1 contributes the analytic tail
// √(1-ρ_end²)/ρ′(δ).  Degenerate ρ ≡ 0 gives φ ≡ 0.
PhiResult integrate_phi(const RhoSolution& sol);

enum class Convexity { Strict, Weak, None };

std::string to_string(Convexity c);

struct ProfileCurve {
    AmbientFamily family;
    double c = 0.0;

    // per-sample arrays, all of size()
    std::vector<double> s, rho, rho_prime, phi, theta;
    std::vector<std::vector<double>> k_h;    // horizontal curvature, one row per branch
    std::vector<double> H1, H2, S;           // e₁, e₂ and the scalar curvature
    std::vector<std::pair<int, int>> tan_pairs;  // branch pairs indexing K_tan rows
    std::vector<std::vector<double>> K_tan;  // k_a k_b + ε per admissible branch pair
    std::vector<std::vector<double>> K_mix;  // k_j ρ′ + ε θ² per branch

    // end data carried over from the ρ-solution
    double s_start = 0.0;
    double delta = 0.0;
    Terminal terminal = Terminal::Truncated;
    double rho_prime_at_delta = 0.0;
    bool saturated = false;
    bool degenerate = false;
    Admissibility admissibility;

    double phi_total = 0.0;
    bool diverges = false;        // height unbounded through the far (large-s) end
    bool diverges_start = false;  // height unbounded through the open start
    bool low_regularity = false;  // |ρ′| exceeded 1e6 somewhere (steep junction)

    size_t size() const { return s.size(); }
    // extremes over all principal curvatures (every branch and the vertical slot)
    double k_min(size_t i) const;
    double k_max(size_t i) const;
    double k_tan_min(size_t i) const;  // NaN when no horizontal pair exists (n = 2)
    double k_mix_min(size_t i) const;
};

// Full per-sample curvature bookkeeping along a ρ-solution.  The axis sample
// of a singular family uses the residue limits k_j(0) = -r_j·ρ′(0).
ProfileCurve fields_along(const RhoSolution& sol, const AmbientFamily& family, double c);

// Strict: all principal curvatures beyond ±1e-10 with one sign; Weak: one-sided
// up to the same tolerance; None otherwise.
Convexity convexity_of(const ProfileCurve& curve);

enum class Topology { Sphere, EntireGraph, PeriodicAnnulus, BiGraph, Graph };

std::string to_string(Topology t);

enum class AssemblyMode { Sphere, Entire, Periodic, Double, Graph };

struct Piece {
    ProfileCurve curve;
    double offset = 0.0;
    bool reflected = false;

    double height(size_t i) const {
        return reflected ? offset - curve.phi[i] : offset + curve.phi[i];
    }
};

struct ModelInfo {
    std::string construction;
    std::string w_name;
    std::string w_expr;  // nonempty when W came from expression data
    int n = 0;
    int epsilon = 0;
    double c = 0.0;
    double lambda = std::nan("");
    double delta = std::nan("");
    double lambda_bar = std::nan("");
};

struct HypersurfaceModel {
    Topology topology = Topology::Graph;
    std::vector<Piece> pieces;
    std::vector<double> symmetry_planes;  // t-values of horizontal mirror planes
    Convexity convexity = Convexity::None;
    double period = 0.0;  // vertical period, PeriodicAnnulus only
    ModelInfo info;
};

// Places mirrored copies of one curve:
//   Sphere   — cap doubled across t = φ(δ); needs ρ(end) ≥ 1-1e-6.
//   Periodic — fundamental half-period doubled; needs ρ = 1 at both ends.
//   Double   — curve and its reflection across t = 0, glued at the vertical end.
//   Entire / Graph — the single piece as-is.
// Throws TangencyMismatchError when a required junction is not vertical.
HypersurfaceModel assemble(const ProfileCurve& curve, AssemblyMode mode);

struct HeightExtent {
    double t_min = 0.0, t_max = 0.0;  // over the recorded samples
    bool unbounded_below = false, unbounded_above = false;
};

// Extent of the height function over all pieces.  Strictly convex anchored
// pieces are checked against the height bound 1/min k + 1e-6.
HeightExtent height_extent(const HypersurfaceModel& model);

}  // namespace weingarten
