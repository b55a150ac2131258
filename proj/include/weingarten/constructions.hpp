#pragma once

// Named constructions for the scalar-curvature relation W_S = c on the three
// symmetric families: rotational spheres and entire graphs, Delaunay-type
// annuli, parabolic and hyperbolic bigraphs, plus the constant-sectional seed
// evaluators, homogeneous rescaling, and vertical cylinders for general W.

#include <functional>

#include "weingarten/profile.hpp"
#include "weingarten/rho_solver.hpp"
#include "weingarten/weingarten_function.hpp"

namespace weingarten {

// τ′ = a τ + b for W_S = c along the given family.
LinearODECoefficients csc_tau_coefficients(FamilyKind kind, int n, int epsilon, double c);

// Rotational constant-sectional-curvature hypersurface: Sphere for c > 0,
// entire graph for c ≤ 0 (ε = -1).  Throws DegenerateHyperplaneError at
// c = ε n(n-1) and OutOfRangeError below it.
HypersurfaceModel build_rotational_csc(int n, int epsilon, double c,
                                       IntegrateOptions opts = {});

// sup{λ : the return solution τ(λ)=1 starts decreasing} = annulus parameter range.
double annuli_threshold(int n, int epsilon, double c);

// Delaunay-type annulus Σ(λ): periodic when ε=1 or 𝔠 > 1, a symmetric
// unbounded bigraph when ε=-1 and 𝔠 ≤ 1.  Requires c > ε n(n-1) and
// 0 < λ < annuli_threshold.
HypersurfaceModel build_annulus(int n, int epsilon, double c, double lambda,
                                IntegrateOptions opts = {});

enum class ParabolicVariant { EntireConstant, SymmetricBiGraph };

// Constructions over the horosphere family (ε=-1, -n(n-1) ≤ c < 0): the
// constant-angle entire graph, or the symmetric bigraph glued at its vertical
// tangency.  c = -n(n-1) yields the slab of width 2π/n for the bigraph and is
// degenerate for the constant variant.
HypersurfaceModel build_parabolic(int n, double c, ParabolicVariant variant);

// Admissible-λ threshold for the equidistant-family bigraphs: 0 when n𝔠 ≤ 2,
// else arctanh √𝔠.
double hyperbolic_threshold(int n, double c);
// The sharp value arctanh √((n𝔠-2)/(n-2)) (informational; builders gate on
// hyperbolic_threshold).
double hyperbolic_threshold_tight(int n, double c);

// Bigraph over the equidistant family on [λ, ∞), τ decreasing from 1 to 𝔠.
// Requires -n(n-1) ≤ c < 0 and λ > hyperbolic_threshold.
HypersurfaceModel build_hyperbolic(int n, double c, double lambda);

enum class CscSectionalMode { Rotational, Hyperbolic, ParabolicConstant };

// Seed ρ-evaluators of constant sectional curvature K = c/(n(n-1)):
//   Rotational        ρ = √(K-ε) tan_ε,    K > ε
//   Hyperbolic        ρ = √(K+1) coth on [λ₀, ∞), λ₀ = arctanh √(K+1), -1 < K < 0
//   ParabolicConstant ρ ≡ √(K+1),          -1 ≤ K < 0  (K = -1 is the hyperplane)
CscClosedForm csc_sectional_rho(int n, int epsilon, double K, CscSectionalMode mode);

struct RescaledRho {
    double factor = 1.0;
    double s_lo = 0.0, s_hi = 0.0;  // domain, truncated at the first scaled ρ = 1
    double delta = std::numeric_limits<double>::infinity();
    std::function<double(double)> rho, rho_prime;
};

// For homogeneous W of degree d: ρ_c = (c/c₀)^{1/d} ρ₀ solves the relation at
// level c.  Interpolates the base grid; requires d > 0 and c, c₀ > 0.
RescaledRho rescale_homogeneous(const RhoSolution& base, double c0, double c, double degree);

// Radius s₀ of the vertical cylinder over a geodesic sphere: the unique root
// of W(cot_ε(s₀),…,cot_ε(s₀),0; θ²=0) = c.  Throws NoRootError when ε=-1 and
// c does not exceed the asymptotic value W(1,…,1,0).
double cylinder_radius(const WeingartenSpec& W, double c, int epsilon, int n);

}  // namespace weingarten
