#pragma once

// Symmetric curvature relations W(k₁,…,k_n, θ²).  Ellipticity (∂W/∂k_i > 0 on
// the positive cone) is what makes the per-step slope equation uniquely
// solvable; it is audited by seeded sampling rather than assumed.

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace weingarten {

struct WeingartenSpec {
    std::string name;
    int arity = 0;  // number of curvature slots, = graph dimension n
    std::function<double(std::span<const double>, double)> value_fn;
    // optional analytic gradient in k; central differences otherwise
    std::function<std::vector<double>(std::span<const double>, double)> grad_fn;
    bool depends_on_theta = false;
    std::optional<double> homogeneity;  // degree, when W(t·k) = t^d W(k)
    std::string cone = "k_i > 0";       // evaluation domain description (contains Γ₊)

    // throws EvaluatorError on NaN
    double value(std::span<const double> k, double theta2) const;
    std::vector<double> grad_k(std::span<const double> k, double theta2) const;
};

// elementary symmetric polynomial e_r of k (the r-th mean curvature, unnormalized)
WeingartenSpec builtin_hr(int r, int n);
// ‖A‖ = sqrt(Σ k_i²)
WeingartenSpec builtin_norm_a(int n);
// scalar-curvature relation 2H₂ + ε(n-1)(2θ² + n - 2)
WeingartenSpec builtin_scalar(int epsilon, int n);
// by name: "H1".."H9", "normA", "WS" (epsilon used only for "WS")
WeingartenSpec builtin(const std::string& name, int n, int epsilon = 1);

// W*(k) = 1/W(1/k₁,…,1/k_n); requires a θ-independent spec, positive on Γ₊.
WeingartenSpec inverse_of(const WeingartenSpec& spec);

// expr over variables e1..e<n>, sumsq and (iff depends_on_theta) theta2.
WeingartenSpec from_expression(const std::string& name, int n, const std::string& expr,
                               bool depends_on_theta);

struct EllipticityViolation {
    std::vector<double> k;
    double theta2;
    double partial;   // most negative ∂W/∂k_i there (or 0 if value violation only)
    double value;     // W at the sample
};

struct EllipticityReport {
    uint64_t seed = 0;
    int samples = 0;
    double min_partial = 0.0;     // over all samples, components and θ² ∈ {0, ½, 1}
    double min_value = 0.0;       // W itself on the same samples
    std::vector<EllipticityViolation> violations;  // nonpositive partials
    bool pass() const { return min_partial > 0.0; }
};

struct EllipticityOptions {
    int samples = 1000;
    uint64_t seed = 2026;
    bool strict = false;  // throw Error on any violation (incl. nonpositive value)
};

// log-uniform samples of Γ₊ ∩ (1e-3, 1e3)^n, each evaluated at θ² ∈ {0, ½, 1}.
EllipticityReport check_ellipticity(const WeingartenSpec& spec, EllipticityOptions opts = {});

// log-fit of W(t·k)/W(k) over t ∈ {0.5, 2, 7} on seeded Γ₊ samples; nullopt when
// the fit residual exceeds 1e-8 (inhomogeneous W).  Requires θ-independence.
std::optional<double> homogeneity_degree(const WeingartenSpec& spec, uint64_t seed = 2026);

}  // namespace weingarten
