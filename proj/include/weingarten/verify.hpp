#pragma once

// Independent audits of constructed models: every identity is re-derived from
// the raw (s, ρ, ρ′) samples and the family data, never read back from the
// cached curvature fields, so a corrupted field or a wrong construction shows
// up as a failing check rather than as self-consistent garbage.

#include <functional>
#include <string>
#include <vector>

#include "weingarten/profile.hpp"
#include "weingarten/rho_solver.hpp"

namespace weingarten {

struct CheckResult {
    std::string name;
    double max_residual = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    bool skipped = false;   // precondition not met; pass stays true
    double worst_s = 0.0;   // sample where the residual peaks
};

struct VerificationReport {
    std::vector<CheckResult> checks;
    bool overall_pass = true;

    void add(CheckResult r);
    const CheckResult* find(const std::string& name) const;
};

struct VerifyOptions {
    double tol_residual = 1e-8;  // pointwise relation residuals
    double tol_oracle = 1e-6;    // sup gaps against closed-form references
    double tol_fd = 1e-4;        // finite-difference identities
};

// max over samples of |W(k₁,…,k_n; θ²) - c| with the curvatures rebuilt from
// ρ, ρ′ and the branch functions (residue limits at a singular axis).
CheckResult residual_weingarten(const HypersurfaceModel& model, const WeingartenSpec& W,
                                double c, double tol = 1e-8);
CheckResult residual_weingarten(const ProfileCurve& curve, const WeingartenSpec& W, double c,
                                double tol = 1e-8);

// brute-force Σ_{i≠j} K_ij over all ordered principal pairs against the
// published H₂ route 2H₂ + ε(n-1)(2θ² + n - 2).
CheckResult gauss_consistency(const ProfileCurve& curve, double tol = 1e-9);

// |θ² + ρ² - 1| on the published angle column.
CheckResult theta_identity(const ProfileCurve& curve, double tol = 1e-12);

// three-point difference of φ against ρ/√(1-ρ²), relative to max(1, slope);
// stays out of the vertical-tangency layer ρ > 0.999.
CheckResult phi_slope_check(const ProfileCurve& curve, double tol = 1e-4);

// C1: launch at (0, 0); C2: 0 < ρ < 1 strictly at interior samples; C3:
// ρ′ > 0 there.  C1 passes at residual 0; C2/C3 report the negated worst
// margin and need it strictly negative.
std::vector<CheckResult> admissibility_check(const RhoSolution& sol);

// height of every piece against 1/inf k₀ + tol; skipped unless the model is
// strictly convex with positive curvature minimum.
CheckResult height_estimate_check(const HypersurfaceModel& model, double tol = 1e-6);

// sup |ρᵢ - reference(sᵢ)| over the sample grid.
CheckResult oracle_compare(const std::vector<double>& s, const std::vector<double>& rho,
                           const std::function<double(double)>& reference, double tol = 1e-6,
                           const std::string& name = "oracle_compare");
CheckResult oracle_compare(const RhoSolution& sol, const std::function<double(double)>& reference,
                           double tol = 1e-6);

// closed-form ρ for the CSC constructions, keyed on info.construction;
// empty when no reference form is known (custom W, generic runs).
std::function<double(double)> reference_profile(const ModelInfo& info);

// full audit: relation residual, Gauss identity, angle/slope identities,
// admissibility (origin-launched curves only), height estimate, and the
// closed-form oracle when one is known.
VerificationReport verify_model(const HypersurfaceModel& model, const WeingartenSpec& W,
                                const VerifyOptions& opts = {});

// report as a JSON object with stable field names (writer in serialization.cpp,
// shared with the model format).
std::string to_json(const VerificationReport& report);

}  // namespace weingarten
