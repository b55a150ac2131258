#pragma once

// First-order reduction of the curvature relation on parallel graphs:
//
//   W(-k₁ˢ(s)·ρ, …, -k_{n-1}ˢ(s)·ρ, ρ′, 1-ρ²) = c,      ρ = φ′/√(1+φ′²)
//
// ρ′ is obtained per step by monotone root-finding in the last slot
// (ellipticity makes the root unique on the cone), then advanced with an
// embedded Dormand–Prince 5(4) pair.  Events (vertical tangency ρ→1, slope
// collapse ρ′→0, domain end, truncation) are localized by bisection.

#include <cmath>
#include <functional>
#include <vector>

#include "weingarten/ambient.hpp"
#include "weingarten/weingarten_function.hpp"

namespace weingarten {

struct PairConfig {
    double c = 0.0;
    WeingartenSpec W;
    AmbientFamily family;  // W.arity must equal family.dim
};

enum class Terminal { ReachesOne, SlopeZero, Truncated, DomainBoundary };

std::string to_string(Terminal t);

struct Admissibility {
    bool c1 = false;  // launches vertically from the axis (origin with ρ(0)=0)
    bool c2 = false;  // 0 < ρ < 1 on the interior
    bool c3 = false;  // ρ′ > 0 on the interior (audited with a -1e-10 noise floor)
    double c2_worst_s = std::nan("");
    double c3_worst_s = std::nan("");
};

struct RhoSolution {
    std::vector<double> s, rho, rho_prime;
    double s_start = 0.0;
    double delta = 0.0;            // event location (or truncation point)
    Terminal terminal = Terminal::Truncated;
    double rho_prime_at_delta = std::nan("");  // one-sided slope at δ
    bool degenerate = false;       // ρ ≡ 0 horizontal-hyperplane sentinel
    bool saturated = false;        // truncated by asymptotic contact with ρ=1 or ρ′=0
    Admissibility admissibility;

    size_t size() const { return s.size(); }
};

struct Launch {
    bool origin = true;
    double s0 = 0.0, rho0 = 0.0;

    static Launch at_origin() { return {}; }
    static Launch interior(double s0, double rho0) { return {false, s0, rho0}; }
};

struct IntegrateOptions {
    double h_init = 1e-3;
    double tol = 1e-11;            // local error control (abs and rel)
    double s_max = 50.0;
    double h_max = 0.05;           // cap on the recorded step
    double record_kappa = 0.01;    // density rule: h ≤ κ / |d(log φ′)/ds|
    double reach_one_margin = 1e-6;
    double slope_zero_eps = 1e-8;
    double event_tol = 1e-10;      // |Δs| for event bisection
    double residual_tol = 1e-8;    // per-sample re-verification of W(...)=c
    double transversal_rho_prime = 1e-3;  // ReachesOne vs asymptotic saturation
    double transversal_slope_rate = 1e-4; // SlopeZero vs exponential decay
};

// |W(-k₁ˢρ, …, ρ′, 1-ρ²) - c| recomputed from one raw sample; the axis sample
// (s = 0 on a singular family) uses the residue limits -r_j·ρ′.
double relation_residual(const PairConfig& pair, double s, double rho, double rho_prime);

// slope m₀ of the vertical axis launch: smallest positive root of
// W(-r₁m, …, -r_{n-1}m, m, 1) = c (residues r_j = lim s·α_j).  Returns 0 for
// the degenerate horizontal-hyperplane case W(0,…,0,1) = c.
double initial_slope(const PairConfig& pair);

// ρ′ at (s, ρ): unique root of the relation in the last slot, |residual| ≤ 1e-12.
double step_slope(const PairConfig& pair, double s, double rho);

RhoSolution integrate_rho(const PairConfig& pair, Launch launch, IntegrateOptions opts = {});

enum class TerminalKind { SphereCap, Cusp, Equator, Entire, Indeterminate };

std::string to_string(TerminalKind k);

// SphereCap: ReachesOne with ρ′(δ) > 0; Cusp: ReachesOne with ρ′(δ) ≤ 0;
// Equator: SlopeZero; Entire: Truncated with C1–C3; Indeterminate otherwise.
TerminalKind classify_terminal(const RhoSolution& sol);

// τ = ρ² satisfies τ′ = a(s)τ + b(s) for the scalar-curvature relation on the
// symmetric families; solved exactly by variation of parameters with adaptive
// quadrature (tol 1e-12).
struct LinearODECoefficients {
    std::function<double(double)> a, b;
    double s_lo = 0.0, s_hi = 0.0;
};

std::function<double(double)> solve_linear_tau(const LinearODECoefficients& coeffs,
                                               double s0, double tau0);

// Normalized parameter 𝔠_n = (c - ε n(n-1)) / (n(n-1)).
struct CscParameters {
    int n = 0;
    int epsilon = 0;
    double c = 0.0;
    double frak_c = 0.0;

    static CscParameters make(int n, int epsilon, double c);
};

enum class CscMode { RotationalSeed, ParabolicConstant, ParabolicGraph, Hyperbolic };

struct CscClosedForm {
    std::function<double(double)> rho, rho_prime;
    double s_lo = 0.0, s_hi = 0.0;   // natural domain of the formula
    double delta = std::numeric_limits<double>::infinity();  // ρ=1 location, if any
    double limit = std::nan("");     // τ limit at the open end, if any
};

// lambda: left endpoint for Hyperbolic (ignored otherwise).
CscClosedForm csc_closed_form(CscMode mode, const CscParameters& p, double lambda = 0.0);

// RK-integrated τ for the annulus search: launch τ(λ)=1, stop at the ascending
// return τ=1 (event bisected) or at s_cap.
struct TauIntegration {
    std::vector<double> s, tau, tau_prime;
    bool returned = false;
    double end_s = 0.0, end_tau = 0.0, tau_prime_at_end = 0.0;
};

TauIntegration integrate_tau_return(const LinearODECoefficients& coeffs, double lambda,
                                    double s_cap, IntegrateOptions opts = {});

}  // namespace weingarten
