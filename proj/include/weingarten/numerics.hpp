#pragma once

#include <functional>
#include <optional>

namespace weingarten {

struct RootOptions {
    double f_tol = 1e-12;    // |f(x)| at the returned root
    double x_tol = 1e-15;    // bracket width fallback (relative to |x|)
    int max_iter = 200;
};

// Root of a continuous f on a sign-changing bracket [lo, hi].
// Newton steps (when df given) safeguarded by bisection; falls back to the
// midpoint whenever Newton leaves the bracket or stalls.
double find_root(const std::function<double(double)>& f, double lo, double hi,
                 const std::function<double(double)>& df = nullptr,
                 RootOptions opts = {});

struct QuadratureOptions {
    double abs_tol = 1e-12;
    double rel_tol = 1e-12;
    int max_depth = 60;
};

// Adaptive Gauss–Kronrod (G7, K15) on a finite interval.
double integrate(const std::function<double(double)>& f, double a, double b,
                 QuadratureOptions opts = {});

// Cubic Hermite segment through (s0,y0,d0) and (s1,y1,d1).
struct HermiteSegment {
    double s0, s1, y0, y1, d0, d1;

    double value(double s) const;
    double slope(double s) const;
    // inverse for monotone segments: s with value(s)=y, via safeguarded Newton.
    double inverse(double y) const;
};

}  // namespace weingarten
