#pragma once

// ε-parameterized trigonometry: ε=+1 gives the circular functions, ε=-1 the
// hyperbolic ones.  Used for the model fibers M_ε (round sphere / hyperbolic
// space) so that one formula covers both curvature signs.

#include <cmath>
#include <limits>

#include "weingarten/errors.hpp"

namespace weingarten {

inline double sin_e(int eps, double s) { return eps > 0 ? std::sin(s) : std::sinh(s); }
inline double cos_e(int eps, double s) { return eps > 0 ? std::cos(s) : std::cosh(s); }
inline double tan_e(int eps, double s) { return eps > 0 ? std::tan(s) : std::tanh(s); }

inline double cot_e(int eps, double s) {
    return eps > 0 ? std::cos(s) / std::sin(s) : std::cosh(s) / std::sinh(s);
}

// d/ds tan_e(s) = 1 + ε tan_e²(s)
inline double dtan_e(int eps, double s) {
    const double t = tan_e(eps, s);
    return 1.0 + eps * t * t;
}

// inverse of tan_e; for ε=-1 the argument must lie in (-1, 1).
inline double arctan_e(int eps, double x) {
    if (eps > 0) return std::atan(x);
    if (std::fabs(x) >= 1.0)
        throw OutOfRangeError("arctan_e: |x| >= 1 with eps = -1");
    return std::atanh(x);
}

// radius of the ambient fiber's cut locus: π/2 for the sphere, ∞ otherwise.
inline double fiber_radius(int eps) {
    return eps > 0 ? 1.5707963267948966 : std::numeric_limits<double>::infinity();
}

}  // namespace weingarten
