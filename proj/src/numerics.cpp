#include "weingarten/numerics.hpp"

#include <algorithm>
#include <cmath>

#include "weingarten/errors.hpp"

namespace weingarten {

double find_root(const std::function<double(double)>& f, double lo, double hi,
                 const std::function<double(double)>& df, RootOptions opts) {
    double flo = f(lo), fhi = f(hi);
    if (std::fabs(flo) <= opts.f_tol) return lo;
    if (std::fabs(fhi) <= opts.f_tol) return hi;
    if (flo * fhi > 0.0)
        throw NoRootError("find_root: bracket does not change sign");
    // keep flo < 0 < fhi orientation-independent: track signs explicitly
    double x = 0.5 * (lo + hi);
    double width_prev = hi - lo;
    int stalled = 0;
    for (int it = 0; it < opts.max_iter; ++it) {
        double fx = f(x);
        if (std::fabs(fx) <= opts.f_tol) return x;
        if ((fx < 0.0) == (flo < 0.0)) {
            lo = x;
            flo = fx;
        } else {
            hi = x;
            fhi = fx;
        }
        double width = hi - lo;
        if (width <= opts.x_tol * std::max(1.0, std::fabs(x))) return x;
        double next = 0.0;
        bool ok = false;
        if (df) {
            const double d = df(x);
            if (d != 0.0 && std::isfinite(d)) {
                next = x - fx / d;
                ok = next > lo && next < hi;
            }
        }
        if (!ok) {
            // secant through the bracket endpoints, else midpoint
            next = (lo * fhi - hi * flo) / (fhi - flo);
            if (!(next > lo && next < hi) || !std::isfinite(next))
                next = 0.5 * (lo + hi);
        }
        // false position can stagnate with one pinned endpoint: force a
        // bisection whenever two iterations fail to contract the bracket
        stalled = width > 0.7 * width_prev ? stalled + 1 : 0;
        if (stalled >= 2) {
            next = 0.5 * (lo + hi);
            stalled = 0;
        }
        width_prev = width;
        x = next;
    }
    return x;  // max_iter exhausted: best bracket midpoint so far
}

namespace {

// Kronrod 15-point nodes/weights on [-1,1] (Gauss 7 embedded).
constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.0};
constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
constexpr double kWg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

struct PanelResult {
    double kronrod;
    double err;
};

PanelResult gk15(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double resk = 0.0, resg = 0.0;
    for (int j = 0; j < 8; ++j) {
        const double x = h * kXgk[j];
        double fv;
        if (j == 7) {
            fv = f(c);
            resk += kWgk[7] * fv;
            resg += kWg[3] * fv;
        } else {
            const double f1 = f(c - x), f2 = f(c + x);
            resk += kWgk[j] * (f1 + f2);
            if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
        }
    }
    resk *= h;
    resg *= h;
    return {resk, std::fabs(resk - resg)};
}

double adapt(const std::function<double(double)>& f, double a, double b, double tol,
             int depth, const QuadratureOptions& opts) {
    const PanelResult r = gk15(f, a, b);
    if (r.err <= tol || r.err <= opts.rel_tol * std::fabs(r.kronrod)) return r.kronrod;
    if (depth >= opts.max_depth)
        throw QuadratureError("integrate: max refinement depth reached");
    const double m = 0.5 * (a + b);
    return adapt(f, a, m, 0.5 * tol, depth + 1, opts) +
           adapt(f, m, b, 0.5 * tol, depth + 1, opts);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 QuadratureOptions opts) {
    if (a == b) return 0.0;
    const double sign = a < b ? 1.0 : -1.0;
    if (sign < 0) std::swap(a, b);
    return sign * adapt(f, a, b, opts.abs_tol, 0, opts);
}

double HermiteSegment::value(double s) const {
    const double h = s1 - s0;
    const double t = (s - s0) / h;
    const double t2 = t * t, t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * h * d0 +
           (-2 * t3 + 3 * t2) * y1 + (t3 - t2) * h * d1;
}

double HermiteSegment::slope(double s) const {
    const double h = s1 - s0;
    const double t = (s - s0) / h;
    const double t2 = t * t;
    return ((6 * t2 - 6 * t) * y0 + (3 * t2 - 4 * t + 1) * h * d0 +
            (-6 * t2 + 6 * t) * y1 + (3 * t2 - 2 * t) * h * d1) /
           h;
}

double HermiteSegment::inverse(double y) const {
    double lo = s0, hi = s1;
    const bool increasing = y1 > y0;
    double x = s0 + (s1 - s0) * (y - y0) / (y1 - y0);
    if (!(x >= lo && x <= hi)) x = 0.5 * (lo + hi);
    for (int it = 0; it < 100; ++it) {
        const double v = value(x) - y;
        if (std::fabs(v) < 1e-15 * std::max(1.0, std::fabs(y))) return x;
        if ((v > 0) == increasing)
            hi = x;
        else
            lo = x;
        const double d = slope(x);
        double next = d != 0.0 ? x - v / d : 0.5 * (lo + hi);
        if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
        if (std::fabs(next - x) < 1e-16 * std::max(1.0, std::fabs(x))) return next;
        x = next;
    }
    return x;
}

}  // namespace weingarten
