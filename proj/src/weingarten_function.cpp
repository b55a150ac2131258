#include "weingarten/weingarten_function.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "weingarten/errors.hpp"
#include "weingarten/expression.hpp"

namespace weingarten {

double WeingartenSpec::value(std::span<const double> k, double theta2) const {
    if (static_cast<int>(k.size()) != arity)
        throw Error("W '" + name + "': expected " + std::to_string(arity) +
                    " curvatures, got " + std::to_string(k.size()));
    const double v = value_fn(k, theta2);
    if (std::isnan(v))
        throw EvaluatorError("W '" + name + "' evaluated to NaN");
    return v;
}

std::vector<double> WeingartenSpec::grad_k(std::span<const double> k, double theta2) const {
    if (grad_fn) return grad_fn(k, theta2);
    // central differences, h scaled to the curvature magnitude
    std::vector<double> g(k.size());
    std::vector<double> kp(k.begin(), k.end());
    double scale = 1.0;
    for (double v : k) scale = std::max(scale, std::fabs(v));
    const double h = 1e-6 * scale;
    for (size_t i = 0; i < k.size(); ++i) {
        kp[i] = k[i] + h;
        const double fp = value(kp, theta2);
        kp[i] = k[i] - h;
        const double fm = value(kp, theta2);
        kp[i] = k[i];
        g[i] = (fp - fm) / (2.0 * h);
    }
    return g;
}

namespace {

// e_0..e_r of the values in k
std::vector<double> elementary_symmetric(std::span<const double> k, int r) {
    std::vector<double> e(static_cast<size_t>(r) + 1, 0.0);
    e[0] = 1.0;
    for (size_t i = 0; i < k.size(); ++i)
        for (int j = std::min<int>(r, static_cast<int>(i) + 1); j >= 1; --j)
            e[static_cast<size_t>(j)] += k[i] * e[static_cast<size_t>(j - 1)];
    return e;
}

}  // namespace

WeingartenSpec builtin_hr(int r, int n) {
    if (n < 2 || r < 1 || r > n)
        throw OutOfRangeError("builtin_hr: need 1 <= r <= n");
    WeingartenSpec w;
    w.name = "H" + std::to_string(r);
    w.arity = n;
    w.homogeneity = static_cast<double>(r);
    w.value_fn = [r](std::span<const double> k, double) {
        return elementary_symmetric(k, r)[static_cast<size_t>(r)];
    };
    w.grad_fn = [r, n](std::span<const double> k, double) {
        std::vector<double> g(static_cast<size_t>(n));
        std::vector<double> rest(static_cast<size_t>(n) - 1);
        for (int i = 0; i < n; ++i) {
            rest.clear();
            for (int j = 0; j < n; ++j)
                if (j != i) rest.push_back(k[static_cast<size_t>(j)]);
            g[static_cast<size_t>(i)] =
                elementary_symmetric(rest, r - 1)[static_cast<size_t>(r - 1)];
        }
        return g;
    };
    return w;
}

WeingartenSpec builtin_norm_a(int n) {
    if (n < 2) throw OutOfRangeError("builtin_norm_a: n must be >= 2");
    WeingartenSpec w;
    w.name = "normA";
    w.arity = n;
    w.homogeneity = 1.0;
    w.value_fn = [](std::span<const double> k, double) {
        double q = 0.0;
        for (double v : k) q += v * v;
        return std::sqrt(q);
    };
    w.grad_fn = [](std::span<const double> k, double) {
        double q = 0.0;
        for (double v : k) q += v * v;
        const double norm = std::sqrt(q);
        std::vector<double> g(k.size());
        for (size_t i = 0; i < k.size(); ++i) g[i] = k[i] / norm;
        return g;
    };
    return w;
}

WeingartenSpec builtin_scalar(int epsilon, int n) {
    if (n < 2) throw OutOfRangeError("builtin_scalar: n must be >= 2");
    if (epsilon != 1 && epsilon != -1)
        throw OutOfRangeError("builtin_scalar: epsilon must be +1 or -1");
    WeingartenSpec w;
    w.name = "WS";
    w.arity = n;
    w.depends_on_theta = true;
    w.cone = "all of R^n";
    w.value_fn = [epsilon, n](std::span<const double> k, double theta2) {
        double h1 = 0.0, q = 0.0;
        for (double v : k) {
            h1 += v;
            q += v * v;
        }
        const double h2 = 0.5 * (h1 * h1 - q);
        return 2.0 * h2 + epsilon * (n - 1) * (2.0 * theta2 + n - 2);
    };
    w.grad_fn = [](std::span<const double> k, double) {
        double h1 = 0.0;
        for (double v : k) h1 += v;
        std::vector<double> g(k.size());
        for (size_t i = 0; i < k.size(); ++i) g[i] = 2.0 * (h1 - k[i]);
        return g;
    };
    return w;
}

WeingartenSpec builtin(const std::string& name, int n, int epsilon) {
    if (name == "normA") return builtin_norm_a(n);
    if (name == "WS") return builtin_scalar(epsilon, n);
    if (name.size() >= 2 && name[0] == 'H') {
        const int r = std::atoi(name.c_str() + 1);
        if (r >= 1 && r <= n) return builtin_hr(r, n);
    }
    throw SchemaError("unknown builtin W '" + name + "' (have H1..H<n>, normA, WS)");
}

WeingartenSpec inverse_of(const WeingartenSpec& spec) {
    if (spec.depends_on_theta)
        throw OutOfRangeError("inverse_of: spec must be theta-independent");
    WeingartenSpec w;
    w.name = spec.name + "*";
    w.arity = spec.arity;
    w.homogeneity = spec.homogeneity;
    w.cone = "k_i > 0";
    auto invert = [spec](std::span<const double> k) {
        std::vector<double> inv(k.size());
        for (size_t i = 0; i < k.size(); ++i) {
            if (k[i] == 0.0)
                throw OutOfRangeError("W '" + spec.name + "*': k_i = 0 is outside the domain");
            if (k[i] < 0.0)
                throw OutOfRangeError("W '" + spec.name +
                                      "*': 1/k_i leaves the cone of the base relation");
            inv[i] = 1.0 / k[i];
        }
        return inv;
    };
    w.value_fn = [spec, invert](std::span<const double> k, double) {
        return 1.0 / spec.value(invert(k), 1.0);
    };
    w.grad_fn = [spec, invert](std::span<const double> k, double) {
        const std::vector<double> inv = invert(k);
        const double v = spec.value(inv, 1.0);
        const std::vector<double> g0 = spec.grad_k(inv, 1.0);
        std::vector<double> g(k.size());
        for (size_t i = 0; i < k.size(); ++i) g[i] = g0[i] / (v * v * k[i] * k[i]);
        return g;
    };
    return w;
}

WeingartenSpec from_expression(const std::string& name, int n, const std::string& expr,
                               bool depends_on_theta) {
    if (n < 2 || n > 9) throw OutOfRangeError("from_expression: need 2 <= n <= 9");
    std::vector<std::string> vars;
    for (int r = 1; r <= n; ++r) vars.push_back("e" + std::to_string(r));
    vars.push_back("sumsq");
    if (depends_on_theta) vars.push_back("theta2");
    const Expression parsed = Expression::parse(expr, vars);

    WeingartenSpec w;
    w.name = name;
    w.arity = n;
    w.depends_on_theta = depends_on_theta;
    w.value_fn = [parsed, n, depends_on_theta](std::span<const double> k, double theta2) {
        const std::vector<double> e = elementary_symmetric(k, n);
        std::vector<double> vals;
        vals.reserve(static_cast<size_t>(n) + 2);
        for (int r = 1; r <= n; ++r) vals.push_back(e[static_cast<size_t>(r)]);
        double q = 0.0;
        for (double v : k) q += v * v;
        vals.push_back(q);
        if (depends_on_theta) vals.push_back(theta2);
        return parsed.eval(vals);
    };
    return w;
}

EllipticityReport check_ellipticity(const WeingartenSpec& spec, EllipticityOptions opts) {
    EllipticityReport rep;
    rep.seed = opts.seed;
    rep.samples = opts.samples;
    rep.min_partial = std::numeric_limits<double>::infinity();
    rep.min_value = std::numeric_limits<double>::infinity();

    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> uni(std::log(1e-3), std::log(1e3));
    const double thetas[3] = {0.0, 0.5, 1.0};
    std::vector<double> k(static_cast<size_t>(spec.arity));

    for (int i = 0; i < opts.samples; ++i) {
        for (auto& v : k) v = std::exp(uni(rng));
        for (double t2 : thetas) {
            const double val = spec.value(k, t2);
            rep.min_value = std::min(rep.min_value, val);
            const std::vector<double> g = spec.grad_k(k, t2);
            double worst = std::numeric_limits<double>::infinity();
            for (double gi : g) worst = std::min(worst, gi);
            rep.min_partial = std::min(rep.min_partial, worst);
            if (worst <= 0.0 && rep.violations.size() < 16)
                rep.violations.push_back({k, t2, worst, val});
            if (opts.strict && (worst <= 0.0 || val <= 0.0))
                throw Error("W '" + spec.name + "' failed the strict ellipticity audit (" +
                            (worst <= 0.0 ? "nonpositive partial" : "nonpositive value") +
                            " at a cone sample)");
        }
    }
    return rep;
}

std::optional<double> homogeneity_degree(const WeingartenSpec& spec, uint64_t seed) {
    if (spec.depends_on_theta)
        throw OutOfRangeError("homogeneity_degree: spec must be theta-independent");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(std::log(0.2), std::log(5.0));
    const double ts[3] = {0.5, 2.0, 7.0};
    std::vector<double> k(static_cast<size_t>(spec.arity)), kt(k.size());

    std::vector<double> estimates;
    for (int i = 0; i < 8; ++i) {
        for (auto& v : k) v = std::exp(uni(rng));
        const double base = spec.value(k, 1.0);
        if (base <= 0.0) return std::nullopt;
        for (double t : ts) {
            for (size_t j = 0; j < k.size(); ++j) kt[j] = t * k[j];
            const double scaled = spec.value(kt, 1.0);
            if (scaled <= 0.0) return std::nullopt;
            estimates.push_back(std::log(scaled / base) / std::log(t));
        }
    }
    double mean = 0.0;
    for (double d : estimates) mean += d;
    mean /= static_cast<double>(estimates.size());
    for (double d : estimates)
        if (std::fabs(d - mean) > 1e-8) return std::nullopt;
    return mean;
}

}  // namespace weingarten
