#include "weingarten/serialization.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <span>
#include <sstream>
#include <utility>

#include "json.hpp"
#include "weingarten/errors.hpp"
#include "weingarten/expression.hpp"

namespace weingarten {

namespace {

// ---- writer -----------------------------------------------------------
//
// Hand-rolled so the byte layout is ours: two-space indent, `"key": value`,
// numbers through format_g17, non-finite values as null.  nlohmann handles
// parsing only — its dump() makes its own float-formatting choices.

void ind(std::string& o, int lv) {
    for (int i = 0; i < lv; ++i) o += "  ";
}

void key(std::string& o, int lv, const char* k) {
    ind(o, lv);
    o += '"';
    o += k;
    o += "\": ";
}

std::string jstr(const std::string& s) {
    std::string o = "\"";
    for (char ch : s) {
        switch (ch) {
            case '"': o += "\\\""; break;
            case '\\': o += "\\\\"; break;
            case '\n': o += "\\n"; break;
            case '\t': o += "\\t"; break;
            case '\r': o += "\\r"; break;
            default:
                if (static_cast<unsigned char>(ch) < 0x20) {
                    char buf[8];
                    std::snprintf(buf, sizeof buf, "\\u%04x", ch);
                    o += buf;
                } else {
                    o += ch;
                }
        }
    }
    o += '"';
    return o;
}

std::string jnum(double v) {
    return std::isfinite(v) ? format_g17(v) : "null";
}

const char* jbool(bool b) { return b ? "true" : "false"; }

void put_array(std::string& o, const std::vector<double>& v) {
    o += '[';
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) o += ", ";
        o += jnum(v[i]);
    }
    o += ']';
}

void report_body(std::string& o, const VerificationReport& rep, int lv) {
    o += "{\n";
    key(o, lv + 1, "overall_pass");
    o += jbool(rep.overall_pass);
    o += ",\n";
    key(o, lv + 1, "checks");
    o += '[';
    for (size_t i = 0; i < rep.checks.size(); ++i) {
        const CheckResult& c = rep.checks[i];
        o += i ? ",\n" : "\n";
        ind(o, lv + 2);
        o += "{\n";
        key(o, lv + 3, "name");
        o += jstr(c.name);
        o += ",\n";
        key(o, lv + 3, "max_residual");
        o += jnum(c.max_residual);
        o += ",\n";
        key(o, lv + 3, "tolerance");
        o += jnum(c.tolerance);
        o += ",\n";
        key(o, lv + 3, "pass");
        o += jbool(c.pass);
        o += ",\n";
        key(o, lv + 3, "skipped");
        o += jbool(c.skipped);
        o += ",\n";
        key(o, lv + 3, "worst_s");
        o += jnum(c.worst_s);
        o += '\n';
        ind(o, lv + 2);
        o += '}';
    }
    if (!rep.checks.empty()) {
        o += '\n';
        ind(o, lv + 1);
    }
    o += "]\n";
    ind(o, lv);
    o += '}';
}

void family_body(std::string& o, const AmbientFamily& f, int lv) {
    o += "{\n";
    key(o, lv + 1, "kind");
    o += jstr(to_string(f.kind));
    o += ",\n";
    key(o, lv + 1, "name");
    o += jstr(f.name);
    o += ",\n";
    key(o, lv + 1, "n");
    o += std::to_string(f.dim);
    o += ",\n";
    key(o, lv + 1, "epsilon");
    o += std::to_string(f.epsilon);
    o += ",\n";
    key(o, lv + 1, "domain");
    o += '[';
    o += jnum(f.s_lo);
    o += ", ";
    o += jnum(f.s_hi);
    o += "],\n";
    key(o, lv + 1, "origin_singular");
    o += jbool(f.origin_singular);
    o += ",\n";
    key(o, lv + 1, "residues");
    put_array(o, f.residues);
    o += ",\n";
    key(o, lv + 1, "branches");
    o += '[';
    for (size_t i = 0; i < f.branches.size(); ++i) {
        o += i ? ",\n" : "\n";
        ind(o, lv + 2);
        o += "{\"mult\": ";
        o += std::to_string(f.branches[i].multiplicity);
        o += ", \"alpha\": ";
        o += jstr(f.branches[i].alpha_text);
        o += '}';
    }
    if (!f.branches.empty()) {
        o += '\n';
        ind(o, lv + 1);
    }
    o += "]\n";
    ind(o, lv);
    o += '}';
}

void weingarten_body(std::string& o, const std::string& name, int n, const std::string& expr,
                     bool theta, int lv) {
    o += "{\n";
    key(o, lv + 1, "name");
    o += jstr(name);
    o += ",\n";
    key(o, lv + 1, "n");
    o += std::to_string(n);
    o += ",\n";
    key(o, lv + 1, "expr");
    o += jstr(expr);
    o += ",\n";
    key(o, lv + 1, "theta");
    o += jbool(theta);
    o += '\n';
    ind(o, lv);
    o += '}';
}

// ---- reader -----------------------------------------------------------

using nlohmann::json;

json jparse(const std::string& text) {
    json j = json::parse(text, nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded()) throw SchemaError("not valid JSON");
    return j;
}

const json& need(const json& j, const char* k) {
    if (!j.is_object()) throw SchemaError(std::string("expected an object around '") + k + "'");
    auto it = j.find(k);
    if (it == j.end()) throw SchemaError(std::string("missing '") + k + "'");
    return *it;
}

double dnum(const json& v, const char* what) {
    if (!v.is_number()) throw SchemaError(std::string(what) + " must be a number");
    return v.get<double>();
}

// null stands for NaN (writer side: non-finite -> null)
double dnum_or_nan(const json& v, const char* what) {
    if (v.is_null()) return std::nan("");
    return dnum(v, what);
}

int inum(const json& v, const char* what) {
    if (!v.is_number_integer()) throw SchemaError(std::string(what) + " must be an integer");
    return v.get<int>();
}

bool bval(const json& v, const char* what) {
    if (!v.is_boolean()) throw SchemaError(std::string(what) + " must be a boolean");
    return v.get<bool>();
}

std::string sval(const json& v, const char* what) {
    if (!v.is_string()) throw SchemaError(std::string(what) + " must be a string");
    return v.get<std::string>();
}

const json& avec(const json& v, const char* what) {
    if (!v.is_array()) throw SchemaError(std::string(what) + " must be an array");
    return v;
}

std::vector<double> dvec(const json& v, const char* what) {
    std::vector<double> out;
    for (const auto& e : avec(v, what)) out.push_back(dnum(e, what));
    return out;
}

AmbientFamily family_from_json(const json& j) {
    std::string kind = "custom";  // the bare document schema is a custom family
    if (auto it = j.find("kind"); it != j.end()) kind = sval(*it, "family kind");
    const int n = inum(need(j, "n"), "family n");
    const int eps = inum(need(j, "epsilon"), "family epsilon");
    if (kind == "geodesic-spheres") return make_family(FamilyKind::GeodesicSpheres, n, eps);
    if (kind == "horospheres") return make_family(FamilyKind::Horospheres, n, eps);
    if (kind == "equidistants") return make_family(FamilyKind::Equidistants, n, eps);
    if (kind != "custom") throw SchemaError("unknown family kind '" + kind + "'");

    const json& dom = avec(need(j, "domain"), "family domain");
    if (dom.size() != 2) throw SchemaError("family domain must be [lo, hi]");
    const double inf = std::numeric_limits<double>::infinity();
    double lo = dom[0].is_null() ? -inf : dnum(dom[0], "domain lo");
    double hi = dom[1].is_null() ? inf : dnum(dom[1], "domain hi");

    std::vector<CurvatureBranch> branches;
    for (const auto& bj : avec(need(j, "branches"), "family branches")) {
        int mult = inum(need(bj, "mult"), "branch mult");
        std::string txt = sval(need(bj, "alpha"), "branch alpha");
        Expression ex = Expression::parse(txt, {"s"});
        branches.push_back({mult,
                            [ex](double s) {
                                return ex.eval(std::span<const double>(&s, 1));
                            },
                            txt});
    }

    std::vector<double> residues;
    if (auto it = j.find("residues"); it != j.end() && !it->is_null())
        residues = dvec(*it, "family residues");
    std::string name = "custom";
    if (auto it = j.find("name"); it != j.end()) name = sval(*it, "family name");
    return make_custom_family(std::move(branches), n, eps, {lo, hi}, std::move(residues), name);
}

Terminal terminal_from(const std::string& s) {
    if (s == "reaches-one") return Terminal::ReachesOne;
    if (s == "slope-zero") return Terminal::SlopeZero;
    if (s == "truncated") return Terminal::Truncated;
    if (s == "domain-boundary") return Terminal::DomainBoundary;
    throw SchemaError("unknown terminal '" + s + "'");
}

Topology topology_from(const std::string& s) {
    if (s == "Sphere") return Topology::Sphere;
    if (s == "EntireGraph") return Topology::EntireGraph;
    if (s == "PeriodicAnnulus") return Topology::PeriodicAnnulus;
    if (s == "BiGraph") return Topology::BiGraph;
    if (s == "Graph") return Topology::Graph;
    throw SchemaError("unknown topology '" + s + "'");
}

Convexity convexity_from(const std::string& s) {
    if (s == "Strict") return Convexity::Strict;
    if (s == "Weak") return Convexity::Weak;
    if (s == "None") return Convexity::None;
    throw SchemaError("unknown convexity '" + s + "'");
}

std::string fmt9(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

}  // namespace

std::string format_g17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::string family_to_json(const AmbientFamily& family, int indent) {
    std::string o;
    family_body(o, family, indent);
    return o;
}

AmbientFamily family_from_json_text(const std::string& text) {
    return family_from_json(jparse(text));
}

std::string weingarten_to_json(const WeingartenSpec& W, int indent) {
    std::string o;
    weingarten_body(o, W.name, W.arity, "", W.depends_on_theta, indent);
    return o;
}

WeingartenSpec weingarten_from_fields(const std::string& name, int n, int epsilon,
                                      const std::string& expr, bool theta) {
    if (!expr.empty()) return from_expression(name, n, expr, theta);
    std::string base = name;
    if (base.rfind("Hr:", 0) == 0) base = "H" + base.substr(3);  // "Hr:2" -> "H2"
    return builtin(base, n, epsilon);
}

WeingartenSpec weingarten_from_json_text(const std::string& text, int epsilon) {
    json j = jparse(text);
    std::string expr;
    if (auto it = j.find("expr"); it != j.end() && !it->is_null())
        expr = sval(*it, "weingarten expr");
    bool theta = false;
    if (auto it = j.find("theta"); it != j.end()) theta = bval(*it, "weingarten theta");
    return weingarten_from_fields(sval(need(j, "name"), "weingarten name"),
                                  inum(need(j, "n"), "weingarten n"), epsilon, expr, theta);
}

std::string to_json(const VerificationReport& report) {
    std::string o;
    report_body(o, report, 0);
    return o;
}

std::string model_to_json(const HypersurfaceModel& model, const WeingartenSpec& W,
                          const VerificationReport* report) {
    const ModelInfo& info = model.info;
    std::string o;
    o += "{\n";
    key(o, 1, "format_version");
    o += std::to_string(kFormatVersion);
    o += ",\n";
    key(o, 1, "topology");
    o += jstr(to_string(model.topology));
    o += ",\n";
    key(o, 1, "convexity");
    o += jstr(to_string(model.convexity));
    o += ",\n";
    key(o, 1, "period");
    o += jnum(model.period);
    o += ",\n";
    key(o, 1, "symmetry_planes");
    put_array(o, model.symmetry_planes);
    o += ",\n";
    key(o, 1, "info");
    o += "{\n";
    key(o, 2, "construction");
    o += jstr(info.construction);
    o += ",\n";
    key(o, 2, "w_name");
    o += jstr(info.w_name);
    o += ",\n";
    key(o, 2, "w_expr");
    o += jstr(info.w_expr);
    o += ",\n";
    key(o, 2, "n");
    o += std::to_string(info.n);
    o += ",\n";
    key(o, 2, "epsilon");
    o += std::to_string(info.epsilon);
    o += ",\n";
    key(o, 2, "c");
    o += jnum(info.c);
    o += ",\n";
    key(o, 2, "lambda");
    o += jnum(info.lambda);
    o += ",\n";
    key(o, 2, "delta");
    o += jnum(info.delta);
    o += ",\n";
    key(o, 2, "lambda_bar");
    o += jnum(info.lambda_bar);
    o += '\n';
    ind(o, 1);
    o += "},\n";
    key(o, 1, "weingarten");
    weingarten_body(o, W.name, W.arity, info.w_expr, W.depends_on_theta, 1);
    o += ",\n";
    key(o, 1, "family");
    // the family is piece-invariant; pieces reference it implicitly
    family_body(o, model.pieces.empty() ? AmbientFamily{} : model.pieces.front().curve.family, 1);
    o += ",\n";
    key(o, 1, "pieces");
    o += '[';
    for (size_t p = 0; p < model.pieces.size(); ++p) {
        const Piece& pc = model.pieces[p];
        const ProfileCurve& cv = pc.curve;
        o += p ? ",\n" : "\n";
        ind(o, 2);
        o += "{\n";
        key(o, 3, "offset");
        o += jnum(pc.offset);
        o += ",\n";
        key(o, 3, "reflected");
        o += jbool(pc.reflected);
        o += ",\n";
        key(o, 3, "s_start");
        o += jnum(cv.s_start);
        o += ",\n";
        key(o, 3, "delta");
        o += jnum(cv.delta);
        o += ",\n";
        key(o, 3, "terminal");
        o += jstr(to_string(cv.terminal));
        o += ",\n";
        key(o, 3, "rho_prime_at_delta");
        o += jnum(cv.rho_prime_at_delta);
        o += ",\n";
        key(o, 3, "saturated");
        o += jbool(cv.saturated);
        o += ",\n";
        key(o, 3, "degenerate");
        o += jbool(cv.degenerate);
        o += ",\n";
        key(o, 3, "diverges");
        o += jbool(cv.diverges);
        o += ",\n";
        key(o, 3, "diverges_start");
        o += jbool(cv.diverges_start);
        o += ",\n";
        key(o, 3, "admissibility");
        o += "{\"c1\": ";
        o += jbool(cv.admissibility.c1);
        o += ", \"c2\": ";
        o += jbool(cv.admissibility.c2);
        o += ", \"c3\": ";
        o += jbool(cv.admissibility.c3);
        o += "},\n";
        key(o, 3, "samples");
        o += "{\n";
        key(o, 4, "s");
        put_array(o, cv.s);
        o += ",\n";
        key(o, 4, "rho");
        put_array(o, cv.rho);
        o += ",\n";
        key(o, 4, "rho_prime");
        put_array(o, cv.rho_prime);
        o += '\n';
        ind(o, 3);
        o += "}\n";
        ind(o, 2);
        o += '}';
    }
    if (!model.pieces.empty()) {
        o += '\n';
        ind(o, 1);
    }
    o += "],\n";
    key(o, 1, "verification");
    if (report) {
        report_body(o, *report, 1);
    } else {
        o += "null";
    }
    o += "\n}\n";
    return o;
}

HypersurfaceModel model_from_json_text(const std::string& text, WeingartenSpec* W_out) {
    json j = jparse(text);
    if (!j.is_object()) throw SchemaError("model document must be a JSON object");
    if (inum(need(j, "format_version"), "format_version") != kFormatVersion)
        throw SchemaError("unsupported format_version");

    HypersurfaceModel m;
    m.topology = topology_from(sval(need(j, "topology"), "topology"));
    m.convexity = convexity_from(sval(need(j, "convexity"), "convexity"));
    m.period = dnum(need(j, "period"), "period");
    m.symmetry_planes = dvec(need(j, "symmetry_planes"), "symmetry_planes");

    const json& ji = need(j, "info");
    m.info.construction = sval(need(ji, "construction"), "info construction");
    m.info.w_name = sval(need(ji, "w_name"), "info w_name");
    m.info.w_expr = sval(need(ji, "w_expr"), "info w_expr");
    m.info.n = inum(need(ji, "n"), "info n");
    m.info.epsilon = inum(need(ji, "epsilon"), "info epsilon");
    m.info.c = dnum(need(ji, "c"), "info c");
    m.info.lambda = dnum_or_nan(need(ji, "lambda"), "info lambda");
    m.info.delta = dnum_or_nan(need(ji, "delta"), "info delta");
    m.info.lambda_bar = dnum_or_nan(need(ji, "lambda_bar"), "info lambda_bar");

    AmbientFamily family = family_from_json(need(j, "family"));

    const json& jw = need(j, "weingarten");
    WeingartenSpec W =
        weingarten_from_fields(sval(need(jw, "name"), "weingarten name"),
                               inum(need(jw, "n"), "weingarten n"), m.info.epsilon,
                               sval(need(jw, "expr"), "weingarten expr"),
                               bval(need(jw, "theta"), "weingarten theta"));
    if (W_out) *W_out = W;

    for (const auto& pj : avec(need(j, "pieces"), "pieces")) {
        const json& smp = need(pj, "samples");
        RhoSolution sol;
        sol.s = dvec(need(smp, "s"), "samples s");
        sol.rho = dvec(need(smp, "rho"), "samples rho");
        sol.rho_prime = dvec(need(smp, "rho_prime"), "samples rho_prime");
        if (sol.s.empty() || sol.rho.size() != sol.s.size() ||
            sol.rho_prime.size() != sol.s.size())
            throw SchemaError("piece samples must be three equal-length nonempty arrays");
        sol.s_start = dnum(need(pj, "s_start"), "piece s_start");
        sol.delta = dnum(need(pj, "delta"), "piece delta");
        sol.terminal = terminal_from(sval(need(pj, "terminal"), "piece terminal"));
        sol.rho_prime_at_delta = dnum_or_nan(need(pj, "rho_prime_at_delta"), "rho_prime_at_delta");
        sol.saturated = bval(need(pj, "saturated"), "piece saturated");
        sol.degenerate = bval(need(pj, "degenerate"), "piece degenerate");
        const json& adm = need(pj, "admissibility");
        sol.admissibility.c1 = bval(need(adm, "c1"), "admissibility c1");
        sol.admissibility.c2 = bval(need(adm, "c2"), "admissibility c2");
        sol.admissibility.c3 = bval(need(adm, "c3"), "admissibility c3");

        Piece piece;
        try {
            piece.curve = fields_along(sol, family, m.info.c);
        } catch (const SchemaError&) {
            throw;
        } catch (const Error& e) {
            throw SchemaError(std::string("stored samples incompatible with family: ") + e.what());
        }
        // the builders overwrite the divergence flags after fields_along;
        // restore the stored values rather than the re-derived defaults
        piece.curve.diverges = bval(need(pj, "diverges"), "piece diverges");
        piece.curve.diverges_start = bval(need(pj, "diverges_start"), "piece diverges_start");
        piece.offset = dnum(need(pj, "offset"), "piece offset");
        piece.reflected = bval(need(pj, "reflected"), "piece reflected");
        m.pieces.push_back(std::move(piece));
    }
    return m;
}

std::string profile_csv(const Piece& piece) {
    const ProfileCurve& cv = piece.curve;
    std::string o = "s,rho,rho_prime,phi,theta,k_min,k_max,H1,H2,S,K_tan,K_mix\n";
    for (size_t i = 0; i < cv.size(); ++i) {
        o += format_g17(cv.s[i]);
        o += ',';
        o += format_g17(cv.rho[i]);
        o += ',';
        o += format_g17(cv.rho_prime[i]);
        o += ',';
        o += format_g17(piece.height(i));
        o += ',';
        o += format_g17(cv.theta[i]);
        o += ',';
        o += format_g17(cv.k_min(i));
        o += ',';
        o += format_g17(cv.k_max(i));
        o += ',';
        o += format_g17(cv.H1[i]);
        o += ',';
        o += format_g17(cv.H2[i]);
        o += ',';
        o += format_g17(cv.S[i]);
        o += ',';
        o += format_g17(cv.k_tan_min(i));
        o += ',';
        o += format_g17(cv.k_mix_min(i));
        o += '\n';
    }
    return o;
}

std::string revolution_obj(const HypersurfaceModel& model, int segments, std::size_t max_rings) {
    if (segments < 3) throw OutOfRangeError("revolution_obj: need at least 3 segments");
    if (max_rings < 2) throw OutOfRangeError("revolution_obj: need at least 2 rings");
    const int eps = model.pieces.empty() ? model.info.epsilon
                                         : model.pieces.front().curve.family.epsilon;
    std::string o;
    o += "# surface of revolution, ";
    o += to_string(model.topology);
    o += '\n';
    o += "# construction: ";
    o += model.info.construction.empty() ? "generic" : model.info.construction;
    o += '\n';
    // radius chart: r = sin(s) on the spherical fiber, r = tanh(s/2) on the
    // Poincaré ball; height is the vertical coordinate as stored
    o += eps >= 0 ? "# radius: sin(s)\n" : "# radius: tanh(s/2)\n";
    if (model.topology == Topology::PeriodicAnnulus) {
        o += "# period: ";
        o += format_g17(model.period);
        o += "\n# fundamental_copies: 1 (translate by multiples of the period to extend)\n";
    }
    o += "o weingarten\n";
    size_t base = 1;
    for (const Piece& pc : model.pieces) {
        const ProfileCurve& cv = pc.curve;
        const size_t count = cv.size();
        if (count < 2) continue;
        size_t stride = (count - 1 + max_rings - 2) / (max_rings - 1);
        if (stride == 0) stride = 1;
        std::vector<size_t> rows;
        for (size_t i = 0; i < count; i += stride) rows.push_back(i);
        if (rows.back() != count - 1) rows.push_back(count - 1);

        for (size_t i : rows) {
            const double r = eps >= 0 ? std::sin(cv.s[i]) : std::tanh(cv.s[i] / 2.0);
            const double t = pc.height(i);
            for (int k = 0; k < segments; ++k) {
                const double ang = 2.0 * M_PI * k / segments;
                o += "v ";
                o += fmt9(r * std::cos(ang));
                o += ' ';
                o += fmt9(t);
                o += ' ';
                o += fmt9(r * std::sin(ang));
                o += '\n';
            }
        }
        const size_t nseg = static_cast<size_t>(segments);
        for (size_t ring = 0; ring + 1 < rows.size(); ++ring) {
            for (size_t k = 0; k < nseg; ++k) {
                const size_t a = base + ring * nseg + k;
                const size_t b = base + ring * nseg + (k + 1) % nseg;
                const size_t c = base + (ring + 1) * nseg + (k + 1) % nseg;
                const size_t d = base + (ring + 1) * nseg + k;
                o += "f " + std::to_string(a) + ' ' + std::to_string(b) + ' ' +
                     std::to_string(c) + '\n';
                o += "f " + std::to_string(a) + ' ' + std::to_string(c) + ' ' +
                     std::to_string(d) + '\n';
            }
        }
        base += rows.size() * nseg;
    }
    return o;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open '" + path + "' for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError("read failure on '" + path + "'");
    return ss.str();
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + path + "' for writing");
    out << contents;
    out.flush();
    if (!out) throw IoError("write failure on '" + path + "'");
}

}  // namespace weingarten
