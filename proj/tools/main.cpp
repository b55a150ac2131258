// command-line front door: construct / sweep / verify / thresholds / families / export

#include <cmath>
#include <cstdlib>
#include <future>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "weingarten/constructions.hpp"
#include "weingarten/errors.hpp"
#include "weingarten/serialization.hpp"
#include "weingarten/verify.hpp"

using namespace weingarten;

namespace {

uint64_t seed_from_env() {
    const char* v = std::getenv("WEINGARTEN_SEED");
    return v ? std::strtoull(v, nullptr, 10) : 2026;
}

const char* reason_of(const Error& e) {
    if (dynamic_cast<const NoOriginRootError*>(&e)) return "NoOriginRoot";
    if (dynamic_cast<const NoRootError*>(&e)) return "NoRoot";
    if (dynamic_cast<const OutOfRangeError*>(&e)) return "OutOfRange";
    if (dynamic_cast<const DegenerateHyperplaneError*>(&e)) return "Degenerate";
    if (dynamic_cast<const TangencyMismatchError*>(&e)) return "TangencyMismatch";
    if (dynamic_cast<const NonSingularFamilyError*>(&e)) return "NonSingularFamily";
    if (dynamic_cast<const EvaluatorError*>(&e)) return "Evaluator";
    if (dynamic_cast<const StepUnderflowError*>(&e)) return "StepUnderflow";
    if (dynamic_cast<const QuadratureError*>(&e)) return "Quadrature";
    return "Error";
}

FamilyKind kind_from_name(const std::string& name) {
    if (name == "spheres" || name == "geodesic-spheres") return FamilyKind::GeodesicSpheres;
    if (name == "horospheres") return FamilyKind::Horospheres;
    if (name == "equidistants") return FamilyKind::Equidistants;
    throw SchemaError("unknown family '" + name + "' (spheres, horospheres, equidistants)");
}

struct RunConfig {
    std::string family = "spheres";
    std::string family_file;
    int n = 3;
    int eps = 1;
    std::string W_name = "WS";
    std::string W_expr;
    bool W_theta = false;
    double c = 0.0;
    double lambda = 0.0;
    bool has_lambda = false;
    std::string variant = "bigraph";
    double launch_s = 0.0, launch_rho = 0.0;
    bool has_launch = false;
    double s_max = 50.0;
    double tol = 1e-11;
    bool strict_ellipticity = false;
    std::string out;

    // sweep grid
    double c_from = 0.0, c_to = 0.0;
    int c_steps = 1;
    double lambda_from = 0.0, lambda_to = 0.0;
    int lambda_steps = 0;
    int jobs = 1;

    // verify / export
    std::string model_path;
    std::string format = "model-json";
    int segments = 48;
    int max_rings = 400;
    VerifyOptions vopts;
};

AmbientFamily resolve_family(const RunConfig& cfg) {
    if (!cfg.family_file.empty()) return family_from_json_text(read_file(cfg.family_file));
    return make_family(kind_from_name(cfg.family), cfg.n, cfg.eps);
}

WeingartenSpec resolve_W(const RunConfig& cfg) {
    return weingarten_from_fields(cfg.W_name, cfg.n, cfg.eps, cfg.W_expr, cfg.W_theta);
}

// warn (or reject under --strict-ellipticity) before spending time integrating
bool ellipticity_gate(const WeingartenSpec& W, const RunConfig& cfg) {
    EllipticityReport rep = check_ellipticity(W, {1000, seed_from_env(), false});
    if (rep.pass()) return true;
    std::cerr << "weingarten: W fails the ellipticity audit (min partial "
              << format_g17(rep.min_partial) << " over " << rep.samples << " samples, seed "
              << rep.seed << ")\n";
    return !cfg.strict_ellipticity;
}

bool is_scalar_relation(const RunConfig& cfg) {
    return cfg.W_expr.empty() && cfg.W_name == "WS" && cfg.family_file.empty();
}

HypersurfaceModel construct_model(const RunConfig& cfg, const WeingartenSpec& W) {
    IntegrateOptions opts;
    opts.s_max = cfg.s_max;
    opts.tol = cfg.tol;

    if (is_scalar_relation(cfg)) {
        const FamilyKind kind = kind_from_name(cfg.family);
        if (kind == FamilyKind::GeodesicSpheres && cfg.has_lambda)
            return build_annulus(cfg.n, cfg.eps, cfg.c, cfg.lambda, opts);
        if (kind == FamilyKind::Horospheres) {
            if (cfg.eps != -1) throw OutOfRangeError("horospheres need --eps -1");
            return build_parabolic(cfg.n, cfg.c,
                                   cfg.variant == "entire" ? ParabolicVariant::EntireConstant
                                                           : ParabolicVariant::SymmetricBiGraph);
        }
        if (kind == FamilyKind::Equidistants && cfg.has_lambda) {
            if (cfg.eps != -1) throw OutOfRangeError("equidistants need --eps -1");
            return build_hyperbolic(cfg.n, cfg.c, cfg.lambda);
        }
        // rotational branch only above the degenerate level; at or below it the
        // generic path reports the honest failure mode (degenerate / no origin root)
        if (kind == FamilyKind::GeodesicSpheres &&
            cfg.c > static_cast<double>(cfg.eps) * cfg.n * (cfg.n - 1))
            return build_rotational_csc(cfg.n, cfg.eps, cfg.c, opts);
    }

    AmbientFamily fam = resolve_family(cfg);
    Launch launch =
        cfg.has_launch ? Launch::interior(cfg.launch_s, cfg.launch_rho) : Launch::at_origin();
    RhoSolution sol = integrate_rho({cfg.c, W, fam}, launch, opts);
    ProfileCurve curve = fields_along(sol, fam, cfg.c);
    TerminalKind kind = classify_terminal(sol);
    AssemblyMode mode = kind == TerminalKind::SphereCap ? AssemblyMode::Sphere
                        : kind == TerminalKind::Entire  ? AssemblyMode::Entire
                                                        : AssemblyMode::Graph;
    HypersurfaceModel model = assemble(curve, mode);
    model.info.construction = "generic";
    model.info.w_name = W.name;
    model.info.w_expr = cfg.W_expr;
    model.info.n = fam.dim;
    model.info.epsilon = fam.epsilon;
    model.info.c = cfg.c;
    model.info.delta = sol.delta;
    return model;
}

int cmd_construct(const RunConfig& cfg) {
    WeingartenSpec W = resolve_W(cfg);
    if (!ellipticity_gate(W, cfg)) return 1;
    HypersurfaceModel model = construct_model(cfg, W);
    VerificationReport report = verify_model(model, W);
    const std::string doc = model_to_json(model, W, &report);
    if (cfg.out.empty()) {
        std::cout << doc;
    } else {
        write_file(cfg.out, doc);
        std::cout << to_string(model.topology) << "  pieces=" << model.pieces.size()
                  << "  delta=" << format_g17(model.pieces.front().curve.delta)
                  << "  verification=" << (report.overall_pass ? "pass" : "FAIL") << "  -> "
                  << cfg.out << "\n";
    }
    return 0;
}

int cmd_thresholds(const RunConfig& cfg) {
    const double level = static_cast<double>(cfg.eps) * cfg.n * (cfg.n - 1);
    const double frak = (cfg.c - level) / (cfg.n * (cfg.n - 1));
    double delta = std::numeric_limits<double>::infinity();
    if (frak > 0.0)
        delta = cfg.eps == 1 ? std::atan(1.0 / std::sqrt(frak))
                             : (frak > 1.0 ? std::atanh(1.0 / std::sqrt(frak)) : delta);
    std::cout << "delta = " << format_g17(delta) << "\n";
    std::cout << "delta_eps = " << format_g17(annuli_threshold(cfg.n, cfg.eps, cfg.c)) << "\n";
    if (cfg.eps == -1 && cfg.c < 0.0 && cfg.c >= -static_cast<double>(cfg.n) * (cfg.n - 1)) {
        std::cout << "hyperbolic_lambda = " << format_g17(hyperbolic_threshold(cfg.n, cfg.c))
                  << "\n";
        std::cout << "hyperbolic_lambda_tight = "
                  << format_g17(hyperbolic_threshold_tight(cfg.n, cfg.c)) << "\n";
    }
    return 0;
}

int cmd_families(const RunConfig& cfg) {
    struct Row {
        FamilyKind kind;
        int eps;
    };
    const Row rows[] = {{FamilyKind::GeodesicSpheres, 1},
                        {FamilyKind::GeodesicSpheres, -1},
                        {FamilyKind::Horospheres, -1},
                        {FamilyKind::Equidistants, -1}};
    for (const Row& r : rows) {
        AmbientFamily f = make_family(r.kind, cfg.n, r.eps);
        std::cout << to_string(f.kind) << "  eps=" << (r.eps > 0 ? "+1" : "-1") << "  domain=("
                  << format_g17(f.s_lo) << ", " << format_g17(f.s_hi) << ")  branches=[";
        for (size_t b = 0; b < f.branches.size(); ++b) {
            if (b) std::cout << ", ";
            std::cout << f.branches[b].multiplicity << " x " << f.branches[b].alpha_text;
        }
        std::cout << "]";
        if (f.origin_singular) {
            std::cout << "  residues=[";
            for (size_t b = 0; b < f.residues.size(); ++b) {
                if (b) std::cout << ", ";
                std::cout << format_g17(f.residues[b]);
            }
            std::cout << "]";
        }
        std::cout << "\n";
    }
    std::cout << "custom: JSON document {\"n\", \"epsilon\", \"domain\", \"branches\":"
                 " [{\"mult\", \"alpha\"}], \"residues\"} via --family-file\n";
    return 0;
}

int cmd_verify(const RunConfig& cfg) {
    WeingartenSpec W;
    HypersurfaceModel model = model_from_json_text(read_file(cfg.model_path), &W);
    VerificationReport report = verify_model(model, W, cfg.vopts);
    const std::string doc = to_json(report) + "\n";
    if (cfg.out.empty())
        std::cout << doc;
    else
        write_file(cfg.out, doc);
    if (!report.overall_pass) {
        for (const auto& c : report.checks)
            if (!c.pass)
                std::cerr << "weingarten: check failed: " << c.name << " (residual "
                          << format_g17(c.max_residual) << " > " << format_g17(c.tolerance)
                          << " at s = " << format_g17(c.worst_s) << ")\n";
        return 1;
    }
    return 0;
}

int cmd_export(const RunConfig& cfg) {
    WeingartenSpec W;
    HypersurfaceModel model = model_from_json_text(read_file(cfg.model_path), &W);
    if (cfg.format == "model-json") {
        VerificationReport report = verify_model(model, W, cfg.vopts);
        write_file(cfg.out, model_to_json(model, W, &report));
        std::cout << cfg.out << "\n";
    } else if (cfg.format == "profile-csv") {
        std::string base = cfg.out;
        if (base.size() > 4 && base.substr(base.size() - 4) == ".csv")
            base.erase(base.size() - 4);
        for (size_t p = 0; p < model.pieces.size(); ++p) {
            const std::string path = base + ".piece" + std::to_string(p) + ".csv";
            write_file(path, profile_csv(model.pieces[p]));
            std::cout << path << "\n";
        }
    } else if (cfg.format == "revolution-obj") {
        write_file(cfg.out, revolution_obj(model, cfg.segments, cfg.max_rings));
        std::cout << cfg.out << "\n";
    } else {
        throw SchemaError("unknown format '" + cfg.format +
                          "' (model-json, profile-csv, revolution-obj)");
    }
    return 0;
}

struct SweepRow {
    double c = 0.0;
    double lambda = std::nan("");
    bool has_lambda = false;
    std::string kind;
    double delta = std::nan("");
    bool c1 = false, c2 = false, c3 = false;
    std::string error;
};

std::string sanitize(std::string msg) {
    for (char& ch : msg)
        if (ch == ',' || ch == '\n') ch = ';';
    return msg;
}

SweepRow sweep_cell(const RunConfig& cfg, const WeingartenSpec& W, double c, double lambda,
                    bool has_lambda) {
    SweepRow row;
    row.c = c;
    row.lambda = lambda;
    row.has_lambda = has_lambda;
    try {
        if (has_lambda) {
            if (!is_scalar_relation(cfg))
                throw OutOfRangeError("lambda sweeps require the built-in scalar relation WS");
            const FamilyKind kind = kind_from_name(cfg.family);
            HypersurfaceModel model;
            if (kind == FamilyKind::GeodesicSpheres)
                model = build_annulus(cfg.n, cfg.eps, c, lambda);
            else if (kind == FamilyKind::Equidistants)
                model = build_hyperbolic(cfg.n, c, lambda);
            else
                throw OutOfRangeError("lambda sweeps run over spheres or equidistants");
            const ProfileCurve& cv = model.pieces.front().curve;
            row.kind = to_string(model.topology);
            row.delta = cv.delta;
            row.c1 = cv.admissibility.c1;
            row.c2 = cv.admissibility.c2;
            row.c3 = cv.admissibility.c3;
        } else {
            AmbientFamily fam = resolve_family(cfg);
            IntegrateOptions opts;
            opts.s_max = cfg.s_max;
            opts.tol = cfg.tol;
            RhoSolution sol = integrate_rho({c, W, fam}, Launch::at_origin(), opts);
            row.kind = sol.degenerate ? "degenerate" : to_string(classify_terminal(sol));
            row.delta = sol.delta;
            row.c1 = sol.admissibility.c1;
            row.c2 = sol.admissibility.c2;
            row.c3 = sol.admissibility.c3;
        }
    } catch (const DegenerateHyperplaneError&) {
        row.kind = "degenerate";
    } catch (const Error& e) {
        row.kind = "error";
        row.error = std::string(reason_of(e)) + ": " + sanitize(e.what());
    }
    return row;
}

int cmd_sweep(const RunConfig& cfg) {
    WeingartenSpec W = resolve_W(cfg);
    if (!ellipticity_gate(W, cfg)) return 1;

    std::vector<double> cs, lambdas;
    for (int i = 0; i < cfg.c_steps; ++i)
        cs.push_back(cfg.c_steps == 1
                         ? cfg.c_from
                         : cfg.c_from + i * (cfg.c_to - cfg.c_from) / (cfg.c_steps - 1));
    for (int i = 0; i < cfg.lambda_steps; ++i)
        lambdas.push_back(cfg.lambda_steps == 1 ? cfg.lambda_from
                                                : cfg.lambda_from +
                                                      i * (cfg.lambda_to - cfg.lambda_from) /
                                                          (cfg.lambda_steps - 1));
    const bool has_lambda = !lambdas.empty();
    if (!has_lambda) lambdas.push_back(std::nan(""));

    struct Cell {
        double c, lambda;
    };
    std::vector<Cell> grid;
    for (double c : cs)
        for (double l : lambdas) grid.push_back({c, l});

    std::vector<SweepRow> rows(grid.size());
    const int jobs = std::max(1, cfg.jobs);
    for (size_t at = 0; at < grid.size(); at += jobs) {
        const size_t batch = std::min(grid.size() - at, static_cast<size_t>(jobs));
        std::vector<std::future<SweepRow>> fs;
        for (size_t k = 0; k < batch; ++k)
            fs.push_back(std::async(std::launch::async, [&, k] {
                return sweep_cell(cfg, W, grid[at + k].c, grid[at + k].lambda, has_lambda);
            }));
        for (size_t k = 0; k < batch; ++k) rows[at + k] = fs[k].get();
    }

    std::string csv = "c,lambda,kind,delta,c1,c2,c3,error\n";
    for (const SweepRow& r : rows) {
        csv += format_g17(r.c);
        csv += ',';
        if (r.has_lambda) csv += format_g17(r.lambda);
        csv += ',';
        csv += r.kind;
        csv += ',';
        csv += std::isnan(r.delta) ? "" : format_g17(r.delta);
        csv += ',';
        csv += r.c1 ? "true" : "false";
        csv += ',';
        csv += r.c2 ? "true" : "false";
        csv += ',';
        csv += r.c3 ? "true" : "false";
        csv += ',';
        csv += r.error;
        csv += '\n';
    }
    if (cfg.out.empty())
        std::cout << csv;
    else {
        write_file(cfg.out, csv);
        std::cout << rows.size() << " cells -> " << cfg.out << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    RunConfig cfg;
    CLI::App app{"elliptic Weingarten hypersurfaces of M x R: construction, sweeps, verification"};
    app.require_subcommand(1);

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--family", cfg.family, "spheres | horospheres | equidistants")
            ->capture_default_str();
        cmd->add_option("--family-file", cfg.family_file, "custom family JSON document");
        cmd->add_option("--n", cfg.n, "graph dimension")->capture_default_str();
        cmd->add_option("--eps", cfg.eps, "fiber curvature sign (+1 | -1)")
            ->capture_default_str();
        cmd->add_option("--W", cfg.W_name, "relation: WS, H1..Hn, Hr:r, normA, or a name for "
                                           "--W-expr")
            ->capture_default_str();
        cmd->add_option("--W-expr", cfg.W_expr, "expression over e1..en, sumsq, theta2");
        cmd->add_flag("--W-theta", cfg.W_theta, "expression uses theta2");
        cmd->add_option("--s-max", cfg.s_max, "integration horizon")->capture_default_str();
        cmd->add_option("--tol", cfg.tol, "ODE local error tolerance")->capture_default_str();
        cmd->add_flag("--strict-ellipticity", cfg.strict_ellipticity,
                      "fail (exit 1) when the seeded ellipticity audit finds a violation");
    };

    CLI::App* construct = app.add_subcommand("construct", "build one model and write it as JSON");
    add_common(construct);
    construct->add_option("--c", cfg.c, "level of W")->required();
    CLI::Option* lam = construct->add_option("--lambda", cfg.lambda,
                                             "annulus / equidistant inner radius");
    construct->add_option("--variant", cfg.variant, "horosphere construction: entire | bigraph")
        ->capture_default_str();
    CLI::Option* ls = construct->add_option("--launch-s", cfg.launch_s, "interior launch point");
    construct->add_option("--launch-rho", cfg.launch_rho, "interior launch value");
    construct->add_option("--out", cfg.out, "output model JSON (stdout when omitted)");

    CLI::App* sweep = app.add_subcommand("sweep", "map terminal kind and admissibility over a "
                                                  "(c, lambda) grid");
    add_common(sweep);
    sweep->add_option("--c-from", cfg.c_from, "first c")->required();
    sweep->add_option("--c-to", cfg.c_to, "last c");
    sweep->add_option("--c-steps", cfg.c_steps, "grid points in c")->capture_default_str();
    sweep->add_option("--lambda-from", cfg.lambda_from, "first lambda");
    sweep->add_option("--lambda-to", cfg.lambda_to, "last lambda");
    sweep->add_option("--lambda-steps", cfg.lambda_steps, "grid points in lambda (0 = no "
                                                          "lambda column)");
    sweep->add_option("--jobs", cfg.jobs, "concurrent cells")->capture_default_str();
    sweep->add_option("--out", cfg.out, "output CSV (stdout when omitted)");

    CLI::App* verify = app.add_subcommand("verify", "re-run the verification suite on a stored "
                                                    "model");
    verify->add_option("--model", cfg.model_path, "model JSON path")->required();
    verify->add_option("--out", cfg.out, "report JSON path (stdout when omitted)");
    verify->add_option("--tol-residual", cfg.vopts.tol_residual, "Weingarten residual tolerance")
        ->capture_default_str();
    verify->add_option("--tol-oracle", cfg.vopts.tol_oracle, "closed-form oracle tolerance")
        ->capture_default_str();
    verify->add_option("--tol-fd", cfg.vopts.tol_fd, "finite-difference slope tolerance")
        ->capture_default_str();

    CLI::App* thresholds = app.add_subcommand("thresholds", "print delta and the annulus / "
                                                            "equidistant parameter thresholds");
    thresholds->add_option("--n", cfg.n, "graph dimension")->capture_default_str();
    thresholds->add_option("--eps", cfg.eps, "fiber curvature sign")->capture_default_str();
    thresholds->add_option("--c", cfg.c, "level of W_S")->required();

    CLI::App* families = app.add_subcommand("families", "list the built-in isoparametric "
                                                        "families");
    families->add_option("--n", cfg.n, "graph dimension")->capture_default_str();

    CLI::App* exp = app.add_subcommand("export", "convert a stored model to CSV / JSON / OBJ");
    exp->add_option("--model", cfg.model_path, "model JSON path")->required();
    exp->add_option("--format", cfg.format, "model-json | profile-csv | revolution-obj")
        ->capture_default_str();
    exp->add_option("--out", cfg.out, "output path (profile-csv writes one file per piece)")
        ->required();
    exp->add_option("--segments", cfg.segments, "OBJ: vertices per ring")->capture_default_str();
    exp->add_option("--max-rings", cfg.max_rings, "OBJ: ring budget per piece")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }
    cfg.has_lambda = lam->count() > 0;
    cfg.has_launch = ls->count() > 0;

    try {
        if (app.got_subcommand(construct)) return cmd_construct(cfg);
        if (app.got_subcommand(sweep)) return cmd_sweep(cfg);
        if (app.got_subcommand(verify)) return cmd_verify(cfg);
        if (app.got_subcommand(thresholds)) return cmd_thresholds(cfg);
        if (app.got_subcommand(families)) return cmd_families(cfg);
        if (app.got_subcommand(exp)) return cmd_export(cfg);
    } catch (const SchemaError& e) {
        std::cerr << "weingarten: Schema: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "weingarten: Io: " << e.what() << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "weingarten: " << reason_of(e) << ": " << e.what() << "\n";
        return 1;
    }
    return 0;
}
