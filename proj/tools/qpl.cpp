// qpl: command-line front end for the moment, recurrence, Painleve, verification
// and contour pipelines. Every run writes <command>.manifest.json next to its outputs.

#include "manifest.hpp"

#include "qpl/contour/contour.hpp"
#include "qpl/io/json.hpp"
#include "qpl/numerics/errors.hpp"
#include "qpl/orthopoly/orthopoly.hpp"
#include "qpl/painleve/painleve.hpp"
#include "qpl/verify/verify.hpp"

#include <CLI11.hpp>
#include <omp.h>

#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>
#include <memory>
#include <sstream>

namespace fs = std::filesystem;
using namespace qpl;

namespace {

constexpr int kExitVerifyFailed = 1;
constexpr int kExitUsage = 2;
constexpr int kExitNumerical = 3;
constexpr int kExitExistence = 4;
constexpr int kExitPole = 5;

int exit_code(ErrorCategory c) {
    switch (c) {
        case ErrorCategory::usage:
        case ErrorCategory::domain: return kExitUsage;
        case ErrorCategory::numerical: return kExitNumerical;
        case ErrorCategory::existence: return kExitExistence;
        case ErrorCategory::pole: return kExitPole;
    }
    return kExitNumerical;
}

using Values = std::map<std::string, std::string>;

struct Output {
    fs::path dir;
    std::vector<std::string> files;

    void write(const std::string& name, const std::string& text) {
        const fs::path p = fs::path(name).is_absolute() ? fs::path(name) : dir / name;
        if (p.has_parent_path()) fs::create_directories(p.parent_path());
        write_text_file(p, text);
        files.push_back(name);
    }
    fs::path resolve(const std::string& name) const {
        return fs::path(name).is_absolute() ? fs::path(name) : dir / name;
    }
};

struct Command {
    std::string name;
    CLI::App* app = nullptr;
    std::vector<std::string> order;  // option names in declaration order
    Values values;
    std::function<int(Values&, Output&)> run;

    void option(const std::string& opt, const std::string& fallback, const std::string& help, bool required = false) {
        order.push_back(opt);
        values[opt] = fallback;
        auto* o = app->add_option("--" + opt, values[opt], help);
        if (required) {
            o->required();
        } else {
            o->capture_default_str();
        }
    }
};

int int_arg(const Values& v, const std::string& k) {
    try {
        std::size_t used = 0;
        const int x = std::stoi(v.at(k), &used);
        if (used != v.at(k).size()) throw std::invalid_argument(k);
        return x;
    } catch (const std::logic_error&) {
        throw UsageError("--" + k + " expects an integer, got '" + v.at(k) + "'");
    }
}

Real real_arg(const Values& v, const std::string& k) {
    try {
        return parse_real(v.at(k));
    } catch (const UsageError& e) {
        throw UsageError("--" + k + ": " + e.what());
    }
}

Complex complex_arg(const Values& v, const std::string& k) {
    try {
        return parse_complex(v.at(k));
    } catch (const UsageError& e) {
        throw UsageError("--" + k + ": " + e.what());
    }
}

std::vector<int> int_list_arg(const Values& v, const std::string& k) {
    std::vector<int> out;
    std::stringstream ss(v.at(k));
    std::string item;
    while (std::getline(ss, item, ',')) {
        Values one{{k, item}};
        out.push_back(int_arg(one, k));
    }
    if (out.empty()) throw UsageError("--" + k + " is empty");
    return out;
}

int digits_arg(const Values& v, const std::string& k = "digits") {
    const int d = int_arg(v, k);
    if (d < 30) throw UsageError("--" + k + " must be at least 30");
    return d;
}

Json spec_json(const Real& t, int N, const Complex& alpha, const Complex& beta, int digits) {
    return {{"t", real_to_json(t)},
            {"N", N},
            {"alpha", complex_to_json(alpha)},
            {"beta", complex_to_json(beta)},
            {"digits", digits}};
}

int cmd_moments(Values& v, Output& out) {
    const int digits = digits_arg(v);
    const auto ctx = PrecisionContext::make(digits);
    PrecisionGuard guard(ctx);
    const Real t = real_arg(v, "t");
    const int N = int_arg(v, "N");
    const int k_max = int_arg(v, "kmax");
    if (N < 1 || k_max < 0) throw UsageError("--N must be positive and --kmax non-negative");
    const Complex alpha = complex_arg(v, "alpha");
    const Complex beta = complex_arg(v, "beta");
    const auto m = compute_moments(make_spec(t, N, alpha, beta), k_max, ctx);
    Json j;
    j["spec"] = spec_json(t, N, alpha, beta, digits);
    j["k_max"] = k_max;
    j["moments"] = complex_array(m.m);
    Json err = Json::array();
    for (const auto& e : m.errors) err.push_back(real_to_json(e));
    j["moment_errors"] = err;
    j["truncation_radius"] = real_to_json(m.truncation_radius);
    out.write("moments.json", j.dump(1) + "\n");
    return 0;
}

RecurrenceRecord recurrence_run(Values& v, int n_max) {
    if (int_arg(v, "digits") == 0) v["digits"] = std::to_string(default_orthopoly_digits(n_max));
    RecurrenceRecord rec;
    rec.digits = digits_arg(v);
    const auto ctx = PrecisionContext::make(rec.digits);
    PrecisionGuard guard(ctx);
    rec.t = real_arg(v, "t");
    rec.N = int_arg(v, "N");
    if (rec.N < 1 || n_max < 1) throw UsageError("--N and --nmax must be positive");
    rec.alpha = complex_arg(v, "alpha");
    rec.beta = complex_arg(v, "beta");
    rec.moments = compute_moments(make_spec(rec.t, rec.N, rec.alpha, rec.beta), 2 * n_max + 2, ctx);
    rec.table = stieltjes_recurrence(rec.moments, n_max, ctx);
    return rec;
}

int cmd_recurrence(Values& v, Output& out) {
    const auto rec = recurrence_run(v, int_arg(v, "nmax"));
    PrecisionGuard guard(rec.digits);
    out.write("recurrence.json", to_json(rec).dump(1) + "\n");
    out.write("recurrence.csv", recurrence_csv(rec.table));
    if (rec.table.first_degenerate >= 0) {
        std::cerr << "qpl: the form degenerates at n = " << rec.table.first_degenerate << "\n";
        return kExitExistence;
    }
    return 0;
}

int cmd_freud(Values& v, Output& out) {
    const int n_max = int_arg(v, "nmax");
    if (v["alpha"] != v["beta"]) {
        PrecisionGuard g(30);
        if (!(complex_arg(v, "alpha") == complex_arg(v, "beta"))) throw UsageError("the Freud lattice needs alpha = beta");
    }
    const auto rec = recurrence_run(v, n_max);
    const auto ctx = PrecisionContext::make(rec.digits);
    PrecisionGuard guard(ctx);
    rec.table.require(std::min(n_max, 2));
    const auto res = freud_residual(rec.table.a, rec.t, rec.N, n_max);
    Json j;
    j["spec"] = spec_json(rec.t, rec.N, rec.alpha, rec.beta, rec.digits);
    j["n_max"] = n_max;
    j["stieltjes_a"] = complex_array(rec.table.a);
    Json per = Json::array();
    for (std::size_t n = 1; n < res.per_n.size(); ++n) per.push_back(real_to_json(res.per_n[n]));
    j["residual"] = per;
    j["residual_max"] = real_to_json(res.max);
    int code = 0;
    try {
        const auto lat = freud_lattice(rec.t, rec.N, rec.table.a[1], rec.table.a[2], n_max + 1, ctx);
        Real gap = 0;
        for (int n = 1; n <= n_max + 1 && n < static_cast<int>(rec.table.a.size()); ++n) {
            gap = std::max(gap, abs(lat.a[n] - rec.table.a[n]));
        }
        j["lattice_a"] = complex_array(lat.a);
        j["lattice_condition_log10"] = lat.condition;
        j["lattice_gap"] = real_to_json(gap);
    } catch (const LatticeBlowup& e) {
        j["lattice_error"] = e.what();
        std::cerr << "qpl: " << e.what() << "\n";
        code = kExitNumerical;
    }
    out.write("freud.json", j.dump(1) + "\n");
    return code;
}

int cmd_painleve(Values& v, Output& out) {
    const int digits = digits_arg(v);
    const auto ctx = PrecisionContext::make(digits);
    PrecisionGuard guard(ctx);
    auto p = PainleveParameters::make(complex_arg(v, "alpha"));
    p.x0 = real_arg(v, "x0");
    p.seed_method = parse_seed_method(v["seed"]);
    PainleveOptions opt;
    opt.grid_step = real_arg(v, "grid-step");
    if (!(opt.grid_step > 0)) throw UsageError("--grid-step must be positive");
    const auto s = solve_painleve(p, real_arg(v, "x"), ctx, opt);
    out.write("solution.json", to_json(s).dump(1) + "\n");
    out.write("solution.csv", painleve_csv(s));
    if (s.halted()) {
        std::cerr << "qpl: pole near x = " << to_string(s.poles.front().pole_estimate, 12) << "\n";
        return kExitPole;
    }
    return 0;
}

int finish_report(const VerificationReport& rep, Output& out) {
    out.write("report.json", to_json(rep).dump(1) + "\n");
    const std::string text = to_text(rep);
    out.write("report.txt", text);
    std::cout << text;
    return rep.pass() ? 0 : kExitVerifyFailed;
}

int cmd_verify_regular(Values& v, Output& out) {
    PrecisionGuard guard(digits_arg(v));
    auto e = ScalingExperiment::regular(real_arg(v, "t"), complex_arg(v, "alpha"), complex_arg(v, "beta"),
                                        int_list_arg(v, "n"));
    e.digits = digits_arg(v);
    return finish_report(run_regular(e), out);
}

int cmd_verify_critical(Values& v, Output& out) {
    auto ns = int_list_arg(v, "n");
    if (int_arg(v, "digits") == 0) v["digits"] = std::to_string(default_orthopoly_digits(ns.back()));
    PrecisionGuard guard(digits_arg(v));
    auto e = ScalingExperiment::critical(real_arg(v, "x"), complex_arg(v, "alpha"), complex_arg(v, "beta"),
                                         std::move(ns));
    e.digits = digits_arg(v);
    e.painleve_digits = digits_arg(v, "painleve-digits");
    return finish_report(run_critical(e), out);
}

int cmd_contours(Values& v, Output& out) {
    const std::string figure = v["figure"];
    if (figure != "regions" && figure != "curves" && figure != "lens") {
        throw UsageError("--figure must be regions, curves or lens");
    }
    const int digits = digits_arg(v);
    const auto ctx = PrecisionContext::make(digits);
    PrecisionGuard guard(ctx);
    const Real t = real_arg(v, "t");
    const bool critical = t == Real(-1) / 12;
    if (!critical && !(t > Real(-1) / 12 && t < 0)) throw DomainError("contours need -1/12 <= t < 0");
    if (figure == "lens" && !critical) throw UsageError("the lens figure is drawn at t = -1/12 only");
    const Real half = real_arg(v, "box");
    if (!(half > 0)) throw UsageError("--box must be positive");
    const int res = int_arg(v, "resolution");
    const BoundingBox box{-half, half, -half, half};
    const PhiFunction phi = critical ? PhiFunction::critical_cr() : PhiFunction::regular(t);

    TraceOptions opt;
    opt.stop_radius = half * 3 / 2;
    std::vector<SvgCurve> svg;
    for (int j = 1; j <= 4; ++j) {
        const auto c = trace_steepest(j, phi, opt, ctx);
        out.write("gamma" + std::to_string(j) + ".csv", curve_csv(c));
        svg.push_back({c.points, "#1f4e9c", "gamma" + std::to_string(j)});
    }
    if (figure == "lens") {
        for (int side : {1, -1}) {
            const auto c = trace_phase_curve(side, opt, ctx);
            const std::string name = side > 0 ? "lip_upper" : "lip_lower";
            out.write(name + ".csv", curve_csv(c));
            svg.push_back({c.points, "#b03a2e", name});
        }
    }
    std::unique_ptr<SignRaster> raster;
    if (figure != "curves") raster = std::make_unique<SignRaster>(region_sign_map(phi, box, res, res, ctx));
    std::string target = v["out"];
    if (target.empty()) target = figure + ".svg";
    out.write(target, render_svg(raster.get(), svg, box));
    return 0;
}

struct Registry {
    std::vector<std::unique_ptr<Command>> commands;

    Command& add(CLI::App& app, const std::string& name, const std::string& help, std::function<int(Values&, Output&)> run) {
        auto c = std::make_unique<Command>();
        c->name = name;
        c->app = app.add_subcommand(name, help);
        c->run = std::move(run);
        commands.push_back(std::move(c));
        return *commands.back();
    }
    Command* find(const std::string& name) {
        for (auto& c : commands) {
            if (c->name == name) return c.get();
        }
        return nullptr;
    }
};

void add_form_options(Command& c, const std::string& n_name, const std::string& n_default) {
    c.option("t", "", "t of V_t(z) = z^2/2 + t z^4/4; fractions like -1/12 are exact", true);
    c.option("N", "16", "exponent scale N");
    c.option("alpha", "1/2", "weight alpha, re+imi");
    c.option("beta", "1/2", "weight beta, re+imi");
    c.option(n_name, n_default, n_name == "kmax" ? "highest moment index" : "highest degree");
}

int execute(Command& c, const fs::path& dir) {
    Output out{dir, {}};
    fs::create_directories(dir);
    const int code = c.run(c.values, out);
    cli::Manifest m;
    m.command = c.name;
    for (const auto& k : c.order) m.args.emplace_back(k, c.values[k]);
    for (const auto& f : out.files) m.outputs.emplace_back(f, cli::sha256_file(out.resolve(f)));
    write_text_file(dir / (c.name + ".manifest.json"), m.to_json().dump(1) + "\n");
    return code;
}

int rerun(Registry& reg, const std::string& manifest_path, const fs::path& dir) {
    const auto m = cli::Manifest::from_json(Json::parse(read_text_file(manifest_path)));
    Command* c = reg.find(m.command);
    if (!c) throw UsageError("unknown command '" + m.command + "' in manifest");
    for (const auto& [k, val] : m.args) {
        if (!c->values.count(k)) throw UsageError("unknown option '" + k + "' in manifest");
        c->values[k] = val;
    }
    const int code = execute(*c, dir);
    int mismatches = 0;
    for (const auto& [f, h] : m.outputs) {
        const fs::path p = fs::path(f).is_absolute() ? fs::path(f) : dir / f;
        const std::string now = fs::exists(p) ? cli::sha256_file(p) : "missing";
        if (now != h) {
            std::cerr << "qpl: " << f << " differs (" << now << " vs " << h << ")\n";
            ++mismatches;
        }
    }
    std::cout << "rerun of " << m.command << ": " << m.outputs.size() - mismatches << "/" << m.outputs.size()
              << " outputs reproduced (command exit " << code << ")\n";
    return mismatches ? kExitVerifyFailed : 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"High-precision non-Hermitian orthogonal polynomial laboratory"};
    app.require_subcommand(1);
    app.fallthrough();
    const char* env_dir = std::getenv("QPL_OUTPUT_DIR");
    std::string out_dir = env_dir && *env_dir ? env_dir : ".";
    int threads = 0;
    app.add_option("--out-dir", out_dir, "output directory (default $QPL_OUTPUT_DIR or .)");
    app.add_option("--threads", threads, "cap on OpenMP threads, 0 for the runtime default")->check(CLI::NonNegativeNumber);

    Registry reg;
    {
        auto& c = reg.add(app, "moments", "moments m_k of the bilinear form", cmd_moments);
        add_form_options(c, "kmax", "36");
        c.option("digits", "120", "working decimal digits");
    }
    {
        auto& c = reg.add(app, "recurrence", "recurrence coefficients a_n, b_n from moments", cmd_recurrence);
        add_form_options(c, "nmax", "16");
        c.option("digits", "0", "working decimal digits, 0 for max(120, 6 nmax)");
    }
    {
        auto& c = reg.add(app, "freud", "string-equation residual and Freud lattice cross-check", cmd_freud);
        add_form_options(c, "nmax", "16");
        c.option("digits", "0", "working decimal digits, 0 for max(120, 6 nmax)");
    }
    {
        auto& c = reg.add(app, "painleve", "Painleve I solution y_alpha on [x0, x]", cmd_painleve);
        c.option("x", "", "end point", true);
        c.option("alpha", "1/2", "Stokes parameter alpha, re+imi");
        c.option("x0", "-30", "seed point");
        c.option("seed", to_string(SeedMethod::borel_pade), "seed method");
        c.option("grid-step", "1/10", "output grid spacing");
        c.option("digits", std::to_string(kPainleveDigits), "working decimal digits");
    }
    {
        auto& c = reg.add(app, "verify-regular", "regular-case scaling experiment", cmd_verify_regular);
        c.option("t", "-1/24", "fixed t in (-1/12, 0)");
        c.option("alpha", "1/2", "alpha, re+imi");
        c.option("beta", "1/2", "beta, re+imi");
        c.option("n", "8,12,16,24", "comma-separated increasing degrees");
        c.option("digits", "120", "working decimal digits");
    }
    {
        auto& c = reg.add(app, "verify-critical", "critical double-scaling experiment", cmd_verify_critical);
        c.option("x", "-5", "scaling variable x");
        c.option("alpha", "1/2", "alpha, re+imi");
        c.option("beta", "1/2", "beta, re+imi");
        c.option("n", "16,24,32,48,64", "comma-separated increasing degrees");
        c.option("digits", "0", "working decimal digits, 0 for max(120, 6 max n)");
        c.option("painleve-digits", std::to_string(kPainleveDigits), "digits for the Painleve solve");
    }
    {
        auto& c = reg.add(app, "contours", "steepest descent curves and sign regions as SVG/CSV", cmd_contours);
        c.option("figure", "", "regions, curves or lens", true);
        c.option("t", "-1/12", "t in [-1/12, 0)");
        c.option("box", "6", "half width of the square window");
        c.option("resolution", "81", "raster nodes per axis (>= 16)");
        c.option("digits", "30", "working decimal digits");
        c.option("out", "", "SVG file (default <figure>.svg in the output directory)");
    }
    std::string manifest_path;
    auto* rr = app.add_subcommand("rerun", "repeat a run from its manifest and compare output hashes");
    rr->add_option("--manifest", manifest_path, "path to <command>.manifest.json")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }
    if (threads > 0) omp_set_num_threads(threads);

    try {
        if (rr->parsed()) return rerun(reg, manifest_path, out_dir);
        for (auto& c : reg.commands) {
            if (c->app->parsed()) return execute(*c, out_dir);
        }
    } catch (const Error& e) {
        std::cerr << "qpl: " << e.what() << "\n";
        return exit_code(e.category());
    } catch (const Json::exception& e) {
        std::cerr << "qpl: " << e.what() << "\n";
        return kExitUsage;
    } catch (const fs::filesystem_error& e) {
        std::cerr << "qpl: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
