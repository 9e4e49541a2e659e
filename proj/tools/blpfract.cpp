// Command-line front end: sample fields, estimate box-counting dimensions,
// verify the closed-form solutions against the governing system, reproduce
// the published table, and calibrate the estimator.
//
// Exit codes: 0 success, 1 tolerance/assertion failure, 2 usage error,
// 3 degenerate data.

#include "blpfract/presets.hpp"
#include "blpfract/verifier.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

using namespace blpfract;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitTolerance = 1;
constexpr int kExitUsage = 2;
constexpr int kExitDegenerate = 3;

int env_threads()
{
    const char* v = std::getenv("BLPFRACT_THREADS");
    if (!v)
        return 1;
    const int n = std::atoi(v);
    return n > 0 ? n : 1;
}

std::uint64_t fnv1a(const std::string& s)
{
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string manifest_hash(const json& manifest)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%016llx",
                  static_cast<unsigned long long>(fnv1a(manifest.dump())));
    return buf;
}

void write_file(const std::string& path, const std::string& content)
{
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw std::runtime_error("cannot write " + path);
    out << content;
}

VoxelizationMode parse_mode(const std::string& s)
{
    if (s == "columns") return VoxelizationMode::SurfaceColumns;
    if (s == "points") return VoxelizationMode::GraphPoints;
    if (s == "image2d") return VoxelizationMode::LevelSetImage2D;
    throw CLI::ValidationError("--mode", "expected columns|points|image2d");
}

Window window_from(const std::vector<double>& w)
{
    return Window{w.at(0), w.at(1), w.at(2), w.at(3)};
}

Window preset_window(const ExperimentPreset& p, int level)
{
    const double cx = 0.5 * (p.base_window.x_min + p.base_window.x_max);
    const double cy = 0.5 * (p.base_window.y_min + p.base_window.y_max);
    double hx = 0.5 * (p.base_window.x_max - p.base_window.x_min);
    double hy = 0.5 * (p.base_window.y_max - p.base_window.y_min);
    for (int l = 0; l < level; ++l) {
        hx *= p.shrink;
        hy *= p.shrink;
    }
    return Window{cx - hx, cx + hx, cy - hy, cy + hy};
}

// ---------------------------------------------------------------------------

std::optional<ExperimentPreset> lookup_preset(const std::string& name,
                                              const std::string& presets_file)
{
    if (!presets_file.empty()) {
        std::ifstream in(presets_file);
        if (!in)
            throw std::invalid_argument("cannot open presets file " + presets_file);
        json j;
        in >> j;
        for (const auto& entry : j)
            if (entry.at("name").get<std::string>() == name)
                return ExperimentPreset::from_json(entry);
    }
    return find_preset(name);
}

struct SampleArgs {
    std::string preset;
    std::string presets_file;
    int level = 0;
    int family = 1;
    double delta = 1.0;
    double time = 0.0;
    std::string variant = "literal";
    std::vector<double> window;
    int res = 0;   // 0 = preset resolution, or 1024 without a preset
    int levels = 1;
    double shrink = 0.1;
    std::string out = "field.csv";
    std::string format = "csv";
    std::string from_manifest;
};

void write_one_grid(const ScalarField& field, const std::string& out,
                    const std::string& format, const json& manifest,
                    const std::string& hash)
{
    if (format == "json") {
        auto j = field_to_json(field);
        j["manifest_hash"] = hash;
        write_file(out, j.dump(2) + "\n");
    } else {
        auto csv = export_csv(field);
        const auto header_end = csv.find('\n', csv.find('\n') + 1) + 1;
        csv.insert(header_end, "# manifest " + hash + "\n");
        write_file(out, csv);
    }
    write_file(out + ".manifest.json", manifest.dump(2) + "\n");
}

int run_sample(SampleArgs a)
{
    std::optional<json> replay;
    if (!a.from_manifest.empty()) {
        // replay: parameters (and the manifest itself) come from a previous run
        std::ifstream in(a.from_manifest);
        if (!in)
            throw std::invalid_argument("cannot open manifest " + a.from_manifest);
        json m;
        in >> m;
        a.preset.clear();
        a.family = m.at("family").get<int>();
        a.delta = m.at("delta").get<double>();
        a.time = m.at("t").get<double>();
        a.variant = m.at("variant").get<std::string>();
        const auto& w = m.at("window");
        a.window = {w.at(0).get<double>(), w.at(1).get<double>(),
                    w.at(2).get<double>(), w.at(3).get<double>()};
        a.res = m.at("res").get<int>();
        a.format = m.at("format").get<std::string>();
        a.levels = 1;
        m.erase("manifest_hash");
        replay = m;
    }

    SolutionParams params{a.delta, a.time};
    AnsatzFamily fam = AnsatzFamily::from_index(a.family);
    GradientVariant variant = a.variant == "consistent"
                                  ? GradientVariant::ConsistentPsi
                                  : GradientVariant::LiteralX;
    Window w{-0.04, 0.04, -0.04, 0.04};
    int res = a.res > 0 ? a.res : 1024;
    double shrink = a.shrink;

    if (!a.preset.empty()) {
        const auto p = lookup_preset(a.preset, a.presets_file);
        if (!p) {
            std::cerr << "unknown preset: " << a.preset << "\n";
            return kExitUsage;
        }
        fam = AnsatzFamily::of(p->family);
        params = p->params;
        variant = p->variant;
        w = preset_window(*p, a.level);
        res = a.res > 0 ? a.res : p->resolution;
        shrink = p->shrink;
    } else if (a.window.size() == 4) {
        w = window_from(a.window);
    }

    auto make_manifest = [&](const Window& win) {
        return json{
            {"command", "sample"},
            {"preset", a.preset},
            {"level", a.level},
            {"family", static_cast<int>(fam.kind)},
            {"delta", params.delta},
            {"t", params.t},
            {"variant", to_string(variant)},
            {"window", {win.x_min, win.x_max, win.y_min, win.y_max}},
            {"res", res},
            {"format", a.format},
        };
    };

    if (a.levels <= 1) {
        json manifest = replay ? *replay : make_manifest(w);
        const auto hash = manifest_hash(manifest);
        manifest["manifest_hash"] = hash;
        const auto field = sample(params, fam, variant, w, res, res, env_threads());
        write_one_grid(field, a.out, a.format, manifest, hash);
        std::cout << "wrote " << a.out << " (" << res << "x" << res << ", masked "
                  << field.masked_count() << ")\n";
        return kExitOk;
    }

    // zoom series: one grid per level, suffix _L<k>
    const auto series = zoom_series(params, fam, variant, w, shrink, a.levels,
                                    res, res, env_threads());
    const std::string stem =
        a.out.size() > 4 && a.out.substr(a.out.size() - 4) == ".csv"
            ? a.out.substr(0, a.out.size() - 4)
            : a.out;
    for (int l = 0; l < a.levels; ++l) {
        json manifest = make_manifest(series.windows[l]);
        manifest["zoom_level"] = l;
        manifest["shrink"] = shrink;
        const auto hash = manifest_hash(manifest);
        manifest["manifest_hash"] = hash;
        const std::string path = stem + "_L" + std::to_string(l) + ".csv";
        write_one_grid(series.fields[l], path, "csv", manifest, hash);
        std::cout << "wrote " << path << "\n";
    }
    return kExitOk;
}

// ---------------------------------------------------------------------------

struct DimensionArgs {
    std::string grid;
    std::string preset;
    std::string presets_file;
    int level = 0;
    std::string synthetic;
    int depth = 6;
    std::string mode = "columns";
    bool mode_given = false;
    double levelset_q = 0.90;
    int eps_min_exp = 1;
    int eps_max_exp = 9;
    std::string fit = "auto";
    int res = 0;
    std::string out = "dimension.json";
};

int run_dimension(const DimensionArgs& a)
{
    json manifest = {{"command", "dimension"},
                     {"eps_min_exp", a.eps_min_exp},
                     {"eps_max_exp", a.eps_max_exp},
                     {"fit", a.fit}};

    BoxSet set;
    if (!a.synthetic.empty()) {
        SyntheticKind kind;
        if (a.synthetic == "plane") kind = SyntheticKind::Plane;
        else if (a.synthetic == "line") kind = SyntheticKind::Line;
        else if (a.synthetic == "square") kind = SyntheticKind::FilledSquare;
        else if (a.synthetic == "carpet") kind = SyntheticKind::SierpinskiCarpet;
        else if (a.synthetic == "triangle") kind = SyntheticKind::SierpinskiTriangle;
        else {
            std::cerr << "unknown synthetic set: " << a.synthetic << "\n";
            return kExitUsage;
        }
        set = synthetic_set(kind, a.depth);
        manifest["synthetic"] = a.synthetic;
        manifest["depth"] = a.depth;
    } else {
        ScalarField field{Window{0, 1, 0, 1}, 2, 2, {0, 0, 0, 0}, {0, 0, 0, 0}};
        VoxelizationMode mode = parse_mode(a.mode);
        if (!a.grid.empty()) {
            field = import_csv_file(a.grid);
            manifest["grid"] = a.grid;
        } else if (!a.preset.empty()) {
            const auto p = lookup_preset(a.preset, a.presets_file);
            if (!p) {
                std::cerr << "unknown preset: " << a.preset << "\n";
                return kExitUsage;
            }
            const int res = a.res > 0 ? a.res : p->resolution;
            field = sample(p->params, AnsatzFamily::of(p->family), p->variant,
                           preset_window(*p, a.level), res, res, env_threads());
            if (!a.mode_given)
                mode = p->box.mode;
            manifest["preset"] = a.preset;
            manifest["level"] = a.level;
            manifest["res"] = res;
        } else {
            std::cerr << "dimension needs --grid, --preset or --synthetic\n";
            return kExitUsage;
        }
        set = voxelize(normalize(field), mode, a.levelset_q);
        manifest["mode"] = to_string(mode);
        manifest["levelset_q"] = a.levelset_q;
    }

    const auto rep = estimate_dimension(
        set, a.eps_min_exp, a.eps_max_exp,
        a.fit == "all" ? FitMode::AllPoints : FitMode::AutoWindow);

    auto j = rep.to_json();
    const auto hash = manifest_hash(manifest);
    manifest["manifest_hash"] = hash;
    j["manifest"] = manifest;
    write_file(a.out, j.dump(2) + "\n");

    const std::string stem =
        a.out.size() > 5 && a.out.substr(a.out.size() - 5) == ".json"
            ? a.out.substr(0, a.out.size() - 5)
            : a.out;
    write_file(stem + "_pairs.csv",
               "# manifest " + hash + "\n" + rep.pairs_csv());
    char gp[640];
    std::snprintf(gp, sizeof gp,
                  "# manifest %s\n"
                  "set logscale xy\n"
                  "set xlabel '1/eps'\nset ylabel 'N(eps)'\n"
                  "plot '%s_pairs.csv' skip 2 using (1/$1):2 with points pt 7 "
                  "title 'box counts', exp(%.17g)*x**%.17g with lines "
                  "title 'fit slope %.4f'\n",
                  hash.c_str(), stem.c_str(), rep.intercept, rep.slope,
                  rep.slope);
    write_file(stem + ".gp", gp);

    std::cout << "dimension estimate " << rep.slope << " (r^2 " << rep.r_squared
              << ", mode " << to_string(rep.mode) << ")\n";
    return kExitOk;
}

// ---------------------------------------------------------------------------

struct VerifyArgs {
    int family = 3;
    double delta = 1.0;
    double time = 0.0;
    std::vector<double> window{0.5, 1.5, 0.5, 1.5};
    int res = 201;
    double steps = 2.5e-3;
    double tol = 1e-4;
    std::string system = "standard";
    std::string form = "sum";
    bool complex_branch = false;
    double perturb = 0.0;
    std::string out = "verify.json";
};

int run_verify(const VerifyArgs& a)
{
    const SolutionParams params{a.delta, a.time};
    const auto fam = AnsatzFamily::from_index(a.family);
    const auto form = a.form == "product" ? SolutionForm::PrintedProduct
                                          : SolutionForm::RiccatiSum;
    const auto system = a.system == "printed" ? SystemForm::AsPrinted
                                              : SystemForm::StandardBlp;

    FieldFn u = a.complex_branch ? u1_field(params, fam, form)
                                 : u2_field(params, fam, form);
    const FieldFn v = a.complex_branch ? v1_field(params, fam, form)
                                       : v2_field(params, fam, form);
    if (a.perturb != 0.0) {
        const double c = a.perturb;
        const FieldFn base = u;
        u = [base, c](double x, double y, double t)
            -> std::optional<std::complex<double>> {
            const auto val = base(x, y, t);
            if (!val)
                return std::nullopt;
            return *val + c * x;
        };
    }

    const StencilSteps h{a.steps, a.steps, a.steps};
    const auto rep = residual_eq1(u, v, window_from(a.window), a.res, a.res, h,
                                  system, a.time);

    json manifest = {{"command", "verify"},
                     {"family", a.family},
                     {"delta", a.delta},
                     {"t", a.time},
                     {"window", a.window},
                     {"res", a.res},
                     {"steps", a.steps},
                     {"system", a.system},
                     {"form", a.form},
                     {"complex", a.complex_branch},
                     {"perturb", a.perturb},
                     {"tol", a.tol}};
    manifest["manifest_hash"] = manifest_hash(manifest);
    auto j = rep.to_json();
    j["manifest"] = manifest;
    write_file(a.out, j.dump(2) + "\n");

    std::cout << "residuals: eq1a " << rep.max_abs_res_eq1a << ", eq1b "
              << rep.max_abs_res_eq1b << " (" << rep.points_masked
              << " masked)\n";
    return (rep.max_abs_res_eq1a <= a.tol && rep.max_abs_res_eq1b <= a.tol)
               ? kExitOk
               : kExitTolerance;
}

// ---------------------------------------------------------------------------

struct Table1Args {
    int res = 1024;
    int levels = 3;
    bool strict = false;
    std::string out = "table1";
};

int run_table1_cmd(const Table1Args& a)
{
    const auto res = run_table1(a.res, a.levels, env_threads());
    json manifest = {{"command", "table1"},
                     {"res", a.res},
                     {"levels", a.levels}};
    const auto hash = manifest_hash(manifest);
    manifest["manifest_hash"] = hash;
    auto j = res.to_json();
    j["manifest"] = manifest;
    write_file(a.out + ".json", j.dump(2) + "\n");
    const auto text = res.render_text();
    write_file(a.out + ".txt", "# manifest " + hash + "\n" + text);
    std::cout << text;
    if (a.strict && !res.all_rows_ok())
        return kExitTolerance;
    return kExitOk;
}

// ---------------------------------------------------------------------------

int run_calibrate(const std::string& out_path)
{
    struct Row {
        const char* name;
        SyntheticKind kind;
        int depth;
        double target, tol;
    };
    const Row rows[] = {
        {"plane", SyntheticKind::Plane, 0, 2.0, 0.05},
        {"line", SyntheticKind::Line, 0, 1.0, 0.05},
        {"square", SyntheticKind::FilledSquare, 0, 2.0, 0.01},
        {"carpet(6)", SyntheticKind::SierpinskiCarpet, 6,
         std::log(8.0) / std::log(3.0), 0.05},
        {"triangle(7)", SyntheticKind::SierpinskiTriangle, 7,
         std::log(3.0) / std::log(2.0), 0.05},
    };
    json report = json::array();
    bool ok = true;
    for (const auto& r : rows) {
        const auto rep = estimate_dimension(synthetic_set(r.kind, r.depth));
        const bool pass = std::fabs(rep.slope - r.target) <= r.tol;
        ok = ok && pass;
        std::printf("%-12s estimate %.4f  target %.4f  [%s]\n", r.name,
                    rep.slope, r.target, pass ? "ok" : "FAIL");
        report.push_back({{"set", r.name},
                          {"estimate", rep.slope},
                          {"target", r.target},
                          {"tolerance", r.tol},
                          {"pass", pass}});
    }
    if (!out_path.empty())
        write_file(out_path, report.dump(2) + "\n");
    return ok ? kExitOk : kExitTolerance;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"exact BLP-system solutions, fractal surface sampling and "
                 "box-counting dimension analysis"};
    app.require_subcommand(1);

    SampleArgs sa;
    auto* sample_cmd = app.add_subcommand("sample", "sample the gradient field over a window");
    sample_cmd->add_option("--preset", sa.preset, "preset name (fig1|fig2|fig3)");
    sample_cmd->add_option("--presets-file", sa.presets_file, "JSON preset overrides");
    sample_cmd->add_option("--level", sa.level, "zoom level within the preset")
        ->check(CLI::Range(0, 2));
    sample_cmd->add_option("--family", sa.family, "ansatz family 1|2|3")
        ->check(CLI::Range(1, 3));
    sample_cmd->add_option("--delta", sa.delta, "Riccati parameter");
    sample_cmd->add_option("--time", sa.time, "time slice");
    sample_cmd->add_option("--variant", sa.variant, "gradient argument: literal|consistent")
        ->check(CLI::IsMember({"literal", "consistent"}));
    sample_cmd->add_option("--window", sa.window, "x0 x1 y0 y1")->expected(4);
    sample_cmd->add_option("--res", sa.res, "grid resolution per axis")
        ->check(CLI::Range(2, 16384));
    sample_cmd->add_option("--levels", sa.levels, "zoom-series level count")
        ->check(CLI::Range(1, 8));
    sample_cmd->add_option("--shrink", sa.shrink, "zoom-series shrink factor");
    sample_cmd->add_option("--out", sa.out, "output grid path");
    sample_cmd->add_option("--format", sa.format, "csv|json")
        ->check(CLI::IsMember({"csv", "json"}));
    sample_cmd->add_option("--from-manifest", sa.from_manifest,
                           "replay parameters from a run manifest");

    DimensionArgs da;
    auto* dim_cmd = app.add_subcommand("dimension", "box-counting dimension of a field or synthetic set");
    dim_cmd->add_option("--grid", da.grid, "grid CSV produced by sample");
    dim_cmd->add_option("--preset", da.preset, "preset name");
    dim_cmd->add_option("--presets-file", da.presets_file, "JSON preset overrides");
    dim_cmd->add_option("--level", da.level, "zoom level")->check(CLI::Range(0, 2));
    dim_cmd->add_option("--synthetic", da.synthetic,
                        "plane|line|square|carpet|triangle");
    dim_cmd->add_option("--depth", da.depth, "construction depth")
        ->check(CLI::Range(0, 8));
    dim_cmd->add_option("--mode", da.mode, "columns|points|image2d")
        ->check(CLI::IsMember({"columns", "points", "image2d"}))
        ->trigger_on_parse();
    dim_cmd->callback([&] { da.mode_given = dim_cmd->count("--mode") > 0; });
    dim_cmd->add_option("--levelset-q", da.levelset_q,
                        "level-set threshold quantile of |U|")
        ->check(CLI::Range(0.0, 1.0));
    dim_cmd->add_option("--eps-min-exp", da.eps_min_exp, "coarsest rung: eps=2^-k")
        ->check(CLI::Range(1, 12));
    dim_cmd->add_option("--eps-max-exp", da.eps_max_exp, "finest rung")
        ->check(CLI::Range(1, 12));
    dim_cmd->add_option("--fit", da.fit, "all|auto")
        ->check(CLI::IsMember({"all", "auto"}));
    dim_cmd->add_option("--res", da.res, "resolution override for presets");
    dim_cmd->add_option("--out", da.out, "report JSON path");

    VerifyArgs va;
    auto* ver_cmd = app.add_subcommand("verify", "finite-difference residual of the governing system");
    ver_cmd->add_option("--family", va.family, "ansatz family 1|2|3")
        ->check(CLI::Range(1, 3));
    ver_cmd->add_option("--delta", va.delta, "Riccati parameter");
    ver_cmd->add_option("--time", va.time, "time slice");
    ver_cmd->add_option("--window", va.window, "x0 x1 y0 y1")->expected(4);
    ver_cmd->add_option("--res", va.res, "verification grid per axis")
        ->check(CLI::Range(2, 1024));
    ver_cmd->add_option("--steps", va.steps, "stencil step");
    ver_cmd->add_option("--tol", va.tol, "residual tolerance");
    ver_cmd->add_option("--system", va.system, "printed|standard")
        ->check(CLI::IsMember({"printed", "standard"}));
    ver_cmd->add_option("--form", va.form, "solution reading: product|sum")
        ->check(CLI::IsMember({"product", "sum"}));
    ver_cmd->add_flag("--complex", va.complex_branch, "verify the complex tanh-branch pair");
    ver_cmd->add_option("--perturb", va.perturb, "add c*x to u (detector check)");
    ver_cmd->add_option("--out", va.out, "report JSON path");

    Table1Args ta;
    auto* tab_cmd = app.add_subcommand("table1", "reproduce the published dimension table");
    tab_cmd->add_option("--res", ta.res, "sampling resolution per level")
        ->check(CLI::Range(32, 16384));
    tab_cmd->add_option("--levels", ta.levels, "zoom levels")->check(CLI::Range(1, 3));
    tab_cmd->add_flag("--strict", ta.strict, "nonzero exit when any row fails");
    tab_cmd->add_option("--out", ta.out, "output path prefix");

    std::string calib_out;
    auto* cal_cmd = app.add_subcommand("calibrate", "estimator accuracy on known-dimension sets");
    cal_cmd->add_option("--out", calib_out, "report JSON path");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (sample_cmd->parsed())
            return run_sample(sa);
        if (dim_cmd->parsed())
            return run_dimension(da);
        if (ver_cmd->parsed())
            return run_verify(va);
        if (tab_cmd->parsed())
            return run_table1_cmd(ta);
        if (cal_cmd->parsed())
            return run_calibrate(calib_out);
    } catch (const EmptyFieldError& e) {
        std::cerr << "degenerate data: " << e.what() << "\n";
        return kExitDegenerate;
    } catch (const DegenerateRangeError& e) {
        std::cerr << "degenerate data: " << e.what() << "\n";
        return kExitDegenerate;
    } catch (const ResolutionExceededError& e) {
        std::cerr << "degenerate data: " << e.what() << "\n";
        return kExitDegenerate;
    } catch (const VerificationFailed& e) {
        std::cerr << "degenerate data: " << e.what() << "\n";
        return kExitDegenerate;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
