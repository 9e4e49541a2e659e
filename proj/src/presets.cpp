#include "blpfract/presets.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace blpfract {

const std::array<std::array<double, 3>, 3> kReferenceTable1 = {{
    {1.6159, 1.4696, 1.3858},
    {1.7943, 1.5833, 1.5110},
    {1.5403, 1.3921, 1.3185},
}};

namespace {

ExperimentPreset make_fig(int index)
{
    ExperimentPreset p;
    p.name = "fig" + std::to_string(index);
    p.family = static_cast<AnsatzKind>(index);
    p.params = {1.0, 0.0};
    return p;
}

VoxelizationMode mode_from_string(const std::string& s)
{
    if (s == "columns") return VoxelizationMode::SurfaceColumns;
    if (s == "points") return VoxelizationMode::GraphPoints;
    if (s == "image2d") return VoxelizationMode::LevelSetImage2D;
    throw std::invalid_argument("unknown voxelization mode: " + s);
}

} // namespace

nlohmann::json ExperimentPreset::to_json() const
{
    return {
        {"name", name},
        {"family", static_cast<int>(family)},
        {"delta", params.delta},
        {"t", params.t},
        {"variant", to_string(variant)},
        {"window", {base_window.x_min, base_window.x_max, base_window.y_min,
                    base_window.y_max}},
        {"shrink", shrink},
        {"levels", levels},
        {"resolution", resolution},
        {"boxcount",
         {{"mode", to_string(box.mode)},
          {"levelset_quantile", box.levelset_quantile},
          {"eps_min_exp", box.eps_min_exp},
          {"eps_max_exp", box.eps_max_exp},
          {"fit", to_string(box.fit)}}},
    };
}

ExperimentPreset ExperimentPreset::from_json(const nlohmann::json& j)
{
    ExperimentPreset p;
    p.name = j.at("name").get<std::string>();
    p.family = static_cast<AnsatzKind>(j.at("family").get<int>());
    p.params.delta = j.at("delta").get<double>();
    p.params.t = j.at("t").get<double>();
    p.variant = j.at("variant").get<std::string>() == "consistent"
                    ? GradientVariant::ConsistentPsi
                    : GradientVariant::LiteralX;
    const auto& w = j.at("window");
    p.base_window = Window{w.at(0).get<double>(), w.at(1).get<double>(),
                           w.at(2).get<double>(), w.at(3).get<double>()};
    p.shrink = j.at("shrink").get<double>();
    p.levels = j.at("levels").get<int>();
    p.resolution = j.at("resolution").get<int>();
    const auto& b = j.at("boxcount");
    p.box.mode = mode_from_string(b.at("mode").get<std::string>());
    p.box.levelset_quantile = b.at("levelset_quantile").get<double>();
    p.box.eps_min_exp = b.at("eps_min_exp").get<int>();
    p.box.eps_max_exp = b.at("eps_max_exp").get<int>();
    p.box.fit = b.at("fit").get<std::string>() == "all" ? FitMode::AllPoints
                                                        : FitMode::AutoWindow;
    return p;
}

const std::vector<ExperimentPreset>& builtin_presets()
{
    static const std::vector<ExperimentPreset> presets = {
        make_fig(1), make_fig(2), make_fig(3)};
    return presets;
}

std::optional<ExperimentPreset> find_preset(const std::string& name)
{
    for (const auto& p : builtin_presets())
        if (p.name == name)
            return p;
    return std::nullopt;
}

bool Table1Result::all_rows_ok() const
{
    for (const auto& fam : families)
        for (int l = 0; l < levels; ++l)
            if (fam.cells[l].failed)
                return false;
    return true;
}

Table1Result run_table1(int resolution, int levels, int threads)
{
    if (levels < 1 || levels > 3)
        throw std::invalid_argument("run_table1: levels must lie in [1,3]");

    Table1Result res;
    res.levels = levels;
    res.resolution = resolution;

    for (int f = 0; f < 3; ++f) {
        const auto& preset = builtin_presets()[f];
        auto& row = res.families[f];
        row.preset = preset.name;

        const AnsatzFamily fam = AnsatzFamily::of(preset.family);
        ZoomSeries series;
        bool sampled = false;
        std::string sample_error;
        try {
            series = zoom_series(preset.params, fam, preset.variant,
                                 preset.base_window, preset.shrink, levels,
                                 resolution, resolution, threads);
            sampled = true;
        } catch (const std::exception& e) {
            sample_error = e.what();
        }

        for (int l = 0; l < levels; ++l) {
            auto& cell = row.cells[l];
            cell.level = l;
            cell.reference_value = kReferenceTable1[f][l];
            if (!sampled) {
                cell.failed = true;
                cell.error = sample_error;
                continue;
            }
            cell.window = series.windows[l];
            // clamp the ladder to what the sampling resolution supports
            int max_exp = preset.box.eps_min_exp;
            while ((1L << (max_exp + 1)) <= 2L * resolution &&
                   max_exp + 1 <= preset.box.eps_max_exp)
                ++max_exp;
            try {
                const auto nf = normalize(series.fields[l]);
                const auto primary =
                    voxelize(nf, preset.box.mode, preset.box.levelset_quantile);
                const auto rep =
                    estimate_dimension(primary, preset.box.eps_min_exp,
                                       max_exp, preset.box.fit);
                cell.estimate = rep.slope;
                cell.r_squared = rep.r_squared;
                cell.deviation = rep.slope - cell.reference_value;

                for (auto mode : {VoxelizationMode::SurfaceColumns,
                                  VoxelizationMode::GraphPoints,
                                  VoxelizationMode::LevelSetImage2D}) {
                    const auto alt = estimate_dimension(
                        voxelize(nf, mode, preset.box.levelset_quantile),
                        preset.box.eps_min_exp, max_exp, preset.box.fit);
                    if (mode == VoxelizationMode::SurfaceColumns)
                        cell.est_columns = alt.slope;
                    else if (mode == VoxelizationMode::GraphPoints)
                        cell.est_points = alt.slope;
                    else
                        cell.est_image2d = alt.slope;
                }
            } catch (const std::exception& e) {
                cell.failed = true;
                cell.error = e.what();
            }
        }

        row.strictly_decreasing = levels >= 2;
        for (int l = 0; l + 1 < levels; ++l)
            if (row.cells[l].failed || row.cells[l + 1].failed ||
                !(row.cells[l].estimate > row.cells[l + 1].estimate))
                row.strictly_decreasing = false;
    }
    return res;
}

nlohmann::json Table1Result::to_json() const
{
    nlohmann::json fams = nlohmann::json::array();
    for (const auto& fam : families) {
        nlohmann::json cells = nlohmann::json::array();
        for (int l = 0; l < levels; ++l) {
            const auto& c = fam.cells[l];
            cells.push_back({
                {"level", c.level},
                {"window", {c.window.x_min, c.window.x_max, c.window.y_min,
                            c.window.y_max}},
                {"failed", c.failed},
                {"error", c.error},
                {"estimate", c.estimate},
                {"r_squared", c.r_squared},
                {"reference", c.reference_value},
                {"deviation", c.deviation},
                {"modes",
                 {{"columns", c.est_columns},
                  {"points", c.est_points},
                  {"image2d", c.est_image2d}}},
            });
        }
        fams.push_back({{"preset", fam.preset},
                        {"strictly_decreasing", fam.strictly_decreasing},
                        {"cells", std::move(cells)}});
    }
    return {{"resolution", resolution}, {"levels", levels},
            {"families", std::move(fams)}};
}

std::string Table1Result::render_text() const
{
    std::ostringstream out;
    char buf[256];
    out << "dimension estimates vs published values (primary mode)\n";
    for (const auto& fam : families) {
        std::snprintf(buf, sizeof buf, "%-6s trend=%s\n", fam.preset.c_str(),
                      fam.strictly_decreasing ? "decreasing" : "not-decreasing");
        out << buf;
        for (int l = 0; l < levels; ++l) {
            const auto& c = fam.cells[l];
            if (c.failed) {
                std::snprintf(buf, sizeof buf, "  level %d: FAILED (%s)\n", l,
                              c.error.c_str());
            } else {
                std::snprintf(buf, sizeof buf,
                              "  level %d: est %.4f  ref %.4f  dev %+7.4f  "
                              "[cols %.4f  pts %.4f  img %.4f]\n",
                              l, c.estimate, c.reference_value, c.deviation,
                              c.est_columns, c.est_points, c.est_image2d);
            }
            out << buf;
        }
    }
    return out.str();
}

} // namespace blpfract
