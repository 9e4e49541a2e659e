#pragma once

// Experiment presets reproducing the published figures, and the consolidated
// table-1 run (three ansatz families x three zoom levels, dimension estimates
// side by side with the published values).

#include "blpfract/boxcount.hpp"

#include <array>
#include <optional>
#include <string>

namespace blpfract {

struct BoxcountConfig {
    VoxelizationMode mode = VoxelizationMode::LevelSetImage2D;
    double levelset_quantile = 0.90;
    int eps_min_exp = 1, eps_max_exp = 9;
    FitMode fit = FitMode::AllPoints;
};

struct ExperimentPreset {
    std::string name;
    AnsatzKind family = AnsatzKind::TypeI;
    SolutionParams params;                       // delta = 1, t = 0
    GradientVariant variant = GradientVariant::LiteralX;
    Window base_window{-0.04, 0.04, -0.04, 0.04};
    double shrink = 0.1;
    int levels = 3;
    int resolution = 1024;
    BoxcountConfig box;

    nlohmann::json to_json() const;
    static ExperimentPreset from_json(const nlohmann::json& j);
};

/// fig1, fig2, fig3: the three published experiments.
const std::vector<ExperimentPreset>& builtin_presets();
std::optional<ExperimentPreset> find_preset(const std::string& name);

/// Published dimension estimates, rows = families, cols = zoom levels.
extern const std::array<std::array<double, 3>, 3> kReferenceTable1;

struct Table1Cell {
    int level = 0;
    Window window{-0.04, 0.04, -0.04, 0.04};
    bool failed = false;
    std::string error;
    double estimate = 0, r_squared = 0;
    double reference_value = 0, deviation = 0;
    // alternative-mode estimates for the per-mode deviation table
    double est_columns = 0, est_points = 0, est_image2d = 0;
};

struct Table1Family {
    std::string preset;
    std::array<Table1Cell, 3> cells;
    bool strictly_decreasing = false;
};

struct Table1Result {
    std::array<Table1Family, 3> families;
    int levels = 3;
    int resolution = 1024;

    bool all_rows_ok() const;
    nlohmann::json to_json() const;
    std::string render_text() const;
};

/// Runs the three presets over `levels` zoom levels at the given resolution.
/// The per-preset boxcount config drives the primary estimate; all three
/// voxelization modes are evaluated for the deviation table.
Table1Result run_table1(int resolution = 1024, int levels = 3, int threads = 1);

} // namespace blpfract
