#pragma once

// Grid sampling of the gradient field over rectangular windows, nested zoom
// series, and lossless CSV/JSON grid exchange.

#include "blpfract/solutions.hpp"

#include "json.hpp"

#include <cstdint>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace blpfract {

struct Window {
    double x_min, x_max, y_min, y_max;

    Window(double x0, double x1, double y0, double y1)
        : x_min(x0), x_max(x1), y_min(y0), y_max(y1)
    {
        if (!(x_min < x_max) || !(y_min < y_max))
            throw std::invalid_argument("window bounds must satisfy min < max");
    }
};

/// Sampled grid of a real field at cell centers, with a validity mask.
/// values is row-major: row j (y index) of nx values; masked cells hold NaN.
struct ScalarField {
    Window window;
    int nx = 0, ny = 0;
    std::vector<double> values;
    std::vector<std::uint8_t> mask;   // 1 = masked

    double dx() const { return (window.x_max - window.x_min) / nx; }
    double dy() const { return (window.y_max - window.y_min) / ny; }
    double x_center(int i) const { return window.x_min + (i + 0.5) * dx(); }
    double y_center(int j) const { return window.y_min + (j + 0.5) * dy(); }
    double at(int i, int j) const { return values[static_cast<size_t>(j) * nx + i]; }
    bool masked(int i, int j) const { return mask[static_cast<size_t>(j) * nx + i] != 0; }
    long masked_count() const;
};

struct EmptyFieldError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Evaluate gradient_U on the nx x ny cell-center grid. Deterministic for
/// identical inputs; row-parallel when threads > 1 (same values either way).
/// Throws EmptyFieldError when more than 90% of the points are masked.
ScalarField sample(const SolutionParams& params, const AnsatzFamily& fam,
                   GradientVariant variant, const Window& window,
                   int nx, int ny, int threads = 1);

struct ZoomSeries {
    std::vector<Window> windows;
    std::vector<ScalarField> fields;
};

/// Nested windows scaled by `shrink` per level about the base window's
/// center, each sampled at nx x ny.
ZoomSeries zoom_series(const SolutionParams& params, const AnsatzFamily& fam,
                       GradientVariant variant, const Window& base,
                       double shrink, int levels, int nx, int ny,
                       int threads = 1);

/// CSV with two pinned header rows then ny rows of nx comma-separated values
/// ("nan" marks masked cells). 17 significant digits; export->import->export
/// is byte-identical.
std::string export_csv(const ScalarField& field);
ScalarField import_csv(std::istream& in);
ScalarField import_csv_file(const std::string& path);

nlohmann::json field_to_json(const ScalarField& field);
ScalarField field_from_json(const nlohmann::json& j);

} // namespace blpfract
