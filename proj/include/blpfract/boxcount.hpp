#pragma once

// Voxel box counting and log-log slope estimation for sampled surfaces, with
// a calibration corpus of sets of known dimension.

#include "blpfract/sampler.hpp"

#include "json.hpp"

#include <string>
#include <vector>

namespace blpfract {

enum class VoxelizationMode {
    SurfaceColumns,    // each grid cell occupies the z-range of its 4 corners
    GraphPoints,       // one voxel per sample point
    LevelSetImage2D,   // binary image |U| > threshold, 2D counting
};

enum class FitMode { AllPoints, AutoWindow };

enum class SyntheticKind { Plane, Line, FilledSquare, SierpinskiCarpet, SierpinskiTriangle };

struct DegenerateRangeError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ResolutionExceededError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Field affinely mapped into the unit cube: x,y -> [0,1]^2 and values ->
/// [0,1] over unmasked cells. raw_abs keeps |raw value| for level-set
/// thresholding. The affine parameters are recorded for reports.
struct NormalizedField {
    int nx = 0, ny = 0;
    std::vector<double> z;             // normalized heights, NaN when masked
    std::vector<std::uint8_t> ok;
    std::vector<double> raw_abs;
    double v_min = 0, v_max = 0;       // value-axis affine record
};

/// Throws DegenerateRangeError for a constant (or empty) field.
NormalizedField normalize(const ScalarField& field);

/// Axis-aligned occupancy items in the unit square/cube (points are
/// degenerate boxes). `resolution` is the finest sample spacing per axis and
/// bounds the usable ladder.
struct BoxSet {
    int dim = 3;                       // 2 or 3
    VoxelizationMode mode = VoxelizationMode::SurfaceColumns;
    int resolution = 0;
    struct Item {
        double x0, x1, y0, y1, z0, z1;
    };
    std::vector<Item> items;
};

/// Occupancy of the normalized field under a voxelization mode. The level-set
/// threshold is the q-quantile (linear interpolation) of |raw values|.
BoxSet voxelize(const NormalizedField& nf, VoxelizationMode mode,
                double levelset_quantile = 0.90);

/// Deterministic calibration sets: Plane (2), Line (1), FilledSquare (2),
/// SierpinskiCarpet(depth) (log8/log3), SierpinskiTriangle(depth) (log3/log2).
BoxSet synthetic_set(SyntheticKind kind, int depth = 6);

/// Number of occupied eps-boxes, eps = 2^-eps_exp. Boxes are half-open along
/// each axis; items touching only a boundary do not spill into the next box.
/// Throws ResolutionExceededError when eps < 1/(2*resolution).
long count_boxes(const BoxSet& set, int eps_exp);

struct BoxCountReport {
    std::vector<double> epsilons;
    std::vector<long> counts;
    double slope = 0, intercept = 0, r_squared = 0;
    int fit_lo = 0, fit_hi = 0;        // inclusive index range used
    VoxelizationMode mode = VoxelizationMode::SurfaceColumns;
    FitMode fit = FitMode::AutoWindow;
    bool degenerate = false;

    nlohmann::json to_json() const;
    std::string pairs_csv() const;     // two-column (eps, N) CSV
};

/// OLS slope of log N vs log(1/eps) over the dyadic ladder
/// [eps_exp_min, eps_exp_max]. AutoWindow picks the contiguous subrange of
/// >= 4 rungs maximizing r^2 (ties: longer range, then finer eps).
BoxCountReport estimate_dimension(const BoxSet& set, int eps_exp_min = 1,
                                  int eps_exp_max = 9,
                                  FitMode fit = FitMode::AutoWindow);

const char* to_string(VoxelizationMode m);
const char* to_string(FitMode f);

} // namespace blpfract
