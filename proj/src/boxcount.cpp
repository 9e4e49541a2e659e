#include "blpfract/boxcount.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

namespace blpfract {

NormalizedField normalize(const ScalarField& field)
{
    NormalizedField nf;
    nf.nx = field.nx;
    nf.ny = field.ny;
    nf.z.assign(field.values.size(), std::numeric_limits<double>::quiet_NaN());
    nf.ok.assign(field.values.size(), 0);
    nf.raw_abs.assign(field.values.size(), std::numeric_limits<double>::quiet_NaN());

    double vmin = std::numeric_limits<double>::infinity();
    double vmax = -std::numeric_limits<double>::infinity();
    long valid = 0;
    for (size_t i = 0; i < field.values.size(); ++i) {
        if (field.mask[i])
            continue;
        vmin = std::min(vmin, field.values[i]);
        vmax = std::max(vmax, field.values[i]);
        ++valid;
    }
    if (valid < 2 || !(vmax > vmin))
        throw DegenerateRangeError("normalize: field has no value range");

    nf.v_min = vmin;
    nf.v_max = vmax;
    const double scale = 1.0 / (vmax - vmin);
    for (size_t i = 0; i < field.values.size(); ++i) {
        if (field.mask[i])
            continue;
        nf.z[i] = (field.values[i] - vmin) * scale;
        nf.raw_abs[i] = std::fabs(field.values[i]);
        nf.ok[i] = 1;
    }
    return nf;
}

namespace {

double quantile_linear(std::vector<double> v, double q)
{
    if (v.empty())
        throw DegenerateRangeError("quantile of empty sample");
    std::sort(v.begin(), v.end());
    const double pos = q * (v.size() - 1);
    const size_t lo = static_cast<size_t>(pos);
    if (lo + 1 >= v.size())
        return v.back();
    const double frac = pos - lo;
    return v[lo] * (1.0 - frac) + v[lo + 1] * frac;
}

} // namespace

BoxSet voxelize(const NormalizedField& nf, VoxelizationMode mode,
                double levelset_quantile)
{
    BoxSet set;
    set.mode = mode;
    set.resolution = std::min(nf.nx, nf.ny);
    const int nx = nf.nx, ny = nf.ny;
    const auto z = [&](int i, int j) { return nf.z[static_cast<size_t>(j) * nx + i]; };
    const auto ok = [&](int i, int j) { return nf.ok[static_cast<size_t>(j) * nx + i] != 0; };

    switch (mode) {
    case VoxelizationMode::SurfaceColumns: {
        set.dim = 3;
        set.items.reserve(static_cast<size_t>(nx - 1) * (ny - 1));
        for (int j = 0; j + 1 < ny; ++j) {
            for (int i = 0; i + 1 < nx; ++i) {
                if (!ok(i, j) || !ok(i + 1, j) || !ok(i, j + 1) || !ok(i + 1, j + 1))
                    continue;
                const double a = z(i, j), b = z(i + 1, j);
                const double c = z(i, j + 1), d = z(i + 1, j + 1);
                set.items.push_back({(i + 0.5) / nx, (i + 1.5) / nx,
                                     (j + 0.5) / ny, (j + 1.5) / ny,
                                     std::min(std::min(a, b), std::min(c, d)),
                                     std::max(std::max(a, b), std::max(c, d))});
            }
        }
        break;
    }
    case VoxelizationMode::GraphPoints: {
        set.dim = 3;
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i)
                if (ok(i, j)) {
                    const double px = (i + 0.5) / nx;
                    const double py = (j + 0.5) / ny;
                    const double pz = z(i, j);
                    set.items.push_back({px, px, py, py, pz, pz});
                }
        break;
    }
    case VoxelizationMode::LevelSetImage2D: {
        set.dim = 2;
        std::vector<double> sample;
        sample.reserve(nf.raw_abs.size());
        for (size_t i = 0; i < nf.raw_abs.size(); ++i)
            if (nf.ok[i])
                sample.push_back(nf.raw_abs[i]);
        const double theta = quantile_linear(std::move(sample), levelset_quantile);
        for (int j = 0; j < ny; ++j)
            for (int i = 0; i < nx; ++i)
                if (ok(i, j) && nf.raw_abs[static_cast<size_t>(j) * nx + i] > theta)
                    set.items.push_back({static_cast<double>(i) / nx,
                                         (i + 1.0) / nx,
                                         static_cast<double>(j) / ny,
                                         (j + 1.0) / ny, 0.0, 0.0});
        break;
    }
    }
    if (set.items.empty())
        throw DegenerateRangeError("voxelize: empty occupancy set");
    return set;
}

BoxSet synthetic_set(SyntheticKind kind, int depth)
{
    if (depth < 0 || depth > 8)
        throw std::invalid_argument("synthetic_set: depth must lie in [0,8]");

    BoxSet set;
    switch (kind) {
    case SyntheticKind::Plane:
        set.dim = 3;
        set.mode = VoxelizationMode::SurfaceColumns;
        set.resolution = 512;
        set.items.push_back({0.0, 1.0, 0.0, 1.0, 0.5, 0.5});
        break;
    case SyntheticKind::Line: {
        set.dim = 3;
        set.mode = VoxelizationMode::GraphPoints;
        set.resolution = 512;
        for (int i = 0; i < 512; ++i) {
            const double px = (i + 0.5) / 512.0;
            set.items.push_back({px, px, 0.5, 0.5, 0.5, 0.5});
        }
        break;
    }
    case SyntheticKind::FilledSquare:
        set.dim = 2;
        set.mode = VoxelizationMode::LevelSetImage2D;
        set.resolution = 512;
        set.items.push_back({0.0, 1.0, 0.0, 1.0, 0.0, 0.0});
        break;
    case SyntheticKind::SierpinskiCarpet: {
        // pixel raster of the depth-level carpet; a cell is removed when any
        // of its first `depth` base-3 digit pairs is (1,1)
        set.dim = 2;
        set.mode = VoxelizationMode::LevelSetImage2D;
        const int n = 1024;
        set.resolution = n;
        std::vector<std::uint8_t> in_row(n, 1);
        std::vector<std::vector<std::uint8_t>> digit(static_cast<size_t>(depth),
                                                     std::vector<std::uint8_t>(n));
        for (int i = 0; i < n; ++i) {
            const double c = (i + 0.5) / n;
            double p3 = 1.0;
            for (int d = 0; d < depth; ++d) {
                p3 *= 3.0;
                digit[d][i] = static_cast<std::uint8_t>(
                    static_cast<long>(std::floor(c * p3)) % 3);
            }
        }
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                bool inside = true;
                for (int d = 0; d < depth && inside; ++d)
                    inside = !(digit[d][i] == 1 && digit[d][j] == 1);
                if (inside)
                    set.items.push_back({static_cast<double>(i) / n, (i + 1.0) / n,
                                         static_cast<double>(j) / n, (j + 1.0) / n,
                                         0.0, 0.0});
            }
        break;
    }
    case SyntheticKind::SierpinskiTriangle: {
        // centers of 2^-9 raster cells inside the depth-level right-angle
        // gasket: raster cell (i,j) maps to construction cell (i,j) >> shift,
        // kept when the coordinates share no set bit
        set.dim = 2;
        set.mode = VoxelizationMode::GraphPoints;
        const int n = 512;
        set.resolution = n;
        const int shift = 9 - depth;
        if (shift < 0)
            throw std::invalid_argument("synthetic_set: triangle depth must be <= 9");
        for (int j = 0; j < n; ++j)
            for (int i = 0; i < n; ++i) {
                const int ci = i >> shift, cj = j >> shift;
                if ((ci & cj) == 0) {
                    const double px = (i + 0.5) / n;
                    const double py = (j + 0.5) / n;
                    set.items.push_back({px, px, py, py, 0.0, 0.0});
                }
            }
        break;
    }
    }
    return set;
}

long count_boxes(const BoxSet& set, int eps_exp)
{
    if (eps_exp < 1)
        throw std::invalid_argument("count_boxes: eps must be 2^-k with k >= 1");
    if (eps_exp > (set.dim == 3 ? 10 : 12))
        throw std::invalid_argument("count_boxes: ladder too deep for the occupancy bitset");
    const long nb = 1L << eps_exp;
    if (set.resolution > 0 && nb > 2L * set.resolution)
        throw ResolutionExceededError("count_boxes: eps finer than half the sample spacing");

    const auto lo_idx = [nb](double v) {
        long i = static_cast<long>(std::floor(v * nb));
        return std::clamp(i, 0L, nb - 1);
    };
    const auto hi_idx = [nb](double v, long lo) {
        const double s = v * nb;
        const double fs = std::floor(s);
        long i = (fs == s) ? static_cast<long>(fs) - 1 : static_cast<long>(fs);
        return std::max(lo, std::min(i, nb - 1));
    };

    const bool two_d = set.dim == 2;
    const long planes = two_d ? 1 : nb;
    const size_t bits = static_cast<size_t>(nb) * nb * planes;
    std::vector<std::uint64_t> occ((bits + 63) / 64, 0);
    long count = 0;

    for (const auto& it : set.items) {
        const long x0 = lo_idx(it.x0), x1 = hi_idx(it.x1, x0);
        const long y0 = lo_idx(it.y0), y1 = hi_idx(it.y1, y0);
        const long z0 = two_d ? 0 : lo_idx(it.z0);
        const long z1 = two_d ? 0 : hi_idx(it.z1, z0);
        for (long gx = x0; gx <= x1; ++gx)
            for (long gy = y0; gy <= y1; ++gy)
                for (long gz = z0; gz <= z1; ++gz) {
                    const size_t bit = (static_cast<size_t>(gx) * nb + gy) * planes + gz;
                    const size_t word = bit >> 6;
                    const std::uint64_t m = 1ULL << (bit & 63);
                    if (!(occ[word] & m)) {
                        occ[word] |= m;
                        ++count;
                    }
                }
    }
    return count;
}

namespace {

struct OlsFit {
    double slope, intercept, r2;
};

OlsFit ols(const std::vector<double>& xs, const std::vector<double>& ys,
           int lo, int hi)
{
    const int n = hi - lo + 1;
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (int i = lo; i <= hi; ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    const double den = n * sxx - sx * sx;
    const double slope = (n * sxy - sx * sy) / den;
    const double intercept = (sy - slope * sx) / n;
    double ss_res = 0, ss_tot = 0;
    const double mean = sy / n;
    for (int i = lo; i <= hi; ++i) {
        const double fit = slope * xs[i] + intercept;
        ss_res += (ys[i] - fit) * (ys[i] - fit);
        ss_tot += (ys[i] - mean) * (ys[i] - mean);
    }
    const double r2 = (ss_tot == 0.0) ? 1.0 : 1.0 - ss_res / ss_tot;
    return {slope, intercept, r2};
}

} // namespace

BoxCountReport estimate_dimension(const BoxSet& set, int eps_exp_min,
                                  int eps_exp_max, FitMode fit)
{
    if (eps_exp_max - eps_exp_min + 1 < 4)
        throw std::invalid_argument("estimate_dimension: ladder needs >= 4 rungs");

    BoxCountReport rep;
    rep.mode = set.mode;
    rep.fit = fit;

    std::vector<double> xs, ys;
    for (int k = eps_exp_min; k <= eps_exp_max; ++k) {
        const long n = count_boxes(set, k);
        rep.epsilons.push_back(std::ldexp(1.0, -k));
        rep.counts.push_back(n);
        xs.push_back(k * std::log(2.0));   // log(1/eps)
        ys.push_back(std::log(static_cast<double>(n)));
    }
    const int m = static_cast<int>(xs.size());

    const bool constant =
        std::all_of(rep.counts.begin(), rep.counts.end(),
                    [&](long c) { return c == rep.counts.front(); });
    if (constant) {
        rep.slope = 0.0;
        rep.intercept = ys.front();
        rep.r_squared = 1.0;
        rep.degenerate = true;
        rep.fit_lo = 0;
        rep.fit_hi = m - 1;
        return rep;
    }

    if (fit == FitMode::AllPoints) {
        const auto f = ols(xs, ys, 0, m - 1);
        rep.slope = f.slope;
        rep.intercept = f.intercept;
        rep.r_squared = f.r2;
        rep.fit_lo = 0;
        rep.fit_hi = m - 1;
        return rep;
    }

    // AutoWindow: maximize (r^2, length, end index)
    double best_key[3] = {-2.0, 0.0, 0.0};
    for (int len = 4; len <= m; ++len) {
        for (int lo = 0; lo + len <= m; ++lo) {
            const int hi = lo + len - 1;
            const auto f = ols(xs, ys, lo, hi);
            const double key[3] = {f.r2, static_cast<double>(len),
                                   static_cast<double>(hi)};
            if (std::lexicographical_compare(best_key, best_key + 3, key, key + 3)) {
                std::copy(key, key + 3, best_key);
                rep.slope = f.slope;
                rep.intercept = f.intercept;
                rep.r_squared = f.r2;
                rep.fit_lo = lo;
                rep.fit_hi = hi;
            }
        }
    }
    return rep;
}

nlohmann::json BoxCountReport::to_json() const
{
    return {
        {"epsilons", epsilons},
        {"counts", counts},
        {"slope", slope},
        {"intercept", intercept},
        {"r_squared", r_squared},
        {"fit_range", {fit_lo, fit_hi}},
        {"mode", to_string(mode)},
        {"fit", to_string(fit)},
        {"degenerate", degenerate},
    };
}

std::string BoxCountReport::pairs_csv() const
{
    std::string out = "eps,N\n";
    char buf[64];
    for (size_t i = 0; i < epsilons.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g,%ld\n", epsilons[i], counts[i]);
        out += buf;
    }
    return out;
}

const char* to_string(VoxelizationMode m)
{
    switch (m) {
    case VoxelizationMode::SurfaceColumns: return "columns";
    case VoxelizationMode::GraphPoints: return "points";
    case VoxelizationMode::LevelSetImage2D: return "image2d";
    }
    return "?";
}

const char* to_string(FitMode f)
{
    return f == FitMode::AllPoints ? "all" : "auto";
}

} // namespace blpfract
