#include "blpfract/sampler.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <thread>

namespace blpfract {

long ScalarField::masked_count() const
{
    long n = 0;
    for (auto m : mask)
        n += m;
    return n;
}

namespace {

std::string fmt17(double v)
{
    if (std::isnan(v))
        return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

ScalarField sample(const SolutionParams& params, const AnsatzFamily& fam,
                   GradientVariant variant, const Window& window,
                   int nx, int ny, int threads)
{
    if (nx < 2 || ny < 2)
        throw std::invalid_argument("sample: nx and ny must be >= 2");

    ScalarField f{window, nx, ny,
                  std::vector<double>(static_cast<size_t>(nx) * ny,
                                      std::numeric_limits<double>::quiet_NaN()),
                  std::vector<std::uint8_t>(static_cast<size_t>(nx) * ny, 1)};

    // The field factorises through 1D pieces: psi_x and psi per column,
    // (phi, phi_y) per row; the z coupling is evaluated per cell. Precompute
    // the 1D pieces once so TypeII's numeric Jacobi derivatives stay O(n).
    const double nan = std::numeric_limits<double>::quiet_NaN();
    std::vector<double> col_psi_x(nx, nan), col_psi(nx, nan);
    std::vector<std::uint8_t> col_ok(nx, 0);
    for (int i = 0; i < nx; ++i) {
        const double x = f.x_center(i);
        const auto d = psi_derivs(fam, x, params.t);
        if (!d)
            continue;
        col_psi_x[i] = d->psi_x;
        if (variant == GradientVariant::ConsistentPsi) {
            const auto p = psi(fam, x, params.t);
            if (!p)
                continue;
            col_psi[i] = *p;
        }
        col_ok[i] = 1;
    }

    std::vector<double> row_phi(ny, nan), row_phi_y(ny, nan);
    std::vector<std::uint8_t> row_ok(ny, 0);
    for (int j = 0; j < ny; ++j) {
        const double y = f.y_center(j);
        const auto p = phi(fam, y, params.t);
        const auto d = phi_y(fam, y, params.t);
        if (!p || !d)
            continue;
        row_phi[j] = *p;
        row_phi_y[j] = *d;
        row_ok[j] = 1;
    }

    auto fill_rows = [&](int j0, int j1) {
        for (int j = j0; j < j1; ++j) {
            if (!row_ok[j])
                continue;
            for (int i = 0; i < nx; ++i) {
                if (!col_ok[i])
                    continue;
                const double base = (variant == GradientVariant::LiteralX)
                                        ? f.x_center(i)
                                        : col_psi[i];
                const double z = 0.5 * params.delta * (base + row_phi[j]);
                const auto u = gradient_from_parts(params.delta, col_psi_x[i],
                                                   row_phi_y[j], z);
                if (!u)
                    continue;
                const size_t idx = static_cast<size_t>(j) * nx + i;
                f.values[idx] = *u;
                f.mask[idx] = 0;
            }
        }
    };

    if (threads <= 1) {
        fill_rows(0, ny);
    } else {
        std::vector<std::thread> pool;
        const int block = (ny + threads - 1) / threads;
        for (int t = 0; t < threads; ++t) {
            const int j0 = t * block;
            const int j1 = std::min(ny, j0 + block);
            if (j0 < j1)
                pool.emplace_back(fill_rows, j0, j1);
        }
        for (auto& th : pool)
            th.join();
    }

    const long masked = f.masked_count();
    if (10 * masked > 9L * nx * ny)
        throw EmptyFieldError("sample: more than 90% of grid points are masked");
    return f;
}

ZoomSeries zoom_series(const SolutionParams& params, const AnsatzFamily& fam,
                       GradientVariant variant, const Window& base,
                       double shrink, int levels, int nx, int ny, int threads)
{
    if (!(shrink > 0.0 && shrink < 1.0))
        throw std::invalid_argument("zoom_series: shrink must lie in (0,1)");
    if (levels < 1)
        throw std::invalid_argument("zoom_series: levels must be >= 1");

    const double cx = 0.5 * (base.x_min + base.x_max);
    const double cy = 0.5 * (base.y_min + base.y_max);
    double hx = 0.5 * (base.x_max - base.x_min);
    double hy = 0.5 * (base.y_max - base.y_min);

    ZoomSeries s;
    for (int level = 0; level < levels; ++level) {
        Window w{cx - hx, cx + hx, cy - hy, cy + hy};
        try {
            s.fields.push_back(sample(params, fam, variant, w, nx, ny, threads));
        } catch (const EmptyFieldError& e) {
            throw EmptyFieldError("zoom level " + std::to_string(level) + ": " +
                                  e.what());
        }
        s.windows.push_back(w);
        hx *= shrink;
        hy *= shrink;
    }
    return s;
}

std::string export_csv(const ScalarField& field)
{
    std::string out;
    out += "# window " + fmt17(field.window.x_min) + " " + fmt17(field.window.x_max) +
           " " + fmt17(field.window.y_min) + " " + fmt17(field.window.y_max) + "\n";
    out += "# nx ny " + std::to_string(field.nx) + " " + std::to_string(field.ny) + "\n";
    for (int j = 0; j < field.ny; ++j) {
        for (int i = 0; i < field.nx; ++i) {
            if (i)
                out += ',';
            out += field.masked(i, j) ? "nan" : fmt17(field.at(i, j));
        }
        out += '\n';
    }
    return out;
}

ScalarField import_csv(std::istream& in)
{
    std::string line;
    double x0 = 0, x1 = 0, y0 = 0, y1 = 0;
    int nx = -1, ny = -1;
    bool have_window = false;

    // header: "# window ..." and "# nx ny ..."; other comment lines skipped
    while (in.peek() == '#') {
        std::getline(in, line);
        std::istringstream ls(line);
        std::string hash, tag;
        ls >> hash >> tag;
        if (tag == "window") {
            ls >> x0 >> x1 >> y0 >> y1;
            have_window = true;
        } else if (tag == "nx") {
            std::string ytag;
            ls >> ytag >> nx >> ny;
        }
    }
    if (!have_window || nx < 2 || ny < 2)
        throw std::runtime_error("import_csv: missing or malformed grid header");

    ScalarField f{Window{x0, x1, y0, y1}, nx, ny,
                  std::vector<double>(static_cast<size_t>(nx) * ny),
                  std::vector<std::uint8_t>(static_cast<size_t>(nx) * ny, 0)};
    for (int j = 0; j < ny; ++j) {
        if (!std::getline(in, line))
            throw std::runtime_error("import_csv: truncated data section");
        std::istringstream ls(line);
        std::string cell;
        for (int i = 0; i < nx; ++i) {
            if (!std::getline(ls, cell, ','))
                throw std::runtime_error("import_csv: short row");
            const size_t idx = static_cast<size_t>(j) * nx + i;
            if (cell == "nan") {
                f.values[idx] = std::numeric_limits<double>::quiet_NaN();
                f.mask[idx] = 1;
            } else {
                f.values[idx] = std::strtod(cell.c_str(), nullptr);
            }
        }
    }
    return f;
}

ScalarField import_csv_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw std::runtime_error("import_csv: cannot open " + path);
    return import_csv(in);
}

nlohmann::json field_to_json(const ScalarField& field)
{
    nlohmann::json j;
    j["window"] = {{"x_min", field.window.x_min}, {"x_max", field.window.x_max},
                   {"y_min", field.window.y_min}, {"y_max", field.window.y_max}};
    j["nx"] = field.nx;
    j["ny"] = field.ny;
    nlohmann::json rows = nlohmann::json::array();
    for (int jj = 0; jj < field.ny; ++jj) {
        nlohmann::json row = nlohmann::json::array();
        for (int i = 0; i < field.nx; ++i) {
            if (field.masked(i, jj))
                row.push_back(nullptr);   // JSON has no NaN literal
            else
                row.push_back(field.at(i, jj));
        }
        rows.push_back(std::move(row));
    }
    j["values"] = std::move(rows);
    return j;
}

ScalarField field_from_json(const nlohmann::json& j)
{
    const auto& w = j.at("window");
    const int nx = j.at("nx").get<int>();
    const int ny = j.at("ny").get<int>();
    ScalarField f{Window{w.at("x_min").get<double>(), w.at("x_max").get<double>(),
                         w.at("y_min").get<double>(), w.at("y_max").get<double>()},
                  nx, ny,
                  std::vector<double>(static_cast<size_t>(nx) * ny),
                  std::vector<std::uint8_t>(static_cast<size_t>(nx) * ny, 0)};
    const auto& rows = j.at("values");
    for (int jj = 0; jj < ny; ++jj) {
        const auto& row = rows.at(jj);
        for (int i = 0; i < nx; ++i) {
            const size_t idx = static_cast<size_t>(jj) * nx + i;
            if (row.at(i).is_null()) {
                f.values[idx] = std::numeric_limits<double>::quiet_NaN();
                f.mask[idx] = 1;
            } else {
                f.values[idx] = row.at(i).get<double>();
            }
        }
    }
    return f;
}

} // namespace blpfract
