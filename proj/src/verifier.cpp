#include "blpfract/verifier.hpp"

#include <array>
#include <cmath>

namespace blpfract {

namespace {

using cplx = std::complex<double>;

// 4th-order central stencils in difference form so constant fields cancel
// exactly. Denominators: d1 -> 12h, d2 -> 12h^2, d3 -> 8h^3.
template <typename Row>
cplx d1(const Row& v)
{
    return 8.0 * (v[3] - v[1]) - (v[4] - v[0]);
}

template <typename Row>
cplx d2(const Row& v)
{
    return 16.0 * (v[1] - v[2]) + 16.0 * (v[3] - v[2]) - (v[0] - v[2]) -
           (v[4] - v[2]);
}

template <typename Row>
cplx d3(const Row& v)
{
    return (v[0] - v[6]) - 8.0 * (v[1] - v[5]) + 13.0 * (v[2] - v[4]);
}

struct PointSamples {
    // u on the (x,y) 5x5 lattice, the (t,y) 5x5 lattice; v on the x 7-line,
    // the t 5-line. Indices are offset+2 (offset+3 for the 7-line).
    cplx u_xy[5][5];
    cplx u_ty[5][5];
    cplx v_x[7];
    cplx v_t[5];
    bool ok = true;
};

bool gather(const FieldFn& u, const FieldFn& v, double x, double y, double t,
            const StencilSteps& h, PointSamples& s)
{
    for (int a = -2; a <= 2; ++a)
        for (int b = -2; b <= 2; ++b) {
            const auto uv = u(x + a * h.hx, y + b * h.hy, t);
            if (!uv)
                return false;
            s.u_xy[a + 2][b + 2] = *uv;
        }
    for (int a = -2; a <= 2; ++a)
        for (int b = -2; b <= 2; ++b) {
            const auto uv = u(x, y + b * h.hy, t + a * h.ht);
            if (!uv)
                return false;
            s.u_ty[a + 2][b + 2] = *uv;
        }
    for (int c = -3; c <= 3; ++c) {
        const auto vv = v(x + c * h.hx, y, t);
        if (!vv)
            return false;
        s.v_x[c + 3] = *vv;
    }
    for (int c = -2; c <= 2; ++c) {
        const auto vv = v(x, y, t + c * h.ht);
        if (!vv)
            return false;
        s.v_t[c + 2] = *vv;
    }
    return true;
}

} // namespace

ResidualReport residual_eq1(const FieldFn& u, const FieldFn& v,
                            const Window& window, int nx, int ny,
                            const StencilSteps& steps, SystemForm form,
                            double t)
{
    if (nx < 2 || ny < 2)
        throw std::invalid_argument("residual_eq1: nx, ny must be >= 2");

    ResidualReport rep;
    rep.window = window;
    rep.nx = nx;
    rep.ny = ny;
    rep.form = form;
    rep.steps = steps;
    rep.t = t;

    const double dx = (window.x_max - window.x_min) / nx;
    const double dy = (window.y_max - window.y_min) / ny;
    const double hx = steps.hx, hy = steps.hy, ht = steps.ht;

    for (int j = 0; j < ny; ++j) {
        const double y = window.y_min + (j + 0.5) * dy;
        for (int i = 0; i < nx; ++i) {
            const double x = window.x_min + (i + 0.5) * dx;
            PointSamples s;
            if (!gather(u, v, x, y, t, steps, s)) {
                ++rep.points_masked;
                continue;
            }

            // tensor application: inner difference along one axis per offset
            // of the other, outer difference across the results
            cplx ty_rows[5], sq_rows[5], xxy_cols[5], col2[5];
            for (int a = 0; a < 5; ++a) {
                ty_rows[a] = d1(s.u_ty[a]);            // d/dy at t-offset a
                cplx sq[5];
                for (int b = 0; b < 5; ++b) {
                    const cplx uv = s.u_xy[a][b];
                    sq[b] = uv * uv;
                }
                sq_rows[a] = d1(sq);                   // d/dy of u^2 at x-offset a
                col2[a] = s.u_xy[a][2];
            }
            for (int b = 0; b < 5; ++b) {
                cplx col[5];
                for (int a = 0; a < 5; ++a)
                    col[a] = s.u_xy[a][b];
                xxy_cols[b] = d2(col);                 // d2/dx2 at y-offset b
            }
            const cplx u_ty = d1(ty_rows) / (144.0 * ht * hy);
            const cplx usq_xy = d1(sq_rows) / (144.0 * hx * hy);
            const cplx u_xxy = d1(xxy_cols) / (144.0 * hx * hx * hy);
            const cplx u_xx = d2(col2) / (12.0 * hx * hx);
            const cplx u_x = d1(col2) / (12.0 * hx);

            const cplx v_xxx = d3(s.v_x) / (8.0 * hx * hx * hx);
            cplx v_mid[5];
            for (int c = 0; c < 5; ++c)
                v_mid[c] = s.v_x[c + 1];
            const cplx v_xx = d2(v_mid) / (12.0 * hx * hx);
            const cplx v_x = d1(v_mid) / (12.0 * hx);
            const cplx v_t = d1(s.v_t) / (12.0 * ht);

            const cplx u0 = s.u_xy[2][2];
            cplx r1, r2;
            if (form == SystemForm::StandardBlp) {
                r1 = u_ty - usq_xy + u_xxy - 2.0 * v_xxx;
                r2 = v_t - v_xx - 2.0 * u0 * v_x;
            } else {
                r1 = u_ty - usq_xy + u_xxy - 2.0 * u_xx;
                r2 = v_t - u_x - 2.0 * u0 * v_x;
            }
            rep.max_abs_res_eq1a = std::max(rep.max_abs_res_eq1a, std::abs(r1));
            rep.max_abs_res_eq1b = std::max(rep.max_abs_res_eq1b, std::abs(r2));
            ++rep.points_checked;
        }
    }

    if (2 * rep.points_masked > static_cast<long>(nx) * ny)
        throw VerificationFailed("residual_eq1: more than 50% of points masked");
    return rep;
}

namespace {

FieldFn make_field(SolutionParams params, AnsatzFamily fam, SolutionForm form,
                   double guard, bool complex_branch, bool want_u)
{
    SolutionOptions opt;
    opt.form = form;
    opt.psi_x_guard = guard;
    return [=](double x, double y, double t) -> std::optional<cplx> {
        SolutionParams p = params;
        p.t = t;
        if (complex_branch) {
            const auto r = u1_v1(p, fam, x, y, opt);
            if (!r.valid())
                return std::nullopt;
            return want_u ? r.u : r.v;
        }
        const auto r = u2_v2(p, fam, x, y, opt);
        if (!r.valid())
            return std::nullopt;
        return cplx(want_u ? r.u : r.v, 0.0);
    };
}

} // namespace

FieldFn u2_field(SolutionParams params, AnsatzFamily fam, SolutionForm form,
                 double psi_x_guard)
{
    return make_field(params, fam, form, psi_x_guard, false, true);
}

FieldFn v2_field(SolutionParams params, AnsatzFamily fam, SolutionForm form,
                 double psi_x_guard)
{
    return make_field(params, fam, form, psi_x_guard, false, false);
}

FieldFn u1_field(SolutionParams params, AnsatzFamily fam, SolutionForm form,
                 double psi_x_guard)
{
    return make_field(params, fam, form, psi_x_guard, true, true);
}

FieldFn v1_field(SolutionParams params, AnsatzFamily fam, SolutionForm form,
                 double psi_x_guard)
{
    return make_field(params, fam, form, psi_x_guard, true, false);
}

const char* to_string(SystemForm f)
{
    return f == SystemForm::AsPrinted ? "printed" : "standard";
}

nlohmann::json ResidualReport::to_json() const
{
    return {
        {"max_abs_res_eq1a", max_abs_res_eq1a},
        {"max_abs_res_eq1b", max_abs_res_eq1b},
        {"window", {{"x_min", window.x_min}, {"x_max", window.x_max},
                    {"y_min", window.y_min}, {"y_max", window.y_max}}},
        {"nx", nx},
        {"ny", ny},
        {"points_checked", points_checked},
        {"points_masked", points_masked},
        {"system_form", to_string(form)},
        {"steps", {{"hx", steps.hx}, {"hy", steps.hy}, {"ht", steps.ht}}},
        {"t", t},
    };
}

} // namespace blpfract
