#pragma once

// Finite-difference certification that closed-form fields satisfy the
// governing system, in real or complex arithmetic. Two system forms are
// supported:
//   AsPrinted   : u_ty = (u^2 - u_x)_xy + 2 u_xx ,  v_t = u_x  + 2 u v_x
//   StandardBlp : u_ty = (u^2 - u_x)_xy + 2 v_xxx,  v_t = v_xx + 2 u v_x
// The exact solutions annihilate StandardBlp; AsPrinted is kept for the
// discrepancy report.

#include "blpfract/sampler.hpp"

#include "json.hpp"

#include <complex>
#include <functional>
#include <optional>

namespace blpfract {

enum class SystemForm { AsPrinted, StandardBlp };

using FieldFn =
    std::function<std::optional<std::complex<double>>(double x, double y, double t)>;

struct StencilSteps {
    double hx = 2.5e-3, hy = 2.5e-3, ht = 2.5e-3;
};

struct ResidualReport {
    double max_abs_res_eq1a = 0.0;
    double max_abs_res_eq1b = 0.0;
    Window window{0.0, 1.0, 0.0, 1.0};
    int nx = 0, ny = 0;
    long points_checked = 0;
    long points_masked = 0;
    SystemForm form = SystemForm::StandardBlp;
    StencilSteps steps;
    double t = 0.0;

    nlohmann::json to_json() const;
};

struct VerificationFailed : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Max |residual| of both equations over the unmasked cell centers of the
/// window. 4th-order central stencils; mixed partials by tensor application
/// of the 1D stencils to exact field evaluations. A point is masked (and
/// skipped) when any stencil sample is unavailable. Throws VerificationFailed
/// when more than half the grid is masked.
ResidualReport residual_eq1(const FieldFn& u, const FieldFn& v,
                            const Window& window, int nx, int ny,
                            const StencilSteps& steps = {},
                            SystemForm form = SystemForm::StandardBlp,
                            double t = 0.0);

/// Field adapters for the closed-form solutions, with the verifier-grade
/// psi_x guard (grid points whose stencil touches the degenerate band are
/// masked rather than evaluated next to a pole).
FieldFn u2_field(SolutionParams params, AnsatzFamily fam, SolutionForm form,
                 double psi_x_guard = 2e-2);
FieldFn v2_field(SolutionParams params, AnsatzFamily fam, SolutionForm form,
                 double psi_x_guard = 2e-2);
FieldFn u1_field(SolutionParams params, AnsatzFamily fam, SolutionForm form,
                 double psi_x_guard = 2e-2);
FieldFn v1_field(SolutionParams params, AnsatzFamily fam, SolutionForm form,
                 double psi_x_guard = 2e-2);

const char* to_string(SystemForm f);

} // namespace blpfract
