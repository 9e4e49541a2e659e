#pragma once

// Explicit solution fields of the BLP system built from a separated phase
// psi(x,t) + phi(y), plus the gradient field U that generates the fractal
// surfaces.
//
// The solution formulas admit two readings of the radical term:
//   PrintedProduct  -- coth(w) * sqrt(coth^2 w - 1), the literal typeset form
//   RiccatiSum      -- coth(w) + csch(w)  (= coth(w/2)); the form the Riccati
//                      construction actually produces and the only one that
//                      satisfies the governing system (the printed gradient
//                      formula is exactly the derivative of this form).
// Both are provided; PrintedProduct is the default for figure-facing paths.

#include "blpfract/ansatz.hpp"

#include <complex>
#include <optional>

namespace blpfract {

struct SolutionParams {
    double delta = 1.0;   // nonzero for every field here; delta = 0 collapses U
    double t = 0.0;       // time slice
};

enum class GradientVariant { LiteralX, ConsistentPsi };
enum class SolutionForm { PrintedProduct, RiccatiSum };

enum class PointStatus { Ok, Masked, DegeneratePhase };

struct ComplexPair {
    std::complex<double> u, v;
    PointStatus status = PointStatus::Ok;
    bool valid() const { return status == PointStatus::Ok; }
};

struct RealPair {
    double u, v;
    PointStatus status = PointStatus::Ok;
    bool valid() const { return status == PointStatus::Ok; }
};

/// Phase data at a point; lets the field formulas be exercised directly.
struct PhasePoint {
    double psi, phi;
    double psi_x, psi_xx, psi_t, phi_y;
};

struct SolutionOptions {
    SolutionForm form = SolutionForm::PrintedProduct;
    double psi_x_guard = 1e-12;   // |psi_x| below this -> degenerate phase
    double pole_guard = 1e-9;     // |w| below this -> masked (coth branch)
};

ComplexPair u1_v1_at(const SolutionParams& params, const PhasePoint& p,
                     const SolutionOptions& opt = {});
RealPair u2_v2_at(const SolutionParams& params, const PhasePoint& p,
                  const SolutionOptions& opt = {});

/// Family-backed evaluation; masked where the ansatz is singular.
ComplexPair u1_v1(const SolutionParams& params, const AnsatzFamily& fam,
                  double x, double y, const SolutionOptions& opt = {});
RealPair u2_v2(const SolutionParams& params, const AnsatzFamily& fam,
               double x, double y, const SolutionOptions& opt = {});

/// The z-dependent core of the gradient field with the coefficient attached:
/// -(1/8) psi_x phi_y delta^2 csch(z) [csch(z) + coth(z)]. Shared by the
/// pointwise evaluator and the grid sampler so both produce bit-identical
/// values.
std::optional<double> gradient_from_parts(double delta, double psi_x,
                                          double phi_y, double z,
                                          double pole_guard = 1e-9);

/// The gradient field. LiteralX uses z = (delta/2)(x + phi) as
/// printed (the figure-facing default); ConsistentPsi uses
/// z = (delta/2)(psi + phi), which equals du2/dy = dv2/dx of the RiccatiSum
/// fields exactly.
std::optional<double> gradient_U(const SolutionParams& params,
                                 const AnsatzFamily& fam,
                                 GradientVariant variant, double x, double y,
                                 double pole_guard = 1e-9);

const char* to_string(GradientVariant v);
const char* to_string(SolutionForm f);

} // namespace blpfract
