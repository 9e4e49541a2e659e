#pragma once

// The three separated function pairs (psi, phi) that shape the solution
// geometry: nested trig-log oscillations (TypeI), Jacobi elliptic
// compositions (TypeII), and rational envelopes with trig-log cores
// (TypeIII). Log arguments make the axes x + t = 0 (TypeI/III), x = 0
// (TypeII) and y = 0 singular; evaluation masks a guard neighbourhood.

#include "blpfract/special_functions.hpp"

#include <functional>
#include <optional>

namespace blpfract {

enum class AnsatzKind { TypeI = 1, TypeII = 2, TypeIII = 3 };

enum class DerivMode { Analytic, Numeric };

struct AnsatzFamily {
    AnsatzKind kind = AnsatzKind::TypeI;
    EllipticModulus modulus{0.7};        // TypeII only
    DerivMode deriv_mode = DerivMode::Analytic;
    double numeric_step_rel = 1e-3;      // relative step for Numeric mode
    double singular_guard = 1e-9;        // mask radius around log singularities

    /// Family with its default derivative mode (TypeII is Numeric-only:
    /// analytic differentiation of the nested Jacobi composition is not
    /// worth the transcription risk at the needed tolerance).
    static AnsatzFamily of(AnsatzKind kind);
    /// CLI-facing index 1..3.
    static AnsatzFamily from_index(int index);
};

struct PsiDerivs {
    double psi_x, psi_xx, psi_t;
};

std::optional<double> psi(const AnsatzFamily& fam, double x, double t);
std::optional<double> phi(const AnsatzFamily& fam, double y, double t);

std::optional<PsiDerivs> psi_derivs(const AnsatzFamily& fam, double x, double t);
std::optional<double> phi_y(const AnsatzFamily& fam, double y, double t);

/// 4th-order central first/second derivatives of a scalar callable that may
/// mask points; nothing if any stencil sample is masked. Exposed for tests
/// and the Numeric derivative mode.
struct NumericDerivs {
    double d1, d2;
};
std::optional<NumericDerivs> central_derivs(
    const std::function<std::optional<double>(double)>& f, double u, double h);

} // namespace blpfract
