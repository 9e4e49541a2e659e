#pragma once

// Riccati equation machinery: the three closed-form branches of
// zeta' = delta*zeta + zeta^2, a finite-difference residual self-check, and
// the truncated-ansatz coefficient functions.

#include <optional>

namespace blpfract {

enum class RiccatiBranchKind { Coth, Tanh, Rational };

/// delta together with the branch its sign selects (coth for delta > 0,
/// tanh for delta < 0, rational for delta = 0).
struct RiccatiBranch {
    double delta;
    RiccatiBranchKind kind;

    static RiccatiBranch from_delta(double delta);
};

/// Closed-form zeta(q) for the branch; nothing at a pole (coth at q = 0,
/// q = 0 in the rational branch).
std::optional<double> zeta(const RiccatiBranch& branch, double q,
                           double pole_guard = 1e-12);

/// |zeta'_num(q) - delta*zeta(q) - zeta(q)^2| with a central difference of
/// step h; `richardson` extrapolates the h and h/2 differences to cancel the
/// leading truncation term. Throws std::domain_error when q is within 10*h
/// of a pole.
double riccati_residual(const RiccatiBranch& branch, double q, double h = 1e-5,
                        bool richardson = false);

/// The separated phase q(x,y,t) = psi(x,t) + phi(y) and every partial the
/// coefficient formulas consume. Under separation all mixed x/y partials
/// vanish: q_xy = q_xxy = q_xxxy = 0.
struct SeparatedPhase {
    double q = 0;
    double q_x = 0, q_y = 0, q_t = 0;
    double q_xx = 0, q_xy = 0, q_xt = 0;
    double q_xxx = 0, q_xxy = 0, q_xxxy = 0;
};

struct CoefficientSet {
    double a1, b1, c1;
    double a2, b2, c2;
};

/// Ansatz coefficient functions at a point. Throws std::domain_error when
/// q_x = 0 (a1 and c2 divide by q_x).
CoefficientSet coefficients(const SeparatedPhase& p, double delta);

} // namespace blpfract
