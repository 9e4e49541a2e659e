#include "blpfract/ansatz.hpp"

#include <cmath>
#include <stdexcept>

namespace blpfract {

namespace {

// --------------------------------------------------------------------------
// TypeI:  psi = 1 + exp(-X (X + cos L + sin L)),  L = log(X^2),  X = x + t
//         phi is the same shape in y.

double type1_value(double s)
{
    const double L = std::log(s * s);
    return 1.0 + std::exp(-s * (s + std::cos(L) + std::sin(L)));
}

double type1_d1(double s)
{
    const double L = std::log(s * s);
    const double g = s + std::cos(L) + std::sin(L);
    const double h1 = 2.0 * s + 3.0 * std::cos(L) - std::sin(L);
    return -std::exp(-s * g) * h1;
}

double type1_d2(double s)
{
    const double L = std::log(s * s);
    const double g = s + std::cos(L) + std::sin(L);
    const double h1 = 2.0 * s + 3.0 * std::cos(L) - std::sin(L);
    const double h1p = 2.0 - (2.0 / s) * (3.0 * std::sin(L) + std::cos(L));
    return std::exp(-s * g) * (h1 * h1 - h1p);
}

// --------------------------------------------------------------------------
// TypeIII: psi = 1 + r(X) sin^2 L,  r = X/(1+X^4), L = log(X^2)
//          phi = 1 + r(y) cos^2 L

double type3_psi_value(double s)
{
    const double L = std::log(s * s);
    const double sn = std::sin(L);
    return 1.0 + s / (1.0 + s * s * s * s) * sn * sn;
}

double type3_psi_d1(double s)
{
    const double s4 = s * s * s * s;
    const double L = std::log(s * s);
    const double sn = std::sin(L), cs = std::cos(L);
    const double rp = (1.0 - 3.0 * s4) / ((1.0 + s4) * (1.0 + s4));
    return rp * sn * sn + 4.0 * sn * cs / (1.0 + s4);
}

double type3_psi_d2(double s)
{
    const double s4 = s * s * s * s;
    const double onep = 1.0 + s4;
    const double L = std::log(s * s);
    const double s2L = std::sin(2.0 * L), c2L = std::cos(2.0 * L);
    const double rp = (1.0 - 3.0 * s4) / (onep * onep);
    const double rpp = (12.0 * s4 * s * s * s - 20.0 * s * s * s) / (onep * onep * onep);
    const double sn = std::sin(L);
    return rpp * sn * sn + 2.0 * rp * (2.0 / s) * s2L
         + (-2.0 * s2L + 8.0 * c2L) / (s * onep);
}

double type3_phi_value(double s)
{
    const double L = std::log(s * s);
    const double cs = std::cos(L);
    return 1.0 + s / (1.0 + s * s * s * s) * cs * cs;
}

double type3_phi_d1(double s)
{
    const double s4 = s * s * s * s;
    const double L = std::log(s * s);
    const double sn = std::sin(L), cs = std::cos(L);
    const double rp = (1.0 - 3.0 * s4) / ((1.0 + s4) * (1.0 + s4));
    return rp * cs * cs - 4.0 * sn * cs / (1.0 + s4);
}

// --------------------------------------------------------------------------
// TypeII: psi = 1 + exp(1 - (x+t)((x+t) + dn(sin^2 L, k) + sn(cos^2 L, k))),
//         L = log(x^2) exactly as printed (the Jacobi arguments carry x, the
//         quadratic envelope carries x+t). phi mirrors in y with a (y+t)
//         envelope.

double type2_value(double s, double env, EllipticModulus k)
{
    const double L = std::log(s * s);
    const double sl = std::sin(L), cl = std::cos(L);
    const double dn = jacobi_sn_cn_dn(sl * sl, k).dn;
    const double sn = jacobi_sn_cn_dn(cl * cl, k).sn;
    return 1.0 + std::exp(1.0 - env * (env + dn + sn));
}

} // namespace

AnsatzFamily AnsatzFamily::of(AnsatzKind kind)
{
    AnsatzFamily f;
    f.kind = kind;
    f.deriv_mode = (kind == AnsatzKind::TypeII) ? DerivMode::Numeric
                                                : DerivMode::Analytic;
    return f;
}

AnsatzFamily AnsatzFamily::from_index(int index)
{
    switch (index) {
    case 1: return of(AnsatzKind::TypeI);
    case 2: return of(AnsatzKind::TypeII);
    case 3: return of(AnsatzKind::TypeIII);
    default: throw std::invalid_argument("ansatz family index must be 1, 2 or 3");
    }
}

std::optional<double> psi(const AnsatzFamily& fam, double x, double t)
{
    switch (fam.kind) {
    case AnsatzKind::TypeI: {
        const double X = x + t;
        if (std::fabs(X) < fam.singular_guard) return std::nullopt;
        return type1_value(X);
    }
    case AnsatzKind::TypeII: {
        if (std::fabs(x) < fam.singular_guard) return std::nullopt;
        return type2_value(x, x + t, fam.modulus);
    }
    case AnsatzKind::TypeIII: {
        const double X = x + t;
        if (std::fabs(X) < fam.singular_guard) return std::nullopt;
        return type3_psi_value(X);
    }
    }
    return std::nullopt;
}

std::optional<double> phi(const AnsatzFamily& fam, double y, double t)
{
    if (std::fabs(y) < fam.singular_guard)
        return std::nullopt;
    switch (fam.kind) {
    case AnsatzKind::TypeI:   return type1_value(y);
    case AnsatzKind::TypeII:  return type2_value(y, y + t, fam.modulus);
    case AnsatzKind::TypeIII: return type3_phi_value(y);
    }
    return std::nullopt;
}

std::optional<NumericDerivs> central_derivs(
    const std::function<std::optional<double>(double)>& f, double u, double h)
{
    double v[5];
    for (int i = -2; i <= 2; ++i) {
        const auto s = f(u + i * h);
        if (!s)
            return std::nullopt;
        v[i + 2] = *s;
    }
    NumericDerivs d;
    d.d1 = (v[0] - 8.0 * v[1] + 8.0 * v[3] - v[4]) / (12.0 * h);
    d.d2 = (-v[0] + 16.0 * v[1] - 30.0 * v[2] + 16.0 * v[3] - v[4]) / (12.0 * h * h);
    return d;
}

std::optional<PsiDerivs> psi_derivs(const AnsatzFamily& fam, double x, double t)
{
    if (fam.kind != AnsatzKind::TypeII && fam.deriv_mode == DerivMode::Analytic) {
        const double X = x + t;
        if (std::fabs(X) < fam.singular_guard) return std::nullopt;
        PsiDerivs d;
        if (fam.kind == AnsatzKind::TypeI) {
            d.psi_x = type1_d1(X);
            d.psi_xx = type1_d2(X);
        } else {
            d.psi_x = type3_psi_d1(X);
            d.psi_xx = type3_psi_d2(X);
        }
        d.psi_t = d.psi_x;   // psi depends on x and t through x + t only
        return d;
    }

    // Numeric mode. The singular coordinate is x (TypeII) or x + t (I/III),
    // so the x-step scales with distance to the singular axis.
    const double sing = (fam.kind == AnsatzKind::TypeII) ? x : x + t;
    const double hx = fam.numeric_step_rel * std::fabs(sing);
    if (hx == 0.0) return std::nullopt;
    const auto dx = central_derivs(
        [&](double xx) { return psi(fam, xx, t); }, x, hx);
    if (!dx) return std::nullopt;

    PsiDerivs d;
    d.psi_x = dx->d1;
    d.psi_xx = dx->d2;
    if (fam.kind == AnsatzKind::TypeII) {
        // t enters through the quadratic envelope only; a fixed-scale step works.
        const double ht = fam.numeric_step_rel * std::fmax(1.0, std::fabs(x + t));
        const auto dt = central_derivs(
            [&](double tt) { return psi(fam, x, tt); }, t, ht);
        if (!dt) return std::nullopt;
        d.psi_t = dt->d1;
    } else {
        d.psi_t = d.psi_x;
    }
    return d;
}

std::optional<double> phi_y(const AnsatzFamily& fam, double y, double t)
{
    if (std::fabs(y) < fam.singular_guard)
        return std::nullopt;
    if (fam.kind != AnsatzKind::TypeII && fam.deriv_mode == DerivMode::Analytic)
        return (fam.kind == AnsatzKind::TypeI) ? type1_d1(y) : type3_phi_d1(y);

    const double hy = fam.numeric_step_rel * std::fabs(y);
    if (hy == 0.0) return std::nullopt;
    const auto dy = central_derivs(
        [&](double yy) { return phi(fam, yy, t); }, y, hy);
    if (!dy) return std::nullopt;
    return dy->d1;
}

} // namespace blpfract
