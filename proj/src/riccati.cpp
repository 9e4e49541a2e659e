#include "blpfract/riccati.hpp"

#include "blpfract/special_functions.hpp"

#include <cmath>
#include <stdexcept>

namespace blpfract {

RiccatiBranch RiccatiBranch::from_delta(double delta)
{
    if (!std::isfinite(delta))
        throw std::domain_error("RiccatiBranch: non-finite delta");
    if (delta > 0.0)
        return {delta, RiccatiBranchKind::Coth};
    if (delta < 0.0)
        return {delta, RiccatiBranchKind::Tanh};
    return {0.0, RiccatiBranchKind::Rational};
}

std::optional<double> zeta(const RiccatiBranch& branch, double q, double pole_guard)
{
    if (!std::isfinite(q))
        return std::nullopt;
    const double d = branch.delta;
    switch (branch.kind) {
    case RiccatiBranchKind::Coth: {
        const auto c = coth_guarded(0.5 * d * q, pole_guard);
        if (!c)
            return std::nullopt;
        return -0.5 * d * (1.0 + *c);
    }
    case RiccatiBranchKind::Tanh:
        return -0.5 * d * (1.0 + std::tanh(0.5 * d * q));
    case RiccatiBranchKind::Rational:
        if (std::fabs(q) < pole_guard)
            return std::nullopt;
        return -1.0 / q;
    }
    return std::nullopt;
}

double riccati_residual(const RiccatiBranch& branch, double q, double h,
                        bool richardson)
{
    if (!(h > 0.0))
        throw std::invalid_argument("riccati_residual: h must be positive");
    const bool has_pole = branch.kind != RiccatiBranchKind::Tanh;
    if (has_pole && std::fabs(q) <= 10.0 * h)
        throw std::domain_error("riccati_residual: q too close to the pole at 0");

    const auto diff = [&](double step) -> double {
        const auto zp = zeta(branch, q + step);
        const auto zm = zeta(branch, q - step);
        if (!zp || !zm)
            throw std::domain_error("riccati_residual: pole inside the stencil");
        return (*zp - *zm) / (2.0 * step);
    };

    const auto z0 = zeta(branch, q);
    if (!z0)
        throw std::domain_error("riccati_residual: pole inside the stencil");

    const double dnum =
        richardson ? (4.0 * diff(0.5 * h) - diff(h)) / 3.0 : diff(h);
    return std::fabs(dnum - branch.delta * *z0 - *z0 * *z0);
}

CoefficientSet coefficients(const SeparatedPhase& p, double delta)
{
    if (p.q_x == 0.0)
        throw std::domain_error("coefficients: degenerate phase (q_x = 0)");

    CoefficientSet c{};
    c.a1 = -0.25 * (-2.0 * p.q_t + 2.0 * p.q_xx + delta * p.q_x * p.q_x) / p.q_x;
    c.b1 = -0.5 * p.q_x;
    c.c1 = 0.5 * p.q_x;
    c.a2 = -0.5 * p.q_y;
    c.b2 = 0.5 * p.q_y;

    const double bracket =
        p.q_x * p.q_x * p.q_x * p.q_xy * delta
        - 2.0 * p.q_x * p.q_xy * p.q_xxx
        + 2.0 * p.q_x * p.q_xxy * p.q_t
        + 2.0 * p.q_x * p.q_xy * p.q_xt
        + 2.0 * p.q_xxxy * p.q_x * p.q_x
        - 2.0 * p.q_xy * p.q_x * p.q_x
        + 2.0 * p.q_xy * p.q_t * p.q_x
        + 4.0 * p.q_xy * p.q_xx
        - 4.0 * p.q_xx * p.q_xy * p.q_t
        - 4.0 * p.q_xx * p.q_xxy * p.q_x;
    c.c2 = -0.25 * bracket / (p.q_x * p.q_x);
    return c;
}

} // namespace blpfract
