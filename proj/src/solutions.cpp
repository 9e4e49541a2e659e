#include "blpfract/solutions.hpp"

#include <cmath>
#include <limits>

namespace blpfract {

namespace {

std::optional<PhasePoint> phase_at(const SolutionParams& params,
                                   const AnsatzFamily& fam, double x, double y)
{
    const auto ps = psi(fam, x, params.t);
    const auto ph = phi(fam, y, params.t);
    const auto dx = psi_derivs(fam, x, params.t);
    const auto dy = phi_y(fam, y, params.t);
    if (!ps || !ph || !dx || !dy)
        return std::nullopt;
    return PhasePoint{*ps, *ph, dx->psi_x, dx->psi_xx, dx->psi_t, *dy};
}

} // namespace

ComplexPair u1_v1_at(const SolutionParams& params, const PhasePoint& p,
                     const SolutionOptions& opt)
{
    const double nan = std::numeric_limits<double>::quiet_NaN();
    if (std::fabs(p.psi_x) < opt.psi_x_guard)
        return {{nan, nan}, {nan, nan}, PointStatus::DegeneratePhase};

    const double d = params.delta;
    const double w = 0.5 * d * (p.psi + p.phi);
    const double th = std::tanh(w);
    const std::complex<double> radical =
        std::sqrt(std::complex<double>(th * th - 1.0, 0.0));   // = i*sech(w)
    const std::complex<double> core =
        (opt.form == SolutionForm::PrintedProduct) ? th * radical
                                                   : th + radical;
    const double head = 0.5 * (-p.psi_xx + p.psi_t) / p.psi_x;
    ComplexPair out;
    out.u = head + 0.25 * p.psi_x * d * core;
    out.v = 0.25 * d * p.phi_y * (1.0 + core);
    return out;
}

RealPair u2_v2_at(const SolutionParams& params, const PhasePoint& p,
                  const SolutionOptions& opt)
{
    const double nan = std::numeric_limits<double>::quiet_NaN();
    if (std::fabs(p.psi_x) < opt.psi_x_guard)
        return {nan, nan, PointStatus::DegeneratePhase};

    const double d = params.delta;
    const double w = 0.5 * d * (p.psi + p.phi);
    const auto coth = coth_guarded(w, opt.pole_guard);
    const auto csch = csch_guarded(w, opt.pole_guard);
    if (!coth || !csch)
        return {nan, nan, PointStatus::Masked};

    // PrintedProduct: coth * sqrt(coth^2-1) with the principal root |csch|;
    // RiccatiSum: coth + csch (signed), the exact-solution form.
    const double core = (opt.form == SolutionForm::PrintedProduct)
                            ? *coth * std::fabs(*csch)
                            : *coth + *csch;
    const double head = 0.5 * (-p.psi_xx + p.psi_t) / p.psi_x;
    RealPair out;
    out.u = head + 0.25 * p.psi_x * d * core;
    out.v = 0.25 * d * p.phi_y * (1.0 + core);
    return out;
}

ComplexPair u1_v1(const SolutionParams& params, const AnsatzFamily& fam,
                  double x, double y, const SolutionOptions& opt)
{
    const auto p = phase_at(params, fam, x, y);
    if (!p) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        return {{nan, nan}, {nan, nan}, PointStatus::Masked};
    }
    return u1_v1_at(params, *p, opt);
}

RealPair u2_v2(const SolutionParams& params, const AnsatzFamily& fam,
               double x, double y, const SolutionOptions& opt)
{
    const auto p = phase_at(params, fam, x, y);
    if (!p)
        return {std::numeric_limits<double>::quiet_NaN(),
                std::numeric_limits<double>::quiet_NaN(), PointStatus::Masked};
    return u2_v2_at(params, *p, opt);
}

std::optional<double> gradient_from_parts(double delta, double psi_x,
                                          double phi_y, double z,
                                          double pole_guard)
{
    const auto csch = csch_guarded(z, pole_guard);
    const auto coth = coth_guarded(z, pole_guard);
    if (!csch || !coth)
        return std::nullopt;
    return -0.125 * psi_x * phi_y * delta * delta * *csch * (*csch + *coth);
}

std::optional<double> gradient_U(const SolutionParams& params,
                                 const AnsatzFamily& fam,
                                 GradientVariant variant, double x, double y,
                                 double pole_guard)
{
    const auto dx = psi_derivs(fam, x, params.t);
    const auto dy = phi_y(fam, y, params.t);
    const auto ph = phi(fam, y, params.t);
    if (!dx || !dy || !ph)
        return std::nullopt;

    double z;
    if (variant == GradientVariant::LiteralX) {
        z = 0.5 * params.delta * (x + *ph);
    } else {
        const auto ps = psi(fam, x, params.t);
        if (!ps)
            return std::nullopt;
        z = 0.5 * params.delta * (*ps + *ph);
    }
    return gradient_from_parts(params.delta, dx->psi_x, *dy, z, pole_guard);
}

const char* to_string(GradientVariant v)
{
    return v == GradientVariant::LiteralX ? "literal" : "consistent";
}

const char* to_string(SolutionForm f)
{
    return f == SolutionForm::PrintedProduct ? "product" : "sum";
}

} // namespace blpfract
