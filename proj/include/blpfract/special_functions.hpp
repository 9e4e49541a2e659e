#pragma once

// Transcendental building blocks: Jacobi elliptic functions via the
// arithmetic-geometric mean (descending Landen ladder) and pole-guarded
// reciprocal hyperbolics.

#include <cmath>
#include <optional>
#include <stdexcept>

namespace blpfract {

/// Jacobi modulus k (not the parameter m = k^2). Valid range [0, 1].
struct EllipticModulus {
    double k;

    explicit constexpr EllipticModulus(double modulus) : k(modulus) {
        if (!(modulus >= 0.0 && modulus <= 1.0))
            throw std::domain_error("elliptic modulus must lie in [0,1]");
    }
};

struct JacobiTriple {
    double sn, cn, dn;
};

/**
 * sn, cn, dn of argument u and modulus m.
 *
 * Descending Landen / AGM scheme: build the mean ladder a_{n+1} = (a_n+b_n)/2,
 * b_{n+1} = sqrt(a_n b_n), then recover the amplitude by backward recurrence.
 * The ladder stops when successive means agree to 1e-15 relative, which keeps
 * the result at machine precision for |u| <= 50.
 */
inline JacobiTriple jacobi_sn_cn_dn(double u, EllipticModulus modulus)
{
    if (!std::isfinite(u))
        throw std::domain_error("jacobi_sn_cn_dn: non-finite argument");

    const double param = modulus.k * modulus.k;   // parameter m = k^2
    const double param_c = 1.0 - param;           // complementary parameter

    if (param_c == 0.0) {
        // k = 1: sn = tanh, cn = dn = sech
        const double cn = 1.0 / std::cosh(u);
        return {std::tanh(u), cn, cn};
    }

    constexpr int kMaxLevels = 16;
    constexpr double kRelTol = 1e-15;

    double em[kMaxLevels];
    double en[kMaxLevels];
    double a = 1.0;
    double dn = 1.0;
    double emc = param_c;
    double mean = 1.0;
    int top = 0;
    for (int i = 0; i < kMaxLevels; ++i) {
        top = i;
        em[i] = a;
        emc = std::sqrt(emc);
        en[i] = emc;
        mean = 0.5 * (a + emc);
        if (std::fabs(a - emc) <= kRelTol * a)
            break;
        emc *= a;
        a = mean;
    }

    const double phase = u * mean;
    double sn = std::sin(phase);
    double cn = std::cos(phase);
    if (sn != 0.0) {
        double ratio = cn / sn;
        double c = mean * ratio;
        for (int i = top; i >= 0; --i) {
            const double b = em[i];
            ratio *= c;
            c *= dn;
            dn = (en[i] + ratio) / (b + ratio);
            ratio = c / b;
        }
        const double s = 1.0 / std::sqrt(c * c + 1.0);
        sn = (sn >= 0.0) ? s : -s;
        cn = c * sn;
    }
    return {sn, cn, dn};
}

/// 1/sinh(z), or nothing when |z| < guard (pole mask).
inline std::optional<double> csch_guarded(double z, double guard = 1e-12)
{
    if (!(guard > 0.0))
        throw std::invalid_argument("csch_guarded: guard must be positive");
    if (std::fabs(z) < guard)
        return std::nullopt;
    return 1.0 / std::sinh(z);   // |z| > ~710 overflows sinh and yields +-0
}

/// cosh(z)/sinh(z), or nothing when |z| < guard. Stable for large |z|.
inline std::optional<double> coth_guarded(double z, double guard = 1e-12)
{
    if (!(guard > 0.0))
        throw std::invalid_argument("coth_guarded: guard must be positive");
    if (std::fabs(z) < guard)
        return std::nullopt;
    return 1.0 + 2.0 / std::expm1(2.0 * z);
}

} // namespace blpfract
