#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "blpfract/ansatz.hpp"

#include <cmath>
#include <random>

using namespace blpfract;

TEST_CASE("TypeIII psi collapses where sin(log((x+t)^2)) = 0")
{
    const auto fam = AnsatzFamily::of(AnsatzKind::TypeIII);
    CHECK(*psi(fam, 1.0, 0.0) == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("TypeI psi decays to 1 as x + t grows")
{
    const auto fam = AnsatzFamily::of(AnsatzKind::TypeI);
    CHECK(std::fabs(*psi(fam, 30.0, 0.0) - 1.0) < 1e-12);
    CHECK(std::fabs(*phi(fam, 40.0, 0.0) - 1.0) < 1e-12);
}

TEST_CASE("TypeIII phi at y = 1 is 3/2")
{
    const auto fam = AnsatzFamily::of(AnsatzKind::TypeIII);
    CHECK(*phi(fam, 1.0, 0.7) == doctest::Approx(1.5).epsilon(1e-15));
}

TEST_CASE("TypeII values pinned against the high-precision composition oracle")
{
    // mpmath mp.dps=40 composition of the printed expression, modulus 0.7
    const auto fam = AnsatzFamily::of(AnsatzKind::TypeII);
    CHECK(std::fabs(*psi(fam, 0.3, 0.0) - 2.599645909854435774217) < 1e-12);
    CHECK(std::fabs(*phi(fam, 0.5, 0.0) - 2.371435705636917313068) < 1e-12);
}

TEST_CASE("spot values against the evaluation oracle")
{
    const auto f1 = AnsatzFamily::of(AnsatzKind::TypeI);
    const auto f3 = AnsatzFamily::of(AnsatzKind::TypeIII);
    CHECK(std::fabs(*psi(f1, 0.6, 0.0) - 1.85095819318749217777) < 1e-14);
    CHECK(std::fabs(*psi(f1, 0.25, 0.1) - 2.427999857042613792203) < 1e-14);
    CHECK(std::fabs(*psi(f3, 0.6, 0.0) - 1.386451650389245311443) < 1e-14);
    CHECK(std::fabs(*phi(f3, 0.7, 0.0) - 1.322763842410777437344) < 1e-14);
}

TEST_CASE("log singularities are masked")
{
    const auto f1 = AnsatzFamily::of(AnsatzKind::TypeI);
    const auto f2 = AnsatzFamily::of(AnsatzKind::TypeII);
    CHECK_FALSE(psi(f1, 0.5, -0.5).has_value());      // x + t = 0
    CHECK_FALSE(psi(f2, 0.0, 0.3).has_value());       // log(x^2) at x = 0
    CHECK(psi(f2, 0.3, -0.3).has_value());            // x + t = 0 is fine here
    CHECK_FALSE(phi(f1, 0.0, 0.0).has_value());
    CHECK_FALSE(psi_derivs(f1, 0.25, -0.25).has_value());
    CHECK_FALSE(phi_y(f2, 0.0, 0.0).has_value());
}

TEST_CASE("analytic and numeric derivative modes agree")
{
    std::mt19937 rng(17);
    std::uniform_real_distribution<double> dx(0.3, 2.0);
    for (auto kind : {AnsatzKind::TypeI, AnsatzKind::TypeIII}) {
        auto ana = AnsatzFamily::of(kind);
        auto num = ana;
        num.deriv_mode = DerivMode::Numeric;
        for (int i = 0; i < 100; ++i) {
            const double x = dx(rng);
            const auto a = psi_derivs(ana, x, 0.0);
            const auto n = psi_derivs(num, x, 0.0);
            REQUIRE(a.has_value());
            REQUIRE(n.has_value());
            const double scale = std::fmax(std::fabs(a->psi_x), 1e-3);
            CHECK(std::fabs(a->psi_x - n->psi_x) / scale < 1e-6);
            const double scale2 = std::fmax(std::fabs(a->psi_xx), 1e-3);
            CHECK(std::fabs(a->psi_xx - n->psi_xx) / scale2 < 1e-5);
            CHECK(a->psi_t == a->psi_x);

            const double y = dx(rng);
            const auto ay = phi_y(ana, y, 0.0);
            const auto ny = phi_y(num, y, 0.0);
            const double scale3 = std::fmax(std::fabs(*ay), 1e-3);
            CHECK(std::fabs(*ay - *ny) / scale3 < 1e-6);
        }
    }
}

TEST_CASE("TypeIII has an exact stationary point of psi at x + t = 1")
{
    const auto ana = AnsatzFamily::of(AnsatzKind::TypeIII);
    auto num = ana;
    num.deriv_mode = DerivMode::Numeric;
    CHECK(psi_derivs(ana, 1.0, 0.0)->psi_x == 0.0);
    CHECK(std::fabs(psi_derivs(num, 1.0, 0.0)->psi_x) < 1e-8);
}

TEST_CASE("numeric differentiator on a constant callable returns zeros")
{
    const auto d = central_derivs([](double) { return std::optional<double>(3.5); },
                                  0.4, 1e-3);
    CHECK(d->d1 == 0.0);
    CHECK(d->d2 == 0.0);
}

TEST_CASE("numeric differentiator propagates masked samples")
{
    auto f = [](double u) -> std::optional<double> {
        if (u > 0.5)
            return std::nullopt;
        return u * u;
    };
    CHECK_FALSE(central_derivs(f, 0.4999, 1e-3).has_value());
    CHECK(central_derivs(f, 0.4, 1e-3).has_value());
}

TEST_CASE("TypeII derivative mode is numeric regardless of request")
{
    auto fam = AnsatzFamily::of(AnsatzKind::TypeII);
    CHECK(fam.deriv_mode == DerivMode::Numeric);
    fam.deriv_mode = DerivMode::Analytic;   // TypeII has no analytic path
    const auto d = psi_derivs(fam, 0.4, 0.0);
    CHECK(d.has_value());
    CHECK(std::isfinite(d->psi_x));
}

TEST_CASE("family index mapping")
{
    CHECK(AnsatzFamily::from_index(1).kind == AnsatzKind::TypeI);
    CHECK(AnsatzFamily::from_index(3).kind == AnsatzKind::TypeIII);
    CHECK_THROWS_AS(AnsatzFamily::from_index(4), std::invalid_argument);
}
