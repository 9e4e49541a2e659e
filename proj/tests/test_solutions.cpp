#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "blpfract/solutions.hpp"

#include <cmath>
#include <random>

using namespace blpfract;

namespace {

PhasePoint generic_point()
{
    return {0.8, 0.9, 1.3, -0.4, 0.6, 0.7};
}

} // namespace

TEST_CASE("u1 is exactly real where psi + phi = 0 (printed product form)")
{
    PhasePoint p = generic_point();
    p.psi = 0.5;
    p.phi = -0.5;
    const auto r = u1_v1_at({1.0, 0.0}, p);
    REQUIRE(r.valid());
    // tanh(0) = 0 kills the radical term
    CHECK(r.u.imag() == 0.0);
    CHECK(r.u.real() ==
          doctest::Approx(0.5 * (-p.psi_xx + p.psi_t) / p.psi_x).epsilon(1e-14));
    CHECK(r.v.real() == doctest::Approx(0.25 * p.phi_y).epsilon(1e-14));
    CHECK(r.v.imag() == 0.0);
}

TEST_CASE("u1,v1 are genuinely complex away from psi + phi = 0")
{
    const auto r = u1_v1_at({1.0, 0.0}, generic_point());
    REQUIRE(r.valid());
    CHECK(std::fabs(r.u.imag()) > 1e-6);
    CHECK(std::fabs(r.v.imag()) > 1e-6);
}

TEST_CASE("u2,v2 collapse to the head terms for large |psi + phi|")
{
    PhasePoint p = generic_point();
    SolutionParams params{40.0, 0.0};   // w = 20 * (psi + phi): coth -> 1, csch -> 0
    const auto r = u2_v2_at(params, p);
    REQUIRE(r.valid());
    const double head = 0.5 * (-p.psi_xx + p.psi_t) / p.psi_x;
    CHECK(std::fabs(r.u - head) < 1e-10);
    CHECK(std::fabs(r.v - 0.25 * params.delta * p.phi_y) < 1e-10);
}

TEST_CASE("v2 exceeds delta*phi_y/4 for small positive psi + phi (product form)")
{
    PhasePoint p = generic_point();
    p.psi = 0.15;
    p.phi = 0.05;   // w = 0.1: coth*csch > 0
    const auto r = u2_v2_at({1.0, 0.0}, p);
    REQUIRE(r.valid());
    CHECK(p.phi_y > 0.0);
    CHECK(r.v > 0.25 * p.phi_y);
}

TEST_CASE("u2,v2 stay finite on unmasked points, both forms")
{
    const auto fam = AnsatzFamily::of(AnsatzKind::TypeIII);
    for (const auto form : {SolutionForm::PrintedProduct, SolutionForm::RiccatiSum}) {
        SolutionOptions opt;
        opt.form = form;
        for (int i = 0; i < 50; ++i) {
            const double x = 0.55 + 0.35 * i / 50.0;
            const double y = 0.6 + 0.3 * i / 50.0;
            const auto r = u2_v2({1.0, 0.0}, fam, x, y, opt);
            if (r.valid()) {
                CHECK(std::isfinite(r.u));
                CHECK(std::isfinite(r.v));
            }
        }
    }
}

TEST_CASE("degenerate phase flagged when psi_x = 0")
{
    PhasePoint p = generic_point();
    p.psi_x = 0.0;
    CHECK(u2_v2_at({1.0, 0.0}, p).status == PointStatus::DegeneratePhase);
    CHECK(u1_v1_at({1.0, 0.0}, p).status == PointStatus::DegeneratePhase);
}

TEST_CASE("pole masked when psi + phi = 0 on the coth branch")
{
    PhasePoint p = generic_point();
    p.psi = 0.5;
    p.phi = -0.5;
    CHECK(u2_v2_at({1.0, 0.0}, p).status == PointStatus::Masked);
}

TEST_CASE("sum form equals the half-argument closed form")
{
    const auto p = generic_point();
    SolutionOptions prod, sum;
    sum.form = SolutionForm::RiccatiSum;
    const auto a = u2_v2_at({1.0, 0.0}, p, prod);
    const auto b = u2_v2_at({1.0, 0.0}, p, sum);
    CHECK(std::fabs(a.u - b.u) > 1e-3);   // the readings genuinely differ
    const double w = 0.5 * (p.psi + p.phi);
    const double expect =
        0.5 * (-p.psi_xx + p.psi_t) / p.psi_x +
        0.25 * p.psi_x / std::tanh(0.5 * w);
    CHECK(b.u == doctest::Approx(expect).epsilon(1e-13));
}

TEST_CASE("gradient core: closed-form value at z = ln 3")
{
    // csch = 3/4, coth = 5/4, bracket = 2 -> U = -(3/16) psi_x phi_y
    const double z = std::log(3.0);
    const auto u = gradient_from_parts(1.0, 0.7, -1.1, z);
    REQUIRE(u.has_value());
    CHECK(*u == doctest::Approx(-(3.0 / 16.0) * 0.7 * (-1.1)).epsilon(1e-13));
}

TEST_CASE("gradient vanishes with either derivative factor")
{
    CHECK(*gradient_from_parts(1.0, 0.0, 1.3, 0.9) == 0.0);
    CHECK(*gradient_from_parts(1.0, 0.8, 0.0, 0.9) == 0.0);
    // family route: TypeIII has psi_x = 0 exactly at x + t = 1
    const auto fam = AnsatzFamily::of(AnsatzKind::TypeIII);
    const auto u = gradient_U({1.0, 0.0}, fam, GradientVariant::LiteralX, 1.0, 0.7);
    REQUIRE(u.has_value());
    CHECK(*u == 0.0);
}

TEST_CASE("bracket identity csch(z) + coth(z) = coth(z/2)")
{
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> lz(std::log(1e-6), std::log(30.0));
    std::bernoulli_distribution flip;
    for (int i = 0; i < 500; ++i) {
        double z = std::exp(lz(rng));
        if (flip(rng))
            z = -z;
        const double lhs = *csch_guarded(z, 1e-12) + *coth_guarded(z, 1e-12);
        const double rhs = *coth_guarded(0.5 * z, 1e-12);
        CHECK(std::fabs(lhs - rhs) <= 1e-12 * std::fmax(1.0, std::fabs(rhs)));
    }
}

TEST_CASE("the z-dependent factor csch(z) coth(z/2) is even")
{
    std::mt19937 rng(4);
    std::uniform_real_distribution<double> dz(0.05, 20.0);
    for (int i = 0; i < 300; ++i) {
        const double z = dz(rng);
        const auto up = gradient_from_parts(1.0, 1.0, 1.0, z);
        const auto um = gradient_from_parts(1.0, 1.0, 1.0, -z);
        CHECK(std::fabs(*up - *um) <= 1e-12 * std::fmax(1.0, std::fabs(*up)));
    }
}

TEST_CASE("gradient pole masking and masking soundness audit")
{
    const auto fam = AnsatzFamily::of(AnsatzKind::TypeI);
    const SolutionParams params{1.0, 0.0};

    std::mt19937 rng(11);
    std::uniform_real_distribution<double> d(-2.0, 2.0);
    int masked = 0;
    for (int i = 0; i < 10000; ++i) {
        const double x = d(rng), y = d(rng);
        const auto u = gradient_U(params, fam, GradientVariant::LiteralX, x, y);
        if (u.has_value()) {
            CHECK(std::isfinite(*u));
            continue;
        }
        ++masked;
        // every masked point must sit near a genuine singular locus:
        // x + t = 0, y = 0, or the csch pole of the z argument
        const auto ph = phi(fam, y, params.t);
        const bool near_log = std::fabs(x + params.t) < 1e-9 || std::fabs(y) < 1e-9;
        const bool near_pole =
            ph.has_value() && std::fabs(0.5 * params.delta * (x + *ph)) < 1e-9;
        CHECK((near_log || near_pole));
    }
    CHECK(masked < 100);   // the singular set is measure-zero
}

TEST_CASE("ConsistentPsi gradient equals the numeric du2/dy of the sum form")
{
    const auto fam = AnsatzFamily::of(AnsatzKind::TypeIII);
    const SolutionParams params{1.0, 0.0};
    SolutionOptions sum;
    sum.form = SolutionForm::RiccatiSum;

    std::mt19937 rng(21);
    std::uniform_real_distribution<double> d(0.55, 0.95);
    for (int i = 0; i < 50; ++i) {
        const double x = d(rng), y = d(rng);
        const auto g = gradient_U(params, fam, GradientVariant::ConsistentPsi, x, y);
        REQUIRE(g.has_value());
        const double h = 1e-5;
        const auto up = u2_v2(params, fam, x, y + h, sum);
        const auto um = u2_v2(params, fam, x, y - h, sum);
        REQUIRE(up.valid());
        REQUIRE(um.valid());
        const double du_dy = (up.u - um.u) / (2.0 * h);
        CHECK(std::fabs(*g - du_dy) < 1e-6);
    }
}

TEST_CASE("LiteralX and ConsistentPsi gradients differ (argument discrepancy)")
{
    const auto fam = AnsatzFamily::of(AnsatzKind::TypeIII);
    const auto a = gradient_U({1.0, 0.0}, fam, GradientVariant::LiteralX, 0.7, 0.8);
    const auto b = gradient_U({1.0, 0.0}, fam, GradientVariant::ConsistentPsi, 0.7, 0.8);
    CHECK(std::fabs(*a - *b) > 1e-6);
}
