#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "blpfract/riccati.hpp"

#include <cmath>
#include <random>

using namespace blpfract;

TEST_CASE("branch selection follows the sign of delta")
{
    CHECK(RiccatiBranch::from_delta(2.0).kind == RiccatiBranchKind::Coth);
    CHECK(RiccatiBranch::from_delta(-0.5).kind == RiccatiBranchKind::Tanh);
    CHECK(RiccatiBranch::from_delta(0.0).kind == RiccatiBranchKind::Rational);
}

TEST_CASE("zeta closed-form spot values")
{
    // rational branch: -1/q
    CHECK(*zeta(RiccatiBranch::from_delta(0.0), 1.0) == doctest::Approx(-1.0));
    // tanh branch at q=0: -(-2/2)(1 + tanh 0) = 1
    CHECK(*zeta(RiccatiBranch::from_delta(-2.0), 0.0) == doctest::Approx(1.0));
    // coth branch: -(1 + coth(ln 3)) = -9/4
    CHECK(*zeta(RiccatiBranch::from_delta(2.0), std::log(3.0)) ==
          doctest::Approx(-2.25).epsilon(1e-14));
}

TEST_CASE("zeta poles are masked")
{
    CHECK_FALSE(zeta(RiccatiBranch::from_delta(1.0), 0.0).has_value());
    CHECK_FALSE(zeta(RiccatiBranch::from_delta(0.0), 0.0).has_value());
    CHECK(zeta(RiccatiBranch::from_delta(-1.0), 0.0).has_value());
}

TEST_CASE("each branch annihilates the Riccati equation")
{
    CHECK(riccati_residual(RiccatiBranch::from_delta(-1.0), 0.5, 1e-5) < 1e-8);
    CHECK(riccati_residual(RiccatiBranch::from_delta(0.0), 2.0, 1e-5) < 1e-10);
    CHECK(riccati_residual(RiccatiBranch::from_delta(2.0), 1.0, 1e-5) < 1e-8);
}

TEST_CASE("branch consistency over 200 random points per branch")
{
    std::mt19937 rng(123);
    std::uniform_real_distribution<double> dmag(0.2, 2.5);
    std::uniform_real_distribution<double> darg(0.25, 3.0);
    std::bernoulli_distribution flip;

    auto random_q = [&](double delta) {
        // |delta q / 2| in [0.25, 3]: away from poles, bounded derivatives
        const double w = darg(rng);
        const double q = 2.0 * w / std::fabs(delta == 0.0 ? 1.0 : delta);
        return flip(rng) ? -q : q;
    };

    for (int i = 0; i < 200; ++i) {
        const double d = dmag(rng);
        CHECK(riccati_residual(RiccatiBranch::from_delta(d), random_q(d)) < 1e-7);
        CHECK(riccati_residual(RiccatiBranch::from_delta(-d), random_q(-d)) < 1e-7);
        double q = darg(rng);
        if (flip(rng))
            q = -q;
        CHECK(riccati_residual(RiccatiBranch::from_delta(0.0), q) < 1e-7);
    }
}

TEST_CASE("residual rejects pole proximity")
{
    CHECK_THROWS_AS(riccati_residual(RiccatiBranch::from_delta(1.0), 5e-5, 1e-5),
                    std::domain_error);
}

TEST_CASE("Richardson refinement sharpens the residual")
{
    // a coarse step with visible truncation; extrapolation cancels the h^2 term
    const auto b = RiccatiBranch::from_delta(2.0);
    const double plain = riccati_residual(b, 0.8, 1e-3);
    const double refined = riccati_residual(b, 0.8, 1e-3, true);
    CHECK(plain > 1e-7);
    CHECK(refined < plain / 100.0);
}

TEST_CASE("coefficients: direct substitution examples")
{
    SeparatedPhase p;
    p.q_x = 2.0;
    const auto c = coefficients(p, 1.0);
    // a1 = -(0 + 0 + 1*4)/(4*2) = -1/2
    CHECK(c.a1 == doctest::Approx(-0.5));
    CHECK(c.b1 == doctest::Approx(-1.0));
    CHECK(c.c1 == doctest::Approx(1.0));

    SeparatedPhase s;
    s.q_x = 1.0;
    s.q_y = 3.0;
    const auto c2 = coefficients(s, 1.0);
    CHECK(c2.a2 == doctest::Approx(-1.5));
    CHECK(c2.b2 == doctest::Approx(1.5));
}

TEST_CASE("coefficient invariants hold for random inputs")
{
    std::mt19937 rng(99);
    std::uniform_real_distribution<double> dv(-3.0, 3.0);
    for (int i = 0; i < 300; ++i) {
        SeparatedPhase p;
        p.q = dv(rng);
        p.q_x = dv(rng);
        if (std::fabs(p.q_x) < 1e-3)
            p.q_x = 1.0;
        p.q_y = dv(rng);
        p.q_t = dv(rng);
        p.q_xx = dv(rng);
        p.q_xy = dv(rng);
        p.q_xt = dv(rng);
        p.q_xxx = dv(rng);
        p.q_xxy = dv(rng);
        p.q_xxxy = dv(rng);
        const double delta = dv(rng);
        const auto c = coefficients(p, delta);
        CHECK(c.b1 == -c.c1);
        CHECK(c.a2 == -c.b2);
    }
}

TEST_CASE("c2 matches an independent term-table evaluation")
{
    // independent oracle: each bracket term evaluated in isolation and summed
    auto c2_oracle = [](const SeparatedPhase& p, double delta) {
        const double terms[10] = {
            delta * p.q_x * p.q_x * p.q_x * p.q_xy,
            -2.0 * p.q_x * p.q_xy * p.q_xxx,
            2.0 * p.q_x * p.q_xxy * p.q_t,
            2.0 * p.q_x * p.q_xy * p.q_xt,
            2.0 * p.q_xxxy * p.q_x * p.q_x,
            -2.0 * p.q_xy * p.q_x * p.q_x,
            2.0 * p.q_xy * p.q_t * p.q_x,
            4.0 * p.q_xy * p.q_xx,
            -4.0 * p.q_xx * p.q_xy * p.q_t,
            -4.0 * p.q_xx * p.q_xxy * p.q_x,
        };
        double sum = 0.0;
        for (double t : terms)
            sum += t;
        return -0.25 * sum / (p.q_x * p.q_x);
    };

    std::mt19937 rng(7);
    std::uniform_real_distribution<double> dv(-2.0, 2.0);
    for (int i = 0; i < 200; ++i) {
        SeparatedPhase p;
        p.q_x = dv(rng);
        if (std::fabs(p.q_x) < 1e-2)
            p.q_x = 0.7;
        p.q_y = dv(rng);
        p.q_t = dv(rng);
        p.q_xx = dv(rng);
        p.q_xy = dv(rng);
        p.q_xt = dv(rng);
        p.q_xxx = dv(rng);
        p.q_xxy = dv(rng);
        p.q_xxxy = dv(rng);
        const double delta = dv(rng);
        const auto c = coefficients(p, delta);
        CHECK(c.c2 == doctest::Approx(c2_oracle(p, delta)).epsilon(1e-12));
    }
}

TEST_CASE("c2 vanishes under separation")
{
    std::mt19937 rng(5);
    std::uniform_real_distribution<double> dv(-2.0, 2.0);
    for (int i = 0; i < 100; ++i) {
        SeparatedPhase p;             // mixed x/y partials stay zero
        p.q_x = 1.0 + std::fabs(dv(rng));
        p.q_t = dv(rng);
        p.q_xx = dv(rng);
        p.q_xt = dv(rng);
        p.q_xxx = dv(rng);
        SUBCASE("") {}
        p.q_y = 0.0;
        CHECK(coefficients(p, dv(rng)).c2 == 0.0);
        p.q_y = 3.0;                  // separation alone already kills c2
        CHECK(coefficients(p, dv(rng)).c2 == 0.0);
    }
}

TEST_CASE("degenerate phase rejected")
{
    SeparatedPhase p;
    p.q_x = 0.0;
    CHECK_THROWS_AS(coefficients(p, 1.0), std::domain_error);
}
