#include <doctest.h>

#include <random>

#include "ncvx/regularizer.hpp"
#include "property_checks.hpp"

using namespace ncvx;
using doctest::Approx;

TEST_CASE("rho matches the printed branches") {
    const auto scad = Regularizer::scad(1.0, 3.7);
    const auto mcp = Regularizer::mcp(1.0, 1.5);
    CHECK(scad.rho(0.5) == Approx(0.5).epsilon(1e-15));
    CHECK(scad.rho(5.0) == Approx((3.7 + 1.0) / 2.0).epsilon(1e-15));  // 2.35
    CHECK(scad.rho(5.0) == Approx(2.35).epsilon(1e-14));
    CHECK(mcp.rho(0.5) == Approx(0.5 - 0.25 / 3.0).epsilon(1e-15));
    CHECK(mcp.rho(0.5) == Approx(0.4166667).epsilon(1e-7));
    for (const auto& r : {Regularizer::lasso(0.7), scad, mcp}) CHECK(r.rho(0.0) == 0.0);
    // middle SCAD branch at t = 2: -(4 - 14.8 + 1) / 5.4
    CHECK(scad.rho(2.0) == Approx(9.8 / 5.4).epsilon(1e-14));
}

TEST_CASE("rho_prime") {
    CHECK(Regularizer::lasso(1.0).rho_prime(2.0) == 1.0);
    CHECK(Regularizer::lasso(1.0).rho_prime(-2.0) == -1.0);
    CHECK(Regularizer::scad(1.0, 3.7).rho_prime(2.0) == Approx(1.7 / 2.7).epsilon(1e-14));
    CHECK(Regularizer::scad(1.0, 3.7).rho_prime(2.0) == Approx(0.6296296).epsilon(1e-7));
    CHECK(Regularizer::mcp(1.0, 1.5).rho_prime(5.0) == 0.0);
    CHECK_THROWS_AS(Regularizer::scad(1.0).rho_prime(0.0), Error);
    CHECK_THROWS_WITH(Regularizer::lasso(1.0).rho_prime(0.0), doctest::Contains("subdifferential"));
}

TEST_CASE("rho_prime agrees with finite differences away from kinks") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(-6.0, 6.0);
    for (const auto& reg : {Regularizer::lasso(0.8), Regularizer::scad(0.8), Regularizer::mcp(0.8)}) {
        for (int k = 0; k < 200; ++k) {
            const double t = u(rng);
            if (std::abs(t) < 1e-3) continue;
            const double h = 1e-7;
            const double fd = (reg.rho(t + h) - reg.rho(t - h)) / (2 * h);
            CHECK(reg.rho_prime(t) == Approx(fd).epsilon(1e-5).scale(1.0));
        }
    }
}

TEST_CASE("invalid parameters are rejected") {
    CHECK_THROWS_AS(Regularizer::scad(1.0, 2.0), Error);
    CHECK_THROWS_AS(Regularizer::mcp(1.0, 0.0), Error);
    CHECK_THROWS_AS(Regularizer::lasso(0.0), Error);
    CHECK_THROWS_AS(Regularizer::lasso(-1.0), Error);
    CHECK_THROWS_AS(parse_family("ridge"), Error);
    CHECK_THROWS_AS(parse_variant("other"), Error);
}

TEST_CASE("decomposition pieces at the documented points") {
    const Decomposition scad_simple(Regularizer::scad(1.0, 3.7), Variant::SimpleL1);
    const Decomposition mcp_simple(Regularizer::mcp(1.0, 1.5), Variant::SimpleL1);
    const Decomposition scad_nat(Regularizer::scad(1.0, 3.7), Variant::Natural);
    CHECK(scad_simple.q(0.5) == 0.0);
    CHECK(mcp_simple.q(1.0) == Approx(-1.0 / 3.0).epsilon(1e-15));
    CHECK(scad_nat.q(2.0) == Approx(-4.0 / 5.4).epsilon(1e-15));
    CHECK(scad_nat.q(2.0) == Approx(-0.7407407).epsilon(1e-7));
    for (Variant v : {Variant::Natural, Variant::SimpleL1}) {
        const Decomposition lasso(Regularizer::lasso(0.3), v);
        for (double t : {-3.0, -0.1, 0.0, 0.2, 9.0}) {
            CHECK(lasso.q(t) == 0.0);
            CHECK(lasso.q_prime(t) == 0.0);
        }
        CHECK(lasso.mu1() == 0.0);
        CHECK(lasso.mu2() == 0.0);
    }
}

TEST_CASE("curvature constants per variant") {
    const double a = 3.7, b = 1.5;
    const Decomposition sn(Regularizer::scad(0.4, a), Variant::Natural);
    const Decomposition ss(Regularizer::scad(0.4, a), Variant::SimpleL1);
    const Decomposition mn(Regularizer::mcp(0.4, b), Variant::Natural);
    const Decomposition ms(Regularizer::mcp(0.4, b), Variant::SimpleL1);
    CHECK(sn.mu1() == Approx(1 / (a - 1)));
    CHECK(sn.mu2() == Approx(1 / (a - 1)));
    CHECK(ss.mu1() == Approx(1 / (a - 1)));
    CHECK(ss.mu2() == 0.0);
    CHECK(mn.mu1() == Approx(1 / b));
    CHECK(mn.mu2() == Approx(1 / b));
    CHECK(ms.mu1() == Approx(1 / b));
    CHECK(ms.mu2() == 0.0);
    CHECK(ss.h_is_l1());
    CHECK_FALSE(sn.h_is_l1());
}

TEST_CASE("vector sums") {
    const Regularizer lasso = Regularizer::lasso(0.5);
    Vector beta(3);
    beta << 1.0, -2.0, 0.0;
    CHECK(lasso.value(beta) == Approx(1.5));

    const Decomposition ss(Regularizer::scad(1.0), Variant::SimpleL1);
    Vector half(2);
    half << 0.5, 0.5;
    CHECK(ss.Q(half) == 0.0);

    for (const auto& d : checks::all_decompositions(0.7)) {
        const Vector zero = Vector::Zero(4);
        CHECK(d.regularizer().value(zero) == 0.0);
        CHECK(d.H(zero) == 0.0);
        CHECK(d.Q(zero) == 0.0);
        CHECK(d.grad_Q(zero).isZero());
    }
}

TEST_CASE("q' is the derivative of q, including the SimpleL1 kinks") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-5.0, 5.0);
    for (const auto& d : checks::all_decompositions(0.9)) {
        for (int k = 0; k < 200; ++k) {
            const double t = u(rng);
            const double h = 1e-6;
            CHECK(d.q_prime(t) == Approx((d.q(t + h) - d.q(t - h)) / (2 * h)).epsilon(1e-6).scale(1.0));
        }
        // q is C^1 at every kink, so one-sided slopes agree there.
        const double lam = 0.9;
        for (double kink : {lam, 3.7 * lam, 1.5 * lam}) {
            CHECK(d.q_prime(kink * (1 + 1e-12)) == Approx(d.q_prime(kink * (1 - 1e-12))).epsilon(1e-9));
        }
    }
}

TEST_CASE("regularity conditions hold on samples and the branch grid") {
    std::mt19937_64 rng(2024);
    for (double lam : {0.05, 0.5, 1.0, 3.0}) {
        for (const auto& d : checks::all_decompositions(lam)) {
            CAPTURE(to_string(d.regularizer().family()));
            CAPTURE(to_string(d.variant()));
            CHECK(checks::decomposition_identity_error(d) <= 1e-12);
            CHECK(checks::regularity(d.regularizer(), rng, 1000).worst() <= 1e-12);
            CHECK(checks::curvature(d, rng, 1000) <= 1e-9);
            CHECK(checks::split_structure(d, rng, 1000) <= 0.0);
            CHECK(checks::h_dominates_l1(d) <= 1e-12);
        }
    }
}

TEST_CASE("Q_lambda curvature relations") {
    std::mt19937_64 rng(77);
    for (const auto& d : checks::all_decompositions(0.6)) CHECK(checks::q_curvature_relations(d, rng, 1000) <= 1e-9);
}

TEST_CASE("cone inequality under its hypothesis") {
    std::mt19937_64 rng(78);
    for (double lam : {0.1, 0.6}) {
        const auto lasso = checks::cone_inequality(Regularizer::lasso(lam), rng, 1000);
        CHECK(lasso.worst <= 1e-9);
        for (const auto& reg : {Regularizer::scad(lam), Regularizer::mcp(lam)}) {
            const auto rep = checks::cone_inequality(reg, rng, 1000);
            CAPTURE(to_string(reg.family()));
            CHECK(rep.conditional_instances > 100);
            CHECK(rep.worst_conditional <= 1e-9);
        }
    }
}

TEST_CASE("cone inequality fails without its hypothesis for nonconvex rho") {
    // beta = 0, S = J = {}: the claim reduces to R(delta) >= lambda |delta|_1,
    // which the flat tails of SCAD and MCP break.
    for (const auto& reg : {Regularizer::scad(0.6), Regularizer::mcp(0.6)}) {
        const Vector delta = Vector::Constant(1, 5.0);
        const double lhs = 0.0 - reg.value(delta);
        const double rhs = -0.6 * 5.0;
        CHECK(lhs > rhs + 1.0);
    }
    CHECK(-Regularizer::lasso(0.6).value(Vector::Constant(1, 5.0)) <= -3.0 + 1e-15);
}
