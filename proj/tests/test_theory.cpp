#include <doctest.h>

#include <cmath>
#include <random>

#include "ncvx/solver.hpp"
#include "ncvx/theory.hpp"
#include "oracles.hpp"

using namespace ncvx;
using doctest::Approx;

TEST_CASE("lq_norm_q") {
    Vector b(3);
    b << 1.0, 0.0, -2.0;
    CHECK(lq_norm_q(b, 0.0) == 2.0);
    CHECK(lq_norm_q(b, 1.0) == 3.0);
    Vector c(2);
    c << 4.0, 1.0;
    CHECK(lq_norm_q(c, 0.5) == Approx(3.0).epsilon(1e-15));
    CHECK_THROWS_AS(lq_norm_q(c, 1.5), Error);
    CHECK_THROWS_AS(lq_norm_q(c, -0.1), Error);
}

TEST_CASE("s_eta thresholding") {
    Vector b(3);
    b << 5.0, 1.25, 0.5556;
    const SEta s = s_eta(b, 1.0);
    CHECK(s.support == std::vector<Eigen::Index>{0, 1});
    CHECK(s.tail_l1 == Approx(0.5556));

    const SEta none = s_eta(b, 10.0);
    CHECK(none.support.empty());
    CHECK(none.tail_l1 == Approx(b.lpNorm<1>()));

    Vector sparse = Vector::Zero(6);
    sparse[1] = 0.3;
    sparse[4] = -2.0;
    const SEta tiny = s_eta(sparse, 1e-12);
    CHECK(tiny.support == std::vector<Eigen::Index>{1, 4});
    CHECK(tiny.tail_l1 == 0.0);
    CHECK_THROWS_AS(s_eta(b, 0.0), Error);
}

TEST_CASE("s_eta bounds on random instances") {
    std::mt19937_64 rng(77);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    int violations = 0;
    for (int k = 0; k < 1000; ++k) {
        const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng() % 40);
        Vector b = oracle::random_vector(rng, n, 3.0);
        for (Eigen::Index j = 0; j < n; ++j)
            if (unit(rng) < 0.3) b[j] = 0.0;
        const double q = k % 10 == 0 ? 0.0 : unit(rng);
        const double eta = 0.01 + 3.0 * unit(rng);
        const double Rq = lq_norm_q(b, q);
        const SEta s = s_eta(b, eta);
        if (static_cast<double>(s.support.size()) > std::pow(eta, -q) * Rq * (1 + 1e-12)) ++violations;
        if (s.tail_l1 > std::pow(eta, 1.0 - q) * Rq * (1 + 1e-12) + 1e-300) ++violations;
    }
    CHECK(violations == 0);
}

TEST_CASE("theorem1 bounds") {
    TheoryConstants c;
    c.q = 1.0;
    c.R_q = 1.0;
    // base = 2 * 0.5 / (2 * 1) = 0.5, constant (sqrt 57 + 7)^2 = 106 + 14 sqrt 57.
    const Theorem1Bounds b = theorem1_bounds(c, 0.0, 0.0, 0.5, 1.0);
    const double s57 = std::sqrt(57.0);
    CHECK(std::abs(b.l2_sq - (106.0 + 14.0 * s57) * 0.5) <= 1e-9);
    CHECK(std::abs(b.l1 - 4.0 * (2.0 * s57 + 15.0)) <= 1e-9);

    for (double q : {0.0, 0.3, 1.0}) {
        c.q = q;
        const Theorem1Bounds one = theorem1_bounds(c, 0.2, 0.1, 0.1, 1.0);
        const Theorem1Bounds two = theorem1_bounds(c, 0.2, 0.1, 0.2, 1.0);
        CHECK(two.l2_sq / one.l2_sq == Approx(std::pow(2.0, 2.0 - q)).epsilon(1e-12));
        CHECK(two.l1 / one.l1 == Approx(std::pow(2.0, 1.0 - q)).epsilon(1e-12));
    }

    c.q = 0.0;
    c.R_q = 5.0;
    const Theorem1Bounds small = theorem1_bounds(c, 0.0, 0.0, 1e-12, 1.0);
    CHECK(small.l2_sq < 1e-20);
    CHECK(small.l1 < 1e-9);

    c.gamma[0] = 0.3;
    CHECK_THROWS_WITH(theorem1_bounds(c, 1.0, 0.2, 0.1, 1.0), doctest::Contains("gamma_1"));
}

TEST_CASE("theorem2 constants") {
    TheoryConstants c;
    c.gamma = {1, 1, 1, 1, 1};
    c.tau = {0, 0, 0, 0, 0};
    const Theorem2Constants k = theorem2_constants(c, 0.0, 2.0, 1000, 500, 0.1);
    CHECK(std::abs(k.kappa - 0.875) <= 1e-9);
    CHECK(k.xi == 0.0);
    CHECK(k.contraction);

    // eps_stat by hand with q = 0, R_q = 1: 8 (err + sqrt(log n / m)).
    const double rate = std::log(1000.0) / 500.0;
    CHECK(std::abs(k.eps_stat - 8.0 * (0.1 + std::sqrt(rate))) <= 1e-12);

    // Vanishing slack: kappa approaches 1 - (2 gamma - mu_1)/(8 v).
    c.tau = {0, 0, 1e-3, 1e-3, 1e-3};
    c.q = 0.5;
    const Theorem2Constants near = theorem2_constants(c, 0.5, 4.0, 1e4, 1e9, 0.0);
    CHECK(std::abs(near.kappa - (1.0 - 1.5 / 32.0)) <= 1e-6);

    // Hand evaluation of the full formulas at one point.
    c.tau = {0, 0, 0.01, 0.02, 0.005};
    c.gamma = {1, 1, 0.9, 1.2, 1};
    c.q = 0.5;
    c.R_q = 2.0;
    const double n = 2000, m = 800, v = 3.0, mu1 = 0.4, err = 0.05;
    const double g = 2 * 0.9 - mu1, tau = 0.02, lr = std::log(n) / m;
    const double A = 256 * 2.0 * tau * std::pow(lr, 0.75) / g;
    const Theorem2Constants h = theorem2_constants(c, mu1, v, n, m, err);
    CHECK(std::abs(h.kappa - (1 - g / (8 * v) + A) / (1 - A)) <= 1e-9);
    CHECK(std::abs(h.xi - 2 * tau * lr * (g / (8 * v) + 2 * A + 5) / (1 - A)) <= 1e-9);
    CHECK(std::abs(h.eps_stat -
                   8 * std::sqrt(2.0) * std::pow(lr, -0.125) * (err + std::sqrt(2.0) * std::pow(lr, 0.375))) <=
          1e-9);
}

TEST_CASE("kappa monotonicity") {
    TheoryConstants c;
    c.tau = {0, 0, 0.001, 0.001, 0.001};
    c.q = 0.5;
    double prev = -1.0;
    for (double R : {0.5, 1.0, 2.0, 4.0}) {
        c.R_q = R;
        const double k = theorem2_constants(c, 0.2, 2.0, 500, 400, 0.0).kappa;
        CHECK(k > prev);
        prev = k;
    }
    // The printed formula makes kappa grow with v (a smaller step contracts less).
    c.R_q = 1.0;
    prev = -1.0;
    for (double v : {1.0, 2.0, 4.0, 8.0}) {
        const double k = theorem2_constants(c, 0.2, v, 500, 400, 0.0).kappa;
        CHECK(k > prev);
        prev = k;
    }
}

TEST_CASE("theorem2 error paths and helpers") {
    TheoryConstants c;
    CHECK_THROWS_WITH(theorem2_constants(c, 2.5, 2.0, 100, 50, 0.0),
                      doctest::Contains("contraction precondition violated"));
    c.tau = {0, 0, 10, 10, 10};
    CHECK_THROWS_WITH(theorem2_constants(c, 0.0, 2.0, 100, 50, 0.0),
                      doctest::Contains("contraction precondition violated"));
    c.tau = {0, 0, 0, 0, 0};
    c.gamma[2] = -1.0;
    CHECK_THROWS_AS(theorem2_constants(c, 0.0, 2.0, 100, 50, 0.0), Error);

    // T(Delta*) by hand: kappa = 1/2, r lambda / Delta* = 16 -> log2 log2 = 2.
    const double T = theorem2_iterations(0.5, 16.0, 1.0, 1.0, std::exp(3.0) * 1.0);
    CHECK(T == Approx(2.0 * (1.0 + 1.0) + 3.0 / std::log(2.0)).epsilon(1e-12));
    CHECK_THROWS_AS(theorem2_iterations(1.0, 1, 1, 0.1, 1), Error);

    Theorem2Constants k;
    k.kappa = 0.5;
    k.xi = 0.25;
    k.eps_stat = 2.0;
    CHECK(theorem2_min_tolerance(k) == Approx(16.0));

    TheoryConstants s;
    s.tau = {0, 0, 0.1, 0.1, 0.1};
    CHECK(theorem2_sample_size_ok(s, 0.0, 1.0, 1.0, 100.0, 1000.0));
    CHECK_FALSE(theorem2_sample_size_ok(s, 0.0, 10.0, 1.0, 100.0, 100.0));
    CHECK(theorem2_error_bound(s, 0.0, 100.0, 100.0, 0.1, 1.0) ==
          Approx(2.0 * (0.1 + 0.01 / 0.2 + 0.4 * std::log(100.0) / 100.0)));
}

TEST_CASE("stationarity residual") {
    std::mt19937_64 rng(31);
    const int n = 8;
    const Matrix g = oracle::random_psd(rng, n) + Matrix::Identity(n, n);
    const Vector ups = oracle::random_vector(rng, n, 1.0);
    const QuadraticLoss L(g, ups);

    // Smooth convex instance: lambda tiny, large radius, beta = Gamma^{-1} Upsilon.
    const Decomposition tiny(Regularizer::lasso(1e-300), Variant::SimpleL1);
    const Vector exact = g.ldlt().solve(ups);
    CHECK(stationarity_residual(L, tiny, 1e6, exact) <= 1e-10);

    for (Family f : {Family::Lasso, Family::SCAD, Family::MCP}) {
        const Decomposition d(Regularizer::make(f, 0.2), Variant::SimpleL1);
        SolverConfig cfg;
        cfg.v = estimate_step_v(L, d);
        cfg.r = 1.0;
        cfg.tol_step = 1e-12;
        cfg.max_iter = 100000;
        const Vector sol = solve(L, d, cfg, Vector::Zero(n)).beta;
        const double res = stationarity_residual(L, d, cfg.r, sol);
        CHECK(res <= 1e-8);
        CHECK(stationarity_residual(L, d, cfg.r, sol, cfg.v) <= 1e-8);

        Vector moved = sol * 0.9;
        moved[0] += 0.01;
        CHECK(stationarity_residual(L, d, cfg.r, moved) > res);
    }

    const Decomposition d(Regularizer::lasso(0.2), Variant::SimpleL1);
    CHECK_THROWS_WITH(stationarity_residual(L, d, 0.1, Vector::Ones(n)), doctest::Contains("infeasible"));
}
