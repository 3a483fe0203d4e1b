#pragma once

#include <array>
#include <vector>

#include "ncvx/common.hpp"
#include "ncvx/loss.hpp"
#include "ncvx/regularizer.hpp"

namespace ncvx {

/// User-supplied RSC/RSM constants and the l_q-ball description of beta*.
struct TheoryConstants {
    std::array<double, 5> gamma{1.0, 1.0, 1.0, 1.0, 1.0};  // gamma_1..gamma_5 > 0
    std::array<double, 5> tau{0.0, 0.0, 0.0, 0.0, 0.0};    // tau_1..tau_5 >= 0
    double q = 0.0;    // in [0, 1]
    double R_q = 1.0;  // > 0

    double gamma_alg() const { return std::min(gamma[2], gamma[3]); }
    double tau_alg() const { return std::max({tau[2], tau[3], tau[4]}); }
    void validate() const;
};

// sum_j |beta_j|^q, with 0^0 := 0 so q = 0 counts nonzeros.
double lq_norm_q(const Vector& beta, double q);

struct SEta {
    std::vector<Eigen::Index> support;  // {j : |beta*_j| > eta}, ascending
    double tail_l1 = 0.0;               // ||beta*_{S^c}||_1
};
SEta s_eta(const Vector& beta_star, double eta);

struct Theorem1Bounds {
    double l2_sq = 0.0;
    double l1 = 0.0;
};
// Recovery bounds for any stationary point; needs gamma_1 > (2 mu_1 - mu_2)/2.
Theorem1Bounds theorem1_bounds(const TheoryConstants& c, double mu1, double mu2, double lambda,
                               double L);

struct Theorem2Constants {
    double eps_stat = 0.0;
    double kappa = 0.0;
    double xi = 0.0;
    bool contraction = false;  // kappa in (0, 1)
};
/**
 * Statistical precision, contraction factor and offset of the linear
 * convergence guarantee, evaluated verbatim. `hat_err_l2` is
 * ||beta_hat - beta*||_2 for the global solution (or a proxy for it).
 * Throws when 2 gamma - mu_1 <= 0 or the shared divisor is nonpositive.
 */
Theorem2Constants theorem2_constants(const TheoryConstants& c, double mu1, double v, double n,
                                     double m, double hat_err_l2);

// Iteration count T(Delta*) after which phi(beta^t) - phi(beta_hat) <= Delta*.
double theorem2_iterations(double kappa, double r, double lambda, double delta_star,
                           double initial_gap);
// Smallest admissible tolerance 8 xi eps_stat^2 / (1 - kappa).
double theorem2_min_tolerance(const Theorem2Constants& k);
// Bound on ||beta^t - beta_hat||_2^2 once t >= T(Delta*).
double theorem2_error_bound(const TheoryConstants& c, double mu1, double n, double m,
                            double delta_star, double eps_stat);
// m >= max(4 r^2 / L^2, (128 R_q tau / (2 gamma - mu_1))^{1 - q/2}) log n.
bool theorem2_sample_size_ok(const TheoryConstants& c, double mu1, double r, double L, double n,
                             double m);

// ||beta - pg_step(beta)||_2 at step parameter v; zero exactly at fixed points.
double stationarity_residual(const QuadraticLoss& loss, const Decomposition& d, double r,
                             const Vector& beta, double v = 1.0);

}  // namespace ncvx
