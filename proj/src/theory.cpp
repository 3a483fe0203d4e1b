#include "ncvx/theory.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "ncvx/prox.hpp"
#include "ncvx/solver.hpp"

namespace ncvx {

void TheoryConstants::validate() const {
    for (double g : gamma)
        if (!(g > 0.0)) throw Error("theory: gamma_i must be positive");
    for (double t : tau)
        if (!(t >= 0.0)) throw Error("theory: tau_i must be nonnegative");
    if (!(q >= 0.0 && q <= 1.0)) throw Error("theory: q must lie in [0, 1]");
    if (!(R_q > 0.0)) throw Error("theory: R_q must be positive");
}

double lq_norm_q(const Vector& beta, double q) {
    if (!(q >= 0.0 && q <= 1.0)) throw Error("lq_norm_q: q must lie in [0, 1]");
    double acc = 0.0;
    for (Eigen::Index j = 0; j < beta.size(); ++j) {
        const double a = std::abs(beta[j]);
        if (a == 0.0) continue;
        acc += q == 0.0 ? 1.0 : std::pow(a, q);
    }
    return acc;
}

SEta s_eta(const Vector& beta_star, double eta) {
    if (!(eta > 0.0)) throw Error("s_eta: eta must be positive");
    SEta out;
    for (Eigen::Index j = 0; j < beta_star.size(); ++j) {
        const double a = std::abs(beta_star[j]);
        if (a > eta) out.support.push_back(j);
        else out.tail_l1 += a;
    }
    return out;
}

Theorem1Bounds theorem1_bounds(const TheoryConstants& c, double mu1, double mu2, double lambda,
                               double L) {
    c.validate();
    if (!(c.gamma[0] > (2.0 * mu1 - mu2) / 2.0))
        throw Error("theorem1_bounds: requires gamma_1 > (2 mu_1 - mu_2) / 2");
    const double base = 2.0 * lambda * L / (2.0 * c.gamma[0] - 2.0 * mu1 + mu2);
    const double s57 = std::sqrt(57.0);
    Theorem1Bounds b;
    b.l2_sq = (s57 + 7.0) * (s57 + 7.0) * c.R_q * std::pow(base, 2.0 - c.q);
    b.l1 = 4.0 * (2.0 * s57 + 15.0) * c.R_q * std::pow(base, 1.0 - c.q);
    return b;
}

Theorem2Constants theorem2_constants(const TheoryConstants& c, double mu1, double v, double n,
                                     double m, double hat_err_l2) {
    c.validate();
    if (!(v > 0.0) || !(n > 1.0) || !(m > 0.0))
        throw Error("theorem2_constants: need v > 0, n > 1, m > 0");
    const double gap = 2.0 * c.gamma_alg() - mu1;
    if (!(gap > 0.0)) throw Error("contraction precondition violated: 2 gamma - mu_1 <= 0");

    const double rate = std::log(n) / m;
    const double tau = c.tau_alg();
    const double slack = 256.0 * c.R_q * tau * std::pow(rate, 1.0 - c.q / 2.0) / gap;
    const double divisor = 1.0 - slack;
    if (!(divisor > 0.0))
        throw Error("contraction precondition violated: 1 - 256 R_q tau (log n/m)^(1-q/2) / "
                    "(2 gamma - mu_1) <= 0");

    Theorem2Constants k;
    k.eps_stat = 8.0 * std::sqrt(c.R_q) * std::pow(rate, -c.q / 4.0) *
                 (hat_err_l2 + std::sqrt(c.R_q) * std::pow(rate, 0.5 - c.q / 4.0));
    k.kappa = (1.0 - gap / (8.0 * v) + slack) / divisor;
    k.xi = 2.0 * tau * rate * (gap / (8.0 * v) + 2.0 * slack + 5.0) / divisor;
    k.contraction = k.kappa > 0.0 && k.kappa < 1.0;
    return k;
}

double theorem2_iterations(double kappa, double r, double lambda, double delta_star,
                           double initial_gap) {
    if (!(kappa > 0.0 && kappa < 1.0)) throw Error("theorem2_iterations: kappa must lie in (0, 1)");
    if (!(delta_star > 0.0)) throw Error("theorem2_iterations: tolerance must be positive");
    const double log_inv = std::log(1.0 / kappa);
    const double epochs = std::log2(std::log2(r * lambda / delta_star));
    return epochs * (1.0 + std::log(2.0) / log_inv) + std::log(initial_gap / delta_star) / log_inv;
}

double theorem2_min_tolerance(const Theorem2Constants& k) {
    return 8.0 * k.xi / (1.0 - k.kappa) * k.eps_stat * k.eps_stat;
}

double theorem2_error_bound(const TheoryConstants& c, double mu1, double n, double m,
                            double delta_star, double eps_stat) {
    const double gap = 2.0 * c.gamma_alg() - mu1;
    if (!(gap > 0.0)) throw Error("theorem2_error_bound: requires 2 gamma > mu_1");
    const double tau = c.tau_alg();
    const double quad =
        tau > 0.0 ? delta_star * delta_star / (2.0 * tau) : std::numeric_limits<double>::infinity();
    return 4.0 / gap * (delta_star + quad + 4.0 * tau * std::log(n) / m * eps_stat * eps_stat);
}

bool theorem2_sample_size_ok(const TheoryConstants& c, double mu1, double r, double L, double n,
                             double m) {
    const double gap = 2.0 * c.gamma_alg() - mu1;
    if (!(gap > 0.0)) return false;
    const double a = 4.0 * r * r / (L * L);
    const double b = std::pow(128.0 * c.R_q * c.tau_alg() / gap, 1.0 - c.q / 2.0);
    return m >= std::max(a, b) * std::log(n);
}

double stationarity_residual(const QuadraticLoss& loss, const Decomposition& d, double r,
                             const Vector& beta, double v) {
    const BallSpec ball = BallSpec::h_sublevel(d, r);
    if (!ball.contains(beta, 1e-9))
        throw Error("stationarity_residual: beta is infeasible (g = " +
                    std::to_string(ball.gauge(beta)) + " > r = " + std::to_string(r) + ")");
    SolverConfig cfg;
    cfg.v = v;
    cfg.r = r;
    return (beta - pg_step(loss, d, cfg, beta)).norm();
}

}  // namespace ncvx
