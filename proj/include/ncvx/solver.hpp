#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "ncvx/common.hpp"
#include "ncvx/loss.hpp"
#include "ncvx/prox.hpp"
#include "ncvx/regularizer.hpp"

namespace ncvx {

struct SolverConfig {
    double v = 2.0;          // inverse step size
    double r = 1.0;          // radius of {H_lambda / lambda <= r}
    int max_iter = 2000;
    double tol_step = 1e-9;  // relative iterate change; 0 disables
    double tol_obj = 0.0;    // absolute objective change; 0 disables
    bool keep_iterates = false;
    // Double v whenever the quadratic upper model of L + Q_lambda fails at the
    // candidate; v then never decreases. With a valid v the path is unchanged.
    bool backtrack = false;
    // RSM constant gamma_5; when present, v >= max(2 gamma_5 - mu_2, mu_1) is enforced.
    std::optional<double> gamma5;
};

enum class Termination { StepTol, ObjTol, MaxIter };
enum class StepCheck { Skipped, Passed };

struct SolverTrace {
    std::vector<Vector> iterates;         // beta^0..beta^T when keep_iterates
    std::vector<double> objective_values; // phi(beta^t), t = 0..iterations_run
    std::vector<double> step_norms;       // ||beta^{t+1} - beta^t||_2
    int iterations_run = 0;
    double final_v = 0.0;   // v in use at exit (differs from cfg.v only after backtracking)
    int v_increases = 0;
    Termination termination = Termination::MaxIter;
    StepCheck step_check = StepCheck::Skipped;
};

struct SolveResult {
    Vector beta;
    SolverTrace trace;
};

// Called with (t, beta^t) for every iterate, including beta^0.
using IterateObserver = std::function<void(int, const Vector&)>;

// phi(beta) = L(beta) + R_lambda(beta), always with the undecomposed rho.
double objective(const QuadraticLoss& loss, const Regularizer& reg, const Vector& beta);

/**
 * One proximal-gradient update on phi = (L + Q_lambda) + H_lambda over
 * {H_lambda / lambda <= r}:
 *   u = beta - (grad L + grad Q_lambda)(beta) / v
 *   (1) b = prox of H_lambda / v at u
 *   (2) keep b when it is feasible
 *   (3) otherwise project u onto the constraint set
 * With h = lambda |.| this is soft-thresholding followed by l1-ball handling.
 */
Vector pg_step(const QuadraticLoss& loss, const Decomposition& d, const SolverConfig& cfg,
               const Vector& beta);

SolveResult solve(const QuadraticLoss& loss, const Decomposition& d, const SolverConfig& cfg,
                  const Vector& beta0, const IterateObserver& observer = {});

// v = 2 * (largest |eigenvalue| of Gamma by power iteration), floored at mu_1 + 1e-6.
double estimate_step_v(const QuadraticLoss& loss, const Decomposition& d);
// v = 2 * lambda_max(Sigma_x) when the design covariance is known.
double estimate_step_v(const Matrix& sigma_x, const Decomposition& d);

std::string_view to_string(Termination t);

}  // namespace ncvx
