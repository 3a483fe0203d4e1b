#include "ncvx/solver.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ncvx {

namespace {

constexpr double kFeasSlack = 1e-9;
constexpr int kMaxDoublings = 60;

void check_config(const SolverConfig& cfg) {
    if (!(cfg.v > 0.0)) throw Error("solver: v must be positive");
    if (!(cfg.r > 0.0)) throw Error("solver: r must be positive");
    if (cfg.max_iter < 1) throw Error("solver: max_iter must be >= 1");
    if (cfg.tol_step < 0.0 || cfg.tol_obj < 0.0) throw Error("solver: tolerances must be >= 0");
}

}  // namespace

double objective(const QuadraticLoss& loss, const Regularizer& reg, const Vector& beta) {
    return loss.value(beta) + reg.value(beta);
}

namespace {

// The three-step update given the gradient of L + Q_lambda at beta.
Vector step_from(const Decomposition& d, const BallSpec& ball, const Vector& beta, const Vector& grad,
                 double v) {
    const Vector u = beta - grad / v;
    Vector next = prox_h(d, u, 1.0 / v);
    if (ball.contains(next)) return next;
    return project_ball(ball, u);
}

// Smooth part L + Q_lambda at beta, reusing Gamma beta for value and gradient.
struct SmoothEval {
    double f = 0.0;      // L(beta) + Q(beta)
    double loss = 0.0;   // L(beta)
    Vector grad;         // Gamma beta - Upsilon + grad Q(beta)
};

SmoothEval eval_smooth(const QuadraticLoss& loss, const Decomposition& d, const Vector& beta) {
    const Vector gb = loss.gamma() * beta;
    SmoothEval e;
    e.loss = 0.5 * beta.dot(gb) - loss.upsilon().dot(beta);
    e.f = e.loss + d.Q(beta);
    e.grad = gb - loss.upsilon() + d.grad_Q(beta);
    return e;
}

}  // namespace

Vector pg_step(const QuadraticLoss& loss, const Decomposition& d, const SolverConfig& cfg,
               const Vector& beta) {
    const Vector grad = loss.grad(beta) + d.grad_Q(beta);
    return step_from(d, BallSpec::h_sublevel(d, cfg.r), beta, grad, cfg.v);
}

SolveResult solve(const QuadraticLoss& loss, const Decomposition& d, const SolverConfig& cfg,
                  const Vector& beta0, const IterateObserver& observer) {
    check_config(cfg);
    if (beta0.size() != loss.dim()) throw Error("solve: beta0 has the wrong dimension");
    const BallSpec ball = BallSpec::h_sublevel(d, cfg.r);
    if (!ball.contains(beta0, kFeasSlack))
        throw Error("solve: infeasible beta0, g(beta0) = " + std::to_string(ball.gauge(beta0)) +
                    " > r = " + std::to_string(cfg.r));

    SolveResult out;
    SolverTrace& tr = out.trace;
    if (cfg.gamma5) {
        const double floor = std::max(2.0 * *cfg.gamma5 - d.mu2(), d.mu1());
        if (cfg.v < floor)
            throw Error("solve: step parameter v = " + std::to_string(cfg.v) +
                        " violates v >= max(2 gamma5 - mu2, mu1) = " + std::to_string(floor));
        tr.step_check = StepCheck::Passed;
    }

    const Regularizer& reg = d.regularizer();
    Vector beta = beta0;
    SmoothEval cur = eval_smooth(loss, d, beta);
    double phi = cur.loss + reg.value(beta);
    double v = cfg.v;
    tr.objective_values.push_back(phi);
    if (cfg.keep_iterates) tr.iterates.push_back(beta);
    if (observer) observer(0, beta);

    for (int t = 0; t < cfg.max_iter; ++t) {
        Vector next = step_from(d, ball, beta, cur.grad, v);
        SmoothEval nxt = eval_smooth(loss, d, next);
        if (cfg.backtrack) {
            for (int k = 0; k < kMaxDoublings; ++k) {
                const Vector diff = next - beta;
                const double model = cur.f + cur.grad.dot(diff) + 0.5 * v * diff.squaredNorm();
                if (nxt.f <= model + 1e-12 * (1.0 + std::abs(cur.f))) break;
                v *= 2.0;
                ++tr.v_increases;
                next = step_from(d, ball, beta, cur.grad, v);
                nxt = eval_smooth(loss, d, next);
            }
        }
        const double step = (next - beta).norm();
        const double rel = step / std::max(1.0, beta.norm());
        const double phi_next = nxt.loss + reg.value(next);

        beta = std::move(next);
        cur = std::move(nxt);
        tr.step_norms.push_back(step);
        tr.objective_values.push_back(phi_next);
        tr.iterations_run = t + 1;
        if (cfg.keep_iterates) tr.iterates.push_back(beta);
        if (observer) observer(t + 1, beta);

        if (cfg.tol_step > 0.0 && rel <= cfg.tol_step) {
            tr.termination = Termination::StepTol;
            break;
        }
        if (cfg.tol_obj > 0.0 && std::abs(phi_next - phi) <= cfg.tol_obj) {
            tr.termination = Termination::ObjTol;
            break;
        }
        phi = phi_next;
    }
    tr.final_v = v;
    out.beta = std::move(beta);
    return out;
}

double estimate_step_v(const QuadraticLoss& loss, const Decomposition& d) {
    const Eigen::Index n = loss.dim();
    const double floor = d.mu1() + 1e-6;
    if (n == 0) return floor;

    // Deterministic start with no special alignment to coordinate axes.
    Vector x(n);
    for (Eigen::Index j = 0; j < n; ++j) x[j] = 1.0 + 0.5 * std::sin(1.0 + static_cast<double>(j));
    x.normalize();

    double est = 0.0;
    for (int it = 0; it < 200; ++it) {
        Vector y = loss.gamma() * x;
        const double norm = y.norm();
        if (norm == 0.0) {
            est = 0.0;
            break;
        }
        const double prev = est;
        est = norm;
        x = y / norm;
        if (it > 0 && std::abs(est - prev) <= 1e-8 * est) break;
    }
    return std::max(2.0 * est, floor);
}

double estimate_step_v(const Matrix& sigma_x, const Decomposition& d) {
    if (sigma_x.rows() != sigma_x.cols() || sigma_x.rows() == 0)
        throw Error("estimate_step_v: Sigma_x must be a nonempty square matrix");
    Eigen::SelfAdjointEigenSolver<Matrix> es(sigma_x, Eigen::EigenvaluesOnly);
    return std::max(2.0 * es.eigenvalues().maxCoeff(), d.mu1() + 1e-6);
}

std::string_view to_string(Termination t) {
    switch (t) {
        case Termination::StepTol: return "step_tol";
        case Termination::ObjTol: return "obj_tol";
        case Termination::MaxIter: return "max_iter";
    }
    return "?";
}

}  // namespace ncvx
