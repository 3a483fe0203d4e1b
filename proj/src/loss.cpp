#include "ncvx/loss.hpp"

#include <string>

namespace ncvx {

namespace {

void check_shapes(const Matrix& Z, const Vector& y) {
    if (Z.rows() < 1) throw Error("surrogate: need at least one sample");
    if (Z.rows() != y.size())
        throw Error("surrogate: shape mismatch, Z has " + std::to_string(Z.rows()) +
                    " rows but y has " + std::to_string(y.size()) + " entries");
}

Matrix gram(const Matrix& Z) {
    const double m = static_cast<double>(Z.rows());
    Matrix g = Matrix::Zero(Z.cols(), Z.cols());
    g.selfadjointView<Eigen::Lower>().rankUpdate(Z.transpose(), 1.0 / m);
    return g.selfadjointView<Eigen::Lower>();
}

}  // namespace

QuadraticLoss::QuadraticLoss(Matrix gamma, Vector upsilon)
    : gamma_(std::move(gamma)), upsilon_(std::move(upsilon)) {
    if (gamma_.rows() != gamma_.cols() || gamma_.rows() != upsilon_.size())
        throw Error("QuadraticLoss: Gamma must be n x n with n = dim(Upsilon)");
    gamma_ = 0.5 * (gamma_ + gamma_.transpose()).eval();
}

void QuadraticLoss::check_dim(const Vector& beta) const {
    if (beta.size() != dim())
        throw Error("QuadraticLoss: dimension mismatch, expected " + std::to_string(dim()) +
                    ", got " + std::to_string(beta.size()));
}

double QuadraticLoss::value(const Vector& beta) const {
    check_dim(beta);
    return 0.5 * beta.dot(gamma_ * beta) - upsilon_.dot(beta);
}

Vector QuadraticLoss::grad(const Vector& beta) const {
    check_dim(beta);
    return gamma_ * beta - upsilon_;
}

double QuadraticLoss::taylor_error(const Vector& beta, const Vector& beta_prime) const {
    return value(beta) - value(beta_prime) - grad(beta_prime).dot(beta - beta_prime);
}

double QuadraticLoss::taylor_error_modified(const Decomposition& d, const Vector& beta,
                                            const Vector& beta_prime) const {
    const double bregman_q =
        d.Q(beta) - d.Q(beta_prime) - d.grad_Q(beta_prime).dot(beta - beta_prime);
    return taylor_error(beta, beta_prime) + bregman_q;
}

QuadraticLoss surrogate_additive(const Matrix& Z, const Vector& y, const Matrix& sigma_w) {
    check_shapes(Z, y);
    if (sigma_w.rows() != Z.cols() || sigma_w.cols() != Z.cols())
        throw Error("surrogate_additive: Sigma_w must be n x n");
    const double m = static_cast<double>(Z.rows());
    return QuadraticLoss(gram(Z) - sigma_w, Z.transpose() * y / m);
}

QuadraticLoss surrogate_missing(const Matrix& Z, const Vector& y, double vartheta) {
    check_shapes(Z, y);
    if (!(vartheta >= 0.0 && vartheta < 1.0))
        throw Error("surrogate_missing: vartheta must lie in [0, 1)");
    const double m = static_cast<double>(Z.rows());
    const Matrix Zt = Z / (1.0 - vartheta);
    Matrix g = gram(Zt);
    g.diagonal() *= (1.0 - vartheta);
    return QuadraticLoss(std::move(g), Zt.transpose() * y / m);
}

QuadraticLoss surrogate_for(const CorruptionModel& model, const Matrix& Z, const Vector& y) {
    if (const auto* add = std::get_if<AdditiveNoise>(&model))
        return surrogate_additive(Z, y, add->sigma_w);
    if (const auto* mis = std::get_if<MissingData>(&model))
        return surrogate_missing(Z, y, mis->vartheta);
    check_shapes(Z, y);
    const double m = static_cast<double>(Z.rows());
    return QuadraticLoss(gram(Z), Z.transpose() * y / m);
}

}  // namespace ncvx
