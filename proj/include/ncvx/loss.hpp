#pragma once

#include <variant>

#include "ncvx/common.hpp"
#include "ncvx/regularizer.hpp"

namespace ncvx {

/**
 * Quadratic empirical loss L(beta) = 0.5 beta' Gamma beta - Upsilon' beta.
 *
 * Gamma is symmetrized on construction and may be indefinite; that
 * indefiniteness is what makes the corrected-regression problems nonconvex,
 * so no PSD repair is applied.
 */
class QuadraticLoss {
public:
    QuadraticLoss(Matrix gamma, Vector upsilon);

    Eigen::Index dim() const { return upsilon_.size(); }
    const Matrix& gamma() const { return gamma_; }
    const Vector& upsilon() const { return upsilon_; }

    double value(const Vector& beta) const;
    Vector grad(const Vector& beta) const;

    // L(b) - L(b') - <grad L(b'), b - b'>; equals 0.5 d' Gamma d for d = b - b'.
    double taylor_error(const Vector& beta, const Vector& beta_prime) const;
    // taylor_error plus the Bregman term of Q_lambda from the decomposition.
    double taylor_error_modified(const Decomposition& d, const Vector& beta,
                                 const Vector& beta_prime) const;

private:
    void check_dim(const Vector& beta) const;

    Matrix gamma_;
    Vector upsilon_;
};

struct NoCorruption {};
struct AdditiveNoise {
    Matrix sigma_w;  // covariance of W, PSD
};
struct MissingData {
    double vartheta = 0.2;  // per-entry missingness probability in [0, 1)
};
using CorruptionModel = std::variant<NoCorruption, AdditiveNoise, MissingData>;

// Gamma = Z'Z/m - Sigma_w, Upsilon = Z'y/m.
QuadraticLoss surrogate_additive(const Matrix& Z, const Vector& y, const Matrix& sigma_w);
// Zt = Z/(1 - vartheta); Gamma = Zt'Zt/m - vartheta diag(Zt'Zt/m), Upsilon = Zt'y/m.
QuadraticLoss surrogate_missing(const Matrix& Z, const Vector& y, double vartheta);
// Dispatch on the corruption model (NoCorruption gives the least-squares pair).
QuadraticLoss surrogate_for(const CorruptionModel& model, const Matrix& Z, const Vector& y);

}  // namespace ncvx
