#pragma once

#include <string_view>

#include "ncvx/common.hpp"

namespace ncvx {

enum class Family { Lasso, SCAD, MCP };

/**
 * Coordinate-separable penalty rho_lambda.
 *
 * `shape` is the SCAD parameter a (> 2) or the MCP parameter b (> 0); it is
 * ignored for the Lasso. Construction validates the parameters, so every
 * Regularizer in circulation is usable.
 */
class Regularizer {
public:
    static Regularizer lasso(double lambda);
    static Regularizer scad(double lambda, double a = 3.7);
    static Regularizer mcp(double lambda, double b = 1.5);
    static Regularizer make(Family family, double lambda);

    Family family() const { return family_; }
    double lambda() const { return lambda_; }
    double shape() const { return shape_; }

    // lim_{t->0+} rho'(t) / lambda; one for every supported family.
    double L() const { return 1.0; }

    double rho(double t) const;
    // Throws at t == 0, where only a subdifferential exists.
    double rho_prime(double t) const;

    double value(const Vector& beta) const;

private:
    Regularizer(Family family, double lambda, double shape);

    Family family_;
    double lambda_;
    double shape_;
};

enum class Variant { Natural, SimpleL1 };

/**
 * Split rho = h + q with h convex and q concave, differentiable, even and
 * q(0) = q'(0) = 0. Natural puts the whole quadratic -t^2/(2(a-1)) (SCAD)
 * or -t^2/(2b) (MCP) into q; SimpleL1 keeps h = lambda |t|.
 */
class Decomposition {
public:
    Decomposition(Regularizer reg, Variant variant);

    const Regularizer& regularizer() const { return reg_; }
    Variant variant() const { return variant_; }
    double mu1() const { return mu1_; }
    double mu2() const { return mu2_; }

    // True when h(t) == lambda |t|, i.e. the prox is plain soft-thresholding.
    bool h_is_l1() const;

    double h(double t) const;
    double q(double t) const;
    double q_prime(double t) const;
    // Derivative of h for t > 0 (h is C^1 away from the origin).
    double h_prime_pos(double t) const;

    double H(const Vector& beta) const;
    double Q(const Vector& beta) const;
    Vector grad_Q(const Vector& beta) const;

private:
    Regularizer reg_;
    Variant variant_;
    double mu1_ = 0.0;
    double mu2_ = 0.0;
};

std::string_view to_string(Family f);
std::string_view to_string(Variant v);
Family parse_family(std::string_view s);
Variant parse_variant(std::string_view s);

}  // namespace ncvx
