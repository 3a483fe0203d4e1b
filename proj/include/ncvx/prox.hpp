#pragma once

#include <optional>

#include "ncvx/common.hpp"
#include "ncvx/regularizer.hpp"

namespace ncvx {

/// Convex constraint set {beta : g(beta) <= radius}, with g either the l1 norm
/// or H_lambda(beta) / lambda for a decomposition.
struct BallSpec {
    double radius = 1.0;
    std::optional<Decomposition> sublevel;  // empty: plain l1 ball

    static BallSpec l1(double r);
    static BallSpec h_sublevel(const Decomposition& d, double r);

    double gauge(const Vector& beta) const;
    bool contains(const Vector& beta, double slack = 0.0) const;
};

Vector soft_threshold(const Vector& x, double theta);

// Euclidean projection onto {||beta||_1 <= r}; sort-based threshold search.
Vector project_l1(const Vector& x, double r);

// Coordinate-wise argmin_b 0.5 (b - x_j)^2 + weight * h(b).
Vector prox_h(const Decomposition& d, const Vector& x, double weight);
double prox_h_scalar(const Decomposition& d, double x, double weight);

Vector project_ball(const BallSpec& spec, const Vector& x);

}  // namespace ncvx
