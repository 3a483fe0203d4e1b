#include "ncvx/prox.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

namespace ncvx {

namespace {

constexpr int kMaxBisection = 300;

// Solves b + w h'(b) = ax for b in (0, ax] where the left side is continuous
// and strictly increasing. Used when no closed-form branch validates.
double prox_bisect(const Decomposition& d, double ax, double w) {
    double lo = 0.0;
    double hi = ax;
    for (int it = 0; it < kMaxBisection && hi - lo > 0.0; ++it) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        if (mid + w * d.h_prime_pos(mid) > ax)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace

BallSpec BallSpec::l1(double r) {
    if (!(r > 0.0)) throw Error("invalid radius " + std::to_string(r));
    return BallSpec{r, std::nullopt};
}

BallSpec BallSpec::h_sublevel(const Decomposition& d, double r) {
    if (!(r > 0.0)) throw Error("invalid radius " + std::to_string(r));
    return BallSpec{r, d};
}

double BallSpec::gauge(const Vector& beta) const {
    if (!sublevel) return beta.lpNorm<1>();
    return sublevel->H(beta) / sublevel->regularizer().lambda();
}

bool BallSpec::contains(const Vector& beta, double slack) const {
    return gauge(beta) <= radius + slack;
}

Vector soft_threshold(const Vector& x, double theta) {
    if (theta < 0.0) throw Error("soft_threshold: negative threshold");
    Vector out(x.size());
    for (Eigen::Index j = 0; j < x.size(); ++j) {
        const double ax = std::abs(x[j]) - theta;
        out[j] = ax > 0.0 ? std::copysign(ax, x[j]) : 0.0;
    }
    return out;
}

Vector project_l1(const Vector& x, double r) {
    if (!(r > 0.0)) throw Error("project_l1: invalid radius " + std::to_string(r));
    if (x.lpNorm<1>() <= r) return x;

    std::vector<double> u(static_cast<std::size_t>(x.size()));
    for (Eigen::Index j = 0; j < x.size(); ++j) u[static_cast<std::size_t>(j)] = std::abs(x[j]);
    std::sort(u.begin(), u.end(), std::greater<>());

    // theta = (sum_{i<=k} u_i - r) / k for the largest k with u_k > theta_k.
    double cum = 0.0;
    double theta = 0.0;
    for (std::size_t k = 0; k < u.size(); ++k) {
        cum += u[k];
        const double t = (cum - r) / static_cast<double>(k + 1);
        if (u[k] > t) theta = t;
        else break;
    }
    return soft_threshold(x, std::max(theta, 0.0));
}

double prox_h_scalar(const Decomposition& d, double x, double w) {
    const double lam = d.regularizer().lambda();
    const double ax = std::abs(x);
    // h'(0+) = lambda for every supported split, so the dead zone is [0, w lambda].
    if (ax <= w * lam) return 0.0;
    if (d.h_is_l1()) return std::copysign(ax - w * lam, x);

    double b = -1.0;
    if (d.regularizer().family() == Family::SCAD) {
        const double a = d.regularizer().shape();
        const double c = 1.0 / (a - 1.0);
        const double inner = (ax - w * lam) / (1.0 + w * c);   // lambda |t| + t^2 c / 2
        const double mid = ax - w * a * lam * c;               // linear branch
        const double outer = ax / (1.0 + w * c);               // quadratic tail
        if (inner > 0.0 && inner <= lam) b = inner;
        else if (mid > lam && mid <= a * lam) b = mid;
        else if (outer > a * lam) b = outer;
    } else {
        const double bb = d.regularizer().shape();
        const double inner = ax - w * lam;
        const double outer = ax / (1.0 + w / bb);
        if (inner > 0.0 && inner <= bb * lam) b = inner;
        else if (outer > bb * lam) b = outer;
    }
    if (b < 0.0) b = prox_bisect(d, ax, w);
    return std::copysign(b, x);
}

Vector prox_h(const Decomposition& d, const Vector& x, double weight) {
    if (!(weight > 0.0)) throw Error("prox_h: weight must be positive");
    Vector out(x.size());
    for (Eigen::Index j = 0; j < x.size(); ++j) out[j] = prox_h_scalar(d, x[j], weight);
    return out;
}

Vector project_ball(const BallSpec& spec, const Vector& x) {
    if (!(spec.radius > 0.0)) throw Error("project_ball: invalid radius");
    if (!spec.sublevel || spec.sublevel->h_is_l1()) return project_l1(x, spec.radius);
    if (spec.contains(x)) return x;

    const Decomposition& d = *spec.sublevel;
    const double lam = d.regularizer().lambda();
    const double r = spec.radius;
    const double tol = 1e-8 * std::max(1.0, r);
    // Multiplier nu on g = H / lambda gives the inner prox weight nu / lambda.
    auto at = [&](double nu) { return prox_h(d, x, nu / lam); };

    double lo = 0.0;
    double hi = 1.0;
    Vector best = at(hi);
    int grow = 0;
    while (spec.gauge(best) > r) {
        lo = hi;
        hi *= 2.0;
        best = at(hi);
        if (++grow > 200) throw Error("projection did not converge");
    }
    for (int it = 0; it < kMaxBisection; ++it) {
        if (r - spec.gauge(best) <= tol) return best;
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        Vector cand = at(mid);
        if (spec.gauge(cand) > r) {
            lo = mid;
        } else {
            hi = mid;
            best = std::move(cand);
        }
    }
    if (r - spec.gauge(best) <= tol) return best;
    throw Error("projection did not converge");
}

}  // namespace ncvx
