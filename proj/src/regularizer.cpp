#include "ncvx/regularizer.hpp"

#include <cmath>
#include <string>

namespace ncvx {

namespace {

double sign(double t) { return t > 0.0 ? 1.0 : (t < 0.0 ? -1.0 : 0.0); }

}  // namespace

Regularizer::Regularizer(Family family, double lambda, double shape)
    : family_(family), lambda_(lambda), shape_(shape) {
    if (!(lambda > 0.0) || !std::isfinite(lambda))
        throw Error("regularizer: lambda must be positive, got " + std::to_string(lambda));
    if (family == Family::SCAD && !(shape > 2.0))
        throw Error("regularizer: SCAD requires a > 2, got " + std::to_string(shape));
    if (family == Family::MCP && !(shape > 0.0))
        throw Error("regularizer: MCP requires b > 0, got " + std::to_string(shape));
}

Regularizer Regularizer::lasso(double lambda) { return {Family::Lasso, lambda, 0.0}; }
Regularizer Regularizer::scad(double lambda, double a) { return {Family::SCAD, lambda, a}; }
Regularizer Regularizer::mcp(double lambda, double b) { return {Family::MCP, lambda, b}; }

Regularizer Regularizer::make(Family family, double lambda) {
    switch (family) {
        case Family::Lasso: return lasso(lambda);
        case Family::SCAD: return scad(lambda);
        case Family::MCP: return mcp(lambda);
    }
    throw Error("regularizer: unknown family");
}

double Regularizer::rho(double t) const {
    const double at = std::abs(t);
    const double lam = lambda_;
    switch (family_) {
        case Family::Lasso:
            return lam * at;
        case Family::SCAD: {
            const double a = shape_;
            if (at <= lam) return lam * at;
            if (at <= a * lam) return -(t * t - 2.0 * a * lam * at + lam * lam) / (2.0 * (a - 1.0));
            return (a + 1.0) * lam * lam / 2.0;
        }
        case Family::MCP: {
            const double b = shape_;
            if (at <= b * lam) return lam * at - t * t / (2.0 * b);
            return b * lam * lam / 2.0;
        }
    }
    return 0.0;
}

double Regularizer::rho_prime(double t) const {
    if (t == 0.0) throw Error("rho_prime: subdifferential point t = 0");
    const double at = std::abs(t);
    const double s = sign(t);
    const double lam = lambda_;
    switch (family_) {
        case Family::Lasso:
            return s * lam;
        case Family::SCAD: {
            const double a = shape_;
            if (at <= lam) return s * lam;
            if (at <= a * lam) return s * (a * lam - at) / (a - 1.0);
            return 0.0;
        }
        case Family::MCP: {
            const double b = shape_;
            if (at <= b * lam) return s * (lam - at / b);
            return 0.0;
        }
    }
    return 0.0;
}

double Regularizer::value(const Vector& beta) const {
    double acc = 0.0;
    for (Eigen::Index j = 0; j < beta.size(); ++j) acc += rho(beta[j]);
    return acc;
}

Decomposition::Decomposition(Regularizer reg, Variant variant) : reg_(reg), variant_(variant) {
    switch (reg_.family()) {
        case Family::Lasso:
            mu1_ = mu2_ = 0.0;
            break;
        case Family::SCAD:
            mu1_ = 1.0 / (reg_.shape() - 1.0);
            mu2_ = variant == Variant::Natural ? mu1_ : 0.0;
            break;
        case Family::MCP:
            mu1_ = 1.0 / reg_.shape();
            mu2_ = variant == Variant::Natural ? mu1_ : 0.0;
            break;
    }
}

bool Decomposition::h_is_l1() const {
    return reg_.family() == Family::Lasso || variant_ == Variant::SimpleL1;
}

double Decomposition::h(double t) const {
    const double at = std::abs(t);
    const double lam = reg_.lambda();
    if (h_is_l1()) return lam * at;
    if (reg_.family() == Family::SCAD) {
        const double a = reg_.shape();
        if (at <= lam) return lam * at + t * t / (2.0 * (a - 1.0));
        if (at <= a * lam) return (2.0 * a * lam * at - lam * lam) / (2.0 * (a - 1.0));
        return t * t / (2.0 * (a - 1.0)) + (a + 1.0) * lam * lam / 2.0;
    }
    const double b = reg_.shape();
    if (at <= b * lam) return lam * at;
    return t * t / (2.0 * b) + b * lam * lam / 2.0;
}

double Decomposition::q(double t) const {
    const double at = std::abs(t);
    const double lam = reg_.lambda();
    switch (reg_.family()) {
        case Family::Lasso:
            return 0.0;
        case Family::SCAD: {
            const double a = reg_.shape();
            if (variant_ == Variant::Natural) return -t * t / (2.0 * (a - 1.0));
            if (at <= lam) return 0.0;
            if (at <= a * lam) return -(t * t - 2.0 * lam * at + lam * lam) / (2.0 * (a - 1.0));
            return (a + 1.0) * lam * lam / 2.0 - lam * at;
        }
        case Family::MCP: {
            const double b = reg_.shape();
            if (variant_ == Variant::Natural || at <= b * lam) return -t * t / (2.0 * b);
            return b * lam * lam / 2.0 - lam * at;
        }
    }
    return 0.0;
}

double Decomposition::q_prime(double t) const {
    const double at = std::abs(t);
    const double s = sign(t);
    const double lam = reg_.lambda();
    switch (reg_.family()) {
        case Family::Lasso:
            return 0.0;
        case Family::SCAD: {
            const double a = reg_.shape();
            if (variant_ == Variant::Natural) return -t / (a - 1.0);
            if (at <= lam) return 0.0;
            if (at <= a * lam) return -s * (at - lam) / (a - 1.0);
            return -s * lam;
        }
        case Family::MCP: {
            const double b = reg_.shape();
            if (variant_ == Variant::Natural || at <= b * lam) return -t / b;
            return -s * lam;
        }
    }
    return 0.0;
}

double Decomposition::h_prime_pos(double t) const {
    const double lam = reg_.lambda();
    if (h_is_l1()) return lam;
    if (reg_.family() == Family::SCAD) {
        const double a = reg_.shape();
        if (t <= lam) return lam + t / (a - 1.0);
        if (t <= a * lam) return a * lam / (a - 1.0);
        return t / (a - 1.0);
    }
    const double b = reg_.shape();
    if (t <= b * lam) return lam;
    return t / b;
}

double Decomposition::H(const Vector& beta) const {
    double acc = 0.0;
    for (Eigen::Index j = 0; j < beta.size(); ++j) acc += h(beta[j]);
    return acc;
}

double Decomposition::Q(const Vector& beta) const {
    double acc = 0.0;
    for (Eigen::Index j = 0; j < beta.size(); ++j) acc += q(beta[j]);
    return acc;
}

Vector Decomposition::grad_Q(const Vector& beta) const {
    Vector g(beta.size());
    for (Eigen::Index j = 0; j < beta.size(); ++j) g[j] = q_prime(beta[j]);
    return g;
}

std::string_view to_string(Family f) {
    switch (f) {
        case Family::Lasso: return "lasso";
        case Family::SCAD: return "scad";
        case Family::MCP: return "mcp";
    }
    return "?";
}

std::string_view to_string(Variant v) {
    return v == Variant::Natural ? "natural" : "simple-l1";
}

Family parse_family(std::string_view s) {
    if (s == "lasso") return Family::Lasso;
    if (s == "scad") return Family::SCAD;
    if (s == "mcp") return Family::MCP;
    throw Error("unknown regularizer family '" + std::string(s) + "'");
}

Variant parse_variant(std::string_view s) {
    if (s == "natural") return Variant::Natural;
    if (s == "simple-l1") return Variant::SimpleL1;
    throw Error("unknown decomposition variant '" + std::string(s) + "'");
}

}  // namespace ncvx
