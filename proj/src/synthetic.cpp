#include "ncvx/synthetic.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>

#include "ncvx/csv_io.hpp"

namespace ncvx {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

enum Stream : std::uint64_t { kSignal = 1, kDesign = 2, kNoise = 3, kCorruption = 4 };

bool is_diagonal(const Matrix& a) {
    for (Eigen::Index j = 0; j < a.cols(); ++j)
        for (Eigen::Index i = 0; i < a.rows(); ++i)
            if (i != j && a(i, j) != 0.0) return false;
    return true;
}

// Symmetric square root of a PSD matrix; tiny negative eigenvalues are clipped.
Matrix psd_sqrt(const Matrix& a) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(a);
    if (es.info() != Eigen::Success) throw Error("Sigma_w eigendecomposition failed");
    if (es.eigenvalues().minCoeff() < -1e-10 * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff()))
        throw Error("Sigma_w must be positive semidefinite");
    const Vector root = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return es.eigenvectors() * root.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace

std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> coords) {
    std::uint64_t h = splitmix64(base);
    for (std::uint64_t c : coords) h = splitmix64(h ^ splitmix64(c + 0x632be59bd9b4e019ULL));
    return h;
}

double Rng::uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal() {
    if (spare_) {
        const double z = *spare_;
        spare_.reset();
        return z;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double rad = std::sqrt(-2.0 * std::log(u1));
    const double ang = 2.0 * std::numbers::pi * u2;
    spare_ = rad * std::sin(ang);
    return rad * std::cos(ang);
}

std::uint64_t Rng::below(std::uint64_t bound) {
    if (bound == 0) throw Error("Rng::below: empty range");
    // Rejection keeps the draw exactly uniform.
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t x = engine_();
    while (x >= limit) x = engine_();
    return x % bound;
}

Vector compressible_signal(Eigen::Index n, std::uint64_t seed) {
    if (n < 1) throw Error("compressible_signal: n must be >= 1");
    Rng rng(seed);
    Vector beta(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double k = static_cast<double>(i + 1);
        const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
        beta[i] = sign * 5.0 / (k * k);
    }
    for (Eigen::Index i = n - 1; i > 0; --i) {
        const auto j = static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(i + 1)));
        std::swap(beta[i], beta[j]);
    }
    return beta;
}

TrialData generate_trial(const Scenario& sc) {
    if (sc.n < 1 || sc.m < 1) throw Error("generate_trial: n and m must be >= 1");
    if (!(sc.sigma_e >= 0.0)) throw Error("generate_trial: sigma_e must be >= 0");

    TrialData d;
    d.beta_star = compressible_signal(
        sc.n, sc.signal_seed ? *sc.signal_seed : derive_seed(sc.seed, {kSignal}));

    Rng design(derive_seed(sc.seed, {kDesign}));
    d.X.resize(sc.m, sc.n);
    for (Eigen::Index i = 0; i < sc.m; ++i)
        for (Eigen::Index j = 0; j < sc.n; ++j) d.X(i, j) = design.normal();

    Rng noise(derive_seed(sc.seed, {kNoise}));
    d.y = d.X * d.beta_star;
    for (Eigen::Index i = 0; i < sc.m; ++i) d.y[i] += sc.sigma_e * noise.normal();

    Rng corrupt(derive_seed(sc.seed, {kCorruption}));
    if (const auto* add = std::get_if<AdditiveNoise>(&sc.corruption)) {
        if (add->sigma_w.rows() != sc.n || add->sigma_w.cols() != sc.n)
            throw Error("generate_trial: Sigma_w must be n x n");
        Matrix W(sc.m, sc.n);
        for (Eigen::Index i = 0; i < sc.m; ++i)
            for (Eigen::Index j = 0; j < sc.n; ++j) W(i, j) = corrupt.normal();
        if (is_diagonal(add->sigma_w)) {
            for (Eigen::Index j = 0; j < sc.n; ++j) {
                const double s = add->sigma_w(j, j);
                if (s < 0.0) throw Error("Sigma_w must be positive semidefinite");
                W.col(j) *= std::sqrt(s);
            }
        } else {
            W = (W * psd_sqrt(add->sigma_w)).eval();
        }
        d.Z = d.X + W;
    } else if (const auto* mis = std::get_if<MissingData>(&sc.corruption)) {
        if (!(mis->vartheta >= 0.0 && mis->vartheta < 1.0))
            throw Error("generate_trial: vartheta must lie in [0, 1)");
        d.Z = d.X;
        for (Eigen::Index i = 0; i < sc.m; ++i)
            for (Eigen::Index j = 0; j < sc.n; ++j)
                if (corrupt.uniform() < mis->vartheta) d.Z(i, j) = 0.0;
    } else {
        d.Z = d.X;
    }
    return d;
}

void export_trial_data(const TrialData& data, const std::string& stem) {
    const Eigen::Index n = data.X.cols();
    {
        const std::string path = stem + "_samples.csv";
        std::ofstream out(path);
        if (!out) throw Error("cannot open '" + path + "' for writing");
        out << "y";
        for (Eigen::Index j = 1; j <= n; ++j) out << ",x_" << j;
        for (Eigen::Index j = 1; j <= n; ++j) out << ",z_" << j;
        out << '\n';
        for (Eigen::Index i = 0; i < data.X.rows(); ++i) {
            out << format_sig(data.y[i], 17);
            for (Eigen::Index j = 0; j < n; ++j) out << ',' << format_sig(data.X(i, j), 17);
            for (Eigen::Index j = 0; j < n; ++j) out << ',' << format_sig(data.Z(i, j), 17);
            out << '\n';
        }
        if (!out) throw Error("write failed for '" + path + "'");
    }
    const std::string path = stem + "_beta.csv";
    std::ofstream out(path);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    out << "j,beta_star\n";
    for (Eigen::Index j = 0; j < n; ++j) out << j + 1 << ',' << format_sig(data.beta_star[j], 17) << '\n';
    if (!out) throw Error("write failed for '" + path + "'");
}

}  // namespace ncvx
