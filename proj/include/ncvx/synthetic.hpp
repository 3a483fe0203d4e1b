#pragma once

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <random>
#include <string>

#include "ncvx/common.hpp"
#include "ncvx/loss.hpp"

namespace ncvx {

// Mixes a base seed with stream coordinates (trial index, dimension, ...) so
// every stream is a pure function of its coordinates.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> coords);

/// 64-bit Mersenne Twister with portable uniform/normal transforms, so that
/// draws do not depend on the standard library's distribution classes.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    double uniform();                        // [0, 1), 53-bit resolution
    double normal();                         // Box-Muller
    std::uint64_t below(std::uint64_t bound);  // uniform in [0, bound)

private:
    std::mt19937_64 engine_;
    std::optional<double> spare_;
};

struct Scenario {
    Eigen::Index n = 128;
    Eigen::Index m = 100;
    double sigma_e = 0.1;
    CorruptionModel corruption = NoCorruption{};
    std::uint64_t seed = 1;
    // When set, beta* is drawn from this seed instead of the trial seed, which
    // keeps the signal fixed across trials.
    std::optional<std::uint64_t> signal_seed;
};

struct TrialData {
    Matrix X;  // latent covariates, m x n
    Matrix Z;  // observed covariates
    Vector y;
    Vector beta_star;
};

// Random signs and a random permutation of the magnitudes 5 i^{-2}, i = 1..n.
Vector compressible_signal(Eigen::Index n, std::uint64_t seed);

TrialData generate_trial(const Scenario& sc);

// Writes <stem>_samples.csv (y, x_1..x_n, z_1..z_n per row) and
// <stem>_beta.csv (j, beta_star), 17 significant digits.
void export_trial_data(const TrialData& data, const std::string& stem);

}  // namespace ncvx
