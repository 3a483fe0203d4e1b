#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ncvx/regularizer.hpp"
#include "ncvx/solver.hpp"
#include "ncvx/synthetic.hpp"

namespace ncvx {

enum class CorruptionKind { None, Additive, Missing };

// Fixed: v = 2 lambda_max(Sigma_x) throughout. Backtrack: start there and
// double v when the local quadratic model fails (small m makes v = 2 too short
// a leash for the indefinite surrogate, and the fixed iteration can cycle).
enum class StepRule { Fixed, Backtrack };

struct ExperimentPlan {
    std::vector<Eigen::Index> dims{256, 512, 1024};
    std::vector<double> alphas{10, 20, 40, 80};  // m = ceil(alpha log n)
    std::vector<Family> families{Family::Lasso, Family::SCAD, Family::MCP};
    std::vector<Variant> variants{Variant::SimpleL1};
    CorruptionKind corruption = CorruptionKind::Additive;
    double sigma_w = 0.2;   // W rows ~ N(0, sigma_w^2 I)
    double vartheta = 0.2;  // missingness probability
    double sigma_e = 0.1;
    int trials = 100;
    std::uint64_t seed = 2024;
    bool fix_signal = false;  // one beta* for all trials of a cell
    std::optional<int> fixed_iters;  // run exactly this many iterations
    int max_iter = 2000;
    double tol_step = 1e-9;
    StepRule step_rule = StepRule::Backtrack;
    std::optional<double> lambda_override;
    int threads = 1;
    bool record_timing = true;
    bool record_traces = false;  // keep per-iteration objective / rel_error

    void validate() const;
};

struct TrialResult {
    Eigen::Index n = 0;
    Eigen::Index m = 0;
    int trial = 0;
    Family family = Family::Lasso;
    Variant variant = Variant::SimpleL1;
    double rel_error = 0.0;
    int iterations = 0;
    double final_objective = 0.0;
    double wall_time_ms = 0.0;
    double final_v = 0.0;  // not part of the CSV schema
    // Filled only when the plan records traces.
    std::vector<double> objective_trace;
    std::vector<double> rel_error_trace;
};

struct AggregateRow {
    Eigen::Index n = 0;
    Eigen::Index m = 0;
    Family family = Family::Lasso;
    Variant variant = Variant::SimpleL1;
    double mean_rel_error = 0.0;
    double sd_rel_error = 0.0;  // population standard deviation
    double mean_iterations = 0.0;
    int trials = 0;
};

/// Per-cell constants as applied by run_experiment.
struct CellParameters {
    Eigen::Index n = 0;
    double alpha = 0.0;
    Eigen::Index m = 0;
    double lambda = 0.0;
    struct Fit {
        Family family;
        Variant variant;
        double r;
        double v;
    };
    std::vector<Fit> fits;
};

Eigen::Index sample_size(Eigen::Index n, double alpha);
double default_lambda(Eigen::Index n, Eigen::Index m);
// r = 1.1 H_lambda(beta*) / lambda; equals 1.1 ||beta*||_1 when h = lambda |.|.
double feasible_radius(const Decomposition& d, const Vector& beta_star);

std::vector<CellParameters> cell_parameters(const ExperimentPlan& plan);

// Results come back sorted by (n, m, family, variant, trial) whatever the
// thread count; each trial's data depends only on (seed, n, m, trial).
std::vector<TrialResult> run_experiment(const ExperimentPlan& plan);

std::vector<AggregateRow> aggregate(const std::vector<TrialResult>& results);

struct MeanTrace {
    Eigen::Index n = 0;
    Eigen::Index m = 0;
    Family family = Family::Lasso;
    Variant variant = Variant::SimpleL1;
    std::vector<double> objective;
    std::vector<double> rel_error;
};
// Averages recorded traces per (n, m, family, variant); shorter traces are
// held at their final value.
std::vector<MeanTrace> mean_traces(const std::vector<TrialResult>& results);

// JSON run manifest: plan, derived lambda / r / v per cell, version, seed.
void write_manifest(const ExperimentPlan& plan, const std::string& path);

}  // namespace ncvx
