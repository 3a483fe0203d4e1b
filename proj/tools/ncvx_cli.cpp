// Command-line harness: statistical-consistency sweeps, decomposition
// comparisons and single traced solves on synthetic corrupted regression.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "ncvx/csv_io.hpp"
#include "ncvx/experiment.hpp"
#include "ncvx/theory.hpp"

namespace fs = std::filesystem;
using namespace ncvx;

namespace {

struct Options {
    std::vector<long> dims;
    std::vector<double> alphas;
    int trials = 100;
    std::string corruption = "additive";
    double sigma_w = 0.2;
    double vartheta = 0.2;
    double sigma_e = 0.1;
    std::vector<std::string> regs;
    std::vector<std::string> variants;
    std::uint64_t seed = 2024;
    std::string out;
    std::optional<int> fixed_iters;
    int threads = 1;
    std::optional<double> lambda;
    int max_iter = 2000;
    double tol = 1e-9;
    std::string step = "backtrack";
    bool no_timing = false;
    bool fix_signal = false;
    std::optional<double> gamma1;
    double q = 1.0;
};

const std::map<std::string, CorruptionKind> kCorruptions{
    {"none", CorruptionKind::None},
    {"additive", CorruptionKind::Additive},
    {"missing", CorruptionKind::Missing}};

void add_common(CLI::App* cmd, Options& o, bool sweep) {
    cmd->add_option("--n", o.dims, "Dimension(s) n")->capture_default_str();
    cmd->add_option("--alpha", o.alphas, "Sample-size factor(s): m = ceil(alpha log n)")
        ->capture_default_str();
    cmd->add_option("--corruption", o.corruption, "none | additive | missing")
        ->check(CLI::IsMember({"none", "additive", "missing"}))
        ->capture_default_str();
    cmd->add_option("--sigma-w", o.sigma_w, "Std of additive noise W")->capture_default_str();
    cmd->add_option("--vartheta", o.vartheta, "Missing-entry probability")->capture_default_str();
    cmd->add_option("--sigma-e", o.sigma_e, "Std of response noise")->capture_default_str();
    cmd->add_option("--reg", o.regs, "lasso | scad | mcp")
        ->check(CLI::IsMember({"lasso", "scad", "mcp"}))
        ->capture_default_str();
    cmd->add_option("--variant", o.variants, "natural | simple-l1")
        ->check(CLI::IsMember({"natural", "simple-l1"}))
        ->capture_default_str();
    cmd->add_option("--seed", o.seed, "Base seed")->capture_default_str();
    cmd->add_option("--fixed-iters", o.fixed_iters, "Run exactly this many iterations");
    cmd->add_option("--lambda", o.lambda, "Override lambda = sqrt(log n / m)");
    cmd->add_option("--max-iter", o.max_iter, "Iteration cap")->capture_default_str();
    cmd->add_option("--tol", o.tol, "Relative step tolerance")->capture_default_str();
    cmd->add_option("--step", o.step, "fixed (v = 2) | backtrack (start at 2, double on model failure)")
        ->check(CLI::IsMember({"fixed", "backtrack"}))
        ->capture_default_str();
    if (sweep) {
        cmd->add_option("--trials", o.trials, "Trials per cell")->capture_default_str();
        cmd->add_option("--threads", o.threads, "Worker threads")->capture_default_str();
        cmd->add_flag("--no-timing", o.no_timing, "Write 0 for wall_time_ms (byte-stable output)");
        cmd->add_flag("--fix-signal", o.fix_signal, "Reuse one beta* across trials of a cell");
        cmd->add_option("--out", o.out, "Output directory")->required();
    } else {
        cmd->add_option("--out", o.out, "Trace CSV path")->required();
        cmd->add_option("--gamma1", o.gamma1, "RSC constant for a recovery-bound report");
        cmd->add_option("--q", o.q, "l_q exponent for the recovery-bound report")->capture_default_str();
    }
}

ExperimentPlan plan_from(const Options& o) {
    ExperimentPlan p;
    p.dims.assign(o.dims.begin(), o.dims.end());
    p.alphas = o.alphas;
    p.families.clear();
    for (const auto& r : o.regs) p.families.push_back(parse_family(r));
    p.variants.clear();
    for (const auto& v : o.variants) p.variants.push_back(parse_variant(v));
    p.corruption = kCorruptions.at(o.corruption);
    p.sigma_w = o.sigma_w;
    p.vartheta = o.vartheta;
    p.sigma_e = o.sigma_e;
    p.trials = o.trials;
    p.seed = o.seed;
    p.fix_signal = o.fix_signal;
    p.fixed_iters = o.fixed_iters;
    p.max_iter = o.max_iter;
    p.tol_step = o.tol;
    p.step_rule = o.step == "fixed" ? StepRule::Fixed : StepRule::Backtrack;
    p.lambda_override = o.lambda;
    p.threads = o.threads;
    p.record_timing = !o.no_timing;
    return p;
}

void run_sweep(const Options& o, bool traces) {
    ExperimentPlan plan = plan_from(o);
    plan.record_traces = traces;
    const fs::path dir(o.out);
    fs::create_directories(dir);
    write_manifest(plan, (dir / "manifest.json").string());
    const auto results = run_experiment(plan);
    emit_csv(results, (dir / "raw.csv").string());
    const auto rows = aggregate(results);
    emit_csv(rows, (dir / "aggregate.csv").string());
    if (traces) {
        fs::create_directories(dir / "traces");
        for (const auto& t : mean_traces(results)) {
            const std::string name = "trace_n" + std::to_string(t.n) + "_m" + std::to_string(t.m) +
                                     "_" + std::string(to_string(t.family)) + "_" +
                                     std::string(to_string(t.variant)) + ".csv";
            SolverTrace st;
            st.objective_values = t.objective;
            emit_convergence_trace(st, (dir / "traces" / name).string(), &t.rel_error);
        }
    }
    write_aggregate_csv(std::cout, rows);
}

void run_single(const Options& o) {
    const auto n = static_cast<Eigen::Index>(o.dims.front());
    const Eigen::Index m = sample_size(n, o.alphas.front());
    const ExperimentPlan plan = plan_from(o);

    Scenario sc;
    sc.n = n;
    sc.m = m;
    sc.sigma_e = o.sigma_e;
    if (plan.corruption == CorruptionKind::Additive)
        sc.corruption = AdditiveNoise{Matrix::Identity(n, n) * (o.sigma_w * o.sigma_w)};
    else if (plan.corruption == CorruptionKind::Missing)
        sc.corruption = MissingData{o.vartheta};
    sc.seed = o.seed;
    const TrialData data = generate_trial(sc);
    const QuadraticLoss loss = surrogate_for(sc.corruption, data.Z, data.y);

    const double lambda = o.lambda.value_or(default_lambda(n, m));
    const Decomposition d(Regularizer::make(plan.families.front(), lambda), plan.variants.front());
    SolverConfig cfg;
    cfg.v = estimate_step_v(Matrix::Identity(1, 1), d);
    cfg.r = feasible_radius(d, data.beta_star);
    cfg.max_iter = o.fixed_iters.value_or(o.max_iter);
    cfg.tol_step = o.fixed_iters ? 0.0 : o.tol;
    cfg.backtrack = plan.step_rule == StepRule::Backtrack;

    std::vector<double> rel;
    const double star = data.beta_star.norm();
    const auto sol = solve(loss, d, cfg, Vector::Zero(n), [&](int, const Vector& b) {
        rel.push_back((b - data.beta_star).norm() / star);
    });
    emit_convergence_trace(sol.trace, o.out, &rel);

    std::cout << "n=" << n << " m=" << m << " lambda=" << format_sig(lambda) << " r="
              << format_sig(cfg.r) << " v=" << format_sig(sol.trace.final_v) << '\n'
              << "rel_error=" << format_sig(rel.back())
              << " iterations=" << sol.trace.iterations_run
              << " termination=" << to_string(sol.trace.termination)
              << " objective=" << format_sig(sol.trace.objective_values.back())
              << " stationarity=" << format_sig(stationarity_residual(loss, d, cfg.r, sol.beta, sol.trace.final_v))
              << '\n';
    if (o.gamma1) {
        TheoryConstants c;
        c.gamma[0] = *o.gamma1;
        c.q = o.q;
        c.R_q = lq_norm_q(data.beta_star, o.q);
        const auto b = theorem1_bounds(c, d.mu1(), d.mu2(), lambda, d.regularizer().L());
        const double err2 = (sol.beta - data.beta_star).squaredNorm();
        std::cout << "l2_sq_error=" << format_sig(err2) << " l2_sq_bound=" << format_sig(b.l2_sq)
                  << " within_bound=" << (err2 <= b.l2_sq ? "yes" : "no") << '\n';
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Sparse recovery with nonconvex regularized M-estimators"};
    app.require_subcommand(1);

    Options cons;
    cons.dims = {256, 512, 1024};
    cons.alphas = {10, 20, 40, 80};
    cons.regs = {"lasso", "scad", "mcp"};
    cons.variants = {"simple-l1"};
    auto* c1 = app.add_subcommand("consistency", "Relative error vs rescaled sample size");
    add_common(c1, cons, true);

    Options cmp;
    cmp.dims = {1024};
    cmp.alphas = {10, 30, 80};
    cmp.regs = {"scad", "mcp"};
    cmp.variants = {"natural", "simple-l1"};
    cmp.fixed_iters = 800;
    auto* c2 = app.add_subcommand("compare-decomp", "Natural vs simple-l1 decompositions");
    add_common(c2, cmp, true);

    Options one;
    one.dims = {256};
    one.alphas = {30};
    one.regs = {"scad"};
    one.variants = {"simple-l1"};
    auto* c3 = app.add_subcommand("single", "One traced solve");
    add_common(c3, one, false);

    CLI11_PARSE(app, argc, argv);
    try {
        if (c1->parsed()) run_sweep(cons, false);
        else if (c2->parsed()) run_sweep(cmp, true);
        else run_single(one);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
