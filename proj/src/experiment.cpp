#include "ncvx/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <thread>
#include <tuple>

#include <json.hpp>

namespace ncvx {

namespace {

// Sigma_x = I in every generated design.
constexpr double kDesignLambdaMax = 1.0;

CorruptionModel corruption_for(const ExperimentPlan& plan, Eigen::Index n) {
    switch (plan.corruption) {
        case CorruptionKind::Additive: {
            const double s2 = plan.sigma_w * plan.sigma_w;
            return AdditiveNoise{Matrix::Identity(n, n) * s2};
        }
        case CorruptionKind::Missing:
            return MissingData{plan.vartheta};
        case CorruptionKind::None:
            break;
    }
    return NoCorruption{};
}

double step_parameter(const Decomposition& d) {
    return std::max(2.0 * kDesignLambdaMax, d.mu1() + 1e-6);
}

// Magnitudes 5 i^{-2}; H and ||.||_1 are invariant to the signs and order.
Vector sorted_signal(Eigen::Index n) {
    Vector b(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        const double k = static_cast<double>(i + 1);
        b[i] = 5.0 / (k * k);
    }
    return b;
}

struct Job {
    Eigen::Index n;
    Eigen::Index m;
    int trial;
};

auto sort_key(const TrialResult& r) {
    return std::make_tuple(r.n, r.m, static_cast<int>(r.family), static_cast<int>(r.variant), r.trial);
}

std::vector<TrialResult> run_job(const ExperimentPlan& plan, const Job& job) {
    Scenario sc;
    sc.n = job.n;
    sc.m = job.m;
    sc.sigma_e = plan.sigma_e;
    sc.corruption = corruption_for(plan, job.n);
    sc.seed = derive_seed(plan.seed, {static_cast<std::uint64_t>(job.n),
                                      static_cast<std::uint64_t>(job.m),
                                      static_cast<std::uint64_t>(job.trial)});
    if (plan.fix_signal)
        sc.signal_seed = derive_seed(plan.seed, {static_cast<std::uint64_t>(job.n), 0xb57aULL});

    const TrialData data = generate_trial(sc);
    const QuadraticLoss loss = surrogate_for(sc.corruption, data.Z, data.y);
    const double lambda = plan.lambda_override.value_or(default_lambda(job.n, job.m));
    const double star_norm = data.beta_star.norm();

    std::vector<TrialResult> out;
    for (Family fam : plan.families) {
        for (Variant var : plan.variants) {
            const Decomposition d(Regularizer::make(fam, lambda), var);
            SolverConfig cfg;
            cfg.v = step_parameter(d);
            cfg.r = feasible_radius(d, data.beta_star);
            cfg.backtrack = plan.step_rule == StepRule::Backtrack;
            if (plan.fixed_iters) {
                cfg.max_iter = *plan.fixed_iters;
                cfg.tol_step = 0.0;
            } else {
                cfg.max_iter = plan.max_iter;
                cfg.tol_step = plan.tol_step;
            }

            TrialResult res;
            res.n = job.n;
            res.m = job.m;
            res.trial = job.trial;
            res.family = fam;
            res.variant = var;
            IterateObserver observer;
            if (plan.record_traces) {
                observer = [&](int, const Vector& beta) {
                    res.rel_error_trace.push_back((beta - data.beta_star).norm() / star_norm);
                };
            }

            const auto t0 = std::chrono::steady_clock::now();
            SolveResult sol = solve(loss, d, cfg, Vector::Zero(job.n), observer);
            const auto t1 = std::chrono::steady_clock::now();

            res.rel_error = (sol.beta - data.beta_star).norm() / star_norm;
            res.iterations = sol.trace.iterations_run;
            res.final_objective = sol.trace.objective_values.back();
            res.final_v = sol.trace.final_v;
            if (plan.record_timing)
                res.wall_time_ms = std::chrono::duration<double, std::milli>(t1 - t0).count();
            if (plan.record_traces) res.objective_trace = std::move(sol.trace.objective_values);
            out.push_back(std::move(res));
        }
    }
    return out;
}

}  // namespace

void ExperimentPlan::validate() const {
    if (dims.empty() || alphas.empty() || families.empty() || variants.empty())
        throw Error("experiment plan: dims, alphas, families and variants must be nonempty");
    for (auto n : dims)
        if (n < 2) throw Error("experiment plan: every n must be >= 2");
    for (double a : alphas)
        if (!(a > 0.0)) throw Error("experiment plan: every alpha must be positive");
    if (trials < 1) throw Error("experiment plan: trials must be >= 1");
    if (threads < 1) throw Error("experiment plan: threads must be >= 1");
    if (fixed_iters && *fixed_iters < 1) throw Error("experiment plan: fixed_iters must be >= 1");
    if (max_iter < 1) throw Error("experiment plan: max_iter must be >= 1");
    if (corruption == CorruptionKind::Missing && !(vartheta >= 0.0 && vartheta < 1.0))
        throw Error("experiment plan: vartheta must lie in [0, 1)");
    if (!(sigma_w >= 0.0) || !(sigma_e >= 0.0))
        throw Error("experiment plan: noise levels must be >= 0");
    if (lambda_override && !(*lambda_override > 0.0))
        throw Error("experiment plan: lambda must be positive");
}

Eigen::Index sample_size(Eigen::Index n, double alpha) {
    return static_cast<Eigen::Index>(std::ceil(alpha * std::log(static_cast<double>(n))));
}

double default_lambda(Eigen::Index n, Eigen::Index m) {
    return std::sqrt(std::log(static_cast<double>(n)) / static_cast<double>(m));
}

double feasible_radius(const Decomposition& d, const Vector& beta_star) {
    if (d.h_is_l1()) return 1.1 * beta_star.lpNorm<1>();
    return 1.1 * d.H(beta_star) / d.regularizer().lambda();
}

std::vector<CellParameters> cell_parameters(const ExperimentPlan& plan) {
    std::vector<CellParameters> cells;
    for (auto n : plan.dims) {
        const Vector star = sorted_signal(n);
        for (double alpha : plan.alphas) {
            CellParameters c;
            c.n = n;
            c.alpha = alpha;
            c.m = sample_size(n, alpha);
            c.lambda = plan.lambda_override.value_or(default_lambda(n, c.m));
            for (Family fam : plan.families) {
                for (Variant var : plan.variants) {
                    const Decomposition d(Regularizer::make(fam, c.lambda), var);
                    c.fits.push_back({fam, var, feasible_radius(d, star), step_parameter(d)});
                }
            }
            cells.push_back(std::move(c));
        }
    }
    return cells;
}

std::vector<TrialResult> run_experiment(const ExperimentPlan& plan) {
    plan.validate();
    std::vector<Job> jobs;
    for (auto n : plan.dims)
        for (double alpha : plan.alphas)
            for (int t = 0; t < plan.trials; ++t) jobs.push_back({n, sample_size(n, alpha), t});

    std::vector<std::vector<TrialResult>> slots(jobs.size());
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};
    auto worker = [&] {
        for (std::size_t i = next++; i < jobs.size() && !failed; i = next++) {
            try {
                slots[i] = run_job(plan, jobs[i]);
            } catch (...) {
                if (!failed.exchange(true)) failure = std::current_exception();
            }
        }
    };

    const int nthreads = std::min<int>(plan.threads, static_cast<int>(jobs.size()));
    if (nthreads <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (int k = 0; k < nthreads; ++k) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);

    std::vector<TrialResult> results;
    for (auto& s : slots)
        for (auto& r : s) results.push_back(std::move(r));
    std::stable_sort(results.begin(), results.end(),
                     [](const TrialResult& a, const TrialResult& b) { return sort_key(a) < sort_key(b); });
    return results;
}

std::vector<AggregateRow> aggregate(const std::vector<TrialResult>& results) {
    if (results.empty()) throw Error("aggregate: no results");
    using Key = std::tuple<Eigen::Index, Eigen::Index, int, int>;
    std::map<Key, std::vector<const TrialResult*>> groups;
    for (const auto& r : results)
        groups[{r.n, r.m, static_cast<int>(r.family), static_cast<int>(r.variant)}].push_back(&r);

    std::vector<AggregateRow> rows;
    for (const auto& [key, members] : groups) {
        AggregateRow row;
        row.n = std::get<0>(key);
        row.m = std::get<1>(key);
        row.family = members.front()->family;
        row.variant = members.front()->variant;
        row.trials = static_cast<int>(members.size());
        double sum = 0.0;
        double iters = 0.0;
        for (const auto* r : members) {
            sum += r->rel_error;
            iters += r->iterations;
        }
        const double k = static_cast<double>(members.size());
        row.mean_rel_error = sum / k;
        row.mean_iterations = iters / k;
        double ss = 0.0;
        for (const auto* r : members) ss += (r->rel_error - row.mean_rel_error) * (r->rel_error - row.mean_rel_error);
        row.sd_rel_error = std::sqrt(ss / k);
        rows.push_back(row);
    }
    return rows;
}

std::vector<MeanTrace> mean_traces(const std::vector<TrialResult>& results) {
    using Key = std::tuple<Eigen::Index, Eigen::Index, int, int>;
    std::map<Key, std::vector<const TrialResult*>> groups;
    for (const auto& r : results)
        if (!r.objective_trace.empty())
            groups[{r.n, r.m, static_cast<int>(r.family), static_cast<int>(r.variant)}].push_back(&r);

    auto held_mean = [](const std::vector<const TrialResult*>& members, auto field) {
        std::size_t len = 0;
        for (const auto* r : members) len = std::max(len, (r->*field).size());
        std::vector<double> mean(len, 0.0);
        for (const auto* r : members) {
            const auto& v = r->*field;
            for (std::size_t t = 0; t < len; ++t) mean[t] += v[std::min(t, v.size() - 1)];
        }
        for (double& x : mean) x /= static_cast<double>(members.size());
        return mean;
    };

    std::vector<MeanTrace> out;
    for (const auto& [key, members] : groups) {
        MeanTrace tr;
        tr.n = std::get<0>(key);
        tr.m = std::get<1>(key);
        tr.family = members.front()->family;
        tr.variant = members.front()->variant;
        tr.objective = held_mean(members, &TrialResult::objective_trace);
        tr.rel_error = held_mean(members, &TrialResult::rel_error_trace);
        out.push_back(std::move(tr));
    }
    return out;
}

void write_manifest(const ExperimentPlan& plan, const std::string& path) {
    using nlohmann::ordered_json;
    ordered_json j;
    j["library"] = "ncvx";
    j["version"] = kVersion;
    j["seed"] = plan.seed;
    ordered_json p;
    p["dims"] = plan.dims;
    p["alphas"] = plan.alphas;
    for (Family f : plan.families) p["families"].push_back(std::string(to_string(f)));
    for (Variant v : plan.variants) p["variants"].push_back(std::string(to_string(v)));
    const char* corr[] = {"none", "additive", "missing"};
    p["corruption"] = corr[static_cast<int>(plan.corruption)];
    p["sigma_w"] = plan.sigma_w;
    p["vartheta"] = plan.vartheta;
    p["sigma_e"] = plan.sigma_e;
    p["trials"] = plan.trials;
    p["fix_signal"] = plan.fix_signal;
    p["fixed_iters"] = plan.fixed_iters ? ordered_json(*plan.fixed_iters) : ordered_json(nullptr);
    p["max_iter"] = plan.max_iter;
    p["tol_step"] = plan.tol_step;
    p["step_rule"] = plan.step_rule == StepRule::Fixed ? "fixed" : "backtrack";
    p["lambda_override"] =
        plan.lambda_override ? ordered_json(*plan.lambda_override) : ordered_json(nullptr);
    p["initial_point"] = "zero";
    j["plan"] = p;
    for (const auto& c : cell_parameters(plan)) {
        ordered_json cell;
        cell["n"] = c.n;
        cell["alpha"] = c.alpha;
        cell["m"] = c.m;
        cell["lambda"] = c.lambda;
        for (const auto& f : c.fits) {
            cell["fits"].push_back({{"family", std::string(to_string(f.family))},
                                    {"variant", std::string(to_string(f.variant))},
                                    {"r", f.r},
                                    {"v", f.v}});
        }
        j["cells"].push_back(cell);
    }
    std::ofstream out(path);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    out << j.dump(2) << '\n';
    if (!out) throw Error("write failed for '" + path + "'");
}

}  // namespace ncvx
