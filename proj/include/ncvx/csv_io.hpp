#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ncvx/experiment.hpp"
#include "ncvx/solver.hpp"

namespace ncvx {

inline constexpr const char* kRawHeader =
    "n,m,trial,family,variant,rel_error,iterations,final_objective,wall_time_ms";
inline constexpr const char* kAggregateHeader =
    "n,m,family,variant,mean_rel_error,sd_rel_error,mean_iterations,trials";

// printf("%.*g") with the given number of significant digits.
std::string format_sig(double x, int digits = 12);

void write_raw_csv(std::ostream& out, const std::vector<TrialResult>& rows);
std::vector<TrialResult> read_raw_csv(std::istream& in);
void write_aggregate_csv(std::ostream& out, const std::vector<AggregateRow>& rows);

// Columns iter,objective[,rel_error]; rel_error appears only when supplied.
void write_trace_csv(std::ostream& out, const std::vector<double>& objective,
                     const std::vector<double>* rel_error = nullptr);

void emit_csv(const std::vector<TrialResult>& rows, const std::string& path);
void emit_csv(const std::vector<AggregateRow>& rows, const std::string& path);
std::vector<TrialResult> parse_raw_csv(const std::string& path);
void emit_convergence_trace(const SolverTrace& trace, const std::string& path,
                            const std::vector<double>* rel_error = nullptr);

}  // namespace ncvx
