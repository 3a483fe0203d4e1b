#include "ncvx/csv_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace ncvx {

namespace {

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::string cell;
    std::istringstream ss(line);
    while (std::getline(ss, cell, ',')) out.push_back(cell);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double to_double(const std::string& s, int line) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw Error("csv line " + std::to_string(line) + ": bad number '" + s + "'");
    return v;
}

long long to_int(const std::string& s, int line) {
    long long v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size())
        throw Error("csv line " + std::to_string(line) + ": bad integer '" + s + "'");
    return v;
}

template <class Writer>
void write_file(const std::string& path, Writer&& writer) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open '" + path + "' for writing");
    writer(out);
    out.flush();
    if (!out) throw Error("write failed for '" + path + "'");
}

}  // namespace

std::string format_sig(double x, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    return buf;
}

void write_raw_csv(std::ostream& out, const std::vector<TrialResult>& rows) {
    out << kRawHeader << '\n';
    for (const auto& r : rows) {
        out << r.n << ',' << r.m << ',' << r.trial << ',' << to_string(r.family) << ','
            << to_string(r.variant) << ',' << format_sig(r.rel_error) << ',' << r.iterations << ','
            << format_sig(r.final_objective) << ',' << format_sig(r.wall_time_ms) << '\n';
    }
}

std::vector<TrialResult> read_raw_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != kRawHeader) throw Error("raw csv: unexpected header");
    std::vector<TrialResult> rows;
    int lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        const auto f = split(line);
        if (f.size() != 9)
            throw Error("raw csv line " + std::to_string(lineno) + ": expected 9 fields");
        TrialResult r;
        r.n = static_cast<Eigen::Index>(to_int(f[0], lineno));
        r.m = static_cast<Eigen::Index>(to_int(f[1], lineno));
        r.trial = static_cast<int>(to_int(f[2], lineno));
        r.family = parse_family(f[3]);
        r.variant = parse_variant(f[4]);
        r.rel_error = to_double(f[5], lineno);
        r.iterations = static_cast<int>(to_int(f[6], lineno));
        r.final_objective = to_double(f[7], lineno);
        r.wall_time_ms = to_double(f[8], lineno);
        rows.push_back(std::move(r));
    }
    return rows;
}

void write_aggregate_csv(std::ostream& out, const std::vector<AggregateRow>& rows) {
    out << kAggregateHeader << '\n';
    for (const auto& r : rows) {
        out << r.n << ',' << r.m << ',' << to_string(r.family) << ',' << to_string(r.variant) << ','
            << format_sig(r.mean_rel_error) << ',' << format_sig(r.sd_rel_error) << ','
            << format_sig(r.mean_iterations) << ',' << r.trials << '\n';
    }
}

void write_trace_csv(std::ostream& out, const std::vector<double>& objective,
                     const std::vector<double>* rel_error) {
    if (rel_error && rel_error->size() != objective.size())
        throw Error("trace csv: objective and rel_error lengths differ");
    out << (rel_error ? "iter,objective,rel_error" : "iter,objective") << '\n';
    for (std::size_t t = 0; t < objective.size(); ++t) {
        out << t << ',' << format_sig(objective[t]);
        if (rel_error) out << ',' << format_sig((*rel_error)[t]);
        out << '\n';
    }
}

void emit_csv(const std::vector<TrialResult>& rows, const std::string& path) {
    write_file(path, [&](std::ostream& out) { write_raw_csv(out, rows); });
}

void emit_csv(const std::vector<AggregateRow>& rows, const std::string& path) {
    write_file(path, [&](std::ostream& out) { write_aggregate_csv(out, rows); });
}

std::vector<TrialResult> parse_raw_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open '" + path + "' for reading");
    return read_raw_csv(in);
}

void emit_convergence_trace(const SolverTrace& trace, const std::string& path,
                            const std::vector<double>* rel_error) {
    write_file(path, [&](std::ostream& out) { write_trace_csv(out, trace.objective_values, rel_error); });
}

}  // namespace ncvx
