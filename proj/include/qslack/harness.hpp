// Copyright 2026 The qslack Authors
//
//    Licensed under the Apache License, Version 2.0 (the "License");
//    you may not use this file except in compliance with the License.
//    You may obtain a copy of the License at
//
//        http://www.apache.org/licenses/LICENSE-2.0
//
//    Unless required by applicable law or agreed to in writing, software
//    distributed under the License is distributed on an "AS IS" BASIS,
//    WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
//    See the License for the specific language governing permissions and
//    limitations under the License.

#ifndef QSLACK_HARNESS_HPP_INCLUDED
#define QSLACK_HARNESS_HPP_INCLUDED

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <thread>
#include <tuple>
#include <type_traits>
#include <vector>

#include "qslack/constraint.hpp"
#include "qslack/instance_io.hpp"
#include "qslack/qubo.hpp"
#include "qslack/tabu.hpp"

namespace qslack {

/// One (instance, rho, M) cell of a sweep.
struct SweepRecord {
    std::string instance;
    double density_percent = 0.0;
    std::size_t size = 0;  // original decision variables
    Coeff rho = 1;
    Coeff penalty = 1;     // base M; the scaled constraint carries rho^2 * M
    std::size_t slack_count = 0;
    std::size_t augmented_dimension = 0;
    std::size_t augmented_nonzeros = 0;
    std::size_t slack_linear_terms = 0;
    std::size_t slack_quadratic_terms = 0;
    /// Original-sense objective of the best feasible recovery; empty if none was found.
    std::optional<Coeff> best_objective;
    Coeff best_lhs = 0;    // first inequality's a . x for the reported assignment
    Coeff bound = 0;       // first inequality's original b
    bool feasible = false;
    double wall_seconds = 0.0;
    std::uint64_t iterations = 0;
    std::vector<TracePoint> trace;  // augmented objective, internal sense
    Sense sense = Sense::minimize;
    std::string trace_file;
    std::string error;     // non-empty when the cell failed
};

namespace detail {

// Picks the reported assignment: the solver's best if its recovery is feasible
// for the original constraints, else the best feasible elite member, else the
// (infeasible) best so that its lhs is still on record.
inline void fill_outcome(SweepRecord& rec, const InstanceBundle& bundle, const AugmentedQubo& aug,
                         const SolveResult& res) {
    const auto& p = bundle.problem;
    std::vector<const BinaryAssignment*> candidates{&res.best};
    for (const auto& e : res.elite) candidates.push_back(&e.x);
    for (const auto* cand : candidates) {
        const auto x = recover(aug.map, *cand);
        if (!is_feasible(p, x)) continue;
        rec.feasible = true;
        rec.best_objective = user_objective(p.objective, evaluate(p.objective, x));
        rec.best_lhs = p.inequalities.empty() ? 0 : check_feasible(p.inequalities.front(), x).lhs;
        return;
    }
    const auto x = recover(aug.map, res.best);
    rec.feasible = false;
    rec.best_objective.reset();
    rec.best_lhs = p.inequalities.empty() ? 0 : check_feasible(p.inequalities.front(), x).lhs;
}

}  // namespace detail

/// Transforms, solves and re-checks one cell. Errors are recorded, not thrown.
inline SweepRecord run_cell(const InstanceBundle& bundle, Coeff rho, Coeff penalty, const SolverParams& params) {
    SweepRecord rec;
    rec.instance = bundle.name;
    rec.density_percent = bundle.density_percent;
    rec.size = bundle.problem.dimension();
    rec.rho = rho;
    rec.penalty = penalty;
    rec.sense = bundle.problem.objective.sense();
    if (!bundle.problem.inequalities.empty()) rec.bound = bundle.problem.inequalities.front().bound;
    const auto start = std::chrono::steady_clock::now();
    try {
        const AugmentedQubo aug = transform(bundle.problem, TransformConfig{rho, penalty, {}});
        rec.slack_count = aug.slack_count();
        rec.augmented_dimension = aug.qubo.dimension();
        rec.augmented_nonzeros = aug.qubo.num_entries();
        const auto terms = count_slack_terms(aug);
        rec.slack_linear_terms = terms.linear;
        rec.slack_quadratic_terms = terms.quadratic;
        const SolveResult res = solve(aug.qubo, params);
        rec.iterations = res.iterations;
        rec.trace = res.trace;
        detail::fill_outcome(rec, bundle, aug, res);
    } catch (const std::exception& e) {
        rec.error = e.what();
        rec.feasible = false;
        rec.best_objective.reset();
    }
    rec.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rec;
}

// Runs every (rho, M) cell, rho-major, on a pool of `workers` threads. Each cell
// uses params.seed, so records do not depend on the worker count. An empty
// penalty list means M = default_penalty(objective).
inline std::vector<SweepRecord> rho_sweep(const InstanceBundle& bundle, const std::vector<Coeff>& rhos,
                                          std::vector<Coeff> penalties, const SolverParams& params,
                                          std::size_t workers = 1) {
    if (rhos.empty()) throw std::invalid_argument("rho_sweep: rho list is empty");
    for (auto r : rhos) {
        if (r < 1) throw std::invalid_argument("rho_sweep: every rho must be >= 1");
    }
    params.validate();
    if (penalties.empty()) penalties.push_back(default_penalty(bundle.problem.objective));

    std::vector<std::pair<Coeff, Coeff>> cells;
    for (auto r : rhos) {
        for (auto m : penalties) cells.emplace_back(r, m);
    }
    std::vector<SweepRecord> records(cells.size());
    std::atomic<std::size_t> next{0};
    auto work = [&] {
        for (std::size_t k; (k = next.fetch_add(1)) < cells.size();) {
            records[k] = run_cell(bundle, cells[k].first, cells[k].second, params);
        }
    };
    workers = std::clamp<std::size_t>(workers, 1, cells.size());
    if (workers == 1) {
        work();
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < workers; ++w) pool.emplace_back(work);
    }
    return records;
}

/// Primes up to b, with rho = 1 in front so the base problem is always covered.
inline std::vector<Coeff> prime_sweep_rhos(Coeff b) {
    std::vector<Coeff> out{1};
    for (auto p : prime_rhos(b)) out.push_back(p);
    return out;
}

struct DeviationRow {
    std::string instance;
    double density_percent = 0.0;
    std::size_t size = 0;
    Coeff rho = 1;
    Coeff penalty = 1;
    Coeff objective = 0;       // original sense
    Coeff instance_best = 0;   // best over the instance's records
    double deviation_percent = 0.0;
};

struct DeviationSummary {
    double density_percent = 0.0;
    Coeff rho = 1;
    std::size_t count = 0;
    double mean_deviation = 0.0;
    double max_deviation = 0.0;
};

struct DeviationStats {
    std::vector<DeviationRow> rows;
    std::vector<DeviationSummary> by_density_rho;
};

// Percent deviation of every feasible record from the best objective found for
// its instance: 100 * |best - value| / |best|, best being the maximum for
// maximization problems and the minimum otherwise. A zero best is replaced by 1
// in the denominator. Records without a feasible solution are skipped.
inline DeviationStats deviation_stats(const std::vector<SweepRecord>& records) {
    if (records.empty()) throw std::invalid_argument("deviation_stats: no records");
    const Sense sense = records.front().sense;
    for (const auto& r : records) {
        if (r.sense != sense) throw std::invalid_argument("deviation_stats: records mix senses");
    }
    auto better = [&](Coeff a, Coeff b) { return sense == Sense::maximize ? a > b : a < b; };

    std::map<std::string, Coeff> best;
    for (const auto& r : records) {
        if (!r.best_objective) continue;
        auto it = best.find(r.instance);
        if (it == best.end()) best.emplace(r.instance, *r.best_objective);
        else if (better(*r.best_objective, it->second)) it->second = *r.best_objective;
    }
    if (best.empty()) throw std::invalid_argument("deviation_stats: no record has a feasible solution");

    DeviationStats stats;
    std::map<std::tuple<double, Coeff>, DeviationSummary> groups;
    for (const auto& r : records) {
        if (!r.best_objective) continue;
        const Coeff top = best.at(r.instance);
        const double denom = top == 0 ? 1.0 : std::abs(static_cast<double>(top));
        const double dev = 100.0 * std::abs(static_cast<double>(top) - static_cast<double>(*r.best_objective)) / denom;
        stats.rows.push_back({r.instance, r.density_percent, r.size, r.rho, r.penalty, *r.best_objective, top, dev});
        auto& g = groups[{r.density_percent, r.rho}];
        g.density_percent = r.density_percent;
        g.rho = r.rho;
        g.mean_deviation += dev;
        g.max_deviation = std::max(g.max_deviation, dev);
        ++g.count;
    }
    for (auto& [key, g] : groups) {
        g.mean_deviation /= static_cast<double>(g.count);
        stats.by_density_rho.push_back(g);
    }
    return stats;
}

enum class WinGrouping { size_penalty_rho, density_rho };

struct WinCount {
    std::size_t size = 0;         // size_penalty_rho grouping only
    Coeff penalty = 0;            // size_penalty_rho grouping only
    double density_percent = 0.0; // density_rho grouping only
    Coeff rho = 1;
    std::size_t wins = 0;         // instances where this cell reached the instance best
    std::size_t instances = 0;
};

/// Counts, per group, how many instances a cell matched the instance's best objective.
inline std::vector<WinCount> win_counts(const std::vector<SweepRecord>& records, WinGrouping grouping) {
    const auto stats = deviation_stats(records);
    std::map<std::tuple<std::size_t, Coeff, double, Coeff>, WinCount> groups;
    for (const auto& r : records) {
        WinCount key;
        key.rho = r.rho;
        if (grouping == WinGrouping::size_penalty_rho) {
            key.size = r.size;
            key.penalty = r.penalty;
        } else {
            key.density_percent = r.density_percent;
        }
        auto& g = groups.try_emplace({key.size, key.penalty, key.density_percent, key.rho}, key).first->second;
        ++g.instances;
    }
    for (const auto& row : stats.rows) {
        const std::tuple<std::size_t, Coeff, double, Coeff> k =
            grouping == WinGrouping::size_penalty_rho ? std::tuple{row.size, row.penalty, 0.0, row.rho}
                                                      : std::tuple{std::size_t{0}, Coeff{0}, row.density_percent, row.rho};
        if (row.objective == row.instance_best) ++groups.at(k).wins;
    }
    std::vector<WinCount> out;
    for (auto& [k, g] : groups) out.push_back(g);
    return out;
}

// ---------------------------------------------------------------------------
// CSV

namespace detail {

inline std::string csv_field(std::string_view s) {
    if (s.find_first_of(",\"\r\n") == std::string_view::npos) return std::string(s);
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    return out + '"';
}

inline std::string csv_number(double v) {
    std::ostringstream os;
    os.precision(10);
    os << v;
    return os.str();
}

template <class... Ts>
std::string csv_row(const Ts&... fields) {
    std::string out;
    bool first = true;
    auto put = [&](const std::string& f) {
        if (!first) out += ',';
        first = false;
        out += f;
    };
    (put(fields), ...);
    return out + '\n';
}

inline std::string to_field(const std::string& s) { return csv_field(s); }
inline std::string to_field(const char* s) { return csv_field(s); }
inline std::string to_field(double v) { return csv_number(v); }
inline std::string to_field(bool v) { return v ? "true" : "false"; }
template <class T>
    requires std::is_integral_v<T>
std::string to_field(T v) {
    return std::to_string(v);
}

/// Splits RFC 4180 text into rows of fields.
inline std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool quoted = false, any = false;
    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (quoted) {
            if (c == '"' && i + 1 < text.size() && text[i + 1] == '"') {
                field += '"';
                ++i;
            } else if (c == '"') {
                quoted = false;
            } else {
                field += c;
            }
            continue;
        }
        if (c == '"') {
            quoted = true;
            any = true;
        } else if (c == ',') {
            row.push_back(std::move(field));
            field.clear();
            any = true;
        } else if (c == '\n' || c == '\r') {
            if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
            if (any || !field.empty()) {
                row.push_back(std::move(field));
                rows.push_back(std::move(row));
            }
            row.clear();
            field.clear();
            any = false;
        } else {
            field += c;
            any = true;
        }
    }
    if (quoted) throw std::invalid_argument("csv: unterminated quoted field");
    if (any || !field.empty()) {
        row.push_back(std::move(field));
        rows.push_back(std::move(row));
    }
    return rows;
}

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    out << content;
    if (!out.flush()) throw std::runtime_error("failed writing '" + path + "'");
}

}  // namespace detail

inline constexpr std::string_view kRecordsHeader =
    "instance,density_percent,size,rho,penalty,slack_count,augmented_dimension,augmented_nonzeros,"
    "slack_linear_terms,slack_quadratic_terms,best_objective,best_lhs,bound,feasible,wall_seconds,"
    "iterations,sense,trace_file,error";

inline std::string records_csv(const std::vector<SweepRecord>& records) {
    using detail::to_field;
    std::string out = std::string(kRecordsHeader) + '\n';
    for (const auto& r : records) {
        out += detail::csv_row(
            to_field(r.instance), to_field(r.density_percent), to_field(r.size), to_field(r.rho),
            to_field(r.penalty), to_field(r.slack_count), to_field(r.augmented_dimension),
            to_field(r.augmented_nonzeros), to_field(r.slack_linear_terms), to_field(r.slack_quadratic_terms),
            r.best_objective ? to_field(*r.best_objective) : std::string(), to_field(r.best_lhs),
            to_field(r.bound), to_field(r.feasible), to_field(r.wall_seconds), to_field(r.iterations),
            to_field(r.sense == Sense::maximize ? "max" : "min"), to_field(r.trace_file), to_field(r.error));
    }
    return out;
}

/// Parses a records file written by records_csv (traces are not stored in it).
inline std::vector<SweepRecord> parse_records_csv(std::string_view text) {
    const auto rows = detail::parse_csv(text);
    if (rows.empty()) throw std::invalid_argument("records csv: missing header");
    std::string header;
    for (std::size_t i = 0; i < rows[0].size(); ++i) header += (i ? "," : "") + rows[0][i];
    if (header != kRecordsHeader) throw std::invalid_argument("records csv: unexpected header");
    std::vector<SweepRecord> out;
    for (std::size_t k = 1; k < rows.size(); ++k) {
        const auto& f = rows[k];
        if (f.size() != rows[0].size()) {
            throw std::invalid_argument("records csv: row " + std::to_string(k + 1) + " has " +
                                        std::to_string(f.size()) + " fields");
        }
        try {
            SweepRecord r;
            r.instance = f[0];
            r.density_percent = std::stod(f[1]);
            r.size = std::stoull(f[2]);
            r.rho = std::stoll(f[3]);
            r.penalty = std::stoll(f[4]);
            r.slack_count = std::stoull(f[5]);
            r.augmented_dimension = std::stoull(f[6]);
            r.augmented_nonzeros = std::stoull(f[7]);
            r.slack_linear_terms = std::stoull(f[8]);
            r.slack_quadratic_terms = std::stoull(f[9]);
            if (!f[10].empty()) r.best_objective = std::stoll(f[10]);
            r.best_lhs = std::stoll(f[11]);
            r.bound = std::stoll(f[12]);
            r.feasible = f[13] == "true";
            r.wall_seconds = std::stod(f[14]);
            r.iterations = std::stoull(f[15]);
            r.sense = f[16] == "max" ? Sense::maximize : Sense::minimize;
            r.trace_file = f[17];
            r.error = f[18];
            out.push_back(std::move(r));
        } catch (const std::logic_error&) {
            throw std::invalid_argument("records csv: malformed value in row " + std::to_string(k + 1));
        }
    }
    return out;
}

inline std::string deviation_csv(const DeviationStats& stats) {
    using detail::to_field;
    std::string out = "instance,density_percent,size,rho,penalty,objective,instance_best,deviation_percent\n";
    for (const auto& r : stats.rows) {
        out += detail::csv_row(to_field(r.instance), to_field(r.density_percent), to_field(r.size), to_field(r.rho),
                               to_field(r.penalty), to_field(r.objective), to_field(r.instance_best),
                               to_field(r.deviation_percent));
    }
    return out;
}

inline std::string deviation_summary_csv(const DeviationStats& stats) {
    using detail::to_field;
    std::string out = "density_percent,rho,count,mean_deviation_percent,max_deviation_percent\n";
    for (const auto& g : stats.by_density_rho) {
        out += detail::csv_row(to_field(g.density_percent), to_field(g.rho), to_field(g.count),
                               to_field(g.mean_deviation), to_field(g.max_deviation));
    }
    return out;
}

inline std::string win_counts_csv(const std::vector<WinCount>& wins, WinGrouping grouping) {
    using detail::to_field;
    std::string out = grouping == WinGrouping::size_penalty_rho ? "size,penalty,rho,wins,instances\n"
                                                                : "density_percent,rho,wins,instances\n";
    for (const auto& w : wins) {
        out += grouping == WinGrouping::size_penalty_rho
                   ? detail::csv_row(to_field(w.size), to_field(w.penalty), to_field(w.rho), to_field(w.wins),
                                     to_field(w.instances))
                   : detail::csv_row(to_field(w.density_percent), to_field(w.rho), to_field(w.wins),
                                     to_field(w.instances));
    }
    return out;
}

/// Best-so-far progression in the user's sense (augmented objective, so it includes any penalty).
inline std::string trace_csv(const std::vector<TracePoint>& trace, Sense sense) {
    using detail::to_field;
    std::string out = "elapsed_seconds,iteration,best_objective\n";
    for (const auto& t : trace) {
        out += detail::csv_row(to_field(t.seconds), to_field(t.iteration),
                               to_field(sense == Sense::maximize ? -t.objective : t.objective));
    }
    return out;
}

inline void export_csv(const std::string& path, const std::vector<SweepRecord>& records) {
    detail::write_file(path, records_csv(records));
}

inline void export_csv(const std::string& path, const DeviationStats& stats) {
    detail::write_file(path, deviation_csv(stats));
}

inline void export_csv(const std::string& path, const std::vector<TracePoint>& trace, Sense sense) {
    detail::write_file(path, trace_csv(trace, sense));
}

}  // namespace qslack

#endif  // QSLACK_HARNESS_HPP_INCLUDED
