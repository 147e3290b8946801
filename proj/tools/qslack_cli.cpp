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

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qslack/qslack.hpp"

namespace {

using json = nlohmann::ordered_json;
using namespace qslack;

class UsageError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string read_text(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open '" + path + "'");
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

void emit(const std::string& path, const std::string& text) {
    if (path.empty() || path == "-") {
        std::cout << text;
    } else {
        detail::write_file(path, text);
    }
}

// Native files start with their magic line; anything else is read as QKP.
InstanceBundle load_bundle(const std::string& path) {
    const auto text = read_text(path);
    const auto first = text.find_first_not_of(" \t\r\n");
    if (first != std::string::npos && text.compare(first, 15, "qslack-instance") == 0) return read_native(text);
    return read_qkp(text, "file:" + path);
}

std::string bits(const BinaryAssignment& x) {
    std::string s;
    for (auto b : x) s += b ? '1' : '0';
    return s;
}

struct Budget {
    double time_limit = 0.0;
    std::uint64_t iter_limit = 0;
    std::uint64_t seed = 1;
    std::optional<std::size_t> tenure;
    std::uint64_t restart_after = 5000;

    SolverParams params() const {
        SolverParams p;
        p.time_limit_seconds = time_limit;
        p.iteration_limit = iter_limit;
        if (time_limit == 0.0 && iter_limit == 0) p.time_limit_seconds = 10.0;
        p.seed = seed;
        p.tenure = tenure;
        p.restart_after = restart_after;
        return p;
    }
};

void add_budget(CLI::App* cmd, Budget& b) {
    cmd->add_option("--seed", b.seed, "Random seed")->capture_default_str();
    cmd->add_option("--time-limit", b.time_limit, "Wall-clock budget in seconds (default 10 if no budget is given)");
    cmd->add_option("--iter-limit", b.iter_limit, "Iteration budget");
    cmd->add_option("--tenure", b.tenure, "Tabu tenure (0 = steepest descent)");
    cmd->add_option("--restart-after", b.restart_after, "Non-improving iterations before a restart")
        ->capture_default_str();
}

Coeff penalty_or_default(const std::optional<Coeff>& M, const ConstrainedProblem& p) {
    return M ? *M : default_penalty(p.objective);
}

json size_report(const AugmentedQubo& aug) {
    const auto terms = count_slack_terms(aug);
    return {{"variables", aug.map.original_dimension},
            {"slack_count", aug.slack_count()},
            {"augmented_dimension", aug.qubo.dimension()},
            {"augmented_nonzeros", aug.qubo.num_entries()},
            {"slack_linear_terms", terms.linear},
            {"slack_quadratic_terms", terms.quadratic},
            {"rho", aug.rho},
            {"penalty", aug.penalty},
            {"scaled_penalty", TransformConfig{aug.rho, aug.penalty, {}}.scaled_penalty()}};
}

int cmd_gen(const std::string& qkp_path, const std::string& orlib_path, std::size_t instance, int fraction,
            std::size_t n, double density, std::uint64_t seed, const std::string& out) {
    InstanceBundle b;
    if (!orlib_path.empty()) {
        const auto qs = read_orlib_bqp(read_text(orlib_path));
        if (instance >= qs.size()) {
            throw UsageError("--instance " + std::to_string(instance) + " out of range: file holds " +
                             std::to_string(qs.size()) + " instances");
        }
        b.problem = attach_cardinality_constraint(qs[instance], fraction);
        b.name = std::filesystem::path(orlib_path).stem().string() + "_" + std::to_string(instance + 1) + "_c" +
                 std::to_string(fraction);
        b.provenance = "file:" + orlib_path + " instance=" + std::to_string(instance + 1) +
                       " cardinality=" + std::to_string(fraction) + "%";
        b.density_percent = measured_density(b.problem.objective);
    } else if (!qkp_path.empty()) {
        b = read_qkp(read_text(qkp_path), "file:" + qkp_path);
    } else {
        if (n == 0) throw UsageError("gen needs --n (or --qkp / --orlib)");
        b = generate_qkp(n, density, seed);
    }
    emit(out, write_native(b));
    if (!out.empty() && out != "-") {
        std::cout << json{{"name", b.name}, {"variables", b.problem.dimension()}, {"out", out}}.dump() << '\n';
    }
    return 0;
}

int cmd_transform(const std::string& input, Coeff rho, const std::optional<Coeff>& M, const std::string& out) {
    const auto b = load_bundle(input);
    const auto aug = transform(b.problem, TransformConfig{rho, penalty_or_default(M, b.problem), {}});
    InstanceBundle t{b.name + "_rho" + std::to_string(rho), {aug.qubo, {}, {}},
                     "transform of " + b.name + " rho=" + std::to_string(rho) + " M=" + std::to_string(aug.penalty),
                     measured_density(aug.qubo)};
    auto report = size_report(aug);
    if (out.empty() || out == "-") {
        std::cerr << report.dump() << '\n';
        std::cout << write_native(t);
    } else {
        emit(out, write_native(t));
        report["out"] = out;
        std::cout << report.dump() << '\n';
    }
    return 0;
}

int cmd_solve(const std::string& input, Coeff rho, const std::optional<Coeff>& M, const Budget& budget,
              std::size_t threads, const std::string& out) {
    const auto b = load_bundle(input);
    const auto aug = transform(b.problem, TransformConfig{rho, penalty_or_default(M, b.problem), {}});
    const auto res = solve_many(aug.qubo, budget.params(), std::max<std::size_t>(1, threads));
    const auto x = recover(aug.map, res.best);
    const auto& p = b.problem;
    json j{{"instance", b.name}};
    j.update(size_report(aug));
    j["augmented_objective"] = res.user_best_objective;
    j["objective"] = user_objective(p.objective, evaluate(p.objective, x));
    j["feasible"] = is_feasible(p, x);
    if (!p.inequalities.empty()) {
        j["lhs"] = check_feasible(p.inequalities.front(), x).lhs;
        j["bound"] = p.inequalities.front().bound;
    }
    j["penalty_value"] = penalty_value(aug, res.best);
    j["iterations"] = res.iterations;
    j["restarts"] = res.restarts;
    j["assignment"] = bits(x);
    if (!out.empty()) {
        export_csv(out, res.trace, aug.qubo.sense());
        j["trace"] = out;
    }
    j["trace_points"] = res.trace.size();
    std::cout << j.dump() << '\n';
    return 0;
}

int cmd_sweep(const std::string& input, std::vector<Coeff> rhos, bool primes, const std::vector<Coeff>& penalties,
              const Budget& budget, std::size_t threads, const std::string& out, const std::string& trace_dir) {
    const auto b = load_bundle(input);
    if (primes) {
        if (b.problem.inequalities.empty()) throw UsageError("--primes needs an inequality constraint");
        for (auto r : prime_sweep_rhos(b.problem.inequalities.front().bound)) {
            if (std::find(rhos.begin(), rhos.end(), r) == rhos.end()) rhos.push_back(r);
        }
    }
    if (rhos.empty()) rhos.push_back(1);
    auto records = rho_sweep(b, rhos, penalties, budget.params(), std::max<std::size_t>(1, threads));
    if (!trace_dir.empty()) {
        std::filesystem::create_directories(trace_dir);
        for (auto& r : records) {
            const auto path = (std::filesystem::path(trace_dir) /
                               (r.instance + "_rho" + std::to_string(r.rho) + "_M" + std::to_string(r.penalty) + ".csv"))
                                  .string();
            export_csv(path, r.trace, r.sense);
            r.trace_file = path;
        }
    }
    emit(out, records_csv(records));
    if (!out.empty() && out != "-") {
        json cells = json::array();
        for (const auto& r : records) {
            json c{{"rho", r.rho}, {"penalty", r.penalty}, {"slack_count", r.slack_count}, {"feasible", r.feasible}};
            c["objective"] = r.best_objective ? json(*r.best_objective) : json(nullptr);
            if (!r.error.empty()) c["error"] = r.error;
            cells.push_back(c);
        }
        std::cout << json{{"instance", b.name}, {"records", records.size()}, {"out", out}, {"cells", cells}}.dump()
                  << '\n';
    }
    return 0;
}

int cmd_oracle(const std::string& input, Coeff rho, const std::optional<Coeff>& M) {
    const auto b = load_bundle(input);
    const auto& p = b.problem;
    json j{{"instance", b.name}};
    const auto exact = brute_force_constrained(p);
    j["feasible"] = exact.feasible;
    if (exact.feasible) {
        j["objective"] = user_objective(p.objective, exact.objective);
        j["assignment"] = bits(exact.argmin);
    }
    if (p.inequalities.size() == 1 && p.equalities.empty()) {
        const Coeff penalty = penalty_or_default(M, p);
        const auto r = verify_lemma(p, rho, penalty);
        j["transform"] = {{"rho", rho},
                          {"penalty", penalty},
                          {"objective", user_objective(p.objective, r.transformed_objective)},
                          {"assignment", bits(r.recovered)},
                          {"feasible", r.recovered_feasible},
                          {"lhs", r.recovered_lhs},
                          {"bound_divisible", r.bound_divisible},
                          {"optimum_lhs_divisible", r.optimum_lhs_divisible},
                          {"match_expected", r.match_expected()},
                          {"match", r.match}};
    }
    std::cout << j.dump() << '\n';
    return 0;
}

int cmd_stats(const std::vector<std::string>& inputs, const std::string& out, const std::string& summary_out,
              const std::string& wins_out, const std::string& grouping) {
    std::vector<SweepRecord> records;
    for (const auto& path : inputs) {
        auto part = parse_records_csv(read_text(path));
        records.insert(records.end(), part.begin(), part.end());
    }
    const auto stats = deviation_stats(records);
    const auto group = grouping == "density" ? WinGrouping::density_rho : WinGrouping::size_penalty_rho;
    const auto wins = win_counts(records, group);
    emit(out, deviation_csv(stats));
    if (!summary_out.empty()) detail::write_file(summary_out, deviation_summary_csv(stats));
    if (!wins_out.empty()) detail::write_file(wins_out, win_counts_csv(wins, group));
    if (!out.empty() && out != "-") {
        json groups = json::array();
        for (const auto& g : stats.by_density_rho) {
            groups.push_back({{"density_percent", g.density_percent},
                              {"rho", g.rho},
                              {"count", g.count},
                              {"mean_deviation_percent", g.mean_deviation},
                              {"max_deviation_percent", g.max_deviation}});
        }
        std::cout << json{{"records", records.size()}, {"rows", stats.rows.size()}, {"groups", groups}}.dump() << '\n';
    }
    return 0;
}

void error_line(const std::string& kind, const std::string& message) {
    std::cerr << json{{"error", kind}, {"message", message}}.dump() << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Slack-variable QUBO transforms, tabu search and rho sweeps"};
    app.require_subcommand(1);

    Budget budget;
    std::string input, out, trace_dir, summary_out, wins_out, grouping = "size", qkp_path, orlib_path;
    Coeff rho = 1;
    std::optional<Coeff> M;
    std::vector<Coeff> rhos, penalties;
    std::vector<std::string> inputs;
    std::size_t threads = 1, n = 0, instance = 0;
    double density = 50.0;
    int fraction = 50;
    bool primes = false;
    std::uint64_t gen_seed = 1;

    auto* gen = app.add_subcommand("gen", "Generate a QKP instance or attach a cardinality constraint");
    gen->add_option("--n", n, "Variables of a generated QKP instance");
    gen->add_option("--density", density, "Off-diagonal density in percent")->capture_default_str();
    gen->add_option("--seed", gen_seed, "Generator seed")->capture_default_str();
    gen->add_option("--qkp", qkp_path, "Convert a QKP file instead of generating");
    gen->add_option("--orlib", orlib_path, "ORLIB bqp file to constrain");
    gen->add_option("--instance", instance, "0-based instance index inside the ORLIB file")->capture_default_str();
    gen->add_option("--fraction", fraction, "Cardinality bound as a percentage of n")->capture_default_str();
    gen->add_option("--out", out, "Output path (native format); stdout if omitted");

    auto* tr = app.add_subcommand("transform", "Emit the penalized QUBO and a size report");
    tr->add_option("instance", input, "Instance file (native or QKP)")->required();
    tr->add_option("--rho", rho, "Scaling divisor")->capture_default_str();
    tr->add_option("--M", M, "Penalty weight (default 1 + sum |Q|)");
    tr->add_option("--out", out, "Output path for the QUBO; stdout if omitted");

    auto* so = app.add_subcommand("solve", "Transform and solve once");
    so->add_option("instance", input, "Instance file (native or QKP)")->required();
    so->add_option("--rho", rho, "Scaling divisor")->capture_default_str();
    so->add_option("--M", M, "Penalty weight (default 1 + sum |Q|)");
    so->add_option("--threads", threads, "Independent replicas run in parallel")->capture_default_str();
    so->add_option("--out", out, "Trace CSV path");
    add_budget(so, budget);

    auto* sw = app.add_subcommand("sweep", "Run a rho (and M) sweep and export records");
    sw->add_option("instance", input, "Instance file (native or QKP)")->required();
    sw->add_option("--rho", rhos, "Scaling divisors")->delimiter(',');
    sw->add_flag("--primes", primes, "Add 1 and every prime up to b");
    sw->add_option("--M", penalties, "Penalty weights (default 1 + sum |Q|)")->delimiter(',');
    sw->add_option("--threads", threads, "Worker threads")->capture_default_str();
    sw->add_option("--out", out, "Records CSV path; stdout if omitted");
    sw->add_option("--trace-dir", trace_dir, "Directory for per-cell trace CSVs");
    add_budget(sw, budget);

    auto* orc = app.add_subcommand("oracle", "Exhaustive optimum and transform check for small instances");
    orc->add_option("instance", input, "Instance file (native or QKP)")->required();
    orc->add_option("--rho", rho, "Scaling divisor")->capture_default_str();
    orc->add_option("--M", M, "Penalty weight (default 1 + sum |Q|)");

    auto* st = app.add_subcommand("stats", "Deviation and win-count tables from sweep records");
    st->add_option("records", inputs, "Records CSV files")->required();
    st->add_option("--out", out, "Deviation CSV path; stdout if omitted");
    st->add_option("--summary-out", summary_out, "Per (density, rho) summary CSV path");
    st->add_option("--wins-out", wins_out, "Win-count CSV path");
    st->add_option("--group", grouping, "Win-count grouping")
        ->check(CLI::IsMember({"size", "density"}))
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        error_line("usage", e.what());
        return 2;
    }

    try {
        if (*gen) return cmd_gen(qkp_path, orlib_path, instance, fraction, n, density, gen_seed, out);
        if (*tr) return cmd_transform(input, rho, M, out);
        if (*so) return cmd_solve(input, rho, M, budget, threads, out);
        if (*sw) return cmd_sweep(input, rhos, primes, penalties, budget, threads, out, trace_dir);
        if (*orc) return cmd_oracle(input, rho, M);
        if (*st) return cmd_stats(inputs, out, summary_out, wins_out, grouping);
    } catch (const UsageError& e) {
        error_line("usage", e.what());
        return 2;
    } catch (const ParseError& e) {
        error_line("parse", e.what());
        return 1;
    } catch (const std::overflow_error& e) {
        error_line("overflow", e.what());
        return 1;
    } catch (const std::exception& e) {
        error_line("runtime", e.what());
        return 1;
    }
    return 0;
}
