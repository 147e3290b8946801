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

// Acceptance suite: prints one PASS/FAIL line per criterion and exits nonzero
// if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <string>
#include <vector>

#include <boost/rational.hpp>

#include "qslack/qslack.hpp"
#include "support.hpp"

using namespace qslack;
using testing::dense_of;
using testing::dot;
using testing::naive_min;

namespace {

struct Outcome {
    bool pass = false;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[512];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

ConstrainedProblem random_problem(SplitMix64& rng, std::size_t n, Coeff a_lo, Coeff a_hi, Coeff b_max) {
    ConstrainedProblem p;
    p.objective = testing::random_qubo(rng, n, 0.7, -10, 10);
    std::vector<Coeff> a(n);
    for (auto& v : a) v = rng.uniform_int(a_lo, a_hi);
    p.inequalities.push_back({a, rng.uniform_int(0, b_max)});
    return p;
}

Coeff constrained_min(const ConstrainedProblem& p) {
    const auto& ineq = p.inequalities.front();
    return naive_min(dense_of(p.objective),
                     [&](const BinaryAssignment& x) { return dot(ineq.coefficients, x) <= ineq.bound; });
}

// Exhaustive augmented optimum, mapped back and compared with the nested-loop
// constrained optimum.
Outcome criterion1() {
    SplitMix64 rng(101);
    int matched = 0, complemented = 0;
    for (int k = 0; k < 200; ++k) {
        const std::size_t n = 1 + rng.index(10);
        const bool negatives = rng.index(4) == 0;
        const auto p = random_problem(rng, n, negatives ? -5 : 0, 10, 20);
        const Coeff M = 1 + p.objective.abs_sum();
        const auto aug = transform(p, TransformConfig{1, M, {}});
        const auto best = brute_force_qubo(aug.qubo, 1);
        const auto x = recover(aug.map, best.argmins.front());
        const Coeff expected = constrained_min(p);
        const bool ok = check_feasible(p.inequalities[0], x).feasible && evaluate(p.objective, x) == expected &&
                        verify_lemma(p, 1, M).match;
        matched += ok;
        complemented += negatives;
    }
    return {matched == 200, fmt("%d/200 instances matched exactly (%d with negative coefficients)", matched,
                                complemented)};
}

ConstrainedProblem constructed_divisible(SplitMix64& rng, Coeff rho) {
    // Either every coefficient is a multiple of rho, or resample until the
    // optimum lands on a multiple.
    const std::size_t n = 2 + rng.index(7);
    if (rng.bit()) {
        auto p = random_problem(rng, n, 0, 6, 1);
        for (auto& a : p.inequalities[0].coefficients) a *= rho;
        p.inequalities[0].bound = rho * rng.uniform_int(0, 8);
        return p;
    }
    while (true) {
        auto p = random_problem(rng, n, 0, 10, 1);
        p.inequalities[0].bound = rho * rng.uniform_int(0, 30 / rho);
        if (verify_lemma(p, rho, default_penalty(p.objective)).preconditions()) return p;
    }
}

Outcome criterion2() {
    SplitMix64 rng(202);
    int matched = 0;
    for (int k = 0; k < 100; ++k) {
        const Coeff rho = rng.uniform_int(2, 6);
        const auto p = constructed_divisible(rng, rho);
        const auto r = verify_lemma(p, rho, default_penalty(p.objective));
        matched += r.preconditions() && r.match;
    }
    int violating = 0, mismatches = 0, infeasible = 0;
    while (violating < 100) {
        const Coeff rho = rng.uniform_int(2, 7);
        const auto p = random_problem(rng, 2 + rng.index(7), 0, 10, 30);
        const auto r = verify_lemma(p, rho, default_penalty(p.objective));
        if (r.preconditions()) continue;
        ++violating;
        mismatches += !r.match;
        infeasible += !r.recovered_feasible;
    }
    return {matched == 100, fmt("%d/100 matched under the divisibility conditions; "
                                "violating instances: %d/100 mismatched, %d recovered infeasible (report only)",
                                matched, mismatches, infeasible)};
}

Outcome criterion3() {
    bool ok = slack_count(15, 1) == 4 && slack_count(63, 1) == 6 && slack_count(7, 7) == 1 &&
              slack_count(1250, 1) == 11 && slack_count(1250, 10) == 7 && slack_count(1250, 100) == 4;
    std::uint64_t checked = 0, violations = 0;
    for (Coeff b = 0; b <= 4096; ++b) {
        std::size_t prev = slack_count(b, 1);
        for (Coeff rho = 2; rho <= std::max<Coeff>(b + 1, 2); ++rho) {
            const std::size_t m = slack_count(b, rho);
            violations += m > prev;
            prev = m;
            ++checked;
        }
    }
    ok = ok && violations == 0;
    return {ok, fmt("fixed values exact; %llu (b, rho) steps scanned for b in [0, 4096], %llu increases",
                    static_cast<unsigned long long>(checked), static_cast<unsigned long long>(violations))};
}

// Integer penalty of the augmented form against the rational expression
// rho^2 M (a.x / rho + c - D.s)^2.
Outcome criterion4() {
    using Q = boost::rational<std::int64_t>;
    SplitMix64 rng(404);
    int tuples = 0, mismatches = 0;
    std::uint64_t assignments = 0;
    while (tuples < 50) {
        const Coeff rho = rng.uniform_int(1, 12);
        const Coeff b = rng.uniform_int(0, 300);
        const std::size_t m = slack_count(b, rho);
        if (m > 12) continue;
        const std::size_t n = 1 + rng.index(16 - m);
        std::vector<Coeff> a(n);
        for (auto& v : a) v = rng.uniform_int(0, 40);
        const Coeff M = rng.uniform_int(1, 50);
        ConstrainedProblem p{QuboMatrix(n), {{a, b}}, {}};
        const auto aug = transform(p, TransformConfig{rho, M, {}});
        const auto& enc = aug.blocks.front().encoding;
        const std::size_t dim = aug.qubo.dimension();
        ++tuples;
        for (std::uint64_t code = 0; code < (std::uint64_t{1} << dim); ++code) {
            const auto z = testing::bits_of(code, dim);
            Q inner = Q(enc.pad);
            for (std::size_t i = 0; i < n; ++i) inner += Q(a[i] * z[i], rho);
            for (std::size_t s = 0; s < m; ++s) inner -= Q(enc.weights[s] * z[n + s]);
            const Q expected = Q(rho * rho * M) * inner * inner;
            const Coeff got = evaluate(aug.qubo, z);
            mismatches += Q(got) != expected || penalty_value(aug, z) != got;
            ++assignments;
        }
    }
    return {mismatches == 0, fmt("%d tuples, %llu assignments, %d mismatches", tuples,
                                 static_cast<unsigned long long>(assignments), mismatches)};
}

Outcome criterion5() {
    SplitMix64 rng(505);
    int mismatches = 0;
    for (int k = 0; k < 20; ++k) {
        const std::size_t n = 1 + rng.index(64);
        auto q = testing::random_qubo(rng, n, rng.unit(), -1000, 1000);
        q.set_offset(rng.uniform_int(-100, 100));
        auto x = testing::random_bits(rng, n);
        auto cache = init_gains(q, x);
        for (int step = 0; step < 10000; ++step) {
            apply_flip(q, x, rng.index(n), cache);
            mismatches += cache.objective != evaluate(q, x);
        }
        for (std::size_t i = 0; i < n; ++i) mismatches += cache.gain[i] != flip_delta(q, x, i);
    }
    return {mismatches == 0, fmt("20 matrices x 10^4 flips, %d mismatches", mismatches)};
}

Outcome criterion6() {
    const double densities[] = {25, 50, 75};
    SolverParams params;
    params.iteration_limit = 1000000;
    params.seed = 7;
    int records = 0, feasible = 0, errors = 0;
    for (int k = 0; k < 10; ++k) {
        const auto bundle = generate_qkp(100, densities[k % 3], 1000 + static_cast<std::uint64_t>(k));
        for (const auto& r : rho_sweep(bundle, {1, 10, 100}, {}, params)) {
            ++records;
            feasible += r.feasible && r.best_lhs <= r.bound;
            errors += !r.error.empty();
        }
    }
    return {records == 30 && feasible == 30,
            fmt("%d/%d sweep records feasible against the original constraint, %d errors", feasible, records,
                errors)};
}

// Instances whose every constrained optimum has a . x off the multiples of rho.
Outcome criterion7() {
    bool ok = true;
    ConstrainedProblem fixed{QuboMatrix(3), {{{3, 5, 4}, 7}}, {}};
    fixed.objective.add(0, 0, -10);
    fixed.objective.add(1, 1, -1);
    fixed.objective.add(2, 2, -10);
    const Coeff M = default_penalty(fixed.objective);
    const auto at4 = verify_lemma(fixed, 4, M);
    const auto at1 = verify_lemma(fixed, 1, M);
    ok = ok && at4.base_objective == -20 && at4.transformed_objective == -10 && at1.match && !at4.match;
    std::string detail = fmt("a=(3,5,4) b=7: base -20, rho=4 gives %lld, rho=1 gives %lld",
                             static_cast<long long>(at4.transformed_objective),
                             static_cast<long long>(at1.transformed_objective));

    SplitMix64 rng(707);
    int family = 0, worse = 0, exact = 0;
    while (family < 50) {
        const Coeff rho = rng.uniform_int(2, 6);
        const auto p = random_problem(rng, 2 + rng.index(7), 0, 10, 30);
        const Coeff pm = default_penalty(p.objective);
        const auto r = verify_lemma(p, rho, pm);
        if (!r.base_feasible || r.optimum_lhs_divisible) continue;
        ++family;
        worse += r.transformed_objective > r.base_objective && r.recovered_feasible;
        exact += verify_lemma(p, 1, pm).match;
    }
    ok = ok && worse == 50 && exact == 50;
    detail += fmt("; random family: %d/50 strictly worse at rho, %d/50 exact at rho=1", worse, exact);
    return {ok, detail};
}

Outcome criterion8() {
    const auto dir = std::filesystem::temp_directory_path() / "qslack_acceptance";
    std::filesystem::create_directories(dir);
    SolverParams params;
    params.iteration_limit = 20000;
    params.seed = 3;

    std::vector<SweepRecord> records;
    const std::vector<Coeff> rhos{1, 10, 100};
    int instances = 0;
    for (std::size_t n : {30, 40}) {
        for (double d : {25.0, 50.0, 75.0}) {
            const auto bundle = generate_qkp(n, d, 500 + n + static_cast<std::uint64_t>(d));
            for (auto& r : rho_sweep(bundle, rhos, {100000, 1000000}, params)) records.push_back(std::move(r));
            ++instances;
        }
    }

    bool ok = true;
    std::size_t trace_points = 0;
    for (std::size_t k = 0; k < records.size(); ++k) {
        const auto& t = records[k].trace;
        for (std::size_t i = 1; i < t.size(); ++i) {
            ok = ok && t[i].objective <= t[i - 1].objective && t[i].seconds >= t[i - 1].seconds;
        }
        const auto path = dir / ("trace_" + std::to_string(k) + ".csv");
        export_csv(path.string(), t, records[k].sense);
        const auto rows = detail::parse_csv(trace_csv(t, records[k].sense));
        ok = ok && rows.size() == t.size() + 1 && std::filesystem::exists(path);
        trace_points += t.size();
    }

    const auto stats = deviation_stats(records);
    for (const auto& row : stats.rows) ok = ok && row.deviation_percent >= 0.0;
    std::size_t zero_rows = 0;
    for (const auto& row : stats.rows) zero_rows += row.deviation_percent == 0.0;
    ok = ok && zero_rows >= static_cast<std::size_t>(instances) && stats.by_density_rho.size() == 3 * rhos.size();

    const auto by_size = win_counts(records, WinGrouping::size_penalty_rho);
    const auto by_density = win_counts(records, WinGrouping::density_rho);
    ok = ok && by_size.size() == 2 * 2 * rhos.size() && by_density.size() == 3 * rhos.size();
    std::size_t wins = 0;
    for (const auto& w : by_size) {
        ok = ok && w.wins <= w.instances && w.instances == 3;
        wins += w.wins;
    }
    ok = ok && wins >= static_cast<std::size_t>(instances);

    export_csv((dir / "records.csv").string(), records);
    detail::write_file((dir / "deviation_summary.csv").string(), deviation_summary_csv(stats));
    detail::write_file((dir / "wins_size.csv").string(), win_counts_csv(by_size, WinGrouping::size_penalty_rho));
    detail::write_file((dir / "wins_density.csv").string(), win_counts_csv(by_density, WinGrouping::density_rho));
    ok = ok && parse_records_csv(records_csv(records)).size() == records.size();
    std::filesystem::remove_all(dir);

    return {ok, fmt("%zu records over %d instances: %zu win-count rows, %zu deviation groups, %zu trace points "
                    "all non-increasing",
                    records.size(), instances, by_size.size() + by_density.size(), stats.by_density_rho.size(),
                    trace_points)};
}

}  // namespace

int main() {
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"exactness at rho = 1", criterion1},
        {"divisibility conditions give an exact match", criterion2},
        {"slack counts", criterion3},
        {"penalty rescaling identity", criterion4},
        {"incremental evaluation", criterion5},
        {"feasibility across rho on generated QKP", criterion6},
        {"large-rho degradation", criterion7},
        {"win-count, deviation and trace tables", criterion8},
    };
    int failures = 0;
    for (std::size_t k = 0; k < criteria.size(); ++k) {
        const auto start = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = criteria[k].second();
        } catch (const std::exception& e) {
            out = {false, std::string("exception: ") + e.what()};
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("criterion %zu: %s - %s (%s) [%.1fs]\n", k + 1, out.pass ? "PASS" : "FAIL", criteria[k].first,
                    out.detail.c_str(), secs);
        std::fflush(stdout);
        failures += !out.pass;
    }
    return failures == 0 ? 0 : 1;
}
