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

#ifndef QSLACK_TABU_HPP_INCLUDED
#define QSLACK_TABU_HPP_INCLUDED

#include <algorithm>
#include <chrono>
#include <exception>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "qslack/qubo.hpp"
#include "qslack/rng.hpp"

namespace qslack {

struct SolverParams {
    /// Iterations a flipped variable stays tabu. Unset: max(10, n / 20).
    /// Zero turns the search into steepest-descent 1-flip local search.
    std::optional<std::size_t> tenure;
    double time_limit_seconds = 0.0;  // 0 = no wall-clock budget
    std::uint64_t iteration_limit = 0;  // 0 = no iteration budget
    std::uint64_t restart_after = 5000;  // non-improving iterations before a restart
    std::size_t elite_capacity = 8;
    std::uint64_t seed = 1;
    bool path_relinking = true;
    bool record_moves = false;

    void validate() const {
        if (time_limit_seconds < 0.0) throw std::invalid_argument("time limit must be non-negative");
        if (time_limit_seconds == 0.0 && iteration_limit == 0) {
            throw std::invalid_argument("solver needs a positive time or iteration budget");
        }
        if (restart_after == 0) throw std::invalid_argument("restart_after must be positive");
        if (path_relinking && elite_capacity < 2) {
            throw std::invalid_argument("path relinking needs an elite pool of at least 2");
        }
    }
};

struct TracePoint {
    double seconds = 0.0;
    std::uint64_t iteration = 0;
    Coeff objective = 0;  // best so far, internal (minimization) sense
};

struct EliteSolution {
    BinaryAssignment x;
    Coeff objective = 0;
};

enum class MoveKind { flip, restart, relink };

struct MoveRecord {
    MoveKind kind = MoveKind::flip;
    std::uint64_t iteration = 0;
    std::size_t variable = 0;
    bool tabu = false;
    Coeff objective_after = 0;
    Coeff best_before = 0;
    Coeff min_gain = 0;  // restart only: smallest flip delta at the abandoned point
};

struct SolveResult {
    BinaryAssignment best;
    Coeff best_objective = 0;  // internal sense
    Coeff user_best_objective = 0;
    std::vector<TracePoint> trace;
    std::uint64_t iterations = 0;
    std::uint64_t restarts = 0;
    std::vector<EliteSolution> elite;
    std::vector<MoveRecord> moves;
};

struct RelinkResult {
    BinaryAssignment x;
    Coeff objective = 0;
};

inline std::size_t hamming(std::span<const std::uint8_t> a, std::span<const std::uint8_t> b) {
    std::size_t d = 0;
    for (std::size_t i = 0; i < a.size(); ++i) d += a[i] != b[i];
    return d;
}

// Walks from `from` to `to`, each step flipping the still-differing bit with the
// smallest flip delta (lowest index on ties), and returns the best assignment
// seen including both endpoints.
inline RelinkResult path_relink(const QuboMatrix& q, std::span<const std::uint8_t> from,
                                std::span<const std::uint8_t> to) {
    if (from.size() != to.size()) throw std::invalid_argument("path_relink: endpoint length mismatch");
    BinaryAssignment x(from.begin(), from.end());
    GainCache cache = init_gains(q, x);
    RelinkResult best{x, cache.objective};

    std::vector<std::size_t> diff;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (from[i] != to[i]) diff.push_back(i);
    }
    while (!diff.empty()) {
        std::size_t pick = 0;
        for (std::size_t k = 1; k < diff.size(); ++k) {
            const Coeff g = cache.gain[diff[k]], gp = cache.gain[diff[pick]];
            if (g < gp || (g == gp && diff[k] < diff[pick])) pick = k;
        }
        apply_flip(q, x, diff[pick], cache);
        diff.erase(diff.begin() + static_cast<std::ptrdiff_t>(pick));
        if (cache.objective < best.objective) best = {x, cache.objective};
    }
    return best;
}

namespace detail {

class ElitePool {
public:
    ElitePool(std::size_t capacity, std::size_t min_distance)
        : capacity_(capacity), min_distance_(min_distance) {}

    // Near-duplicates (Hamming distance below the threshold) compete for one slot.
    void offer(const BinaryAssignment& x, Coeff objective) {
        for (auto& e : pool_) {
            if (hamming(e.x, x) < min_distance_ || e.x == x) {
                if (objective < e.objective) e = {x, objective};
                return;
            }
        }
        if (pool_.size() < capacity_) {
            pool_.push_back({x, objective});
            return;
        }
        auto worst = std::max_element(pool_.begin(), pool_.end(),
                                      [](const auto& a, const auto& b) { return a.objective < b.objective; });
        if (objective < worst->objective) *worst = {x, objective};
    }

    std::size_t size() const noexcept { return pool_.size(); }
    const EliteSolution& operator[](std::size_t i) const { return pool_[i]; }

    std::vector<EliteSolution> sorted() const {
        auto out = pool_;
        std::stable_sort(out.begin(), out.end(),
                         [](const auto& a, const auto& b) { return a.objective < b.objective; });
        return out;
    }

private:
    std::size_t capacity_;
    std::size_t min_distance_;
    std::vector<EliteSolution> pool_;
};

}  // namespace detail

// Tabu search over 1-flip moves with a gain cache. Each iteration takes the best
// non-tabu flip (ties broken at random), or a tabu flip that beats the global
// best. After `restart_after` iterations without improving the current phase's
// best, that best enters the elite pool and the search restarts: from the best
// point on a relinking path between two random elite solutions, or from fresh
// random bits when the pool is too small or the previous restart was relinked.
inline SolveResult solve(const QuboMatrix& q, const SolverParams& params) {
    params.validate();
    const std::size_t n = q.dimension();
    if (n == 0) throw std::invalid_argument("solve: matrix has dimension 0");
    (void)q.magnitude();  // throws if incremental arithmetic could overflow

    using clock = std::chrono::steady_clock;
    const auto start = clock::now();
    auto elapsed = [&] { return std::chrono::duration<double>(clock::now() - start).count(); };

    const bool descent = params.tenure.has_value() && *params.tenure == 0;
    const std::size_t tenure = std::min(params.tenure.value_or(std::max<std::size_t>(10, n / 20)), n - 1);

    SplitMix64 rng(params.seed);
    auto random_bits = [&] {
        BinaryAssignment x(n);
        for (auto& b : x) b = rng.bit() ? 1 : 0;
        return x;
    };

    SolveResult result;
    BinaryAssignment x = random_bits();
    GainCache cache = init_gains(q, x);
    result.best = x;
    result.best_objective = cache.objective;
    result.trace.push_back({0.0, 0, cache.objective});

    detail::ElitePool elite(params.elite_capacity, std::max<std::size_t>(1, n / 10));
    std::vector<std::uint64_t> tabu_until(n, 0);
    BinaryAssignment phase_best = x;
    Coeff phase_best_obj = cache.objective;
    std::uint64_t since_improve = 0;
    std::uint64_t iter = 0;
    bool last_was_relink = false;

    auto improve_global = [&](std::uint64_t at) {
        if (cache.objective < result.best_objective) {
            result.best = x;
            result.best_objective = cache.objective;
            result.trace.push_back({elapsed(), at, cache.objective});
        }
    };

    auto restart = [&](Coeff min_gain) {
        elite.offer(phase_best, phase_best_obj);
        ++result.restarts;
        MoveKind kind = MoveKind::restart;
        if (params.path_relinking && elite.size() >= 2 && !last_was_relink) {
            const std::size_t a = rng.index(elite.size());
            std::size_t b = rng.index(elite.size() - 1);
            if (b >= a) ++b;
            x = path_relink(q, elite[a].x, elite[b].x).x;
            kind = MoveKind::relink;
            last_was_relink = true;
        } else {
            last_was_relink = false;
            x = random_bits();
        }
        cache = init_gains(q, x);
        std::fill(tabu_until.begin(), tabu_until.end(), 0);
        if (params.record_moves) {
            result.moves.push_back({kind, iter, 0, false, cache.objective, result.best_objective, min_gain});
        }
        improve_global(iter);
        phase_best = x;
        phase_best_obj = cache.objective;
        since_improve = 0;
    };

    while (true) {
        if (params.iteration_limit != 0 && iter >= params.iteration_limit) break;
        if (params.time_limit_seconds > 0.0 && (iter & 255U) == 0 && elapsed() >= params.time_limit_seconds) break;

        // Move selection: best admissible gain, reservoir tie-breaking.
        std::size_t pick = n;
        Coeff pick_gain = std::numeric_limits<Coeff>::max();
        std::uint64_t ties = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const Coeff g = cache.gain[i];
            if (!descent && tabu_until[i] > iter && cache.objective + g >= result.best_objective) continue;
            if (g < pick_gain) {
                pick = i;
                pick_gain = g;
                ties = 1;
            } else if (g == pick_gain && rng.index(++ties) == 0) {
                pick = i;
            }
        }

        if (descent && pick_gain >= 0) {
            restart(pick_gain);
            ++iter;
            continue;
        }
        if (pick == n) {
            // Only reachable when n == 1 and the single move is tabu.
            restart(0);
            ++iter;
            continue;
        }

        const bool was_tabu = tabu_until[pick] > iter;
        const Coeff best_before = result.best_objective;
        apply_flip(q, x, pick, cache);
        tabu_until[pick] = iter + 1 + tenure;
        ++iter;

        if (params.record_moves) {
            result.moves.push_back({MoveKind::flip, iter, pick, was_tabu, cache.objective, best_before, 0});
        }
        if ((iter & ((1U << 14) - 1)) == 0 && evaluate(q, x) != cache.objective) {
            throw std::logic_error("incremental objective diverged from full evaluation");
        }

        improve_global(iter);
        if (cache.objective < phase_best_obj) {
            phase_best = x;
            phase_best_obj = cache.objective;
            since_improve = 0;
        } else if (++since_improve >= params.restart_after) {
            restart(0);
        }
    }

    elite.offer(phase_best, phase_best_obj);
    result.iterations = iter;
    result.elite = elite.sorted();
    if (evaluate(q, result.best) != result.best_objective) {
        throw std::logic_error("best objective does not match full re-evaluation");
    }
    result.user_best_objective = user_objective(q, result.best_objective);
    return result;
}

/// Runs `replicas` independent solves with seeds seed, seed+1, ... and keeps the
/// best (lowest replica index on ties).
inline SolveResult solve_many(const QuboMatrix& q, const SolverParams& params, std::size_t replicas) {
    if (replicas == 0) throw std::invalid_argument("solve_many: need at least one replica");
    if (replicas == 1) return solve(q, params);
    std::vector<SolveResult> results(replicas);
    std::vector<std::exception_ptr> errors(replicas);
    {
        std::vector<std::jthread> workers;
        for (std::size_t r = 0; r < replicas; ++r) {
            workers.emplace_back([&, r] {
                try {
                    SolverParams p = params;
                    p.seed = params.seed + r;
                    results[r] = solve(q, p);
                } catch (...) {
                    errors[r] = std::current_exception();
                }
            });
        }
    }
    for (auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    std::size_t best = 0;
    for (std::size_t r = 1; r < replicas; ++r) {
        if (results[r].best_objective < results[best].best_objective) best = r;
    }
    return std::move(results[best]);
}

}  // namespace qslack

#endif  // QSLACK_TABU_HPP_INCLUDED
