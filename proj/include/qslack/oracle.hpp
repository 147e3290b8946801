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

#ifndef QSLACK_ORACLE_HPP_INCLUDED
#define QSLACK_ORACLE_HPP_INCLUDED

#include <bit>
#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "qslack/constraint.hpp"
#include "qslack/qubo.hpp"

namespace qslack {

/// Largest dimension the exhaustive oracles will enumerate (2^26 states).
inline constexpr std::size_t kOracleMaxDimension = 26;

struct OracleResult {
    Coeff objective = 0;
    std::vector<BinaryAssignment> argmins;  // first `max_argmins` in enumeration order
    std::uint64_t argmin_count = 0;
};

struct ConstrainedOptimum {
    bool feasible = false;  // false: no assignment satisfies the constraints
    Coeff objective = 0;
    BinaryAssignment argmin;
    Coeff lhs = 0;          // first inequality's a . x at the argmin
};

namespace detail {

inline void check_oracle_size(std::size_t n, std::size_t cap) {
    if (n > cap) {
        throw std::length_error("oracle dimension " + std::to_string(n) + " exceeds cap " +
                                std::to_string(cap));
    }
}

// Visits all 2^n assignments in reflected Gray-code order; consecutive states
// differ in one bit, so the objective is carried by apply_flip. visit(x, objective,
// flipped) receives the index flipped to reach x (n for the all-zero start).
template <class Visit>
void gray_enumerate(const QuboMatrix& q, Visit&& visit) {
    const std::size_t n = q.dimension();
    BinaryAssignment x(n, 0);
    GainCache cache = init_gains(q, x);
    visit(x, cache.objective, n);
    const std::uint64_t total = std::uint64_t{1} << n;
    for (std::uint64_t t = 1; t < total; ++t) {
        const auto bit = static_cast<std::size_t>(std::countr_zero(t));
        apply_flip(q, x, bit, cache);
        visit(x, cache.objective, bit);
    }
}

}  // namespace detail

inline OracleResult brute_force_qubo(const QuboMatrix& q, std::size_t max_argmins = 16,
                                     std::size_t cap = kOracleMaxDimension) {
    detail::check_oracle_size(q.dimension(), cap);
    (void)q.magnitude();
    OracleResult out;
    bool first = true;
    detail::gray_enumerate(q, [&](const BinaryAssignment& x, Coeff obj, std::size_t) {
        if (first || obj < out.objective) {
            first = false;
            out.objective = obj;
            out.argmins.clear();
            out.argmin_count = 0;
        }
        if (obj == out.objective) {
            if (out.argmins.size() < max_argmins) out.argmins.push_back(x);
            ++out.argmin_count;
        }
    });
    return out;
}

// Exhaustive optimum over assignments accepted by `admit(x, lhs_vector)`, where
// lhs_vector holds each inequality's a . x followed by each equality's.
template <class Admit>
ConstrainedOptimum enumerate_constrained(const ConstrainedProblem& p, Admit&& admit,
                                         std::size_t cap = kOracleMaxDimension) {
    p.validate();
    detail::check_oracle_size(p.dimension(), cap);
    (void)p.objective.magnitude();
    std::vector<const std::vector<Coeff>*> rows;
    for (const auto& c : p.inequalities) rows.push_back(&c.coefficients);
    for (const auto& c : p.equalities) rows.push_back(&c.coefficients);
    std::vector<Coeff> lhs(rows.size(), 0);

    ConstrainedOptimum out;
    detail::gray_enumerate(p.objective, [&](const BinaryAssignment& x, Coeff obj, std::size_t bit) {
        if (bit < x.size()) {
            for (std::size_t k = 0; k < rows.size(); ++k) {
                const Coeff a = (*rows[k])[bit];
                lhs[k] = checked_add(lhs[k], x[bit] ? a : checked_neg(a));
            }
        }
        if (!admit(x, lhs)) return;
        if (!out.feasible || obj < out.objective) {
            out.feasible = true;
            out.objective = obj;
            out.argmin = x;
            out.lhs = lhs.empty() ? 0 : lhs[0];
        }
    });
    return out;
}

inline bool satisfies_all(const ConstrainedProblem& p, const std::vector<Coeff>& lhs) {
    for (std::size_t k = 0; k < p.inequalities.size(); ++k) {
        if (lhs[k] > p.inequalities[k].bound) return false;
    }
    for (std::size_t k = 0; k < p.equalities.size(); ++k) {
        if (lhs[p.inequalities.size() + k] != p.equalities[k].bound) return false;
    }
    return true;
}

inline ConstrainedOptimum brute_force_constrained(const ConstrainedProblem& p,
                                                  std::size_t cap = kOracleMaxDimension) {
    return enumerate_constrained(
        p, [&](const BinaryAssignment&, const std::vector<Coeff>& lhs) { return satisfies_all(p, lhs); },
        cap);
}

// Exhaustive comparison of the base problem with its rho-scaled transform.
struct OracleReport {
    Coeff rho = 1;
    Coeff penalty = 1;

    bool base_feasible = false;
    Coeff base_objective = 0;  // internal sense
    BinaryAssignment base_argmin;
    Coeff base_lhs = 0;

    Coeff augmented_objective = 0;
    Coeff transformed_objective = 0;  // original objective at the recovered assignment
    Coeff transformed_penalty = 0;
    BinaryAssignment recovered;
    Coeff recovered_lhs = 0;
    bool recovered_feasible = false;

    bool bound_divisible = false;       // b mod rho == 0
    bool optimum_lhs_divisible = false; // some optimal x* has a . x* mod rho == 0
    bool penalty_exceeds_bound = false; // M >= default_penalty(Q)
    bool match = false;

    bool preconditions() const noexcept { return bound_divisible && optimum_lhs_divisible; }
    /// Exactness is guaranteed only under the divisibility preconditions with a large M.
    bool match_expected() const noexcept { return preconditions() && penalty_exceeds_bound; }
};

// The divisibility conditions are judged on the normalized inequality (after
// complementing negative coefficients), the form the slack encoding sees.
inline OracleReport verify_lemma(const ConstrainedProblem& p, Coeff rho, Coeff M,
                                 std::size_t cap = kOracleMaxDimension) {
    if (p.inequalities.size() != 1 || !p.equalities.empty()) {
        throw std::invalid_argument("verify_lemma expects exactly one inequality and no equalities");
    }
    const AugmentedQubo aug = transform(p, TransformConfig{rho, M, {}});
    detail::check_oracle_size(aug.qubo.dimension(), cap);

    const LinearInequality& norm = aug.normalized.front();
    // Same objective values as the original, over the normalized decision bits.
    ConstrainedProblem base{p.objective, {norm}, {}};
    for (std::size_t i = 0; i < aug.map.original_dimension; ++i) {
        if (aug.map.slots[i].role == VariableRole::complemented_decision) {
            base.objective = complement_variable(base.objective, i);
        }
    }

    OracleReport r;
    r.rho = rho;
    r.penalty = M;
    r.bound_divisible = norm.bound % rho == 0;
    r.penalty_exceeds_bound = M >= default_penalty(p.objective);

    const auto base_opt = brute_force_constrained(base, cap);
    r.base_feasible = base_opt.feasible;
    if (!base_opt.feasible) return r;
    r.base_objective = base_opt.objective;

    // Among all optimal assignments, prefer one whose lhs is a multiple of rho.
    const auto divisible_opt = enumerate_constrained(
        base,
        [&](const BinaryAssignment&, const std::vector<Coeff>& lhs) {
            return lhs[0] <= norm.bound && lhs[0] % rho == 0;
        },
        cap);
    r.optimum_lhs_divisible = divisible_opt.feasible && divisible_opt.objective == base_opt.objective;
    const BinaryAssignment& base_x = r.optimum_lhs_divisible ? divisible_opt.argmin : base_opt.argmin;
    r.base_argmin.assign(base_x.begin(), base_x.end());
    for (std::size_t i = 0; i < r.base_argmin.size(); ++i) {
        if (aug.map.slots[i].role == VariableRole::complemented_decision) r.base_argmin[i] ^= 1U;
    }
    r.base_lhs = check_feasible(p.inequalities.front(), r.base_argmin).lhs;

    const auto t = brute_force_qubo(aug.qubo, 1, cap);
    const BinaryAssignment& ax = t.argmins.front();
    r.augmented_objective = t.objective;
    r.transformed_penalty = penalty_value(aug, ax);
    r.recovered = recover(aug.map, ax);
    r.transformed_objective = evaluate(p.objective, r.recovered);
    const auto fc = check_feasible(p.inequalities.front(), r.recovered);
    r.recovered_lhs = fc.lhs;
    r.recovered_feasible = fc.feasible;
    r.match = r.recovered_feasible && r.transformed_objective == r.base_objective;
    return r;
}

}  // namespace qslack

#endif  // QSLACK_ORACLE_HPP_INCLUDED
