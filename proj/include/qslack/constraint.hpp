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

#ifndef QSLACK_CONSTRAINT_HPP_INCLUDED
#define QSLACK_CONSTRAINT_HPP_INCLUDED

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "qslack/checked.hpp"
#include "qslack/qubo.hpp"

namespace qslack {

/// a . x <= bound
struct LinearInequality {
    std::vector<Coeff> coefficients;
    Coeff bound = 0;

    friend bool operator==(const LinearInequality&, const LinearInequality&) = default;
};

/// a . x == bound
struct LinearEquality {
    std::vector<Coeff> coefficients;
    Coeff bound = 0;

    friend bool operator==(const LinearEquality&, const LinearEquality&) = default;
};

/// min x'Qx subject to linear inequalities and equalities over {0,1}^n.
struct ConstrainedProblem {
    QuboMatrix objective;
    std::vector<LinearInequality> inequalities;
    std::vector<LinearEquality> equalities;

    std::size_t dimension() const noexcept { return objective.dimension(); }

    void validate() const {
        for (const auto& c : inequalities) {
            if (c.coefficients.size() != dimension()) {
                throw std::invalid_argument("inequality length does not match objective dimension");
            }
        }
        for (const auto& c : equalities) {
            if (c.coefficients.size() != dimension()) {
                throw std::invalid_argument("equality length does not match objective dimension");
            }
        }
    }

    friend bool operator==(const ConstrainedProblem&, const ConstrainedProblem&) = default;
};

/// Scaling divisor rho and base penalty M; the scaled problem's penalty is rho^2 * M.
struct TransformConfig {
    Coeff rho = 1;
    Coeff penalty = 1;
    /// Per-inequality override of `penalty`; empty means use `penalty` everywhere.
    std::vector<Coeff> inequality_penalties;

    void validate() const {
        if (rho < 1) throw std::invalid_argument("rho must be a positive integer");
        if (penalty < 1) throw std::invalid_argument("penalty M must be a positive integer");
        for (auto m : inequality_penalties) {
            if (m < 1) throw std::invalid_argument("penalty M must be a positive integer");
        }
    }

    /// M' = rho^2 * M, the weight the penalty carries on the divided constraint.
    Coeff scaled_penalty() const { return checked_mul(checked_mul(rho, rho), penalty); }

    Coeff penalty_for(std::size_t k) const {
        return inequality_penalties.empty() ? penalty : inequality_penalties.at(k);
    }
};

// Power-of-two slack encoding of the scaled range [0, B], B = floor(b / rho).
// The bound is padded by c so that the m slack bits cover exactly [0, 2^m - 1].
struct SlackEncoding {
    Coeff scaled_bound = 0;        // B
    std::size_t count = 0;         // m
    std::vector<Coeff> weights;    // D = 1, 2, ..., 2^(m-1)
    Coeff pad = 0;                 // c = 2^m - 1 - B

    Coeff capacity() const noexcept { return (Coeff{1} << count) - 1; }

    friend bool operator==(const SlackEncoding&, const SlackEncoding&) = default;
};

enum class VariableRole { decision, complemented_decision, slack };

struct VariableSlot {
    VariableRole role = VariableRole::decision;
    std::size_t original = 0;  // decision roles only
    Coeff slack_weight = 0;    // slack role only; unscaled D entry

    friend bool operator==(const VariableSlot&, const VariableSlot&) = default;
};

/// Maps each augmented index back to an original decision variable or a slack bit.
struct VariableMap {
    std::vector<VariableSlot> slots;
    std::size_t original_dimension = 0;

    std::size_t size() const noexcept { return slots.size(); }
};

struct SlackBlock {
    std::size_t first = 0;  // augmented index of the first slack bit
    SlackEncoding encoding;
    Coeff penalty = 1;      // M for this inequality
};

/// Penalized QUBO over decision + slack bits, with everything needed to map back.
struct AugmentedQubo {
    QuboMatrix qubo;
    VariableMap map;
    Coeff rho = 1;
    Coeff penalty = 1;
    ConstrainedProblem original;
    /// Inequalities after complementing, over augmented decision indices.
    std::vector<LinearInequality> normalized;
    std::vector<LinearEquality> normalized_equalities;
    std::vector<SlackBlock> blocks;

    std::size_t slack_count() const noexcept {
        std::size_t m = 0;
        for (const auto& b : blocks) m += b.encoding.count;
        return m;
    }
};

struct NormalizedInequality {
    QuboMatrix objective;
    LinearInequality inequality;
    std::vector<std::size_t> complemented;
};

// Replaces x_i = 1 - y_i wherever a_i < 0: a_i x_i becomes -a_i y_i + a_i, so
// the bound becomes b - a_i. The objective is complemented at the same indices.
inline NormalizedInequality normalize_inequality(const QuboMatrix& q, const LinearInequality& ineq) {
    if (ineq.coefficients.size() != q.dimension()) {
        throw std::invalid_argument("inequality length does not match objective dimension");
    }
    NormalizedInequality out{q, ineq, {}};
    for (std::size_t i = 0; i < ineq.coefficients.size(); ++i) {
        const Coeff a = ineq.coefficients[i];
        if (a >= 0) continue;
        out.inequality.coefficients[i] = checked_neg(a);
        out.inequality.bound = checked_sub(out.inequality.bound, a);
        out.objective = complement_variable(out.objective, i);
        out.complemented.push_back(i);
    }
    if (out.inequality.bound < 0) {
        throw std::domain_error("constraint infeasible over {0,1}^n: normalized bound " +
                                std::to_string(out.inequality.bound) + " < 0");
    }
    return out;
}

/// m = ceil(log2(B + 1)) for B = floor(b / rho), and 0 when B = 0.
inline std::size_t slack_count(Coeff b, Coeff rho) {
    if (b < 0) throw std::invalid_argument("slack_count: bound must be non-negative");
    if (rho < 1) throw std::invalid_argument("slack_count: rho must be a positive integer");
    return static_cast<std::size_t>(std::bit_width(static_cast<std::uint64_t>(b / rho)));
}

inline SlackEncoding build_slack_encoding(Coeff b, Coeff rho) {
    SlackEncoding enc;
    enc.count = slack_count(b, rho);
    enc.scaled_bound = b / rho;
    for (std::size_t k = 0; k < enc.count; ++k) enc.weights.push_back(Coeff{1} << k);
    enc.pad = enc.capacity() - enc.scaled_bound;
    return enc;
}

/// Documented exactness bound for M: exceeds the spread of any objective.
inline Coeff default_penalty(const QuboMatrix& q) { return checked_add(1, q.abs_sum()); }

inline QuboMatrix embed_equality(const QuboMatrix& q, std::span<const Coeff> a, Coeff b_eq, Coeff M) {
    return add_penalty_square(q, a, checked_neg(b_eq), M);
}

// Builds
//
//     x'Qx + sum_k M_k (a_k . x + rho c_k - rho D_k . s_k)^2
//
// which equals x'Qx + sum_k rho^2 M_k (a_k . x / rho + c_k - D_k . s_k)^2 exactly;
// the denominators are cleared so the matrix stays integral. A block's penalty
// vanishes iff a_k . x is one of 0, rho, ..., rho * floor(b_k / rho).
// Equalities are embedded unscaled with weight cfg.penalty.
inline AugmentedQubo transform(const ConstrainedProblem& p, const TransformConfig& cfg) {
    p.validate();
    cfg.validate();
    if (!cfg.inequality_penalties.empty() && cfg.inequality_penalties.size() != p.inequalities.size()) {
        throw std::invalid_argument("per-inequality penalty count does not match inequality count");
    }
    const std::size_t n = p.dimension();

    // Complement every variable with a negative coefficient in some inequality.
    std::vector<bool> flip(n, false);
    for (const auto& ineq : p.inequalities) {
        for (std::size_t i = 0; i < n; ++i) flip[i] = flip[i] || ineq.coefficients[i] < 0;
    }

    AugmentedQubo aug;
    aug.rho = cfg.rho;
    aug.penalty = cfg.penalty;
    aug.original = p;
    aug.map.original_dimension = n;

    QuboMatrix q = p.objective;
    for (std::size_t i = 0; i < n; ++i) {
        if (flip[i]) q = complement_variable(q, i);
        aug.map.slots.push_back({flip[i] ? VariableRole::complemented_decision : VariableRole::decision, i, 0});
    }
    auto complement_row = [&](std::vector<Coeff>& a, Coeff& bound) {
        for (std::size_t i = 0; i < n; ++i) {
            if (!flip[i]) continue;
            bound = checked_sub(bound, a[i]);
            a[i] = checked_neg(a[i]);
        }
    };
    for (const auto& ineq : p.inequalities) {
        LinearInequality norm = ineq;
        complement_row(norm.coefficients, norm.bound);
        if (std::any_of(norm.coefficients.begin(), norm.coefficients.end(), [](Coeff a) { return a < 0; })) {
            throw std::invalid_argument(
                "a variable has coefficients of both signs across inequalities; no single complement "
                "normalizes all of them");
        }
        if (norm.bound < 0) {
            throw std::domain_error("constraint infeasible over {0,1}^n: normalized bound " +
                                    std::to_string(norm.bound) + " < 0");
        }
        aug.normalized.push_back(std::move(norm));
    }
    for (const auto& eq : p.equalities) {
        LinearEquality norm = eq;
        complement_row(norm.coefficients, norm.bound);
        aug.normalized_equalities.push_back(std::move(norm));
    }

    std::size_t next = n;
    for (std::size_t k = 0; k < aug.normalized.size(); ++k) {
        SlackBlock block{next, build_slack_encoding(aug.normalized[k].bound, cfg.rho), cfg.penalty_for(k)};
        for (auto w : block.encoding.weights) aug.map.slots.push_back({VariableRole::slack, 0, w});
        next += block.encoding.count;
        aug.blocks.push_back(std::move(block));
    }
    q.grow(next - n);

    for (std::size_t k = 0; k < aug.normalized.size(); ++k) {
        const auto& block = aug.blocks[k];
        std::vector<Coeff> c(next, 0);
        std::copy(aug.normalized[k].coefficients.begin(), aug.normalized[k].coefficients.end(), c.begin());
        for (std::size_t s = 0; s < block.encoding.count; ++s) {
            c[block.first + s] = checked_neg(checked_mul(cfg.rho, block.encoding.weights[s]));
        }
        q = add_penalty_square(q, c, checked_mul(cfg.rho, block.encoding.pad), block.penalty);
    }
    for (const auto& eq : aug.normalized_equalities) {
        std::vector<Coeff> c(next, 0);
        std::copy(eq.coefficients.begin(), eq.coefficients.end(), c.begin());
        q = embed_equality(q, c, eq.bound, cfg.penalty);
    }
    aug.qubo = std::move(q);
    return aug;
}

/// Total penalty of an augmented assignment (zero iff every encoded constraint holds).
inline Coeff penalty_value(const AugmentedQubo& aug, std::span<const std::uint8_t> x) {
    if (x.size() != aug.map.size()) throw std::invalid_argument("augmented assignment length mismatch");
    Coeff total = 0;
    for (std::size_t k = 0; k < aug.blocks.size(); ++k) {
        const auto& block = aug.blocks[k];
        Coeff r = checked_mul(aug.rho, block.encoding.pad);
        const auto& a = aug.normalized[k].coefficients;
        for (std::size_t i = 0; i < a.size(); ++i) {
            if (x[i]) r = checked_add(r, a[i]);
        }
        for (std::size_t s = 0; s < block.encoding.count; ++s) {
            if (x[block.first + s]) r = checked_sub(r, checked_mul(aug.rho, block.encoding.weights[s]));
        }
        total = checked_add(total, checked_mul(block.penalty, checked_mul(r, r)));
    }
    for (const auto& eq : aug.normalized_equalities) {
        Coeff r = checked_neg(eq.bound);
        for (std::size_t i = 0; i < eq.coefficients.size(); ++i) {
            if (x[i]) r = checked_add(r, eq.coefficients[i]);
        }
        total = checked_add(total, checked_mul(aug.penalty, checked_mul(r, r)));
    }
    return total;
}

struct FeasibilityCheck {
    Coeff lhs = 0;
    bool feasible = true;
};

inline FeasibilityCheck check_feasible(const LinearInequality& ineq, std::span<const std::uint8_t> x) {
    if (x.size() != ineq.coefficients.size()) {
        throw std::invalid_argument("assignment length does not match inequality length");
    }
    Coeff lhs = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x[i]) lhs = checked_add(lhs, ineq.coefficients[i]);
    }
    return {lhs, lhs <= ineq.bound};
}

/// True iff x satisfies every inequality and equality of the (unscaled) problem.
inline bool is_feasible(const ConstrainedProblem& p, std::span<const std::uint8_t> x) {
    for (const auto& ineq : p.inequalities) {
        if (!check_feasible(ineq, x).feasible) return false;
    }
    for (const auto& eq : p.equalities) {
        if (check_feasible({eq.coefficients, eq.bound}, x).lhs != eq.bound) return false;
    }
    return true;
}

/// Primes <= limit, ascending (sieve of Eratosthenes).
inline std::vector<Coeff> prime_rhos(Coeff limit) {
    std::vector<Coeff> primes;
    if (limit < 2) return primes;
    std::vector<bool> composite(static_cast<std::size_t>(limit) + 1, false);
    for (Coeff p = 2; p <= limit; ++p) {
        if (composite[static_cast<std::size_t>(p)]) continue;
        primes.push_back(p);
        for (Coeff k = p * p; k <= limit; k += p) composite[static_cast<std::size_t>(k)] = true;
    }
    return primes;
}

/// Drops slack bits and undoes complements.
inline BinaryAssignment recover(const VariableMap& map, std::span<const std::uint8_t> x) {
    if (x.size() != map.size()) {
        throw std::invalid_argument("augmented assignment length " + std::to_string(x.size()) +
                                    " does not match variable map size " + std::to_string(map.size()));
    }
    BinaryAssignment out(map.original_dimension, 0);
    for (std::size_t k = 0; k < map.size(); ++k) {
        const auto& slot = map.slots[k];
        if (slot.role == VariableRole::slack) continue;
        out[slot.original] = slot.role == VariableRole::complemented_decision ? (x[k] ^ 1U) : x[k];
    }
    return out;
}

/// Inverse of recover: places an original assignment and the given slack bits.
inline BinaryAssignment lift(const VariableMap& map, std::span<const std::uint8_t> original,
                             std::span<const std::uint8_t> slack_bits) {
    if (original.size() != map.original_dimension ||
        original.size() + slack_bits.size() != map.size()) {
        throw std::invalid_argument("lift: length mismatch");
    }
    BinaryAssignment out(map.size(), 0);
    std::size_t s = 0;
    for (std::size_t k = 0; k < map.size(); ++k) {
        const auto& slot = map.slots[k];
        if (slot.role == VariableRole::slack) {
            out[k] = slack_bits[s++];
        } else {
            out[k] = slot.role == VariableRole::complemented_decision ? (original[slot.original] ^ 1U)
                                                                       : original[slot.original];
        }
    }
    return out;
}

// Entries of the augmented matrix that involve at least one slack bit.
struct SlackTermCount {
    std::size_t linear = 0;
    std::size_t quadratic = 0;
};

inline SlackTermCount count_slack_terms(const AugmentedQubo& aug) {
    SlackTermCount out;
    const std::size_t n = aug.map.original_dimension;
    aug.qubo.for_each_entry([&](std::size_t i, std::size_t j, Coeff) {
        if (i == j && i >= n) ++out.linear;
        if (i != j && j >= n) ++out.quadratic;
    });
    return out;
}

}  // namespace qslack

#endif  // QSLACK_CONSTRAINT_HPP_INCLUDED
