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

#ifndef QSLACK_QUBO_HPP_INCLUDED
#define QSLACK_QUBO_HPP_INCLUDED

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "qslack/checked.hpp"

namespace qslack {

/// Sense of the user-facing problem. Matrices are always minimized internally;
/// maximization problems are stored negated and re-negated on report.
enum class Sense { minimize, maximize };

/// One bit per variable, each 0 or 1.
using BinaryAssignment = std::vector<std::uint8_t>;

struct Entry {
    std::size_t i;
    std::size_t j;
    Coeff value;

    friend bool operator==(const Entry&, const Entry&) = default;
};

struct Neighbor {
    std::size_t index;
    Coeff weight;

    friend bool operator==(const Neighbor&, const Neighbor&) = default;
};

// Quadratic binary form
//
//     objective(x) = offset + sum_{i <= j} coeff(i, j) * x_i * x_j
//
// The logical model is upper triangular: coeff(i, j) with i < j is the whole
// interaction weight, not half of a symmetric pair, and coeff(i, i) is the linear
// term (x_i^2 = x_i). Storage is a per-variable sorted adjacency list holding each
// interaction on both endpoints so that a 1-flip delta costs O(degree). Zero
// coefficients are never stored.
class QuboMatrix {
public:
    QuboMatrix() = default;

    explicit QuboMatrix(std::size_t n, Sense sense = Sense::minimize)
        : linear_(n, 0), rows_(n), sense_(sense) {}

    std::size_t dimension() const noexcept { return linear_.size(); }

    Coeff offset() const noexcept { return offset_; }
    void set_offset(Coeff c) noexcept { offset_ = c; }
    void add_offset(Coeff c) { offset_ = checked_add(offset_, c); }

    Sense sense() const noexcept { return sense_; }
    void set_sense(Sense s) noexcept { sense_ = s; }

    /// Accumulates `value` onto entry (min(i,j), max(i,j)).
    void add(std::size_t i, std::size_t j, Coeff value) {
        check_index(i);
        check_index(j);
        if (value == 0) return;
        if (i == j) {
            Coeff& slot = linear_[i];
            const bool was_set = slot != 0;
            slot = checked_add(slot, value);
            if (was_set && slot == 0) --linear_count_;
            if (!was_set && slot != 0) ++linear_count_;
            return;
        }
        const Coeff updated = checked_add(coeff(i, j), value);
        set_pair(i, j, updated);
        set_pair(j, i, updated);
        if (updated == 0) --quadratic_count_;
        else if (updated == value) ++quadratic_count_;
    }

    Coeff coeff(std::size_t i, std::size_t j) const {
        check_index(i);
        check_index(j);
        if (i == j) return linear_[i];
        const auto& row = rows_[i];
        auto it = lower_bound(row, j);
        return (it != row.end() && it->index == j) ? it->weight : 0;
    }

    Coeff linear(std::size_t i) const {
        check_index(i);
        return linear_[i];
    }

    /// Off-diagonal neighbours of `i`, sorted by index.
    std::span<const Neighbor> neighbors(std::size_t i) const {
        check_index(i);
        return rows_[i];
    }

    std::size_t num_linear() const noexcept { return linear_count_; }
    std::size_t num_quadratic() const noexcept { return quadratic_count_; }
    std::size_t num_entries() const noexcept { return linear_count_ + quadratic_count_; }

    /// Visits stored entries in (i, j) order with i <= j.
    template <class Fn>
    void for_each_entry(Fn&& fn) const {
        for (std::size_t i = 0; i < dimension(); ++i) {
            if (linear_[i] != 0) fn(i, i, linear_[i]);
            for (const auto& nb : rows_[i]) {
                if (nb.index > i) fn(i, nb.index, nb.weight);
            }
        }
    }

    std::vector<Entry> entries() const {
        std::vector<Entry> out;
        out.reserve(num_entries());
        for_each_entry([&](std::size_t i, std::size_t j, Coeff v) { out.push_back({i, j, v}); });
        return out;
    }

    /// Sum of absolute entry values, excluding the offset.
    Coeff abs_sum() const {
        Coeff total = 0;
        for_each_entry([&](std::size_t, std::size_t, Coeff v) {
            total = checked_add(total, checked_abs(v));
        });
        return total;
    }

    // Upper bound on |objective(x)| and on every |flip delta|. When this does
    // not throw, unchecked incremental arithmetic on the matrix cannot overflow.
    Coeff magnitude() const {
        const Coeff s = abs_sum();
        return checked_add(checked_add(s, s), checked_abs(offset_));
    }

    /// Appends `k` variables with no entries.
    void grow(std::size_t k) {
        linear_.resize(linear_.size() + k, 0);
        rows_.resize(rows_.size() + k);
    }

    // Adds scale * t_a * t_b for every unordered pair a < b of `terms`, which must
    // be sorted by strictly increasing index. Rows are merged in one pass each,
    // so a dense outer product costs O(nnz) rather than O(nnz * degree).
    void add_pairwise(std::span<const Neighbor> terms, Coeff scale) {
        if (scale == 0 || terms.size() < 2) return;
        for (std::size_t k = 1; k < terms.size(); ++k) {
            if (terms[k].index <= terms[k - 1].index) {
                throw std::invalid_argument("add_pairwise: terms must be strictly increasing");
            }
        }
        check_index(terms.back().index);
        std::vector<Neighbor> merged;
        for (const auto& self : terms) {
            const Coeff own = checked_mul(scale, self.weight);
            auto& row = rows_[self.index];
            merged.clear();
            merged.reserve(row.size() + terms.size());
            auto it = row.begin();
            for (const auto& other : terms) {
                if (other.index == self.index) continue;
                while (it != row.end() && it->index < other.index) merged.push_back(*it++);
                Coeff add = checked_mul(own, other.weight);
                if (it != row.end() && it->index == other.index) add = checked_add(add, (it++)->weight);
                if (add != 0) merged.push_back({other.index, add});
            }
            merged.insert(merged.end(), it, row.end());
            row.swap(merged);
        }
        recount_quadratic();
    }

    friend bool operator==(const QuboMatrix& a, const QuboMatrix& b) {
        return a.sense_ == b.sense_ && a.offset_ == b.offset_ && a.linear_ == b.linear_ &&
               a.rows_ == b.rows_;
    }

private:
    static std::vector<Neighbor>::const_iterator lower_bound(const std::vector<Neighbor>& row, std::size_t j) {
        return std::lower_bound(row.begin(), row.end(), j,
                                [](const Neighbor& nb, std::size_t idx) { return nb.index < idx; });
    }

    void check_index(std::size_t i) const {
        if (i >= dimension()) {
            throw std::out_of_range("variable index " + std::to_string(i) +
                                    " out of range for dimension " + std::to_string(dimension()));
        }
    }

    void set_pair(std::size_t i, std::size_t j, Coeff value) {
        auto& row = rows_[i];
        auto it = std::lower_bound(row.begin(), row.end(), j,
                                   [](const Neighbor& nb, std::size_t idx) { return nb.index < idx; });
        const bool present = it != row.end() && it->index == j;
        if (value == 0) {
            if (present) row.erase(it);
        } else if (present) {
            it->weight = value;
        } else {
            row.insert(it, Neighbor{j, value});
        }
    }

    void recount_quadratic() {
        std::size_t total = 0;
        for (const auto& row : rows_) total += row.size();
        quadratic_count_ = total / 2;
    }

    std::vector<Coeff> linear_;
    std::vector<std::vector<Neighbor>> rows_;
    Coeff offset_ = 0;
    Sense sense_ = Sense::minimize;
    std::size_t linear_count_ = 0;
    std::size_t quadratic_count_ = 0;
};

/// Converts an internal (minimization) objective to the user-facing sense.
inline Coeff user_objective(const QuboMatrix& q, Coeff internal) {
    return q.sense() == Sense::maximize ? checked_neg(internal) : internal;
}

inline void check_assignment(const QuboMatrix& q, std::span<const std::uint8_t> x) {
    if (x.size() != q.dimension()) {
        throw std::invalid_argument("assignment length " + std::to_string(x.size()) +
                                    " does not match dimension " + std::to_string(q.dimension()));
    }
    for (auto b : x) {
        if (b > 1) throw std::invalid_argument("assignment entries must be 0 or 1");
    }
}

inline Coeff evaluate(const QuboMatrix& q, std::span<const std::uint8_t> x) {
    check_assignment(q, x);
    Coeff total = q.offset();
    for (std::size_t i = 0; i < q.dimension(); ++i) {
        if (!x[i]) continue;
        total = checked_add(total, q.linear(i));
        for (const auto& nb : q.neighbors(i)) {
            if (nb.index > i && x[nb.index]) total = checked_add(total, nb.weight);
        }
    }
    return total;
}

/// evaluate(q, x with bit i flipped) - evaluate(q, x), in O(degree of i).
inline Coeff flip_delta(const QuboMatrix& q, std::span<const std::uint8_t> x, std::size_t i) {
    if (x.size() != q.dimension()) {
        throw std::invalid_argument("assignment length does not match dimension");
    }
    Coeff field = q.linear(i);
    for (const auto& nb : q.neighbors(i)) {
        if (x[nb.index]) field = checked_add(field, nb.weight);
    }
    return x[i] ? checked_neg(field) : field;
}

/// Per-variable flip deltas for the current assignment, plus its objective.
struct GainCache {
    std::vector<Coeff> gain;
    Coeff objective = 0;
};

inline GainCache init_gains(const QuboMatrix& q, std::span<const std::uint8_t> x) {
    GainCache cache;
    cache.objective = evaluate(q, x);
    cache.gain.resize(q.dimension());
    for (std::size_t i = 0; i < q.dimension(); ++i) cache.gain[i] = flip_delta(q, x, i);
    return cache;
}

// Flips bit i and updates the cache in O(degree of i). Unchecked arithmetic:
// callers working near the Coeff limits must first confirm q.magnitude() fits.
inline void apply_flip(const QuboMatrix& q, BinaryAssignment& x, std::size_t i, GainCache& cache) {
    if (i >= x.size() || x.size() != q.dimension() || cache.gain.size() != x.size()) {
        throw std::out_of_range("apply_flip: index or state size mismatch");
    }
    cache.objective += cache.gain[i];
    cache.gain[i] = -cache.gain[i];
    x[i] ^= 1U;
    const bool now_on = x[i] != 0;
    for (const auto& nb : q.neighbors(i)) {
        // neighbour field changes by +-w; its flip delta changes sign with its own bit
        const Coeff change = now_on ? nb.weight : -nb.weight;
        cache.gain[nb.index] += x[nb.index] ? -change : change;
    }
}

/// Returns q' with objective'(x) = objective(x) + weight * (c.x + constant)^2.
inline QuboMatrix add_penalty_square(const QuboMatrix& q, std::span<const Coeff> linear,
                                     Coeff constant, Coeff weight) {
    if (weight <= 0) throw std::invalid_argument("penalty weight must be positive");
    if (linear.size() != q.dimension()) {
        throw std::invalid_argument("penalty coefficient vector length " +
                                    std::to_string(linear.size()) + " does not match dimension " +
                                    std::to_string(q.dimension()));
    }
    QuboMatrix out = q;
    std::vector<Neighbor> support;
    for (std::size_t i = 0; i < linear.size(); ++i) {
        if (linear[i] == 0) continue;
        support.push_back({i, linear[i]});
        const Coeff c = linear[i];
        const Coeff diag = checked_add(checked_mul(c, c), checked_mul(2, checked_mul(c, constant)));
        out.add(i, i, checked_mul(weight, diag));
    }
    out.add_pairwise(support, checked_mul(2, weight));
    out.add_offset(checked_mul(weight, checked_mul(constant, constant)));
    return out;
}

// Substitutes x_i = 1 - y_i. Linear term L moves into the offset and flips sign;
// each interaction w with j adds w to j's linear term and flips sign.
inline QuboMatrix complement_variable(const QuboMatrix& q, std::size_t i) {
    QuboMatrix out = q;
    const Coeff lin = q.linear(i);
    out.add_offset(lin);
    out.add(i, i, checked_mul(-2, lin));
    for (const auto& nb : q.neighbors(i)) {
        out.add(nb.index, nb.index, nb.weight);
        out.add(i, nb.index, checked_mul(-2, nb.weight));
    }
    return out;
}

inline QuboMatrix extend(const QuboMatrix& q, std::size_t k) {
    QuboMatrix out = q;
    out.grow(k);
    return out;
}

}  // namespace qslack

#endif  // QSLACK_QUBO_HPP_INCLUDED
