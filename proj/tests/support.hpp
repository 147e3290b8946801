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

// Test-only reference helpers. Nothing here goes through the library's
// incremental or Gray-code paths.

#ifndef QSLACK_TESTS_SUPPORT_HPP_INCLUDED
#define QSLACK_TESTS_SUPPORT_HPP_INCLUDED

#include <cstdint>
#include <limits>
#include <vector>

#include "qslack/qslack.hpp"

namespace qslack::testing {

// Dense upper-triangular form evaluated straight from the definition.
struct DenseForm {
    std::size_t n = 0;
    std::vector<std::vector<Coeff>> upper;
    Coeff offset = 0;

    explicit DenseForm(std::size_t dim) : n(dim), upper(dim, std::vector<Coeff>(dim, 0)) {}

    Coeff operator()(const BinaryAssignment& x) const {
        Coeff total = offset;
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i; j < n; ++j) total += upper[i][j] * x[i] * x[j];
        }
        return total;
    }
};

inline DenseForm dense_of(const QuboMatrix& q) {
    DenseForm d(q.dimension());
    d.offset = q.offset();
    for (const auto& e : q.entries()) d.upper[e.i][e.j] = e.value;
    return d;
}

inline BinaryAssignment bits_of(std::uint64_t code, std::size_t n) {
    BinaryAssignment x(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = (code >> i) & 1U;
    return x;
}

inline QuboMatrix random_qubo(SplitMix64& rng, std::size_t n, double density, Coeff lo, Coeff hi) {
    QuboMatrix q(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i; j < n; ++j) {
            if (rng.unit() < density) q.add(i, j, rng.uniform_int(lo, hi));
        }
    }
    return q;
}

inline BinaryAssignment random_bits(SplitMix64& rng, std::size_t n) {
    BinaryAssignment x(n);
    for (auto& b : x) b = rng.bit();
    return x;
}

// Plain nested-loop minimum of a dense form, optionally restricted by a predicate.
template <class Pred>
Coeff naive_min(const DenseForm& f, Pred&& admit, bool* found = nullptr) {
    Coeff best = std::numeric_limits<Coeff>::max();
    bool any = false;
    for (std::uint64_t code = 0; code < (std::uint64_t{1} << f.n); ++code) {
        const auto x = bits_of(code, f.n);
        if (!admit(x)) continue;
        any = true;
        best = std::min(best, f(x));
    }
    if (found) *found = any;
    return best;
}

inline Coeff dot(const std::vector<Coeff>& a, const BinaryAssignment& x) {
    Coeff s = 0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * x[i];
    return s;
}

}  // namespace qslack::testing

#endif  // QSLACK_TESTS_SUPPORT_HPP_INCLUDED
