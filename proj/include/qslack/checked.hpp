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

#ifndef QSLACK_CHECKED_HPP_INCLUDED
#define QSLACK_CHECKED_HPP_INCLUDED

#include <cstdint>
#include <stdexcept>
#include <string>

namespace qslack {

/// Coefficient and objective type. All model arithmetic is exact.
using Coeff = std::int64_t;

inline Coeff checked_add(Coeff a, Coeff b) {
    Coeff r;
    if (__builtin_add_overflow(a, b, &r)) {
        throw std::overflow_error("integer overflow in addition (" + std::to_string(a) + " + " +
                                  std::to_string(b) + ")");
    }
    return r;
}

inline Coeff checked_sub(Coeff a, Coeff b) {
    Coeff r;
    if (__builtin_sub_overflow(a, b, &r)) {
        throw std::overflow_error("integer overflow in subtraction (" + std::to_string(a) +
                                  " - " + std::to_string(b) + ")");
    }
    return r;
}

inline Coeff checked_mul(Coeff a, Coeff b) {
    Coeff r;
    if (__builtin_mul_overflow(a, b, &r)) {
        throw std::overflow_error("integer overflow in multiplication (" + std::to_string(a) +
                                  " * " + std::to_string(b) + ")");
    }
    return r;
}

inline Coeff checked_neg(Coeff a) { return checked_sub(0, a); }

inline Coeff checked_abs(Coeff a) { return a < 0 ? checked_neg(a) : a; }

}  // namespace qslack

#endif  // QSLACK_CHECKED_HPP_INCLUDED
