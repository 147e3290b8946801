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

#include <set>
#include <stdexcept>

#include "catch2/catch_amalgamated.hpp"
#include "qslack/oracle.hpp"
#include "support.hpp"

namespace qslack {

namespace {

QuboMatrix diag(std::initializer_list<Coeff> values) {
    QuboMatrix q(values.size());
    std::size_t i = 0;
    for (auto v : values) q.add(i, i, v), ++i;
    return q;
}

ConstrainedProblem random_problem(SplitMix64& rng, std::size_t n, Coeff b_max) {
    ConstrainedProblem p;
    p.objective = testing::random_qubo(rng, n, 0.6, -10, 10);
    std::vector<Coeff> a(n);
    for (auto& v : a) v = rng.uniform_int(0, 10);
    p.inequalities.push_back({a, rng.uniform_int(0, b_max)});
    return p;
}

}  // namespace

TEST_CASE("brute_force_qubo") {
    SECTION("positive diagonal") {
        const auto r = brute_force_qubo(diag({1, 1}));
        CHECK(r.objective == 0);
        CHECK(r.argmin_count == 1);
        CHECK(r.argmins.front() == BinaryAssignment{0, 0});
    }
    SECTION("frustrated pair has two argmins") {
        auto q = diag({-1, -1});
        q.add(0, 1, 3);
        const auto r = brute_force_qubo(q);
        CHECK(r.objective == -1);
        CHECK(r.argmin_count == 2);
        std::set<BinaryAssignment> got(r.argmins.begin(), r.argmins.end());
        CHECK(got == std::set<BinaryAssignment>{{1, 0}, {0, 1}});
    }
    SECTION("zero matrix: every state is optimal, list truncated") {
        const auto r = brute_force_qubo(QuboMatrix(5), 4);
        CHECK(r.objective == 0);
        CHECK(r.argmin_count == 32);
        CHECK(r.argmins.size() == 4);
    }
    SECTION("size cap") {
        CHECK_THROWS_AS(brute_force_qubo(QuboMatrix(27)), std::length_error);
        CHECK_THROWS_AS(brute_force_qubo(QuboMatrix(9), 1, 8), std::length_error);
    }
    SECTION("agrees with a nested-loop minimum") {
        SplitMix64 rng(100);
        for (int rep = 0; rep < 40; ++rep) {
            const std::size_t n = 1 + rng.index(12);
            auto q = testing::random_qubo(rng, n, 0.5, -25, 25);
            q.set_offset(rng.uniform_int(-4, 4));
            const auto ref = testing::dense_of(q);
            const auto r = brute_force_qubo(q);
            REQUIRE(r.objective == testing::naive_min(ref, [](const BinaryAssignment&) { return true; }));
            for (const auto& x : r.argmins) REQUIRE(ref(x) == r.objective);
        }
    }
}

TEST_CASE("brute_force_constrained") {
    SECTION("cardinality cuts the separable optimum") {
        ConstrainedProblem p{diag({-1, -1, -1}), {{{1, 1, 1}, 2}}, {}};
        const auto r = brute_force_constrained(p);
        REQUIRE(r.feasible);
        CHECK(r.objective == -2);
        CHECK(r.lhs == 2);
    }
    SECTION("a slack constraint changes nothing") {
        SplitMix64 rng(6);
        auto q = testing::random_qubo(rng, 7, 0.5, -10, 10);
        ConstrainedProblem p{q, {{{1, 2, 3, 1, 2, 3, 1}, 13}}, {}};
        CHECK(brute_force_constrained(p).objective == brute_force_qubo(q).objective);
    }
    SECTION("zero bound forces the zero vector") {
        auto q = diag({-3, -4});
        q.set_offset(9);
        ConstrainedProblem p{q, {{{1, 2}, 0}}, {}};
        const auto r = brute_force_constrained(p);
        CHECK(r.objective == 9);
        CHECK(r.argmin == BinaryAssignment{0, 0});
    }
    SECTION("unsatisfiable equality reports infeasible") {
        ConstrainedProblem p{QuboMatrix(2), {}, {{{2, 2}, 3}}};
        CHECK_FALSE(brute_force_constrained(p).feasible);
    }
    SECTION("equalities are honoured") {
        ConstrainedProblem p{diag({-1, -2, -3}), {}, {{{1, 1, 1}, 1}}};
        const auto r = brute_force_constrained(p);
        CHECK(r.objective == -3);
        CHECK(r.argmin == BinaryAssignment{0, 0, 1});
    }
    SECTION("never better than the unconstrained optimum, and matches a nested loop") {
        SplitMix64 rng(17);
        for (int rep = 0; rep < 50; ++rep) {
            const auto p = random_problem(rng, 1 + rng.index(10), 30);
            const auto r = brute_force_constrained(p);
            REQUIRE(r.feasible);
            REQUIRE(r.objective >= brute_force_qubo(p.objective).objective);
            const auto& ineq = p.inequalities[0];
            REQUIRE(r.objective == testing::naive_min(testing::dense_of(p.objective), [&](const BinaryAssignment& x) {
                        return testing::dot(ineq.coefficients, x) <= ineq.bound;
                    }));
        }
    }
}

TEST_CASE("verify_lemma") {
    SECTION("rho = 1 always matches") {
        SplitMix64 rng(55);
        for (int rep = 0; rep < 50; ++rep) {
            const auto p = random_problem(rng, 1 + rng.index(9), 20);
            const auto r = verify_lemma(p, 1, default_penalty(p.objective));
            REQUIRE(r.preconditions());
            REQUIRE(r.match_expected());
            REQUIRE(r.match);
            REQUIRE(r.transformed_penalty == 0);
        }
    }
    SECTION("b = 6, rho = 3 with the optimum at a . x* = 6 matches") {
        ConstrainedProblem p{diag({-5, -5, -1}), {{{2, 4, 3}, 6}}, {}};
        const auto r = verify_lemma(p, 3, default_penalty(p.objective));
        CHECK(r.base_objective == -10);
        CHECK(r.base_lhs == 6);
        CHECK(r.bound_divisible);
        CHECK(r.optimum_lhs_divisible);
        CHECK(r.match);
        CHECK(r.recovered == BinaryAssignment{1, 1, 0});
    }
    SECTION("b = 7, rho = 2 with the optimum at a . x* = 7 is reported, not required") {
        ConstrainedProblem p{diag({-10, -1, -10}), {{{3, 5, 4}, 7}}, {}};
        const auto r = verify_lemma(p, 2, default_penalty(p.objective));
        CHECK(r.base_objective == -20);
        CHECK(r.base_lhs == 7);
        CHECK_FALSE(r.bound_divisible);
        CHECK_FALSE(r.preconditions());
        CHECK_FALSE(r.match);
        CHECK(r.transformed_objective == -10);
        CHECK(r.recovered_feasible);
    }
    SECTION("complemented variables are handled") {
        ConstrainedProblem p{diag({-3, 2, -1}), {{{-2, 3, 1}, 1}}, {}};
        const auto r = verify_lemma(p, 1, default_penalty(p.objective));
        CHECK(r.match);
        CHECK(check_feasible(p.inequalities[0], r.base_argmin).feasible);
        CHECK(evaluate(p.objective, r.base_argmin) == r.base_objective);
    }
    SECTION("zero-penalty recoveries are feasible for every rho") {
        SplitMix64 rng(90);
        for (int rep = 0; rep < 40; ++rep) {
            const auto p = random_problem(rng, 1 + rng.index(8), 25);
            for (Coeff rho : {1, 2, 3, 5, 7, 30}) {
                const auto r = verify_lemma(p, rho, default_penalty(p.objective));
                if (r.transformed_penalty == 0) REQUIRE(r.recovered_feasible);
                if (r.match_expected()) REQUIRE(r.match);
                REQUIRE(r.transformed_objective >= r.base_objective);
            }
        }
    }
    SECTION("preconditions on shape") {
        ConstrainedProblem none{QuboMatrix(2), {}, {}};
        CHECK_THROWS_AS(verify_lemma(none, 1, 1), std::invalid_argument);
    }
}

}  // namespace qslack
