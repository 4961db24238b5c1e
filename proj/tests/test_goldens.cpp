// Copyright 2026 The LL2 Authors.
// SPDX-License-Identifier: Apache-2.0

#include "support.hpp"

#include "ll2/goldens.hpp"
#include "ll2/occurrences.hpp"

#include "doctest.h"

#include <algorithm>

using namespace ll2;
using namespace ll2::gold;

namespace {

const std::vector<Word> kConcreteMemory = {399, 234, 0, 75, 399, 399, Word("18446744073709551615"), 20};

std::vector<Word> random_list(std::mt19937_64& rng, std::size_t max_len)
{
    std::vector<Word> out(static_cast<std::size_t>(test::uniform(rng, 0, static_cast<std::int64_t>(max_len))));
    for (auto& w : out) {
        w = test::uniform(rng, 0, 3) == 0 ? Word(test::uniform(rng, -50, 50)) : Word(test::uniform(rng, 0, 2));
    }
    return out;
}

} // namespace

TEST_CASE("occurlist on the concrete test case")
{
    CHECK(occurlist(399, kConcreteMemory) == 3);
    CHECK(occurlist(399, {}) == 0);
    CHECK(occurlist(Word("18446744073709551615"), kConcreteMemory) == 1);
}

TEST_CASE("occurlist agrees with filter-and-count")
{
    std::mt19937_64 rng(21);
    for (int i = 0; i < 2000; ++i) {
        auto lst = random_list(rng, 8);
        Word val = test::uniform(rng, 0, 2);
        CHECK(occurlist(val, lst) == static_cast<long>(std::count(lst.begin(), lst.end(), val)));
    }
}

TEST_CASE("factorial and sum goldens")
{
    CHECK(factorial(0) == 1);
    CHECK(factorial(5) == 120);
    CHECK(factorial(25) == Word("15511210043330985984000000"));
    CHECK(factorial(-3) == 1);
    CHECK(list_sum(kConcreteMemory) == Word("18446744073709553141"));
    CHECK(list_sum({}) == 0);
}

TEST_CASE("both folds of occur-arr count the occurrences")
{
    CHECK(fold_tailrec(occur_arr(), 399, kConcreteMemory, 0, 8) == 3);
    CHECK(fold_structural(occur_arr(), 399, kConcreteMemory, 0, 8) == 3);
    CHECK(fold_tailrec(occur_arr(), 399, kConcreteMemory, 3, 3) == 0);
    CHECK(fold_structural(sum_arr(), 0, kConcreteMemory, 8, 8) == 0);
    CHECK(fold_tailrec(sum_arr(), 0, kConcreteMemory, 0, 3) == 633);
    CHECK_THROWS_AS(fold_tailrec(occur_arr(), 399, kConcreteMemory, 0, 9), Trap);
    CHECK_THROWS_AS(fold_structural(occur_arr(), 399, kConcreteMemory, 5, 4), Trap);
}

TEST_CASE("fold orders agree on random order-independent steps")
{
    std::mt19937_64 rng(22);
    for (int i = 0; i < 3000; ++i) {
        auto spec = random_fold(rng);
        auto mem = random_list(rng, 8);
        Word aux = test::uniform(rng, -2, 2);
        auto first = static_cast<std::size_t>(test::uniform(rng, 0, static_cast<std::int64_t>(mem.size())));
        auto last = static_cast<std::size_t>(test::uniform(rng, static_cast<std::int64_t>(first),
                                                           static_cast<std::int64_t>(mem.size())));
        INFO(spec.name);
        CHECK(fold_tailrec(spec, aux, mem, first, last) == fold_structural(spec, aux, mem, first, last));
    }
}

TEST_CASE("an order-dependent step tells the two folds apart")
{
    FoldSpec digits{"10 * acc + e", [](const Word& acc, const Word& e, const Word&) { return 10 * acc + e; }, 0};
    const std::vector<Word> mem = {1, 2, 3};
    CHECK(fold_tailrec(digits, 0, mem, 0, 3) == 123);
    CHECK(fold_structural(digits, 0, mem, 0, 3) == 321);
}

TEST_SUITE("theorem chain")
{
    using walk::def_semantics;

    TEST_CASE("passes on the length-8 grid over {0, 399}")
    {
        auto pre = def_semantics(occ::program(), occ::preamble_request());
        auto loop = def_semantics(occ::program(), occ::loop_request());
        auto states = occ::chain_grid(8, {0, 399}, {0, 399});
        auto r = check_theorem_chain(pre, loop, states);
        INFO(describe_chain(r));
        CHECK(r.passed());
        CHECK(r.skipped == 0);
        CHECK(r.interpreter.cases == states.size());
    }

    TEST_CASE("empty memory gives zero on both sides")
    {
        auto pre = def_semantics(occ::program(), occ::preamble_request());
        auto loop = def_semantics(occ::program(), occ::loop_request());
        auto s = occ::entry_state({}, 399);
        auto r = check_theorem_chain(pre, loop, {s});
        CHECK(r.passed());
        CHECK(walk::compose(loop, pre).apply(s).locals[6] == 0);
    }

    TEST_CASE("states outside the hypotheses are skipped")
    {
        auto pre = def_semantics(occ::program(), occ::preamble_request());
        auto loop = def_semantics(occ::program(), occ::loop_request());
        auto s = occ::entry_state({1, 2, 3}, 2);
        s.locals[1] = 2; // n differs from the memory length
        auto r = check_theorem_chain(pre, loop, {s});
        CHECK(r.skipped == 1);
        CHECK_FALSE(r.passed());
    }

    TEST_CASE("subtracting instead of adding breaks the interpreter check")
    {
        Program p = *occ::program();
        p.instructions[11] = Instruction::make(Opcode::Sub, 10, 6, 9);
        auto mutated = std::make_shared<const Program>(std::move(p));
        auto pre = def_semantics(mutated, occ::preamble_request());
        auto loop = def_semantics(mutated, occ::loop_request());
        auto states = occ::chain_grid(4, {0, 399}, {399});
        for (auto& s : states) {
            s.program = mutated;
        }
        auto r = check_theorem_chain(pre, loop, states);
        CHECK_FALSE(r.interpreter.passed());
        REQUIRE(r.interpreter.counterexample.has_value());
        CHECK(r.implication_violations == 0);
    }
}
