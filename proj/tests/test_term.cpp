// Copyright 2026 The LL2 Authors.
// SPDX-License-Identifier: Apache-2.0

#include "properties.hpp"

#include "doctest.h"

using namespace ll2;
using namespace ll2::sym;
using ll2::test::reference_program;
using ll2::test::concrete_state;

TEST_CASE("terms evaluate against a concrete state")
{
    auto s = concrete_state();
    CHECK(eval_term(Term::add(Term(2), Term::local(1)), s) == 10);
    CHECK(eval_term(Term::mem_at(Term::local(0)), s) == 399);
    CHECK(eval_term(Term::len_memory(), s) == 108);
    CHECK(eval_term(Term::len_locals(), s) == 32);
    CHECK(eval_term(Term::pc(), s) == 0);
    CHECK(eval_term(Term::lt(Term::local(5), Term::local(1)), s) == 1);
    CHECK(eval_term(Term::negate(Term(7)), s) == 0);
    CHECK_THROWS_AS(eval_term(Term::mem_at(Term(108)), s), Trap);
    CHECK_THROWS_AS(eval_term(Term::stack_top(0), s), Trap);
}

TEST_CASE("ite, and, or only evaluate the operands they need")
{
    auto s = concrete_state();
    const Term boom = Term::mem_at(Term(-1));
    CHECK(eval_term(Term::ite(Term(1), Term(4), boom), s) == 4);
    CHECK(eval_term(Term::conj(Term(0), boom), s) == 0);
    CHECK(eval_term(Term::disj(Term(3), boom), s) == 1);
    CHECK_THROWS_AS(eval_term(Term::conj(Term(1), boom), s), Trap);
}

TEST_CASE("simplifier rewrites")
{
    const Term x = Term::local(3);
    const Term y = Term::local(4);
    CHECK(simplify(Term::add(Term(2), Term(5))) == Term(7));
    CHECK(simplify(Term::add(x, Term(0))) == x);
    CHECK(simplify(Term::mul(x, Term(1))) == x);
    CHECK(simplify(Term::mul(x, Term(0))) == Term(0));
    CHECK(simplify(Term::sub(x, x)) == Term(0));
    CHECK(simplify(Term::eq(x, x)) == Term(1));
    CHECK(simplify(Term::lt(x, x)) == Term(0));
    CHECK(simplify(Term::add(Term::add(x, Term(1)), Term(1))) == simplify(Term::add(x, Term(2))));
    CHECK(simplify(Term::ite(Term(1), x, y)) == x);
    CHECK(simplify(Term::ite(Term::eq(x, y), x, x)) == x);
    CHECK(simplify(Term::negate(Term::negate(Term::lt(x, y)))) == Term::lt(x, y));
    CHECK(simplify(Term::conj(Term(1), Term::lt(x, y))) == Term::lt(x, y));
    CHECK(simplify(Term::disj(Term::lt(x, y), Term(1))) == Term(1));
}

TEST_CASE("truth of a predicate is the predicate")
{
    const Term p = Term::lt(Term::local(5), Term::local(1));
    CHECK(truth(p) == p);
    CHECK(truth(Term(3)) == Term(1));
    CHECK(truth(Term(0)) == Term(0));
}

TEST_CASE("facts decide conditions")
{
    const Term p = Term::lt(Term::local(5), Term::local(1));
    Facts known = {{p, true}};
    CHECK(simplify_under(p, known) == Term(1));
    CHECK(simplify_under(Term::negate(p), known) == Term(0));
    auto split = facts_from(Term::conj(p, Term::negate(Term::eq(Term::local(2), Term(0)))));
    REQUIRE(split.size() == 2);
    CHECK(split[0] == std::make_pair(p, true));
    CHECK(split[1].second == false);
}

TEST_CASE("term syntax round trips and accepts ACL2 spellings")
{
    const Term t = Term::ite(Term::lt(Term::local(5), Term::local(1)), Term::mem_at(Term::add(Term::local(0), Term(2))),
                             Term::negate(Term::conj(Term::pc(), Term::len_memory())));
    CHECK(parse_term(to_string(t)) == t);

    CHECK(parse_term("(nth 5 (rd :locals s))") == Term::local(5));
    CHECK(parse_term("(len (rd :memory s))") == Term::len_memory());
    CHECK(parse_term("(rd :pc s)") == Term::pc());
    CHECK(parse_term("(< (nth 5 (rd :locals s)) (nth 1 (rd :locals s)))") == Term::lt(Term::local(5), Term::local(1)));
    CHECK(parse_term("(+ 1 2 3)") == Term::add(Term::add(Term(1), Term(2)), Term(3)));

    auto s = concrete_state();
    CHECK(eval_term(parse_term("(<= (+ (local 0) (local 1)) (len-memory))"), s) == 1);
    CHECK(eval_term(parse_term("(nfix (- (local 5) 1))"), s) == 0);
    CHECK(eval_term(parse_term("(zp (local 5))"), s) == 1);
    CHECK(eval_term(parse_term("(memory-bound 0 1)"), s) == 1);

    CHECK_THROWS_AS(parse_term("(frob 1)"), TermSyntaxError);
    CHECK_THROWS_AS(parse_term("(add 1"), TermSyntaxError);
    CHECK_THROWS_AS(parse_term("(lt 1)"), TermSyntaxError);
    CHECK_THROWS_AS(parse_term("1 2"), TermSyntaxError);
}

TEST_CASE("state predicates")
{
    auto s = concrete_state();
    CHECK(StatePredicate::well_formed().holds(s));
    CHECK(StatePredicate::program_is("occurrences", reference_program()).holds(s));
    CHECK_FALSE(StatePredicate::program_is("other", std::make_shared<const Program>()).holds(s));
    CHECK_FALSE(StatePredicate::of("oob", Term::mem_at(Term(999))).holds(s));
    auto small = s;
    small.locals.resize(16);
    CHECK_FALSE(StatePredicate::well_formed().holds(small));
    MeasureExpr m(Term::sub(Term::local(5), Term::local(1)));
    CHECK(m.eval(s) == 0);
}

TEST_CASE("symbolic steps over the counting program")
{
    auto p = reference_program();
    auto ss = SymbolicState::at(0);
    for (int i = 0; i < 3; ++i) {
        auto next = symbolic_step(ss, *p);
        REQUIRE(next.size() == 1);
        ss = next[0];
    }
    // CONST 0; POPTO 3; EQ 4 1 3
    CHECK(ss.pc == 3);
    CHECK(ss.local(3) == Term(0));
    CHECK(ss.local(4) == simplify(Term::eq(Term::local(1), Term(0))));
    CHECK(ss.local(1) == Term::local(1));
    for (int i = 0; i < 4; ++i) {
        ss = symbolic_step(ss, *p).at(0);
    }

    // The branch on register 4 splits the path on n = 0.
    REQUIRE(ss.pc == 7);
    auto split = symbolic_step(ss, *p);
    REQUIRE(split.size() == 2);
    CHECK(split[0].pc == 21);
    CHECK(split[1].pc == 8);
    CHECK(split[0].path_condition == ss.local(4));
    CHECK(split[0].steps == 8);
}

TEST_CASE("branches decided by facts do not split")
{
    auto p = reference_program();
    auto ss = SymbolicState::at(0);
    Facts n_positive = {{Term::eq(Term::local(1), Term(0)), false}};
    while (ss.pc != 8) {
        auto next = symbolic_step(ss, *p, n_positive);
        REQUIRE(next.size() == 1);
        ss = next[0];
    }
    CHECK(ss.steps == 8);
    CHECK(ss.path_condition == Term(1));
}

TEST_CASE("symbolic state concretizes to the concrete run")
{
    auto p = reference_program();
    auto s = concrete_state();
    auto ss = SymbolicState::at(0);
    for (int i = 0; i < 30; ++i) {
        auto next = symbolic_step(ss, *p);
        SymbolicState chosen;
        bool found = false;
        for (auto& n : next) {
            if (eval_term(n.path_condition, s) != 0) {
                chosen = n;
                found = true;
            }
        }
        REQUIRE(found);
        ss = chosen;
    }
    CHECK(concretize(ss, s) == run(s, 30));
}

TEST_CASE("loads see earlier symbolic stores")
{
    Program p;
    p.instructions = {Instruction::make(Opcode::Store, 0, 1), Instruction::make(Opcode::Load, 2, 0),
                      Instruction::make(Opcode::Load, 3, 4)};
    auto ss = SymbolicState::at(0);
    for (int i = 0; i < 3; ++i) {
        ss = symbolic_step(ss, p).at(0);
    }
    CHECK(ss.local(2) == Term::local(1));
    CHECK(ss.local(3) == simplify(Term::ite(Term::eq(Term::local(4), Term::local(0)), Term::local(1),
                                            Term::mem_at(Term::local(4)))));
}

namespace {

void require_ok(const ll2::test::PropertyResult& r, std::size_t min_cases)
{
    INFO(r.first_failure);
    CHECK(r.ok());
    CHECK(r.cases >= min_cases);
}

} // namespace

TEST_CASE("simplifier is sound on random terms")
{
    require_ok(ll2::test::check_simplifier_soundness(11, 3000), 3000);
}

TEST_CASE("simplifier is idempotent on random terms")
{
    require_ok(ll2::test::check_simplifier_idempotence(12, 3000), 3000);
}

TEST_CASE("branch successors partition the parent path")
{
    require_ok(ll2::test::check_path_partition(13, 3000), 3000);
}

TEST_CASE("symbolic paths agree with concrete runs")
{
    require_ok(ll2::test::check_symbolic_agreement(14, 2000), 2000);
}
