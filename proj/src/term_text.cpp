// Copyright 2026 The LL2 Authors.
// SPDX-License-Identifier: Apache-2.0

// Reader for the term s-expression syntax. Besides the canonical names
// printed by to_string it accepts the ACL2 spellings that hypotheses and
// measures are usually written in, so they can be pasted as-is:
//
//   (nth k (rd :locals s))   (loi k s)      -> (local k)
//   (nth a (rd :memory s))   (memi a s)     -> (mem a)
//   (len (rd :memory s))                    -> (len-memory)
//   (rd :pc s)                              -> (pc)
//   + - * = < <= > >= if natp nfix zp 1+ 1- integerp

#include "ll2/sexp.hpp"
#include "ll2/term.hpp"

#include <functional>

namespace ll2::sym {

namespace {

[[noreturn]] void bad(const Sexp& e, const std::string& why) { throw TermSyntaxError(why + ": " + ll2::to_string(e)); }

std::size_t literal_index(const Sexp& e)
{
    if (e.is_list) {
        bad(e, "expected a literal index");
    }
    auto w = parse_word(e.atom);
    auto i = w ? word_to_index(*w) : std::nullopt;
    if (!i) {
        bad(e, "expected a non-negative integer");
    }
    return *i;
}

// Matches `(rd :field s)`.
bool is_field(const Sexp& e, std::string_view field)
{
    return e.is_list && e.items.size() == 3 && e.items[0].is("rd") && e.items[1].is(field);
}

Term convert(const Sexp& e);

std::vector<Term> convert_args(const Sexp& e)
{
    std::vector<Term> out;
    for (std::size_t i = 1; i < e.items.size(); ++i) {
        out.push_back(convert(e.items[i]));
    }
    return out;
}

void want_args(const Sexp& e, std::size_t n)
{
    if (e.items.size() != n + 1) {
        bad(e, "expected " + std::to_string(n) + " argument(s)");
    }
}

Term fold(const Sexp& e, std::size_t min_args, Term unit, const std::function<Term(Term, Term)>& op)
{
    auto args = convert_args(e);
    if (args.size() < min_args) {
        bad(e, "too few arguments");
    }
    if (args.empty()) {
        return unit;
    }
    Term acc = args[0];
    for (std::size_t i = 1; i < args.size(); ++i) {
        acc = op(acc, args[i]);
    }
    return acc;
}

Term convert(const Sexp& e)
{
    if (!e.is_list) {
        if (auto w = parse_word(e.atom)) {
            return Term(*w);
        }
        if (e.atom == "t") {
            return Term(1);
        }
        if (e.atom == "nil") {
            return Term(0);
        }
        bad(e, "unknown symbol");
    }
    if (e.items.empty() || e.items[0].is_list) {
        bad(e, "expected an operator");
    }
    const std::string& op = e.items[0].atom;

    if (op == "local" || op == "loi") {
        if (e.items.size() < 2) {
            bad(e, "missing register");
        }
        return Term::local(literal_index(e.items[1]));
    }
    if (op == "nth") {
        want_args(e, 2);
        if (is_field(e.items[2], ":locals")) {
            return Term::local(literal_index(e.items[1]));
        }
        if (is_field(e.items[2], ":memory")) {
            return Term::mem_at(convert(e.items[1]));
        }
        bad(e, "nth over an unknown field");
    }
    if (op == "mem" || op == "memi") {
        if (e.items.size() < 2) {
            bad(e, "missing address");
        }
        return Term::mem_at(convert(e.items[1]));
    }
    if (op == "len") {
        want_args(e, 1);
        if (is_field(e.items[1], ":memory")) {
            return Term::len_memory();
        }
        if (is_field(e.items[1], ":locals")) {
            return Term::len_locals();
        }
        bad(e, "len of an unknown field");
    }
    if (op == "rd" && is_field(e, ":pc")) {
        return Term::pc();
    }
    if (op == "pc") {
        want_args(e, 0);
        return Term::pc();
    }
    if (op == "len-memory") {
        want_args(e, 0);
        return Term::len_memory();
    }
    if (op == "len-locals") {
        want_args(e, 0);
        return Term::len_locals();
    }
    if (op == "stack-top") {
        want_args(e, 1);
        return Term::stack_top(literal_index(e.items[1]));
    }
    if (op == "memory-bound") {
        want_args(e, 2);
        return memory_bound(literal_index(e.items[1]), literal_index(e.items[2]));
    }
    if (op == "add" || op == "+") {
        return fold(e, 0, Term(0), Term::add);
    }
    if (op == "mul" || op == "*") {
        return fold(e, 0, Term(1), Term::mul);
    }
    if (op == "sub" || op == "-") {
        auto args = convert_args(e);
        if (args.size() == 1) {
            return Term::sub(Term(0), args[0]);
        }
        if (args.size() != 2) {
            bad(e, "expected 1 or 2 arguments");
        }
        return Term::sub(args[0], args[1]);
    }
    if (op == "1+" || op == "1-") {
        want_args(e, 1);
        auto x = convert(e.items[1]);
        return op == "1+" ? Term::add(x, Term(1)) : Term::sub(x, Term(1));
    }
    if (op == "and") {
        return fold(e, 0, Term(1), Term::conj);
    }
    if (op == "or") {
        return fold(e, 0, Term(0), Term::disj);
    }

    auto args = convert_args(e);
    auto binary = [&] {
        if (args.size() != 2) {
            bad(e, "expected 2 arguments");
        }
    };
    auto unary = [&] {
        if (args.size() != 1) {
            bad(e, "expected 1 argument");
        }
    };
    if (op == "eq" || op == "=" || op == "equal") {
        binary();
        return Term::eq(args[0], args[1]);
    }
    if (op == "lt" || op == "<") {
        binary();
        return Term::lt(args[0], args[1]);
    }
    if (op == ">") {
        binary();
        return Term::lt(args[1], args[0]);
    }
    if (op == "<=") {
        binary();
        return Term::negate(Term::lt(args[1], args[0]));
    }
    if (op == ">=") {
        binary();
        return Term::negate(Term::lt(args[0], args[1]));
    }
    if (op == "ite" || op == "if") {
        if (args.size() != 3) {
            bad(e, "expected 3 arguments");
        }
        return Term::ite(args[0], args[1], args[2]);
    }
    if (op == "not") {
        unary();
        return Term::negate(args[0]);
    }
    if (op == "natp") {
        unary();
        return Term::negate(Term::lt(args[0], Term(0)));
    }
    if (op == "integerp") {
        unary();
        return Term(1);
    }
    if (op == "nfix") {
        unary();
        return Term::ite(Term::lt(args[0], Term(0)), Term(0), args[0]);
    }
    if (op == "zp") {
        unary();
        return Term::negate(Term::lt(Term(0), args[0]));
    }
    bad(e, "unknown operator '" + op + "'");
}

} // namespace

Term term_from_sexp(const Sexp& e) { return convert(e); }

Term parse_term(std::string_view text)
{
    try {
        return convert(read_sexp(text));
    } catch (const SexpError& e) {
        throw TermSyntaxError(std::string(e.what()) + " in '" + std::string(text) + "'");
    }
}

} // namespace ll2::sym
