// Copyright 2026 The LL2 Authors.
// SPDX-License-Identifier: Apache-2.0

/**
 * @file
 * Symbolic expressions over an initial machine state.
 *
 * A Term denotes an integer computed from the state a region was entered
 * with: register and memory reads, the operand stack, arithmetic, and 0/1
 * valued predicates. Terms are immutable and cheap to copy (shared nodes).
 *
 * Predicates (eq, lt, not, and, or) always evaluate to 0 or 1. `not x` is 1
 * exactly when x is 0, so it is a 0/1 flip only on 0/1 inputs. `and`/`or`
 * treat any non-zero operand as true and evaluate left to right with
 * short-circuiting, as does `ite`.
 */

#pragma once

#include "ll2/isa.hpp"

#include <memory>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace ll2 {
struct Sexp;
}

namespace ll2::sym {

enum class TermKind : std::uint8_t {
    Const,
    Local,
    MemAt,
    StackTop,
    Pc,
    LenMemory,
    LenLocals,
    Add,
    Sub,
    Mul,
    Eq,
    Lt,
    Ite,
    Not,
    And,
    Or,
};

class Term {
public:
    Term();
    Term(Word value); // NOLINT: integers read naturally as constant terms
    Term(int value);  // NOLINT

    static Term constant(Word value);
    static Term local(std::size_t index);
    static Term mem_at(Term address);
    /// Element `depth` below the top of the initial stack (0 = top).
    static Term stack_top(std::size_t depth);
    static Term pc();
    static Term len_memory();
    static Term len_locals();
    static Term add(Term a, Term b);
    static Term sub(Term a, Term b);
    static Term mul(Term a, Term b);
    static Term eq(Term a, Term b);
    static Term lt(Term a, Term b);
    static Term ite(Term c, Term a, Term b);
    static Term negate(Term a);
    static Term conj(Term a, Term b);
    static Term disj(Term a, Term b);

    TermKind kind() const;
    bool is_const() const { return kind() == TermKind::Const; }
    bool is_const(const Word& v) const;
    /// Constant payload; zero for non-constants.
    const Word& value() const;
    /// Register index or stack depth.
    std::size_t index() const;
    std::size_t arity() const;
    const Term& arg(std::size_t i) const;

    /// Structural equality.
    bool operator==(const Term& other) const;
    bool operator!=(const Term& other) const { return !(*this == other); }

    std::size_t size() const;

private:
    struct Node;
    explicit Term(std::shared_ptr<const Node> node);
    static Term make(TermKind kind, std::vector<Term> args, std::size_t index = 0);

    std::shared_ptr<const Node> node_;
};

/// True when the term can only evaluate to 0 or 1.
bool is_boolean(const Term& t);

/// Evaluates against a concrete state. Out-of-range reads raise the same
/// Trap the interpreter would (pc taken from the state).
Word eval_term(const Term& t, const MachineState& s);

/// Canonicalizing rewrite: constant folding, additive constant collection,
/// unit/zero rules, trivial comparisons, boolean normalization. Sound for
/// every state on which the input evaluates without trapping; idempotent.
Term simplify(const Term& t);

/// Known 0/1 facts, e.g. from a path condition or hypotheses.
using Facts = std::vector<std::pair<Term, bool>>;

/// Splits nested conjunctions into facts; `not x` yields (x, false).
Facts facts_from(const Term& condition);

/// simplify, additionally replacing subterms that match a known fact by its
/// value.
Term simplify_under(const Term& t, const Facts& facts);

/// Boolean view of a word-valued term: 1 iff t != 0.
Term truth(const Term& t);

/// Prefix s-expression, e.g. `(lt (local 5) (local 1))`.
std::string to_string(const Term& t);

class TermSyntaxError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Reads the canonical syntax plus ACL2-style aliases used in hypotheses,
/// e.g. `(< (nth 5 (rd :locals s)) (nth 1 (rd :locals s)))`.
Term parse_term(std::string_view text);

/// parse_term on an already-read expression.
Term term_from_sexp(const ll2::Sexp& e);

/// A 0/1 condition on a whole state. Besides term conditions there are two
/// structural checks that the term language cannot express: basic
/// well-formedness, and "the loaded program is exactly P".
class StatePredicate {
public:
    enum class Kind { Term, WellFormed, ProgramIs };

    static StatePredicate of(std::string name, Term condition);
    /// pc < program length and more than 16 registers.
    static StatePredicate well_formed();
    static StatePredicate program_is(std::string name, std::shared_ptr<const Program> program);

    Kind kind() const { return kind_; }
    const std::string& name() const { return name_; }
    const Term& term() const { return term_; }
    const std::shared_ptr<const Program>& program() const { return program_; }

    /// Never throws: reads that would trap make the predicate false.
    bool holds(const MachineState& s) const;

    std::string describe() const;

private:
    Kind kind_ = Kind::Term;
    std::string name_;
    Term term_;
    std::shared_ptr<const Program> program_;
};

bool all_hold(const std::vector<StatePredicate>& preds, const MachineState& s);

/// Facts contributed by the term-kind predicates.
Facts facts_from(const std::vector<StatePredicate>& preds);

/// Natural-valued measure: the term's value clamped at zero.
class MeasureExpr {
public:
    MeasureExpr() = default;
    explicit MeasureExpr(Term t) : term_(std::move(t)) {}

    const Term& term() const { return term_; }
    Word eval(const MachineState& s) const;

private:
    Term term_;
};

/// `base + n <= len(memory)` over registers base and n.
Term memory_bound(std::size_t base_register, std::size_t count_register);

} // namespace ll2::sym
