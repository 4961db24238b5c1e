// Copyright 2026 The LL2 Authors.
// SPDX-License-Identifier: Apache-2.0

#include "ll2/term.hpp"

#include <algorithm>
#include <sstream>

namespace ll2::sym {

struct Term::Node {
    TermKind kind = TermKind::Const;
    Word value;
    std::size_t index = 0;
    std::vector<Term> args;
    std::size_t size = 1;
};

Term::Term() : Term(Word(0)) {}

Term::Term(int value) : Term(Word(value)) {}

Term::Term(Word value)
{
    auto node = std::make_shared<Node>();
    node->kind = TermKind::Const;
    node->value = std::move(value);
    node_ = std::move(node);
}

Term::Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}

Term Term::make(TermKind kind, std::vector<Term> args, std::size_t index)
{
    auto node = std::make_shared<Node>();
    node->kind = kind;
    node->index = index;
    node->size = 1;
    for (const auto& a : args) {
        node->size += a.size();
    }
    node->args = std::move(args);
    return Term(std::shared_ptr<const Node>(std::move(node)));
}

Term Term::constant(Word value) { return Term(std::move(value)); }
Term Term::local(std::size_t index) { return make(TermKind::Local, {}, index); }
Term Term::mem_at(Term address) { return make(TermKind::MemAt, {std::move(address)}); }
Term Term::stack_top(std::size_t depth) { return make(TermKind::StackTop, {}, depth); }
Term Term::pc() { return make(TermKind::Pc, {}); }
Term Term::len_memory() { return make(TermKind::LenMemory, {}); }
Term Term::len_locals() { return make(TermKind::LenLocals, {}); }
Term Term::add(Term a, Term b) { return make(TermKind::Add, {std::move(a), std::move(b)}); }
Term Term::sub(Term a, Term b) { return make(TermKind::Sub, {std::move(a), std::move(b)}); }
Term Term::mul(Term a, Term b) { return make(TermKind::Mul, {std::move(a), std::move(b)}); }
Term Term::eq(Term a, Term b) { return make(TermKind::Eq, {std::move(a), std::move(b)}); }
Term Term::lt(Term a, Term b) { return make(TermKind::Lt, {std::move(a), std::move(b)}); }
Term Term::ite(Term c, Term a, Term b) { return make(TermKind::Ite, {std::move(c), std::move(a), std::move(b)}); }
Term Term::negate(Term a) { return make(TermKind::Not, {std::move(a)}); }
Term Term::conj(Term a, Term b) { return make(TermKind::And, {std::move(a), std::move(b)}); }
Term Term::disj(Term a, Term b) { return make(TermKind::Or, {std::move(a), std::move(b)}); }

TermKind Term::kind() const { return node_->kind; }
bool Term::is_const(const Word& v) const { return is_const() && node_->value == v; }
const Word& Term::value() const { return node_->value; }
std::size_t Term::index() const { return node_->index; }
std::size_t Term::arity() const { return node_->args.size(); }
const Term& Term::arg(std::size_t i) const { return node_->args[i]; }
std::size_t Term::size() const { return node_->size; }

bool Term::operator==(const Term& other) const
{
    if (node_ == other.node_) {
        return true;
    }
    const Node& a = *node_;
    const Node& b = *other.node_;
    if (a.kind != b.kind || a.size != b.size || a.index != b.index || a.value != b.value ||
        a.args.size() != b.args.size()) {
        return false;
    }
    for (std::size_t i = 0; i < a.args.size(); ++i) {
        if (a.args[i] != b.args[i]) {
            return false;
        }
    }
    return true;
}

bool is_boolean(const Term& t)
{
    switch (t.kind()) {
    case TermKind::Const:
        return t.value() == 0 || t.value() == 1;
    case TermKind::Eq:
    case TermKind::Lt:
    case TermKind::Not:
    case TermKind::And:
    case TermKind::Or:
        return true;
    case TermKind::Ite:
        return is_boolean(t.arg(1)) && is_boolean(t.arg(2));
    default:
        return false;
    }
}

Word eval_term(const Term& t, const MachineState& s)
{
    switch (t.kind()) {
    case TermKind::Const:
        return t.value();
    case TermKind::Local:
        return read_local(s, t.index());
    case TermKind::MemAt:
        return read_mem(s, eval_term(t.arg(0), s));
    case TermKind::StackTop:
        if (t.index() >= s.stack.size()) {
            throw Trap(TrapKind::StackUnderflow, s.pc,
                       "stack depth " + std::to_string(t.index()) + " of " + std::to_string(s.stack.size()));
        }
        return s.stack[s.stack.size() - 1 - t.index()];
    case TermKind::Pc:
        return Word(s.pc);
    case TermKind::LenMemory:
        return Word(s.memory.size());
    case TermKind::LenLocals:
        return Word(s.locals.size());
    case TermKind::Add:
        return eval_term(t.arg(0), s) + eval_term(t.arg(1), s);
    case TermKind::Sub:
        return eval_term(t.arg(0), s) - eval_term(t.arg(1), s);
    case TermKind::Mul:
        return eval_term(t.arg(0), s) * eval_term(t.arg(1), s);
    case TermKind::Eq:
        return eval_term(t.arg(0), s) == eval_term(t.arg(1), s) ? 1 : 0;
    case TermKind::Lt:
        return eval_term(t.arg(0), s) < eval_term(t.arg(1), s) ? 1 : 0;
    case TermKind::Ite:
        return eval_term(t.arg(0), s) != 0 ? eval_term(t.arg(1), s) : eval_term(t.arg(2), s);
    case TermKind::Not:
        return eval_term(t.arg(0), s) == 0 ? 1 : 0;
    case TermKind::And:
        if (eval_term(t.arg(0), s) == 0) {
            return 0;
        }
        return eval_term(t.arg(1), s) != 0 ? 1 : 0;
    case TermKind::Or:
        if (eval_term(t.arg(0), s) != 0) {
            return 1;
        }
        return eval_term(t.arg(1), s) != 0 ? 1 : 0;
    }
    return 0;
}

namespace {

Term rw(TermKind kind, const Term& x, const Term& y = Term(), const Term& z = Term());

Term rw_not(const Term& x) { return rw(TermKind::Not, x); }

// 0/1 normalization of an arbitrary term: x != 0.
Term as_bool(const Term& x) { return is_boolean(x) ? x : rw_not(rw_not(x)); }

bool is_not_of(const Term& maybe_not, const Term& x)
{
    return maybe_not.kind() == TermKind::Not && maybe_not.arg(0) == x;
}

Term rw(TermKind kind, const Term& x, const Term& y, const Term& z)
{
    switch (kind) {
    case TermKind::MemAt:
        return Term::mem_at(x);
    case TermKind::Add:
        if (x.is_const() && y.is_const()) {
            return Term(x.value() + y.value());
        }
        if (x.is_const()) {
            return rw(TermKind::Add, y, x);
        }
        if (y.is_const(0)) {
            return x;
        }
        if (y.is_const() && x.kind() == TermKind::Add && x.arg(1).is_const()) {
            return rw(TermKind::Add, x.arg(0), Term(x.arg(1).value() + y.value()));
        }
        return Term::add(x, y);
    case TermKind::Sub:
        if (x.is_const() && y.is_const()) {
            return Term(x.value() - y.value());
        }
        if (x == y) {
            return Term(0);
        }
        if (y.is_const()) {
            return rw(TermKind::Add, x, Term(Word(-y.value())));
        }
        return Term::sub(x, y);
    case TermKind::Mul:
        if (x.is_const() && y.is_const()) {
            return Term(x.value() * y.value());
        }
        if (x.is_const()) {
            return rw(TermKind::Mul, y, x);
        }
        if (y.is_const(0)) {
            return Term(0);
        }
        if (y.is_const(1)) {
            return x;
        }
        return Term::mul(x, y);
    case TermKind::Eq:
        if (x.is_const() && y.is_const()) {
            return Term(x.value() == y.value() ? 1 : 0);
        }
        if (x == y) {
            return Term(1);
        }
        if (x.is_const()) {
            return rw(TermKind::Eq, y, x);
        }
        if (y.is_const() && x.kind() == TermKind::Add && x.arg(1).is_const()) {
            return rw(TermKind::Eq, x.arg(0), Term(y.value() - x.arg(1).value()));
        }
        if (y.is_const() && is_boolean(x)) {
            if (y.value() == 0) {
                return rw_not(x);
            }
            if (y.value() == 1) {
                return x;
            }
            return Term(0);
        }
        return Term::eq(x, y);
    case TermKind::Lt:
        if (x.is_const() && y.is_const()) {
            return Term(x.value() < y.value() ? 1 : 0);
        }
        if (x == y) {
            return Term(0);
        }
        if (y.is_const() && x.kind() == TermKind::Add && x.arg(1).is_const()) {
            return rw(TermKind::Lt, x.arg(0), Term(y.value() - x.arg(1).value()));
        }
        if (x.is_const() && y.kind() == TermKind::Add && y.arg(1).is_const()) {
            return rw(TermKind::Lt, Term(x.value() - y.arg(1).value()), y.arg(0));
        }
        return Term::lt(x, y);
    case TermKind::Ite:
        if (x.is_const()) {
            return x.value() != 0 ? y : z;
        }
        if (y == z) {
            return y;
        }
        if (x.kind() == TermKind::Not) {
            return rw(TermKind::Ite, x.arg(0), z, y);
        }
        if (is_boolean(x) && y.is_const(1) && z.is_const(0)) {
            return x;
        }
        if (is_boolean(x) && y.is_const(0) && z.is_const(1)) {
            return rw_not(x);
        }
        return Term::ite(x, y, z);
    case TermKind::Not:
        if (x.is_const()) {
            return Term(x.value() == 0 ? 1 : 0);
        }
        if (x.kind() == TermKind::Not && is_boolean(x.arg(0))) {
            return x.arg(0);
        }
        return Term::negate(x);
    case TermKind::And:
        if (x.is_const()) {
            return x.value() == 0 ? Term(0) : as_bool(y);
        }
        if (y.is_const()) {
            return y.value() == 0 ? Term(0) : as_bool(x);
        }
        if (x == y) {
            return as_bool(x);
        }
        if ((is_boolean(x) && is_not_of(y, x)) || (is_boolean(y) && is_not_of(x, y))) {
            return Term(0);
        }
        return Term::conj(x, y);
    case TermKind::Or:
        if (x.is_const()) {
            return x.value() != 0 ? Term(1) : as_bool(y);
        }
        if (y.is_const()) {
            return y.value() != 0 ? Term(1) : as_bool(x);
        }
        if (x == y) {
            return as_bool(x);
        }
        if ((is_boolean(x) && is_not_of(y, x)) || (is_boolean(y) && is_not_of(x, y))) {
            return Term(1);
        }
        return Term::disj(x, y);
    default:
        return x;
    }
}

Term lookup_fact(const Term& t, const Facts& facts)
{
    for (const auto& [fact, value] : facts) {
        if (fact == t) {
            return Term(value ? 1 : 0);
        }
    }
    return t;
}

Term rebuild(const Term& t, const Facts* facts)
{
    if (t.arity() == 0) {
        return facts ? lookup_fact(t, *facts) : t;
    }
    std::vector<Term> args;
    args.reserve(t.arity());
    for (std::size_t i = 0; i < t.arity(); ++i) {
        args.push_back(rebuild(t.arg(i), facts));
    }
    Term out = rw(t.kind(), args[0], args.size() > 1 ? args[1] : Term(), args.size() > 2 ? args[2] : Term());
    return facts ? lookup_fact(out, *facts) : out;
}

Term to_fixpoint(const Term& t, const Facts* facts)
{
    Term current = rebuild(t, facts);
    // Each pass is canonicalizing; a second pass only catches rewrites
    // exposed by fact substitution higher up the tree.
    for (int i = 0; i < 8; ++i) {
        Term next = rebuild(current, facts);
        if (next == current) {
            break;
        }
        current = next;
    }
    return current;
}

void collect_facts(const Term& t, bool value, Facts& out)
{
    if (value && t.kind() == TermKind::And) {
        collect_facts(t.arg(0), true, out);
        collect_facts(t.arg(1), true, out);
        return;
    }
    if (!value && t.kind() == TermKind::Or) {
        collect_facts(t.arg(0), false, out);
        collect_facts(t.arg(1), false, out);
        return;
    }
    if (t.kind() == TermKind::Not && is_boolean(t.arg(0))) {
        collect_facts(t.arg(0), !value, out);
        return;
    }
    if (t.is_const() || !is_boolean(t)) {
        return;
    }
    out.emplace_back(t, value);
}

} // namespace

Term simplify(const Term& t) { return to_fixpoint(t, nullptr); }

Term simplify_under(const Term& t, const Facts& facts)
{
    if (facts.empty()) {
        return simplify(t);
    }
    return to_fixpoint(t, &facts);
}

Facts facts_from(const Term& condition)
{
    Facts out;
    collect_facts(simplify(condition), true, out);
    return out;
}

Term truth(const Term& t) { return simplify(Term::negate(Term::eq(t, Term(0)))); }

std::string to_string(const Term& t)
{
    std::ostringstream out;
    auto head = [&](std::string_view name) {
        out << '(' << name;
        for (std::size_t i = 0; i < t.arity(); ++i) {
            out << ' ' << to_string(t.arg(i));
        }
        out << ')';
    };
    switch (t.kind()) {
    case TermKind::Const:
        out << t.value();
        break;
    case TermKind::Local:
        out << "(local " << t.index() << ')';
        break;
    case TermKind::StackTop:
        out << "(stack-top " << t.index() << ')';
        break;
    case TermKind::MemAt:
        head("mem");
        break;
    case TermKind::Pc:
        out << "(pc)";
        break;
    case TermKind::LenMemory:
        out << "(len-memory)";
        break;
    case TermKind::LenLocals:
        out << "(len-locals)";
        break;
    case TermKind::Add:
        head("add");
        break;
    case TermKind::Sub:
        head("sub");
        break;
    case TermKind::Mul:
        head("mul");
        break;
    case TermKind::Eq:
        head("eq");
        break;
    case TermKind::Lt:
        head("lt");
        break;
    case TermKind::Ite:
        head("ite");
        break;
    case TermKind::Not:
        head("not");
        break;
    case TermKind::And:
        head("and");
        break;
    case TermKind::Or:
        head("or");
        break;
    }
    return out.str();
}

StatePredicate StatePredicate::of(std::string name, Term condition)
{
    StatePredicate p;
    p.kind_ = Kind::Term;
    p.name_ = std::move(name);
    p.term_ = std::move(condition);
    return p;
}

StatePredicate StatePredicate::well_formed()
{
    StatePredicate p;
    p.kind_ = Kind::WellFormed;
    p.name_ = "hyps";
    p.term_ = Term(1);
    return p;
}

StatePredicate StatePredicate::program_is(std::string name, std::shared_ptr<const Program> program)
{
    StatePredicate p;
    p.kind_ = Kind::ProgramIs;
    p.name_ = std::move(name);
    p.term_ = Term(1);
    p.program_ = std::move(program);
    return p;
}

bool StatePredicate::holds(const MachineState& s) const
{
    switch (kind_) {
    case Kind::WellFormed:
        return s.pc < s.program->size() && s.locals.size() > 16;
    case Kind::ProgramIs:
        return s.program == program_ || *s.program == *program_;
    case Kind::Term:
        try {
            return eval_term(term_, s) != 0;
        } catch (const Trap&) {
            return false;
        }
    }
    return false;
}

std::string StatePredicate::describe() const
{
    switch (kind_) {
    case Kind::WellFormed:
        return name_ + ": pc < len(program), len(locals) > 16";
    case Kind::ProgramIs:
        return name_ + ": program is the analysed listing (" + std::to_string(program_->size()) +
               " instructions)";
    case Kind::Term:
        return name_ + ": " + to_string(term_);
    }
    return name_;
}

bool all_hold(const std::vector<StatePredicate>& preds, const MachineState& s)
{
    return std::all_of(preds.begin(), preds.end(), [&](const StatePredicate& p) { return p.holds(s); });
}

Facts facts_from(const std::vector<StatePredicate>& preds)
{
    Facts out;
    for (const auto& p : preds) {
        if (p.kind() == StatePredicate::Kind::Term) {
            auto more = facts_from(p.term());
            out.insert(out.end(), more.begin(), more.end());
        }
    }
    return out;
}

Word MeasureExpr::eval(const MachineState& s) const
{
    Word v = eval_term(term_, s);
    return v < 0 ? Word(0) : v;
}

Term memory_bound(std::size_t base_register, std::size_t count_register)
{
    return Term::negate(Term::lt(Term::len_memory(),
                                 Term::add(Term::local(base_register), Term::local(count_register))));
}

} // namespace ll2::sym
