// Copyright 2026 The LL2 Authors.
// SPDX-License-Identifier: Apache-2.0

// Randomized property checks shared by the unit suites and the acceptance
// binary. Each returns how many cases were checked and the first failure.

#pragma once

#include "support.hpp"

#include "ll2/symbolic.hpp"
#include "ll2/term.hpp"

#include <functional>
#include <optional>
#include <string>

namespace ll2::test {

struct PropertyResult {
    std::size_t cases = 0;
    std::size_t failures = 0;
    std::string first_failure;

    bool ok() const { return failures == 0; }
    void fail(const std::string& why)
    {
        if (failures++ == 0) {
            first_failure = why;
        }
    }
};

inline std::string describe(const MachineState& s)
{
    std::string out = "pc=" + std::to_string(s.pc) + " halted=" + (s.halted ? "1" : "0") + " locals=[";
    for (std::size_t i = 0; i < s.locals.size(); ++i) {
        out += (i ? " " : "") + s.locals[i].str();
    }
    out += "] memory=[";
    for (std::size_t i = 0; i < s.memory.size(); ++i) {
        out += (i ? " " : "") + s.memory[i].str();
    }
    out += "] stack=[";
    for (std::size_t i = 0; i < s.stack.size(); ++i) {
        out += (i ? " " : "") + s.stack[i].str();
    }
    return out + "]";
}

inline bool same(const Outcome& a, const Outcome& b) { return a == b; }

// --- interpreter ----------------------------------------------------------

inline PropertyResult check_determinism(std::uint64_t seed, std::size_t cases)
{
    PropertyResult r;
    Rng rng(seed);
    RandomMachine m;
    for (; r.cases < cases; ++r.cases) {
        auto s = random_state(rng, random_program(rng, m), m);
        auto copy = s;
        auto a = outcome_of([&] { return step(s); });
        auto b = outcome_of([&] { return step(copy); });
        if (!same(a, b)) {
            r.fail("step differs on identical states: " + describe(s));
        }
    }
    return r;
}

/// Fields each opcode may change; everything else (and the program, always)
/// must be identical after a step.
inline PropertyResult check_frame(std::uint64_t seed, std::size_t cases)
{
    PropertyResult r;
    Rng rng(seed);
    RandomMachine m;
    for (; r.cases < cases; ++r.cases) {
        auto s = random_state(rng, random_program(rng, m), m);
        const Instruction inst = (*s.program)[s.pc];
        MachineState t;
        try {
            t = step(s);
        } catch (const Trap&) {
            continue;
        }
        std::string why;
        if (t.program != s.program) {
            why = "program replaced";
        }
        // Registers other than the destination are untouched.
        std::optional<std::size_t> dest;
        switch (inst.op) {
        case Opcode::PopTo:
        case Opcode::Add:
        case Opcode::Sub:
        case Opcode::Mul:
        case Opcode::Eq:
        case Opcode::Lt:
        case Opcode::GetElPtr:
        case Opcode::Load:
            dest = static_cast<std::size_t>(inst.args[0]);
            break;
        default:
            break;
        }
        for (std::size_t i = 0; i < s.locals.size(); ++i) {
            if ((!dest || i != *dest) && t.locals[i] != s.locals[i]) {
                why = "register " + std::to_string(i) + " changed";
            }
        }
        if (inst.op != Opcode::Store && t.memory != s.memory) {
            why = "memory changed";
        }
        if (inst.op == Opcode::Store) {
            std::size_t diffs = 0;
            for (std::size_t i = 0; i < s.memory.size(); ++i) {
                diffs += t.memory[i] != s.memory[i];
            }
            if (diffs > 1) {
                why = "STORE changed more than one cell";
            }
        }
        const bool stack_op = inst.op == Opcode::Const || inst.op == Opcode::Push || inst.op == Opcode::PopTo;
        if (!stack_op && t.stack != s.stack) {
            why = "stack changed";
        }
        if (inst.op != Opcode::Halt && t.halted) {
            why = "halted by a non-HALT";
        }
        const bool moves_pc = inst.op != Opcode::Halt;
        if (!moves_pc && t.pc != s.pc) {
            why = "HALT moved pc";
        }
        if (inst.op != Opcode::Br && moves_pc && t.pc != s.pc + 1) {
            why = "pc not incremented";
        }
        if (!why.empty()) {
            r.fail(std::string(mnemonic(inst.op)) + ": " + why + " from " + describe(s));
        }
    }
    return r;
}

inline PropertyResult check_stack_discipline(std::uint64_t seed, std::size_t cases)
{
    PropertyResult r;
    Rng rng(seed);
    RandomMachine m;
    for (; r.cases < cases; ++r.cases) {
        auto s = random_state(rng, random_program(rng, m), m);
        const auto op = (*s.program)[s.pc].op;
        MachineState t;
        try {
            t = step(s);
        } catch (const Trap&) {
            continue;
        }
        const auto before = static_cast<long>(s.stack.size());
        const auto after = static_cast<long>(t.stack.size());
        long expected = 0;
        if (op == Opcode::Const || op == Opcode::Push) {
            expected = 1;
        } else if (op == Opcode::PopTo) {
            expected = -1;
        }
        if (after - before != expected) {
            r.fail(std::string(mnemonic(op)) + " changed stack depth by " + std::to_string(after - before));
        }
    }
    return r;
}

inline PropertyResult check_run_composition(std::uint64_t seed, std::size_t cases)
{
    PropertyResult r;
    Rng rng(seed);
    RandomMachine m;
    for (; r.cases < cases; ++r.cases) {
        auto s = random_state(rng, random_program(rng, m), m);
        const auto a = static_cast<std::uint64_t>(uniform(rng, 0, 20));
        const auto b = static_cast<std::uint64_t>(uniform(rng, 0, 20));
        auto whole = outcome_of([&] { return run(s, a + b); });
        auto split = outcome_of([&] { return run(run(s, a), b); });
        if (!same(whole, split)) {
            r.fail("run(s," + std::to_string(a + b) + ") != run(run(s," + std::to_string(a) + ")," +
                   std::to_string(b) + ") from " + describe(s));
        }
    }
    return r;
}

inline PropertyResult check_halt_absorption(std::uint64_t seed, std::size_t cases)
{
    PropertyResult r;
    Rng rng(seed);
    RandomMachine m;
    for (; r.cases < cases; ++r.cases) {
        auto s = random_state(rng, random_program(rng, m), m);
        s.halted = true;
        const auto n = static_cast<std::uint64_t>(uniform(rng, 0, 50));
        if (!(run(s, n) == s)) {
            r.fail("halted state moved: " + describe(s));
        }
    }
    return r;
}

// --- terms ----------------------------------------------------------------

struct TermGen {
    Rng& rng;
    std::vector<sym::Term> pool;

    sym::Term leaf()
    {
        switch (uniform(rng, 0, 7)) {
        case 0:
        case 1:
            return sym::Term(uniform(rng, -2, 3));
        case 2:
        case 3:
        case 4:
            return sym::Term::local(static_cast<std::size_t>(uniform(rng, 0, 5)));
        case 5:
            return sym::Term::mem_at(sym::Term(uniform(rng, 0, 7)));
        case 6:
            return uniform(rng, 0, 1) ? sym::Term::len_memory() : sym::Term::stack_top(0);
        default:
            return sym::Term::pc();
        }
    }

    sym::Term gen(int depth)
    {
        if (!pool.empty() && uniform(rng, 0, 5) == 0) {
            return pool[static_cast<std::size_t>(uniform(rng, 0, static_cast<std::int64_t>(pool.size()) - 1))];
        }
        if (depth == 0 || uniform(rng, 0, 3) == 0) {
            return leaf();
        }
        using sym::Term;
        Term t;
        switch (uniform(rng, 0, 11)) {
        case 0:
            t = Term::add(gen(depth - 1), gen(depth - 1));
            break;
        case 1:
            t = Term::sub(gen(depth - 1), gen(depth - 1));
            break;
        case 2:
            t = Term::mul(gen(depth - 1), gen(depth - 1));
            break;
        case 3:
            t = Term::eq(gen(depth - 1), gen(depth - 1));
            break;
        case 4:
            t = Term::lt(gen(depth - 1), gen(depth - 1));
            break;
        case 5:
            t = Term::ite(gen(depth - 1), gen(depth - 1), gen(depth - 1));
            break;
        case 6:
            t = Term::negate(gen(depth - 1));
            break;
        case 7:
            t = Term::conj(gen(depth - 1), gen(depth - 1));
            break;
        case 8:
            t = Term::disj(gen(depth - 1), gen(depth - 1));
            break;
        case 9:
            t = Term::mem_at(gen(depth - 1));
            break;
        case 10: {
            auto x = gen(depth - 1);
            t = Term::add(Term::add(x, Term(uniform(rng, -2, 2))), Term(uniform(rng, -2, 2)));
            break;
        }
        default: {
            auto x = gen(depth - 1);
            t = Term::negate(Term::negate(x));
            break;
        }
        }
        pool.push_back(t);
        if (pool.size() > 32) {
            pool.erase(pool.begin());
        }
        return t;
    }
};

inline MachineState term_test_state(Rng& rng)
{
    MachineState s(nullptr, 6, 8);
    for (auto& w : s.locals) {
        w = uniform(rng, -1, 7);
    }
    for (auto& w : s.memory) {
        w = uniform(rng, -1, 7);
    }
    if (uniform(rng, 0, 1)) {
        s.stack.push_back(uniform(rng, -1, 7));
    }
    s.pc = static_cast<std::size_t>(uniform(rng, 0, 3));
    return s;
}

inline PropertyResult check_simplifier_soundness(std::uint64_t seed, std::size_t cases)
{
    PropertyResult r;
    Rng rng(seed);
    TermGen gen{rng, {}};
    std::size_t attempts = 0;
    while (r.cases < cases && attempts < cases * 20) {
        ++attempts;
        auto t = gen.gen(4);
        auto s = term_test_state(rng);
        Word expected;
        try {
            expected = sym::eval_term(t, s);
        } catch (const Trap&) {
            continue;
        }
        ++r.cases;
        auto simplified = sym::simplify(t);
        try {
            auto got = sym::eval_term(simplified, s);
            if (got != expected) {
                r.fail(sym::to_string(t) + " = " + expected.str() + " but simplified " + sym::to_string(simplified) +
                       " = " + got.str());
            }
        } catch (const Trap& e) {
            r.fail(sym::to_string(simplified) + " trapped: " + e.what());
        }
    }
    return r;
}

inline PropertyResult check_simplifier_idempotence(std::uint64_t seed, std::size_t cases)
{
    PropertyResult r;
    Rng rng(seed);
    TermGen gen{rng, {}};
    for (; r.cases < cases; ++r.cases) {
        auto once = sym::simplify(gen.gen(5));
        auto twice = sym::simplify(once);
        if (once != twice) {
            r.fail(sym::to_string(once) + " re-simplifies to " + sym::to_string(twice));
        }
    }
    return r;
}

// --- symbolic execution -----------------------------------------------------

/// Random straight-line-plus-branch programs whose registers hold small
/// values so memory accesses mostly stay in range.
inline std::shared_ptr<const Program> random_symbolic_program(Rng& rng, std::size_t length)
{
    RandomMachine m;
    m.registers = 6;
    m.length = length;
    Program p;
    for (std::size_t pc = 0; pc < length; ++pc) {
        auto inst = random_instruction(rng, m, pc, length);
        if (inst.op == Opcode::Halt) {
            inst = Instruction::make(Opcode::Lt, uniform(rng, 0, 5), uniform(rng, 0, 5), uniform(rng, 0, 5));
        }
        p.instructions.push_back(inst);
    }
    return std::make_shared<const Program>(std::move(p));
}

inline MachineState symbolic_test_state(Rng& rng, std::shared_ptr<const Program> program, std::size_t pc)
{
    MachineState s(std::move(program), 6, 8);
    for (auto& w : s.locals) {
        w = uniform(rng, 0, 7);
    }
    for (auto& w : s.memory) {
        w = uniform(rng, -2, 7);
    }
    for (int i = 0; i < 3; ++i) {
        s.stack.push_back(uniform(rng, -2, 7));
    }
    s.pc = pc;
    return s;
}

/// For every split BR, the children's conditions must be disjoint and cover
/// the parent's, as evaluated on random concrete states.
inline PropertyResult check_path_partition(std::uint64_t seed, std::size_t cases)
{
    PropertyResult r;
    Rng rng(seed);
    std::size_t programs = 0;
    while (r.cases < cases && programs < cases * 10) {
        ++programs;
        auto p = random_symbolic_program(rng, 10);
        auto ss = sym::SymbolicState::at(0);
        for (int depth = 0; depth < 12 && ss.pc < p->size() && r.cases < cases; ++depth) {
            std::vector<sym::SymbolicState> kids;
            try {
                kids = sym::symbolic_step(ss, *p);
            } catch (const std::exception&) {
                break;
            }
            if ((*p)[ss.pc].op == Opcode::Br) {
                for (int k = 0; k < 4; ++k) {
                    auto s = symbolic_test_state(rng, p, 0);
                    try {
                        const bool parent = sym::eval_term(ss.path_condition, s) != 0;
                        std::size_t holding = 0;
                        for (const auto& kid : kids) {
                            holding += sym::eval_term(kid.path_condition, s) != 0;
                        }
                        ++r.cases;
                        if ((parent && holding != 1) || (!parent && holding != 0)) {
                            r.fail("partition broken at pc " + std::to_string(ss.pc) + ": parent " +
                                   sym::to_string(ss.path_condition) + ", " + std::to_string(holding) +
                                   " children hold");
                        }
                    } catch (const Trap&) {
                    }
                }
            }
            if (kids.empty()) {
                break;
            }
            ss = kids[static_cast<std::size_t>(uniform(rng, 0, static_cast<std::int64_t>(kids.size()) - 1))];
        }
    }
    return r;
}

/// A symbolic path of n steps, evaluated at a concrete entry state that
/// satisfies its path condition, equals n concrete steps.
inline PropertyResult check_symbolic_agreement(std::uint64_t seed, std::size_t cases)
{
    PropertyResult r;
    Rng rng(seed);
    std::size_t attempts = 0;
    while (r.cases < cases && attempts < cases * 50) {
        ++attempts;
        auto p = random_symbolic_program(rng, 10);
        auto ss = sym::SymbolicState::at(0);
        const auto n = uniform(rng, 1, 15);
        bool ok = true;
        for (std::int64_t i = 0; i < n && ss.pc < p->size(); ++i) {
            std::vector<sym::SymbolicState> kids;
            try {
                kids = sym::symbolic_step(ss, *p);
            } catch (const std::exception&) {
                ok = false;
                break;
            }
            if (kids.empty()) {
                ok = false;
                break;
            }
            ss = kids[static_cast<std::size_t>(uniform(rng, 0, static_cast<std::int64_t>(kids.size()) - 1))];
        }
        if (!ok) {
            continue;
        }
        for (int k = 0; k < 4; ++k) {
            auto s = symbolic_test_state(rng, p, 0);
            try {
                if (sym::eval_term(ss.path_condition, s) == 0) {
                    continue;
                }
            } catch (const Trap&) {
                continue;
            }
            MachineState concrete;
            try {
                concrete = run(s, ss.steps);
            } catch (const Trap&) {
                continue;
            }
            ++r.cases;
            try {
                auto symbolic = sym::concretize(ss, s);
                if (!(symbolic == concrete)) {
                    r.fail("after " + std::to_string(ss.steps) + " steps: symbolic " + describe(symbolic) +
                           " vs concrete " + describe(concrete));
                }
            } catch (const Trap& e) {
                r.fail(std::string("symbolic evaluation trapped where the run did not: ") + e.what());
            }
        }
    }
    return r;
}

} // namespace ll2::test
