// Copyright 2026 The LL2 Authors.
// SPDX-License-Identifier: Apache-2.0

#include "ll2/symbolic.hpp"

namespace ll2::sym {

SymbolicState SymbolicState::at(std::size_t pc)
{
    SymbolicState ss;
    ss.pc = pc;
    return ss;
}

Term SymbolicState::local(std::size_t index) const
{
    auto it = locals.find(index);
    return it == locals.end() ? Term::local(index) : it->second;
}

Term SymbolicState::load(const Term& address) const
{
    Term value = Term::mem_at(address);
    for (const auto& [where, what] : memory_writes) {
        if (where == address) {
            value = what;
        } else if (where.is_const() && address.is_const()) {
            continue;
        } else {
            value = Term::ite(Term::eq(address, where), what, value);
        }
    }
    return simplify(value);
}

namespace {

std::size_t reg(std::int64_t arg) { return static_cast<std::size_t>(arg); }

Term pop(SymbolicState& ss)
{
    if (!ss.pushed.empty()) {
        Term top = ss.pushed.back();
        ss.pushed.pop_back();
        return top;
    }
    return Term::stack_top(ss.popped++);
}

} // namespace

std::vector<SymbolicState> symbolic_step(const SymbolicState& ss, const Program& p, const Facts& assumptions)
{
    if (ss.halted) {
        return {ss};
    }
    if (ss.pc >= p.size()) {
        throw Trap(TrapKind::PcOutOfRange, ss.pc, "symbolic step past the program");
    }
    const Instruction& inst = p[ss.pc];
    const auto& a = inst.args;
    SymbolicState next = ss;
    ++next.steps;
    ++next.pc;

    switch (inst.op) {
    case Opcode::Const:
        next.pushed.push_back(Term(inst.constant));
        break;
    case Opcode::Push:
        next.pushed.push_back(ss.local(reg(a[0])));
        break;
    case Opcode::PopTo: {
        Term v = pop(next);
        next.locals[reg(a[0])] = v;
        break;
    }
    case Opcode::Add:
    case Opcode::GetElPtr:
        next.locals[reg(a[0])] = simplify(Term::add(ss.local(reg(a[1])), ss.local(reg(a[2]))));
        break;
    case Opcode::Sub:
        next.locals[reg(a[0])] = simplify(Term::sub(ss.local(reg(a[1])), ss.local(reg(a[2]))));
        break;
    case Opcode::Mul:
        next.locals[reg(a[0])] = simplify(Term::mul(ss.local(reg(a[1])), ss.local(reg(a[2]))));
        break;
    case Opcode::Eq:
        next.locals[reg(a[0])] = simplify(Term::eq(ss.local(reg(a[1])), ss.local(reg(a[2]))));
        break;
    case Opcode::Lt:
        next.locals[reg(a[0])] = simplify(Term::lt(ss.local(reg(a[1])), ss.local(reg(a[2]))));
        break;
    case Opcode::Load:
        next.locals[reg(a[0])] = ss.load(ss.local(reg(a[1])));
        break;
    case Opcode::Store:
        next.memory_writes.emplace_back(ss.local(reg(a[0])), ss.local(reg(a[1])));
        break;
    case Opcode::Halt:
        next = ss;
        ++next.steps;
        next.halted = true;
        return {next};
    case Opcode::Br: {
        const auto taken = static_cast<std::int64_t>(ss.pc) + a[1];
        const auto fallthrough = static_cast<std::int64_t>(ss.pc) + a[2];
        if (taken < 0 || fallthrough < 0) {
            throw Trap(TrapKind::PcOutOfRange, ss.pc, "branch target before program start");
        }
        Term cond = truth(ss.local(reg(a[0])));
        Facts facts = assumptions;
        auto known = facts_from(ss.path_condition);
        facts.insert(facts.end(), known.begin(), known.end());
        Term decided = simplify_under(cond, facts);

        std::vector<SymbolicState> out;
        auto emit = [&](std::int64_t target, const Term& extra) {
            SymbolicState succ = ss;
            ++succ.steps;
            succ.pc = static_cast<std::size_t>(target);
            succ.path_condition = simplify_under(Term::conj(ss.path_condition, extra), assumptions);
            if (!succ.path_condition.is_const(0)) {
                out.push_back(std::move(succ));
            }
        };
        if (decided.is_const()) {
            SymbolicState succ = ss;
            ++succ.steps;
            succ.pc = static_cast<std::size_t>(decided.value() != 0 ? taken : fallthrough);
            out.push_back(std::move(succ));
            return out;
        }
        emit(taken, decided);
        emit(fallthrough, simplify(Term::negate(decided)));
        return out;
    }
    default:
        throw UnsupportedSymbolic("opcode " + std::string(mnemonic(inst.op)) + " at pc " + std::to_string(ss.pc));
    }
    return {next};
}

MachineState concretize(const SymbolicState& ss, const MachineState& initial)
{
    MachineState out = initial;
    out.pc = ss.pc;
    out.halted = ss.halted;

    std::vector<std::pair<std::size_t, Word>> reg_values;
    for (const auto& [index, term] : ss.locals) {
        reg_values.emplace_back(index, eval_term(term, initial));
    }
    std::vector<std::pair<Word, Word>> mem_values;
    for (const auto& [where, what] : ss.memory_writes) {
        mem_values.emplace_back(eval_term(where, initial), eval_term(what, initial));
    }
    if (ss.popped > initial.stack.size()) {
        throw Trap(TrapKind::StackUnderflow, initial.pc,
                   "path pops " + std::to_string(ss.popped) + " entry stack values, have " +
                       std::to_string(initial.stack.size()));
    }
    std::vector<Word> pushed;
    for (const auto& t : ss.pushed) {
        pushed.push_back(eval_term(t, initial));
    }

    for (auto& [index, value] : reg_values) {
        write_local(out, index, std::move(value));
    }
    for (auto& [addr, value] : mem_values) {
        write_mem(out, addr, std::move(value));
    }
    out.stack.resize(initial.stack.size() - ss.popped);
    for (auto& w : pushed) {
        out.stack.push_back(std::move(w));
    }
    return out;
}

} // namespace ll2::sym
