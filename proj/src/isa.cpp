// Copyright 2026 The LL2 Authors.
// SPDX-License-Identifier: Apache-2.0

#include "ll2/isa.hpp"

#include <limits>
#include <sstream>
#include <utility>

namespace ll2 {

std::string to_string(const Word& w) { return w.str(); }

std::optional<Word> parse_word(std::string_view text)
{
    if (text.empty()) {
        return std::nullopt;
    }
    std::size_t i = 0;
    bool negative = false;
    if (text[0] == '-' || text[0] == '+') {
        negative = text[0] == '-';
        i = 1;
    }
    if (i == text.size()) {
        return std::nullopt;
    }
    Word value = 0;
    for (; i < text.size(); ++i) {
        char c = text[i];
        if (c < '0' || c > '9') {
            return std::nullopt;
        }
        value *= 10;
        value += c - '0';
    }
    return negative ? Word(-value) : value;
}

std::optional<std::size_t> word_to_index(const Word& w)
{
    if (w < 0 || w > Word(std::numeric_limits<std::size_t>::max())) {
        return std::nullopt;
    }
    return w.convert_to<std::size_t>();
}

std::optional<long long> word_to_i64(const Word& w)
{
    if (w < Word(std::numeric_limits<long long>::min()) || w > Word(std::numeric_limits<long long>::max())) {
        return std::nullopt;
    }
    return w.convert_to<long long>();
}

namespace {

struct OpInfo {
    Opcode op;
    std::string_view name;
    std::size_t arity;
};

constexpr std::array<OpInfo, 13> kOpTable = {{
    {Opcode::Const, "CONST", 1},
    {Opcode::Push, "PUSH", 1},
    {Opcode::PopTo, "POPTO", 1},
    {Opcode::Add, "ADD", 3},
    {Opcode::Sub, "SUB", 3},
    {Opcode::Mul, "MUL", 3},
    {Opcode::Eq, "EQ", 3},
    {Opcode::Lt, "LT", 3},
    {Opcode::Br, "BR", 3},
    {Opcode::GetElPtr, "GETELPTR", 3},
    {Opcode::Load, "LOAD", 2},
    {Opcode::Store, "STORE", 2},
    {Opcode::Halt, "HALT", 0},
}};

const OpInfo& info(Opcode op) { return kOpTable[static_cast<std::size_t>(op)]; }

} // namespace

std::string_view mnemonic(Opcode op) { return info(op).name; }

std::size_t arity(Opcode op) { return info(op).arity; }

std::optional<Opcode> opcode_from_mnemonic(std::string_view name)
{
    for (const auto& entry : kOpTable) {
        if (entry.name == name) {
            return entry.op;
        }
    }
    return std::nullopt;
}

Instruction Instruction::make_const(Word value)
{
    Instruction inst;
    inst.op = Opcode::Const;
    inst.constant = std::move(value);
    return inst;
}

Instruction Instruction::make(Opcode op, std::int64_t a, std::int64_t b, std::int64_t c)
{
    Instruction inst;
    inst.op = op;
    inst.args = {a, b, c};
    return inst;
}

std::string to_string(const Instruction& inst)
{
    std::ostringstream out;
    out << '(' << mnemonic(inst.op);
    if (inst.op == Opcode::Const) {
        out << ' ' << inst.constant;
    } else {
        for (std::size_t i = 0; i < arity(inst.op); ++i) {
            out << ' ' << inst.args[i];
        }
    }
    out << ')';
    return out.str();
}

std::string_view to_string(TrapKind kind)
{
    switch (kind) {
    case TrapKind::PcOutOfRange:
        return "PcOutOfRange";
    case TrapKind::RegisterOutOfRange:
        return "RegisterOutOfRange";
    case TrapKind::MemoryOutOfRange:
        return "MemoryOutOfRange";
    case TrapKind::StackUnderflow:
        return "StackUnderflow";
    case TrapKind::UnknownOpcode:
        return "UnknownOpcode";
    }
    return "?";
}

namespace {

std::string trap_message(TrapKind kind, std::size_t pc, const std::string& detail,
                         std::optional<std::uint64_t> step)
{
    std::ostringstream out;
    out << to_string(kind) << " at pc " << pc;
    if (step) {
        out << " (step " << *step << ")";
    }
    if (!detail.empty()) {
        out << ": " << detail;
    }
    return out.str();
}

} // namespace

Trap::Trap(TrapKind kind, std::size_t pc, std::string detail)
    : std::runtime_error(trap_message(kind, pc, detail, std::nullopt)), kind_(kind), pc_(pc),
      detail_(std::move(detail))
{
}

Trap Trap::with_step_index(std::uint64_t index) const
{
    Trap copy(*this);
    static_cast<std::runtime_error&>(copy) = std::runtime_error(trap_message(kind_, pc_, detail_, index));
    copy.step_index_ = index;
    return copy;
}

namespace {

const std::shared_ptr<const Program>& empty_program()
{
    static const auto prog = std::make_shared<const Program>();
    return prog;
}

} // namespace

std::size_t registers_needed(const Program& p)
{
    std::size_t n = 0;
    for (const auto& inst : p.instructions) {
        const std::size_t regs = inst.op == Opcode::Br ? 1 : inst.op == Opcode::Const ? 0 : arity(inst.op);
        for (std::size_t i = 0; i < regs; ++i) {
            n = std::max(n, static_cast<std::size_t>(inst.args[i]) + 1);
        }
    }
    return n;
}

MachineState::MachineState() : locals(kDefaultLocals), program(empty_program()) {}

MachineState::MachineState(std::shared_ptr<const Program> prog, std::size_t num_locals, std::size_t memory_size)
    : locals(num_locals), memory(memory_size), program(prog ? std::move(prog) : empty_program())
{
}

bool MachineState::operator==(const MachineState& other) const
{
    if (pc != other.pc || halted != other.halted || locals != other.locals || memory != other.memory ||
        stack != other.stack) {
        return false;
    }
    return program == other.program || *program == *other.program;
}

namespace {

std::size_t checked_register(const MachineState& s, std::int64_t k)
{
    if (k < 0 || static_cast<std::uint64_t>(k) >= s.locals.size()) {
        throw Trap(TrapKind::RegisterOutOfRange, s.pc,
                   "register " + std::to_string(k) + " (file has " + std::to_string(s.locals.size()) + ")");
    }
    return static_cast<std::size_t>(k);
}

std::size_t checked_address(const MachineState& s, const Word& addr)
{
    auto index = word_to_index(addr);
    if (!index || *index >= s.memory.size()) {
        throw Trap(TrapKind::MemoryOutOfRange, s.pc,
                   "address " + addr.str() + " (memory has " + std::to_string(s.memory.size()) + " words)");
    }
    return *index;
}

std::size_t branch_target(const MachineState& s, std::int64_t offset)
{
    const auto target = static_cast<std::int64_t>(s.pc) + offset;
    if (target < 0 || static_cast<std::uint64_t>(target) > s.program->size()) {
        throw Trap(TrapKind::PcOutOfRange, s.pc, "branch target " + std::to_string(target));
    }
    return static_cast<std::size_t>(target);
}

} // namespace

const Word& read_local(const MachineState& s, std::size_t k)
{
    return s.locals[checked_register(s, static_cast<std::int64_t>(k))];
}

void write_local(MachineState& s, std::size_t j, Word v)
{
    s.locals[checked_register(s, static_cast<std::int64_t>(j))] = std::move(v);
}

MachineState with_local(MachineState s, std::size_t j, Word v)
{
    write_local(s, j, std::move(v));
    return s;
}

const Word& read_mem(const MachineState& s, const Word& addr) { return s.memory[checked_address(s, addr)]; }

void write_mem(MachineState& s, const Word& addr, Word v) { s.memory[checked_address(s, addr)] = std::move(v); }

MachineState with_mem(MachineState s, const Word& addr, Word v)
{
    write_mem(s, addr, std::move(v));
    return s;
}

void execute_in_place(const Instruction& inst, MachineState& s)
{
    if (s.halted) {
        return;
    }
    const auto& a = inst.args;
    switch (inst.op) {
    case Opcode::Const:
        s.stack.push_back(inst.constant);
        break;
    case Opcode::Push:
        s.stack.push_back(s.locals[checked_register(s, a[0])]);
        break;
    case Opcode::PopTo: {
        auto dest = checked_register(s, a[0]);
        if (s.stack.empty()) {
            throw Trap(TrapKind::StackUnderflow, s.pc, "POPTO on empty stack");
        }
        s.locals[dest] = std::move(s.stack.back());
        s.stack.pop_back();
        break;
    }
    case Opcode::Add:
    case Opcode::Sub:
    case Opcode::Mul:
    case Opcode::GetElPtr: {
        auto dest = checked_register(s, a[0]);
        const Word& lhs = s.locals[checked_register(s, a[1])];
        const Word& rhs = s.locals[checked_register(s, a[2])];
        if (inst.op == Opcode::Sub) {
            s.locals[dest] = lhs - rhs;
        } else if (inst.op == Opcode::Mul) {
            s.locals[dest] = lhs * rhs;
        } else {
            // GETELPTR: one-word element stride.
            s.locals[dest] = lhs + rhs;
        }
        break;
    }
    case Opcode::Eq:
    case Opcode::Lt: {
        auto dest = checked_register(s, a[0]);
        const Word& lhs = s.locals[checked_register(s, a[1])];
        const Word& rhs = s.locals[checked_register(s, a[2])];
        bool holds = inst.op == Opcode::Eq ? lhs == rhs : lhs < rhs;
        s.locals[dest] = holds ? 1 : 0;
        break;
    }
    case Opcode::Br: {
        const Word& cond = s.locals[checked_register(s, a[0])];
        s.pc = branch_target(s, cond != 0 ? a[1] : a[2]);
        return;
    }
    case Opcode::Load: {
        auto dest = checked_register(s, a[0]);
        auto addr = checked_address(s, s.locals[checked_register(s, a[1])]);
        s.locals[dest] = s.memory[addr];
        break;
    }
    case Opcode::Store: {
        auto addr = checked_address(s, s.locals[checked_register(s, a[0])]);
        s.memory[addr] = s.locals[checked_register(s, a[1])];
        break;
    }
    case Opcode::Halt:
        s.halted = true;
        return;
    default:
        throw Trap(TrapKind::UnknownOpcode, s.pc, "opcode " + std::to_string(static_cast<int>(inst.op)));
    }
    ++s.pc;
}

MachineState execute_instruction(const Instruction& inst, MachineState s)
{
    execute_in_place(inst, s);
    return s;
}

void step_in_place(MachineState& s)
{
    if (s.halted) {
        return;
    }
    if (s.pc >= s.program->size()) {
        throw Trap(TrapKind::PcOutOfRange, s.pc,
                   "program has " + std::to_string(s.program->size()) + " instructions");
    }
    execute_in_place((*s.program)[s.pc], s);
}

MachineState step(MachineState s)
{
    step_in_place(s);
    return s;
}

void run_in_place(MachineState& s, std::uint64_t n)
{
    for (std::uint64_t i = 0; i < n && !s.halted; ++i) {
        try {
            step_in_place(s);
        } catch (const Trap& trap) {
            throw trap.with_step_index(i);
        }
    }
}

MachineState run(MachineState s, std::uint64_t n)
{
    run_in_place(s, n);
    return s;
}

bool at_halt(const MachineState& s)
{
    return s.halted || (s.pc < s.program->size() && (*s.program)[s.pc].op == Opcode::Halt);
}

RunResult run_to_halt(MachineState s, std::uint64_t max_steps)
{
    RunResult result;
    std::uint64_t steps = 0;
    while (!at_halt(s)) {
        if (steps == max_steps) {
            result.status = RunStatus::BudgetExhausted;
            break;
        }
        try {
            step_in_place(s);
        } catch (const Trap& trap) {
            throw trap.with_step_index(steps);
        }
        ++steps;
    }
    result.state = std::move(s);
    result.steps = steps;
    return result;
}

} // namespace ll2
