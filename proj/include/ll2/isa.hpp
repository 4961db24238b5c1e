// Copyright 2026 The LL2 Authors.
// SPDX-License-Identifier: Apache-2.0

/**
 * @file
 * LL2 instruction set and machine state.
 *
 * The machine is a register file of unbounded integers, a word-addressed
 * memory, a LIFO operand stack used for constants and phi copies, and a
 * read-only program. Every instruction occupies one program slot; branch
 * targets are relative to the branching instruction's own pc.
 *
 * Invariants:
 * - the register file length is fixed for the lifetime of a state;
 * - no instruction ever writes the program;
 * - a trapping step leaves the state exactly as it was before the step.
 *
 * States are values. Copies are independent except for the program, which
 * is immutable and shared.
 */

#pragma once

#include "ll2/word.hpp"

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ll2 {

enum class Opcode : std::uint8_t {
    Const,
    Push,
    PopTo,
    Add,
    Sub,
    Mul,
    Eq,
    Lt,
    Br,
    GetElPtr,
    Load,
    Store,
    Halt,
};

inline constexpr std::array<Opcode, 13> kAllOpcodes = {
    Opcode::Const, Opcode::Push,     Opcode::PopTo, Opcode::Add,   Opcode::Sub,
    Opcode::Mul,   Opcode::Eq,       Opcode::Lt,    Opcode::Br,    Opcode::GetElPtr,
    Opcode::Load,  Opcode::Store,    Opcode::Halt,
};

/// Upper-case mnemonic as it appears in program text, e.g. "POPTO".
std::string_view mnemonic(Opcode op);
std::optional<Opcode> opcode_from_mnemonic(std::string_view name);
/// Number of arguments the opcode takes in program text.
std::size_t arity(Opcode op);

/// One LL2 instruction. `args` holds register indices or branch offsets;
/// unused trailing slots are zero. CONST keeps its (unbounded) immediate in
/// `constant` and leaves `args` zero.
struct Instruction {
    Opcode op = Opcode::Halt;
    std::array<std::int64_t, 3> args{};
    Word constant{};

    static Instruction make_const(Word value);
    static Instruction make(Opcode op, std::int64_t a = 0, std::int64_t b = 0, std::int64_t c = 0);

    bool operator==(const Instruction&) const = default;
};

std::string to_string(const Instruction& inst);

struct Program {
    std::vector<Instruction> instructions;

    std::size_t size() const { return instructions.size(); }
    bool empty() const { return instructions.empty(); }
    const Instruction& operator[](std::size_t pc) const { return instructions[pc]; }

    bool operator==(const Program&) const = default;
};

/// One more than the highest register any instruction names (BR offsets
/// are not registers); 0 for programs that name none.
std::size_t registers_needed(const Program& p);

enum class TrapKind {
    PcOutOfRange,
    RegisterOutOfRange,
    MemoryOutOfRange,
    StackUnderflow,
    UnknownOpcode,
};

std::string_view to_string(TrapKind kind);

/// Raised by any machine operation whose preconditions fail. The state the
/// operation was applied to is never partially updated.
class Trap : public std::runtime_error {
public:
    Trap(TrapKind kind, std::size_t pc, std::string detail);

    TrapKind kind() const { return kind_; }
    std::size_t pc() const { return pc_; }
    const std::string& detail() const { return detail_; }

    /// Set by run/run_to_halt: zero-based index of the step that trapped.
    std::optional<std::uint64_t> step_index() const { return step_index_; }
    Trap with_step_index(std::uint64_t index) const;

private:
    TrapKind kind_;
    std::size_t pc_;
    std::string detail_;
    std::optional<std::uint64_t> step_index_;
};

inline constexpr std::size_t kDefaultLocals = 32;
inline constexpr std::size_t kMinLocals = 17;

struct MachineState {
    std::size_t pc = 0;
    std::vector<Word> locals;
    std::vector<Word> memory;
    /// Bottom of the stack is element 0.
    std::vector<Word> stack;
    std::shared_ptr<const Program> program;
    bool halted = false;

    MachineState();
    explicit MachineState(std::shared_ptr<const Program> prog, std::size_t num_locals = kDefaultLocals,
                          std::size_t memory_size = 0);

    const Program& code() const { return *program; }

    /// Field-for-field equality; programs compare by content.
    bool operator==(const MachineState& other) const;
};

const Word& read_local(const MachineState& s, std::size_t k);
void write_local(MachineState& s, std::size_t j, Word v);
MachineState with_local(MachineState s, std::size_t j, Word v);

const Word& read_mem(const MachineState& s, const Word& addr);
void write_mem(MachineState& s, const Word& addr, Word v);
MachineState with_mem(MachineState s, const Word& addr, Word v);

/// Applies one instruction to `s` in place. On a trap `s` is untouched.
/// A halted state is left unchanged.
void execute_in_place(const Instruction& inst, MachineState& s);
MachineState execute_instruction(const Instruction& inst, MachineState s);

void step_in_place(MachineState& s);
MachineState step(MachineState s);

/// n-fold step. Traps carry the index of the failing step.
void run_in_place(MachineState& s, std::uint64_t n);
MachineState run(MachineState s, std::uint64_t n);

enum class RunStatus { Halted, BudgetExhausted };

struct RunResult {
    MachineState state;
    std::uint64_t steps = 0;
    RunStatus status = RunStatus::Halted;
};

/// True when the state is halted or poised on a HALT instruction.
bool at_halt(const MachineState& s);

/// Steps until the state reaches a HALT instruction (the HALT itself is not
/// executed or counted), or until `max_steps` have been taken.
RunResult run_to_halt(MachineState s, std::uint64_t max_steps);

} // namespace ll2
