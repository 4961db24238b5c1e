// Copyright 2026 The LL2 Authors.
// SPDX-License-Identifier: Apache-2.0

// Shared fixtures for the test binaries: corpus loading and random program
// and state generators used by the property suites.

#pragma once

#include "ll2/isa.hpp"
#include "ll2/program_text.hpp"
#include "ll2/state_file.hpp"

#include <fstream>
#include <memory>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>

namespace ll2::test {

inline std::string corpus_path(const std::string& name) { return std::string(LL2_CORPUS_DIR) + "/" + name; }

inline std::string read_corpus(const std::string& name)
{
    std::ifstream in(corpus_path(name));
    if (!in) {
        throw std::runtime_error("missing corpus file " + name);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

inline std::shared_ptr<const Program> load_program(const std::string& name)
{
    return std::make_shared<const Program>(parse_program(read_corpus(name)));
}

inline std::shared_ptr<const Program> reference_program() { return load_program("occurrences.ll2"); }

inline MachineState concrete_state() { return parse_state_init(read_corpus("occurrences.state"), reference_program()); }

using Rng = std::mt19937_64;

inline std::int64_t uniform(Rng& rng, std::int64_t lo, std::int64_t hi)
{
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
}

/// Random program over a small register file and memory. Most register
/// values stay small so LOAD/STORE usually hit memory; traps remain possible
/// and the properties must hold for them too.
struct RandomMachine {
    std::size_t registers = 8;
    std::size_t memory = 8;
    std::size_t length = 12;
};

inline Instruction random_instruction(Rng& rng, const RandomMachine& m, std::size_t pc, std::size_t length)
{
    auto reg = [&] { return uniform(rng, 0, static_cast<std::int64_t>(m.registers) - 1); };
    auto offset = [&] { return uniform(rng, -static_cast<std::int64_t>(pc), static_cast<std::int64_t>(length - pc)); };
    const auto op = kAllOpcodes[static_cast<std::size_t>(uniform(rng, 0, kAllOpcodes.size() - 1))];
    switch (op) {
    case Opcode::Const:
        return Instruction::make_const(uniform(rng, -3, 9));
    case Opcode::Push:
    case Opcode::PopTo:
        return Instruction::make(op, reg());
    case Opcode::Halt:
        // Keep halts rare so runs are long enough to be interesting.
        if (uniform(rng, 0, 3) != 0) {
            return Instruction::make(Opcode::Add, reg(), reg(), reg());
        }
        return Instruction::make(op);
    case Opcode::Br:
        return Instruction::make(op, reg(), offset(), offset());
    case Opcode::Load:
    case Opcode::Store:
        return Instruction::make(op, reg(), reg());
    default:
        return Instruction::make(op, reg(), reg(), reg());
    }
}

inline std::shared_ptr<const Program> random_program(Rng& rng, const RandomMachine& m)
{
    Program p;
    for (std::size_t pc = 0; pc < m.length; ++pc) {
        p.instructions.push_back(random_instruction(rng, m, pc, m.length));
    }
    return std::make_shared<const Program>(std::move(p));
}

inline MachineState random_state(Rng& rng, std::shared_ptr<const Program> program, const RandomMachine& m)
{
    MachineState s(std::move(program), m.registers, m.memory);
    for (auto& w : s.locals) {
        w = uniform(rng, -2, static_cast<std::int64_t>(m.memory) + 1);
    }
    for (auto& w : s.memory) {
        w = uniform(rng, -5, 20);
    }
    const auto depth = uniform(rng, 0, 3);
    for (std::int64_t i = 0; i < depth; ++i) {
        s.stack.push_back(uniform(rng, -5, 20));
    }
    s.pc = static_cast<std::size_t>(uniform(rng, 0, static_cast<std::int64_t>(s.program->size()) - 1));
    return s;
}

/// Either the resulting state or the trap kind raised on the way.
using Outcome = std::variant<MachineState, TrapKind>;

template <typename F>
Outcome outcome_of(F&& f)
{
    try {
        return Outcome{f()};
    } catch (const Trap& t) {
        return Outcome{t.kind()};
    }
}

} // namespace ll2::test
