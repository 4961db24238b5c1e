// Copyright 2026 The LL2 Authors.
// SPDX-License-Identifier: Apache-2.0

// A direct interpreter for parsed IR, used as the oracle for the lowering.
// It walks blocks and evaluates phis as a parallel assignment on entry, so
// it shares nothing with the register allocator or the copy sequencing.
// Arithmetic is on unbounded integers; trunc reduces modulo 2^width.

#pragma once

#include "ll2/frontend.hpp"

#include <map>
#include <optional>
#include <regex>
#include <string>
#include <vector>

namespace ll2::test {

struct IrOutcome {
    std::optional<Word> result;
    std::vector<Word> memory;
    std::uint64_t instructions = 0;
};

inline IrOutcome eval_ir(const ir::IrFunction& f, const std::map<std::string, Word>& args, std::vector<Word> memory,
                         std::uint64_t budget = 1'000'000)
{
    using namespace ll2::ir;
    std::map<std::string, Word> env = args;
    auto get = [&](const Value& v) -> Word {
        if (v.is_literal()) {
            return v.literal;
        }
        auto it = env.find(*v.name);
        if (it == env.end()) {
            throw std::runtime_error("eval_ir: %" + *v.name + " has no value");
        }
        return it->second;
    };
    auto address = [&](const Word& p) -> std::size_t {
        if (p < 0 || p >= memory.size()) {
            throw std::runtime_error("eval_ir: address " + p.str() + " out of range");
        }
        return static_cast<std::size_t>(p);
    };

    IrOutcome out;
    const IrBlock* block = &f.blocks.front();
    std::string from;
    while (true) {
        std::map<std::string, Word> phi_values;
        for (const auto& in : block->instrs) {
            if (in.op != IrOp::Phi) {
                break;
            }
            for (const auto& [v, label] : in.incoming) {
                if (label == from) {
                    phi_values[in.dest] = get(v);
                }
            }
        }
        for (auto& [k, v] : phi_values) {
            env[k] = v;
        }
        for (const auto& in : block->instrs) {
            if (in.op == IrOp::Phi) {
                continue;
            }
            if (++out.instructions > budget) {
                throw std::runtime_error("eval_ir: budget exhausted");
            }
            switch (in.op) {
            case IrOp::Add:
                env[in.dest] = get(in.operands[0]) + get(in.operands[1]);
                break;
            case IrOp::Sub:
                env[in.dest] = get(in.operands[0]) - get(in.operands[1]);
                break;
            case IrOp::Mul:
                env[in.dest] = get(in.operands[0]) * get(in.operands[1]);
                break;
            case IrOp::Icmp: {
                const Word a = get(in.operands[0]);
                const Word b = get(in.operands[1]);
                bool r = false;
                switch (in.pred) {
                case IcmpPred::Eq: r = a == b; break;
                case IcmpPred::Ne: r = a != b; break;
                case IcmpPred::Ult: case IcmpPred::Slt: r = a < b; break;
                case IcmpPred::Ugt: case IcmpPred::Sgt: r = a > b; break;
                case IcmpPred::Ule: case IcmpPred::Sle: r = a <= b; break;
                case IcmpPred::Uge: case IcmpPred::Sge: r = a >= b; break;
                }
                env[in.dest] = r ? 1 : 0;
                break;
            }
            case IrOp::Load:
                env[in.dest] = memory[address(get(in.operands[0]))];
                break;
            case IrOp::Store:
                memory[address(get(in.operands[1]))] = get(in.operands[0]);
                break;
            case IrOp::Gep:
                env[in.dest] = get(in.operands[0]) + get(in.operands[1]);
                break;
            case IrOp::ZExt:
            case IrOp::SExt:
                env[in.dest] = get(in.operands[0]);
                break;
            case IrOp::Trunc: {
                static const std::regex width(R"(to\s+i(\d+))");
                std::smatch m;
                Word v = get(in.operands[0]);
                if (std::regex_search(in.text, m, width)) {
                    const Word mod = Word(1) << std::stoi(m[1].str());
                    v = ((v % mod) + mod) % mod;
                }
                env[in.dest] = v;
                break;
            }
            case IrOp::Br:
                from = block->label;
                block = f.block(in.labels[0]);
                goto next_block;
            case IrOp::CondBr:
                from = block->label;
                block = f.block(in.labels[get(in.operands[0]) != 0 ? 0 : 1]);
                goto next_block;
            case IrOp::Ret:
                if (!in.operands.empty()) {
                    out.result = get(in.operands[0]);
                }
                out.memory = std::move(memory);
                return out;
            case IrOp::Phi:
                break;
            }
        }
        throw std::runtime_error("eval_ir: fell off block " + block->label);
    next_block:;
    }
}

/// Runs a lowered function on the LL2 interpreter: parameters are loaded
/// into their registers, memory is the given array, and the result is the
/// top of the stack once the machine is poised on HALT.
inline IrOutcome run_lowered(const ir::LoweringArtifact& a, const std::map<std::string, Word>& args,
                             std::vector<Word> memory, std::uint64_t budget = 10'000'000)
{
    auto program = std::make_shared<const Program>(a.program);
    MachineState s(program, std::max(kDefaultLocals, a.registers_used()));
    s.memory = std::move(memory);
    for (const auto& [name, value] : args) {
        if (auto reg = a.register_of(name)) {
            s.locals[*reg] = value;
        }
    }
    auto r = run_to_halt(s, budget);
    if (r.status != RunStatus::Halted) {
        throw std::runtime_error("run_lowered: budget exhausted");
    }
    IrOutcome out;
    if (!r.state.stack.empty()) {
        out.result = r.state.stack.back();
    }
    out.memory = std::move(r.state.memory);
    out.instructions = r.steps;
    return out;
}

} // namespace ll2::test
