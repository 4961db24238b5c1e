// Copyright 2026 The LL2 Authors.
// SPDX-License-Identifier: Apache-2.0

/**
 * @file
 * Translation of a small subset of textual LLVM IR to LL2.
 *
 * Supported: `define` with integer and pointer parameters; add, sub, mul
 * (nuw/nsw ignored); icmp eq, ne, ult, slt, ugt, sgt, ule, sle, uge, sge;
 * load and store; single-index getelementptr; phi; zext, sext, trunc; br
 * (conditional and unconditional); ret. Alignment, attributes, metadata
 * and comments are skipped. Anything else is UnsupportedOpcode.
 *
 * Words are unbounded, so integer widths are not modelled: casts lower to
 * nothing (the result shares the operand's register) and signed and
 * unsigned comparisons coincide. Memory is word-addressed, so
 * getelementptr adds the index to the base without scaling.
 */

#pragma once

#include "ll2/isa.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ll2::ir {

enum class FrontendErrorKind { Syntax, UnsupportedOpcode, UnresolvedLabel, InvalidSsa };

class FrontendError : public std::runtime_error {
public:
    FrontendError(FrontendErrorKind kind, std::size_t line, const std::string& detail);
    FrontendErrorKind kind() const { return kind_; }
    std::size_t line() const { return line_; }

private:
    FrontendErrorKind kind_;
    std::size_t line_;
};

/// An operand: an SSA name (without `%`) or an integer literal.
struct Value {
    std::optional<std::string> name;
    Word literal = 0;

    static Value named(std::string n) { return {std::move(n), 0}; }
    static Value constant(Word w) { return {std::nullopt, std::move(w)}; }
    bool is_literal() const { return !name.has_value(); }
    bool operator==(const Value&) const = default;
};

std::string to_string(const Value& v);

enum class IrOp { Add, Sub, Mul, Icmp, Load, Store, Gep, Phi, ZExt, SExt, Trunc, Br, CondBr, Ret };

enum class IcmpPred { Eq, Ne, Ult, Slt, Ugt, Sgt, Ule, Sle, Uge, Sge };

struct IrInstr {
    IrOp op = IrOp::Ret;
    /// SSA name defined by the instruction; empty for br, ret, store.
    std::string dest;
    /// Binary ops and icmp: lhs, rhs. Load: pointer. Store: value, pointer.
    /// Gep: base, index. Casts: source. CondBr: condition. Ret: value, or
    /// nothing for `ret void`.
    std::vector<Value> operands;
    IcmpPred pred = IcmpPred::Eq;
    /// Phi: (value, predecessor label) pairs.
    std::vector<std::pair<Value, std::string>> incoming;
    /// Br: target. CondBr: then, else.
    std::vector<std::string> labels;
    std::size_t line = 0;
    /// The source line, trimmed.
    std::string text;

    bool is_terminator() const { return op == IrOp::Br || op == IrOp::CondBr || op == IrOp::Ret; }
};

struct IrBlock {
    std::string label;
    std::vector<IrInstr> instrs;
    std::size_t line = 0;

    const IrInstr& terminator() const { return instrs.back(); }
};

struct IrParam {
    std::string name;
    std::string type;
};

struct IrFunction {
    std::string name;
    std::vector<IrParam> params;
    std::vector<IrBlock> blocks;
    std::size_t line = 0;

    const IrBlock* block(std::string_view label) const;
    std::vector<std::string> successors(const IrBlock& b) const;
};

struct IrModule {
    std::vector<IrFunction> functions;

    const IrFunction* function(std::string_view name) const;
};

IrModule parse_ll(std::string_view text);

/// Structural checks: every block ends in exactly one terminator, the entry
/// block has no phis, phis come first and name each predecessor once,
/// labels resolve, every SSA name is defined once and every use is defined.
void validate(const IrFunction& f);

// --- lowering -------------------------------------------------------------

struct RegisterEntry {
    /// SSA name, or a description such as "literal 0" for temporaries.
    std::string name;
    std::size_t reg = 0;
    /// For names sharing a register with another: the owner's name.
    std::string alias_of;
};

struct LoweringArtifact {
    Program program;
    /// In allocation order.
    std::vector<RegisterEntry> register_map;
    std::map<std::string, std::size_t> block_pc;
    std::optional<std::size_t> return_register;
    /// One note per pc: the IR line or phi edge it came from.
    std::vector<std::string> notes;

    std::optional<std::size_t> register_of(std::string_view ssa_name) const;
    std::size_t registers_used() const;
};

/// Lowers a validated function. Parameters take registers in reverse
/// declaration order, then each block in order allocates for its
/// instructions: a fresh register per literal operand (loaded with
/// CONST k; POPTO r just before use), then the destination. Casts share
/// their operand's register. A phi reuses the register of an earlier phi
/// with identical incoming pairs when their live ranges are disjoint.
///
/// Phi copies on an edge are a parallel assignment done through the stack:
/// push every source, then pop into the destinations in reverse order.
/// Before a conditional branch the copies of both edges are emitted once,
/// ahead of the BR, when that cannot clobber anything the other successor
/// reads; otherwise the edge gets its own trampoline block.
LoweringArtifact lower_function(const IrFunction& f);

/// `%name -> reg` lines, with temporaries and aliases marked.
std::string emit_register_map(const LoweringArtifact& a);

} // namespace ll2::ir
