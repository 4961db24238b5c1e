// Copyright 2026 The LL2 Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "ll2/isa.hpp"
#include "ll2/term.hpp"

#include <map>
#include <stdexcept>
#include <vector>

namespace ll2::sym {

/// Machine state after some steps, expressed over the state at entry.
///
/// Registers not in `locals` still hold their entry value. Memory is the
/// entry memory followed by `memory_writes` in order (last write wins). The
/// stack is the entry stack minus its top `popped` entries, then `pushed`.
struct SymbolicState {
    std::size_t pc = 0;
    std::map<std::size_t, Term> locals;
    std::vector<std::pair<Term, Term>> memory_writes;
    std::size_t popped = 0;
    std::vector<Term> pushed;
    Term path_condition = Term(1);
    std::uint64_t steps = 0;
    bool halted = false;

    static SymbolicState at(std::size_t pc);

    Term local(std::size_t index) const;
    /// Memory read through the write list. Writes whose address is
    /// syntactically equal win outright; distinct constant addresses are
    /// skipped; anything else becomes an `ite` on address equality.
    Term load(const Term& address) const;
};

class UnsupportedSymbolic : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Executes program[ss.pc] over terms. Non-branch instructions yield one
/// successor; BR yields one or two, each with the branch outcome conjoined
/// into its path condition. Successors whose condition simplifies to 0
/// under `assumptions` plus the path condition are dropped.
std::vector<SymbolicState> symbolic_step(const SymbolicState& ss, const Program& p, const Facts& assumptions = {});

/// Evaluates every component of `ss` against the entry state `initial`,
/// giving the concrete state the symbolic one stands for.
MachineState concretize(const SymbolicState& ss, const MachineState& initial);

} // namespace ll2::sym
