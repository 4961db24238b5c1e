// Copyright 2026 The LL2 Authors.
// SPDX-License-Identifier: Apache-2.0

// The occurrences example: the LL2 listing for counting how many elements
// of an array equal a value, its invariants and loop measure, the two
// region requests that split it into preamble and loop, and state
// generators for checking the resulting summaries.
//
// Register use: 0 array base, 1 n, 2 val, 5 loop index j, 6 count.

#pragma once

#include "ll2/walker.hpp"

#include <random>
#include <string_view>

namespace ll2::occ {

/// The listing, comments included.
std::string_view program_text();
std::shared_ptr<const Program> program();

inline constexpr std::size_t kLoopPc = 8;
inline constexpr std::size_t kResultRegister = 6;

/// natp of registers 0, 1, 3, 5, 6 (register 2 may be any integer).
sym::StatePredicate program_inv();
/// j < n.
sym::StatePredicate loop_inv();
/// base + n <= len(memory).
sym::StatePredicate memory_bound();
/// nfix(if pc = 8 then n - j else n).
sym::MeasureExpr clk8_measure();

walk::WalkRequest preamble_request();
walk::WalkRequest loop_request();

/// Entry state at pc 0 with the array at address `base`.
MachineState entry_state(const std::vector<Word>& memory, const Word& val, std::size_t base = 0,
                         std::optional<std::size_t> n = std::nullopt);

/// Loop-entry states (pc 8): every memory of length 1..max_len over
/// `values`, every val in `vals`, base 0, n = length, every j < n, with the
/// count register holding 0 or 2.
std::vector<MachineState> loop_grid(std::size_t max_len, const std::vector<Word>& values,
                                    const std::vector<Word>& vals);

/// Entry states (pc 0) under the final theorem's hypotheses (base 0,
/// n = len(memory)): every memory of length 0..max_len over `values`, every
/// val in `vals`.
std::vector<MachineState> chain_grid(std::size_t max_len, const std::vector<Word>& values,
                                     const std::vector<Word>& vals);

/// Random entry state under the final theorem's hypotheses with memory
/// length in [0, max_len]; elements drawn mostly from {0, 1, 399}.
MachineState random_chain_state(std::mt19937_64& rng, std::size_t max_len);

} // namespace ll2::occ
