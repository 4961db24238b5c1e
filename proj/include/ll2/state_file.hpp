// Copyright 2026 The LL2 Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "ll2/isa.hpp"

#include <string>
#include <string_view>

namespace ll2 {

/// Builds an initial state from a key/value document:
///
///     ; comment
///     locals-size = 32        ; optional, default 32 or enough for the program
///     memory-size = 108       ; optional, default max written address + 1
///     pc = 0
///     locals[1] = 8
///     memory[106] = 18446744073709551615
///     stack = 1 2 3           ; optional, bottom first
///
/// Assignments apply in order. Throws TextError on malformed lines.
MachineState parse_state_init(std::string_view text, std::shared_ptr<const Program> program);

/// Inverse of parse_state_init for the data fields (program excluded).
/// Zero-valued locals and memory cells are omitted.
std::string emit_state_init(const MachineState& s);

} // namespace ll2
