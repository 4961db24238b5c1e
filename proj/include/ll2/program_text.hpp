// Copyright 2026 The LL2 Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include "ll2/isa.hpp"

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ll2 {

/// Malformed program or state-init text. `line` is 1-based.
class TextError : public std::runtime_error {
public:
    TextError(std::size_t line, const std::string& message)
        : std::runtime_error("line " + std::to_string(line) + ": " + message), line_(line)
    {
    }
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// Program text: one s-expression instruction per line, e.g. `(BR 13 1 -12)`.
/// `;` starts a comment; blank lines are ignored.
Program parse_program(std::string_view text);

/// Canonical text: one instruction per line, no comments. Empty program
/// yields empty text. parse_program(emit_program_text(p)) == p.
std::string emit_program_text(const Program& p);

/// Same listing with a trailing `; <pc>` comment per line.
std::string emit_annotated_program_text(const Program& p);

/// As above, appending notes[pc] after the pc comment where non-empty.
std::string emit_annotated_program_text(const Program& p, const std::vector<std::string>& notes);

/// Checks the static invariants (arity, register indices non-negative,
/// branch targets within [0, size]). Throws TextError whose line is the pc.
void validate_program(const Program& p);

} // namespace ll2
