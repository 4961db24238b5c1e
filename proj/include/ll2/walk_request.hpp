// Copyright 2026 The LL2 Authors.
// SPDX-License-Identifier: Apache-2.0

// Walk-request files. A file is a sequence of s-expressions:
//
//   (defun-nx loop-inv (s) (< (nth 5 (rd :locals s)) (nth 1 (rd :locals s))))
//   (def-semantics
//     :init-pc 8
//     :focus-regionp (lambda (pc) (>= pc 8))
//     :root-name loop
//     :hyps+ ((loop-inv s) (memory-bound 0 1))
//     :measure (nfix (- (nth 1 (rd :locals s)) (nth 5 (rd :locals s)))))
//
// Definitions (`defun-nx`, `defun`, `defpred`) name a term, or one of the
// structural predicates `(program-is)` and `(well-formed)`. A reference
// `(name s)` or `(name)` inside any later term is replaced by the body.
// The focus region is either `:focus-regionp` with a lambda over pc built
// from and/or/comparisons with constants, or `:focus-region` with a list
// of inclusive intervals such as `((0 7) (9 *))`. A measure may also be
// given Codewalker-style inside `:annotations` via `(xargs :measure m)`.

#pragma once

#include "ll2/walker.hpp"

#include <stdexcept>
#include <string_view>

namespace ll2::walk {

class WalkFileError : public std::runtime_error {
public:
    WalkFileError(std::size_t line, const std::string& what);
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// Every def-semantics form in the file, in order. `program` is what
/// `(program-is)` refers to.
std::vector<WalkRequest> parse_walk_file(std::string_view text, std::shared_ptr<const Program> program);

} // namespace ll2::walk
