// Copyright 2026 The LL2 Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace ll2 {

/// A parsed s-expression: an atom (lower-cased) or a list.
struct Sexp {
    std::string atom;
    std::vector<Sexp> items;
    bool is_list = false;
    /// 1-based line the expression starts on.
    std::size_t line = 0;

    bool is(std::string_view name) const { return !is_list && atom == name; }
};

class SexpError : public std::runtime_error {
public:
    SexpError(std::size_t line, const std::string& what);
    std::size_t line() const { return line_; }

private:
    std::size_t line_;
};

/// Reads exactly one expression; `;` starts a comment.
Sexp read_sexp(std::string_view text);

/// Reads every top-level expression in `text`.
std::vector<Sexp> read_sexps(std::string_view text);

std::string to_string(const Sexp& e);

} // namespace ll2
