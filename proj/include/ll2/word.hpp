// Copyright 2026 The LL2 Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace ll2 {

/// Machine word. Registers and memory cells hold unbounded signed integers;
/// arithmetic never wraps.
using Word = boost::multiprecision::cpp_int;

std::string to_string(const Word& w);

/// Parses an optionally signed decimal literal. Returns nullopt on any
/// malformed input (empty, stray characters).
std::optional<Word> parse_word(std::string_view text);

/// Narrowing helpers; nullopt when the word does not fit.
std::optional<std::size_t> word_to_index(const Word& w);
std::optional<long long> word_to_i64(const Word& w);

} // namespace ll2
