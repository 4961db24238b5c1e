// Copyright 2026 The LL2 Authors.
// SPDX-License-Identifier: Apache-2.0

/**
 * @file
 * Reference specifications and the array-fold pair used to connect the
 * occurrences program to `occurlist`.
 *
 * A fold over memory[first, last) can be computed two ways: tail-recursively
 * in ascending index order, threading the accumulator, or by structural
 * recursion on the suffix, combining each element with the fold of what
 * follows it. The two agree whenever the step does not depend on the order
 * elements are combined in; check_fold_pair tests that they do.
 */

#pragma once

#include "ll2/walker.hpp"

#include <functional>
#include <random>
#include <span>
#include <string>

namespace ll2::gold {

/// Number of elements of `lst` equal to `val`, by recursion on the list.
Word occurlist(const Word& val, std::span<const Word> lst);

/// n! for n >= 0; 1 for negative n.
Word factorial(const Word& n);

/// Sum of the elements, by recursion on the list.
Word list_sum(std::span<const Word> lst);

struct FoldSpec {
    std::string name;
    std::function<Word(const Word& acc, const Word& elem, const Word& aux)> step;
    Word initial = 0;
};

/// acc + (elem == aux ? 1 : 0), starting from 0.
FoldSpec occur_arr();

/// acc + elem, starting from 0.
FoldSpec sum_arr();

/// Ascending accumulation over memory[first, last). Throws Trap
/// MemoryOutOfRange when the bounds exceed the memory.
Word fold_tailrec(const FoldSpec& spec, const Word& aux, std::span<const Word> memory, std::size_t first,
                  std::size_t last);

/// Structural recursion on the suffix memory[first, last).
Word fold_structural(const FoldSpec& spec, const Word& aux, std::span<const Word> memory, std::size_t first,
                     std::size_t last);

/// A random step of the form acc (+|*|max|min) g(elem, aux), for which the
/// combination order does not matter.
FoldSpec random_fold(std::mt19937_64& rng);

/// Hypotheses of the final occurrences theorem: the summary hypotheses of
/// the preamble plus base + n <= len(memory), n = len(memory), pc = 0.
std::vector<sym::StatePredicate> chain_hypotheses(std::shared_ptr<const Program> program);

struct ChainReport {
    /// locals[6] after the composed summaries equals the tail-recursive fold.
    walk::CheckReport composition;
    /// The structural fold over every prefix equals occurlist of the prefix.
    walk::CheckReport prefix;
    /// Both fold orders agree on the whole memory.
    walk::CheckReport fold_pair;
    /// Running the interpreter for the two clocks leaves occurlist in
    /// locals[6].
    walk::CheckReport interpreter;
    /// States where the first three passed but the last did not.
    std::size_t implication_violations = 0;
    /// Input states that did not satisfy the hypotheses.
    std::size_t skipped = 0;

    bool passed() const;
};

ChainReport check_theorem_chain(const walk::RegionSummary& preamble, const walk::RegionSummary& loop,
                                const std::vector<MachineState>& states);

std::string describe_chain(const ChainReport& report);

} // namespace ll2::gold
