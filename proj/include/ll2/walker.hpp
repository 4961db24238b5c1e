// Copyright 2026 The LL2 Authors.
// SPDX-License-Identifier: Apache-2.0

/**
 * @file
 * Region summaries: symbolic path enumeration over a focus region of a
 * program, the semantic function and clock function those paths define,
 * and executable checks of their correctness against the interpreter.
 *
 * A summary describes what running from `entry_pc` does until control
 * leaves the region, reaches a HALT instruction (which is not executed), or
 * returns to `entry_pc`. Paths of the last kind are loop paths; applying a
 * summary fires loop paths repeatedly, requiring a measure to decrease on
 * each firing, until an exit path applies.
 */

#pragma once

#include "ll2/isa.hpp"
#include "ll2/symbolic.hpp"
#include "ll2/term.hpp"

#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace ll2::walk {

/// Inclusive pc interval; `last` absent means unbounded above.
struct PcInterval {
    std::size_t first = 0;
    std::optional<std::size_t> last;

    bool contains(std::size_t pc) const { return pc >= first && (!last || pc <= *last); }
};

struct WalkRequest {
    std::size_t init_pc = 0;
    /// Empty means the empty region, which yields the identity summary.
    std::vector<PcInterval> focus_region;
    std::string root_name;
    /// Conditions assumed at entry, in addition to the base hypotheses
    /// (well-formedness and the program identity) that every summary gets.
    std::vector<sym::StatePredicate> hyps;
    std::optional<sym::MeasureExpr> measure;
    std::size_t max_paths = 64;
    std::size_t max_path_length = 10000;

    bool in_region(std::size_t pc) const;
};

bool in_region(const std::vector<PcInterval>& region, std::size_t pc);

enum class PathKind { Exit, Loop };

struct PathSummary {
    PathKind kind = PathKind::Exit;
    sym::Term condition;
    /// State at the end of the path, relative to the state at region entry.
    sym::SymbolicState final;
    std::size_t exit_pc = 0;
    /// The path stops in front of a HALT instruction.
    bool at_halt = false;
    std::uint64_t steps = 0;
    /// pcs of the executed instructions, in order.
    std::vector<std::size_t> trace;
};

struct RegionSummary {
    std::string name;
    std::size_t entry_pc = 0;
    std::vector<PcInterval> region;
    std::vector<PathSummary> loop_paths;
    std::vector<PathSummary> exit_paths;
    std::vector<sym::StatePredicate> hyps;
    std::optional<sym::MeasureExpr> measure;
    std::shared_ptr<const Program> program;

    /// A summary that does nothing: one zero-step exit path at `pc`.
    static RegionSummary identity(std::size_t pc, std::shared_ptr<const Program> program);

    std::vector<const PathSummary*> all_paths() const;
};

enum class WalkErrorKind {
    InvalidRequest,
    PathBudgetExceeded,
    MissingMeasure,
    UnsupportedSymbolic,
    NoPathApplies,
    MeasureViolation,
};

const char* name(WalkErrorKind kind);

class WalkError : public std::runtime_error {
public:
    WalkError(WalkErrorKind kind, const std::string& detail, std::vector<std::size_t> trace = {});
    WalkErrorKind kind() const { return kind_; }
    /// pc trace of the offending path, when there is one.
    const std::vector<std::size_t>& trace() const { return trace_; }

private:
    WalkErrorKind kind_;
    std::vector<std::size_t> trace_;
};

/// Advice appended to walk failures caused by the shape of the request.
inline constexpr const char* kWalkGuidance = "restrict the focus region or strengthen the invariant";

/// Enumerates every path from `req.init_pc` and packages them as a summary.
/// Branches decided under the hypotheses and the path so far do not split;
/// paths whose condition simplifies to false are dropped.
RegionSummary def_semantics(std::shared_ptr<const Program> program, const WalkRequest& req);

/// One fired path during concrete application of a summary.
struct Firing {
    const PathSummary* path = nullptr;
    std::optional<Word> measure_before;
    std::optional<Word> measure_after;
};

struct Application {
    MachineState state;
    std::uint64_t steps = 0;
    std::vector<Firing> firings;
};

/// Fires paths from `s` until an exit path applies. Hypotheses are checked
/// on `s` only. Throws WalkError NoPathApplies when the hypotheses fail, pc
/// is not the entry, or the number of true path conditions is not one; and
/// MeasureViolation when a loop path fires from a state whose measure is
/// zero or does not strictly decrease it.
Application apply_detailed(const RegionSummary& summary, const MachineState& s);

MachineState apply_summary(const RegionSummary& summary, const MachineState& s);

/// The number of interpreter steps the summary accounts for from `s`.
class ClockFn {
public:
    explicit ClockFn(const RegionSummary& summary) : summary_(&summary) {}
    std::uint64_t operator()(const MachineState& s) const;

private:
    const RegionSummary* summary_;
};

ClockFn derive_clock(const RegionSummary& summary);

/// Sequential composition: `inner` first, then `outer` when inner's result
/// is at outer's entry pc. A result at any other pc is passed through
/// unchanged with zero extra steps, which is how the route that skips a
/// loop entirely composes with the loop's summary.
class Composition {
public:
    Composition(const RegionSummary& outer, const RegionSummary& inner) : outer_(&outer), inner_(&inner) {}

    MachineState apply(const MachineState& s) const;
    std::uint64_t clock(const MachineState& s) const;

private:
    const RegionSummary* outer_;
    const RegionSummary* inner_;
};

Composition compose(const RegionSummary& outer, const RegionSummary& inner);

// --- checks -------------------------------------------------------------

struct Counterexample {
    MachineState input;
    std::string detail;
};

struct CheckReport {
    std::string name;
    std::size_t cases = 0;
    std::size_t failures = 0;
    std::optional<Counterexample> counterexample;
    double seconds = 0;

    bool passed() const { return failures == 0 && cases > 0; }
    void record_failure(const MachineState& input, std::string detail);
};

/// Field names that differ between two states, e.g. "locals[6]".
std::vector<std::string> state_differences(const MachineState& a, const MachineState& b);

/// run(s, clock(s)) == apply_summary(summary, s) for every state.
CheckReport check_correctness(const RegionSummary& summary, const std::vector<MachineState>& states);

/// The measure stays non-negative and strictly decreases across every loop
/// path firing.
CheckReport check_measure(const RegionSummary& summary, const std::vector<MachineState>& states);

/// Exactly one path condition holds at every state.
CheckReport check_partition(const RegionSummary& summary, const std::vector<MachineState>& states);

/// clock(s) equals the step count of a concrete run from s that stops on
/// leaving the region or in front of a HALT.
CheckReport check_clock_trace(const RegionSummary& summary, const std::vector<MachineState>& states);

/// `invariant` holds at every loop re-entry reached from the given states.
CheckReport check_invariant_preserved(const RegionSummary& summary, const sym::StatePredicate& invariant,
                                      const std::vector<MachineState>& states);

// --- sampling -----------------------------------------------------------

/// Candidate generator for rejection sampling. Register values are drawn
/// from [0, max_value] with occasional negatives; memory length from
/// [min_memory, max_memory] with elements from `element_pool` or small
/// random integers.
struct SamplerConfig {
    std::size_t registers = kDefaultLocals;
    std::int64_t max_value = 8;
    std::size_t min_memory = 0;
    std::size_t max_memory = 8;
    std::vector<Word> element_pool = {0, 1, 399};
    std::size_t max_attempts_per_state = 2000;
};

MachineState random_candidate(std::mt19937_64& rng, std::shared_ptr<const Program> program, std::size_t pc,
                              const SamplerConfig& cfg);

/// `count` states at `pc` satisfying every hypothesis; fewer if rejection
/// sampling runs out of attempts.
std::vector<MachineState> sample_states(std::mt19937_64& rng, const RegionSummary& summary, std::size_t count,
                                        const SamplerConfig& cfg = {},
                                        const std::function<void(MachineState&)>& shape = {});

// --- rendering ----------------------------------------------------------

std::string describe_path(const PathSummary& path);
std::string describe_summary(const RegionSummary& summary);
std::string describe_report(const CheckReport& report);

} // namespace ll2::walk
