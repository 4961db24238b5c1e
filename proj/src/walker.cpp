// Copyright 2026 The LL2 Authors.
// SPDX-License-Identifier: Apache-2.0

#include "ll2/walker.hpp"

#include <algorithm>
#include <chrono>
#include <sstream>

namespace ll2::walk {

bool in_region(const std::vector<PcInterval>& region, std::size_t pc)
{
    return std::any_of(region.begin(), region.end(), [&](const PcInterval& i) { return i.contains(pc); });
}

bool WalkRequest::in_region(std::size_t pc) const { return walk::in_region(focus_region, pc); }

RegionSummary RegionSummary::identity(std::size_t pc, std::shared_ptr<const Program> program)
{
    RegionSummary r;
    r.name = "identity";
    r.entry_pc = pc;
    PathSummary stay;
    stay.condition = sym::Term(1);
    stay.final = sym::SymbolicState::at(pc);
    stay.exit_pc = pc;
    r.exit_paths.push_back(std::move(stay));
    r.program = std::move(program);
    return r;
}

std::vector<const PathSummary*> RegionSummary::all_paths() const
{
    std::vector<const PathSummary*> out;
    for (const auto& p : loop_paths) {
        out.push_back(&p);
    }
    for (const auto& p : exit_paths) {
        out.push_back(&p);
    }
    return out;
}

const char* name(WalkErrorKind kind)
{
    switch (kind) {
    case WalkErrorKind::InvalidRequest:
        return "InvalidRequest";
    case WalkErrorKind::PathBudgetExceeded:
        return "PathBudgetExceeded";
    case WalkErrorKind::MissingMeasure:
        return "MissingMeasure";
    case WalkErrorKind::UnsupportedSymbolic:
        return "UnsupportedSymbolic";
    case WalkErrorKind::NoPathApplies:
        return "NoPathApplies";
    case WalkErrorKind::MeasureViolation:
        return "MeasureViolation";
    }
    return "?";
}

WalkError::WalkError(WalkErrorKind kind, const std::string& detail, std::vector<std::size_t> trace)
    : std::runtime_error(std::string(name(kind)) + ": " + detail), kind_(kind), trace_(std::move(trace))
{
}

namespace {

std::string pc_list(const std::vector<std::size_t>& pcs, std::size_t limit = 40)
{
    std::string out;
    const std::size_t start = pcs.size() > limit ? pcs.size() - limit : 0;
    if (start > 0) {
        out = "... ";
    }
    for (std::size_t i = start; i < pcs.size(); ++i) {
        out += (i > start ? " " : "") + std::to_string(pcs[i]);
    }
    return out;
}

struct Pending {
    sym::SymbolicState ss;
    std::vector<std::size_t> trace;
};

} // namespace

RegionSummary def_semantics(std::shared_ptr<const Program> program, const WalkRequest& req)
{
    if (!program) {
        throw WalkError(WalkErrorKind::InvalidRequest, "no program");
    }
    for (const auto& i : req.focus_region) {
        if (i.last && *i.last < i.first) {
            throw WalkError(WalkErrorKind::InvalidRequest,
                            "interval [" + std::to_string(i.first) + ", " + std::to_string(*i.last) + "] is empty");
        }
    }

    RegionSummary out;
    out.name = req.root_name;
    out.entry_pc = req.init_pc;
    out.region = req.focus_region;
    out.program = program;
    out.hyps = {sym::StatePredicate::well_formed(), sym::StatePredicate::program_is("program", program)};
    out.hyps.insert(out.hyps.end(), req.hyps.begin(), req.hyps.end());
    out.measure = req.measure;

    if (req.focus_region.empty()) {
        auto id = RegionSummary::identity(req.init_pc, program);
        out.exit_paths = std::move(id.exit_paths);
        return out;
    }
    if (!req.in_region(req.init_pc)) {
        throw WalkError(WalkErrorKind::InvalidRequest,
                        "init pc " + std::to_string(req.init_pc) + " is outside the focus region");
    }
    if (req.init_pc >= program->size()) {
        throw WalkError(WalkErrorKind::InvalidRequest, "init pc " + std::to_string(req.init_pc) +
                                                           " is past the end of the program");
    }

    const sym::Facts facts = sym::facts_from(out.hyps);
    std::vector<Pending> work;
    work.push_back({sym::SymbolicState::at(req.init_pc), {}});

    auto finish = [&](Pending&& item, PathKind kind) {
        PathSummary path;
        path.kind = kind;
        path.condition = sym::simplify_under(item.ss.path_condition, facts);
        path.exit_pc = item.ss.pc;
        path.at_halt = item.ss.pc < program->size() && (*program)[item.ss.pc].op == Opcode::Halt;
        path.steps = item.ss.steps;
        path.final = std::move(item.ss);
        path.trace = std::move(item.trace);
        (kind == PathKind::Loop ? out.loop_paths : out.exit_paths).push_back(std::move(path));
    };

    while (!work.empty()) {
        Pending item = std::move(work.back());
        work.pop_back();
        const std::size_t pc = item.ss.pc;

        if (item.ss.steps > 0 && pc == req.init_pc) {
            finish(std::move(item), PathKind::Loop);
        } else if (!req.in_region(pc) || pc >= program->size() || (*program)[pc].op == Opcode::Halt) {
            finish(std::move(item), PathKind::Exit);
        } else if (item.ss.steps >= req.max_path_length) {
            throw WalkError(WalkErrorKind::PathBudgetExceeded,
                            "a path from pc " + std::to_string(req.init_pc) + " ran " +
                                std::to_string(item.ss.steps) + " steps without leaving the region or returning to pc " +
                                std::to_string(req.init_pc) + " (last pcs: " + pc_list(item.trace) + "); " +
                                kWalkGuidance,
                            item.trace);
        } else {
            std::vector<sym::SymbolicState> next;
            try {
                next = sym::symbolic_step(item.ss, *program, facts);
            } catch (const sym::UnsupportedSymbolic& e) {
                throw WalkError(WalkErrorKind::UnsupportedSymbolic, e.what(), item.trace);
            } catch (const Trap& e) {
                throw WalkError(WalkErrorKind::InvalidRequest, e.what(), item.trace);
            }
            item.trace.push_back(pc);
            // Reverse so the taken branch is explored first.
            for (auto it = next.rbegin(); it != next.rend(); ++it) {
                work.push_back({std::move(*it), item.trace});
            }
        }

        if (out.loop_paths.size() + out.exit_paths.size() + work.size() > req.max_paths) {
            throw WalkError(WalkErrorKind::PathBudgetExceeded,
                            "more than " + std::to_string(req.max_paths) + " paths from pc " +
                                std::to_string(req.init_pc) + " (current path: " + pc_list(item.trace) + "); " +
                                kWalkGuidance,
                            item.trace);
        }
    }

    if (!out.loop_paths.empty() && !out.measure) {
        throw WalkError(WalkErrorKind::MissingMeasure,
                        std::to_string(out.loop_paths.size()) + " path(s) return to pc " + std::to_string(req.init_pc) +
                            " but the request gives no measure");
    }
    return out;
}

Application apply_detailed(const RegionSummary& summary, const MachineState& s)
{
    if (s.pc != summary.entry_pc) {
        throw WalkError(WalkErrorKind::NoPathApplies, "pc is " + std::to_string(s.pc) + ", summary " + summary.name +
                                                          " starts at " + std::to_string(summary.entry_pc));
    }
    for (const auto& h : summary.hyps) {
        if (!h.holds(s)) {
            throw WalkError(WalkErrorKind::NoPathApplies, "hypothesis " + h.name() + " does not hold");
        }
    }

    Application app{s, 0, {}};
    const auto paths = summary.all_paths();
    for (;;) {
        const PathSummary* chosen = nullptr;
        std::size_t holding = 0;
        for (const auto* p : paths) {
            bool holds = false;
            try {
                holds = sym::eval_term(p->condition, app.state) != 0;
            } catch (const Trap& e) {
                throw WalkError(WalkErrorKind::NoPathApplies,
                                "path condition " + sym::to_string(p->condition) + " traps: " + e.what());
            }
            if (holds) {
                chosen = p;
                ++holding;
            }
        }
        if (holding != 1) {
            throw WalkError(WalkErrorKind::NoPathApplies, std::to_string(holding) + " path conditions of " +
                                                              summary.name + " hold after " +
                                                              std::to_string(app.firings.size()) + " firing(s)");
        }

        Firing firing{chosen, {}, {}};
        if (chosen->kind == PathKind::Loop) {
            if (!summary.measure) {
                throw WalkError(WalkErrorKind::MeasureViolation, "loop path fired without a measure");
            }
            firing.measure_before = summary.measure->eval(app.state);
            if (*firing.measure_before == 0) {
                throw WalkError(WalkErrorKind::MeasureViolation,
                                "loop path fires at measure 0 (firing " + std::to_string(app.firings.size() + 1) + ")");
            }
        }
        app.state = sym::concretize(chosen->final, app.state);
        app.steps += chosen->steps;
        if (chosen->kind == PathKind::Loop) {
            firing.measure_after = summary.measure->eval(app.state);
            if (*firing.measure_after >= *firing.measure_before) {
                throw WalkError(WalkErrorKind::MeasureViolation,
                                "measure went from " + firing.measure_before->str() + " to " +
                                    firing.measure_after->str() + " (firing " + std::to_string(app.firings.size() + 1) +
                                    ")");
            }
        }
        app.firings.push_back(firing);
        if (chosen->kind == PathKind::Exit) {
            return app;
        }
    }
}

MachineState apply_summary(const RegionSummary& summary, const MachineState& s)
{
    return apply_detailed(summary, s).state;
}

std::uint64_t ClockFn::operator()(const MachineState& s) const { return apply_detailed(*summary_, s).steps; }

ClockFn derive_clock(const RegionSummary& summary) { return ClockFn(summary); }

MachineState Composition::apply(const MachineState& s) const
{
    MachineState mid = apply_summary(*inner_, s);
    if (mid.pc != outer_->entry_pc) {
        return mid;
    }
    return apply_summary(*outer_, mid);
}

std::uint64_t Composition::clock(const MachineState& s) const
{
    const auto first = apply_detailed(*inner_, s);
    if (first.state.pc != outer_->entry_pc) {
        return first.steps;
    }
    return first.steps + apply_detailed(*outer_, first.state).steps;
}

Composition compose(const RegionSummary& outer, const RegionSummary& inner) { return Composition(outer, inner); }

// --- checks -------------------------------------------------------------

void CheckReport::record_failure(const MachineState& input, std::string detail)
{
    if (failures++ == 0) {
        counterexample = Counterexample{input, std::move(detail)};
    }
}

std::vector<std::string> state_differences(const MachineState& a, const MachineState& b)
{
    std::vector<std::string> out;
    if (a.pc != b.pc) {
        out.push_back("pc");
    }
    if (a.halted != b.halted) {
        out.push_back("halted");
    }
    auto seq = [&](const std::vector<Word>& x, const std::vector<Word>& y, const std::string& field) {
        if (x.size() != y.size()) {
            out.push_back("len(" + field + ")");
            return;
        }
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (x[i] != y[i]) {
                out.push_back(field + "[" + std::to_string(i) + "]");
            }
        }
    };
    seq(a.locals, b.locals, "locals");
    seq(a.memory, b.memory, "memory");
    seq(a.stack, b.stack, "stack");
    if (a.program != b.program && !(*a.program == *b.program)) {
        out.push_back("program");
    }
    return out;
}

namespace {

class Timer {
public:
    explicit Timer(CheckReport& r) : report_(r), start_(std::chrono::steady_clock::now()) {}
    ~Timer()
    {
        report_.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    CheckReport& report_;
    std::chrono::steady_clock::time_point start_;
};

std::string joined(const std::vector<std::string>& items)
{
    std::string out;
    for (std::size_t i = 0; i < items.size(); ++i) {
        out += (i ? ", " : "") + items[i];
    }
    return out;
}

} // namespace

CheckReport check_correctness(const RegionSummary& summary, const std::vector<MachineState>& states)
{
    CheckReport r;
    r.name = "correctness of " + summary.name;
    Timer timer(r);
    for (const auto& s : states) {
        ++r.cases;
        try {
            const auto clock = derive_clock(summary)(s);
            const auto expected = run(s, clock);
            const auto got = apply_summary(summary, s);
            if (!(expected == got)) {
                r.record_failure(s, "run(s, " + std::to_string(clock) + ") and the summary differ in " +
                                        joined(state_differences(expected, got)));
            }
        } catch (const std::exception& e) {
            r.record_failure(s, e.what());
        }
    }
    return r;
}

CheckReport check_measure(const RegionSummary& summary, const std::vector<MachineState>& states)
{
    CheckReport r;
    r.name = "measure of " + summary.name;
    Timer timer(r);
    for (const auto& s : states) {
        ++r.cases;
        if (!summary.measure) {
            if (!summary.loop_paths.empty()) {
                r.record_failure(s, "summary has loop paths but no measure");
            }
            continue;
        }
        try {
            apply_detailed(summary, s);
        } catch (const WalkError& e) {
            if (e.kind() == WalkErrorKind::MeasureViolation) {
                r.record_failure(s, e.what());
            } else {
                r.record_failure(s, std::string("could not apply the summary: ") + e.what());
            }
        } catch (const std::exception& e) {
            r.record_failure(s, e.what());
        }
    }
    return r;
}

CheckReport check_partition(const RegionSummary& summary, const std::vector<MachineState>& states)
{
    CheckReport r;
    r.name = "path partition of " + summary.name;
    Timer timer(r);
    const auto paths = summary.all_paths();
    for (const auto& s : states) {
        ++r.cases;
        std::size_t holding = 0;
        try {
            for (const auto* p : paths) {
                holding += sym::eval_term(p->condition, s) != 0;
            }
        } catch (const Trap& e) {
            r.record_failure(s, std::string("path condition traps: ") + e.what());
            continue;
        }
        if (holding != 1) {
            r.record_failure(s, std::to_string(holding) + " path conditions hold");
        }
    }
    return r;
}

CheckReport check_clock_trace(const RegionSummary& summary, const std::vector<MachineState>& states)
{
    CheckReport r;
    r.name = "clock against trace of " + summary.name;
    Timer timer(r);
    for (const auto& s : states) {
        ++r.cases;
        try {
            const auto clock = derive_clock(summary)(s);
            MachineState t = s;
            std::uint64_t observed = 0;
            while (observed <= clock && in_region(summary.region, t.pc) && t.pc < t.program->size() &&
                   (*t.program)[t.pc].op != Opcode::Halt) {
                step_in_place(t);
                ++observed;
            }
            if (observed != clock) {
                r.record_failure(s, "clock " + std::to_string(clock) + " but the run leaves the region after " +
                                        (observed > clock ? "more than " + std::to_string(clock)
                                                          : std::to_string(observed)) +
                                        " steps");
            }
        } catch (const std::exception& e) {
            r.record_failure(s, e.what());
        }
    }
    return r;
}

CheckReport check_invariant_preserved(const RegionSummary& summary, const sym::StatePredicate& invariant,
                                      const std::vector<MachineState>& states)
{
    CheckReport r;
    r.name = invariant.name() + " preserved by " + summary.name;
    Timer timer(r);
    for (const auto& s : states) {
        ++r.cases;
        try {
            auto app = apply_detailed(summary, s);
            // Replay the firings to look at every re-entry state.
            MachineState cur = s;
            for (const auto& f : app.firings) {
                cur = sym::concretize(f.path->final, cur);
                if (f.path->kind == PathKind::Loop && !invariant.holds(cur)) {
                    r.record_failure(s, invariant.name() + " fails at a loop re-entry");
                    break;
                }
            }
        } catch (const std::exception& e) {
            r.record_failure(s, e.what());
        }
    }
    return r;
}

// --- sampling -----------------------------------------------------------

MachineState random_candidate(std::mt19937_64& rng, std::shared_ptr<const Program> program, std::size_t pc,
                              const SamplerConfig& cfg)
{
    auto pick = [&](std::int64_t lo, std::int64_t hi) { return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng); };
    const auto mem_len = static_cast<std::size_t>(
        pick(static_cast<std::int64_t>(cfg.min_memory), static_cast<std::int64_t>(cfg.max_memory)));
    MachineState s(std::move(program), cfg.registers, mem_len);
    for (auto& w : s.locals) {
        w = pick(0, 9) == 0 ? pick(-3, -1) : pick(0, cfg.max_value);
    }
    for (auto& w : s.memory) {
        if (!cfg.element_pool.empty() && pick(0, 9) < 7) {
            w = cfg.element_pool[static_cast<std::size_t>(pick(0, static_cast<std::int64_t>(cfg.element_pool.size()) - 1))];
        } else {
            w = pick(-5, 500);
        }
    }
    if (pick(0, 3) == 0) {
        const auto depth = pick(1, 2);
        for (std::int64_t i = 0; i < depth; ++i) {
            s.stack.push_back(pick(-5, 500));
        }
    }
    s.pc = pc;
    return s;
}

std::vector<MachineState> sample_states(std::mt19937_64& rng, const RegionSummary& summary, std::size_t count,
                                        const SamplerConfig& cfg, const std::function<void(MachineState&)>& shape)
{
    std::vector<MachineState> out;
    out.reserve(count);
    const std::size_t budget = count * cfg.max_attempts_per_state;
    for (std::size_t attempt = 0; out.size() < count && attempt < budget; ++attempt) {
        auto s = random_candidate(rng, summary.program, summary.entry_pc, cfg);
        if (shape) {
            shape(s);
        }
        if (sym::all_hold(summary.hyps, s)) {
            out.push_back(std::move(s));
        }
    }
    return out;
}

// --- rendering ----------------------------------------------------------

std::string describe_path(const PathSummary& path)
{
    std::ostringstream out;
    out << (path.kind == PathKind::Loop ? "loop" : "exit") << " path, " << path.steps << " steps, ends at pc "
        << path.exit_pc << (path.at_halt ? " (HALT)" : "") << "\n";
    out << "  when " << sym::to_string(path.condition) << "\n";
    for (const auto& [reg, term] : path.final.locals) {
        out << "  locals[" << reg << "] := " << sym::to_string(term) << "\n";
    }
    for (const auto& [addr, value] : path.final.memory_writes) {
        out << "  memory[" << sym::to_string(addr) << "] := " << sym::to_string(value) << "\n";
    }
    if (path.final.popped > 0) {
        out << "  pops " << path.final.popped << " entry stack value(s)\n";
    }
    for (const auto& t : path.final.pushed) {
        out << "  pushes " << sym::to_string(t) << "\n";
    }
    return out.str();
}

std::string describe_summary(const RegionSummary& summary)
{
    std::ostringstream out;
    out << "summary " << summary.name << " from pc " << summary.entry_pc << ": " << summary.loop_paths.size()
        << " loop path(s), " << summary.exit_paths.size() << " exit path(s)\n";
    out << "hypotheses:\n";
    for (const auto& h : summary.hyps) {
        out << "  " << h.describe() << "\n";
    }
    if (summary.measure) {
        out << "measure: " << sym::to_string(summary.measure->term()) << "\n";
    }
    for (const auto* p : summary.all_paths()) {
        out << describe_path(*p);
    }
    return out.str();
}

std::string describe_report(const CheckReport& report)
{
    std::ostringstream out;
    out << (report.passed() ? "PASS " : "FAIL ") << report.name << ": " << report.cases << " case(s), "
        << report.failures << " failure(s)";
    if (report.counterexample) {
        out << "\n  counterexample: " << report.counterexample->detail;
    }
    return out.str();
}

} // namespace ll2::walk
