// Copyright 2026 The LL2 Authors.
// SPDX-License-Identifier: Apache-2.0

// ll2: translate LLVM IR to LL2, run and trace programs, summarise code
// regions and check the summaries against the interpreter.
//
// Exit codes: 0 success, 1 a check found a counterexample, 2 bad input
// (unreadable file, syntax error, unsupported IR, trap), 3 a step or path
// budget ran out.

#include "ll2/frontend.hpp"
#include "ll2/goldens.hpp"
#include "ll2/isa.hpp"
#include "ll2/occurrences.hpp"
#include "ll2/program_text.hpp"
#include "ll2/state_file.hpp"
#include "ll2/walk_request.hpp"
#include "ll2/walker.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <sstream>

using json = nlohmann::ordered_json;
using namespace ll2;

namespace {

constexpr std::uint64_t kDefaultSeed = 20260101;

enum Exit { kOk = 0, kCheckFailed = 1, kBadInput = 2, kBudget = 3 };

/// Carries an exit code out of a subcommand.
struct Failure : std::runtime_error {
    Failure(int code, const std::string& what) : std::runtime_error(what), code(code) {}
    int code;
};

struct Options {
    bool json = false;
    std::uint64_t seed = kDefaultSeed;
};

std::string read_file(const std::string& path)
{
    std::ifstream in(path);
    if (!in) {
        throw Failure(kBadInput, "cannot read " + path);
    }
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void write_file(const std::string& path, const std::string& text)
{
    std::ofstream out(path);
    if (!out || !(out << text)) {
        throw Failure(kBadInput, "cannot write " + path);
    }
}

bool ends_with(const std::string& s, std::string_view suffix)
{
    return s.size() >= suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

const ir::IrFunction& pick_function(const ir::IrModule& m, const std::string& name)
{
    if (m.functions.empty()) {
        throw Failure(kBadInput, "no function definitions in input");
    }
    if (name.empty()) {
        return m.functions.front();
    }
    if (const auto* f = m.function(name)) {
        return *f;
    }
    throw Failure(kBadInput, "no function @" + name);
}

/// Reads LL2 program text, or lowers a `.ll` file on the fly.
std::shared_ptr<const Program> load_program(const std::string& path, const std::string& function = {})
{
    const auto text = read_file(path);
    if (ends_with(path, ".ll")) {
        const auto m = ir::parse_ll(text);
        return std::make_shared<const Program>(ir::lower_function(pick_function(m, function)).program);
    }
    return std::make_shared<const Program>(parse_program(text));
}

MachineState load_state(const std::string& path, std::shared_ptr<const Program> program)
{
    if (path.empty()) {
        return MachineState(program, std::max(kDefaultLocals, registers_needed(*program)));
    }
    return parse_state_init(read_file(path), std::move(program));
}

// --- rendering ------------------------------------------------------------

json words(const std::vector<Word>& ws)
{
    json a = json::array();
    for (const auto& w : ws) {
        a.push_back(w.str());
    }
    return a;
}

json state_json(const MachineState& s)
{
    json j;
    j["pc"] = s.pc;
    j["halted"] = s.halted;
    j["at_halt"] = at_halt(s);
    j["locals"] = words(s.locals);
    j["stack"] = words(s.stack);
    j["memory"] = words(s.memory);
    return j;
}

std::string text_state(const MachineState& s, const MachineState& initial)
{
    std::ostringstream out;
    out << "pc: " << s.pc;
    if (at_halt(s)) {
        out << " (at HALT)";
    }
    out << "\nlocals:";
    bool any = false;
    for (std::size_t i = 0; i < s.locals.size(); ++i) {
        if (s.locals[i] != 0) {
            out << " [" << i << "]=" << s.locals[i];
            any = true;
        }
    }
    out << (any ? "" : " all zero") << "\nstack:";
    for (const auto& w : s.stack) {
        out << " " << w;
    }
    if (!s.stack.empty()) {
        out << "\nstack top: " << s.stack.back();
    } else {
        out << " empty";
    }
    std::size_t changed = 0;
    for (std::size_t a = 0; a < s.memory.size(); ++a) {
        if (a >= initial.memory.size() || s.memory[a] != initial.memory[a]) {
            out << (changed++ == 0 ? "\nmemory writes:" : "") << " [" << a << "]=" << s.memory[a];
        }
    }
    out << "\n";
    return out.str();
}

json symbolic_json(const sym::SymbolicState& ss)
{
    json j;
    j["pc"] = ss.pc;
    json locals = json::object();
    for (const auto& [k, t] : ss.locals) {
        locals[std::to_string(k)] = sym::to_string(t);
    }
    j["locals"] = locals;
    json mem = json::array();
    for (const auto& [a, v] : ss.memory_writes) {
        mem.push_back({{"address", sym::to_string(a)}, {"value", sym::to_string(v)}});
    }
    j["memory_writes"] = mem;
    j["popped"] = ss.popped;
    json pushed = json::array();
    for (const auto& t : ss.pushed) {
        pushed.push_back(sym::to_string(t));
    }
    j["pushed"] = pushed;
    return j;
}

json summary_json(const walk::RegionSummary& s)
{
    json j;
    j["name"] = s.name;
    j["entry_pc"] = s.entry_pc;
    json hyps = json::array();
    for (const auto& h : s.hyps) {
        hyps.push_back(h.describe());
    }
    j["hyps"] = hyps;
    j["measure"] = s.measure ? json(sym::to_string(s.measure->term())) : json(nullptr);
    auto paths = [](const std::vector<walk::PathSummary>& ps) {
        json a = json::array();
        for (const auto& p : ps) {
            a.push_back({{"condition", sym::to_string(p.condition)},
                         {"exit_pc", p.exit_pc},
                         {"at_halt", p.at_halt},
                         {"steps", p.steps},
                         {"trace", p.trace},
                         {"final", symbolic_json(p.final)}});
        }
        return a;
    };
    j["loop_paths"] = paths(s.loop_paths);
    j["exit_paths"] = paths(s.exit_paths);
    return j;
}

json report_json(const walk::CheckReport& r)
{
    json j{{"name", r.name},
           {"verdict", r.passed() ? "PASS" : "FAIL"},
           {"cases", r.cases},
           {"failures", r.failures},
           {"seconds", r.seconds}};
    if (r.counterexample) {
        j["counterexample"] = {{"input", state_json(r.counterexample->input)}, {"detail", r.counterexample->detail}};
    }
    return j;
}

void emit(const Options& o, const json& j, const std::string& text)
{
    if (o.json) {
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << text;
    }
}

// --- subcommands ------------------------------------------------------------

struct TranslateArgs {
    std::string input;
    std::string output;
    std::string map;
    std::string function;
    bool annotate = false;
};

int cmd_translate(const Options& o, const TranslateArgs& a)
{
    const auto m = ir::parse_ll(read_file(a.input));
    const auto& f = pick_function(m, a.function);
    const auto art = ir::lower_function(f);
    const auto text = a.annotate ? emit_annotated_program_text(art.program, art.notes) : emit_program_text(art.program);
    const auto map = ir::emit_register_map(art);
    if (!a.output.empty()) {
        write_file(a.output, text);
    }
    if (!a.map.empty()) {
        write_file(a.map, map);
    }
    json j;
    j["function"] = f.name;
    json prog = json::array();
    for (const auto& in : art.program.instructions) {
        prog.push_back(to_string(in));
    }
    j["program"] = prog;
    json regs = json::array();
    for (const auto& e : art.register_map) {
        json r{{"name", e.name}, {"register", e.reg}};
        if (!e.alias_of.empty()) {
            r["shares_with"] = e.alias_of;
        }
        regs.push_back(r);
    }
    j["registers"] = regs;
    j["blocks"] = art.block_pc;
    emit(o, j, a.output.empty() ? text : "");
    return kOk;
}

struct RunArgs {
    std::string program;
    std::string state;
    std::string function;
    std::optional<std::uint64_t> steps;
    bool to_halt = false;
    std::uint64_t budget = 1'000'000;
};

std::uint64_t run_checked(MachineState& s, const RunArgs& a, const std::function<void(const MachineState&)>& each)
{
    std::uint64_t taken = 0;
    const std::uint64_t limit = a.to_halt ? a.budget : a.steps.value_or(0);
    while (taken < limit) {
        if (a.to_halt && at_halt(s)) {
            return taken;
        }
        try {
            step_in_place(s);
        } catch (const Trap& t) {
            throw Failure(kBadInput, "trap " + std::string(to_string(t.kind())) + " at pc " + std::to_string(t.pc()) +
                                         ", step " + std::to_string(taken) + ": " + t.detail());
        }
        ++taken;
        if (each) {
            each(s);
        }
    }
    if (a.to_halt && !at_halt(s)) {
        throw Failure(kBudget, "no HALT reached within " + std::to_string(a.budget) + " steps");
    }
    return taken;
}

int cmd_run(const Options& o, const RunArgs& a)
{
    auto program = load_program(a.program, a.function);
    const MachineState initial = load_state(a.state, program);
    MachineState s = initial;
    const auto steps = run_checked(s, a, {});
    json j = state_json(s);
    j["steps"] = steps;
    emit(o, j, "steps: " + std::to_string(steps) + "\n" + text_state(s, initial));
    return kOk;
}

std::string changes(const MachineState& before, const MachineState& after)
{
    std::vector<std::string> out;
    if (before.pc != after.pc) {
        out.push_back("pc " + std::to_string(before.pc) + "->" + std::to_string(after.pc));
    }
    for (std::size_t i = 0; i < after.locals.size(); ++i) {
        if (before.locals[i] != after.locals[i]) {
            out.push_back("locals[" + std::to_string(i) + "] " + before.locals[i].str() + "->" + after.locals[i].str());
        }
    }
    for (std::size_t i = 0; i < after.memory.size(); ++i) {
        if (before.memory[i] != after.memory[i]) {
            out.push_back("memory[" + std::to_string(i) + "] " + before.memory[i].str() + "->" + after.memory[i].str());
        }
    }
    if (after.stack.size() > before.stack.size()) {
        out.push_back("push " + after.stack.back().str());
    } else if (after.stack.size() < before.stack.size()) {
        out.push_back("pop " + before.stack.back().str());
    }
    if (after.halted && !before.halted) {
        out.push_back("halted");
    }
    std::string joined;
    for (const auto& c : out) {
        joined += (joined.empty() ? "" : ", ") + c;
    }
    return joined;
}

int cmd_trace(const Options& o, const RunArgs& a)
{
    auto program = load_program(a.program, a.function);
    MachineState s = load_state(a.state, program);
    json lines = json::array();
    std::uint64_t index = 0;
    MachineState before = s;
    auto each = [&](const MachineState& after) {
        const auto& inst = (*program)[before.pc];
        const auto delta = changes(before, after);
        if (o.json) {
            lines.push_back({{"step", index}, {"pc", before.pc}, {"instruction", to_string(inst)}, {"changes", delta}});
        } else {
            std::cout << index << "\tpc " << before.pc << "\t" << to_string(inst) << "\t" << delta << "\n";
        }
        ++index;
        before = after;
    };
    const auto steps = run_checked(s, a, each);
    if (o.json) {
        std::cout << json{{"steps", steps}, {"trace", lines}, {"final", state_json(s)}}.dump(2) << "\n";
    } else {
        std::cout << "steps: " << steps << ", final pc " << s.pc << (at_halt(s) ? " (at HALT)" : "") << "\n";
    }
    return kOk;
}

struct BenchArgs {
    std::string program;
    std::string state;
    std::uint64_t repetitions = 20000;
    std::uint64_t runs = 3;
    std::uint64_t budget = 10'000'000;
};

int cmd_bench(const Options& o, const BenchArgs& a)
{
    auto program = load_program(a.program);
    const MachineState s = load_state(a.state, program);
    std::uint64_t per_run = 0;
    if (!program->empty()) {
        const auto r = run_to_halt(s, a.budget);
        if (r.status != RunStatus::Halted) {
            throw Failure(kBudget, "no HALT reached within " + std::to_string(a.budget) + " steps");
        }
        per_run = r.steps;
    }
    std::vector<double> rates;
    Word sink = 0;
    for (std::uint64_t run = 0; run < a.runs; ++run) {
        const auto start = std::chrono::steady_clock::now();
        for (std::uint64_t i = 0; i < a.repetitions && per_run > 0; ++i) {
            const auto r = run_to_halt(s, a.budget);
            sink += r.steps;
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const double total = static_cast<double>(per_run) * static_cast<double>(a.repetitions);
        rates.push_back(total > 0 && secs > 0 ? total / secs : 0.0);
    }
    auto sorted = rates;
    std::sort(sorted.begin(), sorted.end());
    const double median = sorted.empty() ? 0.0 : sorted[sorted.size() / 2];
    json j{{"instructions_per_run", per_run},
           {"repetitions", a.repetitions},
           {"throughput_per_run", rates},
           {"median_instructions_per_second", median}};
    std::ostringstream t;
    t << "instructions per run: " << per_run << "\nrepetitions: " << a.repetitions << "\n";
    for (std::size_t i = 0; i < rates.size(); ++i) {
        t << "run " << i << ": " << static_cast<std::uint64_t>(rates[i]) << " instructions/s\n";
    }
    t << "median: " << static_cast<std::uint64_t>(median) << " instructions/s\n";
    emit(o, j, t.str());
    return sink < 0 ? kCheckFailed : kOk;
}

struct WalkArgs {
    std::string program;
    std::string walk;
    std::string function;
    std::string root;
    std::size_t samples = 1000;
};

std::vector<walk::RegionSummary> summarise(std::shared_ptr<const Program> program, const WalkArgs& a)
{
    auto requests = walk::parse_walk_file(read_file(a.walk), program);
    std::vector<walk::RegionSummary> out;
    for (const auto& req : requests) {
        if (!a.root.empty() && req.root_name != a.root) {
            continue;
        }
        try {
            out.push_back(walk::def_semantics(program, req));
        } catch (const walk::WalkError& e) {
            std::string message = e.what();
            if (message.find(walk::kWalkGuidance) == std::string::npos) {
                message += "; " + std::string(walk::kWalkGuidance);
            }
            throw Failure(e.kind() == walk::WalkErrorKind::PathBudgetExceeded ? kBudget : kBadInput, message);
        }
    }
    if (out.empty()) {
        throw Failure(kBadInput, a.root.empty() ? "no def-semantics forms in " + a.walk : "no request named " + a.root);
    }
    return out;
}

int cmd_walk(const Options& o, const WalkArgs& a)
{
    auto program = load_program(a.program, a.function);
    json j = json::array();
    std::string text;
    for (const auto& s : summarise(program, a)) {
        j.push_back(summary_json(s));
        text += walk::describe_summary(s) + "\n";
    }
    emit(o, j, text);
    return kOk;
}

int cmd_check(const Options& o, const WalkArgs& a)
{
    auto program = load_program(a.program, a.function);
    std::mt19937_64 rng(o.seed);
    walk::SamplerConfig cfg;
    cfg.registers = std::max(kDefaultLocals, registers_needed(*program));
    json j = json::array();
    std::string text;
    bool ok = true;
    for (const auto& s : summarise(program, a)) {
        const auto states = walk::sample_states(rng, s, a.samples, cfg);
        std::vector<walk::CheckReport> reports = {walk::check_partition(s, states),
                                                  walk::check_correctness(s, states),
                                                  walk::check_clock_trace(s, states)};
        if (!s.loop_paths.empty()) {
            reports.push_back(walk::check_measure(s, states));
        }
        json rj = json::array();
        text += s.name + " (" + std::to_string(states.size()) + " sampled states)\n";
        if (states.size() < a.samples) {
            text += "  note: rejection sampling found only " + std::to_string(states.size()) + " of " +
                    std::to_string(a.samples) + " states\n";
        }
        for (const auto& r : reports) {
            ok = ok && r.passed();
            rj.push_back(report_json(r));
            text += "  " + walk::describe_report(r) + "\n";
        }
        j.push_back({{"summary", s.name}, {"states", states.size()}, {"reports", rj}});
    }
    emit(o, json{{"seed", o.seed}, {"verdict", ok ? "PASS" : "FAIL"}, {"summaries", j}},
         text + (ok ? "PASS\n" : "FAIL\n"));
    return ok ? kOk : kCheckFailed;
}

struct ChainArgs {
    std::size_t max_len = 6;
    std::size_t random = 1000;
    std::size_t random_max_len = 64;
};

int cmd_chain(const Options& o, const ChainArgs& a)
{
    const auto program = occ::program();
    const auto pre = walk::def_semantics(program, occ::preamble_request());
    const auto loop = walk::def_semantics(program, occ::loop_request());
    auto states = occ::chain_grid(a.max_len, {0, 1, 399}, {0, 399});
    const std::size_t grid = states.size();
    std::mt19937_64 rng(o.seed);
    for (std::size_t i = 0; i < a.random; ++i) {
        states.push_back(occ::random_chain_state(rng, a.random_max_len));
    }
    const auto r = gold::check_theorem_chain(pre, loop, states);
    json j{{"seed", o.seed},
           {"grid_states", grid},
           {"random_states", a.random},
           {"verdict", r.passed() ? "PASS" : "FAIL"},
           {"checks",
            {report_json(r.composition), report_json(r.prefix), report_json(r.fold_pair), report_json(r.interpreter)}},
           {"implication_violations", r.implication_violations},
           {"skipped", r.skipped}};
    std::ostringstream t;
    t << grid << " grid states (lengths 0-" << a.max_len << ") and " << a.random << " random states (lengths up to "
      << a.random_max_len << ")\n"
      << gold::describe_chain(r) << (r.passed() ? "PASS\n" : "FAIL\n");
    emit(o, j, t.str());
    return r.passed() ? kOk : kCheckFailed;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"LL2: LLVM IR subset translator, interpreter and region summariser"};
    app.require_subcommand(1);
    Options opts;
    std::string format = "text";
    app.add_option("--format", format, "Output format")->check(CLI::IsMember({"text", "json"}));
    app.add_option("--seed", opts.seed, "Seed for random sampling")->capture_default_str();

    TranslateArgs ta;
    auto* translate = app.add_subcommand("translate", "Lower an .ll function to LL2 program text");
    translate->add_option("input", ta.input, ".ll file")->required();
    translate->add_option("-o,--output", ta.output, "Write program text here instead of stdout");
    translate->add_option("--map", ta.map, "Write the register map here");
    translate->add_option("--function", ta.function, "Function to lower (default: the first)");
    translate->add_flag("--annotate", ta.annotate, "Comment each instruction with its pc and IR origin");

    RunArgs ra;
    auto add_run_options = [&](CLI::App* cmd) {
        cmd->add_option("program", ra.program, "LL2 program text, or an .ll file to lower first")->required();
        cmd->add_option("--state", ra.state, "State-init file");
        cmd->add_option("--function", ra.function, "Function to lower when the program is an .ll file");
        auto* steps = cmd->add_option("--steps", ra.steps, "Number of steps to take");
        auto* halt = cmd->add_flag("--to-halt", ra.to_halt, "Run until poised on a HALT");
        steps->excludes(halt);
        cmd->add_option("--budget", ra.budget, "Step limit for --to-halt")->capture_default_str();
    };
    auto* run = app.add_subcommand("run", "Run a program and report the final state");
    add_run_options(run);
    auto* trace = app.add_subcommand("trace", "Run a program printing one line per step");
    add_run_options(trace);

    BenchArgs ba;
    auto* bench = app.add_subcommand("bench", "Measure interpreter throughput on run-to-halt");
    bench->add_option("program", ba.program, "LL2 program text, or an .ll file")->required();
    bench->add_option("--state", ba.state, "State-init file");
    bench->add_option("--repetitions", ba.repetitions, "Runs per measurement")->capture_default_str();
    bench->add_option("--runs", ba.runs, "Number of measurements")->capture_default_str();

    WalkArgs wa;
    auto add_walk_options = [&](CLI::App* cmd) {
        cmd->add_option("program", wa.program, "LL2 program text, or an .ll file")->required();
        cmd->add_option("--walk", wa.walk, "Walk-request file with def-semantics forms")->required();
        cmd->add_option("--function", wa.function, "Function to lower when the program is an .ll file");
        cmd->add_option("--root", wa.root, "Only the request with this root name");
    };
    auto* walk_cmd = app.add_subcommand("walk", "Summarise code regions");
    add_walk_options(walk_cmd);
    auto* check = app.add_subcommand("check", "Check region summaries against the interpreter");
    add_walk_options(check);
    check->add_option("--samples", wa.samples, "Random states per summary")->capture_default_str();

    ChainArgs ca;
    auto* chain = app.add_subcommand("chain", "Check the occurrences theorem chain");
    chain->add_option("--max-len", ca.max_len, "Exhaustive grid up to this memory length")->capture_default_str();
    chain->add_option("--random", ca.random, "Number of random states")->capture_default_str();
    chain->add_option("--random-max-len", ca.random_max_len, "Longest random memory")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kBadInput;
    }
    opts.json = format == "json";

    try {
        if (*translate) {
            return cmd_translate(opts, ta);
        }
        if (*run || *trace) {
            if (!ra.to_halt && !ra.steps) {
                throw Failure(kBadInput, "give --steps N or --to-halt");
            }
            return *run ? cmd_run(opts, ra) : cmd_trace(opts, ra);
        }
        if (*bench) {
            return cmd_bench(opts, ba);
        }
        if (*walk_cmd) {
            return cmd_walk(opts, wa);
        }
        if (*check) {
            return cmd_check(opts, wa);
        }
        if (*chain) {
            return cmd_chain(opts, ca);
        }
    } catch (const Failure& f) {
        std::cerr << "ll2: " << f.what() << "\n";
        return f.code;
    } catch (const ir::FrontendError& e) {
        std::cerr << "ll2: " << e.what() << "\n";
        return kBadInput;
    } catch (const Trap& t) {
        std::cerr << "ll2: trap " << to_string(t.kind()) << " at pc " << t.pc() << ": " << t.detail() << "\n";
        return kBadInput;
    } catch (const std::exception& e) {
        std::cerr << "ll2: " << e.what() << "\n";
        return kBadInput;
    }
    return kBadInput;
}
