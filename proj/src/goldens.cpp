// Copyright 2026 The LL2 Authors.
// SPDX-License-Identifier: Apache-2.0

#include "ll2/goldens.hpp"

#include "ll2/occurrences.hpp"

#include <chrono>
#include <sstream>

namespace ll2::gold {

Word occurlist(const Word& val, std::span<const Word> lst)
{
    if (lst.empty()) {
        return 0;
    }
    return (val == lst.front() ? 1 : 0) + occurlist(val, lst.subspan(1));
}

Word factorial(const Word& n)
{
    if (n <= 0) {
        return 1;
    }
    return n * factorial(n - 1);
}

Word list_sum(std::span<const Word> lst)
{
    if (lst.empty()) {
        return 0;
    }
    return lst.front() + list_sum(lst.subspan(1));
}

FoldSpec occur_arr()
{
    return {"occur-arr", [](const Word& acc, const Word& elem, const Word& aux) { return acc + (elem == aux ? 1 : 0); },
            0};
}

FoldSpec sum_arr()
{
    return {"sum-arr", [](const Word& acc, const Word& elem, const Word&) { return acc + elem; }, 0};
}

namespace {

void check_bounds(std::span<const Word> memory, std::size_t first, std::size_t last)
{
    if (first > last || last > memory.size()) {
        throw Trap(TrapKind::MemoryOutOfRange, 0,
                   "fold bounds [" + std::to_string(first) + ", " + std::to_string(last) + ") over memory of length " +
                       std::to_string(memory.size()));
    }
}

Word suffix(const FoldSpec& spec, const Word& aux, std::span<const Word> rest)
{
    if (rest.empty()) {
        return spec.initial;
    }
    return spec.step(suffix(spec, aux, rest.subspan(1)), rest.front(), aux);
}

} // namespace

Word fold_tailrec(const FoldSpec& spec, const Word& aux, std::span<const Word> memory, std::size_t first,
                  std::size_t last)
{
    check_bounds(memory, first, last);
    Word acc = spec.initial;
    for (std::size_t ix = first; ix < last; ++ix) {
        acc = spec.step(acc, memory[ix], aux);
    }
    return acc;
}

Word fold_structural(const FoldSpec& spec, const Word& aux, std::span<const Word> memory, std::size_t first,
                     std::size_t last)
{
    check_bounds(memory, first, last);
    return suffix(spec, aux, memory.subspan(first, last - first));
}

FoldSpec random_fold(std::mt19937_64& rng)
{
    auto pick = [&](std::int64_t lo, std::int64_t hi) { return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng); };
    const auto c = Word(pick(-5, 5));
    const auto d = Word(pick(-5, 5));

    using G = std::function<Word(const Word&, const Word&)>;
    G g;
    std::string gname;
    switch (pick(0, 4)) {
    case 0:
        g = [](const Word& e, const Word&) { return e; };
        gname = "e";
        break;
    case 1:
        g = [c, d](const Word& e, const Word& aux) { return e == aux ? c : d; };
        gname = "(e == aux ? " + c.str() + " : " + d.str() + ")";
        break;
    case 2:
        g = [c, d](const Word& e, const Word&) { return e * c + d; };
        gname = "(e * " + c.str() + " + " + d.str() + ")";
        break;
    case 3:
        g = [c, d](const Word& e, const Word& aux) { return e < aux ? c : d; };
        gname = "(e < aux ? " + c.str() + " : " + d.str() + ")";
        break;
    default:
        g = [](const Word& e, const Word& aux) { return e - aux; };
        gname = "(e - aux)";
        break;
    }

    FoldSpec spec;
    spec.initial = Word(pick(-3, 3));
    switch (pick(0, 3)) {
    case 0:
        spec.step = [g](const Word& acc, const Word& e, const Word& aux) { return acc + g(e, aux); };
        spec.name = "acc + " + gname;
        break;
    case 1:
        spec.step = [g](const Word& acc, const Word& e, const Word& aux) { return acc * g(e, aux); };
        spec.name = "acc * " + gname;
        break;
    case 2:
        spec.step = [g](const Word& acc, const Word& e, const Word& aux) { return std::max(acc, g(e, aux)); };
        spec.name = "max(acc, " + gname + ")";
        break;
    default:
        spec.step = [g](const Word& acc, const Word& e, const Word& aux) { return std::min(acc, g(e, aux)); };
        spec.name = "min(acc, " + gname + ")";
        break;
    }
    spec.name += ", from " + spec.initial.str();
    return spec;
}

std::vector<sym::StatePredicate> chain_hypotheses(std::shared_ptr<const Program> program)
{
    return {
        sym::StatePredicate::well_formed(),
        sym::StatePredicate::program_is("occurrences-programp", std::move(program)),
        occ::program_inv(),
        occ::memory_bound(),
        sym::StatePredicate::of("n-is-length", sym::parse_term("(= (nth 1 (rd :locals s)) (len (rd :memory s)))")),
        sym::StatePredicate::of("at-entry", sym::parse_term("(equal (rd :pc s) 0)")),
    };
}

bool ChainReport::passed() const
{
    return composition.passed() && prefix.passed() && fold_pair.passed() && interpreter.passed() &&
           implication_violations == 0;
}

ChainReport check_theorem_chain(const walk::RegionSummary& preamble, const walk::RegionSummary& loop,
                                const std::vector<MachineState>& states)
{
    const auto start = std::chrono::steady_clock::now();
    ChainReport r;
    r.composition.name = "composed summaries = occur-arr tail-recursive fold";
    r.prefix.name = "structural fold over take(xx) = occurlist of the prefix";
    r.fold_pair.name = "tail-recursive fold = structural fold";
    r.interpreter.name = "interpreter for both clocks = occurlist";

    const auto hyps = chain_hypotheses(preamble.program);
    const auto composed = walk::compose(loop, preamble);
    const auto occur = occur_arr();

    for (const auto& s : states) {
        if (!sym::all_hold(hyps, s)) {
            ++r.skipped;
            continue;
        }
        const Word& val = s.locals[2];
        const std::span<const Word> mem(s.memory);
        const Word expected = occurlist(val, mem);
        bool ok1 = true, ok2 = true, ok3 = true, ok4 = true;

        ++r.composition.cases;
        try {
            const auto got = composed.apply(s).locals[occ::kResultRegister];
            const auto fold = fold_tailrec(occur, val, mem, 0, mem.size());
            if (got != fold) {
                ok1 = false;
                r.composition.record_failure(s, "locals[6] = " + got.str() + ", fold = " + fold.str());
            }
        } catch (const std::exception& e) {
            ok1 = false;
            r.composition.record_failure(s, e.what());
        }

        ++r.prefix.cases;
        for (std::size_t xx = 0; xx <= mem.size(); ++xx) {
            const auto fold = fold_structural(occur, val, mem, 0, xx);
            const auto prefix = occurlist(val, mem.first(xx));
            if (fold != prefix) {
                ok2 = false;
                r.prefix.record_failure(s, "xx = " + std::to_string(xx) + ": fold " + fold.str() + ", occurlist " +
                                               prefix.str());
                break;
            }
        }

        ++r.fold_pair.cases;
        {
            const auto a = fold_tailrec(occur, val, mem, 0, mem.size());
            const auto b = fold_structural(occur, val, mem, 0, mem.size());
            if (a != b) {
                ok3 = false;
                r.fold_pair.record_failure(s, "tail-recursive " + a.str() + ", structural " + b.str());
            }
        }

        ++r.interpreter.cases;
        try {
            const auto first = run(s, walk::derive_clock(preamble)(s));
            const auto second = first.pc == loop.entry_pc ? run(first, walk::derive_clock(loop)(first)) : first;
            const auto got = second.locals[occ::kResultRegister];
            if (got != expected) {
                ok4 = false;
                r.interpreter.record_failure(s, "locals[6] = " + got.str() + ", occurlist = " + expected.str());
            }
        } catch (const std::exception& e) {
            ok4 = false;
            r.interpreter.record_failure(s, e.what());
        }

        if (ok1 && ok2 && ok3 && !ok4) {
            ++r.implication_violations;
        }
    }

    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    for (auto* c : {&r.composition, &r.prefix, &r.fold_pair, &r.interpreter}) {
        c->seconds = seconds;
    }
    return r;
}

std::string describe_chain(const ChainReport& report)
{
    std::ostringstream out;
    for (const auto* c : {&report.composition, &report.prefix, &report.fold_pair, &report.interpreter}) {
        out << walk::describe_report(*c) << "\n";
    }
    out << (report.implication_violations == 0 ? "PASS" : "FAIL") << " chain implication: "
        << report.implication_violations << " violation(s)\n";
    if (report.skipped > 0) {
        out << report.skipped << " state(s) skipped: hypotheses do not hold\n";
    }
    return out.str();
}

} // namespace ll2::gold
