// Copyright 2026 The LL2 Authors.
// SPDX-License-Identifier: Apache-2.0

#include "ll2/occurrences.hpp"

#include "ll2/program_text.hpp"

namespace ll2::occ {

extern const std::string_view kProgramText;

std::string_view program_text() { return kProgramText; }

std::shared_ptr<const Program> program()
{
    static const auto p = std::make_shared<const Program>(parse_program(kProgramText));
    return p;
}

sym::StatePredicate program_inv()
{
    return sym::StatePredicate::of("program-inv", sym::parse_term(R"(
        (and (natp (nth 0 (rd :locals s)))
             (natp (nth 1 (rd :locals s)))
             (integerp (nth 2 (rd :locals s)))
             (natp (nth 3 (rd :locals s)))
             (natp (nth 5 (rd :locals s)))
             (natp (nth 6 (rd :locals s)))))"));
}

sym::StatePredicate loop_inv()
{
    return sym::StatePredicate::of("loop-inv", sym::parse_term("(< (nth 5 (rd :locals s)) (nth 1 (rd :locals s)))"));
}

sym::StatePredicate memory_bound() { return sym::StatePredicate::of("memory-bound", sym::memory_bound(0, 1)); }

sym::MeasureExpr clk8_measure()
{
    return sym::MeasureExpr(sym::parse_term(R"(
        (nfix (if (not (= 8 (rd :pc s)))
                  (nth 1 (rd :locals s))
                (- (nth 1 (rd :locals s))
                   (nth 5 (rd :locals s))))))"));
}

walk::WalkRequest preamble_request()
{
    walk::WalkRequest req;
    req.init_pc = 0;
    req.focus_region = {walk::PcInterval{0, kLoopPc - 1}};
    req.root_name = "preamble";
    req.hyps = {program_inv()};
    return req;
}

walk::WalkRequest loop_request()
{
    walk::WalkRequest req;
    req.init_pc = kLoopPc;
    req.focus_region = {walk::PcInterval{kLoopPc, std::nullopt}};
    req.root_name = "loop";
    req.hyps = {loop_inv(), program_inv(), memory_bound()};
    req.measure = clk8_measure();
    return req;
}

MachineState entry_state(const std::vector<Word>& memory, const Word& val, std::size_t base, std::optional<std::size_t> n)
{
    MachineState s(program(), kDefaultLocals, 0);
    s.memory = memory;
    s.locals[0] = static_cast<std::uint64_t>(base);
    s.locals[1] = static_cast<std::uint64_t>(n.value_or(memory.size() - std::min(base, memory.size())));
    s.locals[2] = val;
    return s;
}

namespace {

// Calls f on every vector of length `len` over `values`.
template <typename F>
void each_memory(std::size_t len, const std::vector<Word>& values, F&& f)
{
    std::vector<std::size_t> digits(len, 0);
    std::vector<Word> mem(len);
    for (;;) {
        for (std::size_t i = 0; i < len; ++i) {
            mem[i] = values[digits[i]];
        }
        f(mem);
        std::size_t i = 0;
        while (i < len && ++digits[i] == values.size()) {
            digits[i++] = 0;
        }
        if (i == len) {
            return;
        }
    }
}

} // namespace

std::vector<MachineState> loop_grid(std::size_t max_len, const std::vector<Word>& values, const std::vector<Word>& vals)
{
    std::vector<MachineState> out;
    for (std::size_t len = 1; len <= max_len; ++len) {
        each_memory(len, values, [&](const std::vector<Word>& mem) {
            for (const auto& val : vals) {
                for (std::size_t j = 0; j < len; ++j) {
                    for (int count : {0, 2}) {
                        auto s = entry_state(mem, val);
                        s.pc = kLoopPc;
                        s.locals[5] = static_cast<std::uint64_t>(j);
                        s.locals[6] = count;
                        out.push_back(std::move(s));
                    }
                }
            }
        });
    }
    return out;
}

std::vector<MachineState> chain_grid(std::size_t max_len, const std::vector<Word>& values, const std::vector<Word>& vals)
{
    std::vector<MachineState> out;
    for (std::size_t len = 0; len <= max_len; ++len) {
        each_memory(len, values, [&](const std::vector<Word>& mem) {
            for (const auto& val : vals) {
                out.push_back(entry_state(mem, val));
            }
        });
    }
    return out;
}

MachineState random_chain_state(std::mt19937_64& rng, std::size_t max_len)
{
    auto pick = [&](std::int64_t lo, std::int64_t hi) { return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng); };
    static const std::vector<Word> pool = {0, 1, 399};
    auto element = [&]() -> Word {
        const auto roll = pick(0, 9);
        if (roll < 7) {
            return pool[static_cast<std::size_t>(pick(0, 2))];
        }
        if (roll < 9) {
            return pick(-1000, 1000);
        }
        return Word(1) << 64;
    };
    std::vector<Word> mem(static_cast<std::size_t>(pick(0, static_cast<std::int64_t>(max_len))));
    for (auto& w : mem) {
        w = element();
    }
    Word val = !mem.empty() && pick(0, 1) ? mem[static_cast<std::size_t>(pick(0, static_cast<std::int64_t>(mem.size()) - 1))]
                                          : element();
    auto s = entry_state(mem, val);
    for (std::size_t r = 3; r < s.locals.size(); ++r) {
        s.locals[r] = pick(0, 20);
    }
    return s;
}

} // namespace ll2::occ
