// Copyright 2026 The LL2 Authors.
// SPDX-License-Identifier: Apache-2.0

#include "ll2/program_text.hpp"

#include <charconv>
#include <sstream>
#include <vector>

namespace ll2 {

namespace {

std::string_view trim(std::string_view s)
{
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string_view> split_ws(std::string_view s)
{
    std::vector<std::string_view> out;
    std::size_t i = 0;
    while (i < s.size()) {
        while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) {
            ++i;
        }
        std::size_t start = i;
        while (i < s.size() && s[i] != ' ' && s[i] != '\t') {
            ++i;
        }
        if (i > start) {
            out.push_back(s.substr(start, i - start));
        }
    }
    return out;
}

bool is_register_arg(Opcode op, std::size_t index)
{
    switch (op) {
    case Opcode::Const:
    case Opcode::Halt:
        return false;
    case Opcode::Br:
        return index == 0;
    default:
        return true;
    }
}

Instruction parse_instruction(std::string_view body, std::size_t line)
{
    if (body.front() != '(' || body.back() != ')') {
        throw TextError(line, "expected a parenthesised instruction, got '" + std::string(body) + "'");
    }
    auto tokens = split_ws(body.substr(1, body.size() - 2));
    if (tokens.empty()) {
        throw TextError(line, "empty instruction");
    }
    auto op = opcode_from_mnemonic(tokens[0]);
    if (!op) {
        throw TextError(line, "unknown opcode '" + std::string(tokens[0]) + "'");
    }
    const std::size_t n = arity(*op);
    if (tokens.size() - 1 != n) {
        throw TextError(line, std::string(tokens[0]) + " takes " + std::to_string(n) + " argument(s), got " +
                                  std::to_string(tokens.size() - 1));
    }
    if (*op == Opcode::Const) {
        auto value = parse_word(tokens[1]);
        if (!value) {
            throw TextError(line, "bad constant '" + std::string(tokens[1]) + "'");
        }
        return Instruction::make_const(*value);
    }
    Instruction inst;
    inst.op = *op;
    for (std::size_t i = 0; i < n; ++i) {
        auto tok = tokens[i + 1];
        std::int64_t value = 0;
        auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
        if (ec != std::errc{} || ptr != tok.data() + tok.size()) {
            throw TextError(line, "bad integer argument '" + std::string(tok) + "'");
        }
        if (is_register_arg(*op, i) && value < 0) {
            throw TextError(line, "negative register index " + std::to_string(value));
        }
        inst.args[i] = value;
    }
    return inst;
}

// `lines[pc]` gives the source line used in diagnostics; empty means the
// program did not come from text and the pc is reported instead.
void check_program(const Program& p, const std::vector<std::size_t>& lines)
{
    for (std::size_t pc = 0; pc < p.size(); ++pc) {
        const auto& inst = p[pc];
        const std::size_t where = lines.empty() ? pc : lines[pc];
        for (std::size_t i = 0; i < arity(inst.op); ++i) {
            if (is_register_arg(inst.op, i) && inst.args[i] < 0) {
                throw TextError(where, "negative register index at pc " + std::to_string(pc));
            }
        }
        if (inst.op == Opcode::Br) {
            for (std::size_t i = 1; i <= 2; ++i) {
                auto target = static_cast<std::int64_t>(pc) + inst.args[i];
                if (target < 0 || target > static_cast<std::int64_t>(p.size())) {
                    throw TextError(where, "branch at pc " + std::to_string(pc) + " targets " +
                                               std::to_string(target) + ", outside [0, " +
                                               std::to_string(p.size()) + "]");
                }
            }
        }
    }
}

} // namespace

void validate_program(const Program& p) { check_program(p, {}); }

Program parse_program(std::string_view text)
{
    Program program;
    std::vector<std::size_t> lines;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        ++line_no;
        auto line = text.substr(pos, end - pos);
        pos = end + 1;
        if (auto semi = line.find(';'); semi != std::string_view::npos) {
            line = line.substr(0, semi);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        program.instructions.push_back(parse_instruction(line, line_no));
        lines.push_back(line_no);
    }
    check_program(program, lines);
    return program;
}

std::string emit_program_text(const Program& p)
{
    std::string out;
    for (const auto& inst : p.instructions) {
        out += to_string(inst);
        out += '\n';
    }
    return out;
}

std::string emit_annotated_program_text(const Program& p) { return emit_annotated_program_text(p, {}); }

std::string emit_annotated_program_text(const Program& p, const std::vector<std::string>& notes)
{
    std::ostringstream out;
    for (std::size_t pc = 0; pc < p.size(); ++pc) {
        auto text = to_string(p[pc]);
        out << "    " << text;
        for (std::size_t pad = text.size(); pad < 20; ++pad) {
            out << ' ';
        }
        out << "; " << pc;
        if (pc < notes.size() && !notes[pc].empty()) {
            const auto digits = std::to_string(pc).size();
            for (std::size_t pad = digits; pad < 4; ++pad) {
                out << ' ';
            }
            out << notes[pc];
        }
        out << '\n';
    }
    return out.str();
}

} // namespace ll2
