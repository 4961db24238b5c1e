// Copyright 2026 The LL2 Authors.
// SPDX-License-Identifier: Apache-2.0

#include "ll2/state_file.hpp"

#include "ll2/program_text.hpp"

#include <algorithm>
#include <sstream>
#include <utility>
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

struct Assignment {
    enum class Target { Pc, Local, Memory, LocalsSize, MemorySize, Stack } target;
    std::size_t index = 0;
    std::vector<Word> values;
    std::size_t line = 0;
};

std::size_t parse_size(std::string_view text, std::size_t line, std::string_view what)
{
    auto w = parse_word(trim(text));
    auto index = w ? word_to_index(*w) : std::nullopt;
    if (!index) {
        throw TextError(line, "bad " + std::string(what) + " '" + std::string(text) + "'");
    }
    return *index;
}

Assignment parse_assignment(std::string_view line, std::size_t line_no)
{
    auto eq = line.find('=');
    if (eq == std::string_view::npos) {
        throw TextError(line_no, "expected 'key = value'");
    }
    auto key = trim(line.substr(0, eq));
    auto value = trim(line.substr(eq + 1));
    Assignment a;
    a.line = line_no;

    auto indexed = [&](std::string_view prefix) -> bool {
        if (key.substr(0, prefix.size()) != prefix || key.size() < prefix.size() + 3 ||
            key[prefix.size()] != '[' || key.back() != ']') {
            return false;
        }
        a.index = parse_size(key.substr(prefix.size() + 1, key.size() - prefix.size() - 2), line_no, "index");
        return true;
    };

    if (key == "pc") {
        a.target = Assignment::Target::Pc;
        a.index = parse_size(value, line_no, "pc");
        return a;
    }
    if (key == "locals-size") {
        a.target = Assignment::Target::LocalsSize;
        a.index = parse_size(value, line_no, "locals-size");
        return a;
    }
    if (key == "memory-size") {
        a.target = Assignment::Target::MemorySize;
        a.index = parse_size(value, line_no, "memory-size");
        return a;
    }
    if (key == "stack") {
        a.target = Assignment::Target::Stack;
        std::istringstream in{std::string(value)};
        std::string tok;
        while (in >> tok) {
            auto w = parse_word(tok);
            if (!w) {
                throw TextError(line_no, "bad stack value '" + tok + "'");
            }
            a.values.push_back(*w);
        }
        return a;
    }
    if (indexed("locals")) {
        a.target = Assignment::Target::Local;
    } else if (indexed("memory")) {
        a.target = Assignment::Target::Memory;
    } else {
        throw TextError(line_no, "unknown key '" + std::string(key) + "'");
    }
    auto w = parse_word(value);
    if (!w) {
        throw TextError(line_no, "bad value '" + std::string(value) + "'");
    }
    a.values.push_back(*w);
    return a;
}

} // namespace

MachineState parse_state_init(std::string_view text, std::shared_ptr<const Program> program)
{
    std::vector<Assignment> assignments;
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
        if (auto c = line.find_first_of(";#"); c != std::string_view::npos) {
            line = line.substr(0, c);
        }
        line = trim(line);
        if (!line.empty()) {
            assignments.push_back(parse_assignment(line, line_no));
        }
    }

    std::size_t locals_size = std::max(kDefaultLocals, program ? registers_needed(*program) : 0);
    std::optional<std::size_t> memory_size;
    std::size_t min_memory = 0;
    for (const auto& a : assignments) {
        using T = Assignment::Target;
        if (a.target == T::LocalsSize) {
            locals_size = a.index;
        } else if (a.target == T::MemorySize) {
            memory_size = a.index;
        } else if (a.target == T::Memory) {
            min_memory = std::max(min_memory, a.index + 1);
        }
    }
    const std::size_t mem = memory_size.value_or(min_memory);

    MachineState s(std::move(program), locals_size, mem);
    for (const auto& a : assignments) {
        using T = Assignment::Target;
        switch (a.target) {
        case T::Pc:
            s.pc = a.index;
            break;
        case T::Local:
            if (a.index >= s.locals.size()) {
                throw TextError(a.line, "locals index " + std::to_string(a.index) + " outside register file of " +
                                            std::to_string(s.locals.size()));
            }
            s.locals[a.index] = a.values.front();
            break;
        case T::Memory:
            if (a.index >= s.memory.size()) {
                throw TextError(a.line, "memory address " + std::to_string(a.index) + " outside memory-size " +
                                            std::to_string(s.memory.size()));
            }
            s.memory[a.index] = a.values.front();
            break;
        case T::Stack:
            s.stack = a.values;
            break;
        case T::LocalsSize:
        case T::MemorySize:
            break;
        }
    }
    return s;
}

std::string emit_state_init(const MachineState& s)
{
    std::ostringstream out;
    out << "locals-size = " << s.locals.size() << '\n';
    out << "memory-size = " << s.memory.size() << '\n';
    for (std::size_t i = 0; i < s.locals.size(); ++i) {
        if (s.locals[i] != 0) {
            out << "locals[" << i << "] = " << s.locals[i] << '\n';
        }
    }
    for (std::size_t i = 0; i < s.memory.size(); ++i) {
        if (s.memory[i] != 0) {
            out << "memory[" << i << "] = " << s.memory[i] << '\n';
        }
    }
    if (!s.stack.empty()) {
        out << "stack =";
        for (const auto& w : s.stack) {
            out << ' ' << w;
        }
        out << '\n';
    }
    out << "pc = " << s.pc << '\n';
    return out.str();
}

} // namespace ll2
