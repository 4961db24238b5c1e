// Copyright 2026 The LL2 Authors.
// SPDX-License-Identifier: Apache-2.0

#include "ll2/frontend.hpp"

#include <algorithm>
#include <cctype>
#include <regex>
#include <set>

namespace ll2::ir {

namespace {

const char* kind_name(FrontendErrorKind kind)
{
    switch (kind) {
    case FrontendErrorKind::Syntax:
        return "SyntaxError";
    case FrontendErrorKind::UnsupportedOpcode:
        return "UnsupportedOpcode";
    case FrontendErrorKind::UnresolvedLabel:
        return "UnresolvedLabel";
    case FrontendErrorKind::InvalidSsa:
        return "InvalidSsa";
    }
    return "?";
}

} // namespace

FrontendError::FrontendError(FrontendErrorKind kind, std::size_t line, const std::string& detail)
    : std::runtime_error("line " + std::to_string(line) + ": " + kind_name(kind) + ": " + detail), kind_(kind),
      line_(line)
{
}

std::string to_string(const Value& v) { return v.name ? "%" + *v.name : v.literal.str(); }

const IrBlock* IrFunction::block(std::string_view label) const
{
    for (const auto& b : blocks) {
        if (b.label == label) {
            return &b;
        }
    }
    return nullptr;
}

std::vector<std::string> IrFunction::successors(const IrBlock& b) const
{
    if (b.instrs.empty()) {
        return {};
    }
    const auto& t = b.terminator();
    return t.op == IrOp::Ret ? std::vector<std::string>{} : t.labels;
}

const IrFunction* IrModule::function(std::string_view name) const
{
    for (const auto& f : functions) {
        if (f.name == name) {
            return &f;
        }
    }
    return nullptr;
}

namespace {

using Tokens = std::vector<std::string>;

bool word_char(char c)
{
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '.' || c == '$' || c == '-' || c == '%' ||
           c == '@' || c == '#' || c == '!';
}

Tokens tokenize(std::string_view line, std::size_t line_no)
{
    Tokens out;
    std::size_t i = 0;
    while (i < line.size()) {
        const char c = line[i];
        if (std::isspace(static_cast<unsigned char>(c))) {
            ++i;
        } else if (c == '"' || ((c == '%' || c == '@') && i + 1 < line.size() && line[i + 1] == '"')) {
            // Quoted names: keep the sigil, drop the quotes.
            std::string tok;
            if (c != '"') {
                tok += c;
                ++i;
            }
            const auto close = line.find('"', i + 1);
            if (close == std::string_view::npos) {
                throw FrontendError(FrontendErrorKind::Syntax, line_no, "unterminated quoted name");
            }
            tok += std::string(line.substr(i + 1, close - i - 1));
            out.push_back(tok);
            i = close + 1;
        } else if (word_char(c)) {
            std::size_t j = i;
            while (j < line.size() && word_char(line[j])) {
                ++j;
            }
            out.emplace_back(line.substr(i, j - i));
            i = j;
        } else {
            out.emplace_back(1, c);
            ++i;
        }
    }
    return out;
}

std::string trim(std::string_view s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
        return {};
    }
    const auto e = s.find_last_not_of(" \t\r");
    return std::string(s.substr(b, e - b + 1));
}

/// Splits at commas not nested inside brackets.
std::vector<Tokens> segments(const Tokens& t, std::size_t from, std::size_t to)
{
    std::vector<Tokens> out(1);
    int depth = 0;
    for (std::size_t i = from; i < to; ++i) {
        const auto& tok = t[i];
        if (tok == "[" || tok == "(" || tok == "{" || tok == "<") {
            ++depth;
        } else if (tok == "]" || tok == ")" || tok == "}" || tok == ">") {
            --depth;
        }
        if (tok == "," && depth == 0) {
            out.emplace_back();
        } else {
            out.back().push_back(tok);
        }
    }
    // Trailing annotations: `align 8`, `!tbaa !3`.
    std::erase_if(out, [](const Tokens& s) { return s.empty() || s[0] == "align" || s[0][0] == '!'; });
    return out;
}

bool is_value_token(const std::string& tok)
{
    return tok[0] == '%' || tok == "true" || tok == "false" || parse_word(tok).has_value();
}

Value value_of(const std::string& tok, std::size_t line)
{
    if (tok[0] == '%') {
        return Value::named(tok.substr(1));
    }
    if (tok == "true") {
        return Value::constant(1);
    }
    if (tok == "false") {
        return Value::constant(0);
    }
    if (auto w = parse_word(tok)) {
        return Value::constant(*w);
    }
    throw FrontendError(FrontendErrorKind::Syntax, line, "unsupported operand '" + tok + "'");
}

/// The value at the end of a "type value" segment.
Value segment_value(const Tokens& seg, std::size_t line)
{
    if (seg.empty() || !is_value_token(seg.back())) {
        throw FrontendError(FrontendErrorKind::Syntax, line, "expected an operand");
    }
    return value_of(seg.back(), line);
}

std::vector<Value> segment_values(const std::vector<Tokens>& segs, std::size_t line)
{
    std::vector<Value> out;
    for (const auto& s : segs) {
        if (!s.empty() && is_value_token(s.back())) {
            out.push_back(value_of(s.back(), line));
        }
    }
    (void)line;
    return out;
}

std::string label_ref(const std::string& tok, std::size_t line)
{
    if (tok.size() < 2 || tok[0] != '%') {
        throw FrontendError(FrontendErrorKind::Syntax, line, "expected a label, got '" + tok + "'");
    }
    return tok.substr(1);
}

const std::map<std::string, IcmpPred>& predicates()
{
    static const std::map<std::string, IcmpPred> m = {
        {"eq", IcmpPred::Eq},   {"ne", IcmpPred::Ne},   {"ult", IcmpPred::Ult}, {"slt", IcmpPred::Slt},
        {"ugt", IcmpPred::Ugt}, {"sgt", IcmpPred::Sgt}, {"ule", IcmpPred::Ule}, {"sle", IcmpPred::Sle},
        {"uge", IcmpPred::Uge}, {"sge", IcmpPred::Sge},
    };
    return m;
}

IrInstr parse_instruction(const Tokens& t, std::size_t line, const std::string& text)
{
    IrInstr in;
    in.line = line;
    in.text = text;
    std::size_t k = 0;
    if (t.size() >= 2 && t[0][0] == '%' && t[1] == "=") {
        in.dest = t[0].substr(1);
        k = 2;
    }
    if (k >= t.size()) {
        throw FrontendError(FrontendErrorKind::Syntax, line, "missing opcode");
    }
    std::string op = t[k];
    if (op == "tail" || op == "musttail" || op == "notail") {
        op = k + 1 < t.size() ? t[k + 1] : op;
    }
    ++k;
    auto need_dest = [&] {
        if (in.dest.empty()) {
            throw FrontendError(FrontendErrorKind::Syntax, line, op + " needs a destination");
        }
    };
    auto skip_flags = [&](std::initializer_list<const char*> flags) {
        while (k < t.size() && std::any_of(flags.begin(), flags.end(), [&](const char* f) { return t[k] == f; })) {
            ++k;
        }
    };

    if (op == "add" || op == "sub" || op == "mul") {
        need_dest();
        in.op = op == "add" ? IrOp::Add : op == "sub" ? IrOp::Sub : IrOp::Mul;
        skip_flags({"nuw", "nsw"});
        auto segs = segments(t, k, t.size());
        if (segs.size() != 2) {
            throw FrontendError(FrontendErrorKind::Syntax, line, op + " takes two operands");
        }
        in.operands = {segment_value(segs[0], line), segment_value(segs[1], line)};
    } else if (op == "icmp") {
        need_dest();
        in.op = IrOp::Icmp;
        if (k >= t.size()) {
            throw FrontendError(FrontendErrorKind::Syntax, line, "icmp without predicate");
        }
        auto it = predicates().find(t[k]);
        if (it == predicates().end()) {
            throw FrontendError(FrontendErrorKind::UnsupportedOpcode, line, "icmp " + t[k]);
        }
        in.pred = it->second;
        auto segs = segments(t, k + 1, t.size());
        if (segs.size() != 2) {
            throw FrontendError(FrontendErrorKind::Syntax, line, "icmp takes two operands");
        }
        in.operands = {segment_value(segs[0], line), segment_value(segs[1], line)};
    } else if (op == "load") {
        need_dest();
        in.op = IrOp::Load;
        if (k < t.size() && (t[k] == "volatile" || t[k] == "atomic")) {
            throw FrontendError(FrontendErrorKind::UnsupportedOpcode, line, "load " + t[k]);
        }
        auto vals = segment_values(segments(t, k, t.size()), line);
        if (vals.size() != 1) {
            throw FrontendError(FrontendErrorKind::Syntax, line, "load takes one pointer operand");
        }
        in.operands = vals;
    } else if (op == "store") {
        in.op = IrOp::Store;
        if (k < t.size() && (t[k] == "volatile" || t[k] == "atomic")) {
            throw FrontendError(FrontendErrorKind::UnsupportedOpcode, line, "store " + t[k]);
        }
        auto vals = segment_values(segments(t, k, t.size()), line);
        if (vals.size() != 2) {
            throw FrontendError(FrontendErrorKind::Syntax, line, "store takes a value and a pointer");
        }
        in.operands = vals;
    } else if (op == "getelementptr") {
        need_dest();
        in.op = IrOp::Gep;
        skip_flags({"inbounds"});
        auto vals = segment_values(segments(t, k, t.size()), line);
        if (vals.size() != 2) {
            throw FrontendError(FrontendErrorKind::UnsupportedOpcode, line,
                                "getelementptr with " + std::to_string(vals.size() ? vals.size() - 1 : 0) +
                                    " indices (only one is supported)");
        }
        in.operands = vals;
    } else if (op == "phi") {
        need_dest();
        in.op = IrOp::Phi;
        for (std::size_t i = k; i < t.size(); ++i) {
            if (t[i] != "[") {
                continue;
            }
            // [ value , %label ]
            if (i + 4 >= t.size() || t[i + 2] != "," || t[i + 4] != "]") {
                throw FrontendError(FrontendErrorKind::Syntax, line, "malformed phi incoming pair");
            }
            in.incoming.emplace_back(value_of(t[i + 1], line), label_ref(t[i + 3], line));
            i += 4;
        }
        if (in.incoming.empty()) {
            throw FrontendError(FrontendErrorKind::Syntax, line, "phi without incoming values");
        }
    } else if (op == "zext" || op == "sext" || op == "trunc") {
        need_dest();
        in.op = op == "zext" ? IrOp::ZExt : op == "sext" ? IrOp::SExt : IrOp::Trunc;
        auto to = std::find(t.begin() + static_cast<long>(k), t.end(), "to");
        if (to == t.end() || to == t.begin() + static_cast<long>(k)) {
            throw FrontendError(FrontendErrorKind::Syntax, line, op + " without 'to'");
        }
        in.operands = {value_of(*(to - 1), line)};
    } else if (op == "br") {
        if (k < t.size() && t[k] == "label") {
            in.op = IrOp::Br;
            if (k + 1 >= t.size()) {
                throw FrontendError(FrontendErrorKind::Syntax, line, "br label without target");
            }
            in.labels = {label_ref(t[k + 1], line)};
        } else {
            in.op = IrOp::CondBr;
            auto segs = segments(t, k, t.size());
            if (segs.size() != 3 || segs[1].size() != 2 || segs[1][0] != "label" || segs[2].size() != 2 ||
                segs[2][0] != "label") {
                throw FrontendError(FrontendErrorKind::Syntax, line, "expected br i1 c, label %a, label %b");
            }
            in.operands = {segment_value(segs[0], line)};
            in.labels = {label_ref(segs[1][1], line), label_ref(segs[2][1], line)};
        }
    } else if (op == "ret") {
        in.op = IrOp::Ret;
        if (k < t.size() && t[k] != "void") {
            in.operands = {segment_value(Tokens(t.begin() + static_cast<long>(k), t.end()), line)};
        }
    } else {
        throw FrontendError(FrontendErrorKind::UnsupportedOpcode, line, "'" + op + "' is not in the supported subset");
    }
    return in;
}

IrFunction parse_header(const Tokens& t, std::size_t line)
{
    IrFunction f;
    f.line = line;
    auto at = std::find_if(t.begin(), t.end(), [](const std::string& s) { return s[0] == '@'; });
    if (at == t.end() || at + 1 == t.end() || *(at + 1) != "(") {
        throw FrontendError(FrontendErrorKind::Syntax, line, "expected define <type> @name(...)");
    }
    f.name = at->substr(1);
    std::size_t open = static_cast<std::size_t>(at - t.begin()) + 1;
    std::size_t close = open;
    int depth = 0;
    for (; close < t.size(); ++close) {
        depth += t[close] == "(" ? 1 : t[close] == ")" ? -1 : 0;
        if (depth == 0) {
            break;
        }
    }
    if (close >= t.size()) {
        throw FrontendError(FrontendErrorKind::Syntax, line, "unbalanced parameter list");
    }
    std::size_t unnamed = 0;
    for (const auto& seg : segments(t, open + 1, close)) {
        if (seg.empty() || seg[0] == "...") {
            continue;
        }
        IrParam p;
        p.type = seg[0];
        for (std::size_t i = 1; i < seg.size() && seg[i] == "*"; ++i) {
            p.type += "*";
        }
        if (seg.back()[0] == '%') {
            p.name = seg.back().substr(1);
        } else {
            p.name = std::to_string(unnamed++);
        }
        f.params.push_back(p);
    }
    return f;
}

} // namespace

IrModule parse_ll(std::string_view text)
{
    static const std::regex label_comment(R"(^\s*;\s*<label>:(\d+).*)");
    IrModule m;
    IrFunction* fn = nullptr;
    bool await_brace = false;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    std::size_t unnamed_params = 0;

    auto current_block = [&](std::size_t line) -> IrBlock& {
        if (fn->blocks.empty()) {
            IrBlock entry;
            entry.label = std::to_string(unnamed_params);
            entry.line = line;
            fn->blocks.push_back(entry);
        }
        return fn->blocks.back();
    };
    auto start_block = [&](std::string label, std::size_t line) {
        IrBlock b;
        b.label = std::move(label);
        b.line = line;
        fn->blocks.push_back(std::move(b));
    };

    while (pos <= text.size()) {
        auto end = text.find('\n', pos);
        if (end == std::string_view::npos) {
            end = text.size();
        }
        const std::string raw(text.substr(pos, end - pos));
        pos = end + 1;
        ++line_no;

        std::smatch lm;
        if (fn && !await_brace && std::regex_match(raw, lm, label_comment)) {
            start_block(lm[1].str(), line_no);
            continue;
        }
        std::string code = raw;
        if (auto c = code.find(';'); c != std::string::npos) {
            code = code.substr(0, c);
        }
        code = trim(code);
        if (code.empty()) {
            continue;
        }
        const Tokens t = tokenize(code, line_no);

        if (!fn) {
            if (t[0] == "define") {
                m.functions.push_back(parse_header(t, line_no));
                fn = &m.functions.back();
                unnamed_params = static_cast<std::size_t>(std::count_if(
                    fn->params.begin(), fn->params.end(), [](const IrParam& p) {
                        return !p.name.empty() && std::all_of(p.name.begin(), p.name.end(), ::isdigit);
                    }));
                await_brace = t.back() != "{";
            }
            // Everything else at top level (target lines, declarations,
            // attribute groups, metadata) is skipped.
            continue;
        }
        if (await_brace) {
            if (t.size() != 1 || t[0] != "{") {
                throw FrontendError(FrontendErrorKind::Syntax, line_no, "expected '{' after define");
            }
            await_brace = false;
            continue;
        }
        if (t.size() == 1 && t[0] == "}") {
            if (fn->blocks.empty()) {
                throw FrontendError(FrontendErrorKind::Syntax, line_no, "function @" + fn->name + " has no body");
            }
            fn = nullptr;
            continue;
        }
        if (t.size() >= 2 && t[1] == ":" && t[0][0] != '%') {
            start_block(t[0], line_no);
            continue;
        }
        auto inst = parse_instruction(t, line_no, code);
        IrBlock& b = current_block(line_no);
        if (!b.instrs.empty() && b.instrs.back().is_terminator()) {
            throw FrontendError(FrontendErrorKind::Syntax, line_no,
                                "instruction after the terminator of block " + b.label);
        }
        b.instrs.push_back(std::move(inst));
    }
    if (fn) {
        throw FrontendError(FrontendErrorKind::Syntax, line_no, "missing '}' at end of @" + fn->name);
    }
    return m;
}

void validate(const IrFunction& f)
{
    std::set<std::string> labels;
    for (const auto& b : f.blocks) {
        if (!labels.insert(b.label).second) {
            throw FrontendError(FrontendErrorKind::Syntax, b.line, "duplicate label " + b.label);
        }
    }
    std::map<std::string, std::vector<std::string>> preds;
    std::map<std::string, std::size_t> defined;
    for (const auto& p : f.params) {
        defined[p.name] = f.line;
    }
    for (const auto& b : f.blocks) {
        if (b.instrs.empty() || !b.terminator().is_terminator()) {
            throw FrontendError(FrontendErrorKind::Syntax, b.line, "block " + b.label + " does not end in br or ret");
        }
        bool phis_done = false;
        for (const auto& in : b.instrs) {
            if (in.op == IrOp::Phi) {
                if (&b == &f.blocks.front()) {
                    throw FrontendError(FrontendErrorKind::InvalidSsa, in.line, "phi in the entry block");
                }
                if (phis_done) {
                    throw FrontendError(FrontendErrorKind::InvalidSsa, in.line, "phi after a non-phi instruction");
                }
            } else {
                phis_done = true;
            }
            if (!in.dest.empty()) {
                auto [it, fresh] = defined.emplace(in.dest, in.line);
                if (!fresh) {
                    throw FrontendError(FrontendErrorKind::InvalidSsa, in.line,
                                        "%" + in.dest + " is already defined on line " + std::to_string(it->second));
                }
            }
        }
        for (const auto& s : f.successors(b)) {
            if (!labels.count(s)) {
                throw FrontendError(FrontendErrorKind::UnresolvedLabel, b.terminator().line, "no block labelled " + s);
            }
            preds[s].push_back(b.label);
        }
    }
    auto check_use = [&](const Value& v, std::size_t line) {
        if (v.name && !defined.count(*v.name)) {
            throw FrontendError(FrontendErrorKind::InvalidSsa, line, "use of undefined %" + *v.name);
        }
    };
    for (const auto& b : f.blocks) {
        auto& ps = preds[b.label];
        std::sort(ps.begin(), ps.end());
        ps.erase(std::unique(ps.begin(), ps.end()), ps.end());
        for (const auto& in : b.instrs) {
            for (const auto& v : in.operands) {
                check_use(v, in.line);
            }
            if (in.op != IrOp::Phi) {
                continue;
            }
            std::vector<std::string> from;
            for (const auto& [v, label] : in.incoming) {
                check_use(v, in.line);
                if (!labels.count(label)) {
                    throw FrontendError(FrontendErrorKind::UnresolvedLabel, in.line, "no block labelled " + label);
                }
                from.push_back(label);
            }
            std::sort(from.begin(), from.end());
            if (std::adjacent_find(from.begin(), from.end()) != from.end()) {
                throw FrontendError(FrontendErrorKind::InvalidSsa, in.line, "phi names a predecessor twice");
            }
            if (from != ps) {
                throw FrontendError(FrontendErrorKind::InvalidSsa, in.line,
                                    "phi %" + in.dest + " does not list exactly the predecessors of " + b.label);
            }
        }
    }
}

} // namespace ll2::ir
