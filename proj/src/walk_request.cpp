// Copyright 2026 The LL2 Authors.
// SPDX-License-Identifier: Apache-2.0

#include "ll2/walk_request.hpp"

#include "ll2/sexp.hpp"

#include <map>

namespace ll2::walk {

WalkFileError::WalkFileError(std::size_t line, const std::string& what)
    : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line)
{
}

namespace {

[[noreturn]] void fail(const Sexp& at, const std::string& why) { throw WalkFileError(at.line, why); }

struct Definition {
    Sexp body;
    enum class Kind { Term, ProgramIs, WellFormed } kind = Kind::Term;
};

using Definitions = std::map<std::string, Definition>;

bool is_structural(const Sexp& body, std::string_view name)
{
    return body.is_list && body.items.size() == 1 && body.items[0].is(name);
}

/// Replaces `(name s)` / `(name)` references to term definitions by their
/// bodies. Structural definitions cannot appear inside terms.
Sexp expand(const Sexp& e, const Definitions& defs, int depth = 0)
{
    if (depth > 64) {
        fail(e, "definitions nest too deeply (recursive definition?)");
    }
    if (!e.is_list || e.items.empty() || e.items[0].is_list) {
        if (e.is_list) {
            Sexp out = e;
            for (auto& item : out.items) {
                item = expand(item, defs, depth);
            }
            return out;
        }
        return e;
    }
    auto it = defs.find(e.items[0].atom);
    if (it != defs.end() && e.items.size() <= 2) {
        if (it->second.kind != Definition::Kind::Term) {
            fail(e, "'" + it->first + "' is a structural predicate and cannot be used inside a term");
        }
        return expand(it->second.body, defs, depth + 1);
    }
    Sexp out = e;
    for (std::size_t i = 1; i < out.items.size(); ++i) {
        out.items[i] = expand(out.items[i], defs, depth);
    }
    return out;
}

sym::Term to_term(const Sexp& e, const Definitions& defs)
{
    try {
        return sym::term_from_sexp(expand(e, defs));
    } catch (const sym::TermSyntaxError& err) {
        fail(e, err.what());
    }
}

std::size_t natural(const Sexp& e)
{
    if (e.is_list) {
        fail(e, "expected a natural number, got " + to_string(e));
    }
    auto w = parse_word(e.atom);
    auto n = w ? word_to_index(*w) : std::nullopt;
    if (!n) {
        fail(e, "expected a natural number, got " + e.atom);
    }
    return *n;
}

std::int64_t integer(const Sexp& e)
{
    if (e.is_list) {
        fail(e, "expected an integer, got " + to_string(e));
    }
    auto w = parse_word(e.atom);
    auto n = w ? word_to_i64(*w) : std::nullopt;
    if (!n) {
        fail(e, "expected an integer, got " + e.atom);
    }
    return *n;
}

// --- focus regions --------------------------------------------------------

using Region = std::vector<PcInterval>;

Region everything() { return {PcInterval{0, std::nullopt}}; }

Region at_least(std::int64_t a) { return {PcInterval{static_cast<std::size_t>(std::max<std::int64_t>(a, 0)), {}}}; }

Region at_most(std::int64_t b)
{
    if (b < 0) {
        return {};
    }
    return {PcInterval{0, static_cast<std::size_t>(b)}};
}

Region intersect(const Region& x, const Region& y)
{
    Region out;
    for (const auto& a : x) {
        for (const auto& b : y) {
            PcInterval i{std::max(a.first, b.first), {}};
            if (a.last && b.last) {
                i.last = std::min(*a.last, *b.last);
            } else {
                i.last = a.last ? a.last : b.last;
            }
            if (!i.last || *i.last >= i.first) {
                out.push_back(i);
            }
        }
    }
    return out;
}

Region region_of(const Sexp& e, const std::string& var)
{
    if (e.is("t")) {
        return everything();
    }
    if (e.is("nil")) {
        return {};
    }
    if (!e.is_list || e.items.empty() || e.items[0].is_list) {
        fail(e, "unsupported focus region expression " + to_string(e));
    }
    const std::string& op = e.items[0].atom;
    if (op == "and") {
        Region acc = everything();
        for (std::size_t i = 1; i < e.items.size(); ++i) {
            acc = intersect(acc, region_of(e.items[i], var));
        }
        return acc;
    }
    if (op == "or") {
        Region acc;
        for (std::size_t i = 1; i < e.items.size(); ++i) {
            auto r = region_of(e.items[i], var);
            acc.insert(acc.end(), r.begin(), r.end());
        }
        return acc;
    }
    if (e.items.size() != 3) {
        fail(e, "unsupported focus region expression " + to_string(e));
    }
    const Sexp& lhs = e.items[1];
    const Sexp& rhs = e.items[2];
    // Normalize to "pc OP k".
    std::string cmp = op;
    std::int64_t k = 0;
    if (lhs.is(var)) {
        k = integer(rhs);
    } else if (rhs.is(var)) {
        k = integer(lhs);
        static const std::map<std::string, std::string> flip = {
            {"<", ">"}, {"<=", ">="}, {">", "<"}, {">=", "<="}, {"=", "="}};
        auto it = flip.find(op);
        if (it == flip.end()) {
            fail(e, "unsupported comparison '" + op + "'");
        }
        cmp = it->second;
    } else {
        fail(e, "comparison does not mention " + var + ": " + to_string(e));
    }
    if (cmp == "<") {
        return at_most(k - 1);
    }
    if (cmp == "<=") {
        return at_most(k);
    }
    if (cmp == ">") {
        return at_least(k + 1);
    }
    if (cmp == ">=") {
        return at_least(k);
    }
    if (cmp == "=") {
        return k < 0 ? Region{} : Region{PcInterval{static_cast<std::size_t>(k), static_cast<std::size_t>(k)}};
    }
    fail(e, "unsupported comparison '" + op + "'");
}

Region lambda_region(const Sexp& e)
{
    if (!e.is_list || e.items.size() != 3 || !e.items[0].is("lambda") || !e.items[1].is_list ||
        e.items[1].items.size() != 1 || e.items[1].items[0].is_list) {
        fail(e, "expected (lambda (pc) body)");
    }
    return region_of(e.items[2], e.items[1].items[0].atom);
}

Region interval_list(const Sexp& e)
{
    if (!e.is_list) {
        fail(e, "expected a list of (first last) intervals");
    }
    Region out;
    for (const auto& item : e.items) {
        if (!item.is_list || item.items.size() != 2) {
            fail(item, "expected (first last) with last a number or *");
        }
        PcInterval i{natural(item.items[0]), {}};
        if (!item.items[1].is("*")) {
            i.last = natural(item.items[1]);
        }
        out.push_back(i);
    }
    return out;
}

// --- def-semantics ----------------------------------------------------------

std::optional<Sexp> find_measure(const Sexp& e)
{
    if (!e.is_list) {
        return std::nullopt;
    }
    for (std::size_t i = 0; i + 1 < e.items.size(); ++i) {
        if (e.items[i].is(":measure")) {
            return e.items[i + 1];
        }
    }
    for (const auto& item : e.items) {
        if (auto m = find_measure(item)) {
            return m;
        }
    }
    return std::nullopt;
}

sym::StatePredicate hypothesis(const Sexp& e, const Definitions& defs, const std::shared_ptr<const Program>& program)
{
    if (e.is("program-is") || is_structural(e, "program-is")) {
        return sym::StatePredicate::program_is("program-is", program);
    }
    if (e.is("well-formed") || is_structural(e, "well-formed")) {
        return sym::StatePredicate::well_formed();
    }
    std::string head = e.is_list && !e.items.empty() && !e.items[0].is_list ? e.items[0].atom : e.atom;
    auto it = defs.find(head);
    if (it != defs.end() && (!e.is_list || e.items.size() <= 2)) {
        switch (it->second.kind) {
        case Definition::Kind::ProgramIs:
            return sym::StatePredicate::program_is(head, program);
        case Definition::Kind::WellFormed:
            return sym::StatePredicate::well_formed();
        case Definition::Kind::Term:
            return sym::StatePredicate::of(head, to_term(it->second.body, defs));
        }
    }
    return sym::StatePredicate::of(to_string(e), to_term(e, defs));
}

WalkRequest request_from(const Sexp& form, const Definitions& defs, const std::shared_ptr<const Program>& program)
{
    WalkRequest req;
    bool have_pc = false;
    bool have_region = false;
    for (std::size_t i = 1; i < form.items.size(); i += 2) {
        const Sexp& key = form.items[i];
        if (key.is_list || key.atom.empty() || key.atom[0] != ':') {
            fail(key, "expected a :keyword, got " + to_string(key));
        }
        if (i + 1 >= form.items.size()) {
            fail(key, "missing value for " + key.atom);
        }
        const Sexp& value = form.items[i + 1];
        if (key.is(":init-pc")) {
            req.init_pc = natural(value);
            have_pc = true;
        } else if (key.is(":focus-regionp")) {
            req.focus_region = lambda_region(value);
            have_region = true;
        } else if (key.is(":focus-region")) {
            req.focus_region = interval_list(value);
            have_region = true;
        } else if (key.is(":root-name")) {
            if (value.is_list) {
                fail(value, "root name must be a symbol");
            }
            req.root_name = value.atom;
        } else if (key.is(":hyps+") || key.is(":hyps")) {
            if (!value.is_list) {
                fail(value, "expected a list of hypotheses");
            }
            for (const auto& h : value.items) {
                req.hyps.push_back(hypothesis(h, defs, program));
            }
        } else if (key.is(":measure")) {
            req.measure = sym::MeasureExpr(to_term(value, defs));
        } else if (key.is(":annotations")) {
            if (auto m = find_measure(value); m && !req.measure) {
                req.measure = sym::MeasureExpr(to_term(*m, defs));
            }
        } else if (key.is(":max-paths")) {
            req.max_paths = natural(value);
        } else if (key.is(":max-path-length")) {
            req.max_path_length = natural(value);
        } else {
            fail(key, "unknown key " + key.atom);
        }
    }
    if (!have_pc) {
        fail(form, "def-semantics without :init-pc");
    }
    if (!have_region) {
        fail(form, "def-semantics without :focus-regionp or :focus-region");
    }
    if (req.root_name.empty()) {
        req.root_name = "region-" + std::to_string(req.init_pc);
    }
    return req;
}

} // namespace

std::vector<WalkRequest> parse_walk_file(std::string_view text, std::shared_ptr<const Program> program)
{
    std::vector<Sexp> forms;
    try {
        forms = read_sexps(text);
    } catch (const SexpError& e) {
        throw WalkFileError(e.line(), e.what());
    }
    Definitions defs;
    std::vector<WalkRequest> out;
    for (const auto& form : forms) {
        if (!form.is_list || form.items.empty() || form.items[0].is_list) {
            fail(form, "expected a (def-semantics ...) or definition form");
        }
        const std::string& head = form.items[0].atom;
        if (head == "defun-nx" || head == "defun" || head == "defpred") {
            // (defun-nx name (s) [declare...] body) or (defpred name body)
            if (form.items.size() < 3 || form.items[1].is_list) {
                fail(form, "malformed " + head);
            }
            Definition d;
            d.body = form.items.back();
            if (is_structural(d.body, "program-is")) {
                d.kind = Definition::Kind::ProgramIs;
            } else if (is_structural(d.body, "well-formed")) {
                d.kind = Definition::Kind::WellFormed;
            } else {
                to_term(d.body, defs); // report syntax errors at the definition
            }
            defs[form.items[1].atom] = std::move(d);
        } else if (head == "def-semantics") {
            out.push_back(request_from(form, defs, program));
        } else {
            fail(form, "unknown form " + head);
        }
    }
    return out;
}

} // namespace ll2::walk
