// Copyright 2026 The LL2 Authors.
// SPDX-License-Identifier: Apache-2.0

#include "ll2/frontend.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace ll2::ir {

std::optional<std::size_t> LoweringArtifact::register_of(std::string_view ssa_name) const
{
    const std::string key = !ssa_name.empty() && ssa_name[0] == '%' ? std::string(ssa_name) : "%" + std::string(ssa_name);
    for (const auto& e : register_map) {
        if (e.name == key) {
            return e.reg;
        }
    }
    return std::nullopt;
}

std::size_t LoweringArtifact::registers_used() const
{
    std::size_t n = registers_needed(program);
    for (const auto& e : register_map) {
        n = std::max(n, e.reg + 1);
    }
    return n;
}

namespace {

using NameSet = std::set<std::string>;

/// A source for a register copy: a register or a literal.
struct Source {
    std::optional<std::size_t> reg;
    Word literal = 0;

    std::string key() const { return reg ? "r" + std::to_string(*reg) : "k" + literal.str(); }
};

struct Copy {
    std::size_t dest = 0;
    Source src;
    std::string note;
};

/// An instruction whose branch targets are still labels.
struct Pending {
    Instruction inst;
    std::string on_true;
    std::string on_false;
    std::string note;
};

class Lowerer {
public:
    explicit Lowerer(const IrFunction& f) : f_(f) {}

    LoweringArtifact run()
    {
        collect_aliases();
        compute_liveness();
        allocate();
        emit();
        resolve_labels();
        return std::move(art_);
    }

private:
    const IrFunction& f_;
    LoweringArtifact art_;
    std::map<std::string, Value> cast_source_;
    std::map<std::string, std::size_t> reg_;
    std::size_t next_reg_ = 0;
    std::map<std::string, NameSet> live_in_;
    std::map<const IrInstr*, std::vector<std::size_t>> temps_;
    std::vector<Pending> code_;
    std::map<std::string, std::size_t> label_pc_;

    // --- values ---------------------------------------------------------

    void collect_aliases()
    {
        for (const auto& b : f_.blocks) {
            for (const auto& in : b.instrs) {
                if (in.op == IrOp::ZExt || in.op == IrOp::SExt || in.op == IrOp::Trunc) {
                    cast_source_[in.dest] = in.operands[0];
                }
            }
        }
    }

    Value resolve(Value v) const
    {
        while (v.name) {
            auto it = cast_source_.find(*v.name);
            if (it == cast_source_.end()) {
                break;
            }
            v = it->second;
        }
        return v;
    }

    Source source_of(const Value& v) const
    {
        const Value r = resolve(v);
        if (r.is_literal()) {
            return {std::nullopt, r.literal};
        }
        return {reg_.at(*r.name), 0};
    }

    static bool is_cast(const IrInstr& in) { return in.op == IrOp::ZExt || in.op == IrOp::SExt || in.op == IrOp::Trunc; }

    // --- liveness -------------------------------------------------------

    void compute_liveness()
    {
        std::map<std::string, NameSet> gen, kill;
        std::map<std::pair<std::string, std::string>, NameSet> phi_uses;
        for (const auto& b : f_.blocks) {
            auto& g = gen[b.label];
            auto& k = kill[b.label];
            for (const auto& in : b.instrs) {
                if (in.op == IrOp::Phi) {
                    k.insert(in.dest);
                    for (const auto& [v, from] : in.incoming) {
                        if (auto r = resolve(v); r.name) {
                            phi_uses[{from, b.label}].insert(*r.name);
                        }
                    }
                    continue;
                }
                if (is_cast(in)) {
                    continue;
                }
                for (const auto& v : in.operands) {
                    if (auto r = resolve(v); r.name && !k.count(*r.name)) {
                        g.insert(*r.name);
                    }
                }
                if (!in.dest.empty()) {
                    k.insert(in.dest);
                }
            }
        }
        bool changed = true;
        while (changed) {
            changed = false;
            for (auto it = f_.blocks.rbegin(); it != f_.blocks.rend(); ++it) {
                const auto& b = *it;
                NameSet out;
                for (const auto& s : f_.successors(b)) {
                    const auto& in_s = live_in_[s];
                    out.insert(in_s.begin(), in_s.end());
                    const auto& pu = phi_uses[{b.label, s}];
                    out.insert(pu.begin(), pu.end());
                }
                NameSet in = gen[b.label];
                for (const auto& n : out) {
                    if (!kill[b.label].count(n)) {
                        in.insert(n);
                    }
                }
                if (in != live_in_[b.label]) {
                    live_in_[b.label] = std::move(in);
                    changed = true;
                }
            }
        }
    }

    std::set<std::size_t> live_registers(const std::string& label) const
    {
        std::set<std::size_t> out;
        auto it = live_in_.find(label);
        if (it != live_in_.end()) {
            for (const auto& n : it->second) {
                out.insert(reg_.at(n));
            }
        }
        return out;
    }

    // --- allocation -----------------------------------------------------

    std::size_t fresh(const std::string& name, const std::string& alias_of = {})
    {
        const std::size_t r = next_reg_++;
        art_.register_map.push_back({name, r, alias_of});
        return r;
    }

    std::vector<std::pair<std::string, std::string>> incoming_key(const IrInstr& phi) const
    {
        std::vector<std::pair<std::string, std::string>> key;
        for (const auto& [v, from] : phi.incoming) {
            key.emplace_back(to_string(resolve(v)), from);
        }
        std::sort(key.begin(), key.end());
        return key;
    }

    bool live_in(const std::string& label, const std::string& name) const
    {
        auto it = live_in_.find(label);
        return it != live_in_.end() && it->second.count(name);
    }

    void allocate()
    {
        for (auto it = f_.params.rbegin(); it != f_.params.rend(); ++it) {
            reg_[it->name] = fresh("%" + it->name);
        }

        struct PhiGroup {
            std::string owner;
            std::vector<std::pair<std::string, std::string>> key;
            std::vector<std::pair<std::string, std::string>> members; // (name, block)
        };
        std::vector<PhiGroup> groups;

        for (const auto& b : f_.blocks) {
            for (const auto& in : b.instrs) {
                if (in.op == IrOp::Phi) {
                    const auto key = incoming_key(in);
                    PhiGroup* join = nullptr;
                    for (auto& g : groups) {
                        if (g.key != key) {
                            continue;
                        }
                        const bool disjoint = std::all_of(g.members.begin(), g.members.end(), [&](const auto& m) {
                            return m.second != b.label && !live_in(b.label, m.first) && !live_in(m.second, in.dest);
                        });
                        if (disjoint) {
                            join = &g;
                            break;
                        }
                    }
                    if (join) {
                        reg_[in.dest] = reg_.at(join->owner);
                        art_.register_map.push_back({"%" + in.dest, reg_[in.dest], "%" + join->owner});
                        join->members.emplace_back(in.dest, b.label);
                    } else {
                        reg_[in.dest] = fresh("%" + in.dest);
                        groups.push_back({in.dest, key, {{in.dest, b.label}}});
                    }
                    continue;
                }
                if (is_cast(in)) {
                    const Value root = resolve(in.operands[0]);
                    if (root.name) {
                        reg_[in.dest] = reg_.at(*root.name);
                        art_.register_map.push_back({"%" + in.dest, reg_[in.dest], "%" + *root.name});
                    }
                    continue;
                }
                auto& temps = temps_[&in];
                if (in.op != IrOp::Ret) {
                    for (const auto& v : in.operands) {
                        const Value r = resolve(v);
                        if (r.is_literal()) {
                            temps.push_back(fresh("literal " + r.literal.str() + " (line " + std::to_string(in.line) + ")"));
                        }
                    }
                }
                if (in.op == IrOp::Icmp && needs_two_steps(in.pred)) {
                    temps.push_back(fresh("compare (line " + std::to_string(in.line) + ")"));
                    temps.push_back(fresh("literal 0 (line " + std::to_string(in.line) + ")"));
                }
                if (!in.dest.empty()) {
                    reg_[in.dest] = fresh("%" + in.dest);
                }
            }
        }
    }

    static bool needs_two_steps(IcmpPred p)
    {
        return p == IcmpPred::Ne || p == IcmpPred::Ule || p == IcmpPred::Sle || p == IcmpPred::Uge ||
               p == IcmpPred::Sge;
    }

    // --- emission -------------------------------------------------------

    void put(Instruction inst, std::string note)
    {
        code_.push_back({std::move(inst), {}, {}, std::move(note)});
    }

    void put_branch(std::size_t cond, std::string on_true, std::string on_false, std::string note)
    {
        code_.push_back({Instruction::make(Opcode::Br, static_cast<std::int64_t>(cond)), std::move(on_true),
                         std::move(on_false), std::move(note)});
    }

    void mark(const std::string& label)
    {
        label_pc_[label] = code_.size();
    }

    static std::int64_t r(std::size_t reg) { return static_cast<std::int64_t>(reg); }

    /// Registers holding each operand, materialising literals into their
    /// temporaries first.
    std::vector<std::size_t> operand_registers(const IrInstr& in)
    {
        std::vector<std::size_t> regs;
        const auto& temps = temps_[&in];
        std::size_t t = 0;
        for (const auto& v : in.operands) {
            const Value rv = resolve(v);
            if (rv.is_literal()) {
                const std::size_t tmp = temps.at(t++);
                put(Instruction::make_const(rv.literal), in.text);
                put(Instruction::make(Opcode::PopTo, r(tmp)), "literal " + rv.literal.str());
                regs.push_back(tmp);
            } else {
                regs.push_back(reg_.at(*rv.name));
            }
        }
        return regs;
    }

    std::vector<Copy> edge_copies(const std::string& from, const std::string& to, bool keep_self) const
    {
        std::vector<Copy> out;
        for (const auto& in : f_.block(to)->instrs) {
            if (in.op != IrOp::Phi) {
                break;
            }
            for (const auto& [v, label] : in.incoming) {
                if (label != from) {
                    continue;
                }
                Copy c{reg_.at(in.dest), source_of(v),
                       "phi %" + in.dest + " <- " + to_string(v) + " (" + from + " -> " + to + ")"};
                if (keep_self || !(c.src.reg && *c.src.reg == c.dest)) {
                    out.push_back(std::move(c));
                }
            }
        }
        return out;
    }

    void emit_copies(std::vector<Copy> copies)
    {
        std::sort(copies.begin(), copies.end(), [](const Copy& a, const Copy& b) { return a.dest < b.dest; });
        std::set<std::size_t> dests;
        for (const auto& c : copies) {
            dests.insert(c.dest);
        }
        const bool overlapping = std::any_of(copies.begin(), copies.end(), [&](const Copy& c) {
            return c.src.reg && dests.count(*c.src.reg);
        });
        auto push = [&](const Copy& c) {
            if (c.src.reg) {
                put(Instruction::make(Opcode::Push, r(*c.src.reg)), c.note);
            } else {
                put(Instruction::make_const(c.src.literal), c.note);
            }
        };
        if (!overlapping) {
            for (const auto& c : copies) {
                push(c);
                put(Instruction::make(Opcode::PopTo, r(c.dest)), c.note);
            }
            return;
        }
        for (const auto& c : copies) {
            push(c);
        }
        for (auto it = copies.rbegin(); it != copies.rend(); ++it) {
            put(Instruction::make(Opcode::PopTo, r(it->dest)), it->note);
        }
    }

    bool can_hoist(const std::string& from, std::size_t cond, const std::string& t, const std::string& e) const
    {
        const auto ct = edge_copies(from, t, false);
        const auto ce = edge_copies(from, e, false);
        auto fits = [&](const std::vector<Copy>& mine, const std::string& other) {
            std::map<std::size_t, std::string> theirs;
            for (const auto& c : edge_copies(from, other, true)) {
                theirs[c.dest] = c.src.key();
            }
            const auto live = live_registers(other);
            for (const auto& c : mine) {
                if (c.dest == cond) {
                    return false;
                }
                auto it = theirs.find(c.dest);
                if (it != theirs.end() ? it->second != c.src.key() : live.count(c.dest) > 0) {
                    return false;
                }
            }
            return true;
        };
        return fits(ct, e) && fits(ce, t);
    }

    void jump(const std::string& target, const std::string& next_label, std::string note)
    {
        if (target != next_label) {
            put_branch(0, target, target, std::move(note));
        }
    }

    void emit()
    {
        for (std::size_t bi = 0; bi < f_.blocks.size(); ++bi) {
            const auto& b = f_.blocks[bi];
            const std::string next = bi + 1 < f_.blocks.size() ? f_.blocks[bi + 1].label : std::string();
            mark(b.label);
            art_.block_pc[b.label] = code_.size();
            for (const auto& in : b.instrs) {
                if (in.op == IrOp::Phi || is_cast(in)) {
                    continue;
                }
                if (in.is_terminator()) {
                    emit_terminator(b, in, next);
                } else {
                    emit_body(in);
                }
            }
        }
    }

    void emit_body(const IrInstr& in)
    {
        const auto ops = operand_registers(in);
        const auto& temps = temps_[&in];
        switch (in.op) {
        case IrOp::Add:
        case IrOp::Sub:
        case IrOp::Mul: {
            const Opcode op = in.op == IrOp::Add ? Opcode::Add : in.op == IrOp::Sub ? Opcode::Sub : Opcode::Mul;
            put(Instruction::make(op, r(reg_.at(in.dest)), r(ops[0]), r(ops[1])), in.text);
            break;
        }
        case IrOp::Load:
            put(Instruction::make(Opcode::Load, r(reg_.at(in.dest)), r(ops[0])), in.text);
            break;
        case IrOp::Store:
            put(Instruction::make(Opcode::Store, r(ops[1]), r(ops[0])), in.text);
            break;
        case IrOp::Gep:
            put(Instruction::make(Opcode::GetElPtr, r(reg_.at(in.dest)), r(ops[0]), r(ops[1])), in.text);
            break;
        case IrOp::Icmp:
            emit_icmp(in, ops, temps);
            break;
        default:
            throw FrontendError(FrontendErrorKind::UnsupportedOpcode, in.line, "cannot lower '" + in.text + "'");
        }
    }

    void emit_icmp(const IrInstr& in, const std::vector<std::size_t>& ops, const std::vector<std::size_t>& temps)
    {
        const std::size_t d = reg_.at(in.dest);
        const std::size_t a = ops[0];
        const std::size_t b = ops[1];
        if (!needs_two_steps(in.pred)) {
            switch (in.pred) {
            case IcmpPred::Eq:
                put(Instruction::make(Opcode::Eq, r(d), r(a), r(b)), in.text);
                break;
            case IcmpPred::Ult:
            case IcmpPred::Slt:
                put(Instruction::make(Opcode::Lt, r(d), r(a), r(b)), in.text);
                break;
            default: // ugt, sgt
                put(Instruction::make(Opcode::Lt, r(d), r(b), r(a)), in.text);
                break;
            }
            return;
        }
        const std::size_t tmp = temps[temps.size() - 2];
        const std::size_t zero = temps[temps.size() - 1];
        switch (in.pred) {
        case IcmpPred::Ne:
            put(Instruction::make(Opcode::Eq, r(tmp), r(a), r(b)), in.text);
            break;
        case IcmpPred::Ule:
        case IcmpPred::Sle:
            put(Instruction::make(Opcode::Lt, r(tmp), r(b), r(a)), in.text);
            break;
        default: // uge, sge
            put(Instruction::make(Opcode::Lt, r(tmp), r(a), r(b)), in.text);
            break;
        }
        put(Instruction::make_const(0), in.text);
        put(Instruction::make(Opcode::PopTo, r(zero)), "literal 0");
        put(Instruction::make(Opcode::Eq, r(d), r(tmp), r(zero)), "negate: " + in.text);
    }

    void emit_terminator(const IrBlock& b, const IrInstr& in, const std::string& next)
    {
        if (in.op == IrOp::Ret) {
            if (!in.operands.empty()) {
                const Value v = resolve(in.operands[0]);
                if (v.is_literal()) {
                    put(Instruction::make_const(v.literal), in.text);
                } else {
                    const std::size_t reg = reg_.at(*v.name);
                    if (!art_.return_register) {
                        art_.return_register = reg;
                    }
                    put(Instruction::make(Opcode::Push, r(reg)), in.text);
                }
            }
            put(Instruction::make(Opcode::Halt), in.text);
            return;
        }
        if (in.op == IrOp::Br) {
            const auto& target = in.labels[0];
            emit_copies(edge_copies(b.label, target, false));
            jump(target, next, in.text);
            return;
        }
        const std::size_t cond = operand_registers(in)[0];
        const auto& t = in.labels[0];
        const auto& e = in.labels[1];
        auto ct = edge_copies(b.label, t, false);
        auto ce = edge_copies(b.label, e, false);
        if (ct.empty() && ce.empty()) {
            put_branch(cond, t, e, in.text);
            return;
        }
        if (can_hoist(b.label, cond, t, e)) {
            std::map<std::size_t, Copy> merged;
            for (auto& c : ct) {
                merged.emplace(c.dest, c);
            }
            for (auto& c : ce) {
                auto [it, fresh] = merged.emplace(c.dest, c);
                if (!fresh) {
                    it->second.note += "; " + c.note;
                }
            }
            std::vector<Copy> all;
            for (auto& [dest, c] : merged) {
                all.push_back(c);
            }
            emit_copies(std::move(all));
            put_branch(cond, t, e, in.text);
            return;
        }
        const std::string tt = ct.empty() ? t : b.label + " -> " + t;
        const std::string te = ce.empty() ? e : b.label + " -> " + e;
        put_branch(cond, tt, te, in.text);
        if (!ct.empty()) {
            mark(tt);
            emit_copies(std::move(ct));
            jump(t, ce.empty() ? next : std::string(), "to " + t);
        }
        if (!ce.empty()) {
            mark(te);
            emit_copies(std::move(ce));
            jump(e, next, "to " + e);
        }
    }

    void resolve_labels()
    {
        for (std::size_t pc = 0; pc < code_.size(); ++pc) {
            auto& p = code_[pc];
            if (p.inst.op == Opcode::Br) {
                const auto offset = [&](const std::string& label) {
                    return static_cast<std::int64_t>(label_pc_.at(label)) - static_cast<std::int64_t>(pc);
                };
                p.inst.args[1] = offset(p.on_true);
                p.inst.args[2] = offset(p.on_false);
            }
            art_.program.instructions.push_back(p.inst);
            art_.notes.push_back(p.note);
        }
    }
};

} // namespace

LoweringArtifact lower_function(const IrFunction& f)
{
    validate(f);
    return Lowerer(f).run();
}

std::string emit_register_map(const LoweringArtifact& a)
{
    std::ostringstream out;
    for (const auto& e : a.register_map) {
        out << e.name << " -> " << e.reg;
        if (!e.alias_of.empty()) {
            out << "   ; shares with " << e.alias_of;
        } else if (e.name.empty() || e.name[0] != '%') {
            out << "   ; temporary";
        }
        out << "\n";
    }
    return out.str();
}

} // namespace ll2::ir
