// SPDX-License-Identifier: Apache-2.0
#include "assertforge/sva.hpp"

namespace assertforge::sva {

std::string BindViolation::str() const {
    switch (kind) {
        case Kind::UnknownSignal:
            return "unknown signal " + name;
        case Kind::SelectOutOfRange:
            return "select [" + std::to_string(index) + "] out of range for " + name +
                   " (width " + std::to_string(width) + ")";
        case Kind::BitsArgNotSignal:
            return "$bits argument must be a plain signal";
    }
    return "?";
}

namespace {

struct Binder {
    const std::vector<SignalDefinition>& defs;
    std::vector<BindViolation> out;

    void unknown(const std::string& name) {
        for (const auto& v : out)
            if (v.kind == BindViolation::Kind::UnknownSignal && v.name == name) return;
        out.push_back({BindViolation::Kind::UnknownSignal, name, 0, 0});
    }

    void walk(const Expr& e) {
        switch (e.kind) {
            case Expr::Kind::Num:
                break;
            case Expr::Kind::Ref: {
                if (!find_signal(defs, e.name)) unknown(e.name);
                break;
            }
            case Expr::Kind::Sel: {
                const SignalDefinition* def = find_signal(defs, e.a->name);
                if (!def) {
                    unknown(e.a->name);
                } else if (e.msb >= def->width) {
                    out.push_back({BindViolation::Kind::SelectOutOfRange, e.a->name,
                                   e.msb, def->width});
                }
                break;
            }
            case Expr::Kind::Un:
                walk(*e.a);
                break;
            case Expr::Kind::Bin:
                walk(*e.a);
                walk(*e.b);
                break;
            case Expr::Kind::Call:
                if (e.fn == SysFn::Bits && e.a->kind != Expr::Kind::Ref) {
                    out.push_back({BindViolation::Kind::BitsArgNotSignal, "", 0, 0});
                    break;
                }
                walk(*e.a);
                break;
        }
    }

    void walk_seq(const BoolSeq& seq) {
        for (const auto& it : seq.items) walk(*it.expr);
    }
};

} // namespace

std::vector<BindViolation> bind_signals(const PropertyAst& ast,
                                        const std::vector<SignalDefinition>& defs) {
    Binder b{defs, {}};
    if (!find_signal(defs, ast.clock)) b.unknown(ast.clock);
    if (ast.disable) b.walk(*ast.disable);
    b.walk_seq(ast.lhs);
    if (ast.has_impl) b.walk_seq(ast.rhs);
    return std::move(b.out);
}

std::set<std::string> referenced_signals(const PropertyAst& ast) {
    std::set<std::string> out;
    if (ast.disable) collect_refs(*ast.disable, out);
    for (const auto& it : ast.lhs.items) collect_refs(*it.expr, out);
    if (ast.has_impl)
        for (const auto& it : ast.rhs.items) collect_refs(*it.expr, out);
    return out;
}

static void collect_bits_args(const Expr& e, std::set<std::string>& out) {
    switch (e.kind) {
        case Expr::Kind::Call:
            if (e.fn == SysFn::Bits && e.a->kind == Expr::Kind::Ref) {
                out.insert(e.a->name);
                return;
            }
            collect_bits_args(*e.a, out);
            break;
        case Expr::Kind::Un:
        case Expr::Kind::Sel:
            collect_bits_args(*e.a, out);
            break;
        case Expr::Kind::Bin:
            collect_bits_args(*e.a, out);
            collect_bits_args(*e.b, out);
            break;
        default:
            break;
    }
}

std::set<std::string> bits_arg_signals(const PropertyAst& ast) {
    std::set<std::string> out;
    for (const auto& it : ast.lhs.items) collect_bits_args(*it.expr, out);
    if (ast.has_impl)
        for (const auto& it : ast.rhs.items) collect_bits_args(*it.expr, out);
    return out;
}

} // namespace assertforge::sva
