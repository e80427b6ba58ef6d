// SPDX-License-Identifier: Apache-2.0
#include "assertforge/rtl.hpp"

#include "expr_parse.hpp"
#include "lexer.hpp"

#include <algorithm>
#include <functional>

namespace assertforge::rtl {
namespace {

using lex::Lexer;
using lex::Tok;

const std::set<std::string>& rtl_keywords() {
    static const std::set<std::string> kw = {
        "module", "endmodule", "input",  "output", "inout",   "wire",
        "reg",    "assign",    "always", "begin",  "end",     "if",
        "else",   "case",      "endcase", "default", "posedge", "negedge",
        "or",
    };
    return kw;
}

// Legal-Verilog constructs outside the subset, reported by name.
const std::set<std::string>& unsupported_items() {
    static const std::set<std::string> kw = {
        "initial",   "generate", "genvar",  "parameter", "localparam",
        "integer",   "real",     "time",    "function",  "task",
        "casez",     "casex",    "defparam", "specify",   "tri",
        "supply0",   "supply1",  "event",   "fork",      "forever",
        "repeat",    "while",    "for",     "wait",      "deassign",
        "force",     "release",  "primitive", "table",
    };
    return kw;
}

struct DeclInfo {
    SignalKind kind = SignalKind::Wire;
    bool is_port = false;
    bool is_reg = false;
    bool has_width = false;
    int width = 1;
    int order = 0;  // declaration order for the signals vector
    SourcePos pos{};
};

class Parser {
public:
    explicit Parser(const std::string& text) : lx_(text) {}

    RtlDesign run() {
        lx_.expect_ident("module");
        d_.name = lx_.expect(Tok::Ident, "module name").text;
        parse_port_list();
        lx_.expect(Tok::Semi, ";");
        while (!lx_.accept_ident("endmodule")) parse_item();
        if (!lx_.at(Tok::End))
            lx_.fail("unexpected input after endmodule");
        finalize();
        return std::move(d_);
    }

private:
    Lexer lx_;
    RtlDesign d_;
    std::vector<std::string> port_order_;
    std::map<std::string, DeclInfo> decls_;
    int order_counter_ = 0;

    ExprOpts expr_opts() const {
        return ExprOpts{/*allow_syscalls=*/false, nullptr, &rtl_keywords()};
    }

    ExprPtr parse_rhs() { return parse_expr(lx_, expr_opts()); }

    [[noreturn]] void fail_at(SourcePos p, const std::string& msg) {
        Diagnostic diag;
        diag.pos = p;
        diag.message = msg;
        throw SyntaxError(diag);
    }

    static bool is_direction(const std::string& w) {
        return w == "input" || w == "output" || w == "inout";
    }

    // ---- declarations ----

    int parse_range() {  // consumes "[msb:lsb]", returns width
        SourcePos p = lx_.here();
        lx_.expect(Tok::LBrack, "[");
        lex::Token msb = lx_.expect(Tok::Number, "range msb");
        if (msb.sized) fail_at(msb.pos, "range bounds must be plain integers");
        lx_.expect(Tok::Colon, ":");
        lex::Token lsb = lx_.expect(Tok::Number, "range lsb");
        if (lsb.sized) fail_at(lsb.pos, "range bounds must be plain integers");
        lx_.expect(Tok::RBrack, "]");
        if (lsb.value != 0)
            throw UnsupportedConstruct(p, "range with non-zero base");
        if (msb.value > 63)
            throw UnsupportedConstruct(p, "signal wider than 64 bits");
        return static_cast<int>(msb.value) + 1;
    }

    std::pair<DeclInfo*, bool> declare(const std::string& name, SourcePos pos) {
        auto [it, inserted] = decls_.try_emplace(name);
        if (inserted) {
            it->second.order = order_counter_++;
            it->second.pos = pos;
        }
        return {&it->second, inserted};
    }

    void add_port_decl(const std::string& name, SignalKind dir, bool is_reg,
                       bool has_width, int width, SourcePos pos) {
        auto [infop, inserted] = declare(name, pos);
        DeclInfo& info = *infop;
        if (!inserted && info.is_port)
            fail_at(pos, "duplicate direction for port " + name);
        if (!inserted && !info.is_port)
            fail_at(pos, "duplicate declaration of " + name);
        info.is_port = true;
        info.kind = dir;
        if (is_reg) {
            if (dir == SignalKind::Input)
                fail_at(pos, "input port " + name + " cannot be a reg");
            info.is_reg = true;
        }
        merge_width(info, name, has_width, width, pos);
    }

    void merge_width(DeclInfo& info, const std::string& name, bool has_width,
                     int width, SourcePos pos) {
        if (!has_width) return;
        if (info.has_width && info.width != width)
            fail_at(pos, "conflicting widths for " + name);
        info.has_width = true;
        info.width = width;
    }

    void parse_port_list() {
        lx_.expect(Tok::LParen, "(");
        if (lx_.accept(Tok::RParen)) return;
        if (is_direction(lx_.peek().text)) {
            parse_ansi_ports();
        } else {
            for (;;) {
                lex::Token t = lx_.expect(Tok::Ident, "port name");
                if (rtl_keywords().count(t.text))
                    fail_at(t.pos, "expected port name");
                if (std::count(port_order_.begin(), port_order_.end(), t.text))
                    fail_at(t.pos, "duplicate port " + t.text);
                port_order_.push_back(t.text);
                if (!lx_.accept(Tok::Comma)) break;
            }
            lx_.expect(Tok::RParen, ")");
        }
    }

    void parse_ansi_ports() {
        SignalKind dir = SignalKind::Input;
        bool is_reg = false;
        bool has_width = false;
        int width = 1;
        for (;;) {
            if (is_direction(lx_.peek().text)) {
                std::string w = lx_.next().text;
                dir = w == "input"    ? SignalKind::Input
                      : w == "output" ? SignalKind::Output
                                      : SignalKind::Inout;
                is_reg = lx_.accept_ident("reg");
                has_width = lx_.at(Tok::LBrack);
                width = has_width ? parse_range() : 1;
            }
            lex::Token t = lx_.expect(Tok::Ident, "port name");
            if (rtl_keywords().count(t.text)) fail_at(t.pos, "expected port name");
            if (std::count(port_order_.begin(), port_order_.end(), t.text))
                fail_at(t.pos, "duplicate port " + t.text);
            port_order_.push_back(t.text);
            add_port_decl(t.text, dir, is_reg, has_width, width, t.pos);
            if (!lx_.accept(Tok::Comma)) break;
        }
        lx_.expect(Tok::RParen, ")");
    }

    void parse_direction_decl(const std::string& dirword) {
        SignalKind dir = dirword == "input"    ? SignalKind::Input
                         : dirword == "output" ? SignalKind::Output
                                               : SignalKind::Inout;
        bool is_reg = lx_.accept_ident("reg");
        bool has_width = lx_.at(Tok::LBrack);
        int width = has_width ? parse_range() : 1;
        for (;;) {
            lex::Token t = lx_.expect(Tok::Ident, "port name");
            if (!std::count(port_order_.begin(), port_order_.end(), t.text))
                fail_at(t.pos, t.text + " is not in the module port list");
            add_port_decl(t.text, dir, is_reg, has_width, width, t.pos);
            if (!lx_.accept(Tok::Comma)) break;
        }
        lx_.expect(Tok::Semi, ";");
    }

    void parse_net_decl(bool is_reg) {
        bool has_width = lx_.at(Tok::LBrack);
        int width = has_width ? parse_range() : 1;
        for (;;) {
            lex::Token t = lx_.expect(Tok::Ident, "signal name");
            if (rtl_keywords().count(t.text)) fail_at(t.pos, "expected signal name");
            auto [infop, inserted] = declare(t.text, t.pos);
            DeclInfo& info = *infop;
            if (inserted) {
                info.kind = is_reg ? SignalKind::Reg : SignalKind::Wire;
                info.is_reg = is_reg;
            } else if (info.is_port && is_reg && !info.is_reg) {
                // "output q; reg q;" refines storage on the port.
                if (info.kind == SignalKind::Input)
                    fail_at(t.pos, "input port " + t.text + " cannot be a reg");
                info.is_reg = true;
            } else {
                fail_at(t.pos, "duplicate declaration of " + t.text);
            }
            merge_width(info, t.text, has_width, width, t.pos);
            if (!lx_.accept(Tok::Comma)) break;
        }
        lx_.expect(Tok::Semi, ";");
    }

    // ---- module items ----

    void parse_item() {
        if (lx_.at(Tok::End)) lx_.fail("missing endmodule");
        lex::Token head = lx_.peek();
        if (head.kind != Tok::Ident) lx_.fail("expected a module item");
        const std::string& w = head.text;
        if (unsupported_items().count(w)) throw UnsupportedConstruct(head.pos, w);
        if (is_direction(w)) {
            lx_.next();
            parse_direction_decl(w);
        } else if (w == "wire" || w == "reg") {
            lx_.next();
            parse_net_decl(w == "reg");
        } else if (w == "assign") {
            lx_.next();
            parse_continuous_assign();
        } else if (w == "always") {
            lx_.next();
            parse_always();
        } else if (!rtl_keywords().count(w) && lx_.peek(1).kind == Tok::Ident) {
            throw UnsupportedConstruct(head.pos, "module instantiation");
        } else {
            lx_.fail("expected a module item",
                     {"wire", "reg", "assign", "always", "endmodule"});
        }
    }

    void parse_continuous_assign() {
        lex::Token t = lx_.expect(Tok::Ident, "assignment target");
        if (rtl_keywords().count(t.text)) fail_at(t.pos, "expected assignment target");
        if (lx_.at(Tok::LBrack))
            throw UnsupportedConstruct(lx_.here(), "assignment to a bit-select");
        lx_.expect(Tok::Assign, "=");
        ContinuousAssign ca;
        ca.lhs = t.text;
        ca.pos = t.pos;
        ca.rhs = parse_rhs();
        lx_.expect(Tok::Semi, ";");
        d_.continuous_assigns.push_back(std::move(ca));
    }

    void parse_always() {
        Process proc;
        proc.pos = lx_.here();
        lx_.expect(Tok::At, "@");
        if (lx_.accept(Tok::Star)) {
            proc.trigger.combinational = true;
        } else {
            lx_.expect(Tok::LParen, "(");
            if (lx_.accept(Tok::Star)) {
                proc.trigger.combinational = true;
            } else {
                parse_edge_list(proc.trigger);
            }
            lx_.expect(Tok::RParen, ")");
        }
        proc.body = parse_stmt(!proc.trigger.combinational, 0);
        check_discipline(proc);
        collect_assigned(proc.body, proc.assigned);
        d_.processes.push_back(std::move(proc));
    }

    void parse_edge_list(Trigger& trig) {
        SourcePos p = lx_.here();
        if (!lx_.at_ident("posedge") && !lx_.at_ident("negedge"))
            throw UnsupportedConstruct(p, "level-sensitive event list");
        trig.clock_edge = lx_.accept_ident("posedge") ? sva::Edge::Pos
                                                      : (lx_.expect_ident("negedge"), sva::Edge::Neg);
        trig.clock = lx_.expect(Tok::Ident, "clock signal").text;
        if (lx_.accept_ident("or")) {
            SourcePos rp = lx_.here();
            if (!lx_.at_ident("posedge") && !lx_.at_ident("negedge"))
                throw UnsupportedConstruct(rp, "level-sensitive event list");
            trig.has_reset = true;
            trig.reset_edge = lx_.accept_ident("posedge")
                                  ? sva::Edge::Pos
                                  : (lx_.expect_ident("negedge"), sva::Edge::Neg);
            trig.reset = lx_.expect(Tok::Ident, "reset signal").text;
            if (lx_.at_ident("or"))
                throw UnsupportedConstruct(lx_.here(),
                                           "event list with more than two edges");
        }
    }

    static const int kMaxStmtDepth = 200;

    StmtPtr parse_stmt(bool clocked, int depth) {
        if (depth > kMaxStmtDepth) lx_.fail("statement nesting too deep");
        auto node = std::make_shared<Stmt>();
        node->pos = lx_.here();
        if (lx_.accept_ident("begin")) {
            node->kind = Stmt::Kind::Block;
            while (!lx_.accept_ident("end"))
                node->stmts.push_back(parse_stmt(clocked, depth + 1));
            return node;
        }
        if (lx_.accept_ident("if")) {
            node->kind = Stmt::Kind::If;
            lx_.expect(Tok::LParen, "(");
            node->cond = parse_rhs();
            lx_.expect(Tok::RParen, ")");
            node->then_s = parse_stmt(clocked, depth + 1);
            if (lx_.accept_ident("else")) node->else_s = parse_stmt(clocked, depth + 1);
            return node;
        }
        if (lx_.accept_ident("case")) {
            node->kind = Stmt::Kind::Case;
            lx_.expect(Tok::LParen, "(");
            node->sel = parse_rhs();
            lx_.expect(Tok::RParen, ")");
            bool saw_default = false;
            while (!lx_.accept_ident("endcase")) {
                if (lx_.at(Tok::End)) lx_.fail("missing endcase");
                CaseItem item;
                if (lx_.accept_ident("default")) {
                    if (saw_default) fail_at(node->pos, "multiple default items");
                    saw_default = true;
                    item.is_default = true;
                    lx_.accept(Tok::Colon);
                } else {
                    for (;;) {
                        lex::Token n = lx_.expect(Tok::Number, "case label");
                        auto label = Expr::num(n.value, n.width, n.sized);
                        label->pos = n.pos;
                        item.labels.push_back(label);
                        if (!lx_.accept(Tok::Comma)) break;
                    }
                    lx_.expect(Tok::Colon, ":");
                }
                item.body = parse_stmt(clocked, depth + 1);
                node->items.push_back(std::move(item));
            }
            if (node->items.empty()) fail_at(node->pos, "empty case statement");
            return node;
        }
        if (lx_.at(Tok::Ident) && unsupported_items().count(lx_.peek().text))
            throw UnsupportedConstruct(lx_.here(), lx_.peek().text);
        // assignment
        lex::Token t = lx_.expect(Tok::Ident, "assignment target");
        if (rtl_keywords().count(t.text))
            lx_.fail("expected a statement", {"begin", "if", "case", "<identifier>"});
        if (lx_.at(Tok::LBrack))
            throw UnsupportedConstruct(lx_.here(), "assignment to a bit-select");
        node->kind = Stmt::Kind::Assign;
        node->lhs = t.text;
        node->pos = t.pos;
        if (lx_.accept(Tok::Le)) {
            node->nonblocking = true;
        } else {
            lx_.expect(Tok::Assign, "= or <=");
        }
        node->rhs = parse_rhs();
        lx_.expect(Tok::Semi, ";");
        return node;
    }

    void check_discipline(const Process& proc) {
        bool clocked = !proc.trigger.combinational;
        walk_stmts(proc.body, [&](const Stmt& s) {
            if (s.kind != Stmt::Kind::Assign) return;
            if (clocked && !s.nonblocking)
                throw MixedAssignDiscipline(s.pos,
                                            "blocking assignment in a clocked process");
            if (!clocked && s.nonblocking)
                throw MixedAssignDiscipline(
                    s.pos, "nonblocking assignment in a combinational process");
        });
    }

    static void walk_stmts(const StmtPtr& s, const std::function<void(const Stmt&)>& fn) {
        if (!s) return;
        fn(*s);
        for (const auto& sub : s->stmts) walk_stmts(sub, fn);
        walk_stmts(s->then_s, fn);
        walk_stmts(s->else_s, fn);
        for (const auto& item : s->items) walk_stmts(item.body, fn);
    }

    static void collect_assigned(const StmtPtr& s, std::set<std::string>& out) {
        walk_stmts(s, [&](const Stmt& st) {
            if (st.kind == Stmt::Kind::Assign) out.insert(st.lhs);
        });
    }

    // ---- post-parse validation ----

    void finalize() {
        for (const auto& name : port_order_) {
            auto it = decls_.find(name);
            if (it == decls_.end() || !it->second.is_port) {
                Diagnostic diag;
                diag.message = "port " + name + " has no direction declaration";
                throw SyntaxError(diag);
            }
        }
        std::vector<std::pair<int, std::string>> ordered;
        for (const auto& [name, info] : decls_) ordered.push_back({info.order, name});
        std::sort(ordered.begin(), ordered.end());
        for (const auto& [order, name] : ordered) {
            (void)order;
            const DeclInfo& info = decls_.at(name);
            SignalDefinition sig;
            sig.name = name;
            sig.width = info.width;
            sig.kind = info.is_port ? info.kind
                                    : (info.is_reg ? SignalKind::Reg : SignalKind::Wire);
            sig.hierarchy = info.is_port ? Hierarchy::IoPort : Hierarchy::Internal;
            d_.signals.push_back(std::move(sig));
            if (info.is_reg) d_.regs.insert(name);
        }
        check_refs();
        check_drivers();
    }

    const DeclInfo* lookup(const std::string& name) const {
        auto it = decls_.find(name);
        return it == decls_.end() ? nullptr : &it->second;
    }

    void require_declared(const ExprPtr& e) {
        if (!e) return;
        walk_expr(*e);
    }

    void walk_expr(const Expr& e) {
        switch (e.kind) {
        case Expr::Kind::Ref: {
            const DeclInfo* info = lookup(e.name);
            if (!info) fail_at(e.pos, "undeclared signal " + e.name);
            break;
        }
        case Expr::Kind::Sel: {
            const std::string& base = e.a->name;
            const DeclInfo* info = lookup(base);
            if (!info) fail_at(e.pos, "undeclared signal " + base);
            if (e.msb >= info->width)
                fail_at(e.pos, "select out of range for " + base);
            return;  // the base Ref is already checked
        }
        default: break;
        }
        if (e.a) walk_expr(*e.a);
        if (e.b) walk_expr(*e.b);
    }

    void check_stmt_refs(const StmtPtr& s) {
        walk_stmts(s, [&](const Stmt& st) {
            switch (st.kind) {
            case Stmt::Kind::Assign: {
                const DeclInfo* info = lookup(st.lhs);
                if (!info) fail_at(st.pos, "undeclared signal " + st.lhs);
                if (info->kind == SignalKind::Input)
                    fail_at(st.pos, "assignment to input port " + st.lhs);
                if (!info->is_reg)
                    fail_at(st.pos, "procedural assignment to non-reg " + st.lhs);
                require_declared(st.rhs);
                break;
            }
            case Stmt::Kind::If:
                require_declared(st.cond);
                break;
            case Stmt::Kind::Case:
                require_declared(st.sel);
                break;
            default: break;
            }
        });
    }

    void check_refs() {
        for (const auto& ca : d_.continuous_assigns) {
            const DeclInfo* info = lookup(ca.lhs);
            if (!info) fail_at(ca.pos, "undeclared signal " + ca.lhs);
            if (info->kind == SignalKind::Input)
                fail_at(ca.pos, "assignment to input port " + ca.lhs);
            if (info->is_reg)
                fail_at(ca.pos, "continuous assignment to reg " + ca.lhs);
            require_declared(ca.rhs);
        }
        for (const auto& proc : d_.processes) {
            if (!proc.trigger.combinational) {
                if (!lookup(proc.trigger.clock))
                    fail_at(proc.pos, "undeclared signal " + proc.trigger.clock);
                if (proc.trigger.has_reset && !lookup(proc.trigger.reset))
                    fail_at(proc.pos, "undeclared signal " + proc.trigger.reset);
            }
            check_stmt_refs(proc.body);
        }
    }

    void check_drivers() {
        std::map<std::string, int> driver_count;
        for (const auto& ca : d_.continuous_assigns) driver_count[ca.lhs]++;
        for (const auto& proc : d_.processes)
            for (const auto& name : proc.assigned) driver_count[name]++;
        for (const auto& sig : d_.signals)
            if (driver_count[sig.name] > 1) throw MultipleDrivers(sig.name);
    }
};

} // namespace

int RtlDesign::width_of(const std::string& n) const {
    const SignalDefinition* sig = find(n);
    return sig ? sig->width : 0;
}

std::vector<std::string> RtlDesign::input_names() const {
    std::vector<std::string> out;
    for (const auto& sig : signals)
        if (sig.kind == SignalKind::Input || sig.kind == SignalKind::Inout)
            out.push_back(sig.name);
    return out;
}

RtlDesign parse_verilog(const std::string& text) {
    Parser p(text);
    return p.run();
}

int expr_width(const Expr& e, const RtlDesign& design) {
    switch (e.kind) {
    case Expr::Kind::Num:
        return e.sized ? e.num_width : 64;
    case Expr::Kind::Ref: {
        int w = design.width_of(e.name);
        return w > 0 ? w : 1;
    }
    case Expr::Kind::Sel:
        return e.part ? e.msb - e.lsb + 1 : 1;
    case Expr::Kind::Un:
        return e.un == UnOp::LNot ? 1 : expr_width(*e.a, design);
    case Expr::Kind::Bin:
        switch (e.bin) {
        case BinOp::Lt: case BinOp::Le: case BinOp::Gt: case BinOp::Ge:
        case BinOp::Eq: case BinOp::Ne: case BinOp::LAnd: case BinOp::LOr:
            return 1;
        case BinOp::Shl: case BinOp::Shr:
            return expr_width(*e.a, design);
        default:
            return std::max(expr_width(*e.a, design), expr_width(*e.b, design));
        }
    case Expr::Kind::Call:
        switch (e.fn) {
        case SysFn::Past: return expr_width(*e.a, design);
        case SysFn::Bits: case SysFn::Countones: return 32;
        default: return 1;
        }
    }
    return 1;
}

} // namespace assertforge::rtl
