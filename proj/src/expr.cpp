// SPDX-License-Identifier: Apache-2.0
#include "assertforge/expr.hpp"

#include <sstream>

namespace assertforge {

std::shared_ptr<Expr> Expr::num(uint64_t v, int width, bool sized) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Num;
    e->value = sized ? (v & Value::mask_of(width)) : v;
    e->num_width = width;
    e->sized = sized;
    return e;
}

std::shared_ptr<Expr> Expr::ref(std::string name) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Ref;
    e->name = std::move(name);
    return e;
}

std::shared_ptr<Expr> Expr::sel(ExprPtr base, int msb, int lsb, bool part) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Sel;
    e->a = std::move(base);
    e->msb = msb;
    e->lsb = lsb;
    e->part = part;
    return e;
}

std::shared_ptr<Expr> Expr::unary(UnOp op, ExprPtr x) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Un;
    e->un = op;
    e->a = std::move(x);
    return e;
}

std::shared_ptr<Expr> Expr::binary(BinOp op, ExprPtr l, ExprPtr r) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Bin;
    e->bin = op;
    e->a = std::move(l);
    e->b = std::move(r);
    return e;
}

std::shared_ptr<Expr> Expr::call(SysFn fn, ExprPtr arg, int past_k) {
    auto e = std::make_shared<Expr>();
    e->kind = Kind::Call;
    e->fn = fn;
    e->a = std::move(arg);
    e->past_k = past_k;
    return e;
}

bool equal(const Expr& x, const Expr& y) {
    if (x.kind != y.kind) return false;
    switch (x.kind) {
        case Expr::Kind::Num:
            return x.value == y.value && x.num_width == y.num_width && x.sized == y.sized;
        case Expr::Kind::Ref:
            return x.name == y.name;
        case Expr::Kind::Sel:
            return x.msb == y.msb && x.lsb == y.lsb && x.part == y.part && equal(x.a, y.a);
        case Expr::Kind::Un:
            return x.un == y.un && equal(x.a, y.a);
        case Expr::Kind::Bin:
            return x.bin == y.bin && equal(x.a, y.a) && equal(x.b, y.b);
        case Expr::Kind::Call:
            return x.fn == y.fn && x.past_k == y.past_k && equal(x.a, y.a);
    }
    return false;
}

bool equal(const ExprPtr& x, const ExprPtr& y) {
    if (!x || !y) return !x && !y;
    return equal(*x, *y);
}

const char* to_string(BinOp op) {
    switch (op) {
        case BinOp::Add: return "+";
        case BinOp::Sub: return "-";
        case BinOp::Shl: return "<<";
        case BinOp::Shr: return ">>";
        case BinOp::Lt: return "<";
        case BinOp::Le: return "<=";
        case BinOp::Gt: return ">";
        case BinOp::Ge: return ">=";
        case BinOp::Eq: return "==";
        case BinOp::Ne: return "!=";
        case BinOp::BAnd: return "&";
        case BinOp::BXor: return "^";
        case BinOp::BOr: return "|";
        case BinOp::LAnd: return "&&";
        case BinOp::LOr: return "||";
    }
    return "?";
}

const char* to_string(SysFn fn) {
    switch (fn) {
        case SysFn::Past: return "$past";
        case SysFn::Stable: return "$stable";
        case SysFn::Rose: return "$rose";
        case SysFn::Fell: return "$fell";
        case SysFn::Bits: return "$bits";
        case SysFn::Onehot: return "$onehot";
        case SysFn::Countones: return "$countones";
    }
    return "?";
}

int bin_precedence(BinOp op) {
    switch (op) {
        case BinOp::Add:
        case BinOp::Sub: return 7;
        case BinOp::Shl:
        case BinOp::Shr: return 6;
        case BinOp::Lt:
        case BinOp::Le:
        case BinOp::Gt:
        case BinOp::Ge:
        case BinOp::Eq:
        case BinOp::Ne: return 5;
        case BinOp::BAnd: return 4;
        case BinOp::BXor: return 3;
        case BinOp::BOr: return 2;
        case BinOp::LAnd: return 1;
        case BinOp::LOr: return 0;
    }
    return 0;
}

static int prec_of(const Expr& e) {
    switch (e.kind) {
        case Expr::Kind::Bin: return bin_precedence(e.bin);
        case Expr::Kind::Un: return 90;
        default: return 100; // primaries never need parens
    }
}

static void print_rec(std::ostringstream& out, const Expr& e);

static void print_child(std::ostringstream& out, const Expr& child, bool need_parens) {
    if (need_parens) {
        out << "(";
        print_rec(out, child);
        out << ")";
    } else {
        print_rec(out, child);
    }
}

static void print_rec(std::ostringstream& out, const Expr& e) {
    switch (e.kind) {
        case Expr::Kind::Num:
            if (e.sized) {
                out << e.num_width << "'h" << std::hex << e.value << std::dec;
            } else {
                out << e.value;
            }
            break;
        case Expr::Kind::Ref:
            out << e.name;
            break;
        case Expr::Kind::Sel:
            out << e.a->name << "[";
            if (e.part)
                out << e.msb << ":" << e.lsb;
            else
                out << e.msb;
            out << "]";
            break;
        case Expr::Kind::Un:
            out << (e.un == UnOp::LNot ? "!" : "~");
            print_child(out, *e.a, prec_of(*e.a) < 90);
            break;
        case Expr::Kind::Bin: {
            int p = bin_precedence(e.bin);
            print_child(out, *e.a, prec_of(*e.a) < p);
            out << " " << to_string(e.bin) << " ";
            // left-associative: an equal-precedence right child keeps parens
            print_child(out, *e.b, prec_of(*e.b) <= p);
            break;
        }
        case Expr::Kind::Call:
            out << to_string(e.fn) << "(";
            print_rec(out, *e.a);
            if (e.fn == SysFn::Past && e.past_k != 1) out << ", " << e.past_k;
            out << ")";
            break;
    }
}

std::string print_expr(const Expr& e) {
    std::ostringstream out;
    print_rec(out, e);
    return out.str();
}

void collect_refs(const Expr& e, std::set<std::string>& out) {
    switch (e.kind) {
        case Expr::Kind::Num: break;
        case Expr::Kind::Ref: out.insert(e.name); break;
        case Expr::Kind::Sel: collect_refs(*e.a, out); break;
        case Expr::Kind::Un: collect_refs(*e.a, out); break;
        case Expr::Kind::Bin:
            collect_refs(*e.a, out);
            collect_refs(*e.b, out);
            break;
        case Expr::Kind::Call: collect_refs(*e.a, out); break;
    }
}

static bool lsb_known_one(const Value& v) { return (v.bits & 1) == 1 && (v.xmask & 1) == 0; }
static bool lsb_known_zero(const Value& v) { return (v.bits & 1) == 0 && (v.xmask & 1) == 0; }

static int known_ones(const Value& v) {
    uint64_t k = v.bits & ~v.xmask & Value::mask_of(v.width);
    int n = 0;
    while (k) {
        k &= k - 1;
        n++;
    }
    return n;
}

Value eval_expr(const Expr& e, const EvalCtx& ctx) {
    switch (e.kind) {
        case Expr::Kind::Num:
            return Value::of(e.value, e.sized ? e.num_width : 64);
        case Expr::Kind::Ref:
            return ctx.ref(e.name);
        case Expr::Kind::Sel:
            return v_select(ctx.ref(e.a->name), e.msb, e.lsb);
        case Expr::Kind::Un: {
            Value a = eval_expr(*e.a, ctx);
            return e.un == UnOp::LNot ? v_lnot(a) : v_not(a);
        }
        case Expr::Kind::Bin: {
            Value a = eval_expr(*e.a, ctx);
            Value b = eval_expr(*e.b, ctx);
            switch (e.bin) {
                case BinOp::Add: return v_add(a, b);
                case BinOp::Sub: return v_sub(a, b);
                case BinOp::Shl: return v_shl(a, b);
                case BinOp::Shr: return v_shr(a, b);
                case BinOp::Lt: return v_lt(a, b);
                case BinOp::Le: return v_le(a, b);
                case BinOp::Gt: return v_gt(a, b);
                case BinOp::Ge: return v_ge(a, b);
                case BinOp::Eq: return v_eq(a, b);
                case BinOp::Ne: return v_ne(a, b);
                case BinOp::BAnd: return v_and(a, b);
                case BinOp::BXor: return v_xor(a, b);
                case BinOp::BOr: return v_or(a, b);
                case BinOp::LAnd: return v_land(a, b);
                case BinOp::LOr: return v_lor(a, b);
            }
            throw Error("bad binary op");
        }
        case Expr::Kind::Call: {
            if (e.fn == SysFn::Bits) {
                // bound ASTs guarantee a plain signal argument
                if (e.a->kind != Expr::Kind::Ref)
                    throw Error("$bits argument must be a signal");
                return Value::of(static_cast<uint64_t>(ctx.ref(e.a->name).width), 32);
            }
            if (e.fn == SysFn::Onehot) {
                Value a = eval_expr(*e.a, ctx);
                return Value::scalar(known_ones(a) == 1);
            }
            if (e.fn == SysFn::Countones) {
                Value a = eval_expr(*e.a, ctx);
                return Value::of(static_cast<uint64_t>(known_ones(a)), 32);
            }
            if (!ctx.at) throw Error("temporal system call outside a trace context");
            if (e.fn == SysFn::Past) return ctx.at(*e.a, e.past_k);
            Value cur = eval_expr(*e.a, ctx);
            Value prev = ctx.at(*e.a, 1);
            switch (e.fn) {
                case SysFn::Stable:
                    return Value::scalar(cur.identical(prev));
                case SysFn::Rose:
                    return Value::scalar(lsb_known_one(cur) && !lsb_known_one(prev));
                case SysFn::Fell:
                    return Value::scalar(lsb_known_zero(cur) && !lsb_known_zero(prev));
                default: break;
            }
            throw Error("bad system call");
        }
    }
    throw Error("bad expression node");
}

} // namespace assertforge
