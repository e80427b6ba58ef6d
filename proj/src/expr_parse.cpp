// SPDX-License-Identifier: Apache-2.0
#include "expr_parse.hpp"

namespace assertforge {

using lex::Lexer;
using lex::Tok;

namespace {

constexpr int kMaxDepth = 200;
constexpr uint64_t kMaxPastDepth = 1000000;

struct ExprParser {
    Lexer& lx;
    const ExprOpts& opts;

    [[noreturn]] void too_deep() { lx.fail("expression nesting too deep"); }

    int bin_prec_at() {
        switch (lx.peek().kind) {
            case Tok::Plus:
            case Tok::Minus: return 7;
            case Tok::Shl:
            case Tok::Shr: return 6;
            case Tok::Lt:
            case Tok::Le:
            case Tok::Gt:
            case Tok::Ge:
            case Tok::EqEq:
            case Tok::NotEq: return 5;
            case Tok::And: return 4;
            case Tok::Xor: return 3;
            case Tok::Or: return 2;
            case Tok::AndAnd: return 1;
            case Tok::OrOr: return 0;
            default: return -1;
        }
    }

    BinOp bin_op(Tok t) {
        switch (t) {
            case Tok::Plus: return BinOp::Add;
            case Tok::Minus: return BinOp::Sub;
            case Tok::Shl: return BinOp::Shl;
            case Tok::Shr: return BinOp::Shr;
            case Tok::Lt: return BinOp::Lt;
            case Tok::Le: return BinOp::Le;
            case Tok::Gt: return BinOp::Gt;
            case Tok::Ge: return BinOp::Ge;
            case Tok::EqEq: return BinOp::Eq;
            case Tok::NotEq: return BinOp::Ne;
            case Tok::And: return BinOp::BAnd;
            case Tok::Xor: return BinOp::BXor;
            case Tok::Or: return BinOp::BOr;
            case Tok::AndAnd: return BinOp::LAnd;
            case Tok::OrOr: return BinOp::LOr;
            default: throw Error("not a binary operator token");
        }
    }

    ExprPtr parse(int min_prec, int depth) {
        if (depth > kMaxDepth) too_deep();
        ExprPtr lhs = parse_unary(depth + 1);
        for (;;) {
            int p = bin_prec_at();
            if (p < min_prec) return lhs;
            SourcePos pos = lx.here();
            BinOp op = bin_op(lx.next().kind);
            ExprPtr rhs = parse(p + 1, depth + 1); // left-associative
            auto node = Expr::binary(op, std::move(lhs), std::move(rhs));
            node->pos = pos;
            lhs = std::move(node);
        }
    }

    ExprPtr parse_unary(int depth) {
        if (depth > kMaxDepth) too_deep();
        SourcePos pos = lx.here();
        if (lx.accept(Tok::Not)) {
            auto node = Expr::unary(UnOp::LNot, parse_unary(depth + 1));
            node->pos = pos;
            return node;
        }
        if (lx.accept(Tok::Tilde)) {
            auto node = Expr::unary(UnOp::BNot, parse_unary(depth + 1));
            node->pos = pos;
            return node;
        }
        return parse_primary(depth + 1);
    }

    uint64_t plain_number(const char* what) {
        if (!lx.at(Tok::Number) || lx.peek().sized)
            lx.fail(std::string("expected ") + what, {"unsized integer"});
        return lx.next().value;
    }

    ExprPtr parse_primary(int depth) {
        if (depth > kMaxDepth) too_deep();
        SourcePos pos = lx.here();

        if (lx.accept(Tok::LParen)) {
            ExprPtr e = parse(0, depth + 1);
            lx.expect(Tok::RParen, "')'");
            return e;
        }
        if (lx.at(Tok::Number)) {
            lex::Token t = lx.next();
            auto node = Expr::num(t.value, t.width, t.sized);
            node->pos = pos;
            return node;
        }
        if (lx.at(Tok::SysName)) {
            if (!opts.allow_syscalls)
                lx.fail("system functions are not allowed in RTL expressions");
            return parse_syscall(depth);
        }
        if (lx.at(Tok::Ident)) {
            const std::string& word = lx.peek().text;
            if (opts.unsupported_words && opts.unsupported_words->count(word))
                lx.fail_unsupported("'" + word + "' is outside the supported subset");
            if (opts.keywords && opts.keywords->count(word))
                lx.fail("keyword '" + word + "' cannot start an expression",
                        {"expression"});
            std::string name = lx.next().text;
            auto base = Expr::ref(std::move(name));
            base->pos = pos;
            if (!lx.at(Tok::LBrack)) return base;
            lx.next(); // [
            int msb = static_cast<int>(check_index(plain_number("select index")));
            if (lx.accept(Tok::Colon)) {
                int lsb = static_cast<int>(check_index(plain_number("select index")));
                if (msb < lsb) lx.fail("reversed part select");
                lx.expect(Tok::RBrack, "']'");
                auto node = Expr::sel(std::move(base), msb, lsb, true);
                node->pos = pos;
                return node;
            }
            lx.expect(Tok::RBrack, "']'");
            auto node = Expr::sel(std::move(base), msb, msb, false);
            node->pos = pos;
            return node;
        }
        if (lx.at(Tok::LBrace))
            lx.fail_unsupported("concatenation is outside the supported subset");
        if (lx.at(Tok::Question))
            lx.fail_unsupported("the conditional operator is outside the supported subset");
        lx.fail("unexpected " + std::string(lex::tok_name(lx.peek().kind)),
                {"expression"});
    }

    uint64_t check_index(uint64_t v) {
        if (v > 63) lx.fail("select index exceeds the 64-bit value limit");
        return v;
    }

    ExprPtr parse_syscall(int depth) {
        SourcePos pos = lx.here();
        std::string name = lx.next().text;
        SysFn fn;
        if (name == "$past") fn = SysFn::Past;
        else if (name == "$stable") fn = SysFn::Stable;
        else if (name == "$rose") fn = SysFn::Rose;
        else if (name == "$fell") fn = SysFn::Fell;
        else if (name == "$bits") fn = SysFn::Bits;
        else if (name == "$onehot") fn = SysFn::Onehot;
        else if (name == "$countones") fn = SysFn::Countones;
        else
            lx.fail_unsupported("system function '" + name +
                                "' is outside the supported subset");
        lx.expect(Tok::LParen, "'('");
        ExprPtr arg = parse(0, depth + 1);
        int k = 1;
        if (fn == SysFn::Past && lx.accept(Tok::Comma)) {
            uint64_t v = plain_number("$past depth");
            if (v < 1 || v > kMaxPastDepth) lx.fail("$past depth out of range");
            k = static_cast<int>(v);
        }
        lx.expect(Tok::RParen, "')'");
        auto node = Expr::call(fn, std::move(arg), k);
        node->pos = pos;
        return node;
    }
};

} // namespace

ExprPtr parse_expr(lex::Lexer& lx, const ExprOpts& opts) {
    ExprParser p{lx, opts};
    return p.parse(0, 0);
}

} // namespace assertforge
