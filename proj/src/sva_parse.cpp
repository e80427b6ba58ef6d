// SPDX-License-Identifier: Apache-2.0
#include "assertforge/sva.hpp"

#include "expr_parse.hpp"
#include "lexer.hpp"

namespace assertforge::sva {

using lex::Lexer;
using lex::Tok;

namespace {

// Full-SVA vocabulary we recognize but do not support. Hitting one of
// these at expression position raises SubsetUnsupported so reports can
// separate "invalid" from "needs a wider subset".
const std::set<std::string>& unsupported_words() {
    static const std::set<std::string> words = {
        "throughout", "intersect", "within", "first_match", "not", "and", "or",
        "until", "s_until", "until_with", "s_until_with", "eventually",
        "s_eventually", "always", "s_always", "nexttime", "s_nexttime",
        "strong", "weak", "accept_on", "reject_on", "sync_accept_on",
        "sync_reject_on", "if", "case", "sequence", "property", "local",
    };
    return words;
}

const std::set<std::string>& structural_keywords() {
    static const std::set<std::string> words = {
        "assert", "assume", "cover", "posedge", "negedge", "disable", "iff",
    };
    return words;
}

constexpr int64_t kMaxDelay = 1000000;

struct PropParser {
    Lexer& lx;
    ExprOpts opts{true, &unsupported_words(), &structural_keywords()};

    int delay_bound() {
        if (!lx.at(Tok::Number) || lx.peek().sized)
            lx.fail("expected delay bound", {"unsized integer"});
        uint64_t v = lx.next().value;
        if (v > static_cast<uint64_t>(kMaxDelay)) lx.fail("delay bound too large");
        return static_cast<int>(v);
    }

    DelayItem parse_delayitem() {
        DelayItem item;
        if (lx.accept(Tok::Hash2)) {
            item.has_delay = true;
            if (lx.accept(Tok::LBrack)) {
                item.lo = delay_bound();
                lx.expect(Tok::Colon, "':'");
                if (lx.accept(Tok::Dollar)) {
                    item.unbounded = true;
                    item.hi = -1;
                } else {
                    item.hi = delay_bound();
                    if (item.lo > item.hi)
                        lx.fail("delay window low bound exceeds high bound");
                }
                lx.expect(Tok::RBrack, "']'");
            } else {
                item.lo = item.hi = delay_bound();
            }
        }
        item.expr = parse_expr(lx, opts);
        return item;
    }

    static bool starts_boolexpr(Tok t) {
        switch (t) {
            case Tok::LParen:
            case Tok::Number:
            case Tok::SysName:
            case Tok::Ident:
            case Tok::Not:
            case Tok::Tilde:
            case Tok::LBrace:
            case Tok::Question:
                return true;
            default:
                return false;
        }
    }

    BoolSeq parse_boolseq() {
        BoolSeq seq;
        seq.items.push_back(parse_delayitem());
        while (lx.at(Tok::Hash2) || starts_boolexpr(lx.peek().kind))
            seq.items.push_back(parse_delayitem());
        return seq;
    }

    PropertyAst parse_assertion() {
        if (lx.at_ident("assume") || lx.at_ident("cover"))
            lx.fail_unsupported("'" + lx.peek().text +
                                "' directives are outside the supported subset");
        if (!lx.accept_ident("assert"))
            lx.fail("expected assertion", {"'assert'"});
        lx.expect_ident("property");
        lx.expect(Tok::LParen, "'('");
        lx.expect(Tok::At, "'@'");
        lx.expect(Tok::LParen, "'('");

        PropertyAst ast;
        if (lx.accept_ident("posedge")) {
            ast.edge = Edge::Pos;
        } else if (lx.accept_ident("negedge")) {
            ast.edge = Edge::Neg;
        } else {
            lx.fail("expected clock edge", {"'posedge'", "'negedge'"});
        }
        if (!lx.at(Tok::Ident)) lx.fail("expected clock signal", {"identifier"});
        ast.clock = lx.next().text;
        if (lx.at_ident("or"))
            lx.fail_unsupported("multiple clocking events are outside the supported subset");
        lx.expect(Tok::RParen, "')'");

        if (lx.accept_ident("disable")) {
            lx.expect_ident("iff");
            lx.expect(Tok::LParen, "'('");
            ast.disable = parse_expr(lx, opts);
            lx.expect(Tok::RParen, "')'");
        }

        ast.lhs = parse_boolseq();
        if (lx.at(Tok::ImplOverlap) || lx.at(Tok::ImplNonOverlap)) {
            ast.has_impl = true;
            ast.overlapped = lx.next().kind == Tok::ImplOverlap;
            ast.rhs = parse_boolseq();
            if (lx.at(Tok::ImplOverlap) || lx.at(Tok::ImplNonOverlap))
                lx.fail_unsupported("nested implication is outside the supported subset");
        }

        lx.expect(Tok::RParen, "')'");
        lx.expect(Tok::Semi, "';'");
        return ast;
    }
};

} // namespace

PropertyAst parse_sva(const std::string& text) {
    Lexer lx(text);
    PropParser p{lx};
    PropertyAst ast = p.parse_assertion();
    if (!lx.at(Tok::End)) lx.fail("trailing input after assertion");
    return ast;
}

std::vector<FileEntry> parse_sva_file(const std::string& text) {
    std::vector<FileEntry> out;
    Lexer lx(text);
    PropParser p{lx};
    for (;;) {
        FileEntry entry;
        bool stop = false;
        try {
            if (lx.at(Tok::End)) break;
            entry.ast = p.parse_assertion();
            entry.text = print_sva(*entry.ast);
        } catch (const SyntaxError& e) {
            entry.diag = e.diag;
            // resynchronize at the next top-level ';'
            try {
                int depth = 0;
                while (!lx.at(Tok::End)) {
                    Tok t = lx.next().kind;
                    if (t == Tok::LParen) depth++;
                    else if (t == Tok::RParen) depth = depth > 0 ? depth - 1 : 0;
                    else if (t == Tok::Semi && depth == 0) break;
                }
            } catch (const SyntaxError&) {
                // lexical garbage while resyncing: give up on the rest
                stop = true;
            }
        }
        out.push_back(std::move(entry));
        if (stop) break;
    }
    return out;
}

bool equal(const DelayItem& x, const DelayItem& y) {
    return x.has_delay == y.has_delay && x.lo == y.lo && x.hi == y.hi &&
           x.unbounded == y.unbounded && assertforge::equal(x.expr, y.expr);
}

bool equal(const BoolSeq& x, const BoolSeq& y) {
    if (x.items.size() != y.items.size()) return false;
    for (size_t i = 0; i < x.items.size(); i++)
        if (!equal(x.items[i], y.items[i])) return false;
    return true;
}

bool equal(const PropertyAst& x, const PropertyAst& y) {
    if (x.edge != y.edge || x.clock != y.clock || x.has_impl != y.has_impl)
        return false;
    if (x.has_impl && x.overlapped != y.overlapped) return false;
    if (!assertforge::equal(x.disable, y.disable)) return false;
    if (!equal(x.lhs, y.lhs)) return false;
    return !x.has_impl || equal(x.rhs, y.rhs);
}

bool has_unbounded_delay(const PropertyAst& ast) {
    auto scan = [](const BoolSeq& s) {
        for (const auto& it : s.items)
            if (it.unbounded) return true;
        return false;
    };
    return scan(ast.lhs) || (ast.has_impl && scan(ast.rhs));
}

} // namespace assertforge::sva
