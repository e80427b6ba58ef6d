// SPDX-License-Identifier: Apache-2.0
#include "lexer.hpp"

#include "assertforge/value.hpp"

#include <cctype>

namespace assertforge::lex {

const char* tok_name(Tok t) {
    switch (t) {
        case Tok::End: return "end of input";
        case Tok::Ident: return "identifier";
        case Tok::Number: return "number";
        case Tok::SysName: return "system function";
        case Tok::LParen: return "'('";
        case Tok::RParen: return "')'";
        case Tok::LBrack: return "'['";
        case Tok::RBrack: return "']'";
        case Tok::LBrace: return "'{'";
        case Tok::RBrace: return "'}'";
        case Tok::Colon: return "':'";
        case Tok::Comma: return "','";
        case Tok::Semi: return "';'";
        case Tok::At: return "'@'";
        case Tok::Hash2: return "'##'";
        case Tok::Dollar: return "'$'";
        case Tok::ImplOverlap: return "'|->'";
        case Tok::ImplNonOverlap: return "'|=>'";
        case Tok::OrOr: return "'||'";
        case Tok::Or: return "'|'";
        case Tok::AndAnd: return "'&&'";
        case Tok::And: return "'&'";
        case Tok::Xor: return "'^'";
        case Tok::Not: return "'!'";
        case Tok::Tilde: return "'~'";
        case Tok::Plus: return "'+'";
        case Tok::Minus: return "'-'";
        case Tok::Shl: return "'<<'";
        case Tok::Shr: return "'>>'";
        case Tok::Lt: return "'<'";
        case Tok::Le: return "'<='";
        case Tok::Gt: return "'>'";
        case Tok::Ge: return "'>='";
        case Tok::EqEq: return "'=='";
        case Tok::NotEq: return "'!='";
        case Tok::Assign: return "'='";
        case Tok::Star: return "'*'";
        case Tok::Question: return "'?'";
        case Tok::Dot: return "'.'";
    }
    return "?";
}

Lexer::Lexer(std::string_view src) : src_(src) {}

void Lexer::advance() {
    if (pos_ >= src_.size()) return;
    if (src_[pos_] == '\n') {
        at_.line++;
        at_.col = 1;
    } else {
        at_.col++;
    }
    pos_++;
}

void Lexer::skip_trivia() {
    for (;;) {
        char c = cur();
        if (c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\f' || c == '\v') {
            advance();
        } else if (c == '/' && look(1) == '/') {
            while (cur() && cur() != '\n') advance();
        } else if (c == '/' && look(1) == '*') {
            advance();
            advance();
            while (cur() && !(cur() == '*' && look(1) == '/')) advance();
            if (!cur()) fail("unterminated block comment");
            advance();
            advance();
        } else {
            return;
        }
    }
}

const Token& Lexer::peek(int ahead) {
    while (static_cast<int>(buf_.size()) <= ahead) buf_.push_back(scan());
    return buf_[static_cast<size_t>(ahead)];
}

Token Lexer::next() {
    peek();
    Token t = buf_.front();
    buf_.erase(buf_.begin());
    return t;
}

bool Lexer::at_ident(std::string_view word) {
    const Token& t = peek();
    return t.kind == Tok::Ident && t.text == word;
}

bool Lexer::accept(Tok t) {
    if (!at(t)) return false;
    next();
    return true;
}

bool Lexer::accept_ident(std::string_view word) {
    if (!at_ident(word)) return false;
    next();
    return true;
}

Token Lexer::expect(Tok t, const std::string& what) {
    if (!at(t)) fail("unexpected " + std::string(tok_name(peek().kind)), {what});
    return next();
}

void Lexer::expect_ident(std::string_view word) {
    if (!at_ident(word))
        fail("unexpected " + std::string(tok_name(peek().kind)),
             {"'" + std::string(word) + "'"});
    next();
}

void Lexer::fail(const std::string& message, std::vector<std::string> expected) const {
    Diagnostic d;
    d.pos = buf_.empty() ? at_ : buf_.front().pos;
    d.message = message;
    d.expected = std::move(expected);
    throw SyntaxError(std::move(d));
}

void Lexer::fail_unsupported(const std::string& message) const {
    Diagnostic d;
    d.pos = buf_.empty() ? at_ : buf_.front().pos;
    d.message = message;
    throw SubsetUnsupported(std::move(d));
}

static int base_digit(char c, int base) {
    int v;
    if (c >= '0' && c <= '9') v = c - '0';
    else if (c >= 'a' && c <= 'f') v = c - 'a' + 10;
    else if (c >= 'A' && c <= 'F') v = c - 'A' + 10;
    else return -1;
    return v < base ? v : -1;
}

Token Lexer::scan_number(bool leading_digits) {
    Token t;
    t.kind = Tok::Number;
    t.pos = at_;

    uint64_t size_prefix = 0;
    bool have_prefix = false;
    if (leading_digits) {
        while (std::isdigit(static_cast<unsigned char>(cur())) || cur() == '_') {
            if (cur() != '_') {
                uint64_t d = static_cast<uint64_t>(cur() - '0');
                if (size_prefix > (UINT64_MAX - d) / 10) {
                    Diagnostic dg{t.pos, "number too large", {}, false};
                    throw SyntaxError(std::move(dg));
                }
                size_prefix = size_prefix * 10 + d;
            }
            advance();
        }
        have_prefix = true;
    }

    if (cur() != '\'') {
        // plain decimal
        t.value = size_prefix;
        t.sized = false;
        t.width = 0;
        return t;
    }
    advance(); // '
    if (cur() == 's' || cur() == 'S') {
        Diagnostic d{t.pos, "signed literals are not supported", {}, false};
        throw SyntaxError(std::move(d));
    }
    int base;
    switch (std::tolower(static_cast<unsigned char>(cur()))) {
        case 'b': base = 2; break;
        case 'o': base = 8; break;
        case 'd': base = 10; break;
        case 'h': base = 16; break;
        default: {
            Diagnostic d{t.pos, "bad literal base", {"'b", "'o", "'d", "'h"}, false};
            throw SyntaxError(std::move(d));
        }
    }
    advance(); // base char

    uint64_t v = 0;
    bool any = false;
    for (;;) {
        char c = cur();
        if (c == '_') {
            advance();
            continue;
        }
        if (c == 'x' || c == 'X' || c == 'z' || c == 'Z') {
            Diagnostic d{t.pos, "four-state literal digits are not supported", {}, false};
            throw SyntaxError(std::move(d));
        }
        int dg = base_digit(c, base);
        if (dg < 0) break;
        if (v > (UINT64_MAX - static_cast<uint64_t>(dg)) / static_cast<uint64_t>(base)) {
            Diagnostic d{t.pos, "number too large", {}, false};
            throw SyntaxError(std::move(d));
        }
        v = v * static_cast<uint64_t>(base) + static_cast<uint64_t>(dg);
        any = true;
        advance();
    }
    if (!any) {
        Diagnostic d{t.pos, "missing digits after literal base", {}, false};
        throw SyntaxError(std::move(d));
    }

    if (have_prefix && size_prefix > 0) {
        if (size_prefix > 64) {
            Diagnostic d{t.pos, "literal width " + std::to_string(size_prefix) +
                                    " exceeds the 64-bit limit",
                         {}, false};
            throw SyntaxError(std::move(d));
        }
        t.sized = true;
        t.width = static_cast<int>(size_prefix);
        t.value = v & Value::mask_of(t.width); // verilog truncation
    } else {
        if (have_prefix && size_prefix == 0) {
            Diagnostic d{t.pos, "zero-width literal", {}, false};
            throw SyntaxError(std::move(d));
        }
        t.sized = false; // 'd10 form: based but unsized
        t.width = 0;
        t.value = v;
    }
    return t;
}

Token Lexer::scan() {
    skip_trivia();
    Token t;
    t.pos = at_;
    char c = cur();
    if (!c) {
        t.kind = Tok::End;
        return t;
    }

    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        t.kind = Tok::Ident;
        while (std::isalnum(static_cast<unsigned char>(cur())) || cur() == '_') {
            t.text.push_back(cur());
            advance();
        }
        return t;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return scan_number(true);
    if (c == '\'') return scan_number(false);

    if (c == '$') {
        if (std::isalpha(static_cast<unsigned char>(look(1))) || look(1) == '_') {
            t.kind = Tok::SysName;
            t.text.push_back('$');
            advance();
            while (std::isalnum(static_cast<unsigned char>(cur())) || cur() == '_') {
                t.text.push_back(cur());
                advance();
            }
            return t;
        }
        t.kind = Tok::Dollar;
        advance();
        return t;
    }

    auto two = [&](char a, char b) { return c == a && look(1) == b; };
    struct Op3 { const char* s; Tok k; };
    if (two('|', '-') && look(2) == '>') { t.kind = Tok::ImplOverlap; advance(); advance(); advance(); return t; }
    if (two('|', '=') && look(2) == '>') { t.kind = Tok::ImplNonOverlap; advance(); advance(); advance(); return t; }
    if (two('#', '#')) { t.kind = Tok::Hash2; advance(); advance(); return t; }
    if (two('|', '|')) { t.kind = Tok::OrOr; advance(); advance(); return t; }
    if (two('&', '&')) { t.kind = Tok::AndAnd; advance(); advance(); return t; }
    if (two('<', '<')) { t.kind = Tok::Shl; advance(); advance(); return t; }
    if (two('>', '>')) { t.kind = Tok::Shr; advance(); advance(); return t; }
    if (two('<', '=')) { t.kind = Tok::Le; advance(); advance(); return t; }
    if (two('>', '=')) { t.kind = Tok::Ge; advance(); advance(); return t; }
    if (two('=', '=')) { t.kind = Tok::EqEq; advance(); advance(); return t; }
    if (two('!', '=')) { t.kind = Tok::NotEq; advance(); advance(); return t; }

    switch (c) {
        case '(': t.kind = Tok::LParen; break;
        case ')': t.kind = Tok::RParen; break;
        case '[': t.kind = Tok::LBrack; break;
        case ']': t.kind = Tok::RBrack; break;
        case '{': t.kind = Tok::LBrace; break;
        case '}': t.kind = Tok::RBrace; break;
        case ':': t.kind = Tok::Colon; break;
        case ',': t.kind = Tok::Comma; break;
        case ';': t.kind = Tok::Semi; break;
        case '@': t.kind = Tok::At; break;
        case '|': t.kind = Tok::Or; break;
        case '&': t.kind = Tok::And; break;
        case '^': t.kind = Tok::Xor; break;
        case '!': t.kind = Tok::Not; break;
        case '~': t.kind = Tok::Tilde; break;
        case '+': t.kind = Tok::Plus; break;
        case '-': t.kind = Tok::Minus; break;
        case '<': t.kind = Tok::Lt; break;
        case '>': t.kind = Tok::Gt; break;
        case '=': t.kind = Tok::Assign; break;
        case '*': t.kind = Tok::Star; break;
        case '?': t.kind = Tok::Question; break;
        case '.': t.kind = Tok::Dot; break;
        default: {
            Diagnostic d{t.pos, std::string("unexpected character '") + c + "'", {}, false};
            throw SyntaxError(std::move(d));
        }
    }
    advance();
    return t;
}

} // namespace assertforge::lex
