// SPDX-License-Identifier: Apache-2.0
//
// Internal: hand-rolled lexer shared by the assertion and RTL parsers.
// Tracks line/col, skips // and /* */ comments, longest-match operators.
#pragma once

#include "assertforge/diag.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace assertforge::lex {

enum class Tok {
    End,
    Ident,
    Number,   // value/width/sized in Token
    SysName,  // $ident, text includes the '$'
    LParen,
    RParen,
    LBrack,
    RBrack,
    LBrace,
    RBrace,
    Colon,
    Comma,
    Semi,
    At,
    Hash2,   // ##
    Dollar,  // bare $ (unbounded delay)
    ImplOverlap,
    ImplNonOverlap,
    OrOr,
    Or,
    AndAnd,
    And,
    Xor,
    Not,
    Tilde,
    Plus,
    Minus,
    Shl,
    Shr,
    Lt,
    Le,  // also the nonblocking-assign arrow in RTL statement position
    Gt,
    Ge,
    EqEq,
    NotEq,
    Assign,  // =
    Star,
    Question,
    Dot,
};

struct Token {
    Tok kind = Tok::End;
    std::string text;
    uint64_t value = 0;  // Number
    int width = 0;       // Number: 0 when unsized
    bool sized = false;  // Number
    SourcePos pos;
};

const char* tok_name(Tok t);

class Lexer {
public:
    explicit Lexer(std::string_view src);

    const Token& peek(int ahead = 0);
    Token next();
    bool at(Tok t) { return peek().kind == t; }
    bool at_ident(std::string_view word);
    // Consume if the next token matches; return whether it did.
    bool accept(Tok t);
    bool accept_ident(std::string_view word);
    // Consume or throw SyntaxError listing `what` as expected.
    Token expect(Tok t, const std::string& what);
    void expect_ident(std::string_view word);

    [[noreturn]] void fail(const std::string& message,
                           std::vector<std::string> expected = {}) const;
    [[noreturn]] void fail_unsupported(const std::string& message) const;

    SourcePos here() { return peek().pos; }

private:
    Token scan();
    void skip_trivia();
    char cur() const { return pos_ < src_.size() ? src_[pos_] : '\0'; }
    char look(size_t k) const { return pos_ + k < src_.size() ? src_[pos_ + k] : '\0'; }
    void advance();
    Token scan_number(bool leading_digits);

    std::string src_;
    size_t pos_ = 0;
    SourcePos at_{1, 1};
    std::vector<Token> buf_;
};

} // namespace assertforge::lex
