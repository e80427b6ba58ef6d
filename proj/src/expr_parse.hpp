// SPDX-License-Identifier: Apache-2.0
//
// Internal: the boolean-expression parser shared by the assertion and RTL
// frontends. Precedence climbing over the shared operator table.
#pragma once

#include "assertforge/expr.hpp"
#include "lexer.hpp"

#include <set>
#include <string>

namespace assertforge {

int bin_precedence(BinOp op); // defined in expr.cpp

struct ExprOpts {
    bool allow_syscalls = true;
    // Idents raising SubsetUnsupported at expression position (full-SVA
    // operators like "throughout").
    const std::set<std::string>* unsupported_words = nullptr;
    // Structural keywords raising SyntaxError at expression position.
    const std::set<std::string>* keywords = nullptr;
};

ExprPtr parse_expr(lex::Lexer& lx, const ExprOpts& opts);

} // namespace assertforge
