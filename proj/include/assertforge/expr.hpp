// SPDX-License-Identifier: Apache-2.0
//
// Boolean-layer expression AST shared by the assertion frontend and the
// RTL frontend. One operator set, one precedence table:
//
//   selects > unary (!, ~, $-calls) > +,- > <<,>> > comparisons
//           > & > ^ > | > && > ||
//
// Unsized literals evaluate at 64 bits; sized literals at their declared
// width. All arithmetic is unsigned; narrower operands zero-extend.
#pragma once

#include "assertforge/diag.hpp"
#include "assertforge/value.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <set>
#include <string>

namespace assertforge {

enum class UnOp { LNot, BNot };
enum class BinOp { Add, Sub, Shl, Shr, Lt, Le, Gt, Ge, Eq, Ne, BAnd, BXor, BOr, LAnd, LOr };
enum class SysFn { Past, Stable, Rose, Fell, Bits, Onehot, Countones };

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

struct Expr {
    enum class Kind { Num, Ref, Sel, Un, Bin, Call };
    Kind kind;

    // Num
    uint64_t value = 0;
    int num_width = 0;  // 0 when unsized
    bool sized = false;

    // Ref (also Sel base name lives in `a` as a Ref)
    std::string name;

    // Sel
    int msb = 0, lsb = 0;
    bool part = false;  // a[3:3] (part) vs a[3] (bit)

    // Un/Bin use a[,b]; Call arg in a
    UnOp un{};
    BinOp bin{};
    SysFn fn{};
    ExprPtr a, b;
    int past_k = 1;

    SourcePos pos{};

    // Builders return mutable nodes; ExprPtr freezes them at the use site.
    static std::shared_ptr<Expr> num(uint64_t v, int width = 0, bool sized = false);
    static std::shared_ptr<Expr> ref(std::string name);
    static std::shared_ptr<Expr> sel(ExprPtr base, int msb, int lsb, bool part);
    static std::shared_ptr<Expr> unary(UnOp op, ExprPtr e);
    static std::shared_ptr<Expr> binary(BinOp op, ExprPtr l, ExprPtr r);
    static std::shared_ptr<Expr> call(SysFn fn, ExprPtr arg, int past_k = 1);
};

// Structural equality; source positions ignored.
bool equal(const Expr& x, const Expr& y);
bool equal(const ExprPtr& x, const ExprPtr& y);

// Canonical rendering with minimal parentheses per the precedence table.
std::string print_expr(const Expr& e);

// Collect every referenced signal name (select bases included).
void collect_refs(const Expr& e, std::set<std::string>& out);

// Evaluation environment. `ref` yields the current value of a signal at
// its declared width. `at` re-evaluates a subexpression k cycles in the
// past and is required only when temporal system calls may appear; an
// engine without history leaves it empty and any $past/$stable/$rose/$fell
// evaluation throws.
struct EvalCtx {
    std::function<Value(const std::string&)> ref;
    std::function<Value(const Expr&, int)> at;
};

Value eval_expr(const Expr& e, const EvalCtx& ctx);

const char* to_string(BinOp op);
const char* to_string(SysFn fn);

} // namespace assertforge
