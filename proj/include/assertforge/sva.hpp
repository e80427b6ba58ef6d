// SPDX-License-Identifier: Apache-2.0
//
// Assertion frontend for the supported SVA subset.
//
// Grammar (normative):
//   assertion := "assert" "property" "(" clocking [disable] seq ")" ";"
//   clocking  := "@(" ("posedge"|"negedge") ident ")"
//   disable   := "disable" "iff" "(" boolexpr ")"
//   seq       := boolseq [ ("|->"|"|=>") boolseq ]
//   boolseq   := delayitem { delayitem }
//   delayitem := [ "##" (int | "[" int ":" (int|"$") "]") ] boolexpr
//
// "$" as an upper delay bound is accepted and flagged unbounded. Nested
// implication and full-SVA sequence operators (throughout, intersect,
// first_match, ...) raise SubsetUnsupported.
#pragma once

#include "assertforge/diag.hpp"
#include "assertforge/expr.hpp"
#include "assertforge/signal.hpp"

#include <optional>
#include <set>
#include <string>
#include <vector>

namespace assertforge::sva {

enum class Edge { Pos, Neg };

struct DelayItem {
    bool has_delay = false;  // explicit ## prefix
    int lo = 0, hi = 0;
    bool unbounded = false;  // ##[lo:$]
    ExprPtr expr;
};

struct BoolSeq {
    std::vector<DelayItem> items;
};

struct PropertyAst {
    Edge edge = Edge::Pos;
    std::string clock;
    ExprPtr disable;  // null when absent
    BoolSeq lhs;      // antecedent, or the whole body when !has_impl
    bool has_impl = false;
    bool overlapped = true;  // |-> vs |=>
    BoolSeq rhs;
};

bool equal(const DelayItem& x, const DelayItem& y);
bool equal(const BoolSeq& x, const BoolSeq& y);
bool equal(const PropertyAst& x, const PropertyAst& y);

// Throws SyntaxError / SubsetUnsupported. Trailing non-whitespace input
// after the closing ';' is a SyntaxError.
PropertyAst parse_sva(const std::string& text);

// Parse a file of assertions; on error, records the diagnostic and
// resynchronizes at the next top-level ';'.
struct FileEntry {
    std::string text;  // canonical text (empty when the parse failed)
    std::optional<PropertyAst> ast;
    std::optional<Diagnostic> diag;
};
std::vector<FileEntry> parse_sva_file(const std::string& text);

// Canonical pretty-printer: parse(print(ast)) == ast structurally and
// print is a fixed point under a second round-trip. ##[3:3] prints ##3.
std::string print_sva(const PropertyAst& ast);

// Bind-time checks against declared signals. Empty result = bound OK.
struct BindViolation {
    enum class Kind { UnknownSignal, SelectOutOfRange, BitsArgNotSignal };
    Kind kind;
    std::string name;
    int index = 0;  // offending msb for SelectOutOfRange
    int width = 0;  // declared width for SelectOutOfRange
    std::string str() const;
};
std::vector<BindViolation> bind_signals(const PropertyAst& ast,
                                        const std::vector<SignalDefinition>& defs);

// Signal names referenced by body + disable (clocking signal excluded).
std::set<std::string> referenced_signals(const PropertyAst& ast);

// Signal names appearing as $bits arguments.
std::set<std::string> bits_arg_signals(const PropertyAst& ast);

// True iff any delay window uses the "$" upper bound.
bool has_unbounded_delay(const PropertyAst& ast);

} // namespace assertforge::sva
