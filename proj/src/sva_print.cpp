// SPDX-License-Identifier: Apache-2.0
#include "assertforge/sva.hpp"

#include <sstream>

namespace assertforge::sva {

static void print_seq(std::ostringstream& out, const BoolSeq& seq) {
    for (size_t i = 0; i < seq.items.size(); i++) {
        const DelayItem& it = seq.items[i];
        if (i) out << " ";
        if (it.has_delay) {
            if (it.unbounded)
                out << "##[" << it.lo << ":$] ";
            else if (it.lo == it.hi)
                out << "##" << it.lo << " ";
            else
                out << "##[" << it.lo << ":" << it.hi << "] ";
        }
        out << print_expr(*it.expr);
    }
}

std::string print_sva(const PropertyAst& ast) {
    std::ostringstream out;
    out << "assert property (@(" << (ast.edge == Edge::Pos ? "posedge" : "negedge")
        << " " << ast.clock << ") ";
    if (ast.disable) out << "disable iff (" << print_expr(*ast.disable) << ") ";
    print_seq(out, ast.lhs);
    if (ast.has_impl) {
        out << (ast.overlapped ? " |-> " : " |=> ");
        print_seq(out, ast.rhs);
    }
    out << ");";
    return out.str();
}

} // namespace assertforge::sva
