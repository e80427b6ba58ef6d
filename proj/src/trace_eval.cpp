// SPDX-License-Identifier: Apache-2.0
//
// Finite-trace property checking. Sequences are matched with a frontier of
// candidate positions; windows that run past the trace end or into a fired
// disable are tracked as cuts so bounded traces can never produce a false
// fail: only a definite mismatch with no surviving or cut path fails.

#include "assertforge/evaluator.hpp"

#include <algorithm>
#include <climits>
#include <set>

namespace assertforge::eval {

namespace {

Value eval_at(const Expr& e, const rtl::Trace& tr, int c) {
    EvalCtx ctx;
    ctx.ref = [&](const std::string& n) { return tr.at(n, c); };
    ctx.at = [&](const Expr& sub, int k) {
        int q = c - k;
        if (q < 0) {
            // Before the trace: unknown, at the expression's structural width.
            return Value::all_x(eval_at(sub, tr, 0).width);
        }
        return eval_at(sub, tr, q);
    };
    return eval_expr(e, ctx);
}

struct Frontier {
    std::set<int> ends;        // positions where the sequence completed
    bool cut_end = false;      // a potential match ran past the trace end
    bool cut_disable = false;  // a potential match was aborted by disable iff
    bool cut_x = false;        // a position evaluated to X
};

// Match `seq` starting at `start`. Positions must lie in [0, lim) where
// lim = min(len, dis_c): dis_c is the first cycle at or after the attempt
// start where the disable condition is definitely true (INT_MAX if never).
Frontier match_seq(const sva::BoolSeq& seq, const rtl::Trace& tr, int start, int len,
                   int dis_c) {
    Frontier f;
    const long lim = std::min((long)len, (long)dis_c);
    const bool disable_first = dis_c < len;  // which barrier a cut path hits
    std::set<int> frontier = {start};
    for (const auto& item : seq.items) {
        const long lo = item.has_delay ? item.lo : 0;
        const long hi = item.unbounded ? (long)INT_MAX : (item.has_delay ? item.hi : 0);
        std::set<int> next;
        for (int p : frontier) {
            if ((long)p + hi >= lim) {
                // The window extends to or past the barrier.
                if (disable_first) f.cut_disable = true;
                else f.cut_end = true;
            }
            const long first = (long)p + lo;
            const long last = std::min((long)p + hi, lim - 1);
            for (long q = first; q <= last; ++q) {
                switch (truth(eval_at(*item.expr, tr, (int)q))) {
                case Tri::True: next.insert((int)q); break;
                case Tri::X: f.cut_x = true; break;
                case Tri::False: break;
                }
            }
        }
        frontier = std::move(next);
        if (frontier.empty()) break;  // cuts already recorded; nothing can extend
    }
    f.ends = std::move(frontier);
    return f;
}

enum class Att { Fail, Pass, Vac, Undet };

Att run_attempt(const sva::PropertyAst& prop, const rtl::Trace& tr, int t, int len) {
    int dis_c = INT_MAX;
    if (prop.disable) {
        for (int c = t; c < len; ++c) {
            if (truth(eval_at(*prop.disable, tr, c)) == Tri::True) {
                dis_c = c;
                break;
            }
        }
    }

    Frontier fa = match_seq(prop.lhs, tr, t, len, dis_c);
    if (!prop.has_impl) {
        if (!fa.ends.empty()) return Att::Pass;
        if (fa.cut_x || fa.cut_end) return Att::Undet;
        if (fa.cut_disable) return Att::Vac;
        return Att::Fail;
    }

    bool undet = fa.cut_x || fa.cut_end;  // an antecedent path may still match
    bool any_pass = false;
    for (int e : fa.ends) {
        const int q = prop.overlapped ? e : e + 1;
        Frontier fc = match_seq(prop.rhs, tr, q, len, dis_c);
        if (!fc.ends.empty()) any_pass = true;
        else if (fc.cut_x || fc.cut_end) undet = true;
        else if (fc.cut_disable) continue;  // obligation aborted: vacuous
        else return Att::Fail;              // obligation definitely unmet
    }
    if (undet) return Att::Undet;
    if (any_pass) return Att::Pass;
    return Att::Vac;  // no antecedent match, or only aborted obligations
}

} // namespace

TraceVerdict eval_on_trace(const sva::PropertyAst& prop, const rtl::Trace& trace) {
    const int len = trace.length;
    bool undet = false, pass = false;
    for (int t = 0; t < len; ++t) {
        switch (run_attempt(prop, trace, t, len)) {
        case Att::Fail: return {Outcome::Fail, t};
        case Att::Undet: undet = true; break;
        case Att::Pass: pass = true; break;
        case Att::Vac: break;
        }
    }
    if (undet) return {Outcome::Undetermined, -1};
    if (pass) return {Outcome::Pass, -1};
    return {Outcome::VacuousPass, -1};
}

} // namespace assertforge::eval
