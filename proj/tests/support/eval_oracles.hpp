// SPDX-License-Identifier: Apache-2.0
//
// Brute-force reference checker for the fixed temporal-property suite.
// Each property is expanded BY HAND into an explicit cycle-indexed boolean
// formula over a fully known bit trace; nothing here touches the engine's
// frontier matcher. Conventions mirrored from the frozen semantics:
//   - a delay window reaching past the last cycle makes the attempt
//     undetermined (bounded traces never produce a false fail);
//   - disable-iff true at any cycle of an attempt aborts it as vacuous;
//   - per trace: fail(earliest start) > undetermined > pass > vacuous.
#pragma once

#include <vector>

namespace eval_oracles {

struct BitTrace {
    std::vector<int> a, b, c;  // one bit per cycle, fully known
    int len() const { return static_cast<int>(a.size()); }
};

enum class R { Fail, Pass, Vac, Undet };

struct OVerdict {
    R r = R::Vac;
    int fail_cycle = -1;
};

// ---- per-attempt formulas (t = attempt start) ----

// 1: a
inline R p1(const BitTrace& tr, int t) { return tr.a[t] ? R::Pass : R::Fail; }

// 2: a |-> b
inline R p2(const BitTrace& tr, int t) {
    if (!tr.a[t]) return R::Vac;
    return tr.b[t] ? R::Pass : R::Fail;
}

// 3: a |-> ##1 b
inline R p3(const BitTrace& tr, int t) {
    if (!tr.a[t]) return R::Vac;
    if (t + 1 >= tr.len()) return R::Undet;
    return tr.b[t + 1] ? R::Pass : R::Fail;
}

// 4: a |=> b  (same window as 3)
inline R p4(const BitTrace& tr, int t) { return p3(tr, t); }

// 5: a ##1 b  (bare sequence: no match and no cut is a fail)
inline R p5(const BitTrace& tr, int t) {
    if (!tr.a[t]) return R::Fail;
    if (t + 1 >= tr.len()) return R::Undet;
    return tr.b[t + 1] ? R::Pass : R::Fail;
}

// 6: $rose(a) |-> ##[1:2] b   ($rose at cycle 0 compares against unknown,
// which is "not known one", so a[0]==1 counts as a rise)
inline R p6(const BitTrace& tr, int t) {
    const bool rose = tr.a[t] == 1 && (t == 0 || tr.a[t - 1] == 0);
    if (!rose) return R::Vac;
    if ((t + 1 < tr.len() && tr.b[t + 1]) || (t + 2 < tr.len() && tr.b[t + 2])) return R::Pass;
    return t + 2 >= tr.len() ? R::Undet : R::Fail;
}

// 7: a |-> ##[0:$] b  (an unbounded window is always horizon-cut)
inline R p7(const BitTrace& tr, int t) {
    if (!tr.a[t]) return R::Vac;
    for (int q = t; q < tr.len(); ++q)
        if (tr.b[q]) return R::Pass;
    return R::Undet;
}

// 8: disable iff (c) a |-> ##1 b
inline R p8(const BitTrace& tr, int t) {
    if (tr.c[t]) return R::Vac;  // aborted at the attempt's first cycle
    if (!tr.a[t]) return R::Vac;
    if (t + 1 >= tr.len()) return R::Undet;
    if (tr.c[t + 1]) return R::Vac;  // aborted before the obligation samples
    return tr.b[t + 1] ? R::Pass : R::Fail;
}

// 9: a ##1 b |-> c
inline R p9(const BitTrace& tr, int t) {
    if (!tr.a[t]) return R::Vac;
    if (t + 1 >= tr.len()) return R::Undet;  // antecedent window cut
    if (!tr.b[t + 1]) return R::Vac;
    return tr.c[t + 1] ? R::Pass : R::Fail;
}

// 10: a |-> b ##2 c  (b false kills the obligation before any cut applies)
inline R p10(const BitTrace& tr, int t) {
    if (!tr.a[t]) return R::Vac;
    if (!tr.b[t]) return R::Fail;
    if (t + 2 >= tr.len()) return R::Undet;
    return tr.c[t + 2] ? R::Pass : R::Fail;
}

inline R attempt(int prop, const BitTrace& tr, int t) {
    switch (prop) {
    case 0: return p1(tr, t);
    case 1: return p2(tr, t);
    case 2: return p3(tr, t);
    case 3: return p4(tr, t);
    case 4: return p5(tr, t);
    case 5: return p6(tr, t);
    case 6: return p7(tr, t);
    case 7: return p8(tr, t);
    case 8: return p9(tr, t);
    default: return p10(tr, t);
    }
}

inline OVerdict check(int prop, const BitTrace& tr) {
    bool undet = false, pass = false;
    for (int t = 0; t < tr.len(); ++t) {
        switch (attempt(prop, tr, t)) {
        case R::Fail: return {R::Fail, t};
        case R::Undet: undet = true; break;
        case R::Pass: pass = true; break;
        case R::Vac: break;
        }
    }
    if (undet) return {R::Undet, -1};
    if (pass) return {R::Pass, -1};
    return {R::Vac, -1};
}

} // namespace eval_oracles
