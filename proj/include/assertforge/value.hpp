// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <string>

namespace assertforge {

// Four-state vector value, up to 64 bits. A bit whose xmask bit is set is
// unknown (X). Z is folded into X on read. Known bits above `width` are
// always zero; values zero-extend when an operator needs a wider operand.
struct Value {
    uint64_t bits = 0;
    uint64_t xmask = 0;
    int width = 1;

    static uint64_t mask_of(int w) { return w >= 64 ? ~0ull : ((1ull << w) - 1); }
    static Value of(uint64_t v, int w) { return Value{v & mask_of(w), 0, w}; }
    static Value all_x(int w) { return Value{0, mask_of(w), w}; }
    static Value scalar(bool b) { return Value{b ? 1ull : 0ull, 0, 1}; }

    bool known() const { return xmask == 0; }
    bool is_true() const { return (bits & ~xmask) != 0; }            // some bit definitely 1
    bool is_false() const { return xmask == 0 && bits == 0; }        // all bits definitely 0
    // Sampled-value identity: same known bits and same X pattern. This is
    // case-equality (===), used by case items and $stable.
    bool identical(const Value& o) const {
        return (bits & ~xmask) == (o.bits & ~o.xmask) && xmask == o.xmask;
    }

    std::string str() const; // e.g. "4'b10x1"
};

enum class Tri { False, True, X };
Tri truth(const Value& v);
Tri tri_not(Tri t);
Tri tri_and(Tri a, Tri b);
Tri tri_or(Tri a, Tri b);
Value from_tri(Tri t);

// All results are width-64 intermediates except where noted; assignment
// masks back to the destination width. X propagation: an X operand poisons
// the result except for the identity-safe bitwise cases (X & 0 = 0,
// X | 1 = 1) and the Kleene logical connectives.
Value v_and(const Value& a, const Value& b);
Value v_or(const Value& a, const Value& b);
Value v_xor(const Value& a, const Value& b);
Value v_not(const Value& a); // bitwise ~, stays at a.width
Value v_add(const Value& a, const Value& b);
Value v_sub(const Value& a, const Value& b);
Value v_shl(const Value& a, const Value& b);
Value v_shr(const Value& a, const Value& b);
Value v_eq(const Value& a, const Value& b);
Value v_ne(const Value& a, const Value& b);
Value v_lt(const Value& a, const Value& b);
Value v_le(const Value& a, const Value& b);
Value v_gt(const Value& a, const Value& b);
Value v_ge(const Value& a, const Value& b);
Value v_land(const Value& a, const Value& b);
Value v_lor(const Value& a, const Value& b);
Value v_lnot(const Value& a);
Value v_select(const Value& a, int msb, int lsb); // part/bit select, width msb-lsb+1
Value v_resize(const Value& a, int w);            // truncate or zero-extend

} // namespace assertforge
