// SPDX-License-Identifier: Apache-2.0
#include "assertforge/value.hpp"

#include "assertforge/diag.hpp"

#include <algorithm>

namespace assertforge {

std::string Value::str() const {
    std::string digits;
    for (int i = width - 1; i >= 0; i--) {
        uint64_t m = 1ull << i;
        digits.push_back((xmask & m) ? 'x' : ((bits & m) ? '1' : '0'));
    }
    return std::to_string(width) + "'b" + digits;
}

Tri truth(const Value& v) {
    if (v.is_true()) return Tri::True;
    if (v.is_false()) return Tri::False;
    return Tri::X;
}

Tri tri_not(Tri t) {
    switch (t) {
        case Tri::True: return Tri::False;
        case Tri::False: return Tri::True;
        default: return Tri::X;
    }
}

Tri tri_and(Tri a, Tri b) {
    if (a == Tri::False || b == Tri::False) return Tri::False;
    if (a == Tri::True && b == Tri::True) return Tri::True;
    return Tri::X;
}

Tri tri_or(Tri a, Tri b) {
    if (a == Tri::True || b == Tri::True) return Tri::True;
    if (a == Tri::False && b == Tri::False) return Tri::False;
    return Tri::X;
}

Value from_tri(Tri t) {
    switch (t) {
        case Tri::True: return Value{1, 0, 1};
        case Tri::False: return Value{0, 0, 1};
        default: return Value{0, 1, 1};
    }
}

// Bitwise ops operate at the max operand width; narrower operand zero-extends
// (known zero bits), matching unsigned Verilog context semantics for this subset.
static void align(Value& a, Value& b) {
    int w = std::max(a.width, b.width);
    a = v_resize(a, w);
    b = v_resize(b, w);
}

Value v_resize(const Value& v, int width) {
    Value r;
    r.width = width;
    uint64_t m = Value::mask_of(width);
    r.bits = v.bits & m;
    r.xmask = v.xmask & m;
    if (width > v.width) {
        // zero-extend: new high bits are known 0
    }
    return r;
}

Value v_and(const Value& a0, const Value& b0) {
    Value a = a0, b = b0;
    align(a, b);
    Value r;
    r.width = a.width;
    // result bit unknown unless either side is a known 0
    uint64_t known0_a = ~a.bits & ~a.xmask;
    uint64_t known0_b = ~b.bits & ~b.xmask;
    uint64_t anyx = a.xmask | b.xmask;
    r.xmask = (anyx & ~known0_a & ~known0_b) & Value::mask_of(r.width);
    r.bits = (a.bits & b.bits) & ~r.xmask & Value::mask_of(r.width);
    return r;
}

Value v_or(const Value& a0, const Value& b0) {
    Value a = a0, b = b0;
    align(a, b);
    Value r;
    r.width = a.width;
    uint64_t known1_a = a.bits & ~a.xmask;
    uint64_t known1_b = b.bits & ~b.xmask;
    uint64_t anyx = a.xmask | b.xmask;
    r.xmask = (anyx & ~known1_a & ~known1_b) & Value::mask_of(r.width);
    r.bits = ((a.bits | b.bits) | known1_a | known1_b) & ~r.xmask & Value::mask_of(r.width);
    return r;
}

Value v_xor(const Value& a0, const Value& b0) {
    Value a = a0, b = b0;
    align(a, b);
    Value r;
    r.width = a.width;
    r.xmask = (a.xmask | b.xmask) & Value::mask_of(r.width);
    r.bits = (a.bits ^ b.bits) & ~r.xmask & Value::mask_of(r.width);
    return r;
}

Value v_not(const Value& a) {
    Value r;
    r.width = a.width;
    r.xmask = a.xmask & Value::mask_of(a.width);
    r.bits = ~a.bits & ~r.xmask & Value::mask_of(a.width);
    return r;
}

Value v_add(const Value& a0, const Value& b0) {
    Value a = a0, b = b0;
    align(a, b);
    if (a.xmask || b.xmask) return Value::all_x(a.width);
    Value r;
    r.width = a.width;
    r.bits = (a.bits + b.bits) & Value::mask_of(r.width);
    r.xmask = 0;
    return r;
}

Value v_sub(const Value& a0, const Value& b0) {
    Value a = a0, b = b0;
    align(a, b);
    if (a.xmask || b.xmask) return Value::all_x(a.width);
    Value r;
    r.width = a.width;
    r.bits = (a.bits - b.bits) & Value::mask_of(r.width);
    r.xmask = 0;
    return r;
}

Value v_shl(const Value& a, const Value& sh) {
    if (a.xmask || sh.xmask) return Value::all_x(a.width);
    Value r;
    r.width = a.width;
    uint64_t k = sh.bits;
    r.bits = (k >= 64) ? 0 : (a.bits << k) & Value::mask_of(r.width);
    r.xmask = 0;
    return r;
}

Value v_shr(const Value& a, const Value& sh) {
    if (a.xmask || sh.xmask) return Value::all_x(a.width);
    Value r;
    r.width = a.width;
    uint64_t k = sh.bits;
    r.bits = (k >= 64) ? 0 : (a.bits >> k);
    r.xmask = 0;
    return r;
}

static Value bool_value(Tri t) { return from_tri(t); }

Value v_eq(const Value& a0, const Value& b0) {
    Value a = a0, b = b0;
    align(a, b);
    if (a.xmask || b.xmask) return bool_value(Tri::X);
    return bool_value(a.bits == b.bits ? Tri::True : Tri::False);
}

Value v_ne(const Value& a, const Value& b) { return v_lnot(v_eq(a, b)); }

Value v_lt(const Value& a0, const Value& b0) {
    Value a = a0, b = b0;
    align(a, b);
    if (a.xmask || b.xmask) return bool_value(Tri::X);
    return bool_value(a.bits < b.bits ? Tri::True : Tri::False);
}

Value v_le(const Value& a0, const Value& b0) {
    Value a = a0, b = b0;
    align(a, b);
    if (a.xmask || b.xmask) return bool_value(Tri::X);
    return bool_value(a.bits <= b.bits ? Tri::True : Tri::False);
}

Value v_gt(const Value& a, const Value& b) { return v_lt(b, a); }
Value v_ge(const Value& a, const Value& b) { return v_le(b, a); }

Value v_land(const Value& a, const Value& b) { return bool_value(tri_and(truth(a), truth(b))); }
Value v_lor(const Value& a, const Value& b) { return bool_value(tri_or(truth(a), truth(b))); }
Value v_lnot(const Value& a) { return bool_value(tri_not(truth(a))); }

Value v_select(const Value& v, int msb, int lsb) {
    if (msb < lsb || lsb < 0 || msb >= v.width)
        throw Error("select [" + std::to_string(msb) + ":" + std::to_string(lsb) +
                    "] out of range for width " + std::to_string(v.width));
    Value r;
    r.width = msb - lsb + 1;
    uint64_t m = Value::mask_of(r.width);
    r.bits = (v.bits >> lsb) & m;
    r.xmask = (v.xmask >> lsb) & m;
    return r;
}

} // namespace assertforge
