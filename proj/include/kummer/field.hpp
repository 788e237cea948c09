#pragma once

#include "kummer/errors.hpp"
#include "kummer/numeric.hpp"
#include "kummer/padic.hpp"

namespace kummer {

// Small overload set so the curve templates work over exact rationals and
// over truncated Q_p values alike. "Zero" means exact zero for rationals and
// indistinguishable-from-zero for Q_p.

inline bool field_is_zero(const Rational& x) { return x == 0; }
inline bool field_is_zero(const Qp& x) { return x.is_zero(); }

inline bool field_is_exact_zero(const Rational& x) { return x == 0; }
inline bool field_is_exact_zero(const Qp& x) { return x.is_exact_zero(); }

inline Rational field_inv(const Rational& x) {
    if (x == 0) throw zero_division_error("rational: division by zero");
    return Rational(1) / x;
}
inline Qp field_inv(const Qp& x) { return x.inv(); }

inline Rational field_mul_int(const Rational& x, const BigInt& n) { return x * Rational(n); }
inline Qp field_mul_int(const Qp& x, const BigInt& n) { return x.mul_int(n); }

} // namespace kummer
