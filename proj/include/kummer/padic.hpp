#pragma once

#include "kummer/errors.hpp"
#include "kummer/numeric.hpp"

#include <climits>
#include <string>
#include <vector>

namespace kummer {

// Exact truncated arithmetic in Q_p.
//
// A nonzero value is unit * p^valuation with the unit known modulo p^N
// (N = relative precision), so the value is known modulo p^(valuation+N).
// Addition keeps the minimum absolute precision of its operands;
// multiplication and inversion keep the minimum relative precision.
// Exact zero is a distinguished marker carrying the absolute precision up
// to which the value is known to vanish (infinite for a true zero).
class Qp {
public:
    static constexpr int default_precision = 24;
    static constexpr long long inf_prec = LLONG_MAX;

    Qp() = default;  // exact zero with no prime attached; set via factories

    static Qp zero(long long p);                         // exact zero
    static Qp zero_at(long long p, long long abs_prec);  // 0 + O(p^abs_prec)
    static Qp from_integer(const BigInt& n, long long p, int N = default_precision);
    static Qp from_rational(const BigInt& num, const BigInt& den, long long p,
                            int N = default_precision);
    static Qp from_rational(const Rational& r, long long p, int N = default_precision);
    // unit need not be reduced; it is normalized mod p^N and must be prime to p.
    static Qp from_parts(long long p, long long valuation, const BigInt& unit, int N);

    long long prime() const { return p_; }
    bool is_zero() const { return zero_; }          // indistinguishable from zero
    bool is_exact_zero() const { return zero_ && zero_prec_ == inf_prec; }
    long long valuation() const;                    // throws on the zero marker
    long long abs_precision() const;                // valuation + N, or the zero bound
    int rel_precision() const;
    const BigInt& unit() const;

    Qp operator-() const;
    Qp operator+(const Qp& o) const;
    Qp operator-(const Qp& o) const { return *this + (-o); }
    Qp operator*(const Qp& o) const;
    Qp inv() const;
    Qp operator/(const Qp& o) const { return *this * o.inv(); }

    Qp mul_int(const BigInt& n) const;   // exact integer scalar
    Qp div_int(const BigInt& n) const;

    bool is_square() const;
    Qp sqrt() const;

    // Integer representative of the value mod p^k (requires valuation >= 0
    // and k <= abs_precision).
    BigInt lift_mod(long long k) const;
    // u * p^v as an exact rational: the canonical representative of the
    // truncation.
    Rational rational_representative() const;

    // Lower the absolute precision to `abs_prec` (no-op if already lower).
    Qp truncated_to(long long abs_prec) const;

    std::string to_string() const;   // "num/den + O(p^k)"

private:
    Qp(long long p, bool zero, long long zero_prec, long long v, BigInt unit, int N);
    void normalize();

    long long p_ = 0;
    bool zero_ = true;
    long long zero_prec_ = inf_prec;  // meaningful when zero_
    long long v_ = 0;                 // meaningful when !zero_
    BigInt u_ = 0;                    // in [1, p^N), prime to p, when !zero_
    int n_ = 0;                       // relative precision, >= 1 when !zero_
};

// Coset representative of Q_p^* / Q_p^{*2}.
struct SquareClass {
    long long prime = 0;
    Rational representative;   // small integer representative
    int class_index = 0;       // [0,4) for odd p, [0,8) for p = 2
};

// The 4 classes {1, u, p, up} for odd p (u = smallest non-residue), the 8
// classes {1,-1,2,-2,5,-5,10,-10} for p = 2.
std::vector<SquareClass> square_class_reps(long long p);

// Index into square_class_reps(p) of the class of a nonzero value.
int square_class_index(const Qp& a);

// Dense polynomial over Q_p, low degree first.
struct QpPoly {
    std::vector<Qp> coeff;

    long long prime() const;
    int degree() const;              // highest index with a coefficient distinguishable from 0
    Qp eval(const Qp& x) const;
    QpPoly derivative() const;
};

// All simple roots of f in Z_p liftable by Hensel from residues mod p^j for
// the smallest j at which they separate, each to absolute precision >= N.
// Throws separation_error when candidates do not separate within the budget
// (reported distinctly from "no roots", which returns an empty list).
std::vector<Qp> hensel_roots(const QpPoly& f, int N);

} // namespace kummer
