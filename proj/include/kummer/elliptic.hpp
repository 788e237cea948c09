#pragma once

#include "kummer/errors.hpp"
#include "kummer/field.hpp"
#include "kummer/numeric.hpp"
#include "kummer/padic.hpp"

#include <vector>

namespace kummer {

// Short Weierstrass curve y^2 = x^3 + ax + b over Q or Q_p.
// `one` is the field constant 1 at working precision; it carries the base
// field context (prime and precision for Q_p) even when a or b is zero.
template <class F>
struct Curve {
    F a, b;
    F one;
    F discriminant;   // -16(4a^3 + 27b^2), certified nonzero at construction
    F j_invariant;    // 6912 a^3 / (4a^3 + 27b^2)

    F f_of(const F& x) const { return (x * x + a) * x + b; }  // x^3 + ax + b
};

template <class F>
struct Point {
    bool inf = true;
    F x{}, y{};

    static Point infinity() { return Point{}; }
    static Point affine(F px, F py) { return Point{false, std::move(px), std::move(py)}; }
};

template <class F>
Curve<F> curve_new(const F& a, const F& b, const F& one) {
    F four_a3 = field_mul_int(a * a * a, 4);
    F core = four_a3 + field_mul_int(b * b, 27);
    if (field_is_zero(core))
        throw domain_error("curve_new: singular curve (discriminant zero at precision)");
    Curve<F> E{a, b, one, field_mul_int(core, -16), field_mul_int(a * a * a, 6912) * field_inv(core)};
    return E;
}

inline Curve<Rational> curve_q(const Rational& a, const Rational& b) {
    return curve_new<Rational>(a, b, Rational(1));
}

inline Curve<Qp> curve_qp(const Rational& a, const Rational& b, long long p,
                          int N = Qp::default_precision) {
    return curve_new<Qp>(Qp::from_rational(a, p, N), Qp::from_rational(b, p, N),
                         Qp::from_integer(1, p, N));
}

template <class F>
bool on_curve(const Curve<F>& E, const Point<F>& P) {
    if (P.inf) return true;
    return field_is_zero(P.y * P.y - E.f_of(P.x));
}

template <class F>
Point<F> point_neg(const Curve<F>&, const Point<F>& P) {
    if (P.inf) return P;
    return Point<F>::affine(P.x, -P.y);
}

template <class F>
Point<F> point_add(const Curve<F>& E, const Point<F>& P, const Point<F>& Q) {
    if (P.inf) return Q;
    if (Q.inf) return P;
    F lambda = E.one;
    if (field_is_zero(P.x - Q.x)) {
        if (field_is_zero(P.y + Q.y)) return Point<F>::infinity();
        if (!field_is_zero(P.y - Q.y))
            throw precision_error("point_add: equal x but incoherent y at precision");
        // Tangent; P.y + Q.y nonzero guarantees the slope denominator.
        F num = field_mul_int(P.x * P.x, 3) + E.a;
        lambda = num * field_inv(field_mul_int(P.y, 2));
    } else {
        lambda = (Q.y - P.y) * field_inv(Q.x - P.x);
    }
    F x3 = lambda * lambda - P.x - Q.x;
    F y3 = lambda * (P.x - x3) - P.y;
    return Point<F>::affine(x3, y3);
}

template <class F>
Point<F> scalar_mul(const Curve<F>& E, const BigInt& n, const Point<F>& P) {
    BigInt k = n;
    Point<F> base = P;
    if (k < 0) {
        k = -k;
        base = point_neg(E, base);
    }
    Point<F> acc = Point<F>::infinity();
    while (k > 0) {
        if (k % 2 == 1) acc = point_add(E, acc, base);
        k /= 2;
        if (k > 0) base = point_add(E, base, base);
    }
    return acc;
}

// Short-form model of the quadratic twist cy^2 = f(x): y^2 = x^3 + c^2 a x + c^3 b.
template <class F>
Curve<F> quadratic_twist(const Curve<F>& E, const F& c) {
    if (field_is_zero(c)) throw domain_error("quadratic_twist: c = 0");
    return curve_new<F>(c * c * E.a, c * c * c * E.b, E.one);
}

// P in the complement of E[2]: neither O nor a point with y = 0. A y only
// known to vanish at precision is rejected with an error, never guessed.
template <class F>
bool is_in_E0(const Curve<F>&, const Point<F>& P) {
    if (P.inf) return false;
    if (field_is_exact_zero(P.y)) return false;
    if (field_is_zero(P.y))
        throw precision_error("is_in_E0: y indistinguishable from zero at precision");
    return true;
}

// Square root of d/c with the branch chosen via the square-class splitting
// x = rep * s^2, so that transporting c -> d and back multiplies y by exactly 1.
Qp transport_alpha(const Qp& c, const Qp& d);

// Map (x, y) on the model cy^2 = f(x) to the model dy^2 = f(x); requires d/c
// to be a p-adic square. Group isomorphism and homeomorphism on Q_p-points.
Point<Qp> twist_transport(const Point<Qp>& P, const Qp& c, const Qp& d);

// Division polynomial in x alone, for n in [2, 9]: psi_n for odd n, psi_n^2
// for even n (so psi_2^2 = 4f), making the roots exactly the x-coordinates
// of nontrivial n-torsion.
template <class F>
std::vector<F> division_polynomial(const Curve<F>& E, int n);

// True iff E(Q_p) has a point of exact order l, l in {2,3,5,7}: some Q_p-root
// x of the l-division polynomial with f(x) a square (for l = 2, a root of f).
bool has_qp_torsion(const Curve<Qp>& E, int ell, int N = Qp::default_precision);

} // namespace kummer
