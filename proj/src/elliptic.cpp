#include "kummer/elliptic.hpp"

#include <algorithm>

namespace kummer {

namespace {

// Dense polynomial helpers over a field F, coefficients low degree first.
template <class F>
std::vector<F> padd(const std::vector<F>& a, const std::vector<F>& b, const F& zero) {
    std::vector<F> r(std::max(a.size(), b.size()), zero);
    for (size_t i = 0; i < r.size(); ++i) {
        if (i < a.size() && i < b.size()) r[i] = a[i] + b[i];
        else if (i < a.size()) r[i] = a[i];
        else r[i] = b[i];
    }
    return r;
}

template <class F>
std::vector<F> pneg(const std::vector<F>& a) {
    std::vector<F> r = a;
    for (auto& c : r) c = -c;
    return r;
}

template <class F>
std::vector<F> pmul(const std::vector<F>& a, const std::vector<F>& b, const F& zero) {
    if (a.empty() || b.empty()) return {};
    std::vector<F> r(a.size() + b.size() - 1, zero);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j)
            r[i + j] = r[i + j] + a[i] * b[j];
    return r;
}

template <class F>
std::vector<F> pscale_half(const std::vector<F>& a);

template <>
std::vector<Rational> pscale_half(const std::vector<Rational>& a) {
    std::vector<Rational> r = a;
    for (auto& c : r) c /= 2;
    return r;
}

template <>
std::vector<Qp> pscale_half(const std::vector<Qp>& a) {
    std::vector<Qp> r = a;
    for (auto& c : r) c = c.div_int(2);
    return r;
}

// psi_n written as y^ydeg * poly(x); y^2 reduces against f = x^3 + ax + b.
template <class F>
struct Psi {
    int ydeg = 0;
    std::vector<F> poly;
};

template <class F>
Psi<F> psi_mul(const Psi<F>& a, const Psi<F>& b, const F& zero) {
    return {a.ydeg + b.ydeg, pmul(a.poly, b.poly, zero)};
}

template <class F>
Psi<F> psi_pow3(const Psi<F>& a, const F& zero) {
    auto sq = pmul(a.poly, a.poly, zero);
    return {3 * a.ydeg, pmul(sq, a.poly, zero)};
}

template <class F>
Psi<F> psi_sub(Psi<F> a, Psi<F> b, const std::vector<F>& f, const F& zero) {
    // Equalize y-degrees by substituting y^2 = f into the higher one.
    while (a.ydeg > b.ydeg + 1) { a.ydeg -= 2; a.poly = pmul(a.poly, f, zero); }
    while (b.ydeg > a.ydeg + 1) { b.ydeg -= 2; b.poly = pmul(b.poly, f, zero); }
    if (a.ydeg != b.ydeg) throw domain_error("division polynomial: parity mismatch");
    return {a.ydeg, padd(a.poly, pneg(b.poly), zero)};
}

template <class F>
void psi_reduce(Psi<F>& a, const std::vector<F>& f, const F& zero) {
    while (a.ydeg >= 2) { a.ydeg -= 2; a.poly = pmul(a.poly, f, zero); }
}

} // namespace

template <class F>
std::vector<F> division_polynomial(const Curve<F>& E, int n) {
    if (n < 2 || n > 9) throw domain_error("division_polynomial: n must be in [2, 9]");
    const F zero = E.one - E.one;
    const F& a = E.a;
    const F& b = E.b;
    const std::vector<F> f = {b, a, zero, E.one};  // x^3 + ax + b

    auto c = [&](const BigInt& k) { return field_mul_int(E.one, k); };

    std::vector<Psi<F>> psi(10);
    psi[0] = {0, {}};
    psi[1] = {0, {E.one}};
    psi[2] = {1, {c(2)}};
    psi[3] = {0, {-(a * a), field_mul_int(b, 12), field_mul_int(a, 6), zero, c(3)}};
    psi[4] = {1,
              {field_mul_int(b * b, -32) + field_mul_int(a * a * a, -4),
               field_mul_int(a * b, -16),
               field_mul_int(a * a, -20),
               field_mul_int(b, 80),
               field_mul_int(a, 20),
               zero,
               c(4)}};
    for (int k = 5; k <= n; ++k) {
        int m = k / 2;
        if (k % 2 == 1) {
            Psi<F> t = psi_sub(psi_mul(psi[m + 2], psi_pow3(psi[m], zero), zero),
                               psi_mul(psi[m - 1], psi_pow3(psi[m + 1], zero), zero), f, zero);
            psi_reduce(t, f, zero);
            psi[k] = t;
        } else {
            Psi<F> inner = psi_sub(psi_mul(psi[m + 2], psi_mul(psi[m - 1], psi[m - 1], zero), zero),
                                   psi_mul(psi[m - 2], psi_mul(psi[m + 1], psi[m + 1], zero), zero),
                                   f, zero);
            Psi<F> t = psi_mul(psi[m], inner, zero);
            if (t.ydeg < 1) throw domain_error("division polynomial: even-index parity");
            t.ydeg -= 1;  // divide by y
            t.poly = pscale_half(t.poly);
            psi_reduce(t, f, zero);
            psi[k] = t;
        }
    }

    Psi<F> out = psi[n];
    if (n % 2 == 0) {
        // Return psi_n^2 as a polynomial in x, so 2-torsion abscissas are roots too.
        out = psi_mul(out, out, zero);
        psi_reduce(out, f, zero);
    }
    if (out.ydeg != 0) throw domain_error("division polynomial: unreduced y factor");
    return out.poly;
}

template std::vector<Rational> division_polynomial<Rational>(const Curve<Rational>&, int);
template std::vector<Qp> division_polynomial<Qp>(const Curve<Qp>&, int);

Qp transport_alpha(const Qp& c, const Qp& d) {
    if (c.is_zero() || d.is_zero())
        throw domain_error("transport_alpha: zero twist parameter");
    if (!(d / c).is_square())
        throw nonsquare_error("transport_alpha: d/c is not a p-adic square");
    long long p = c.prime();
    int idx = square_class_index(c);
    Qp rep = Qp::from_rational(square_class_reps(p)[idx].representative, p,
                               std::max({4, c.rel_precision(), d.rel_precision()}));
    Qp sc = (c / rep).sqrt();
    Qp sd = (d / rep).sqrt();
    return sd / sc;
}

Point<Qp> twist_transport(const Point<Qp>& P, const Qp& c, const Qp& d) {
    if (P.inf) return P;
    Qp alpha = transport_alpha(c, d);
    return Point<Qp>::affine(P.x, P.y * alpha.inv());
}

bool has_qp_torsion(const Curve<Qp>& E, int ell, int N) {
    if (ell != 2 && ell != 3 && ell != 5 && ell != 7)
        throw domain_error("has_qp_torsion: l out of range {2,3,5,7}");
    long long p = E.one.prime();

    // Rescale (x, y) -> (x/p^2s, y/p^3s) until the model is integral at p.
    long long s = 0;
    if (!E.a.is_zero() && E.a.valuation() < 0)
        s = std::max(s, (-E.a.valuation() + 3) / 4);
    if (!E.b.is_zero() && E.b.valuation() < 0)
        s = std::max(s, (-E.b.valuation() + 5) / 6);
    Curve<Qp> W = s == 0 ? E
                         : curve_new<Qp>(E.a.mul_int(big_pow(p, 4 * s)),
                                         E.b.mul_int(big_pow(p, 6 * s)), E.one);

    int rootN = std::max(6, N / 2);
    if (ell == 2) {
        QpPoly f{{W.b, W.a, Qp::zero(p), W.one}};
        return !hensel_roots(f, rootN).empty();
    }
    QpPoly psi{division_polynomial(W, ell)};
    for (const Qp& x0 : hensel_roots(psi, rootN)) {
        Qp fx = W.f_of(x0);
        if (fx.is_zero())
            throw precision_error("has_qp_torsion: torsion abscissa collides with 2-torsion at precision");
        if (fx.is_square()) return true;
    }
    return false;
}

} // namespace kummer
