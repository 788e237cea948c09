#include "kummer/localdata.hpp"

#include "kummer/errors.hpp"

#include <algorithm>
#include <map>
#include <vector>

namespace kummer {

namespace {

constexpr long long VAL_INF = 1LL << 40;

long long val_or_inf(const Rational& r, long long p) {
    if (r == 0) return VAL_INF;
    return padic_valuation(numerator(r), p) - padic_valuation(denominator(r), p);
}

long long mod_ll(const Rational& r, long long p) {
    BigInt n = mod_pos(numerator(r), p);
    BigInt d = mod_pos(denominator(r), p);
    if (d == 0) throw domain_error("mod_ll: denominator divisible by p");
    BigInt v = n * mod_inverse(d, p) % p;
    return v.convert_to<long long>();
}

// The p-free part of r scaled down by p^k: returns (r / p^k) mod p.
long long unit_digit(const Rational& r, long long p, long long k) {
    Rational scaled = r / Rational(big_pow(p, k));
    return mod_ll(scaled, p);
}

} // namespace

std::string to_string(ReductionKind k) {
    switch (k) {
        case ReductionKind::Good: return "good";
        case ReductionKind::Multiplicative: return "multiplicative";
        case ReductionKind::Additive: return "additive";
    }
    return "?";
}

std::string to_string(KodairaSymbol s, int n) {
    switch (s) {
        case KodairaSymbol::I0: return "I0";
        case KodairaSymbol::In: return "I" + std::to_string(n);
        case KodairaSymbol::II: return "II";
        case KodairaSymbol::III: return "III";
        case KodairaSymbol::IV: return "IV";
        case KodairaSymbol::I0star: return "I0*";
        case KodairaSymbol::Instar: return "I" + std::to_string(n) + "*";
        case KodairaSymbol::IVstar: return "IV*";
        case KodairaSymbol::IIIstar: return "III*";
        case KodairaSymbol::IIstar: return "II*";
        case KodairaSymbol::Unsupported: return "unsupported";
    }
    return "?";
}

MinimalModel minimal_model_at(const Curve<Rational>& E, long long p) {
    if (!is_small_prime(p)) throw domain_error("minimal_model_at: p not prime");
    long long va = val_or_inf(E.a, p);
    long long vb = val_or_inf(E.b, p);
    // Scale up until integral, then down while (v(a) >= 4 and v(b) >= 6).
    long long up = 0;
    while (va + 4 * up < 0 || vb + 6 * up < 0) ++up;
    long long s = -up;
    while (va - 4 * (s + 1) >= 0 && vb - 6 * (s + 1) >= 0) ++s;
    Rational pa = Rational(big_pow(p, 4 * std::abs(s)));
    Rational pb = Rational(big_pow(p, 6 * std::abs(s)));
    Rational a2 = s >= 0 ? Rational(E.a / pa) : Rational(E.a * pa);
    Rational b2 = s >= 0 ? Rational(E.b / pb) : Rational(E.b * pb);
    return {curve_q(a2, b2), s, p < 5};
}

ReductionKind reduction_kind(const Curve<Rational>& E, long long p) {
    MinimalModel m = minimal_model_at(E, p);
    Rational disc = Rational(-16) * (Rational(4) * m.curve.a * m.curve.a * m.curve.a +
                                     Rational(27) * m.curve.b * m.curve.b);
    long long vd = val_or_inf(disc, p);
    if (vd == 0) return ReductionKind::Good;
    long long vc4 = val_or_inf(Rational(-48) * m.curve.a, p);
    return vc4 == 0 ? ReductionKind::Multiplicative : ReductionKind::Additive;
}

namespace {

// Tate's step-7 sub-loop for In*, n >= 1, on y^2 = x^3 + ax + b with
// v(a) = 2, v(b) = 3: shift the double root of the residue cubic to the
// origin, then walk the alternating quadratic tests.
void tate_instar(const Rational& a, const Rational& b, long long p, ReductionData& out) {
    long long A = unit_digit(a, p, 2);
    long long B = unit_digit(b, p, 3);
    long long t0 = mod_pos(BigInt(-3) * B % p * mod_inverse(2 * A % p, p), p).convert_to<long long>();

    Rational A2 = Rational(3) * Rational(t0) * Rational(p);
    Rational A4 = Rational(3) * Rational(t0) * Rational(t0) * Rational(p) * Rational(p) + a;
    Rational A6 = Rational(t0) * Rational(t0) * Rational(t0) * Rational(BigInt(p) * p * p) +
                  a * Rational(t0) * Rational(p) + b;

    for (int n = 1; n <= 40; ++n) {
        if (n % 2 == 1) {
            long long q = n + 3;
            if (val_or_inf(A6, p) == q) {
                long long u = unit_digit(A6, p, q);
                out.kodaira = KodairaSymbol::Instar;
                out.kodaira_n = n;
                out.component_order = legendre_symbol(u, p) == 1 ? 4 : 2;
                out.component_cyclic = true;  // Z/4 or Z/2 for odd n
                return;
            }
        } else {
            long long k = n / 2;
            long long a2u = unit_digit(A2, p, 1);
            long long a4u = val_or_inf(A4, p) == k + 2 ? unit_digit(A4, p, k + 2) : 0;
            long long a6u = val_or_inf(A6, p) == 2 * k + 3 ? unit_digit(A6, p, 2 * k + 3) : 0;
            BigInt D = mod_pos(BigInt(a4u) * a4u - BigInt(4) * a2u % p * a6u, p);
            if (D != 0) {
                out.kodaira = KodairaSymbol::Instar;
                out.kodaira_n = n;
                out.component_order = legendre_symbol(D, p) == 1 ? 4 : 2;
                out.component_cyclic = out.component_order < 4;  // (Z/2)^2 for even n
                return;
            }
            // Double root: translate x by p^(k+1) x0 and continue.
            long long x0 = mod_pos(BigInt(-a4u) * mod_inverse(2 * a2u % p, p), p).convert_to<long long>();
            Rational e = Rational(x0) * Rational(big_pow(p, k + 1));
            Rational nA2 = A2 + Rational(3) * e;
            Rational nA4 = A4 + Rational(2) * A2 * e + Rational(3) * e * e;
            Rational nA6 = A6 + A4 * e + A2 * e * e + e * e * e;
            A2 = nA2; A4 = nA4; A6 = nA6;
        }
    }
    throw error("tate_instar: sub-loop did not terminate");
}

} // namespace

ReductionData kodaira_type(const Curve<Rational>& E, long long p) {
    MinimalModel mm = minimal_model_at(E, p);
    ReductionData out;
    out.prime = p;
    out.scaling_exponent = mm.scaling_exponent;
    out.short_form_minimal_only = mm.short_form_minimal_only;
    out.kind = reduction_kind(E, p);
    if (p < 5) {
        out.kodaira = KodairaSymbol::Unsupported;
        return out;
    }
    const Rational& a = mm.curve.a;
    const Rational& b = mm.curve.b;
    Rational disc = Rational(-16) * (Rational(4) * a * a * a + Rational(27) * b * b);
    long long vd = val_or_inf(disc, p);
    long long va = val_or_inf(a, p);
    long long vb = val_or_inf(b, p);

    if (vd == 0) {
        out.kodaira = KodairaSymbol::I0;
        out.component_order = 1;
        return out;
    }
    if (va == 0) {
        // Multiplicative: node at the double root e of f mod p, e = -3b/2a.
        out.kodaira = KodairaSymbol::In;
        out.kodaira_n = static_cast<int>(vd);
        long long e = mod_pos(BigInt(-3) * mod_ll(b, p) % p *
                              mod_inverse(BigInt(2) * mod_ll(a, p) % p, p), p).convert_to<long long>();
        bool split = legendre_symbol(BigInt(3) * e % p, p) == 1;
        out.component_order = split ? vd : (vd % 2 == 0 ? 2 : 1);
        out.component_cyclic = true;
        return out;
    }

    // Additive: p | a and p | b on the minimal model.
    if (vb == 1) {
        out.kodaira = KodairaSymbol::II;
        out.component_order = 1;
    } else if (va == 1) {
        out.kodaira = KodairaSymbol::III;
        out.component_order = 2;
    } else if (vb == 2) {
        out.kodaira = KodairaSymbol::IV;
        out.component_order = legendre_symbol(unit_digit(b, p, 2), p) == 1 ? 3 : 1;
    } else if (vd == 6) {
        // Residue cubic T^3 + (a/p^2) T + (b/p^3) has distinct roots.
        out.kodaira = KodairaSymbol::I0star;
        long long A = va == 2 ? unit_digit(a, p, 2) : 0;
        long long B = vb == 3 ? unit_digit(b, p, 3) : 0;
        int roots = 0;
        for (long long t = 0; t < p; ++t)
            if ((BigInt(t) * t % p * t + BigInt(A) * t + B) % p == 0) ++roots;
        out.component_order = 1 + roots;
        out.component_cyclic = out.component_order < 4;
    } else if (va == 2 && vb == 3) {
        tate_instar(a, b, p, out);
    } else if (vb == 4) {
        out.kodaira = KodairaSymbol::IVstar;
        out.component_order = legendre_symbol(unit_digit(b, p, 4), p) == 1 ? 3 : 1;
    } else if (va == 3) {
        out.kodaira = KodairaSymbol::IIIstar;
        out.component_order = 2;
    } else if (vb == 5) {
        out.kodaira = KodairaSymbol::IIstar;
        out.component_order = 1;
    } else {
        throw error("kodaira_type: non-minimal model escaped minimization");
    }
    return out;
}

namespace {

struct ModCurve {
    long long p, a, b;
    long long f(long long x) const {
        return ((x * x % p * x % p) + a * x % p + b) % p;
    }
};

struct ModPoint {
    bool inf = true;
    long long x = 0, y = 0;
};

ModPoint mod_add(const ModCurve& C, const ModPoint& P, const ModPoint& Q) {
    if (P.inf) return Q;
    if (Q.inf) return P;
    long long p = C.p;
    long long lam;
    if (P.x == Q.x) {
        if ((P.y + Q.y) % p == 0) return {};
        long long num = (3 * (P.x * P.x % p) % p + C.a) % p;
        lam = num * mod_inverse(2 * P.y % p, p).convert_to<long long>() % p;
    } else {
        long long dy = mod_pos(BigInt(Q.y - P.y), p).convert_to<long long>();
        long long dx = mod_pos(BigInt(Q.x - P.x), p).convert_to<long long>();
        lam = dy * mod_inverse(dx, p).convert_to<long long>() % p;
    }
    long long x3 = mod_pos(BigInt(lam) * lam - P.x - Q.x, p).convert_to<long long>();
    long long y3 = mod_pos(BigInt(lam) * (P.x - x3) - P.y, p).convert_to<long long>();
    return {false, x3, y3};
}

ModPoint mod_scalar(const ModCurve& C, long long n, ModPoint P) {
    ModPoint acc;
    while (n > 0) {
        if (n & 1) acc = mod_add(C, acc, P);
        n >>= 1;
        if (n > 0) P = mod_add(C, P, P);
    }
    return acc;
}

ModCurve residue_curve(const Curve<Rational>& E, long long p) {
    MinimalModel mm = minimal_model_at(E, p);
    return {p, mod_ll(mm.curve.a, p), mod_ll(mm.curve.b, p)};
}

std::vector<ModPoint> enumerate_points(const ModCurve& C) {
    long long p = C.p;
    std::vector<long long> sqrt_of(p, -1);
    for (long long y = 0; y <= p / 2; ++y) {
        long long s = y * y % p;
        if (sqrt_of[s] < 0) sqrt_of[s] = y;
    }
    std::vector<ModPoint> pts;
    pts.push_back({});  // O
    for (long long x = 0; x < p; ++x) {
        long long v = C.f(x);
        long long y = sqrt_of[v];
        if (y < 0) continue;
        pts.push_back({false, x, y});
        if (y != 0 && y != p - y) pts.push_back({false, x, p - y});
    }
    return pts;
}

} // namespace

ReductionData analyze_reduction(const Curve<Rational>& E, long long p,
                                long long enumeration_budget) {
    ReductionData out = kodaira_type(E, p);
    switch (out.kind) {
        case ReductionKind::Additive:
            out.residue_count = p;
            break;
        case ReductionKind::Multiplicative: {
            if (p >= 5) {
                // |E~_ns| = p - 1 split, p + 1 nonsplit.
                MinimalModel mm = minimal_model_at(E, p);
                long long e = mod_pos(BigInt(-3) * mod_ll(mm.curve.b, p) % p *
                                      mod_inverse(BigInt(2) * mod_ll(mm.curve.a, p) % p, p),
                                      p).convert_to<long long>();
                bool split = legendre_symbol(BigInt(3) * e % p, p) == 1;
                out.residue_count = split ? p - 1 : p + 1;
            }
            break;
        }
        case ReductionKind::Good:
            if (p <= enumeration_budget)
                out.residue_count = count_points_mod_p(E, p, enumeration_budget);
            break;
    }
    return out;
}

BigInt count_points_mod_p(const Curve<Rational>& E, long long p, long long enumeration_budget) {
    if (reduction_kind(E, p) != ReductionKind::Good)
        throw reduction_error("count_points_mod_p: non-good reduction (use residue_count)");
    if (p > enumeration_budget)
        throw budget_error("count_points_mod_p: p beyond enumeration budget");
    ModCurve C = residue_curve(E, p);
    std::vector<int8_t> is_sq(p, 0);
    for (long long y = 0; y <= p / 2; ++y) is_sq[y * y % p] = 1;
    BigInt count = 1;
    for (long long x = 0; x < p; ++x) {
        long long v = C.f(x);
        if (v == 0) count += 1;
        else if (is_sq[v]) count += 2;
    }
    return count;
}

std::pair<BigInt, BigInt> group_structure_mod_p(const Curve<Rational>& E, long long p,
                                                long long enumeration_budget) {
    if (reduction_kind(E, p) != ReductionKind::Good)
        throw reduction_error("group_structure_mod_p: non-good reduction");
    if (p > enumeration_budget)
        throw budget_error("group_structure_mod_p: p beyond enumeration budget");
    ModCurve C = residue_curve(E, p);
    std::vector<ModPoint> pts = enumerate_points(C);
    BigInt n = static_cast<long long>(pts.size());

    // Full l^i-torsion (l^{2i} points killed by l^i) contributes l^i to n1.
    std::vector<long long> prime_factors;
    BigInt rem = n;
    for (long long d = 2; BigInt(d) * d <= rem; ++d)
        if (rem % d == 0) {
            prime_factors.push_back(d);
            while (rem % d == 0) rem /= d;
        }
    if (rem > 1) prime_factors.push_back(rem.convert_to<long long>());

    BigInt n1 = 1;
    for (long long l : prime_factors) {
        long long li = l;
        while (BigInt(li) * li <= n) {
            long long killed = 0;
            for (const auto& P : pts)
                if (mod_scalar(C, li, P).inf) ++killed;
            if (BigInt(killed) != BigInt(li) * li) break;
            n1 *= l;
            li *= l;
        }
    }
    BigInt n2 = n / n1;
    if (n2 % n1 != 0) throw error("group_structure_mod_p: inconsistent torsion counts");
    return {n1, n2};
}

} // namespace kummer
