#include "kummer/suitability.hpp"

#include "kummer/errors.hpp"

#include <set>

namespace kummer {

Curve<Rational> twist_short_model(const Curve<Rational>& E, const Rational& c) {
    return curve_q(c * c * E.a, c * c * c * E.b);
}

Point<Rational> to_short_model(const Point<Rational>& P, const Rational& c) {
    if (P.inf) return P;
    return Point<Rational>::affine(c * P.x, c * c * P.y);
}

Point<Qp> to_short_model(const Point<Qp>& P, const Qp& c) {
    if (P.inf) return P;
    return Point<Qp>::affine(c * P.x, c * c * P.y);
}

Point<Qp> from_short_model(const Point<Qp>& P, const Qp& c) {
    if (P.inf) return P;
    return Point<Qp>::affine(P.x / c, P.y / (c * c));
}

std::optional<GeneratorCertificate> certify_generator(const LocalCurve& E,
                                                      const FiniteQuotient& fq,
                                                      const Point<Qp>& G) {
    if (!fq.cyclic) return std::nullopt;
    if (G.inf) return std::nullopt;

    Qp xw = Qp::from_rational(1, BigInt(E.p) * E.p, E.p, E.precision);
    auto W = lift_x(E.qp, xw);
    if (!W) return std::nullopt;
    long long mu = formal_log(E, *W).valuation();

    std::vector<BigInt> prime_cofactors;
    BigInt q = fq.order;
    for (BigInt d = 2; d * d <= q; ++d)
        if (q % d == 0) {
            prime_cofactors.push_back(fq.order / d);
            while (q % d == 0) q /= d;
        }
    if (q > 1) prime_cofactors.push_back(fq.order / q);

    for (const BigInt& cof : prime_cofactors)
        if (reduce_point(E, scalar_mul(E.qp, cof, G)).level == FiltrationLevel::InE1)
            return std::nullopt;
    Point<Qp> QG = scalar_mul(E.qp, fq.order, G);
    if (reduce_point(E, QG).level != FiltrationLevel::InE1) return std::nullopt;
    Qp lg = formal_log(E, QG);
    if (lg.is_zero() || lg.valuation() != mu) return std::nullopt;

    GeneratorCertificate cert;
    cert.generator = G;
    cert.quotient_order = fq.order;
    cert.min_log_valuation = mu;
    cert.log_valuation_QG = lg.valuation();
    cert.cofactors_checked = prime_cofactors;
    return cert;
}

TwistCertificate construct_suitable_c(const Curve<Rational>& E, long long p,
                                      const SquareClass& d_class, int k, int N) {
    Rational d0 = d_class.representative;
    Curve<Rational> Ed0 = twist_short_model(E, d0);

    GroupStructure gs = qp_group_structure(Ed0, p, N, true);
    if (gs.procyclic != Verdict::Yes)
        throw domain_error("construct_suitable_c: twist class is not procyclic (" +
                           to_string(gs.procyclic) + ": " + gs.evidence.note + ")");
    const GeneratorCertificate& zw = *gs.generator;
    const Point<Qp>& Z = zw.generator;
    if (Z.y.is_zero())
        throw domain_error("construct_suitable_c: generator with w = 0 is impossible");
    long long vw = Z.y.valuation();
    if (Z.x.is_zero() && Z.x.abs_precision() < 1)
        throw precision_error("construct_suitable_c: generator x undecided");

    for (int j = std::max(4, k) + static_cast<int>(2 * std::max<long long>(0, vw));
         j <= k + 12; j += 2) {
        if (j > N - 4)
            throw precision_error("construct_suitable_c: truncation exceeds precision budget");
        BigInt u = Z.x.is_exact_zero() ? BigInt(0) : Z.x.lift_mod(j);
        BigInt v = Z.y.lift_mod(j);
        if (v == 0) continue;
        Rational g_u = Ed0.f_of(Rational(u));
        if (g_u == 0) continue;
        Rational c_prime = g_u / (Rational(v) * Rational(v));
        Qp c_prime_p = Qp::from_rational(c_prime, p, N);
        if (!c_prime_p.is_square()) continue;  // j too small; retry deeper

        Curve<Rational> S = twist_short_model(Ed0, c_prime);
        LocalCurve localS = make_local(S, p, N);
        FiniteQuotient fqS = finite_quotient(localS);
        Point<Qp> GS = Point<Qp>::affine(
            Qp::from_rational(c_prime * Rational(u), p, N),
            Qp::from_rational(c_prime * c_prime * Rational(v), p, N));
        if (!on_curve(localS.qp, GS))
            throw error("construct_suitable_c: exact generator fails curve equation");
        auto cert = certify_generator(localS, fqS, GS);
        if (!cert) continue;

        TwistCertificate out;
        out.prime = p;
        out.target_class = d_class;
        out.d0 = d0;
        out.c_prime = c_prime;
        out.c = d0 * c_prime;
        out.gen_x = Rational(u) / d0;
        out.gen_y = Rational(v) / (d0 * d0);
        out.truncation_exponent = j;
        Qp d0p = Qp::from_rational(d0, p, N);
        Qp cp = Qp::from_rational(out.c, p, N);
        out.d_over_c_square = (d0p / cp).is_square();
        cert->sweep_x = zw.sweep_x;
        out.short_model_cert = *cert;
        return out;
    }
    throw budget_error("construct_suitable_c: truncation budget j <= k + 12 exhausted");
}

SuitabilityReport check_suitable_twists(const Curve<Rational>& E, long long p, int k, int N) {
    SuitabilityReport rep;
    rep.prime = p;
    rep.all_classes_ok = true;
    for (const SquareClass& cls : square_class_reps(p)) {
        ClassOutcome out;
        out.cls = cls;
        try {
            out.certificate = construct_suitable_c(E, p, cls, k, N);
        } catch (const error& e) {
            out.failure = e.what();
            rep.all_classes_ok = false;
        }
        rep.classes.push_back(std::move(out));
    }
    return rep;
}

namespace {

bool in_K(KodairaSymbol s) {
    switch (s) {
        case KodairaSymbol::II:
        case KodairaSymbol::III:
        case KodairaSymbol::IV:
        case KodairaSymbol::IVstar:
        case KodairaSymbol::IIIstar:
        case KodairaSymbol::IIstar:
            return true;
        default:
            return false;
    }
}

bool matches_small_p_criteria(long long p, const Rational& a, const Rational& b) {
    auto v = [&](const Rational& r) {
        if (r == 0) return static_cast<long long>(1) << 30;
        return padic_valuation(numerator(r), p) - padic_valuation(denominator(r), p);
    };
    if (denominator(a) != 1 || denominator(b) != 1) return false;
    BigInt an = numerator(a), bn = numerator(b);
    switch (p) {
        case 2: return v(a) >= 1 && v(b) == 1;
        case 3: return v(a) == 1 && v(b) > 1;
        case 5: {
            BigInt r = mod_pos(an, 25);
            return v(a) >= 1 && v(b) == 1 && r != 10 && r != 15;
        }
        case 7: {
            BigInt r = mod_pos(bn, 49);
            return v(a) >= 1 && v(b) == 1 && r != 14 && r != 35;
        }
        default: return false;
    }
}

} // namespace

bool twist_stability_check(const Curve<Rational>& E, long long p, int trials) {
    if (p <= 7) throw domain_error("twist_stability_check: requires p > 7");
    ReductionData rd = kodaira_type(E, p);
    if (rd.kind != ReductionKind::Additive || !in_K(rd.kodaira))
        throw domain_error("twist_stability_check: Kodaira type not in K");
    for (const SquareClass& cls : square_class_reps(p)) {
        for (int t = 1; t <= std::max(1, trials); ++t) {
            Rational c = cls.representative * Rational(t) * Rational(t);
            ReductionData tw = kodaira_type(quadratic_twist(E, c), p);
            if (!in_K(tw.kodaira)) return false;
        }
    }
    return true;
}

std::vector<ProcyclicCurveWitness> search_procyclic_curves(long long p, int count, int N) {
    if (count > 10000) throw domain_error("search_procyclic_curves: count too large");
    std::vector<ProcyclicCurveWitness> out;
    std::set<Rational> seen_j;

    auto consider = [&](const Rational& a, const Rational& b, const std::string& family) {
        if (static_cast<int>(out.size()) >= count) return;
        Rational core = Rational(4) * a * a * a + Rational(27) * b * b;
        if (core == 0) return;
        Curve<Rational> E = curve_q(a, b);
        if (seen_j.count(E.j_invariant)) return;
        ProcyclicCurveWitness w;
        w.a = a;
        w.b = b;
        w.j_invariant = E.j_invariant;
        w.family = family;
        for (const SquareClass& cls : square_class_reps(p)) {
            Curve<Rational> tw = twist_short_model(E, cls.representative);
            Verdict v = Verdict::Unknown;
            try {
                v = qp_group_structure(tw, p, N, false).procyclic;
            } catch (const error&) {
                v = Verdict::Unknown;
            }
            w.class_verdicts.push_back({cls.class_index, v});
            if (v != Verdict::Yes) return;  // reject curve
        }
        seen_j.insert(E.j_invariant);
        out.push_back(std::move(w));
    };

    if (p > 7) {
        for (long long i = 0; i <= 6 && static_cast<int>(out.size()) < count; ++i) {
            for (long long jc = 1; jc <= 8 && static_cast<int>(out.size()) < count; ++jc) {
                if (jc % p == 0) continue;
                Rational a = Rational(p) * i;
                Rational b = Rational(p) * jc;
                ReductionData rd = kodaira_type(curve_q(a, b), p);
                if (!in_K(rd.kodaira)) continue;
                if (!twist_stability_check(curve_q(a, b), p)) continue;
                consider(a, b, to_string(rd.kodaira, rd.kodaira_n));
            }
        }
    } else {
        for (long long i = 0; i <= 8 && static_cast<int>(out.size()) < count; ++i) {
            for (long long jc = 1; jc <= 10 && static_cast<int>(out.size()) < count; ++jc) {
                Rational a, b;
                std::string family;
                switch (p) {
                    case 2: a = Rational(2) * i; b = Rational(2) * (2 * jc - 1); family = "case (i)"; break;
                    case 3: a = Rational(3) * (3 * i + 1); b = Rational(9) * jc; family = "case (ii)"; break;
                    case 5: a = Rational(5) * i; b = Rational(5) * jc; family = "case (iii)"; break;
                    case 7: a = Rational(7) * i; b = Rational(7) * jc; family = "case (iv)"; break;
                }
                if (!matches_small_p_criteria(p, a, b)) continue;
                consider(a, b, family);
            }
        }
    }
    if (static_cast<int>(out.size()) < count)
        throw budget_error("search_procyclic_curves: enumeration budget exhausted at " +
                           std::to_string(out.size()) + " of " + std::to_string(count));
    return out;
}

} // namespace kummer
