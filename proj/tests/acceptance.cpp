// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Each criterion embeds its tolerance and time budget.

#include "kummer/literals.hpp"

#include <chrono>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

using namespace kummer;

namespace {

int g_failures = 0;

struct Criterion {
    std::string label;
    bool passed = true;
    std::vector<std::string> notes;
    std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();

    explicit Criterion(std::string l) : label(std::move(l)) {}

    void require(bool ok, const std::string& what) {
        if (!ok) {
            passed = false;
            notes.push_back(what);
        }
    }

    void finish(double budget_seconds) {
        double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (secs > budget_seconds) {
            passed = false;
            notes.push_back("exceeded time budget: " + std::to_string(secs) + "s > " +
                            std::to_string(budget_seconds) + "s");
        }
        std::printf("[%s] %s (%.2fs)\n", passed ? "PASS" : "FAIL", label.c_str(), secs);
        for (const auto& n : notes) std::printf("       - %s\n", n.c_str());
        if (!passed) ++g_failures;
        std::fflush(stdout);
    }
};

std::vector<long long> primes_3mod4_up_to_100() {
    std::vector<long long> out;
    for (long long p = 11; p <= 100; ++p)
        if (is_small_prime(p) && p % 4 == 3) out.push_back(p);
    return out;
}

void criterion_1() {
    Criterion c("criterion 1: supersingular counts #E~(F_p) = p+1 for p = 3 mod 4, d in {1,2,3}");
    for (long long p : primes_3mod4_up_to_100())
        for (long long d = 1; d <= 3; ++d) {
            BigInt n = count_points_mod_p(curve_q(Rational(d) * d, 0), p);
            c.require(n == BigInt(p) + 1,
                      "p=" + std::to_string(p) + " d=" + std::to_string(d) + ": count " + n.str());
        }
    c.finish(1.0);
}

void criterion_2() {
    Criterion c("criterion 2: residue groups cyclic and x^3 + d^2 x = linear x quadratic");
    for (long long p : primes_3mod4_up_to_100())
        for (long long d = 1; d <= 3; ++d) {
            auto [n1, n2] = group_structure_mod_p(curve_q(Rational(d) * d, 0), p);
            c.require(n1 == 1, "p=" + std::to_string(p) + " d=" + std::to_string(d) +
                                   ": structure Z/" + n1.str() + " x Z/" + n2.str());
            long long roots = 0;
            for (long long x = 0; x < p; ++x)
                if ((x * x % p * x + d * d % p * x) % p == 0) ++roots;
            c.require(roots == 1, "p=" + std::to_string(p) + " d=" + std::to_string(d) + ": " +
                                      std::to_string(roots) + " roots");
        }
    c.finish(1.0);
}

void criterion_3() {
    for (long long p : {11, 19, 23}) {
        Criterion c("criterion 3: procyclicity certificates for all twist classes at p = " +
                    std::to_string(p));
        for (const SquareClass& cls : square_class_reps(p)) {
            Curve<Rational> tw = twist_short_model(curve_q(1, 0), cls.representative);
            try {
                GroupStructure gs = qp_group_structure(tw, p, Qp::default_precision, true);
                c.require(gs.procyclic == Verdict::Yes,
                          "class " + to_string(cls.representative) + ": verdict " +
                              to_string(gs.procyclic));
                c.require(gs.generator.has_value(),
                          "class " + to_string(cls.representative) + ": no generator");
                if (gs.generator) {
                    LocalCurve L = make_local(tw, p);
                    FiniteQuotient fq = finite_quotient(L);
                    ClosureReport cr = closure_covers(L, fq, *gs.generator, 20, 3);
                    c.require(cr.covered, "class " + to_string(cls.representative) +
                                              ": closure failed: " + cr.witness);
                }
            } catch (const error& e) {
                c.require(false, "class " + to_string(cls.representative) + ": " + e.what());
            }
        }
        c.finish(30.0);
    }
}

void criterion_4() {
    Criterion c("criterion 4: small-prime families (i)-(iv) procyclic; full 2-torsion control rejected");
    for (long long p : {2, 3, 5, 7}) {
        try {
            auto curves = search_procyclic_curves(p, 3);
            c.require(curves.size() == 3, "p=" + std::to_string(p) + ": found " +
                                              std::to_string(curves.size()) + " curves");
            for (const auto& w : curves) {
                Curve<Rational> E = curve_q(w.a, w.b);
                GroupStructure gs = qp_group_structure(E, p, Qp::default_precision, true);
                c.require(gs.procyclic == Verdict::Yes,
                          "p=" + std::to_string(p) + " a=" + to_string(w.a) + " b=" +
                              to_string(w.b) + ": verdict " + to_string(gs.procyclic));
                if (gs.generator) {
                    LocalCurve L = make_local(E, p);
                    FiniteQuotient fq = finite_quotient(L);
                    ClosureReport cr = closure_covers(L, fq, *gs.generator, 20, 3);
                    c.require(cr.covered, "p=" + std::to_string(p) + " a=" + to_string(w.a) +
                                              " b=" + to_string(w.b) + ": closure " + cr.witness);
                } else {
                    c.require(false, "p=" + std::to_string(p) + ": missing generator");
                }
            }
        } catch (const error& e) {
            c.require(false, "p=" + std::to_string(p) + ": " + e.what());
        }
    }
    // Negative control: y^2 = x^3 - x at p = 7 has full 2-torsion.
    GroupStructure bad = qp_group_structure(curve_q(-1, 0), 7, Qp::default_precision, false);
    c.require(bad.procyclic == Verdict::No, "negative control verdict: " + to_string(bad.procyclic));
    c.require(!bad.evidence.quotient_cyclic && !bad.evidence.note.empty(),
              "negative control lacks a witness");
    c.finish(60.0);
}

void criterion_5() {
    Criterion c("criterion 5: suitable twists for all classes at p = 11 with v(c'-1) >= 4");
    SuitabilityReport rep = check_suitable_twists(curve_q(1, 0), 11, 3);
    c.require(rep.all_classes_ok, "not all classes certified");
    for (const auto& cls : rep.classes) {
        if (!cls.certificate) {
            c.require(false, "class " + to_string(cls.cls.representative) + ": " + cls.failure);
            continue;
        }
        const TwistCertificate& tc = *cls.certificate;
        Rational diff = tc.c_prime - 1;
        long long v = diff == 0 ? 99
                                : padic_valuation(numerator(diff), 11) -
                                      padic_valuation(denominator(diff), 11);
        c.require(v >= 4, "class " + to_string(cls.cls.representative) + ": v(c'-1) = " +
                              std::to_string(v));
        c.require(tc.d_over_c_square,
                  "class " + to_string(cls.cls.representative) + ": d/c not a square");
    }
    c.finish(60.0);
}

void criterion_6() {
    Criterion c("criterion 6: ten seeded targets at p = 11, k = 3, approximate + verify");
    Curve<Rational> E = curve_q(1, 0);
    Curve<Qp> Eqp = curve_qp(1, 0, 11);
    for (unsigned long long seed = 1; seed <= 10; ++seed) {
        auto t0 = std::chrono::steady_clock::now();
        try {
            KummerPointY target = sample_y_point(Eqp, seed);
            ApproximationResult res = approximate(E, 11, target, 3);
            res.seed = static_cast<long long>(seed);
            c.require(res.achieved_exponent >= 3,
                      "seed " + std::to_string(seed) + ": achieved " +
                          std::to_string(res.achieved_exponent));
            // Round trip through the certificate JSON, then recompute everything.
            Json j = approximation_to_json(res, E, target);
            StoredApproximation sa = approximation_from_json(j);
            KummerPointY target2 = sample_y_point(curve_qp(sa.a, sa.b, sa.prime, 24),
                                                  static_cast<unsigned long long>(sa.seed));
            VerifyOutcome v = verify_approximation(curve_q(sa.a, sa.b), sa.prime, target2,
                                                   sa.c, sa.gen_x, sa.gen_y, sa.n1, sa.n2, sa.k);
            c.require(v.ok, "seed " + std::to_string(seed) + ": verification " + v.failure);
        } catch (const error& e) {
            c.require(false, "seed " + std::to_string(seed) + ": " + e.what());
        }
        double secs =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        c.require(secs < 10.0, "seed " + std::to_string(seed) + " took " + std::to_string(secs));
    }
    c.finish(100.0);
}

void criterion_7() {
    Criterion c("criterion 7: cm driver at p in {11,19,23,31}, rejects p = 13; twist types logged");
    for (long long p : {11, 19, 23, 31}) {
        CmReport rep = cm_driver(p);
        c.require(rep.all_passed, "p=" + std::to_string(p) + " failed");
        if (!rep.all_passed)
            for (const auto& ch : rep.checks)
                if (!ch.passed) c.notes.push_back("  " + ch.name + ": " + ch.detail);
    }
    bool rejected = false;
    try {
        cm_driver(13);
    } catch (const domain_error&) {
        rejected = true;
    }
    c.require(rejected, "p = 13 was not rejected");

    // The Kodaira type computed for v_p(d) = 1 twists of y^2 = x^3 + x, with
    // the component order cross-checked against the independent coset probe.
    for (long long p : {11, 19, 23, 31}) {
        Curve<Rational> tw = curve_q(Rational(BigInt(p) * p), 0);
        ReductionData rd = kodaira_type(tw, p);
        LocalCurve L = make_local(tw, p);
        FiniteQuotient probe = probe_quotient(L);
        c.require(probe.component_order == rd.component_order,
                  "p=" + std::to_string(p) + ": tate m=" + std::to_string(rd.component_order) +
                      " probe m=" + std::to_string(probe.component_order));
        std::string sym = to_string(rd.kodaira, rd.kodaira_n);
        c.notes.push_back("p=" + std::to_string(p) + ": v_p(d)=1 twist has type " + sym +
                          ", m=" + std::to_string(rd.component_order) +
                          (sym != "IV" ? " (differs from the IV in the source analysis;"
                                         " procyclicity unaffected)"
                                       : ""));
    }
    c.finish(60.0);
}

void criterion_8() {
    Criterion c("criterion 8: oracle suites (squares mod p^6, group-law fuzz, log additivity, dlog)");

    // (a) is_square vs exhaustive enumeration mod p^6.
    for (long long p : {2, 3, 5, 7, 11}) {
        long long mod = 1;
        for (int i = 0; i < 6; ++i) mod *= p;
        std::vector<char> sq(static_cast<size_t>(mod), 0);
        for (long long r = 0; r < mod; ++r) sq[static_cast<size_t>(r * r % mod)] = 1;
        long long bad = 0;
        for (long long a = 1; a < mod; ++a) {
            long long v = 0, u = a;
            while (u % p == 0) { u /= p; ++v; }
            Qp x = Qp::from_parts(p, v, u, static_cast<int>(6 - v));
            try {
                if (x.is_square() != static_cast<bool>(sq[static_cast<size_t>(a)])) ++bad;
            } catch (const precision_error&) {
                if (!(p == 2 && 6 - v < 3)) ++bad;  // refusals only below threshold
            }
        }
        c.require(bad == 0, "p=" + std::to_string(p) + ": " + std::to_string(bad) + " mismatches");
    }

    // (b) group-law fuzz: 1000 triples over Q_p.
    std::mt19937_64 rng(88);
    long long fuzz_bad = 0;
    for (long long p : {5, 11}) {
        Curve<Qp> E = curve_qp(1, 0, p);
        std::vector<Point<Qp>> pts;
        for (long long x = 1; x < 400 && pts.size() < 24; ++x) {
            Qp fx = E.f_of(Qp::from_integer(x, p));
            if (fx.is_zero() || !fx.is_square()) continue;
            pts.push_back(Point<Qp>::affine(Qp::from_integer(x, p), fx.sqrt()));
        }
        for (int i = 0; i < 500; ++i) {
            const auto& P = pts[rng() % pts.size()];
            const auto& Q = pts[rng() % pts.size()];
            const auto& R = pts[rng() % pts.size()];
            auto lhs = point_add(E, point_add(E, P, Q), R);
            auto rhs = point_add(E, P, point_add(E, Q, R));
            bool ok = lhs.inf == rhs.inf &&
                      (lhs.inf || ((lhs.x - rhs.x).is_zero() && (lhs.y - rhs.y).is_zero()));
            auto C = point_add(E, P, Q);
            auto D = point_add(E, Q, P);
            ok = ok && (C.inf == D.inf) && (C.inf || (C.x - D.x).is_zero());
            ok = ok && point_add(E, P, point_neg(E, P)).inf;
            if (!ok) ++fuzz_bad;
        }
    }
    c.require(fuzz_bad == 0, "group-law fuzz: " + std::to_string(fuzz_bad) + " failures");

    // (c) formal log additivity on 100 pairs.
    LocalCurve L = make_local(curve_q(1, 0), 11);
    FiniteQuotient fq = finite_quotient(L);
    std::vector<Point<Qp>> e1;
    for (long long x = 1; x < 300 && e1.size() < 15; ++x) {
        auto P = lift_x(L.qp, Qp::from_integer(x, 11, L.precision));
        if (!P) continue;
        Point<Qp> R = scalar_mul(L.qp, fq.order, *P);
        if (!R.inf && reduce_point(L, R).level == FiltrationLevel::InE1) {
            e1.push_back(R);
            e1.push_back(point_neg(L.qp, R));
            e1.push_back(scalar_mul(L.qp, BigInt(11), R));
        }
    }
    long long log_bad = 0;
    int pairs = 0;
    for (size_t i = 0; i < e1.size() && pairs < 100; ++i)
        for (size_t j = i; j < e1.size() && pairs < 100; ++j, ++pairs) {
            Qp lhs = formal_log(L, point_add(L.qp, e1[i], e1[j]));
            Qp rhs = formal_log(L, e1[i]) + formal_log(L, e1[j]);
            if (!(lhs - rhs).is_zero()) ++log_bad;
        }
    c.require(pairs == 100 && log_bad == 0,
              "log additivity: " + std::to_string(log_bad) + " failures in " +
                  std::to_string(pairs) + " pairs");

    // (d) dlog round trip on 50 hidden multipliers.
    GeneratorCertificate cert = find_topological_generator(L, fq);
    BigInt modulus = fq.order * big_pow(11, 3);
    long long dlog_bad = 0;
    for (int i = 0; i < 50; ++i) {
        BigInt s = BigInt(rng() % 1000000007ULL) % modulus;
        Point<Qp> T = scalar_mul(L.qp, s, cert.generator);
        BigInt n = elliptic_dlog(L, fq, cert, T, 3);
        if (mod_pos(n - s, modulus) != 0) ++dlog_bad;
    }
    c.require(dlog_bad == 0, "dlog round trip: " + std::to_string(dlog_bad) + " failures");

    c.finish(120.0);
}

} // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    if (g_failures == 0) {
        std::printf("acceptance: all criteria passed\n");
        return 0;
    }
    std::printf("acceptance: %d criterion(s) FAILED\n", g_failures);
    return 1;
}
