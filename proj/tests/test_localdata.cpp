#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "kummer/localdata.hpp"

#include <cmath>
#include <random>

using namespace kummer;

namespace {

// Independent count oracle: direct enumeration with a trial-square test.
long long brute_count(long long a, long long b, long long p) {
    long long count = 1;
    for (long long x = 0; x < p; ++x) {
        long long v = ((x * x % p * x) % p + a % p * x % p + b % p + 2 * p * p) % p;
        if (v == 0) { ++count; continue; }
        for (long long y = 1; y <= p / 2; ++y)
            if (y * y % p == v) { count += 2; break; }
    }
    return count;
}

} // namespace

TEST_CASE("minimal model scaling") {
    long long p = 11;
    Rational p4 = Rational(BigInt(p) * p * p * p);
    Rational p6 = p4 * Rational(BigInt(p) * p);

    MinimalModel m1 = minimal_model_at(curve_q(p4, p6), p);
    CHECK(m1.curve.a == 1);
    CHECK(m1.curve.b == 1);
    CHECK(m1.scaling_exponent == 1);

    MinimalModel m2 = minimal_model_at(curve_q(1, 0), p);
    CHECK(m2.curve.a == 1);
    CHECK(m2.scaling_exponent == 0);

    // (p^5, p^6) -> (p, 1) after one step.
    MinimalModel m3 = minimal_model_at(curve_q(p4 * p, p6), p);
    CHECK(m3.curve.a == p);
    CHECK(m3.curve.b == 1);
    CHECK(m3.scaling_exponent == 1);

    // Denominators scale up: (1/p^4, 1/p^6) -> (1, 1) with s = -1.
    MinimalModel m4 = minimal_model_at(curve_q(1 / p4, 1 / p6), p);
    CHECK(m4.curve.a == 1);
    CHECK(m4.scaling_exponent == -1);

    CHECK(minimal_model_at(curve_q(1, 1), 2).short_form_minimal_only);
    CHECK_FALSE(minimal_model_at(curve_q(1, 1), 5).short_form_minimal_only);
}

TEST_CASE("reduction kind") {
    CHECK(reduction_kind(curve_q(1, 0), 11) == ReductionKind::Good);
    CHECK(reduction_kind(curve_q(Rational(121), 0), 11) == ReductionKind::Additive);
    // v(delta) > 0 with v(c4) = 0: node.
    // y^2 = x^3 - 3x + 2 is singular over Q; use x^3 - x + 6 at p = 11:
    // delta = -16(-4 + 27*36) = -16*968, v_11(968) = 2... pick a cleaner case:
    // y^2 = x^3 + x + 1 at p = 31: delta = -16*31, v=1, v(c4)=0.
    CHECK(reduction_kind(curve_q(1, 1), 31) == ReductionKind::Multiplicative);
    CHECK_THROWS_AS(curve_q(0, 0), domain_error);
}

TEST_CASE("kodaira types via the short-form Tate tree") {
    // v(a) = v(b) = 1: type II with m = 1 (v(delta) = 2).
    ReductionData rII = kodaira_type(curve_q(11, 11), 11);
    CHECK(rII.kodaira == KodairaSymbol::II);
    CHECK(rII.component_order == 1);
    CHECK(rII.kind == ReductionKind::Additive);

    ReductionData rI0 = kodaira_type(curve_q(1, 0), 11);
    CHECK(rI0.kodaira == KodairaSymbol::I0);

    // y^2 = x^3 + 121x: v(a) = 2, b = 0, v(delta) = 6: I0*.
    // Residue cubic T^3 + T has one root mod 11 (since -1 is not a QR),
    // so m = 2 and the component group is cyclic.
    ReductionData rstar = kodaira_type(curve_q(Rational(121), 0), 11);
    CHECK(rstar.kodaira == KodairaSymbol::I0star);
    CHECK(rstar.component_order == 2);
    CHECK(rstar.component_cyclic);

    // y^2 = x^3 - 121x at 11: T^3 - T has three roots mod 11: m = 4, not cyclic.
    ReductionData rfull = kodaira_type(curve_q(Rational(-121), 0), 11);
    CHECK(rfull.kodaira == KodairaSymbol::I0star);
    CHECK(rfull.component_order == 4);
    CHECK_FALSE(rfull.component_cyclic);

    // III: v(a) = 1, v(b) >= 2.
    CHECK(kodaira_type(curve_q(11, Rational(121)), 11).kodaira == KodairaSymbol::III);
    CHECK(kodaira_type(curve_q(11, Rational(121)), 11).component_order == 2);

    // IV: v(a) >= 2, v(b) = 2: m = 3 iff b/p^2 is a QR.
    ReductionData rIV = kodaira_type(curve_q(Rational(121), Rational(121 * 3)), 11);
    CHECK(rIV.kodaira == KodairaSymbol::IV);
    CHECK(rIV.component_order == 3);  // 3 is a QR mod 11
    ReductionData rIVb = kodaira_type(curve_q(Rational(121), Rational(121 * 2)), 11);
    CHECK(rIVb.kodaira == KodairaSymbol::IV);
    CHECK(rIVb.component_order == 1);  // 2 is not

    // IV*: v(a) >= 3, v(b) = 4.
    Rational p11(11);
    ReductionData rIVs = kodaira_type(curve_q(p11 * p11 * p11, Rational(BigInt(14641) * 3)), 11);
    CHECK(rIVs.kodaira == KodairaSymbol::IVstar);
    CHECK(rIVs.component_order == 3);

    // III*: v(a) = 3, v(b) >= 5.
    CHECK(kodaira_type(curve_q(p11 * p11 * p11, Rational(BigInt(161051))), 11).kodaira ==
          KodairaSymbol::IIIstar);

    // II*: v(a) >= 4, v(b) = 5.
    CHECK(kodaira_type(curve_q(p11 * p11 * p11 * p11, Rational(BigInt(161051))), 11).kodaira ==
          KodairaSymbol::IIstar);

    // v(a) = 2, v(b) = 3 without unit cancellation stays I0*: the residue
    // cubic T^3 + 3T - 2 has no root mod 11, so m = 1.
    ReductionData rI0b = kodaira_type(curve_q(Rational(3 * 121), Rational(-2 * 1331)), 11);
    CHECK(rI0b.kodaira == KodairaSymbol::I0star);
    CHECK(rI0b.component_order == 1);

    // In*: residue cubic with a double root. (x - p)^2 (x + 2p) perturbed at
    // level p^4: a = -3p^2, b = 2p^3 + p^4 gives v(delta) = 7, type I1*.
    ReductionData rIn = kodaira_type(curve_q(Rational(-3 * 121), Rational(2 * 1331 + 14641)), 11);
    CHECK(rIn.kodaira == KodairaSymbol::Instar);
    CHECK(rIn.kodaira_n == 1);
    CHECK(rIn.component_order == 4);  // A6/p^4 = 1 is a QR mod 11
    CHECK(rIn.component_cyclic);      // Z/4 for odd n

    // p < 5: unsupported marker.
    CHECK(kodaira_type(curve_q(2, 2), 2).kodaira == KodairaSymbol::Unsupported);

    // Multiplicative: In with n = v(delta).
    ReductionData rmult = kodaira_type(curve_q(1, 1), 31);
    CHECK(rmult.kodaira == KodairaSymbol::In);
    CHECK(rmult.kodaira_n == 1);
}

TEST_CASE("point counting") {
    CHECK(count_points_mod_p(curve_q(1, 0), 11) == 12);
    CHECK(count_points_mod_p(curve_q(1, 0), 19) == 20);
    CHECK(count_points_mod_p(curve_q(0, 1), 5) == 6);
    CHECK(count_points_mod_p(curve_q(0, 1), 5) == brute_count(0, 1, 5));
    CHECK_THROWS_AS(count_points_mod_p(curve_q(Rational(121), 0), 11), reduction_error);
}

TEST_CASE("residue group structure") {
    auto s11 = group_structure_mod_p(curve_q(1, 0), 11);
    CHECK(s11.first == 1);
    CHECK(s11.second == 12);

    auto s23 = group_structure_mod_p(curve_q(1, 0), 23);
    CHECK(s23.first == 1);
    CHECK(s23.second == 24);

    // x^3 - x splits over F_7: full 2-torsion, structure Z/2 x Z/4.
    auto s7 = group_structure_mod_p(curve_q(-1, 0), 7);
    CHECK(s7.first == 2);
    CHECK(s7.second == 4);
}

TEST_CASE("Hasse bound sanity on random good curves") {
    std::mt19937_64 rng(31337);
    std::vector<long long> primes;
    for (long long p = 5; p <= 200; ++p)
        if (is_small_prime(p)) primes.push_back(p);
    int done = 0;
    while (done < 50) {
        long long p = primes[rng() % primes.size()];
        long long a = static_cast<long long>(rng() % 19) - 9;
        long long b = static_cast<long long>(rng() % 19) - 9;
        if (4 * a * a * a + 27 * b * b == 0) continue;
        Curve<Rational> E = curve_q(a, b);
        if (reduction_kind(E, p) != ReductionKind::Good) continue;
        BigInt n = count_points_mod_p(E, p);
        double diff = std::abs(n.convert_to<double>() - (p + 1));
        CHECK(diff <= 2 * std::sqrt(static_cast<double>(p)));
        ++done;
    }
}

TEST_CASE("supersingular family: p = 3 mod 4, twists by units") {
    for (long long p = 11; p <= 100; p += 2) {
        if (!is_small_prime(p) || p % 4 != 3) continue;
        std::mt19937_64 rng(p);
        for (int trial = 0; trial < 5; ++trial) {
            long long d = 1 + static_cast<long long>(rng() % (p - 1));
            Curve<Rational> E = curve_q(Rational(d) * d, 0);
            CHECK(count_points_mod_p(E, p) == p + 1);
            CHECK(group_structure_mod_p(E, p).first == 1);
        }
    }
}

TEST_CASE("additive reduction invariants") {
    // residue_count = p for additive curves; K-types have m in {1,2,3}.
    for (auto [a, b, p] : {std::tuple<long long, long long, long long>{11, 11, 11},
                           {13, 169, 13},
                           {121, 121 * 3, 11},
                           {0, 2197 * 3, 13}}) {
        Curve<Rational> E = curve_q(a, b);
        ReductionData rd = analyze_reduction(E, p);
        if (rd.kind != ReductionKind::Additive) continue;
        CHECK(rd.residue_count == p);
        switch (rd.kodaira) {
            case KodairaSymbol::II:
            case KodairaSymbol::III:
            case KodairaSymbol::IV:
            case KodairaSymbol::IVstar:
            case KodairaSymbol::IIIstar:
            case KodairaSymbol::IIstar:
                CHECK(rd.component_order >= 1);
                CHECK(rd.component_order <= 3);
                break;
            default:
                break;
        }
    }
}

TEST_CASE("multiplicative residue count split vs nonsplit") {
    // y^2 = x^3 + x + 1 at p = 31: node at e = -3b/2a = -3/2 mod 31.
    ReductionData rd = analyze_reduction(curve_q(1, 1), 31);
    CHECK(rd.kind == ReductionKind::Multiplicative);
    // |E~_ns| is p-1 or p+1; cross-check by direct enumeration of smooth points.
    long long p = 31, smooth = 1;
    for (long long x = 0; x < p; ++x) {
        long long v = ((x * x % p * x) % p + x + 1) % p;
        long long e = (p - 3) * mod_inverse(2, p).convert_to<long long>() % p;
        for (long long y = 0; y < p; ++y) {
            if (y * y % p != v) continue;
            if (x == e && y == 0) continue;  // the node
            ++smooth;
        }
    }
    CHECK(rd.residue_count == smooth);
}
