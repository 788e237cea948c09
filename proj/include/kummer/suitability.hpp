#pragma once

#include "kummer/qp_structure.hpp"

#include <optional>
#include <string>
#include <vector>

namespace kummer {

// Certificate that the square class of d0 contains an exact rational c with
// E^c(Q) dense in E^c(Q_p), witnessed by a rational topological generator.
struct TwistCertificate {
    long long prime = 0;
    SquareClass target_class;
    Rational d0;             // integer class representative
    Rational c_prime;        // g(u)/v^2, p-adically close to 1
    Rational c;              // d0 * c_prime; d0/c is a p-adic square
    Rational gen_x, gen_y;   // rational generator on the model c y^2 = f(x)
    long long truncation_exponent = 0;  // j
    bool d_over_c_square = false;
    GeneratorCertificate short_model_cert;  // on y^2 = x^3 + c^2 a x + c^3 b
};

// Short-form model of E^c and the embedding of a point from the cy^2 = f(x)
// chart: (x, y) -> (cx, c^2 y).
Curve<Rational> twist_short_model(const Curve<Rational>& E, const Rational& c);
Point<Rational> to_short_model(const Point<Rational>& P, const Rational& c);
Point<Qp> to_short_model(const Point<Qp>& P, const Qp& c);
Point<Qp> from_short_model(const Point<Qp>& P, const Qp& c);

// Verify the generator criterion for a given point (full image order in
// E/E^1 and minimal v(log(QG))); nullopt when the point fails it.
std::optional<GeneratorCertificate> certify_generator(const LocalCurve& E,
                                                      const FiniteQuotient& fq,
                                                      const Point<Qp>& G);

// The constructive step: topological generator (z, w) of E^{d0}(Q_p),
// truncated to integers (u, v) mod p^j, c' = g(u)/v^2, retried with larger j
// until (u, v) certifies as a generator of the c'-twist.
TwistCertificate construct_suitable_c(const Curve<Rational>& E, long long p,
                                      const SquareClass& d_class, int k,
                                      int N = Qp::default_precision);

struct ClassOutcome {
    SquareClass cls;
    std::optional<TwistCertificate> certificate;
    std::string failure;  // empty on success
};

struct SuitabilityReport {
    long long prime = 0;
    bool all_classes_ok = false;
    std::vector<ClassOutcome> classes;
};

// Run construct_suitable_c over every square class of Q_p^*.
SuitabilityReport check_suitable_twists(const Curve<Rational>& E, long long p, int k,
                                        int N = Qp::default_precision);

struct ProcyclicCurveWitness {
    Rational a, b;
    Rational j_invariant;
    std::string family;  // Kodaira symbol (p > 7) or the matched valuation criteria
    std::vector<std::pair<int, Verdict>> class_verdicts;  // class index -> procyclic
};

// Enumerate small-coefficient curves whose twists are all procyclic at p:
// Kodaira type in {II, III, IV, IV*, III*, II*} for p > 7, the explicit
// valuation criteria for p <= 7. Distinct j-invariants preferred.
std::vector<ProcyclicCurveWitness> search_procyclic_curves(long long p, int count,
                                                           int N = Qp::default_precision);

// For p > 7 and E of Kodaira type in K: every quadratic twist (class reps
// times trial squares) stays in K.
bool twist_stability_check(const Curve<Rational>& E, long long p, int trials = 1);

} // namespace kummer
