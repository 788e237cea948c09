#pragma once

#include "kummer/elliptic.hpp"
#include "kummer/localdata.hpp"
#include "kummer/padic.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace kummer {

// A curve over Q localized at p: integral short-form reduced model, its
// p-adic embedding at working precision, and reduction data.
struct LocalCurve {
    Curve<Rational> model;
    Curve<Qp> qp;
    long long p = 0;
    int precision = Qp::default_precision;
    ReductionData red;
    long long singular_x = -1;  // residue coordinates of the singular point,
    long long singular_y = -1;  // -1/-1 for good reduction
};

LocalCurve make_local(const Curve<Rational>& E, long long p,
                      int N = Qp::default_precision);

// Position of a point in the filtration E superset E^0 superset E^1.
enum class FiltrationLevel { OutsideE0, InE0NotE1, InE1 };

struct FiltrationPosition {
    FiltrationLevel level = FiltrationLevel::InE1;
    long long log_valuation = 0;   // v(-x/y) when in E^1; inf_prec marker for O
};

FiltrationPosition reduce_point(const LocalCurve& E, const Point<Qp>& P);

// Formal-group logarithm evaluated at t = -x/y; requires P in E^1.
// Additive, injective on E^1, with v(log P) = v(t). For p = 2 and v(t) = 1
// the value is computed as log(2P)/2, inside the convergent range.
Qp formal_log(const LocalCurve& E, const Point<Qp>& P);

// y for a given x when f(x) is a nonzero square (or exactly zero); nullopt
// when f(x) is a certified non-square or undecidable.
std::optional<Point<Qp>> lift_x(const Curve<Qp>& E, const Qp& x);

// The finite quotient E(Q_p)/E^1(Q_p).
struct FiniteQuotient {
    BigInt order = 0;              // Q
    bool cyclic = false;
    long long component_order = 1; // m = |E/E^0|
    std::string method;            // "residue count" | "tate" | "coset probe"
};

FiniteQuotient finite_quotient(const LocalCurve& E);

// Order of the image of P in E/E^1 (smallest k >= 1 with kP in E^1); the
// coset-level oracle behind generator certification.
BigInt image_order_in_quotient(const LocalCurve& E, const FiniteQuotient& fq,
                               const Point<Qp>& P);

// Independent sampling-based recomputation of E/E^1: coset reps of E^0 are
// found by sweeping the singular residue ray, the group they generate is
// closed off, and element orders are measured directly. Primary source of m
// at p in {2,3}, cross-check at p >= 5.
FiniteQuotient probe_quotient(const LocalCurve& E, long long sweep_budget = 0);

enum class Verdict { Yes, No, Unknown };

std::string to_string(Verdict v);

struct TorsionScanEntry {
    int ell = 0;
    Verdict present = Verdict::Unknown;
};

struct GeneratorCertificate {
    Point<Qp> generator;
    BigInt quotient_order = 0;          // Q
    long long min_log_valuation = 1;    // mu, the minimal v(log) on E^1
    long long log_valuation_QG = 0;     // v(log(Q*G)), must equal mu
    std::vector<BigInt> cofactors_checked;  // Q/l with image of (Q/l)G nontrivial
    long long sweep_x = 0;
};

struct StructureEvidence {
    std::vector<TorsionScanEntry> torsion_scan;
    bool quotient_cyclic = false;
    std::string quotient_method;
    std::string p_torsion_rule;
    long long component_order = 0;
    std::string note;
};

struct GroupStructure {
    long long prime = 0;
    Verdict procyclic = Verdict::Unknown;
    BigInt finite_part = 0;     // M with E(Q_p) = Z_p x Z/M, when procyclic
    BigInt quotient_order = 0;  // Q
    std::optional<GeneratorCertificate> generator;
    StructureEvidence evidence;
};

// Assembles quotient data, the torsion scan, and the procyclicity verdict;
// attaches a certified topological generator when procyclic and requested.
GroupStructure qp_group_structure(const Curve<Rational>& E, long long p,
                                  int N = Qp::default_precision,
                                  bool with_generator = true);

// Deterministic sweep x = 0, 1, 2, ... accepting G whose image has full
// order Q in E/E^1 and with v(log(Q*G)) at the filtration minimum.
GeneratorCertificate find_topological_generator(const LocalCurve& E,
                                                const FiniteQuotient& fq);

// Smallest n >= 0 with n*G - T in E^1 and v(log(nG - T)) >= k + 1:
// brute residue r in [0, Q), then one p-adic division in the formal group.
BigInt elliptic_dlog(const LocalCurve& E, const FiniteQuotient& fq,
                     const GeneratorCertificate& G, const Point<Qp>& T, int k);

struct ClosureReport {
    bool covered = true;
    long long samples_run = 0;
    std::string witness;   // first failure, empty when covered
};

// Brute-force density oracle: sample points of E(Q_p), run elliptic_dlog on
// each, and re-verify v(log(nG - T)) >= k + 1 from scratch.
ClosureReport closure_covers(const LocalCurve& E, const FiniteQuotient& fq,
                             const GeneratorCertificate& G, int sample_size, int k);

} // namespace kummer
