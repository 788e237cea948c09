#pragma once

#include "kummer/elliptic.hpp"
#include "kummer/numeric.hpp"

#include <string>
#include <utility>

namespace kummer {

enum class ReductionKind { Good, Multiplicative, Additive };

enum class KodairaSymbol {
    I0, In, II, III, IV, I0star, Instar, IVstar, IIIstar, IIstar,
    Unsupported  // p < 5; analysis goes through explicit small-p criteria instead
};

std::string to_string(ReductionKind k);
std::string to_string(KodairaSymbol s, int n = 0);

// Local data of a curve over Q at p, computed on the short-form minimal model.
struct ReductionData {
    long long prime = 0;
    long long scaling_exponent = 0;   // working model is (a/p^{4s}, b/p^{6s})
    ReductionKind kind = ReductionKind::Good;
    KodairaSymbol kodaira = KodairaSymbol::Unsupported;
    int kodaira_n = 0;                // n of In / In*
    long long component_order = 0;    // m = |E(Q_p)/E^0(Q_p)|; 0 when not computed here
    bool component_cyclic = true;
    BigInt residue_count = 0;         // |E~_ns(F_p)| (0 when beyond enumeration budget)
    bool short_form_minimal_only = false;  // p in {2,3}: scaling is short-form-minimal only
};

struct MinimalModel {
    Curve<Rational> curve;
    long long scaling_exponent = 0;
    bool short_form_minimal_only = false;
};

// Scale (a, b) by (p^{-4s}, p^{-6s}) while v(a) >= 4 and v(b) >= 6 (first
// scaling up if the coefficients have p in a denominator). Minimal for p >= 5.
MinimalModel minimal_model_at(const Curve<Rational>& E, long long p);

ReductionKind reduction_kind(const Curve<Rational>& E, long long p);

// Tate's algorithm specialized to short Weierstrass form, p >= 5. Fills the
// Kodaira symbol, the component-group order m over Q_p and its cyclicity.
// For p < 5 the symbol is Unsupported and m is left at 0.
ReductionData kodaira_type(const Curve<Rational>& E, long long p);

// Full local summary: kind, Kodaira data, residue count.
ReductionData analyze_reduction(const Curve<Rational>& E, long long p,
                                long long enumeration_budget = 100000);

// Exact |E~(F_p)| by enumeration; requires good reduction and p within budget.
BigInt count_points_mod_p(const Curve<Rational>& E, long long p,
                          long long enumeration_budget = 100000);

// E~(F_p) as Z/n1 x Z/n2 with n1 | n2, by counting l-torsion; good reduction.
std::pair<BigInt, BigInt> group_structure_mod_p(const Curve<Rational>& E, long long p,
                                                long long enumeration_budget = 100000);

} // namespace kummer
