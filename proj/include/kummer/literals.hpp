#pragma once

#include "kummer/kummer_surface.hpp"

#include <json.hpp>

#include <string>

namespace kummer {

using Json = nlohmann::json;

// "num/den" (exact rational). Throws domain_error on malformed input.
Rational parse_rational(const std::string& s);

// "num/den + O(p^k)": value num/den at absolute precision k. A bare rational
// is accepted and given the default relative precision.
std::string to_literal(const Qp& v);
Qp parse_padic(const std::string& s, long long default_p = 0,
               int default_N = Qp::default_precision);

// "(x, y)" with rational or p-adic coordinate literals; "inf" for O.
std::string to_literal(const Point<Qp>& P);
Point<Qp> parse_point(const std::string& s, long long p, int N = Qp::default_precision);

Json reduction_to_json(const ReductionData& rd);
Json structure_to_json(const GroupStructure& gs);
Json certificate_to_json(const TwistCertificate& tc);
Json suitability_to_json(const SuitabilityReport& rep);
Json search_to_json(const std::vector<ProcyclicCurveWitness>& curves);
Json cm_report_to_json(const CmReport& rep);

// ApproximationResult round trip; the target travels inside the certificate
// so verification can recompute everything.
Json approximation_to_json(const ApproximationResult& res, const Curve<Rational>& E,
                           const KummerPointY& target);

struct StoredApproximation {
    Rational a, b;
    long long prime = 0;
    int k = 0;
    Rational c, gen_x, gen_y;
    BigInt n1, n2;
    long long achieved = 0;
    long long seed = -1;
    std::string target_xi, target_eta, target_zeta;
};

StoredApproximation approximation_from_json(const Json& j);

} // namespace kummer
