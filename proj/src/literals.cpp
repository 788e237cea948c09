#include "kummer/literals.hpp"

#include "kummer/errors.hpp"

#include <algorithm>
#include <cctype>
#include <regex>

namespace kummer {

namespace {

std::string strip(const std::string& s) {
    size_t b = s.find_first_not_of(" \t");
    size_t e = s.find_last_not_of(" \t");
    if (b == std::string::npos) return "";
    return s.substr(b, e - b + 1);
}

} // namespace

Rational parse_rational(const std::string& s0) {
    std::string s = strip(s0);
    static const std::regex re(R"(^([+-]?\d+)(?:/([+-]?\d+))?$)");
    std::smatch m;
    if (!std::regex_match(s, m, re))
        throw domain_error("parse_rational: malformed '" + s0 + "'");
    BigInt num(m[1].str());
    BigInt den = m[2].matched ? BigInt(m[2].str()) : BigInt(1);
    if (den == 0) throw domain_error("parse_rational: zero denominator");
    return Rational(num, den);
}

std::string to_literal(const Qp& v) { return v.to_string(); }

Qp parse_padic(const std::string& s0, long long default_p, int default_N) {
    std::string s = strip(s0);
    static const std::regex re(R"(^(.*?)\+\s*O\((\d+)\^(-?\d+)\)$)");
    std::smatch m;
    if (std::regex_match(s, m, re)) {
        Rational r = parse_rational(m[1].str());
        long long p = std::stoll(m[2].str());
        long long k = std::stoll(m[3].str());
        if (r == 0) return Qp::zero_at(p, k);
        long long v = padic_valuation(numerator(r), p) - padic_valuation(denominator(r), p);
        if (k - v < 1)
            throw precision_error("parse_padic: absolute precision at or below valuation");
        return Qp::from_rational(r, p, static_cast<int>(k - v));
    }
    if (default_p == 0)
        throw domain_error("parse_padic: bare rational needs a prime context: '" + s0 + "'");
    return Qp::from_rational(parse_rational(s), default_p, default_N);
}

std::string to_literal(const Point<Qp>& P) {
    if (P.inf) return "inf";
    return "(" + P.x.to_string() + ", " + P.y.to_string() + ")";
}

Point<Qp> parse_point(const std::string& s0, long long p, int N) {
    std::string s = strip(s0);
    if (s == "inf" || s == "O") return Point<Qp>::infinity();
    if (s.size() < 2 || s.front() != '(' || s.back() != ')')
        throw domain_error("parse_point: expected '(x, y)' or 'inf'");
    std::string inner = s.substr(1, s.size() - 2);
    // split on the comma that separates the coordinates (literals contain no commas)
    size_t cut = inner.find(',');
    if (cut == std::string::npos) throw domain_error("parse_point: missing comma");
    return Point<Qp>::affine(parse_padic(inner.substr(0, cut), p, N),
                             parse_padic(inner.substr(cut + 1), p, N));
}

Json reduction_to_json(const ReductionData& rd) {
    Json j;
    j["p"] = rd.prime;
    j["kind"] = to_string(rd.kind);
    j["kodaira"] = to_string(rd.kodaira, rd.kodaira_n);
    j["m"] = rd.component_order;
    j["residue_count"] = rd.residue_count.str();
    j["scaling"] = rd.scaling_exponent;
    if (rd.short_form_minimal_only) j["short_form_minimal_only"] = true;
    return j;
}

Json structure_to_json(const GroupStructure& gs) {
    Json j;
    j["p"] = gs.prime;
    j["M"] = gs.finite_part.str();
    j["Q"] = gs.quotient_order.str();
    if (gs.procyclic == Verdict::Unknown)
        j["procyclic"] = "unknown";
    else
        j["procyclic"] = gs.procyclic == Verdict::Yes;
    if (gs.generator) {
        j["generator"] = {gs.generator->generator.x.to_string(),
                          gs.generator->generator.y.to_string()};
        j["evidence"]["generator"] = {
            {"Q", gs.generator->quotient_order.str()},
            {"min_log_valuation", gs.generator->min_log_valuation},
            {"log_valuation_QG", gs.generator->log_valuation_QG},
            {"sweep_x", gs.generator->sweep_x},
        };
    }
    Json scan = Json::array();
    for (const auto& e : gs.evidence.torsion_scan)
        scan.push_back({{"l", e.ell}, {"present", to_string(e.present)}});
    j["evidence"]["torsion_scan"] = scan;
    j["evidence"]["quotient_cyclic"] = gs.evidence.quotient_cyclic;
    j["evidence"]["quotient_method"] = gs.evidence.quotient_method;
    j["evidence"]["p_torsion_rule"] = gs.evidence.p_torsion_rule;
    j["evidence"]["m"] = gs.evidence.component_order;
    if (!gs.evidence.note.empty()) j["evidence"]["note"] = gs.evidence.note;
    return j;
}

Json certificate_to_json(const TwistCertificate& tc) {
    Json j;
    j["p"] = tc.prime;
    j["class"] = tc.target_class.class_index;
    j["d0"] = to_string(tc.d0);
    j["c"] = to_string(tc.c);
    j["c_prime"] = to_string(tc.c_prime);
    j["generator"] = {to_string(tc.gen_x), to_string(tc.gen_y)};
    j["j"] = tc.truncation_exponent;
    j["verified"] = tc.d_over_c_square;
    return j;
}

Json suitability_to_json(const SuitabilityReport& rep) {
    Json j;
    j["p"] = rep.prime;
    j["all_classes"] = rep.all_classes_ok;
    Json arr = Json::array();
    for (const auto& c : rep.classes) {
        Json e;
        e["class"] = c.cls.class_index;
        e["representative"] = to_string(c.cls.representative);
        if (c.certificate) e["certificate"] = certificate_to_json(*c.certificate);
        else e["failure"] = c.failure;
        arr.push_back(e);
    }
    j["classes"] = arr;
    return j;
}

Json search_to_json(const std::vector<ProcyclicCurveWitness>& curves) {
    Json arr = Json::array();
    for (const auto& w : curves) {
        Json e;
        e["a"] = to_string(w.a);
        e["b"] = to_string(w.b);
        e["j_invariant"] = to_string(w.j_invariant);
        e["family"] = w.family;
        Json cv = Json::array();
        for (const auto& [idx, v] : w.class_verdicts)
            cv.push_back({{"class", idx}, {"procyclic", to_string(v)}});
        e["classes"] = cv;
        arr.push_back(e);
    }
    return Json{{"curves", arr}};
}

Json cm_report_to_json(const CmReport& rep) {
    Json j;
    j["p"] = rep.prime;
    j["all_passed"] = rep.all_passed;
    Json arr = Json::array();
    for (const auto& c : rep.checks)
        arr.push_back({{"check", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    j["checks"] = arr;
    return j;
}

Json approximation_to_json(const ApproximationResult& res, const Curve<Rational>& E,
                           const KummerPointY& target) {
    Json j;
    j["p"] = res.prime;
    j["k"] = res.k;
    j["curve"] = {{"a", to_string(E.a)}, {"b", to_string(E.b)}};
    j["c"] = to_string(res.c);
    j["G"] = {to_string(res.gen_x), to_string(res.gen_y)};
    j["n1"] = res.n1.str();
    j["n2"] = res.n2.str();
    j["achieved"] = res.achieved_exponent;
    j["target"] = {target.xi.to_string(), target.eta.to_string(), target.zeta.to_string()};
    if (res.rational_coords) {
        const auto& rc = *res.rational_coords;
        j["coords"] = {to_string(rc[0]), to_string(rc[1]), to_string(rc[2])};
    }
    j["seed"] = res.seed;
    return j;
}

StoredApproximation approximation_from_json(const Json& j) {
    StoredApproximation out;
    try {
        out.prime = j.at("p").get<long long>();
        out.k = j.at("k").get<int>();
        out.a = parse_rational(j.at("curve").at("a").get<std::string>());
        out.b = parse_rational(j.at("curve").at("b").get<std::string>());
        out.c = parse_rational(j.at("c").get<std::string>());
        out.gen_x = parse_rational(j.at("G").at(0).get<std::string>());
        out.gen_y = parse_rational(j.at("G").at(1).get<std::string>());
        out.n1 = BigInt(j.at("n1").get<std::string>());
        out.n2 = BigInt(j.at("n2").get<std::string>());
        out.achieved = j.at("achieved").get<long long>();
        out.seed = j.value("seed", -1LL);
        out.target_xi = j.at("target").at(0).get<std::string>();
        out.target_eta = j.at("target").at(1).get<std::string>();
        out.target_zeta = j.at("target").at(2).get<std::string>();
    } catch (const Json::exception& e) {
        throw domain_error(std::string("approximation_from_json: ") + e.what());
    }
    return out;
}

} // namespace kummer
