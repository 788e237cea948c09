#pragma once

#include "kummer/suitability.hpp"

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace kummer {

// Point of the open surface Y: z^2 = f(x)f(y), z != 0, in the affine chart.
struct KummerPointY {
    Qp xi, eta, zeta;
};

// Validates zeta^2 = f(xi)f(eta) with zeta and f(xi) certified nonzero.
KummerPointY on_surface(const Curve<Qp>& E, const Qp& xi, const Qp& eta, const Qp& zeta);

// (Q1, Q2) on the model cy^2 = f(x), both off E[2] -> (x1, x2, c y1 y2).
KummerPointY q_c_map(const Curve<Qp>& E, const Qp& c, const Point<Qp>& Q1,
                     const Point<Qp>& Q2);

// P = q_c(Q) for Q = ((xi, 1), (eta, zeta/f(xi))) transported from the
// f(xi)-model to the c-model; requires f(xi)/c to be a p-adic square.
std::pair<Point<Qp>, Point<Qp>> lift_to_product(const Curve<Qp>& E,
                                                const KummerPointY& P, const Qp& c);

struct ApproximationResult {
    long long prime = 0;
    int k = 0;
    Rational c;
    Rational gen_x, gen_y;       // rational generator on the c-model
    BigInt n1, n2;
    long long achieved_exponent = 0;
    std::optional<std::array<Rational, 3>> rational_coords;  // when multipliers are small
    long long seed = -1;         // >= 0 when the target came from sample_y_point
    TwistCertificate twist;
};

// The end-to-end constructive density step: suitable c for the class of
// f(xi), lift to the twisted product, two elliptic dlogs, and a measured
// coordinate-wise distance (achieved_exponent) to the target.
ApproximationResult approximate(const Curve<Rational>& E, long long p,
                                const KummerPointY& P, int k,
                                int N = Qp::default_precision);

// Deterministic seeded point of Y(Q_p).
KummerPointY sample_y_point(const Curve<Qp>& E, unsigned long long seed);

// Recompute everything a certificate claims, from scratch: the generator
// certificate on the short model of E^c, the class membership of c, the
// multiples, and the coordinate-wise distance. Stored intermediate values
// are never trusted.
struct VerifyOutcome {
    bool ok = false;
    long long recomputed_exponent = 0;
    std::string failure;
};

VerifyOutcome verify_approximation(const Curve<Rational>& E, long long p,
                                   const KummerPointY& target,
                                   const Rational& c, const Rational& gen_x,
                                   const Rational& gen_y, const BigInt& n1,
                                   const BigInt& n2, int k,
                                   int N = Qp::default_precision);

struct CmCheck {
    std::string name;
    bool passed = false;
    std::string detail;
};

struct CmReport {
    long long prime = 0;
    bool all_passed = false;
    std::vector<CmCheck> checks;
};

// Theorem-level driver for y^2 = x^3 + x at p = 3 mod 4, p > 7:
// supersingular count, cyclicity, the cubic's factor pattern, procyclicity
// across the twist classes, and three end-to-end approximations at k = 3.
CmReport cm_driver(long long p, int N = Qp::default_precision);

} // namespace kummer
