#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <stdexcept>
#include <string>

namespace kummer {

using BigInt   = boost::multiprecision::cpp_int;
using Rational = boost::multiprecision::cpp_rational;

inline BigInt numerator(const Rational& r) { return boost::multiprecision::numerator(r); }
inline BigInt denominator(const Rational& r) { return boost::multiprecision::denominator(r); }

// p^e for small exponents; e must be nonnegative.
inline BigInt big_pow(const BigInt& base, long long e) {
    BigInt r = 1, b = base;
    long long n = e;
    while (n > 0) {
        if (n & 1) r *= b;
        b *= b;
        n >>= 1;
    }
    return r;
}

// v_p(n) for n != 0.
inline long long padic_valuation(BigInt n, const BigInt& p) {
    if (n == 0) throw std::invalid_argument("padic_valuation: v_p(0) is infinite");
    long long v = 0;
    while (n % p == 0) {
        n /= p;
        ++v;
    }
    return v;
}

// Nonnegative remainder of a mod m, m > 0.
inline BigInt mod_pos(const BigInt& a, const BigInt& m) {
    BigInt r = a % m;
    if (r < 0) r += m;
    return r;
}

// Inverse of a mod m via extended gcd; requires gcd(a, m) = 1.
inline BigInt mod_inverse(const BigInt& a, const BigInt& m) {
    BigInt r0 = m, r1 = mod_pos(a, m);
    BigInt t0 = 0, t1 = 1;
    while (r1 != 0) {
        BigInt q = r0 / r1;
        BigInt r2 = r0 - q * r1;
        r0 = r1; r1 = r2;
        BigInt t2 = t0 - q * t1;
        t0 = t1; t1 = t2;
    }
    if (r0 != 1) throw std::domain_error("mod_inverse: not invertible");
    return mod_pos(t0, m);
}

inline BigInt mod_pow(BigInt base, BigInt exp, const BigInt& m) {
    BigInt r = 1;
    base = mod_pos(base, m);
    while (exp > 0) {
        if (exp % 2 == 1) r = r * base % m;
        base = base * base % m;
        exp /= 2;
    }
    return r;
}

// r mod m for a rational whose denominator is prime to m.
inline BigInt rational_mod(const Rational& r, const BigInt& m) {
    BigInt d = mod_pos(denominator(r), m);
    return mod_pos(mod_pos(numerator(r), m) * mod_inverse(d, m), m);
}

// Legendre symbol (a/p) for odd prime p: returns -1, 0 or 1.
inline int legendre_symbol(const BigInt& a, long long p) {
    BigInt r = mod_pos(a, p);
    if (r == 0) return 0;
    BigInt e = mod_pow(r, (BigInt(p) - 1) / 2, p);
    return e == 1 ? 1 : -1;
}

inline bool is_small_prime(long long n) {
    if (n < 2) return false;
    for (long long d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

inline std::string to_string(const BigInt& n) { return n.str(); }

inline std::string to_string(const Rational& r) {
    if (denominator(r) == 1) return numerator(r).str();
    return numerator(r).str() + "/" + denominator(r).str();
}

} // namespace kummer
