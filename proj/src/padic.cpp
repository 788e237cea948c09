#include "kummer/padic.hpp"

#include <algorithm>
#include <map>
#include <sstream>

namespace kummer {

namespace {

void check_prime(long long p) {
    if (!is_small_prime(p)) throw domain_error("Qp: " + std::to_string(p) + " is not prime");
}

} // namespace

Qp::Qp(long long p, bool zero, long long zero_prec, long long v, BigInt unit, int N)
    : p_(p), zero_(zero), zero_prec_(zero_prec), v_(v), u_(std::move(unit)), n_(N) {}

Qp Qp::zero(long long p) {
    check_prime(p);
    return Qp(p, true, inf_prec, 0, 0, 0);
}

Qp Qp::zero_at(long long p, long long abs_prec) {
    check_prime(p);
    return Qp(p, true, abs_prec, 0, 0, 0);
}

Qp Qp::from_parts(long long p, long long valuation, const BigInt& unit, int N) {
    check_prime(p);
    if (N < 1) throw precision_error("Qp: relative precision must be >= 1");
    BigInt m = big_pow(p, N);
    BigInt u = mod_pos(unit, m);
    if (u == 0 || u % p == 0)
        throw domain_error("Qp: unit part must be prime to p");
    return Qp(p, false, 0, valuation, u, N);
}

Qp Qp::from_integer(const BigInt& n, long long p, int N) {
    return from_rational(n, 1, p, N);
}

Qp Qp::from_rational(const BigInt& num, const BigInt& den, long long p, int N) {
    check_prime(p);
    if (den == 0) throw zero_division_error("Qp: zero denominator");
    if (N < 1) throw precision_error("Qp: relative precision must be >= 1");
    if (num == 0) return zero(p);
    BigInt n = num, d = den;
    long long v = 0;
    while (n % p == 0) { n /= p; ++v; }
    while (d % p == 0) { d /= p; --v; }
    BigInt m = big_pow(p, N);
    BigInt u = mod_pos(n, m) * mod_inverse(d, m) % m;
    return Qp(p, false, 0, v, u, N);
}

Qp Qp::from_rational(const Rational& r, long long p, int N) {
    return from_rational(numerator(r), denominator(r), p, N);
}

long long Qp::valuation() const {
    if (zero_) {
        if (is_exact_zero()) return inf_prec;  // infinity marker
        throw precision_error("Qp: valuation of a value only known to be 0 + O(p^" +
                              std::to_string(zero_prec_) + ")");
    }
    return v_;
}

long long Qp::abs_precision() const {
    if (zero_) return zero_prec_;
    return v_ + n_;
}

int Qp::rel_precision() const {
    if (zero_) throw precision_error("Qp: zero marker has no relative precision");
    return n_;
}

const BigInt& Qp::unit() const {
    if (zero_) throw precision_error("Qp: zero marker has no unit part");
    return u_;
}

Qp Qp::operator-() const {
    if (zero_) return *this;
    BigInt m = big_pow(p_, n_);
    return Qp(p_, false, 0, v_, m - u_, n_);
}

Qp Qp::operator+(const Qp& o) const {
    if (p_ != o.p_) throw domain_error("Qp: mixed primes");
    if (zero_ && o.zero_)
        return zero_at(p_, std::min(zero_prec_, o.zero_prec_));
    if (zero_) return o.truncated_to(zero_prec_);
    if (o.zero_) return truncated_to(o.zero_prec_);

    long long A = std::min(abs_precision(), o.abs_precision());
    long long vmin = std::min(v_, o.v_);
    if (A <= vmin) throw precision_error("Qp: sum would carry no guaranteed digits");
    // Work modulo p^(A - vmin) on the shifted units.
    long long digits = A - vmin;
    BigInt m = big_pow(p_, digits);
    BigInt s = u_ * big_pow(p_, v_ - vmin) + o.u_ * big_pow(p_, o.v_ - vmin);
    s = mod_pos(s, m);
    if (s == 0) return zero_at(p_, A);
    long long dv = padic_valuation(s, p_);
    BigInt u = s / big_pow(p_, dv);
    long long v = vmin + dv;
    int N = static_cast<int>(A - v);
    return Qp(p_, false, 0, v, mod_pos(u, big_pow(p_, N)), N);
}

Qp Qp::operator*(const Qp& o) const {
    if (p_ != o.p_) throw domain_error("Qp: mixed primes");
    if (is_exact_zero() || o.is_exact_zero()) return zero(p_);
    if (zero_ || o.zero_) {
        // 0 + O(p^A) times a value of valuation v is 0 + O(p^(A+v)).
        const Qp& z = zero_ ? *this : o;
        const Qp& x = zero_ ? o : *this;
        if (x.zero_) return zero_at(p_, z.zero_prec_ + x.zero_prec_);
        return zero_at(p_, z.zero_prec_ + x.v_);
    }
    int N = std::min(n_, o.n_);
    BigInt m = big_pow(p_, N);
    return Qp(p_, false, 0, v_ + o.v_, u_ * o.u_ % m, N);
}

Qp Qp::inv() const {
    if (zero_)
        throw zero_division_error("Qp: inverting a value indistinguishable from zero");
    BigInt m = big_pow(p_, n_);
    return Qp(p_, false, 0, -v_, mod_inverse(u_, m), n_);
}

Qp Qp::mul_int(const BigInt& n) const {
    if (n == 0) return zero(p_);
    if (zero_) {
        if (is_exact_zero()) return *this;
        return zero_at(p_, zero_prec_ + padic_valuation(n, p_));
    }
    BigInt v = n;
    long long dv = padic_valuation(v, p_);
    v /= big_pow(p_, dv);
    BigInt m = big_pow(p_, n_);
    return Qp(p_, false, 0, v_ + dv, mod_pos(u_ * v, m), n_);
}

Qp Qp::div_int(const BigInt& n) const {
    if (n == 0) throw zero_division_error("Qp: division by integer zero");
    if (zero_) {
        if (is_exact_zero()) return *this;
        return zero_at(p_, zero_prec_ - padic_valuation(n, p_));
    }
    BigInt v = n;
    long long dv = padic_valuation(v, p_);
    v /= big_pow(p_, dv);
    BigInt m = big_pow(p_, n_);
    return Qp(p_, false, 0, v_ - dv, mod_pos(u_ * mod_inverse(v, m), m), n_);
}

bool Qp::is_square() const {
    if (zero_)
        throw precision_error("Qp: squareness of a value indistinguishable from zero");
    if (p_ == 2) {
        if (n_ < 3)
            throw precision_error("Qp: squareness mod 2 needs 3 unit digits");
        return v_ % 2 == 0 && u_ % 8 == 1;
    }
    if (v_ % 2 != 0) return false;
    return legendre_symbol(u_, p_) == 1;
}

Qp Qp::sqrt() const {
    if (!is_square()) throw nonsquare_error("Qp: sqrt of a non-square");
    long long v = v_ / 2;
    if (p_ == 2) {
        // Lift x^2 = u from x = 1 mod 8 one bit at a time; pick the root = 1 mod 4.
        int N = n_;
        BigInt target = u_;
        BigInt x = 1;
        for (int k = 3; k < N; ++k) {
            BigInt mk1 = big_pow(2, k + 1);
            if (mod_pos(x * x - target, mk1) != 0) x += big_pow(2, k - 1);
        }
        // One quadratic-precision digit is spent on the lift.
        int Nr = N - 1;
        if (Nr < 1) throw precision_error("Qp: sqrt leaves no guaranteed digits");
        BigInt m = big_pow(2, Nr);
        x = mod_pos(x, m);
        if (mod_pos(x, 4) != 1) x = mod_pos(m - x, m);
        if (x % 2 == 0) x += m;  // keep odd after reduction (Nr >= 1 keeps parity)
        return Qp(2, false, 0, v, mod_pos(x, m), Nr);
    }
    // Base root mod p by Tonelli-Shanks, then Newton lifting.
    BigInt p = p_;
    BigInt a = mod_pos(u_, p);
    BigInt x0;
    if (mod_pos(p, 4) == 3) {
        x0 = mod_pow(a, (p + 1) / 4, p);
    } else {
        // Tonelli-Shanks for p = 1 mod 4.
        BigInt q = p - 1;
        long long s = 0;
        while (q % 2 == 0) { q /= 2; ++s; }
        BigInt z = 2;
        while (legendre_symbol(z, p_) != -1) ++z;
        BigInt m = s, c = mod_pow(z, q, p), t = mod_pow(a, q, p),
               r = mod_pow(a, (q + 1) / 2, p);
        while (t != 1) {
            BigInt tt = t;
            long long i = 0;
            while (tt != 1) { tt = tt * tt % p; ++i; }
            BigInt b = mod_pow(c, big_pow(2, static_cast<long long>(m.convert_to<long long>()) - i - 1), p);
            m = i;
            c = b * b % p;
            t = t * c % p;
            r = r * b % p;
        }
        x0 = r;
    }
    int N = n_;
    BigInt mod = big_pow(p_, N);
    BigInt x = x0;
    long long prec = 1;
    while (prec < N) {
        prec = std::min<long long>(2 * prec, N);
        BigInt mk = big_pow(p_, prec);
        BigInt inv2x = mod_inverse(2 * x % mk, mk);
        x = mod_pos(x - (x * x - u_) % mk * inv2x, mk);
    }
    x = mod_pos(x, mod);
    // Deterministic branch: least significant digit in [1, p/2].
    if (2 * (x % p_) > p_) x = mod - x;
    return Qp(p_, false, 0, v, x, N);
}

BigInt Qp::lift_mod(long long k) const {
    if (zero_) {
        if (zero_prec_ < k)
            throw precision_error("Qp: lift beyond known precision of zero marker");
        return 0;
    }
    if (v_ < 0) throw domain_error("Qp: lift of a value with negative valuation");
    if (abs_precision() < k)
        throw precision_error("Qp: lift beyond absolute precision");
    return mod_pos(u_ * big_pow(p_, v_), big_pow(p_, k));
}

Rational Qp::rational_representative() const {
    if (zero_) return Rational(0);
    if (v_ >= 0) return Rational(u_ * big_pow(p_, v_));
    return Rational(u_, big_pow(p_, -v_));
}

Qp Qp::truncated_to(long long abs_prec) const {
    if (zero_) return zero_at(p_, std::min(zero_prec_, abs_prec));
    if (abs_prec >= abs_precision()) return *this;
    if (abs_prec <= v_) return zero_at(p_, abs_prec);
    int N = static_cast<int>(abs_prec - v_);
    return Qp(p_, false, 0, v_, mod_pos(u_, big_pow(p_, N)), N);
}

std::string Qp::to_string() const {
    std::ostringstream os;
    if (zero_) {
        os << "0";
        if (!is_exact_zero()) os << " + O(" << p_ << "^" << zero_prec_ << ")";
        return os.str();
    }
    os << kummer::to_string(rational_representative())
       << " + O(" << p_ << "^" << abs_precision() << ")";
    return os.str();
}

std::vector<SquareClass> square_class_reps(long long p) {
    check_prime(p);
    std::vector<SquareClass> out;
    if (p == 2) {
        int idx = 0;
        for (long long r : {1, -1, 2, -2, 5, -5, 10, -10})
            out.push_back({2, Rational(r), idx++});
        return out;
    }
    long long u = 2;
    while (legendre_symbol(u, p) != -1) ++u;
    int idx = 0;
    for (long long r : {1LL, u, p, u * p})
        out.push_back({p, Rational(r), idx++});
    return out;
}

int square_class_index(const Qp& a) {
    if (a.is_zero()) throw precision_error("square_class_index: zero input");
    long long p = a.prime();
    auto reps = square_class_reps(p);
    int N = std::max(4, a.rel_precision());
    for (const auto& cls : reps) {
        Qp r = Qp::from_rational(cls.representative, p, N);
        if ((a * r.inv()).is_square()) return cls.class_index;
    }
    throw error("square_class_index: representatives do not cover input");
}

long long QpPoly::prime() const {
    if (coeff.empty()) throw domain_error("QpPoly: empty polynomial");
    return coeff.front().prime();
}

int QpPoly::degree() const {
    for (int i = static_cast<int>(coeff.size()) - 1; i >= 0; --i)
        if (!coeff[i].is_zero()) return i;
    return -1;
}

Qp QpPoly::eval(const Qp& x) const {
    Qp acc = Qp::zero(x.prime());
    for (int i = static_cast<int>(coeff.size()) - 1; i >= 0; --i)
        acc = acc * x + coeff[i];
    return acc;
}

QpPoly QpPoly::derivative() const {
    QpPoly d;
    for (size_t i = 1; i < coeff.size(); ++i)
        d.coeff.push_back(coeff[i].mul_int(static_cast<long long>(i)));
    if (d.coeff.empty() && !coeff.empty()) d.coeff.push_back(Qp::zero(prime()));
    return d;
}

namespace {

// f with integer coefficient representatives mod p^W.
struct IntPoly {
    std::vector<BigInt> c;
    BigInt eval_mod(const BigInt& x, const BigInt& m) const {
        BigInt acc = 0;
        for (int i = static_cast<int>(c.size()) - 1; i >= 0; --i)
            acc = mod_pos(acc * x + c[i], m);
        return acc;
    }
    IntPoly derivative(const BigInt& m) const {
        IntPoly d;
        for (size_t i = 1; i < c.size(); ++i)
            d.c.push_back(mod_pos(c[i] * BigInt(static_cast<long long>(i)), m));
        return d;
    }
};

// h(r + p t) as a polynomial in t, computed mod m: Taylor shift by repeated
// partial Horner passes, then the substitution u = p t.
IntPoly shift_scale(const IntPoly& h, const BigInt& r, long long p, const BigInt& m) {
    std::vector<BigInt> c = h.c;
    int n = static_cast<int>(c.size());
    for (int k = 0; k < n; ++k)
        for (int i = n - 2; i >= k; --i)
            c[static_cast<size_t>(i)] = mod_pos(c[static_cast<size_t>(i)] +
                                                r * c[static_cast<size_t>(i) + 1], m);
    IntPoly out;
    BigInt pw = 1;
    for (int k = 0; k < n; ++k) {
        out.c.push_back(mod_pos(c[static_cast<size_t>(k)] * pw, m));
        pw = pw * p % m;
    }
    return out;
}

// Roots of h in Z_p mod p^prec, where h has unit content mod p^avail.
// Recursion: simple residue roots Newton-lift; residue roots where h'
// vanishes shift to h(r + pt)/p^s and recurse one digit deeper.
void zp_roots(const IntPoly& h, long long p, long long avail, long long prec,
              int depth, int max_depth, std::vector<BigInt>& out) {
    if (depth > max_depth)
        throw separation_error("hensel_roots: roots do not separate within precision budget");
    if (avail < 2)
        throw separation_error("hensel_roots: working precision exhausted before separation");
    BigInt m = big_pow(p, avail);
    IntPoly hd = h.derivative(m);
    for (long long r = 0; r < p; ++r) {
        if (h.eval_mod(r, p) != 0) continue;
        BigInt fdr = hd.eval_mod(r, m);
        if (fdr % p != 0) {
            // Simple root: Newton iteration doubles correct digits.
            BigInt x = r;
            for (int it = 0; it < 64; ++it) {
                BigInt fx = h.eval_mod(x, m);
                if (fx == 0) break;
                BigInt fdx = hd.eval_mod(x, m);
                x = mod_pos(x - fx * mod_inverse(fdx, m), m);
            }
            out.push_back(mod_pos(x, big_pow(p, std::min(avail, prec))));
            continue;
        }
        IntPoly k = shift_scale(h, BigInt(r), p, m);
        long long s = avail;
        for (const auto& c : k.c)
            if (c != 0) s = std::min(s, padic_valuation(c, p));
        if (s >= avail)
            throw separation_error("hensel_roots: shifted polynomial vanishes at working precision");
        IntPoly k2;
        BigInt ps = big_pow(p, s);
        BigInt m2 = big_pow(p, avail - s);
        for (const auto& c : k.c) k2.c.push_back(mod_pos(c / ps, m2));
        std::vector<BigInt> sub;
        zp_roots(k2, p, avail - s, prec - 1, depth + 1, max_depth, sub);
        for (const auto& t : sub)
            out.push_back(mod_pos(BigInt(r) + p * t, big_pow(p, std::min(avail, prec))));
    }
}

} // namespace

std::vector<Qp> hensel_roots(const QpPoly& f, int N) {
    long long p = f.prime();
    int deg = f.degree();
    if (deg < 0) throw domain_error("hensel_roots: zero polynomial");

    // Normalize to an integral polynomial with unit content.
    long long vmin = LLONG_MAX;
    for (const auto& c : f.coeff)
        if (!c.is_zero()) vmin = std::min(vmin, c.valuation());
    const int slack = 8;
    long long W = N + slack;
    BigInt mW = big_pow(p, W);
    IntPoly g;
    for (const auto& c : f.coeff) {
        if (c.is_zero()) {
            if (c.abs_precision() != Qp::inf_prec && c.abs_precision() - vmin < W)
                throw precision_error("hensel_roots: coefficient precision below budget");
            g.c.push_back(0);
        } else {
            Qp scaled = Qp::from_parts(p, c.valuation() - vmin, c.unit(), c.rel_precision());
            if (scaled.abs_precision() < W)
                throw precision_error("hensel_roots: coefficient precision below budget");
            g.c.push_back(scaled.lift_mod(W));
        }
    }
    // Strip content so g mod p is a nonzero polynomial.
    long long content = W;
    for (const auto& c : g.c)
        if (c != 0) content = std::min(content, padic_valuation(c, p));
    if (content > 0) {
        BigInt pc = big_pow(p, content);
        BigInt m2 = big_pow(p, W - content);
        for (auto& c : g.c) c = mod_pos(c / pc, m2);
    }

    std::vector<BigInt> raw;
    zp_roots(g, p, W - content, N, 0, static_cast<int>(W), raw);

    std::vector<BigInt> roots;  // deduped representatives mod p^N
    BigInt mN = big_pow(p, N);
    for (const auto& r : raw) {
        BigInt key = mod_pos(r, mN);
        if (std::find(roots.begin(), roots.end(), key) == roots.end())
            roots.push_back(key);
    }
    std::sort(roots.begin(), roots.end());
    std::vector<Qp> out;
    for (const auto& r : roots) {
        Qp root = r == 0 ? Qp::zero_at(p, N)
                         : Qp::from_integer(r, p, static_cast<int>(N)).truncated_to(N);
        if (!f.eval(root).is_zero())
            throw error("hensel_roots: lifted candidate fails the defining equation");
        out.push_back(root);
    }
    return out;
}

} // namespace kummer
