#pragma once

/**
 * Exact arithmetic for p-adic integers at finite precision and for the
 * Pruefer dual group Q_p/Z_p.
 *
 * Conventions:
 *  - A class in Q_p/Z_p is stored canonically as a/p^K with 0 <= a < p^K and
 *    either K = 0, a = 0 (the trivial class) or p coprime to a.
 *  - The trivial class has norm 1.
 *  - Phases ({.}_p values) are exact rationals in [0,1) with p-power
 *    denominator; the only floating-point step is the final complex
 *    exponential.
 *
 * Residues and dual numerators are kept in 64-bit integers; constructors
 * reject levels where p^level would not fit, which is far beyond anything
 * enumerable anyway. Census counts and general rational inputs use GMP.
 */

#include <cstdint>
#include <complex>
#include <numbers>
#include <span>
#include <vector>

#include <gmpxx.h>

#include "heisenvt/errors.hpp"

namespace heisenvt {

class Prime {
public:
    explicit Prime(long p) : p_(p) {
        if (p <= 2) throw std::invalid_argument("p must be an odd prime");
        for (long q = 3; q * q <= p; q += 2)
            if (p % q == 0) throw std::invalid_argument("p must be an odd prime");
        if (p % 2 == 0) throw std::invalid_argument("p must be an odd prime");
    }

    long value() const { return p_; }

    /// p^k as int64, rejecting overflow past 2^62.
    long pow(long k) const {
        if (k < 0) throw std::invalid_argument("negative exponent");
        long r = 1;
        for (long i = 0; i < k; ++i) {
            if (r > (1L << 62) / p_)
                throw std::overflow_error("p^k exceeds the 64-bit working range");
            r *= p_;
        }
        return r;
    }

    mpz_class pow_z(long k) const {
        mpz_class r;
        mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(p_),
                      static_cast<unsigned long>(k));
        return r;
    }

    friend bool operator==(const Prime& a, const Prime& b) { return a.p_ == b.p_; }
    friend bool operator!=(const Prime& a, const Prime& b) { return !(a == b); }

private:
    long p_;
};

/// p-adic valuation of a rational; infinite() encodes valuation(0) = +inf.
struct Valuation {
    bool is_infinite = false;
    long v = 0;

    static Valuation infinite() { return {true, 0}; }
    static Valuation finite(long v) { return {false, v}; }

    friend bool operator==(const Valuation& a, const Valuation& b) {
        return a.is_infinite == b.is_infinite && (a.is_infinite || a.v == b.v);
    }
};

inline long valuation_int(const Prime& p, long n) {
    if (n == 0) throw std::invalid_argument("valuation_int(0)");
    long v = 0;
    while (n % p.value() == 0) { n /= p.value(); ++v; }
    return v;
}

inline Valuation valuation(const Prime& p, const mpq_class& r) {
    if (r == 0) return Valuation::infinite();
    mpz_class num = r.get_num(), den = r.get_den();
    long v = 0;
    mpz_class q, rem;
    for (;;) {
        mpz_fdiv_qr_ui(q.get_mpz_t(), rem.get_mpz_t(), num.get_mpz_t(),
                       static_cast<unsigned long>(p.value()));
        if (rem != 0) break;
        num = q; ++v;
    }
    for (;;) {
        mpz_fdiv_qr_ui(q.get_mpz_t(), rem.get_mpz_t(), den.get_mpz_t(),
                       static_cast<unsigned long>(p.value()));
        if (rem != 0) break;
        den = q; --v;
    }
    return Valuation::finite(v);
}

/**
 * Exact rational in [0,1) with p-power denominator; the value type of the
 * fractional part {.}_p and of all character phases.
 */
class RationalPhase {
public:
    RationalPhase() : v_(0) {}

    static RationalPhase from_rational(const Prime& p, const mpq_class& q) {
        mpq_class r = q;
        r.canonicalize(); // mpq_class(a, b) does not canonicalize on its own
        r -= floor_to_int(r);
        RationalPhase ph;
        ph.v_ = r;
        ph.check_denominator(p);
        return ph;
    }

    const mpq_class& value() const { return v_; }
    bool is_zero() const { return v_ == 0; }
    double to_double() const { return v_.get_d(); }

    RationalPhase& operator+=(const RationalPhase& o) {
        v_ += o.v_;
        if (v_ >= 1) v_ -= 1;
        return *this;
    }

    friend RationalPhase operator+(RationalPhase a, const RationalPhase& b) {
        return a += b;
    }

    friend bool operator==(const RationalPhase& a, const RationalPhase& b) {
        return a.v_ == b.v_;
    }

private:
    static mpz_class floor_to_int(const mpq_class& q) {
        mpz_class f;
        mpz_fdiv_q(f.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
        return f;
    }

    void check_denominator(const Prime& p) const {
        mpz_class den = v_.get_den(), q, rem;
        while (den > 1) {
            mpz_fdiv_qr_ui(q.get_mpz_t(), rem.get_mpz_t(), den.get_mpz_t(),
                           static_cast<unsigned long>(p.value()));
            if (rem != 0)
                throw std::invalid_argument("phase denominator is not a power of p");
            den = q;
        }
    }

    mpq_class v_;
};

/// e^{2 pi i phase}; the single floating-point exponential of the library.
inline std::complex<double> unit_phase(const RationalPhase& phase) {
    return std::polar(1.0, 2.0 * std::numbers::pi * phase.to_double());
}

/**
 * Fractional part {r}_p of a rational with p-power denominator: zero when
 * the valuation is nonnegative, otherwise the negative-power digit tail.
 */
inline RationalPhase fractional_part(const Prime& p, const mpq_class& r) {
    mpz_class den = r.get_den(), q, rem;
    while (den > 1) {
        mpz_fdiv_qr_ui(q.get_mpz_t(), rem.get_mpz_t(), den.get_mpz_t(),
                       static_cast<unsigned long>(p.value()));
        if (rem != 0)
            throw std::invalid_argument("fractional_part: denominator is not a power of p");
        den = q;
    }
    return RationalPhase::from_rational(p, r);
}

/**
 * A truncated p-adic integer: the class of `value` in Z/p^level.
 */
class Residue {
public:
    Residue(const Prime& p, long level, long value)
        : p_(p), level_(level), modulus_(p.pow(level)) {
        if (level < 0) throw std::invalid_argument("negative level");
        value_ = mod(value, modulus_);
    }

    const Prime& prime() const { return p_; }
    long level() const { return level_; }
    long modulus() const { return modulus_; }
    long value() const { return value_; }

    bool is_zero() const { return value_ == 0; }

    /// The class modulo p^m, m <= level.
    long value_mod(long m) const {
        if (m > level_)
            throw InsufficientPrecision("residue known only mod p^" +
                                        std::to_string(level_));
        return value_ % p_.pow(m);
    }

    Residue& operator+=(const Residue& o) {
        require_compatible(o);
        value_ = mod(value_ + o.value_, modulus_);
        return *this;
    }

    friend Residue operator+(Residue a, const Residue& b) { return a += b; }

    friend Residue operator-(const Residue& a, const Residue& b) {
        a.require_compatible(b);
        return Residue(a.p_, a.level_, a.value_ - b.value_);
    }

    friend Residue operator-(const Residue& a) {
        return Residue(a.p_, a.level_, -a.value_);
    }

    friend Residue operator*(const Residue& a, const Residue& b) {
        a.require_compatible(b);
        return Residue(a.p_, a.level_, mulmod(a.value_, b.value_, a.modulus_));
    }

    Residue scaled(long k) const {
        return Residue(p_, level_, mulmod(mod(k, modulus_), value_, modulus_));
    }

    /// (this / 2) mod p^level; p odd, so 2 is invertible.
    Residue halved() const {
        long half = (value_ % 2 == 0) ? value_ / 2 : (value_ + modulus_) / 2;
        return Residue(p_, level_, half);
    }

    /// Valuation of the class; the zero class only bounds it below by level.
    Valuation val() const {
        if (value_ == 0) return Valuation::infinite(); // means ">= level" here
        return Valuation::finite(valuation_int(p_, value_));
    }

    friend bool operator==(const Residue& a, const Residue& b) {
        return a.p_ == b.p_ && a.level_ == b.level_ && a.value_ == b.value_;
    }
    friend bool operator!=(const Residue& a, const Residue& b) { return !(a == b); }

private:
    static long mod(long v, long m) {
        long r = v % m;
        return r < 0 ? r + m : r;
    }
    static long mulmod(long a, long b, long m) {
        // operands < 2^31 by the Prime::pow guard at construction
        return static_cast<long>((static_cast<__int128>(a) * b) % m);
    }
    void require_compatible(const Residue& o) const {
        if (p_ != o.p_ || level_ != o.level_)
            throw LevelMismatch("residue level/prime mismatch");
    }

    Prime p_;
    long level_;
    long modulus_;
    long value_;
};

/**
 * A class in Q_p/Z_p in canonical finite-digit form a/p^K.
 */
class DualScalar {
public:
    static DualScalar trivial(const Prime& p) { return DualScalar(p, 0, 0); }

    /// Canonicalizes a/p^K: reduces a mod p^K and strips common factors of p.
    static DualScalar make(const Prime& p, long numer, long denom_exp) {
        if (denom_exp < 0) throw std::invalid_argument("negative denominator exponent");
        long q = p.pow(denom_exp);
        numer %= q;
        if (numer < 0) numer += q;
        while (denom_exp > 0 && numer % p.value() == 0) {
            if (numer == 0) { denom_exp = 0; q = 1; break; }
            numer /= p.value();
            --denom_exp;
        }
        return DualScalar(p, numer, denom_exp);
    }

    const Prime& prime() const { return p_; }
    bool is_trivial() const { return denom_exp_ == 0; }
    long denom_exp() const { return denom_exp_; }
    long numer() const { return numer_; }

    /// |.|_p as an integer: p^K, with the trivial class reported as 1.
    long norm() const { return p_.pow(denom_exp_); }

    /// The representative a/p^K as an exact rational in [0,1).
    mpq_class representative() const {
        return mpq_class(numer_, p_.pow(denom_exp_));
    }

    friend DualScalar operator+(const DualScalar& a, const DualScalar& b) {
        a.require_same_prime(b);
        long k = std::max(a.denom_exp_, b.denom_exp_);
        long q = a.p_.pow(k);
        long num = a.numer_ * (q / a.p_.pow(a.denom_exp_)) +
                   b.numer_ * (q / b.p_.pow(b.denom_exp_));
        return make(a.p_, num, k);
    }

    friend DualScalar operator-(const DualScalar& a) {
        return make(a.p_, -a.numer_, a.denom_exp_);
    }

    friend DualScalar operator-(const DualScalar& a, const DualScalar& b) {
        return a + (-b);
    }

    friend bool operator==(const DualScalar& a, const DualScalar& b) {
        return a.p_ == b.p_ && a.denom_exp_ == b.denom_exp_ && a.numer_ == b.numer_;
    }
    friend bool operator!=(const DualScalar& a, const DualScalar& b) { return !(a == b); }

    /// Deterministic (norm, numerator) order used by all enumerations.
    friend bool operator<(const DualScalar& a, const DualScalar& b) {
        if (a.denom_exp_ != b.denom_exp_) return a.denom_exp_ < b.denom_exp_;
        return a.numer_ < b.numer_;
    }

private:
    DualScalar(const Prime& p, long numer, long denom_exp)
        : p_(p), numer_(numer), denom_exp_(denom_exp) {}

    void require_same_prime(const DualScalar& o) const {
        if (p_ != o.p_) throw LevelMismatch("dual scalar prime mismatch");
    }

    Prime p_;
    long numer_;
    long denom_exp_;
};

inline long dual_norm(const DualScalar& x) { return x.norm(); }

inline DualScalar dual_add(const DualScalar& a, const DualScalar& b) {
    return a + b;
}

/// Canonical representative of xi modulo p^{-m}Z_p: digits c_1..c_m zeroed.
inline DualScalar dual_reduce(const DualScalar& xi, long m) {
    if (m <= 0 || xi.is_trivial()) return xi;
    long k = xi.denom_exp();
    if (k <= m) return DualScalar::trivial(xi.prime());
    // keep digits at positions m+1..k: numerator mod p^{k-m}
    long keep = xi.numer() % xi.prime().pow(k - m);
    return DualScalar::make(xi.prime(), keep, k);
}

/// The class lambda * h; well defined because h is known mod p^K.
inline DualScalar dual_scale(const DualScalar& lambda, const Residue& h) {
    if (lambda.is_trivial()) return lambda;
    long hk = h.value_mod(lambda.denom_exp()); // throws if h too coarse
    long q = lambda.prime().pow(lambda.denom_exp());
    long num = static_cast<long>(
        (static_cast<__int128>(lambda.numer()) * hk) % q);
    return DualScalar::make(lambda.prime(), num, lambda.denom_exp());
}

inline DualScalar dual_scale(const DualScalar& lambda, long h) {
    if (lambda.is_trivial()) return lambda;
    long q = lambda.prime().pow(lambda.denom_exp());
    long hk = h % q; if (hk < 0) hk += q;
    long num = static_cast<long>(
        (static_cast<__int128>(lambda.numer()) * hk) % q);
    return DualScalar::make(lambda.prime(), num, lambda.denom_exp());
}

/// Exact phase {xi . u}_p of the pairing between dual and residue vectors.
inline RationalPhase dual_pair(std::span<const DualScalar> xi,
                               std::span<const Residue> u) {
    if (xi.size() != u.size())
        throw std::invalid_argument("dual_pair: length mismatch");
    if (xi.empty()) return RationalPhase();
    const Prime& p = xi.front().prime();
    long kmax = 0;
    for (const auto& x : xi) kmax = std::max(kmax, x.denom_exp());
    long q = p.pow(kmax);
    long num = 0;
    for (size_t i = 0; i < xi.size(); ++i) {
        if (xi[i].is_trivial()) continue;
        long k = xi[i].denom_exp();
        long uk = u[i].value_mod(k); // precision check
        long term = static_cast<long>(
            (static_cast<__int128>(xi[i].numer()) * uk) % p.pow(k));
        num = (num + term * (q / p.pow(k))) % q;
    }
    return RationalPhase::from_rational(p, mpq_class(num, q));
}

inline RationalPhase dual_pair(const DualScalar& xi, const Residue& u) {
    return dual_pair(std::span<const DualScalar>(&xi, 1),
                     std::span<const Residue>(&u, 1));
}

/// e^{2 pi i {xi . u}_p}
inline std::complex<double> character_value(std::span<const DualScalar> xi,
                                            std::span<const Residue> u) {
    return unit_phase(dual_pair(xi, u));
}

} // namespace heisenvt
