#pragma once

/**
 * The unitary dual of H_d(Z_p): enumeration of the dual ball B(n), explicit
 * representation matrices in the phi_h basis, characters, and the
 * Peter-Weyl census.
 *
 * A label is a triple (xi, eta, lambda) with (xi, eta) reduced beyond the
 * digits of lambda: every component satisfies dual_reduce(c, K) == c where
 * p^K = |lambda|_p. The representation of a nontrivial lambda acts on
 * functions on (Z/p^K)^d; basis vectors phi_h are indexed by h in flat
 * mixed-radix order (h = sum_i h_i p^{K i}).
 *
 * Entry convention: M(g)[h'][h] = (pi(g) phi_h, phi_{h'})
 *                 = e^{2 pi i {xi.x + eta.y + lambda(z + h'.y)}_p} [x = h - h'],
 * so matrix multiplication matches operator composition,
 * M(g1) M(g2) = M(g1 * g2).
 */

#include <algorithm>
#include <vector>

#include "heisenvt/group.hpp"
#include "heisenvt/matrix.hpp"

namespace heisenvt {

class RepLabel {
public:
    RepLabel(std::vector<DualScalar> xi, std::vector<DualScalar> eta,
             DualScalar lambda)
        : xi_(std::move(xi)), eta_(std::move(eta)), lambda_(std::move(lambda)) {
        if (xi_.size() != eta_.size())
            throw std::invalid_argument("xi/eta dimension mismatch");
        long m = lambda_.denom_exp();
        for (const auto& c : xi_)
            if (dual_reduce(c, m) != c)
                throw std::invalid_argument("xi component not reduced beyond lambda");
        for (const auto& c : eta_)
            if (dual_reduce(c, m) != c)
                throw std::invalid_argument("eta component not reduced beyond lambda");
    }

    static RepLabel trivial(const Prime& p, long d) {
        std::vector<DualScalar> t(d, DualScalar::trivial(p));
        return RepLabel(t, t, DualScalar::trivial(p));
    }

    const Prime& prime() const { return lambda_.prime(); }
    long d() const { return static_cast<long>(xi_.size()); }
    const std::vector<DualScalar>& xi() const { return xi_; }
    const std::vector<DualScalar>& eta() const { return eta_; }
    const DualScalar& lambda() const { return lambda_; }

    /// K with |lambda|_p = p^K; the h index range is (Z/p^K)^d.
    long central_exp() const { return lambda_.denom_exp(); }

    /// d_pi = |lambda|_p^d
    long dim() const { return prime().pow(central_exp() * d()); }

    bool is_trivial() const {
        if (!lambda_.is_trivial()) return false;
        for (const auto& c : xi_) if (!c.is_trivial()) return false;
        for (const auto& c : eta_) if (!c.is_trivial()) return false;
        return true;
    }

    /// log_p of ||(xi, eta, lambda)||_p (trivial components count as norm 1).
    long norm_exp() const {
        long k = lambda_.denom_exp();
        for (const auto& c : xi_) k = std::max(k, c.denom_exp());
        for (const auto& c : eta_) k = std::max(k, c.denom_exp());
        return k;
    }

    friend bool operator==(const RepLabel& a, const RepLabel& b) {
        return a.lambda_ == b.lambda_ && a.xi_ == b.xi_ && a.eta_ == b.eta_;
    }
    friend bool operator!=(const RepLabel& a, const RepLabel& b) { return !(a == b); }

    /// (lambda, xi, eta) lexicographic in the (norm, numerator) component
    /// order; enumerate_dual emits labels in exactly this order.
    friend bool operator<(const RepLabel& a, const RepLabel& b) {
        auto lt = [](const DualScalar& x, const DualScalar& y) { return x < y; };
        if (a.lambda_ != b.lambda_) return lt(a.lambda_, b.lambda_);
        for (size_t i = 0; i < a.xi_.size(); ++i)
            if (a.xi_[i] != b.xi_[i]) return lt(a.xi_[i], b.xi_[i]);
        for (size_t i = 0; i < a.eta_.size(); ++i)
            if (a.eta_[i] != b.eta_[i]) return lt(a.eta_[i], b.eta_[i]);
        return false;
    }

private:
    std::vector<DualScalar> xi_, eta_;
    DualScalar lambda_;
};

/// Classes c with dual_reduce(c, k) == c and norm <= p^n, in (norm,
/// numerator) order. These are the admissible (xi, eta) components for a
/// lambda with |lambda|_p = p^k.
inline std::vector<DualScalar> reduced_classes(const Prime& p, long k, long n) {
    std::vector<DualScalar> out;
    out.push_back(DualScalar::trivial(p));
    for (long j = k + 1; j <= n; ++j) {
        long cap = p.pow(j - k);
        for (long b = 1; b < cap; ++b)
            if (b % p.value() != 0) out.push_back(DualScalar::make(p, b, j));
    }
    return out;
}

/// The dual ball B(n): all labels with ||(xi, eta, lambda)||_p <= p^n, in
/// the documented deterministic order, without duplicates.
inline std::vector<RepLabel> enumerate_dual(const Prime& p, long d, long n) {
    std::vector<RepLabel> out;
    for (long k = 0; k <= n; ++k) {
        std::vector<DualScalar> lambdas;
        if (k == 0) {
            lambdas.push_back(DualScalar::trivial(p));
        } else {
            for (long a = 1; a < p.pow(k); ++a)
                if (a % p.value() != 0) lambdas.push_back(DualScalar::make(p, a, k));
        }
        std::vector<DualScalar> comps = reduced_classes(p, k, n);
        for (const auto& lambda : lambdas) {
            // odometer over the 2d components, rightmost fastest
            std::vector<size_t> pos(2 * d, 0);
            for (;;) {
                std::vector<DualScalar> xi, eta;
                for (long i = 0; i < d; ++i) xi.push_back(comps[pos[i]]);
                for (long i = 0; i < d; ++i) eta.push_back(comps[pos[d + i]]);
                out.emplace_back(std::move(xi), std::move(eta), lambda);
                long i = 2 * d - 1;
                while (i >= 0 && ++pos[i] == comps.size()) pos[i--] = 0;
                if (i < 0) break;
            }
        }
    }
    return out;
}

struct RepMatrix {
    RepLabel label;
    CMatrix entries;
};

namespace detail {

/// Decode a flat h index into base-p^m digits (d of them, index i fastest).
inline void decode_h(long h, long qm, long d, std::span<long> out) {
    for (long i = 0; i < d; ++i) {
        out[i] = h % qm;
        h /= qm;
    }
}

inline long encode_h(std::span<const long> digits, long qm) {
    long h = 0;
    for (long i = static_cast<long>(digits.size()) - 1; i >= 0; --i)
        h = h * qm + digits[i];
    return h;
}

} // namespace detail

/**
 * Per-label evaluator for representation matrices, working on raw quotient
 * coordinates with 64-bit phase numerators over the common denominator
 * p^level. This is the hot path behind transforms and symbol assembly; the
 * arithmetic is still exact (phases are integers mod p^level, and the only
 * floating step is one table of p^level roots of unity).
 */
class RepEvaluator {
public:
    RepEvaluator(const RepLabel& label, long level)
        : d_(label.d()),
          m_(label.central_exp()),
          level_(level),
          qm_(label.prime().pow(m_)),
          qL_(label.prime().pow(level)),
          dim_(label.dim()),
          lam_num_(label.lambda().numer()),
          lam_q_(label.prime().pow(label.lambda().denom_exp())) {
        if (level < label.norm_exp())
            throw InsufficientPrecision(
                "group element level " + std::to_string(level) +
                " below label norm exponent " + std::to_string(label.norm_exp()));
        if (qL_ > (1L << 31))
            throw std::overflow_error("phase denominator exceeds the fast range");
        const Prime& p = label.prime();
        for (long i = 0; i < d_; ++i) {
            xi_num_.push_back(label.xi()[i].numer());
            xi_q_.push_back(p.pow(label.xi()[i].denom_exp()));
            eta_num_.push_back(label.eta()[i].numer());
            eta_q_.push_back(p.pow(label.eta()[i].denom_exp()));
        }
        roots_.resize(qL_);
        for (long k = 0; k < qL_; ++k)
            roots_[k] = std::polar(1.0, 2.0 * std::numbers::pi *
                                            static_cast<double>(k) /
                                            static_cast<double>(qL_));
    }

    long dim() const { return dim_; }
    long level() const { return level_; }

    /// Phase numerator (over p^level) of {xi.x + eta.y + lambda z}.
    long base_numerator(std::span<const long> coords) const {
        long num = 0;
        for (long i = 0; i < d_; ++i) {
            num += ((xi_num_[i] * (coords[i] % xi_q_[i])) % xi_q_[i]) *
                   (qL_ / xi_q_[i]);
            num += ((eta_num_[i] * (coords[d_ + i] % eta_q_[i])) % eta_q_[i]) *
                   (qL_ / eta_q_[i]);
        }
        num += ((lam_num_ * (coords[2 * d_] % lam_q_)) % lam_q_) * (qL_ / lam_q_);
        return num % qL_;
    }

    /**
     * Sparse column form of the matrix: for each column h, the single
     * nonzero row index and its value. coords = (x, y, z) at this->level().
     */
    void columns(std::span<const long> coords, std::span<long> rows,
                 std::span<cdouble> vals) const {
        long base = base_numerator(coords);
        if (m_ == 0) {
            rows[0] = 0;
            vals[0] = roots_[base];
            return;
        }
        std::vector<long> hcol(d_), hrow(d_);
        for (long h = 0; h < dim_; ++h) {
            detail::decode_h(h, qm_, d_, hcol);
            long hy = 0; // h'.y mod p^m with h' = h - x
            for (long i = 0; i < d_; ++i) {
                hrow[i] = (hcol[i] - coords[i] % qm_) % qm_;
                if (hrow[i] < 0) hrow[i] += qm_;
                hy = (hy + hrow[i] * (coords[d_ + i] % qm_)) % qm_;
            }
            long num = (base + ((lam_num_ * hy) % lam_q_) * (qL_ / lam_q_)) % qL_;
            rows[h] = detail::encode_h(hrow, qm_);
            vals[h] = roots_[num];
        }
    }

    CMatrix matrix(std::span<const long> coords) const {
        CMatrix mat(static_cast<size_t>(dim_), static_cast<size_t>(dim_));
        std::vector<long> rows(dim_);
        std::vector<cdouble> vals(dim_);
        columns(coords, rows, vals);
        for (long h = 0; h < dim_; ++h)
            mat(static_cast<size_t>(rows[h]), static_cast<size_t>(h)) = vals[h];
        return mat;
    }

private:
    long d_, m_, level_, qm_, qL_, dim_;
    long lam_num_, lam_q_;
    std::vector<long> xi_num_, xi_q_, eta_num_, eta_q_;
    std::vector<cdouble> roots_;
};

namespace detail {

inline std::vector<long> group_coords(const GroupElement& g) {
    long d = g.dim();
    std::vector<long> c(2 * d + 1);
    for (long i = 0; i < d; ++i) c[i] = g.x()[i].value();
    for (long i = 0; i < d; ++i) c[d + i] = g.y()[i].value();
    c[2 * d] = g.z().value();
    return c;
}

} // namespace detail

/**
 * The matrix of pi_{(xi,eta,lambda)}(g) in the phi_h basis:
 * M(g)[h'][h] = e^{2 pi i {xi.x + eta.y + lambda(z + h'.y)}_p} [x = h - h'].
 * For trivial lambda this is the 1x1 character chi_{xi,eta}(g).
 */
inline CMatrix rep_matrix_entries(const RepLabel& label, const GroupElement& g) {
    RepEvaluator eval(label, g.level());
    return eval.matrix(detail::group_coords(g));
}

inline RepMatrix rep_matrix(const RepLabel& label, const GroupElement& g) {
    return RepMatrix{label, rep_matrix_entries(label, g)};
}

/// Trace of rep_matrix; includes the |lambda|_p^d dimension factor.
inline cdouble character_value(const RepLabel& label, const GroupElement& g) {
    return rep_matrix_entries(label, g).trace();
}

/// (Sum over B(n) of d_pi^2, p^{n(2d+1)}); equal on success.
inline std::pair<mpz_class, mpz_class> verify_peter_weyl(const Prime& p, long d,
                                                         long n) {
    mpz_class sum = 0;
    for (const auto& label : enumerate_dual(p, d, n))
        sum += p.pow_z(2 * label.central_exp() * d);
    return {sum, p.pow_z(n * (2 * d + 1))};
}

} // namespace heisenvt
