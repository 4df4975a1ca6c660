#pragma once

/**
 * The Heisenberg group H_d(Z_p) truncated at level n: group law, inverses,
 * Lie algebra with exponential/BCH, p-adic norm and quotient enumeration.
 *
 * Group law on tuples (x, y, z) in Z_p^d x Z_p^d x Z_p:
 *     (x, y, z) * (x', y', z') = (x + x', y + y', z + z' + x . y').
 *
 * Quotient index layout (stable, relied upon by LevelFunction):
 *     index = flat(x) + p^{nd} flat(y) + p^{2nd} flat(z),
 *     flat(v) = sum_i v_i p^{n i}.
 */

#include <vector>

#include "heisenvt/padic.hpp"

namespace heisenvt {

class GroupElement {
public:
    GroupElement(std::vector<Residue> x, std::vector<Residue> y, Residue z)
        : x_(std::move(x)), y_(std::move(y)), z_(std::move(z)) {
        for (const auto& r : x_) require_level(r);
        for (const auto& r : y_) require_level(r);
        if (x_.size() != y_.size())
            throw std::invalid_argument("x/y dimension mismatch");
    }

    static GroupElement identity(const Prime& p, long d, long level) {
        std::vector<Residue> zero(d, Residue(p, level, 0));
        return GroupElement(zero, zero, Residue(p, level, 0));
    }

    static GroupElement from_values(const Prime& p, long level,
                                    const std::vector<long>& x,
                                    const std::vector<long>& y, long z) {
        std::vector<Residue> rx, ry;
        rx.reserve(x.size());
        ry.reserve(y.size());
        for (long v : x) rx.emplace_back(p, level, v);
        for (long v : y) ry.emplace_back(p, level, v);
        return GroupElement(std::move(rx), std::move(ry), Residue(p, level, z));
    }

    long dim() const { return static_cast<long>(x_.size()); }
    long level() const { return z_.level(); }
    const Prime& prime() const { return z_.prime(); }

    const std::vector<Residue>& x() const { return x_; }
    const std::vector<Residue>& y() const { return y_; }
    const Residue& z() const { return z_; }

    bool is_identity() const {
        for (const auto& r : x_) if (!r.is_zero()) return false;
        for (const auto& r : y_) if (!r.is_zero()) return false;
        return z_.is_zero();
    }

    friend bool operator==(const GroupElement& a, const GroupElement& b) {
        return a.x_ == b.x_ && a.y_ == b.y_ && a.z_ == b.z_;
    }

private:
    void require_level(const Residue& r) const {
        if (r.level() != z_.level() || r.prime() != z_.prime())
            throw LevelMismatch("group element components at different levels");
    }

    std::vector<Residue> x_, y_;
    Residue z_;
};

inline Residue dot(const std::vector<Residue>& a, const std::vector<Residue>& b) {
    if (a.size() != b.size()) throw std::invalid_argument("dot: dimension mismatch");
    Residue acc(a.front().prime(), a.front().level(), 0);
    for (size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

inline GroupElement multiply(const GroupElement& g, const GroupElement& h) {
    if (g.dim() != h.dim() || g.level() != h.level() || g.prime() != h.prime())
        throw LevelMismatch("multiply: incompatible group elements");
    std::vector<Residue> x, y;
    x.reserve(g.dim());
    y.reserve(g.dim());
    for (long i = 0; i < g.dim(); ++i) {
        x.push_back(g.x()[i] + h.x()[i]);
        y.push_back(g.y()[i] + h.y()[i]);
    }
    Residue z = g.z() + h.z() + dot(g.x(), h.y());
    return GroupElement(std::move(x), std::move(y), std::move(z));
}

inline GroupElement inverse(const GroupElement& g) {
    std::vector<Residue> x, y;
    x.reserve(g.dim());
    y.reserve(g.dim());
    for (long i = 0; i < g.dim(); ++i) {
        x.push_back(-g.x()[i]);
        y.push_back(-g.y()[i]);
    }
    Residue z = -g.z() + dot(g.x(), g.y());
    return GroupElement(std::move(x), std::move(y), std::move(z));
}

/**
 * An element of the Heisenberg Z_p-Lie algebra h_d, coordinates (a, b, c)
 * with bracket [U, V] = (0, 0, a_U . b_V - a_V . b_U).
 */
class LieVector {
public:
    LieVector(std::vector<Residue> a, std::vector<Residue> b, Residue c)
        : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)) {
        if (a_.size() != b_.size())
            throw std::invalid_argument("a/b dimension mismatch");
    }

    static LieVector from_values(const Prime& p, long level,
                                 const std::vector<long>& a,
                                 const std::vector<long>& b, long c) {
        std::vector<Residue> ra, rb;
        for (long v : a) ra.emplace_back(p, level, v);
        for (long v : b) rb.emplace_back(p, level, v);
        return LieVector(std::move(ra), std::move(rb), Residue(p, level, c));
    }

    long dim() const { return static_cast<long>(a_.size()); }
    long level() const { return c_.level(); }
    const Prime& prime() const { return c_.prime(); }
    const std::vector<Residue>& a() const { return a_; }
    const std::vector<Residue>& b() const { return b_; }
    const Residue& c() const { return c_; }

    LieVector scaled(const Residue& t) const {
        std::vector<Residue> a, b;
        for (const auto& r : a_) a.push_back(r * t);
        for (const auto& r : b_) b.push_back(r * t);
        return LieVector(std::move(a), std::move(b), c_ * t);
    }

private:
    std::vector<Residue> a_, b_;
    Residue c_;
};

/// X * Y = X + Y + [X,Y]/2  (p > 2, so division by 2 is exact).
inline LieVector bch_star(const LieVector& u, const LieVector& v) {
    if (u.dim() != v.dim() || u.level() != v.level())
        throw LevelMismatch("bch_star: incompatible vectors");
    std::vector<Residue> a, b;
    for (long i = 0; i < u.dim(); ++i) {
        a.push_back(u.a()[i] + v.a()[i]);
        b.push_back(u.b()[i] + v.b()[i]);
    }
    Residue bracket = dot(u.a(), v.b()) - dot(v.a(), u.b());
    Residue c = u.c() + v.c() + bracket.halved();
    return LieVector(std::move(a), std::move(b), std::move(c));
}

/// exp(a, b, c) = (a, b, c + (a.b)/2); satisfies exp(U * V) = exp(U) exp(V).
inline GroupElement exp_map(const LieVector& u) {
    Residue z = u.c() + dot(u.a(), u.b()).halved();
    return GroupElement(u.a(), u.b(), std::move(z));
}

/// The one-parameter subgroup t -> exp(t V).
inline GroupElement one_parameter(const LieVector& v, const Residue& t) {
    return exp_map(v.scaled(t));
}

/**
 * p-adic norm report. The norm is p^{-exponent}; `at_most` marks the zero
 * coset at level n, whose true norm is only bounded by p^{-n}.
 */
struct PadicNorm {
    long exponent = 0;
    bool at_most = false;

    double to_double(const Prime& p) const {
        double r = 1.0;
        for (long i = 0; i < exponent; ++i) r /= static_cast<double>(p.value());
        return r;
    }
};

inline PadicNorm group_norm(const GroupElement& g) {
    long n = g.level();
    long minval = n;
    auto update = [&](const Residue& r) {
        if (!r.is_zero()) minval = std::min(minval, valuation_int(r.prime(), r.value()));
    };
    for (const auto& r : g.x()) update(r);
    for (const auto& r : g.y()) update(r);
    update(g.z());
    return PadicNorm{minval, minval == n};
}

/**
 * Index bookkeeping for the finite quotient H_d(Z/p^n): the documented
 * mixed-radix layout plus group operations expressed directly on indices.
 */
class QuotientLayout {
public:
    QuotientLayout(const Prime& p, long d, long n)
        : p_(p), d_(d), n_(n), q_(p.pow(n)) {
        if (d < 1) throw std::invalid_argument("d must be >= 1");
        size_ = 1;
        for (long i = 0; i < 2 * d + 1; ++i) {
            if (size_ > (static_cast<size_t>(1) << 42) / static_cast<size_t>(q_))
                throw BudgetExceeded("quotient size exceeds the enumerable range");
            size_ *= static_cast<size_t>(q_);
        }
    }

    const Prime& prime() const { return p_; }
    long d() const { return d_; }
    long level() const { return n_; }
    long q() const { return q_; }         // p^n
    size_t size() const { return size_; } // p^{n(2d+1)}

    /// coords layout: x_0..x_{d-1}, y_0..y_{d-1}, z; x varies fastest.
    size_t index(std::span<const long> coords) const {
        size_t idx = 0, stride = 1;
        for (long i = 0; i < 2 * d_ + 1; ++i) {
            idx += static_cast<size_t>(coords[i]) * stride;
            stride *= static_cast<size_t>(q_);
        }
        return idx;
    }

    void decode(size_t idx, std::span<long> coords) const {
        for (long i = 0; i < 2 * d_ + 1; ++i) {
            coords[i] = static_cast<long>(idx % static_cast<size_t>(q_));
            idx /= static_cast<size_t>(q_);
        }
    }

    size_t index_of(const GroupElement& g) const {
        std::vector<long> c(2 * d_ + 1);
        for (long i = 0; i < d_; ++i) c[i] = g.x()[i].value();
        for (long i = 0; i < d_; ++i) c[d_ + i] = g.y()[i].value();
        c[2 * d_] = g.z().value();
        return index(c);
    }

    GroupElement element(size_t idx) const {
        std::vector<long> c(2 * d_ + 1);
        decode(idx, c);
        std::vector<long> x(c.begin(), c.begin() + d_);
        std::vector<long> y(c.begin() + d_, c.begin() + 2 * d_);
        return GroupElement::from_values(p_, n_, x, y, c[2 * d_]);
    }

    /// Group product computed directly on coordinate buffers.
    void multiply_coords(std::span<const long> g, std::span<const long> h,
                         std::span<long> out) const {
        long acc = 0;
        for (long i = 0; i < d_; ++i) {
            out[i] = (g[i] + h[i]) % q_;
            out[d_ + i] = (g[d_ + i] + h[d_ + i]) % q_;
            acc = (acc + g[i] * (h[d_ + i] % q_)) % q_;
        }
        out[2 * d_] = (g[2 * d_] + h[2 * d_] + acc) % q_;
    }

    void inverse_coords(std::span<const long> g, std::span<long> out) const {
        long acc = 0;
        for (long i = 0; i < d_; ++i) {
            out[i] = (q_ - g[i]) % q_;
            out[d_ + i] = (q_ - g[d_ + i]) % q_;
            acc = (acc + g[i] * g[d_ + i]) % q_;
        }
        out[2 * d_] = ((q_ - g[2 * d_]) + acc) % q_;
    }

    size_t multiply_index(size_t gi, size_t hi) const {
        std::vector<long> a(2 * d_ + 1), b(2 * d_ + 1), c(2 * d_ + 1);
        decode(gi, a);
        decode(hi, b);
        multiply_coords(a, b, c);
        return index(c);
    }

    size_t inverse_index(size_t gi) const {
        std::vector<long> a(2 * d_ + 1), c(2 * d_ + 1);
        decode(gi, a);
        inverse_coords(a, c);
        return index(c);
    }

    PadicNorm norm_at(size_t idx) const {
        std::vector<long> c(2 * d_ + 1);
        decode(idx, c);
        long minval = n_;
        for (long v : c)
            if (v != 0) minval = std::min(minval, valuation_int(p_, v));
        return PadicNorm{minval, minval == n_};
    }

private:
    Prime p_;
    long d_, n_, q_;
    size_t size_;
};

/// All p^{n(2d+1)} elements of the level-n quotient in index order.
inline std::vector<GroupElement> enumerate_quotient(const Prime& p, long d, long n) {
    QuotientLayout layout(p, d, n);
    std::vector<GroupElement> out;
    out.reserve(layout.size());
    for (size_t i = 0; i < layout.size(); ++i) out.push_back(layout.element(i));
    return out;
}

} // namespace heisenvt
