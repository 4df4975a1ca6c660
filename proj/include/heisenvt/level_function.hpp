#pragma once

/**
 * Complex-valued functions on the finite quotient H_d(Z/p^n), stored as a
 * dense array in the QuotientLayout mixed-radix order. These model the
 * smooth (level-n locally constant) functions on H_d(Z_p).
 */

#include <random>

#include "heisenvt/group.hpp"
#include "heisenvt/matrix.hpp"

namespace heisenvt {

inline constexpr size_t kMaxLevelFunctionSize = size_t(1) << 22;

class LevelFunction {
public:
    LevelFunction(const Prime& p, long d, long n) : layout_(p, d, n) {
        if (layout_.size() > kMaxLevelFunctionSize)
            throw BudgetExceeded("level function of " +
                                 std::to_string(layout_.size()) +
                                 " points exceeds the dense budget");
        data_.assign(layout_.size(), cdouble(0.0, 0.0));
    }

    static LevelFunction constant(const Prime& p, long d, long n, cdouble c) {
        LevelFunction f(p, d, n);
        for (auto& v : f.data_) v = c;
        return f;
    }

    static LevelFunction delta(const Prime& p, long d, long n, size_t at) {
        LevelFunction f(p, d, n);
        f.data_.at(at) = 1.0;
        return f;
    }

    /// Deterministic pseudo-random function, components uniform in [-1, 1].
    static LevelFunction random(const Prime& p, long d, long n, uint64_t seed) {
        LevelFunction f(p, d, n);
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> u(-1.0, 1.0);
        for (auto& v : f.data_) v = cdouble(u(rng), u(rng));
        return f;
    }

    const QuotientLayout& layout() const { return layout_; }
    const Prime& prime() const { return layout_.prime(); }
    long d() const { return layout_.d(); }
    long level() const { return layout_.level(); }
    size_t size() const { return data_.size(); }

    cdouble& operator[](size_t i) { return data_[i]; }
    const cdouble& operator[](size_t i) const { return data_[i]; }

    cdouble at(const GroupElement& g) const { return data_[layout_.index_of(g)]; }

    std::span<const cdouble> values() const { return data_; }
    std::span<cdouble> values() { return data_; }

    LevelFunction& operator+=(const LevelFunction& o) {
        require_same_layout(o);
        for (size_t i = 0; i < data_.size(); ++i) data_[i] += o.data_[i];
        return *this;
    }

    LevelFunction& operator-=(const LevelFunction& o) {
        require_same_layout(o);
        for (size_t i = 0; i < data_.size(); ++i) data_[i] -= o.data_[i];
        return *this;
    }

    LevelFunction& operator*=(cdouble s) {
        for (auto& v : data_) v *= s;
        return *this;
    }

    friend LevelFunction operator-(LevelFunction a, const LevelFunction& b) {
        return a -= b;
    }
    friend LevelFunction operator+(LevelFunction a, const LevelFunction& b) {
        return a += b;
    }
    friend LevelFunction operator*(cdouble s, LevelFunction a) { return a *= s; }

    double max_abs() const {
        double m = 0.0;
        for (const auto& v : data_) m = std::max(m, std::abs(v));
        return m;
    }

    void require_same_layout(const LevelFunction& o) const {
        if (prime() != o.prime() || d() != o.d() || level() != o.level())
            throw LevelMismatch("level function layout mismatch");
    }

private:
    QuotientLayout layout_;
    std::vector<cdouble> data_;
};

/// Mean over the quotient: the normalized Haar integral of a level-n function.
inline cdouble haar_average(const LevelFunction& f) {
    cdouble s = 0.0;
    for (size_t i = 0; i < f.size(); ++i) s += f[i];
    return s / static_cast<double>(f.size());
}

/// Haar inner product <f, g> = mean of f conj(g).
inline cdouble haar_inner(const LevelFunction& f, const LevelFunction& g) {
    f.require_same_layout(g);
    cdouble s = 0.0;
    for (size_t i = 0; i < f.size(); ++i) s += f[i] * std::conj(g[i]);
    return s / static_cast<double>(f.size());
}

inline double l2_norm(const LevelFunction& f) {
    double s = 0.0;
    for (size_t i = 0; i < f.size(); ++i) s += std::norm(f[i]);
    return std::sqrt(s / static_cast<double>(f.size()));
}

/// (L_g f)(x) = f(g^{-1} * x)
inline LevelFunction translate_left(const LevelFunction& f, const GroupElement& g) {
    const auto& layout = f.layout();
    LevelFunction out(f.prime(), f.d(), f.level());
    size_t gi = layout.index_of(inverse(g));
    std::vector<long> a(2 * f.d() + 1), b(2 * f.d() + 1), c(2 * f.d() + 1);
    layout.decode(gi, a);
    for (size_t i = 0; i < f.size(); ++i) {
        layout.decode(i, b);
        layout.multiply_coords(a, b, c);
        out[i] = f[layout.index(c)];
    }
    return out;
}

/// (R_g f)(x) = f(x * g)
inline LevelFunction translate_right(const LevelFunction& f, const GroupElement& g) {
    const auto& layout = f.layout();
    LevelFunction out(f.prime(), f.d(), f.level());
    size_t gi = layout.index_of(g);
    std::vector<long> a(2 * f.d() + 1), b(2 * f.d() + 1), c(2 * f.d() + 1);
    layout.decode(gi, b);
    for (size_t i = 0; i < f.size(); ++i) {
        layout.decode(i, a);
        layout.multiply_coords(a, b, c);
        out[i] = f[layout.index(c)];
    }
    return out;
}

} // namespace heisenvt
