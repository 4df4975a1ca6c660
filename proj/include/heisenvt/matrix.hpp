#pragma once

/// Minimal dense complex matrix, row major. Sizes here are representation
/// dimensions and quotient sizes; nothing fancy is needed.

#include <cmath>
#include <complex>
#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace heisenvt {

using cdouble = std::complex<double>;

class CMatrix {
public:
    CMatrix() : rows_(0), cols_(0) {}
    CMatrix(size_t rows, size_t cols)
        : rows_(rows), cols_(cols), a_(rows * cols, cdouble(0.0, 0.0)) {}

    static CMatrix identity(size_t n) {
        CMatrix m(n, n);
        for (size_t i = 0; i < n; ++i) m(i, i) = 1.0;
        return m;
    }

    size_t rows() const { return rows_; }
    size_t cols() const { return cols_; }

    cdouble& operator()(size_t r, size_t c) { return a_[r * cols_ + c]; }
    const cdouble& operator()(size_t r, size_t c) const { return a_[r * cols_ + c]; }

    cdouble* data() { return a_.data(); }
    const cdouble* data() const { return a_.data(); }

    CMatrix adjoint() const {
        CMatrix m(cols_, rows_);
        for (size_t r = 0; r < rows_; ++r)
            for (size_t c = 0; c < cols_; ++c) m(c, r) = std::conj((*this)(r, c));
        return m;
    }

    CMatrix& operator+=(const CMatrix& o) {
        require_same_shape(o);
        for (size_t i = 0; i < a_.size(); ++i) a_[i] += o.a_[i];
        return *this;
    }

    CMatrix& operator-=(const CMatrix& o) {
        require_same_shape(o);
        for (size_t i = 0; i < a_.size(); ++i) a_[i] -= o.a_[i];
        return *this;
    }

    CMatrix& operator*=(cdouble s) {
        for (auto& v : a_) v *= s;
        return *this;
    }

    friend CMatrix operator+(CMatrix a, const CMatrix& b) { return a += b; }
    friend CMatrix operator-(CMatrix a, const CMatrix& b) { return a -= b; }
    friend CMatrix operator*(cdouble s, CMatrix a) { return a *= s; }

    friend CMatrix operator*(const CMatrix& a, const CMatrix& b) {
        if (a.cols_ != b.rows_) throw std::invalid_argument("matrix shape mismatch");
        CMatrix c(a.rows_, b.cols_);
        for (size_t i = 0; i < a.rows_; ++i)
            for (size_t k = 0; k < a.cols_; ++k) {
                cdouble aik = a(i, k);
                if (aik == cdouble(0.0, 0.0)) continue;
                for (size_t j = 0; j < b.cols_; ++j) c(i, j) += aik * b(k, j);
            }
        return c;
    }

    cdouble trace() const {
        cdouble t = 0.0;
        for (size_t i = 0; i < std::min(rows_, cols_); ++i) t += (*this)(i, i);
        return t;
    }

    double frobenius_norm() const {
        double s = 0.0;
        for (const auto& v : a_) s += std::norm(v);
        return std::sqrt(s);
    }

    double hilbert_schmidt_sq() const {
        double s = 0.0;
        for (const auto& v : a_) s += std::norm(v);
        return s;
    }

    double max_abs() const {
        double m = 0.0;
        for (const auto& v : a_) m = std::max(m, std::abs(v));
        return m;
    }

    /// max |A - B| entrywise
    double max_abs_diff(const CMatrix& o) const {
        require_same_shape(o);
        double m = 0.0;
        for (size_t i = 0; i < a_.size(); ++i) m = std::max(m, std::abs(a_[i] - o.a_[i]));
        return m;
    }

    double deviation_from_identity() const {
        double m = 0.0;
        for (size_t r = 0; r < rows_; ++r)
            for (size_t c = 0; c < cols_; ++c)
                m = std::max(m, std::abs((*this)(r, c) - (r == c ? 1.0 : 0.0)));
        return m;
    }

    double deviation_from_hermitian() const {
        double m = 0.0;
        for (size_t r = 0; r < rows_; ++r)
            for (size_t c = r; c < cols_; ++c)
                m = std::max(m, std::abs((*this)(r, c) - std::conj((*this)(c, r))));
        return m;
    }

    std::vector<cdouble> apply(std::span<const cdouble> v) const {
        if (v.size() != cols_) throw std::invalid_argument("matrix/vector shape mismatch");
        std::vector<cdouble> out(rows_, cdouble(0.0, 0.0));
        for (size_t r = 0; r < rows_; ++r) {
            cdouble acc = 0.0;
            const cdouble* row = a_.data() + r * cols_;
            for (size_t c = 0; c < cols_; ++c) acc += row[c] * v[c];
            out[r] = acc;
        }
        return out;
    }

private:
    void require_same_shape(const CMatrix& o) const {
        if (rows_ != o.rows_ || cols_ != o.cols_)
            throw std::invalid_argument("matrix shape mismatch");
    }

    size_t rows_, cols_;
    std::vector<cdouble> a_;
};

} // namespace heisenvt
