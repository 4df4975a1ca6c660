#pragma once

/**
 * Complex Hermitian eigensolver by cyclic Jacobi rotations.
 *
 * Deterministic sweep order (p < q row major); each rotation annihilates one
 * off-diagonal pair through a phased plane rotation. Sweeps run until the
 * off-diagonal Frobenius norm falls below 1e-12 ||M||_F. Eigenvalues are
 * returned ascending; the eigensystem variant also accumulates vectors and
 * verifies the per-pair residual ||Mv - lambda v|| <= 1e-10 ||M||_F.
 */

#include <algorithm>
#include <numeric>

#include "heisenvt/matrix.hpp"

namespace heisenvt {

struct EigenSystem {
    std::vector<double> values; // ascending
    CMatrix vectors;            // columns correspond to values
};

namespace detail {

inline double offdiag_frobenius(const CMatrix& a) {
    double s = 0.0;
    for (size_t r = 0; r < a.rows(); ++r)
        for (size_t c = 0; c < a.cols(); ++c)
            if (r != c) s += std::norm(a(r, c));
    return std::sqrt(s);
}

/// One full cyclic sweep; rotations below `skip` are left alone. Returns the
/// number of rotations applied. Hermitian symmetry lets each rotation work on
/// two rows and mirror them into the columns.
inline size_t jacobi_sweep(CMatrix& a, CMatrix* vecs, double skip) {
    size_t n = a.rows();
    size_t rotations = 0;
    std::vector<cdouble> rowp(n), rowq(n);
    for (size_t p = 0; p + 1 < n; ++p) {
        for (size_t q = p + 1; q < n; ++q) {
            cdouble apq = a(p, q);
            double mag = std::abs(apq);
            if (mag <= skip) continue;
            ++rotations;
            double alpha = a(p, p).real();
            double gamma = a(q, q).real();
            cdouble phase = apq / mag; // e^{i phi}
            double tau = (gamma - alpha) / (2.0 * mag);
            double t = (tau >= 0.0 ? -1.0 : 1.0) /
                       (std::abs(tau) + std::sqrt(1.0 + tau * tau));
            double c = 1.0 / std::sqrt(1.0 + t * t);
            double s = t * c;
            cdouble sp = s * phase;      // s e^{i phi}
            cdouble spc = std::conj(sp); // s e^{-i phi}

            // A <- U^* A U with U = [[c, -s e^{i phi}], [s e^{-i phi}, c]]:
            // rows p, q transform among themselves, columns follow by
            // conjugation, and the 2x2 block has the closed form below.
            for (size_t k = 0; k < n; ++k) {
                rowp[k] = a(p, k);
                rowq[k] = a(q, k);
            }
            for (size_t k = 0; k < n; ++k) {
                if (k == p || k == q) continue;
                cdouble np = c * rowp[k] + sp * rowq[k];
                cdouble nq = -spc * rowp[k] + c * rowq[k];
                a(p, k) = np;
                a(q, k) = nq;
                a(k, p) = std::conj(np);
                a(k, q) = std::conj(nq);
            }
            a(p, p) = c * c * alpha + s * s * gamma + 2.0 * c * s * mag;
            a(q, q) = s * s * alpha + c * c * gamma - 2.0 * c * s * mag;
            a(p, q) = 0.0;
            a(q, p) = 0.0;

            if (vecs) {
                for (size_t k = 0; k < n; ++k) {
                    cdouble vkp = (*vecs)(k, p), vkq = (*vecs)(k, q);
                    (*vecs)(k, p) = c * vkp + spc * vkq;
                    (*vecs)(k, q) = -sp * vkp + c * vkq;
                }
            }
        }
    }
    return rotations;
}

/// Real-symmetric fast path (the dense jump-operator matrices are exactly
/// real): same rotations in double arithmetic on a flat row-major array.
inline void jacobi_diagonalize_real(std::vector<double>& a, size_t n,
                                    std::vector<double>* vecs) {
    auto at = [&](size_t r, size_t c) -> double& { return a[r * n + c]; };
    double frob = 0.0;
    for (double v : a) frob += v * v;
    frob = std::sqrt(frob);
    double target = 1e-12 * frob;
    double skip = (n > 0) ? target / static_cast<double>(n) : 0.0;
    auto offdiag = [&] {
        double s = 0.0;
        for (size_t r = 0; r < n; ++r)
            for (size_t c = 0; c < n; ++c)
                if (r != c) s += at(r, c) * at(r, c);
        return std::sqrt(s);
    };
    std::vector<double> rowp(n), rowq(n);
    const int max_sweeps = 60;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        if (offdiag() <= target) return;
        size_t rotations = 0;
        for (size_t p = 0; p + 1 < n; ++p) {
            for (size_t q = p + 1; q < n; ++q) {
                double apq = at(p, q);
                double mag = std::abs(apq);
                if (mag <= skip) continue;
                ++rotations;
                double alpha = at(p, p), gamma = at(q, q);
                double sign = apq >= 0.0 ? 1.0 : -1.0;
                double tau = (gamma - alpha) / (2.0 * mag);
                double t = (tau >= 0.0 ? -1.0 : 1.0) /
                           (std::abs(tau) + std::sqrt(1.0 + tau * tau));
                double c = 1.0 / std::sqrt(1.0 + t * t);
                double s = t * c;
                double sp = s * sign;
                double* rp = a.data() + p * n;
                double* rq = a.data() + q * n;
                std::copy(rp, rp + n, rowp.data());
                std::copy(rq, rq + n, rowq.data());
                for (size_t k = 0; k < n; ++k) {
                    if (k == p || k == q) continue;
                    double np = c * rowp[k] + sp * rowq[k];
                    double nq = -sp * rowp[k] + c * rowq[k];
                    rp[k] = np;
                    rq[k] = nq;
                    at(k, p) = np;
                    at(k, q) = nq;
                }
                at(p, p) = c * c * alpha + s * s * gamma + 2.0 * c * s * mag;
                at(q, q) = s * s * alpha + c * c * gamma - 2.0 * c * s * mag;
                at(p, q) = 0.0;
                at(q, p) = 0.0;
                if (vecs) {
                    for (size_t k = 0; k < n; ++k) {
                        double vkp = (*vecs)[k * n + p], vkq = (*vecs)[k * n + q];
                        (*vecs)[k * n + p] = c * vkp + sp * vkq;
                        (*vecs)[k * n + q] = -sp * vkp + c * vkq;
                    }
                }
            }
        }
        if (rotations == 0) return;
    }
    if (offdiag() > target)
        throw std::runtime_error("Jacobi eigensolver failed to converge");
}

inline bool strictly_real(const CMatrix& a) {
    for (size_t r = 0; r < a.rows(); ++r)
        for (size_t c = 0; c < a.cols(); ++c)
            if (a(r, c).imag() != 0.0) return false;
    return true;
}

inline void jacobi_diagonalize(CMatrix& a, CMatrix* vecs, double hermitian_tol) {
    size_t n = a.rows();
    if (a.cols() != n) throw std::invalid_argument("eigensolver needs a square matrix");
    double frob = a.frobenius_norm();
    if (a.deviation_from_hermitian() > hermitian_tol * std::max(1.0, frob))
        throw std::invalid_argument("matrix is not Hermitian within tolerance");
    // symmetrize to kill representation noise before rotating
    for (size_t r = 0; r < n; ++r) {
        for (size_t c = r + 1; c < n; ++c) {
            cdouble m = 0.5 * (a(r, c) + std::conj(a(c, r)));
            a(r, c) = m;
            a(c, r) = std::conj(m);
        }
        a(r, r) = a(r, r).real();
    }
    if (n < 2) return;

    if (strictly_real(a)) {
        std::vector<double> ra(n * n);
        for (size_t r = 0; r < n; ++r)
            for (size_t c = 0; c < n; ++c) ra[r * n + c] = a(r, c).real();
        std::vector<double> rv;
        if (vecs) {
            rv.assign(n * n, 0.0);
            for (size_t i = 0; i < n; ++i) rv[i * n + i] = 1.0;
        }
        jacobi_diagonalize_real(ra, n, vecs ? &rv : nullptr);
        for (size_t r = 0; r < n; ++r)
            for (size_t c = 0; c < n; ++c) a(r, c) = ra[r * n + c];
        if (vecs)
            for (size_t r = 0; r < n; ++r)
                for (size_t c = 0; c < n; ++c) (*vecs)(r, c) = rv[r * n + c];
        return;
    }

    double target = 1e-12 * frob;
    double skip = (n > 0) ? target / static_cast<double>(n) : 0.0;
    const int max_sweeps = 60;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        if (offdiag_frobenius(a) <= target) return;
        if (jacobi_sweep(a, vecs, skip) == 0) return; // every pair below skip
    }
    if (offdiag_frobenius(a) > target)
        throw std::runtime_error("Jacobi eigensolver failed to converge");
}

} // namespace detail

/// Eigenvalues of a Hermitian matrix, ascending.
inline std::vector<double> hermitian_eigenvalues(CMatrix m,
                                                 double hermitian_tol = 1e-10) {
    detail::jacobi_diagonalize(m, nullptr, hermitian_tol);
    std::vector<double> vals(m.rows());
    for (size_t i = 0; i < m.rows(); ++i) vals[i] = m(i, i).real();
    std::sort(vals.begin(), vals.end());
    return vals;
}

/// Eigenvalues and vectors; verifies per-pair residuals against the input.
inline EigenSystem hermitian_eigensystem(const CMatrix& m,
                                         double hermitian_tol = 1e-10) {
    CMatrix a = m;
    CMatrix vecs = CMatrix::identity(m.rows());
    detail::jacobi_diagonalize(a, &vecs, hermitian_tol);

    size_t n = m.rows();
    std::vector<size_t> order(n);
    std::iota(order.begin(), order.end(), size_t(0));
    std::sort(order.begin(), order.end(), [&](size_t i, size_t j) {
        return a(i, i).real() < a(j, j).real();
    });

    EigenSystem sys;
    sys.values.resize(n);
    sys.vectors = CMatrix(n, n);
    for (size_t j = 0; j < n; ++j) {
        sys.values[j] = a(order[j], order[j]).real();
        for (size_t i = 0; i < n; ++i) sys.vectors(i, j) = vecs(i, order[j]);
    }

    double frob = m.frobenius_norm();
    for (size_t j = 0; j < n; ++j) {
        std::vector<cdouble> v(n);
        for (size_t i = 0; i < n; ++i) v[i] = sys.vectors(i, j);
        std::vector<cdouble> mv = m.apply(v);
        double resid = 0.0;
        for (size_t i = 0; i < n; ++i) resid += std::norm(mv[i] - sys.values[j] * v[i]);
        if (std::sqrt(resid) > 1e-10 * std::max(1.0, frob))
            throw std::runtime_error("eigenpair residual above tolerance");
    }
    return sys;
}

} // namespace heisenvt
