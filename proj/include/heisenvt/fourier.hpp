#pragma once

/**
 * Group Fourier transform at level n: forward/inverse over the dual ball
 * B(n), Plancherel and Sobolev norms, and the integral-kernel form of fhat
 * built from the commutative transform on Z_p^{2d+1}.
 *
 * Conventions (matching dual.hpp's entry order):
 *   fhat(label) = mean over the quotient of f(g) M(g)^*,
 *   f(g) = sum over labels of d_pi Tr[ M(g) fhat(label) ].
 */

#include <algorithm>

#include "heisenvt/dual.hpp"
#include "heisenvt/level_function.hpp"
#include "heisenvt/operators.hpp"
#include "heisenvt/parallel.hpp"

namespace heisenvt {

struct FourierCoefficients {
    long level = 0;
    std::vector<RepLabel> labels; // enumerate_dual(level) order
    std::vector<CMatrix> mats;

    const CMatrix& at(const RepLabel& label) const {
        auto it = std::lower_bound(labels.begin(), labels.end(), label);
        if (it == labels.end() || *it != label)
            throw std::invalid_argument("label not present in coefficient set");
        return mats[static_cast<size_t>(it - labels.begin())];
    }

    CMatrix& at(const RepLabel& label) {
        auto it = std::lower_bound(labels.begin(), labels.end(), label);
        if (it == labels.end() || *it != label)
            throw std::invalid_argument("label not present in coefficient set");
        return mats[static_cast<size_t>(it - labels.begin())];
    }
};

/// fhat over one label: mean of f(g) M(g)^*; exact quadrature for level-n f.
/// The sparse column form keeps this at d_pi work per quotient point.
inline CMatrix forward_transform_at(const LevelFunction& f, const RepLabel& label) {
    const auto& layout = f.layout();
    long dim = label.dim();
    RepEvaluator eval(label, f.level());
    CMatrix acc(static_cast<size_t>(dim), static_cast<size_t>(dim));
    std::vector<long> coords(2 * f.d() + 1), rows(dim);
    std::vector<cdouble> vals(dim);
    for (size_t gi = 0; gi < f.size(); ++gi) {
        cdouble fg = f[gi];
        if (fg == cdouble(0.0, 0.0)) continue;
        layout.decode(gi, coords);
        eval.columns(coords, rows, vals);
        // fhat(h, row) += f(g) conj(M(row, h))
        for (long h = 0; h < dim; ++h)
            acc(static_cast<size_t>(h), static_cast<size_t>(rows[h])) +=
                fg * std::conj(vals[h]);
    }
    acc *= 1.0 / static_cast<double>(f.size());
    return acc;
}

inline FourierCoefficients forward_transform(const LevelFunction& f) {
    FourierCoefficients out;
    out.level = f.level();
    out.labels = enumerate_dual(f.prime(), f.d(), f.level());
    out.mats.resize(out.labels.size());
    parallel_for(out.labels.size(), [&](size_t i) {
        out.mats[i] = forward_transform_at(f, out.labels[i]);
    });
    return out;
}

/// f(g) = sum over labels of d_pi Tr[M(g) fhat(label)].
inline LevelFunction inverse_transform(const FourierCoefficients& coeffs) {
    if (coeffs.labels.empty())
        throw std::invalid_argument("empty coefficient set");
    const Prime& p = coeffs.labels.front().prime();
    long d = coeffs.labels.front().d();
    LevelFunction f(p, d, coeffs.level);
    const auto& layout = f.layout();
    std::vector<long> coords(2 * d + 1);
    for (size_t li = 0; li < coeffs.labels.size(); ++li) {
        const RepLabel& label = coeffs.labels[li];
        const CMatrix& fh = coeffs.mats[li];
        double dpi = static_cast<double>(label.dim());
        long dim = label.dim();
        RepEvaluator eval(label, f.level());
        std::vector<long> rows(dim);
        std::vector<cdouble> vals(dim);
        for (size_t gi = 0; gi < f.size(); ++gi) {
            layout.decode(gi, coords);
            eval.columns(coords, rows, vals);
            cdouble tr = 0.0;
            for (long h = 0; h < dim; ++h)
                tr += vals[h] * fh(static_cast<size_t>(h),
                                   static_cast<size_t>(rows[h]));
            f[gi] += dpi * tr;
        }
    }
    return f;
}

/// sum over labels of d_pi ||fhat(label)||_HS^2 (the Plancherel right side).
inline double plancherel_sum(const FourierCoefficients& coeffs) {
    double s = 0.0;
    for (size_t i = 0; i < coeffs.labels.size(); ++i)
        s += static_cast<double>(coeffs.labels[i].dim()) *
             coeffs.mats[i].hilbert_schmidt_sq();
    return s;
}

/// Sobolev norm: (sum d_pi <label>^{2s} ||fhat||_HS^2)^{1/2} with the
/// rep_weight bracket.
inline double sobolev_norm(const LevelFunction& f, double s) {
    FourierCoefficients coeffs = forward_transform(f);
    double acc = 0.0;
    for (size_t i = 0; i < coeffs.labels.size(); ++i) {
        double w = rep_weight(coeffs.labels[i]);
        acc += static_cast<double>(coeffs.labels[i].dim()) *
               std::pow(w, 2.0 * s) * coeffs.mats[i].hilbert_schmidt_sq();
    }
    return std::sqrt(acc);
}

/**
 * Commutative finite Fourier transform on (Z/p^n)^{2d+1}, same index
 * layout: F[k] = mean_g f(g) e^{-2 pi i (k.g mod p^n)/p^n}. The class of
 * component k_i is k_i / p^n.
 */
inline std::vector<cdouble> commutative_transform(const LevelFunction& f) {
    const auto& layout = f.layout();
    size_t N = f.size();
    if (N > (size_t(1) << 16))
        throw BudgetExceeded("commutative transform limited to 65536 points");
    long q = layout.q();
    long dim = 2 * f.d() + 1;
    std::vector<cdouble> table(q);
    for (long m = 0; m < q; ++m)
        table[m] = std::polar(1.0, -2.0 * std::numbers::pi *
                                       static_cast<double>(m) /
                                       static_cast<double>(q));
    std::vector<cdouble> F(N, cdouble(0.0, 0.0));
    std::vector<long> kc(dim), gc(dim);
    for (size_t k = 0; k < N; ++k) {
        layout.decode(k, kc);
        cdouble acc = 0.0;
        for (size_t g = 0; g < N; ++g) {
            layout.decode(g, gc);
            long dotv = 0;
            for (long i = 0; i < dim; ++i) dotv = (dotv + kc[i] * gc[i]) % q;
            acc += f[g] * table[dotv];
        }
        F[k] = acc / static_cast<double>(N);
    }
    return F;
}

namespace detail {

/// Flat index in [0, p^n) of a dual class with denominator exponent <= n.
inline long dual_class_index(const DualScalar& c, long n) {
    long k = c.denom_exp();
    if (k > n)
        throw InsufficientPrecision("dual class finer than the transform level");
    return c.numer() * c.prime().pow(n - k);
}

} // namespace detail

/**
 * The integral kernel K_{f,label}(u, v) over (Z/p^n)^d x (Z/p^n)^d:
 *     K(u, v) = sum over alpha of F[(alpha + xi, lambda v + eta, lambda)]
 *               e^{2 pi i {alpha.(u - v)}_p},
 * with F the commutative transform of f. The operator this kernel induces
 * on H_lambda is fhat(label) (see kernel_induced_matrix).
 */
inline CMatrix fourier_kernel(const LevelFunction& f, const RepLabel& label) {
    const Prime& p = f.prime();
    long d = f.d(), n = f.level(), q = f.layout().q();
    if (label.norm_exp() > n)
        throw InsufficientPrecision("label norm exceeds the function level");
    std::vector<cdouble> F = commutative_transform(f);
    const auto& layout = f.layout();

    long qd = 1;
    for (long i = 0; i < d; ++i) qd *= q;
    std::vector<cdouble> table(q);
    for (long m = 0; m < q; ++m)
        table[m] = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(m) /
                                       static_cast<double>(q));

    CMatrix K(static_cast<size_t>(qd), static_cast<size_t>(qd));
    std::vector<long> uc(d), vc(d), ac(d), idx(2 * d + 1);
    long lambda_idx = detail::dual_class_index(label.lambda(), n);
    for (long u = 0; u < qd; ++u) {
        detail::decode_h(u, q, d, uc);
        for (long v = 0; v < qd; ++v) {
            detail::decode_h(v, q, d, vc);
            // component indices of (lambda v + eta, lambda), fixed over alpha
            for (long i = 0; i < d; ++i) {
                DualScalar comp = dual_scale(label.lambda(), vc[i]) + label.eta()[i];
                idx[d + i] = detail::dual_class_index(comp, n);
            }
            idx[2 * d] = lambda_idx;
            cdouble acc = 0.0;
            for (long a = 0; a < qd; ++a) {
                detail::decode_h(a, q, d, ac);
                long phase = 0;
                for (long i = 0; i < d; ++i) {
                    DualScalar comp =
                        DualScalar::make(p, ac[i], n) + label.xi()[i];
                    idx[i] = detail::dual_class_index(comp, n);
                    long diff = (uc[i] - vc[i]) % q;
                    if (diff < 0) diff += q;
                    phase = (phase + ac[i] * diff) % q;
                }
                acc += F[layout.index(idx)] * table[phase];
            }
            K(static_cast<size_t>(u), static_cast<size_t>(v)) = acc;
        }
    }
    return K;
}

/// Matrix of the kernel-induced operator on H_lambda in the phi_h basis.
inline CMatrix kernel_induced_matrix(const CMatrix& kernel, const RepLabel& label,
                                     long n) {
    const Prime& p = label.prime();
    long d = label.d(), q = p.pow(n), m = label.central_exp();
    long qm = p.pow(m);
    long qd = 1;
    for (long i = 0; i < d; ++i) qd *= q;
    size_t dim = static_cast<size_t>(label.dim());

    CMatrix out(dim, dim);
    std::vector<long> uc(d), vc(d), hu(d), hv(d);
    double scale = std::pow(static_cast<double>(qm), d) /
                   std::pow(static_cast<double>(qd), 2);
    for (long u = 0; u < qd; ++u) {
        detail::decode_h(u, q, d, uc);
        for (long i = 0; i < d; ++i) hu[i] = uc[i] % qm;
        size_t r = static_cast<size_t>(detail::encode_h(hu, qm));
        for (long v = 0; v < qd; ++v) {
            detail::decode_h(v, q, d, vc);
            for (long i = 0; i < d; ++i) hv[i] = vc[i] % qm;
            size_t c = static_cast<size_t>(detail::encode_h(hv, qm));
            out(r, c) += scale * kernel(static_cast<size_t>(u), static_cast<size_t>(v));
        }
    }
    return out;
}

} // namespace heisenvt
