#pragma once

/**
 * Vladimirov-Taibleson operators on H_d(Z_p): the full jump operator D^alpha
 * (and its shifted variant via rep_weight), directional VT operators along
 * one-parameter subgroups, operator specifications, scalar piecewise
 * symbols, and operator symbols on the unitary dual.
 *
 * All applications are exact quadratures for level-n functions: the zero
 * coset of the jump variable contributes nothing and the integrand is
 * constant on the remaining level-n cosets.
 */

#include <cmath>
#include <string>

#include "heisenvt/dual.hpp"
#include "heisenvt/level_function.hpp"

namespace heisenvt {

/// (1 - p^alpha) / (1 - p^{-(alpha+dim)}) as an exact rational (integer alpha).
inline mpq_class vt_front_exact(const Prime& p, long alpha, long dim) {
    mpq_class num = 1 - mpq_class(p.pow_z(alpha));
    mpq_class den = 1 - mpq_class(1, p.pow_z(alpha + dim));
    mpq_class r = num / den;
    r.canonicalize();
    return r;
}

/// (1 - p^{-dim}) / (1 - p^{-(alpha+dim)}) as an exact rational (integer alpha).
inline mpq_class vt_sub_exact(const Prime& p, long alpha, long dim) {
    mpq_class num = 1 - mpq_class(1, p.pow_z(dim));
    mpq_class den = 1 - mpq_class(1, p.pow_z(alpha + dim));
    mpq_class r = num / den;
    r.canonicalize();
    return r;
}

struct VtConstants {
    double front; // multiplies the jump integral
    double sub;   // the subtraction constant of the scalar symbol
};

inline VtConstants vt_constants(const Prime& p, double alpha, long dim) {
    if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
    if (dim < 1) throw std::invalid_argument("dim must be >= 1");
    double rounded = std::round(alpha);
    if (rounded == alpha && rounded < 60) {
        long a = static_cast<long>(rounded);
        return {vt_front_exact(p, a, dim).get_d(), vt_sub_exact(p, a, dim).get_d()};
    }
    double pd = static_cast<double>(p.value());
    double front = (1.0 - std::pow(pd, alpha)) / (1.0 - std::pow(pd, -(alpha + dim)));
    double sub = (1.0 - std::pow(pd, -static_cast<double>(dim))) /
                 (1.0 - std::pow(pd, -(alpha + dim)));
    return {front, sub};
}

/**
 * The piecewise scalar symbol s_alpha: zero on the trivial class, otherwise
 * |w|_p^alpha - (1-p^{-1})/(1-p^{-(alpha+1)}). This is the branch the
 * one-dimensional quadrature actually produces; it is used verbatim in
 * every symbol table and closed-form eigenvalue.
 */
inline double scalar_symbol(const DualScalar& w, double alpha) {
    if (w.is_trivial()) return 0.0;
    double norm = static_cast<double>(w.norm());
    return std::pow(norm, alpha) - vt_constants(w.prime(), alpha, 1).sub;
}

/// Eigenvalue of the shifted operator DD^1 on the class of `label`:
/// ||(xi,eta,lambda)||_p for nontrivial labels, and the subtraction constant
/// on the trivial label (D^1 annihilates constants).
inline double rep_weight(const RepLabel& label) {
    if (label.is_trivial())
        return vt_constants(label.prime(), 1.0, 2 * label.d() + 1).sub;
    return static_cast<double>(label.prime().pow(label.norm_exp()));
}

/**
 * One additive term of an operator: a directional VT operator along an
 * integer direction vector of the Lie algebra, or the full VT operator.
 * Direction coordinates are integers read in Z_p at whatever level the
 * operand lives at.
 */
struct OperatorTerm {
    enum class Kind { directional, full_vt };

    Kind kind = Kind::directional;
    double alpha = 1.0;
    std::vector<long> a, b; // Lie coordinates (directional only)
    long c = 0;

    static OperatorTerm directional(std::vector<long> a, std::vector<long> b,
                                    long c, double alpha) {
        if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
        bool zero = c == 0;
        for (long v : a) zero = zero && v == 0;
        for (long v : b) zero = zero && v == 0;
        if (zero) throw std::invalid_argument("directional term needs a nonzero direction");
        OperatorTerm t;
        t.kind = Kind::directional;
        t.alpha = alpha;
        t.a = std::move(a);
        t.b = std::move(b);
        t.c = c;
        return t;
    }

    static OperatorTerm full_vt(double alpha) {
        if (!(alpha > 0.0)) throw std::invalid_argument("alpha must be positive");
        OperatorTerm t;
        t.kind = Kind::full_vt;
        t.alpha = alpha;
        return t;
    }

    bool is_x_type() const {
        if (kind != Kind::directional || c != 0) return false;
        for (long v : b) if (v != 0) return false;
        for (long v : a) if (v != 0) return true;
        return false;
    }

    bool is_y_type() const {
        if (kind != Kind::directional || c != 0) return false;
        for (long v : a) if (v != 0) return false;
        for (long v : b) if (v != 0) return true;
        return false;
    }

    bool is_z_type() const {
        if (kind != Kind::directional || c == 0) return false;
        for (long v : a) if (v != 0) return false;
        for (long v : b) if (v != 0) return false;
        return true;
    }
};

namespace detail {

/// Rank over F_p of a d x d integer matrix (rows = vectors).
inline bool rows_independent_mod_p(const Prime& p, std::vector<std::vector<long>> m) {
    long d = static_cast<long>(m.size());
    long P = p.value();
    auto norm = [&](long v) { long r = v % P; return r < 0 ? r + P : r; };
    long row = 0;
    for (long col = 0; col < d && row < d; ++col) {
        long pivot = -1;
        for (long r = row; r < d; ++r)
            if (norm(m[r][col]) != 0) { pivot = r; break; }
        if (pivot < 0) continue;
        std::swap(m[row], m[pivot]);
        // scale pivot row to 1 (F_p inverse by exponentiation)
        long pv = norm(m[row][col]), inv = 1;
        for (long e = 0; e < P - 2; ++e) inv = (inv * pv) % P;
        for (auto& v : m[row]) v = (norm(v) * inv) % P;
        for (long r = 0; r < d; ++r) {
            if (r == row) continue;
            long f = norm(m[r][col]);
            if (f == 0) continue;
            for (long cidx = 0; cidx < d; ++cidx)
                m[r][cidx] = norm(m[r][cidx] - f * m[row][cidx]);
        }
        ++row;
    }
    return row == d;
}

} // namespace detail

/**
 * A formal sum of VT terms. The named constructors build the sub-Laplacian
 * (X/Y-directional terms only) and the full Laplacian (with a Z term).
 */
class OperatorSpec {
public:
    static OperatorSpec from_terms(std::vector<OperatorTerm> terms,
                                   std::string name = "custom") {
        if (terms.empty()) throw std::invalid_argument("operator needs at least one term");
        return OperatorSpec(std::move(terms), std::move(name));
    }

    /// The canonical sub-Laplacian: sum over k of VT along X_k and Y_k.
    static OperatorSpec sublaplacian(long d, double alpha) {
        std::vector<OperatorTerm> terms;
        std::vector<long> zero(d, 0);
        for (long k = 0; k < d; ++k) {
            std::vector<long> e(d, 0);
            e[k] = 1;
            terms.push_back(OperatorTerm::directional(e, zero, 0, alpha));
        }
        for (long k = 0; k < d; ++k) {
            std::vector<long> e(d, 0);
            e[k] = 1;
            terms.push_back(OperatorTerm::directional(zero, e, 0, alpha));
        }
        return OperatorSpec(std::move(terms),
                            "sublaplacian(alpha=" + format_exp(alpha) + ")");
    }

    /// General sub-Laplacian with V_k in span{X}, W_k in span{Y}, each
    /// collection linearly independent mod p.
    static OperatorSpec sublaplacian(const Prime& p,
                                     const std::vector<std::vector<long>>& v,
                                     const std::vector<std::vector<long>>& w,
                                     const std::vector<double>& alphas,
                                     const std::vector<double>& betas,
                                     std::string name = "sublaplacian") {
        size_t d = v.size();
        if (w.size() != d || alphas.size() != d || betas.size() != d)
            throw std::invalid_argument("sublaplacian needs d directions of each kind");
        if (!detail::rows_independent_mod_p(p, v) ||
            !detail::rows_independent_mod_p(p, w))
            throw std::invalid_argument(
                "sublaplacian directions must be linearly independent mod p");
        std::vector<OperatorTerm> terms;
        std::vector<long> zero(d, 0);
        for (size_t k = 0; k < d; ++k)
            terms.push_back(OperatorTerm::directional(v[k], zero, 0, alphas[k]));
        for (size_t k = 0; k < d; ++k)
            terms.push_back(OperatorTerm::directional(zero, w[k], 0, betas[k]));
        return OperatorSpec(std::move(terms), std::move(name));
    }

    /// The canonical Vladimirov Laplacian: sub-Laplacian terms plus VT along Z.
    static OperatorSpec vladimirov_laplacian(long d, double s) {
        OperatorSpec sub = sublaplacian(d, s);
        std::vector<long> zero(d, 0);
        sub.terms_.push_back(OperatorTerm::directional(zero, zero, 1, s));
        sub.name_ = "laplacian(alpha=" + format_exp(s) + ")";
        return sub;
    }

    /// General Vladimirov Laplacian: directional sub-Laplacian plus a VT term
    /// of order gamma along the center.
    static OperatorSpec vladimirov_laplacian(const Prime& p,
                                             const std::vector<std::vector<long>>& v,
                                             const std::vector<std::vector<long>>& w,
                                             const std::vector<double>& alphas,
                                             const std::vector<double>& betas,
                                             double gamma,
                                             std::string name = "laplacian") {
        OperatorSpec sub = sublaplacian(p, v, w, alphas, betas, std::move(name));
        std::vector<long> zero(v.size(), 0);
        sub.terms_.push_back(OperatorTerm::directional(zero, zero, 1, gamma));
        return sub;
    }

    /// The full VT operator D^alpha.
    static OperatorSpec vt(double alpha) {
        return OperatorSpec({OperatorTerm::full_vt(alpha)},
                            "vt(alpha=" + format_exp(alpha) + ")");
    }

    const std::vector<OperatorTerm>& terms() const { return terms_; }
    const std::string& name() const { return name_; }

private:
    OperatorSpec(std::vector<OperatorTerm> terms, std::string name)
        : terms_(std::move(terms)), name_(std::move(name)) {}

    static std::string format_exp(double a) {
        char buf[32];
        std::snprintf(buf, sizeof(buf), "%g", a);
        return buf;
    }

    std::vector<OperatorTerm> terms_;
    std::string name_;
};

/**
 * Exact quadrature weights p^{-n} |t|_p^{-(alpha+1)} over the nonzero
 * classes t of Z/p^n.
 */
struct QuadratureTable {
    long level;
    std::vector<double> weight; // indexed by t in [0, p^n), weight[0] unused

    QuadratureTable(const Prime& p, long n, double alpha) : level(n) {
        long q = p.pow(n);
        weight.assign(q, 0.0);
        double pn = std::pow(static_cast<double>(p.value()), -static_cast<double>(n));
        for (long t = 1; t < q; ++t) {
            long v = valuation_int(p, t);
            weight[t] = pn * std::pow(static_cast<double>(p.value()),
                                      static_cast<double>(v) * (alpha + 1.0));
        }
    }
};

namespace detail {

inline void apply_directional_term(const OperatorTerm& term, const LevelFunction& f,
                                   LevelFunction& out) {
    const auto& layout = f.layout();
    const Prime& p = f.prime();
    long d = f.d(), n = f.level(), q = layout.q();
    if (static_cast<long>(term.a.size()) != d || static_cast<long>(term.b.size()) != d)
        throw std::invalid_argument("direction dimension mismatch");
    double cf = vt_constants(p, term.alpha, 1).front;
    QuadratureTable quad(p, n, term.alpha);
    LieVector v = LieVector::from_values(p, n, term.a, term.b, term.c);

    size_t N = f.size();
    std::vector<long> gc(2 * d + 1), sc(2 * d + 1), rc(2 * d + 1);
    for (long t = 1; t < q; ++t) {
        GroupElement shift = inverse(one_parameter(v, Residue(p, n, t)));
        size_t si = layout.index_of(shift);
        layout.decode(si, sc);
        double w = cf * quad.weight[t];
        for (size_t i = 0; i < N; ++i) {
            layout.decode(i, gc);
            layout.multiply_coords(gc, sc, rc);
            out[i] += w * (f[layout.index(rc)] - f[i]);
        }
    }
}

inline void apply_full_vt_term(const OperatorTerm& term, const LevelFunction& f,
                               LevelFunction& out) {
    const auto& layout = f.layout();
    const Prime& p = f.prime();
    long d = f.d(), n = f.level();
    long dim = 2 * d + 1;
    double cf = vt_constants(p, term.alpha, dim).front;
    size_t N = f.size();

    // ball sums B_j(g) = sum over ||h|| <= p^{-j} of f(g h^{-1}), built by
    // cascading over the coset representatives of G_j / G_{j+1}
    std::vector<std::vector<cdouble>> balls(n + 1);
    balls[n].assign(f.values().begin(), f.values().end());
    std::vector<long> gc(dim), sc(dim), rc(dim);
    for (long j = n - 1; j >= 0; --j) {
        balls[j].assign(N, cdouble(0.0, 0.0));
        long pj = p.pow(j);
        // representatives: coordinates p^j k, k in [0, p)^{2d+1}
        std::vector<long> k(dim, 0);
        for (;;) {
            for (long i = 0; i < dim; ++i) sc[i] = pj * k[i];
            size_t rid = layout.index(sc);
            size_t rinv = layout.inverse_index(rid);
            layout.decode(rinv, sc);
            for (size_t i = 0; i < N; ++i) {
                layout.decode(i, gc);
                layout.multiply_coords(gc, sc, rc);
                balls[j][i] += balls[j + 1][layout.index(rc)];
            }
            long i = dim - 1;
            while (i >= 0 && ++k[i] == p.value()) k[i--] = 0;
            if (i < 0) break;
        }
    }

    double haar = std::pow(static_cast<double>(p.value()),
                           -static_cast<double>(n) * dim);
    for (long j = 0; j < n; ++j) {
        double scale = cf * haar *
                       std::pow(static_cast<double>(p.value()),
                                static_cast<double>(j) * (term.alpha + dim));
        double count = static_cast<double>(p.pow((n - j) * dim) - p.pow((n - j - 1) * dim));
        for (size_t i = 0; i < N; ++i) {
            cdouble sphere = balls[j][i] - balls[j + 1][i];
            out[i] += scale * (sphere - count * f[i]);
        }
    }
}

} // namespace detail

/// Apply the operator by exact quadrature at the function's own level.
inline LevelFunction apply_operator(const OperatorSpec& spec, const LevelFunction& f) {
    LevelFunction out(f.prime(), f.d(), f.level());
    for (const auto& term : spec.terms()) {
        if (term.kind == OperatorTerm::Kind::directional)
            detail::apply_directional_term(term, f, out);
        else
            detail::apply_full_vt_term(term, f, out);
    }
    return out;
}

/**
 * The (invariant) symbol sigma(label) = (T pi)(e): assembled from the
 * representation matrices along the quadrature nodes. For invariant specs,
 * apply_operator(f) = inverse_transform(label -> sigma(label) fhat(label)).
 */
inline CMatrix operator_symbol(const OperatorSpec& spec, const RepLabel& label) {
    const Prime& p = label.prime();
    long d = label.d();
    long level = std::max<long>(label.norm_exp(), 1);
    size_t dim = static_cast<size_t>(label.dim());
    CMatrix sigma(dim, dim);
    CMatrix eye = CMatrix::identity(dim);

    for (const auto& term : spec.terms()) {
        if (term.kind == OperatorTerm::Kind::directional) {
            double cf = vt_constants(p, term.alpha, 1).front;
            QuadratureTable quad(p, level, term.alpha);
            LieVector v = LieVector::from_values(p, level, term.a, term.b, term.c);
            for (long t = 1; t < p.pow(level); ++t) {
                GroupElement node = inverse(one_parameter(v, Residue(p, level, t)));
                CMatrix m = rep_matrix_entries(label, node);
                m -= eye;
                m *= cf * quad.weight[t];
                sigma += m;
            }
        } else {
            long dimg = 2 * d + 1;
            double cf = vt_constants(p, term.alpha, dimg).front;
            QuotientLayout layout(p, d, level);
            double haar = std::pow(static_cast<double>(p.value()),
                                   -static_cast<double>(level) * dimg);
            for (size_t i = 1; i < layout.size(); ++i) {
                PadicNorm nm = layout.norm_at(i);
                double w = haar * std::pow(static_cast<double>(p.value()),
                                           static_cast<double>(nm.exponent) *
                                               (term.alpha + dimg));
                CMatrix m = rep_matrix_entries(label, inverse(layout.element(i)));
                m -= eye;
                m *= cf * w;
                sigma += m;
            }
        }
    }
    return sigma;
}

/**
 * The coordinate form of the Y_i-directional operator on Z_p^{2d+1}: the VT
 * integral along the flow of the vector field e_{d+i} + x_i e_{2d+1}. Agrees
 * with apply_operator of the Y_i term on every level-n function.
 */
inline LevelFunction apply_noninvariant_vt(long axis, double alpha,
                                           const LevelFunction& f) {
    const auto& layout = f.layout();
    const Prime& p = f.prime();
    long d = f.d(), n = f.level(), q = layout.q();
    if (axis < 0 || axis >= d) throw std::invalid_argument("axis out of range");
    double cf = vt_constants(p, alpha, 1).front;
    QuadratureTable quad(p, n, alpha);

    LevelFunction out(p, d, n);
    std::vector<long> gc(2 * d + 1), sc(2 * d + 1);
    for (size_t i = 0; i < f.size(); ++i) {
        layout.decode(i, gc);
        cdouble acc = 0.0;
        for (long t = 1; t < q; ++t) {
            sc.assign(gc.begin(), gc.end());
            sc[d + axis] = (sc[d + axis] + t) % q;
            sc[2 * d] = (sc[2 * d] + t * gc[axis]) % q;
            acc += quad.weight[t] * (f[layout.index(sc)] - f[i]);
        }
        out[i] = cf * acc;
    }
    return out;
}

} // namespace heisenvt
