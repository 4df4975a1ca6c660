#pragma once

/**
 * The batch invariant suite behind `heisenvt verify`: every module's
 * mathematical invariants exercised at one (p, d, n), with deterministic
 * sampling where the exhaustive check would not fit the desk-scale budget.
 * Each check reports pass/fail plus a short detail string.
 */

#include <optional>
#include <random>

#include "heisenvt/fourier.hpp"
#include "heisenvt/spectral.hpp"

namespace heisenvt {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

namespace verify_detail {

inline std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

inline CheckResult bounded(const std::string& name, double worst, double tol,
                           const std::string& extra = "") {
    CheckResult r{name, worst <= tol, ""};
    r.detail = "max dev " + fmt(worst) + " (tol " + fmt(tol) + ")" +
               (extra.empty() ? "" : ", " + extra);
    return r;
}

inline LevelFunction lift_to(const LevelFunction& f, long n) {
    if (f.level() == n) return f;
    const Prime& p = f.prime();
    long d = f.d();
    LevelFunction out(p, d, n);
    QuotientLayout fine(p, d, n), coarse(p, d, f.level());
    std::vector<long> gc(2 * d + 1), cc(2 * d + 1);
    for (size_t i = 0; i < out.size(); ++i) {
        fine.decode(i, gc);
        for (long k = 0; k < 2 * d + 1; ++k) cc[k] = gc[k] % coarse.q();
        out[i] = f[coarse.index(cc)];
    }
    return out;
}

} // namespace verify_detail

inline std::vector<CheckResult> run_verify(const Prime& p, long d, long n) {
    using verify_detail::bounded;
    using verify_detail::fmt;
    std::vector<CheckResult> out;
    std::mt19937_64 rng(0x9e3779b97f4a7c15ULL); // fixed: identical runs byte for byte

    // -- p-adic core ------------------------------------------------------
    {
        bool ok = true;
        long checks = 0;
        long lev = std::max<long>(n, 2);
        for (int i = 0; i < 200 && ok; ++i) {
            std::vector<DualScalar> xi;
            std::vector<Residue> u, v, uv;
            for (long c = 0; c < d; ++c) {
                xi.push_back(DualScalar::make(p, static_cast<long>(rng() % p.pow(lev)),
                                              static_cast<long>(rng() % (lev + 1))));
                u.emplace_back(p, lev, static_cast<long>(rng() % p.pow(lev)));
                v.emplace_back(p, lev, static_cast<long>(rng() % p.pow(lev)));
                uv.push_back(u.back() + v.back());
            }
            ok = ok && dual_pair(xi, uv) == dual_pair(xi, u) + dual_pair(xi, v);
            DualScalar a = xi.front(), b = -xi.front();
            long m = static_cast<long>(rng() % (lev + 1));
            ok = ok && dual_reduce(dual_reduce(a, m), m) == dual_reduce(a, m);
            ok = ok && dual_reduce(a + b, m) ==
                           dual_reduce(dual_reduce(a, m) + dual_reduce(b, m), m);
            checks += 3;
        }
        out.push_back({"padic-identities", ok,
                       std::to_string(checks) + " exact identities"});
    }

    // -- group laws -------------------------------------------------------
    {
        QuotientLayout layout(p, d, 1);
        size_t N = layout.size();
        bool ok = true;
        std::string detail;
        if (N <= 130) {
            std::vector<size_t> table(N * N);
            for (size_t i = 0; i < N; ++i)
                for (size_t j = 0; j < N; ++j)
                    table[i * N + j] = layout.multiply_index(i, j);
            for (size_t a = 0; a < N && ok; ++a)
                for (size_t b = 0; b < N && ok; ++b)
                    for (size_t c = 0; c < N && ok; ++c)
                        ok = table[table[a * N + b] * N + c] ==
                             table[a * N + table[b * N + c]];
            detail = "associativity: full level-1 sweep (" + std::to_string(N * N * N) +
                     " triples)";
        } else {
            for (int i = 0; i < 100000 && ok; ++i) {
                size_t a = rng() % N, b = rng() % N, c = rng() % N;
                ok = layout.multiply_index(layout.multiply_index(a, b), c) ==
                     layout.multiply_index(a, layout.multiply_index(b, c));
            }
            detail = "associativity: 100000 sampled triples";
        }
        QuotientLayout lay_n(p, d, std::max<long>(n, 1));
        for (int i = 0; i < 200 && ok; ++i) {
            size_t gi = rng() % lay_n.size();
            ok = lay_n.multiply_index(gi, lay_n.inverse_index(gi)) == 0;
        }
        for (int i = 0; i < 200 && ok; ++i) {
            long lev = std::max<long>(n, 1);
            auto rnd_vec = [&] {
                std::vector<long> v(d);
                for (auto& x : v) x = static_cast<long>(rng() % p.pow(lev));
                return v;
            };
            LieVector u = LieVector::from_values(p, lev, rnd_vec(), rnd_vec(),
                                                 static_cast<long>(rng() % p.pow(lev)));
            LieVector v = LieVector::from_values(p, lev, rnd_vec(), rnd_vec(),
                                                 static_cast<long>(rng() % p.pow(lev)));
            ok = ok && exp_map(bch_star(u, v)) == multiply(exp_map(u), exp_map(v));
        }
        out.push_back({"group-laws", ok, detail + "; inverses and exp/BCH exact"});
    }

    // -- Haar invariance ----------------------------------------------------
    {
        long lev = std::max<long>(n, 1);
        LevelFunction f = LevelFunction::random(p, d, lev, rng());
        cdouble mean = haar_average(f);
        double worst = 0.0;
        for (int i = 0; i < 20; ++i) {
            GroupElement g = f.layout().element(rng() % f.size());
            worst = std::max(worst,
                             std::abs(haar_average(translate_left(f, g)) - mean));
            worst = std::max(worst,
                             std::abs(haar_average(translate_right(f, g)) - mean));
        }
        out.push_back(bounded("haar-invariance", worst, 1e-13));
    }

    // -- Peter-Weyl census --------------------------------------------------
    {
        bool ok = true;
        std::string detail;
        for (long lev = 0; lev <= n; ++lev) {
            auto [sum, order] = verify_peter_weyl(p, d, lev);
            ok = ok && sum == order;
            if (lev == n) detail = "sum d^2 = " + sum.get_str() + " = p^{n(2d+1)}";
        }
        out.push_back({"peter-weyl", ok, detail});
    }

    auto labels = enumerate_dual(p, d, n);
    QuotientLayout layout(p, d, std::max<long>(n, 1));

    // -- representation laws -------------------------------------------------
    {
        double worst_u = 0.0;
        for (const auto& label : labels) {
            for (int i = 0; i < 25; ++i) {
                GroupElement g = layout.element(rng() % layout.size());
                CMatrix m = rep_matrix_entries(label, g);
                worst_u = std::max(worst_u,
                                   (m * m.adjoint()).deviation_from_identity());
            }
        }
        out.push_back(bounded("rep-unitarity", worst_u, 1e-12,
                              std::to_string(labels.size()) + " labels"));

        double worst_h = 0.0;
        long pairs = 0;
        for (const auto& label : labels) {
            for (int i = 0; i < 40; ++i) {
                GroupElement a = layout.element(rng() % layout.size());
                GroupElement b = layout.element(rng() % layout.size());
                CMatrix prod =
                    rep_matrix_entries(label, a) * rep_matrix_entries(label, b);
                worst_h = std::max(
                    prod.max_abs_diff(rep_matrix_entries(label, multiply(a, b))),
                    worst_h);
                ++pairs;
            }
        }
        out.push_back(bounded("rep-homomorphism", worst_h, 1e-12,
                              std::to_string(pairs) + " sampled products"));
    }

    // -- Schur orthonormality -----------------------------------------------
    {
        struct Coef { size_t label; long r, c; };
        std::vector<Coef> coefs;
        for (size_t li = 0; li < labels.size(); ++li) {
            long dim = labels[li].dim();
            for (long r = 0; r < dim; ++r)
                for (long c = 0; c < dim; ++c) coefs.push_back({li, r, c});
        }
        auto coef_fn = [&](const Coef& co) {
            LevelFunction f(p, d, std::max<long>(n, 1));
            RepEvaluator eval(labels[co.label], f.level());
            std::vector<long> coords(2 * d + 1), rows(eval.dim());
            std::vector<cdouble> vals(eval.dim());
            for (size_t gi = 0; gi < f.size(); ++gi) {
                layout.decode(gi, coords);
                eval.columns(coords, rows, vals);
                f[gi] = (rows[co.c] == co.r) ? vals[co.c] : cdouble(0.0);
            }
            return f;
        };
        double worst = 0.0;
        std::string detail;
        if (coefs.size() <= 800) {
            std::vector<LevelFunction> fs;
            fs.reserve(coefs.size());
            for (const auto& co : coefs) fs.push_back(coef_fn(co));
            for (size_t i = 0; i < coefs.size(); ++i)
                for (size_t j = 0; j < coefs.size(); ++j) {
                    double s = std::sqrt(static_cast<double>(labels[coefs[i].label].dim()) *
                                         static_cast<double>(labels[coefs[j].label].dim()));
                    cdouble g = s * haar_inner(fs[i], fs[j]);
                    cdouble want = (i == j) ? cdouble(1.0) : cdouble(0.0);
                    worst = std::max(worst, std::abs(g - want));
                }
            detail = "full Gram, " + std::to_string(coefs.size()) + " coefficients";
        } else {
            for (int it = 0; it < 300; ++it) {
                size_t i = rng() % coefs.size(), j = rng() % coefs.size();
                double s = std::sqrt(static_cast<double>(labels[coefs[i].label].dim()) *
                                     static_cast<double>(labels[coefs[j].label].dim()));
                cdouble g = s * haar_inner(coef_fn(coefs[i]), coef_fn(coefs[j]));
                cdouble want = (i == j) ? cdouble(1.0) : cdouble(0.0);
                worst = std::max(worst, std::abs(g - want));
            }
            detail = "300 sampled pairs of " + std::to_string(coefs.size());
        }
        out.push_back(bounded("schur-orthonormality", worst, 1e-12, detail));
    }

    // -- Fourier analysis -----------------------------------------------------
    {
        double worst_rt = 0.0, worst_pl = 0.0;
        for (int i = 0; i < 3; ++i) {
            LevelFunction f = LevelFunction::random(p, d, n, rng());
            FourierCoefficients F = forward_transform(f);
            worst_rt = std::max(worst_rt, (inverse_transform(F) - f).max_abs());
            double lhs = l2_norm(f);
            worst_pl = std::max(worst_pl,
                                std::abs(lhs * lhs - plancherel_sum(F)));
        }
        out.push_back(bounded("fourier-roundtrip", worst_rt, 1e-10));
        out.push_back(bounded("plancherel", worst_pl, 1e-10));
    }

    if (n >= 1) {
        // Schwartz decay: level-(n-1) functions have no mass beyond B(n-1)
        double worst = 0.0;
        long tested = 0;
        LevelFunction f =
            verify_detail::lift_to(LevelFunction::random(p, d, n - 1, rng()), n);
        for (const auto& label : labels) {
            if (label.norm_exp() != n) continue;
            worst = std::max(worst, forward_transform_at(f, label).max_abs());
            if (++tested >= 40) break;
        }
        out.push_back(bounded("schwartz-decay", worst, 1e-12,
                              std::to_string(tested) + " labels beyond the ball"));
    }

    // -- VT eigenvalues --------------------------------------------------------
    {
        OperatorSpec vt1 = OperatorSpec::vt(1.0);
        double csub = vt_constants(p, 1.0, 2 * d + 1).sub;
        double worst = 0.0;
        long tested = 0;
        size_t stride = labels.size() <= 120 ? 1 : labels.size() / 60;
        for (size_t li = 0; li < labels.size(); li += stride) {
            const auto& label = labels[li];
            LevelFunction f(p, d, std::max<long>(n, 1));
            RepEvaluator eval(label, f.level());
            std::vector<long> coords(2 * d + 1), rows(eval.dim());
            std::vector<cdouble> vals(eval.dim());
            for (size_t gi = 0; gi < f.size(); ++gi) {
                layout.decode(gi, coords);
                eval.columns(coords, rows, vals);
                f[gi] = (rows[0] == 0) ? vals[0] : cdouble(0.0);
            }
            double ev = label.is_trivial()
                            ? 0.0
                            : std::pow(static_cast<double>(p.pow(label.norm_exp())),
                                       1.0) - csub;
            LevelFunction want = cdouble(ev) * f;
            worst = std::max(worst, (apply_operator(vt1, f) - want).max_abs());
            ++tested;
        }
        out.push_back(bounded("vt-eigenvalues", worst, 1e-10,
                              std::to_string(tested) + " coefficients"));
    }

    OperatorSpec sub = OperatorSpec::sublaplacian(d, 1.0);

    // -- symbols are Fourier multipliers ----------------------------------------
    {
        LevelFunction f = LevelFunction::random(p, d, n, rng());
        LevelFunction direct = apply_operator(sub, f);
        FourierCoefficients F = forward_transform(f);
        for (size_t i = 0; i < F.labels.size(); ++i)
            F.mats[i] = operator_symbol(sub, F.labels[i]) * F.mats[i];
        out.push_back(bounded("symbol-multiplier",
                              (direct - inverse_transform(F)).max_abs(), 1e-10));
    }

    // -- invariance and self-adjointness -----------------------------------------
    {
        LevelFunction f = LevelFunction::random(p, d, n, rng());
        LevelFunction tf = apply_operator(sub, f);
        double worst = 0.0;
        for (int i = 0; i < 10; ++i) {
            GroupElement g = f.layout().element(rng() % f.size());
            worst = std::max(worst, (apply_operator(sub, translate_left(f, g)) -
                                     translate_left(tf, g))
                                        .max_abs());
        }
        out.push_back(bounded("left-invariance", worst, 1e-12, "10 translations"));

        CMatrix a = dense_operator_matrix(sub, p, d, 1);
        out.push_back(bounded("self-adjointness", a.deviation_from_hermitian(),
                              1e-12, "dense level-1 matrix"));
    }

    // -- spectral blocks ------------------------------------------------------------
    {
        std::vector<std::pair<RepLabel, std::vector<long>>> blocks;
        for (const auto& label : labels)
            for (const auto& hp : h_prime_range(p, d, label.central_exp()))
                blocks.emplace_back(label, hp);
        std::vector<size_t> pick;
        if (blocks.size() <= 150) {
            pick.resize(blocks.size());
            for (size_t i = 0; i < pick.size(); ++i) pick[i] = i;
        } else {
            for (int i = 0; i < 40; ++i) pick.push_back(rng() % blocks.size());
        }
        double worst_inv = 0.0, worst_herm = 0.0, worst_gen = 0.0;
        long generic = 0, degenerate = 0;
        std::vector<std::optional<SubrepBlock>> computed(pick.size());
        parallel_for(pick.size(), [&](size_t i) {
            const auto& [label, hp] = blocks[pick[i]];
            computed[i] = restrict_to_block(sub, label, hp, std::max<long>(n, 1));
        });
        for (size_t i = 0; i < pick.size(); ++i) {
            const auto& [label, hp] = blocks[pick[i]];
            const SubrepBlock& blk = *computed[i];
            double scale = std::max(1.0, blk.matrix.frobenius_norm());
            worst_inv = std::max(worst_inv, blk.invariance_residual / scale);
            worst_herm = std::max(worst_herm, blk.hermitian_deviation / scale);
            if (genericity_predicate(sub, label, hp)) {
                ++generic;
                auto oracle = hermitian_eigenvalues(blk.matrix);
                std::vector<double> closed;
                for (const auto& tau : tau_basis(p, d, label.central_exp()))
                    closed.push_back(closed_form_eigenvalue(sub, label, hp, tau));
                std::sort(closed.begin(), closed.end());
                for (size_t k = 0; k < closed.size(); ++k)
                    worst_gen = std::max(worst_gen,
                                         std::abs(closed[k] - oracle[k]));
            } else {
                ++degenerate;
            }
        }
        out.push_back(bounded("block-invariance", worst_inv, 1e-12,
                              std::to_string(pick.size()) +
                                  " blocks, relative to block scale"));
        out.push_back(bounded("block-hermitian", worst_herm, 1e-12));
        out.push_back(bounded("generic-blocks", worst_gen, 1e-9,
                              std::to_string(generic) + " generic, " +
                                  std::to_string(degenerate) + " degenerate"));
    }

    // -- dense vs block oracle -------------------------------------------------------
    {
        size_t N = layout.size();
        long lev = std::max<long>(n, 1);
        QuotientLayout lay_n(p, d, lev);
        if (lay_n.size() <= 800) {
            SpectrumReport dense = oracle_spectrum(sub, p, d, lev, SpectrumMode::dense);
            SpectrumReport block = oracle_spectrum(sub, p, d, lev, SpectrumMode::block);
            SpectrumComparison cmp = compare_spectra(dense, block, 1e-9);
            double tr_rel = std::abs(dense.trace - block.trace) /
                            std::max(1.0, std::abs(dense.trace));
            out.push_back({"dense-vs-block",
                           cmp.multisets_match && tr_rel <= 1e-8,
                           "multisets " + std::string(cmp.multisets_match ? "match" : "differ") +
                               ", max err " + fmt(cmp.max_err) + ", trace rel " +
                               fmt(tr_rel)});
        } else {
            out.push_back({"dense-vs-block", true,
                           "skipped: " + std::to_string(N) +
                               " dims exceed the dense budget"});
        }
    }

    // -- coordinate form of the Y operators ---------------------------------------------
    {
        double worst = 0.0;
        for (int i = 0; i < 10; ++i) {
            LevelFunction f = LevelFunction::random(p, d, n, rng());
            for (long axis = 0; axis < d; ++axis) {
                std::vector<long> zero(d, 0), e(d, 0);
                e[axis] = 1;
                OperatorSpec dy = OperatorSpec::from_terms(
                    {OperatorTerm::directional(zero, e, 0, 1.0)}, "dy");
                worst = std::max(worst, (apply_operator(dy, f) -
                                         apply_noninvariant_vt(axis, 1.0, f))
                                            .max_abs());
            }
        }
        out.push_back(bounded("noninvariant-vt", worst, 1e-12, "10 random functions"));
    }

    // -- hypoellipticity sanity -----------------------------------------------------------
    {
        EllipticityReport rep =
            hypoellipticity_scan(OperatorSpec::vladimirov_laplacian(d, 1.0), p, d,
                                 std::min<long>(std::max<long>(n, 1), 2));
        bool ok = !rep.not_hypoelliptic && rep.inf_order > 0.0 && rep.c1 > 0.0;
        out.push_back({"hypoell-scan", ok,
                       "laplacian orders inf " + fmt(rep.inf_order) + ", op " +
                           fmt(rep.op_order)});
    }

    return out;
}

} // namespace heisenvt
