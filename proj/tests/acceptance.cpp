// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Each criterion pins its tolerance and time budget in code.

#include <chrono>
#include <cstdio>
#include <functional>

#include "heisenvt/reports.hpp"

using namespace heisenvt;

namespace {

int failures = 0;

void criterion(int id, const std::string& name, double budget_seconds,
               const std::function<bool(std::string&)>& body) {
    std::string detail;
    auto t0 = std::chrono::steady_clock::now();
    bool ok = false;
    try {
        ok = body(detail);
    } catch (const std::exception& e) {
        detail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                      .count();
    if (secs > budget_seconds) {
        ok = false;
        detail += (detail.empty() ? "" : "; ") + std::string("over time budget");
    }
    if (!ok) ++failures;
    std::printf("%s  [%2d] %-34s (%6.2fs)  %s\n", ok ? "PASS" : "FAIL", id,
                name.c_str(), secs, detail.c_str());
    std::fflush(stdout);
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3g", v);
    return buf;
}

std::vector<LevelFunction> all_coefficients(const RepLabel& label, long n) {
    long dim = label.dim();
    QuotientLayout layout(label.prime(), label.d(), n);
    std::vector<LevelFunction> out(
        static_cast<size_t>(dim) * dim, LevelFunction(label.prime(), label.d(), n));
    RepEvaluator eval(label, n);
    std::vector<long> coords(2 * label.d() + 1), rows(dim);
    std::vector<cdouble> vals(dim);
    for (size_t gi = 0; gi < layout.size(); ++gi) {
        layout.decode(gi, coords);
        eval.columns(coords, rows, vals);
        for (long c = 0; c < dim; ++c)
            out[static_cast<size_t>(rows[c]) * dim + c][gi] = vals[c];
    }
    return out;
}

} // namespace

int main() {
    std::printf("acceptance suite, %s %s\n", kToolName, kVersion);

    criterion(1, "Peter-Weyl census", 4.0, [](std::string& detail) {
        struct Case { long p, d, n, expect; };
        bool ok = true;
        for (Case c : {Case{3, 1, 1, 27}, Case{3, 1, 2, 729}, Case{5, 1, 1, 125},
                       Case{3, 2, 1, 243}}) {
            auto t0 = std::chrono::steady_clock::now();
            auto [sum, order] = verify_peter_weyl(Prime(c.p), c.d, c.n);
            double secs =
                std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                    .count();
            ok = ok && sum == order && sum == c.expect && secs < 1.0;
        }
        detail = "exact integer equality at (3,1,1) (3,1,2) (5,1,1) (3,2,1)";
        return ok;
    });

    criterion(2, "representation laws, full sweep", 10.0, [](std::string& detail) {
        Prime p(3);
        QuotientLayout layout(p, 1, 1);
        size_t N = layout.size();
        double worst = 0.0;
        for (const auto& label : enumerate_dual(p, 1, 1)) {
            std::vector<CMatrix> mats;
            mats.reserve(N);
            for (size_t i = 0; i < N; ++i)
                mats.push_back(rep_matrix_entries(label, layout.element(i)));
            for (size_t i = 0; i < N; ++i)
                worst = std::max(worst,
                                 (mats[i] * mats[i].adjoint()).deviation_from_identity());
            for (size_t i = 0; i < N; ++i)
                for (size_t j = 0; j < N; ++j)
                    worst = std::max(worst, (mats[i] * mats[j]).max_abs_diff(
                                                mats[layout.multiply_index(i, j)]));
        }
        detail = "27^2 products x 11 labels, max err " + fmt(worst);
        return worst <= 1e-12;
    });

    criterion(3, "Schur orthonormality over B(2)", 60.0, [](std::string& detail) {
        Prime p(3);
        std::vector<LevelFunction> funcs;
        std::vector<double> scale;
        for (const auto& label : enumerate_dual(p, 1, 2)) {
            double s = std::sqrt(static_cast<double>(label.dim()));
            for (auto& f : all_coefficients(label, 2)) {
                funcs.push_back(std::move(f));
                scale.push_back(s);
            }
        }
        if (funcs.size() != 729) {
            detail = "expected 729 coefficient functions";
            return false;
        }
        double worst = 0.0;
        std::vector<double> worst_rows(funcs.size(), 0.0);
        parallel_for(funcs.size(), [&](size_t i) {
            double w = 0.0;
            for (size_t j = 0; j < funcs.size(); ++j) {
                cdouble g = scale[i] * scale[j] * haar_inner(funcs[i], funcs[j]);
                cdouble want = (i == j) ? cdouble(1.0) : cdouble(0.0);
                w = std::max(w, std::abs(g - want));
            }
            worst_rows[i] = w;
        });
        for (double w : worst_rows) worst = std::max(worst, w);
        detail = "729 x 729 Gram vs identity, max err " + fmt(worst);
        return worst <= 1e-12;
    });

    criterion(4, "Fourier inversion and Plancherel", 60.0, [](std::string& detail) {
        Prime p(3);
        double worst_rt = 0.0, worst_pl = 0.0;
        for (uint64_t seed = 1; seed <= 20; ++seed) {
            LevelFunction f = LevelFunction::random(p, 1, 2, seed);
            FourierCoefficients F = forward_transform(f);
            worst_rt = std::max(worst_rt, (inverse_transform(F) - f).max_abs());
            double lhs = l2_norm(f);
            worst_pl = std::max(worst_pl, std::abs(lhs * lhs - plancherel_sum(F)));
        }
        detail = "20 random level-2 functions, round trip " + fmt(worst_rt) +
                 ", Plancherel " + fmt(worst_pl);
        return worst_rt <= 1e-10 && worst_pl <= 1e-10;
    });

    criterion(5, "VT eigenvalues on B(2) coefficients", 60.0, [](std::string& detail) {
        Prime p(3);
        OperatorSpec vt1 = OperatorSpec::vt(1.0);
        double csub = vt_constants(p, 1.0, 3).sub; // 39/40
        double worst = 0.0;
        long count = 0;
        for (const auto& label : enumerate_dual(p, 1, 2)) {
            // the trivial label's coefficient is the constant, annihilated by D^1
            double ev = label.is_trivial()
                            ? 0.0
                            : static_cast<double>(p.pow(label.norm_exp())) - csub;
            for (auto& f : all_coefficients(label, 2)) {
                LevelFunction want = cdouble(ev) * f;
                worst = std::max(worst, (apply_operator(vt1, f) - want).max_abs());
                ++count;
            }
        }
        detail = std::to_string(count) + " coefficients, |lambda|-39/40 law, max err " +
                 fmt(worst) + " (81/40 on norm-3 labels)";
        return count == 729 && worst <= 1e-10;
    });

    criterion(6, "generic block spectra at level 2", 120.0, [](std::string& detail) {
        Prime p(3);
        OperatorSpec sub = OperatorSpec::sublaplacian(1, 1.0);
        BlockComparisonReport rep = compare_block_spectra(sub, p, 1, 2, 1e-9);
        // the worked value: (lambda, xi, eta, h', tau) = (1/3, 0, 1/9, 0, 1/3)
        RepLabel worked({DualScalar::trivial(p)}, {DualScalar::make(p, 1, 2)},
                        DualScalar::make(p, 1, 1));
        std::vector<long> hp{0};
        std::vector<DualScalar> tau{DualScalar::make(p, 1, 1)};
        double val = closed_form_eigenvalue(sub, worked, hp, tau);
        bool worked_ok = std::abs(val - 10.5) <= 1e-12;
        bool worked_in_oracle = false;
        for (const auto& b : rep.blocks) {
            if (b.label_str == "l=1/3;xi=(0);eta=(1/9)" && b.h_prime_str == "(0)") {
                for (double v : b.oracle_values)
                    worked_in_oracle = worked_in_oracle || std::abs(v - 10.5) <= 1e-9;
            }
        }
        detail = std::to_string(rep.generic_count) + " generic blocks match, " +
                 std::to_string(rep.degenerate_count) +
                 " degenerate documented; worked value 21/2 present";
        return rep.all_generic_match && worked_ok && worked_in_oracle;
    });

    criterion(7, "oracle self-consistency at 729", 120.0, [](std::string& detail) {
        Prime p(3);
        OperatorSpec sub = OperatorSpec::sublaplacian(1, 1.0);
        SpectrumReport dense = oracle_spectrum(sub, p, 1, 2, SpectrumMode::dense);
        SpectrumReport block = oracle_spectrum(sub, p, 1, 2, SpectrumMode::block);
        SpectrumComparison cmp = compare_spectra(dense, block, 1e-9);
        CMatrix a = dense_operator_matrix(sub, p, 1, 2);
        double tr = a.trace().real();
        double rel_dense = std::abs(dense.trace - tr) / std::max(1.0, std::abs(tr));
        double rel_block = std::abs(block.trace - tr) / std::max(1.0, std::abs(tr));
        detail = "multisets " + std::string(cmp.multisets_match ? "match" : "differ") +
                 " (max err " + fmt(cmp.max_err) + "), trace rel " +
                 fmt(std::max(rel_dense, rel_block));
        return cmp.multisets_match && rel_dense <= 1e-8 && rel_block <= 1e-8 &&
               dense.raw.size() == 729 && block.raw.size() == 729;
    });

    criterion(8, "structural invariants", 120.0, [](std::string& detail) {
        Prime p(3);
        OperatorSpec sub = OperatorSpec::sublaplacian(1, 1.0);

        // Hermitian symmetry of the dense matrices
        CMatrix a1 = dense_operator_matrix(sub, p, 1, 1);
        CMatrix a2 = dense_operator_matrix(sub, p, 1, 2);
        double herm = std::max(a1.deviation_from_hermitian(),
                               a2.deviation_from_hermitian());

        // left-invariance: A commutes with every left translation
        double inv_worst = 0.0;
        for (long lev = 1; lev <= 2; ++lev) {
            const CMatrix& a = (lev == 1) ? a1 : a2;
            QuotientLayout layout(p, 1, lev);
            size_t N = layout.size();
            std::vector<size_t> perm(N);
            for (size_t gi = 0; gi < N; ++gi) {
                size_t ginv = layout.inverse_index(gi);
                for (size_t i = 0; i < N; ++i)
                    perm[i] = layout.multiply_index(ginv, i);
                for (size_t i = 0; i < N; ++i)
                    for (size_t k = 0; k < N; ++k)
                        inv_worst = std::max(inv_worst,
                                             std::abs(a(i, k) - a(perm[i], perm[k])));
                if (lev == 2 && gi >= 80) break; // full sweep at level 1, sampled at 2
            }
        }

        // every V^{h'} is invariant: projection residual of the applied basis
        double block_worst = 0.0;
        std::vector<std::pair<RepLabel, std::vector<long>>> tasks;
        for (const auto& label : enumerate_dual(p, 1, 2))
            for (const auto& hp : h_prime_range(p, 1, label.central_exp()))
                tasks.emplace_back(label, hp);
        std::vector<double> residuals(tasks.size(), 0.0);
        parallel_for(tasks.size(), [&](size_t i) {
            const auto& [label, hp] = tasks[i];
            residuals[i] = restrict_to_block(sub, label, hp, 2).invariance_residual;
        });
        for (double r : residuals) block_worst = std::max(block_worst, r);

        detail = "hermitian " + fmt(herm) + ", left-invariance " + fmt(inv_worst) +
                 ", block invariance " + fmt(block_worst) + " over " +
                 std::to_string(tasks.size()) + " blocks";
        return herm <= 1e-12 && inv_worst <= 1e-12 && block_worst <= 1e-12;
    });

    criterion(9, "degenerate block documented", 30.0, [](std::string& detail) {
        Prime p(3);
        OperatorSpec sub = OperatorSpec::sublaplacian(1, 1.0);

        // independent route: exact rational characteristic polynomial of the
        // hand-assembled block diag(0, 9/4, 9/4) + (9/4) I - (3/4) J
        mpq_class s1 = mpq_class(3) - vt_sub_exact(p, 1, 1);
        std::vector<std::vector<mpq_class>> b(3,
                                              std::vector<mpq_class>(3, mpq_class(-3, 4)));
        b[0][0] = s1 - mpq_class(3, 4);
        b[1][1] = 2 * s1 - mpq_class(3, 4);
        b[2][2] = 2 * s1 - mpq_class(3, 4);
        mpq_class tr = b[0][0] + b[1][1] + b[2][2];
        auto minor2 = [&](int i, int j) -> mpq_class {
            return b[i][i] * b[j][j] - b[i][j] * b[j][i];
        };
        mpq_class mm = minor2(0, 1) + minor2(0, 2) + minor2(1, 2);
        mpq_class det = b[0][0] * (b[1][1] * b[2][2] - b[1][2] * b[2][1]) -
                        b[0][1] * (b[1][0] * b[2][2] - b[1][2] * b[2][0]) +
                        b[0][2] * (b[1][0] * b[2][1] - b[1][1] * b[2][0]);
        // mu^3 - tr mu^2 + mm mu - det must factor as (mu - 9/2)(mu^2 - 9/2 mu + 27/8)
        mpq_class nh(9, 2);
        bool root_exact = nh * nh * nh - tr * nh * nh + mm * nh - det == 0;
        mpq_class q1 = nh - tr, q0 = mm + nh * q1;
        bool quotient_exact = q1 == mpq_class(-9, 2) && q0 == mpq_class(27, 8);
        double disc = std::sqrt(mpq_class(q1 * q1 - 4 * q0).get_d());
        std::vector<double> exact{(-q1.get_d() - disc) / 2.0,
                                  (-q1.get_d() + disc) / 2.0, 4.5};
        std::sort(exact.begin(), exact.end());

        RepLabel label({DualScalar::trivial(p)}, {DualScalar::trivial(p)},
                       DualScalar::make(p, 1, 1));
        std::vector<long> hp{0};
        SubrepBlock blk = restrict_to_block(sub, label, hp, 2);
        auto oracle = hermitian_eigenvalues(blk.matrix);
        double worst = 0.0;
        for (size_t i = 0; i < 3; ++i)
            worst = std::max(worst, std::abs(oracle[i] - exact[i]));

        BlockComparisonReport rep = compare_block_spectra(sub, p, 1, 1, 1e-9);
        bool flagged = false;
        for (const auto& bc : rep.blocks)
            if (bc.label_str == "l=1/3;xi=(0);eta=(0)" && bc.h_prime_str == "(0)")
                flagged = !bc.generic && !bc.matched;

        detail = "charpoly (mu-9/2)(mu^2-9/2mu+27/8) exact, oracle err " + fmt(worst) +
                 ", block flagged degenerate";
        return root_exact && quotient_exact && worst <= 1e-9 && flagged;
    });

    criterion(10, "hypoellipticity scan", 120.0, [](std::string& detail) {
        Prime p(3);
        EllipticityReport lap =
            hypoellipticity_scan(OperatorSpec::vladimirov_laplacian(1, 1.0), p, 1, 3);
        EllipticityReport sub =
            hypoellipticity_scan(OperatorSpec::sublaplacian(1, 1.0), p, 1, 3);
        bool lap_ok = lap.inf_order >= 0.9 && lap.inf_order <= 1.1 &&
                      lap.op_order >= 0.9 && lap.op_order <= 1.1 &&
                      !lap.not_hypoelliptic;
        bool sub_ok = sub.op_order <= 1.1 && sub.inf_order > 0.0;
        detail = "laplacian orders (" + fmt(lap.inf_order) + ", " + fmt(lap.op_order) +
                 "); sub orders (" + fmt(sub.inf_order) + ", " + fmt(sub.op_order) +
                 "), gap " + fmt(sub.subelliptic_gap);
        return lap_ok && sub_ok;
    });

    criterion(11, "coordinate-form equivalence", 10.0, [](std::string& detail) {
        Prime p(3);
        OperatorSpec dy =
            OperatorSpec::from_terms({OperatorTerm::directional({0}, {1}, 0, 1.0)}, "dy");
        double worst = 0.0;
        for (uint64_t seed = 1; seed <= 10; ++seed) {
            LevelFunction f = LevelFunction::random(p, 1, 2, 9000 + seed);
            worst = std::max(worst, (apply_operator(dy, f) -
                                     apply_noninvariant_vt(0, 1.0, f))
                                        .max_abs());
        }
        detail = "10 random level-2 functions, max err " + fmt(worst);
        return worst <= 1e-12;
    });

    criterion(12, "full verify suite at desk scale", 300.0, [](std::string& detail) {
        bool ok = true;
        long checks = 0;
        for (auto [pp, nn] : {std::pair<long, long>{3, 1}, {3, 2}, {5, 1}, {5, 2}}) {
            for (const auto& c : run_verify(Prime(pp), 1, nn)) {
                ok = ok && c.pass;
                ++checks;
            }
        }
        detail = std::to_string(checks) + " checks over p in {3,5}, d=1, n <= 2";
        return ok;
    });

    std::printf("%d of 12 criteria passed\n", 12 - failures);
    return failures == 0 ? 0 : 2;
}
