#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "heisenvt/dual.hpp"
#include "heisenvt/level_function.hpp"

using namespace heisenvt;

namespace {

RepLabel label_d1(const Prime& p, long xi_n, long xi_k, long eta_n, long eta_k,
                  long lam_n, long lam_k) {
    return RepLabel({DualScalar::make(p, xi_n, xi_k)},
                    {DualScalar::make(p, eta_n, eta_k)},
                    DualScalar::make(p, lam_n, lam_k));
}

/// All matrix-coefficient functions of one label over the level-n quotient,
/// flattened row-major: index (h', h) -> function.
std::vector<LevelFunction> coefficient_functions(const RepLabel& label, long n) {
    long dim = label.dim();
    std::vector<LevelFunction> out(
        static_cast<size_t>(dim) * dim,
        LevelFunction(label.prime(), label.d(), n));
    QuotientLayout layout(label.prime(), label.d(), n);
    for (size_t gi = 0; gi < layout.size(); ++gi) {
        CMatrix m = rep_matrix_entries(label, layout.element(gi));
        for (long r = 0; r < dim; ++r)
            for (long c = 0; c < dim; ++c)
                out[static_cast<size_t>(r) * dim + c][gi] = m(r, c);
    }
    return out;
}

} // namespace

TEST_CASE("dual ball census") {
    Prime p3(3);

    SECTION("11 labels at p=3, d=1, n=1: 9 characters and 2 central") {
        auto labels = enumerate_dual(p3, 1, 1);
        REQUIRE(labels.size() == 11);
        long characters = 0, central = 0;
        for (const auto& l : labels) {
            if (l.lambda().is_trivial()) ++characters;
            else {
                ++central;
                CHECK(l.xi()[0].is_trivial());
                CHECK(l.eta()[0].is_trivial());
                CHECK(l.dim() == 3);
            }
        }
        CHECK(characters == 9);
        CHECK(central == 2);
    }

    SECTION("n=0 has only the trivial label") {
        auto labels = enumerate_dual(p3, 1, 0);
        REQUIRE(labels.size() == 1);
        CHECK(labels[0].is_trivial());
    }

    SECTION("labels come out sorted and unique") {
        auto labels = enumerate_dual(p3, 1, 2);
        for (size_t i = 0; i + 1 < labels.size(); ++i)
            CHECK(labels[i] < labels[i + 1]);
    }

    SECTION("every label satisfies the reduction constraint") {
        for (const auto& l : enumerate_dual(p3, 1, 2)) {
            long m = l.central_exp();
            CHECK(dual_reduce(l.xi()[0], m) == l.xi()[0]);
            CHECK(dual_reduce(l.eta()[0], m) == l.eta()[0]);
            CHECK(l.norm_exp() <= 2);
        }
    }
}

TEST_CASE("Peter-Weyl census") {
    auto check = [](long p, long d, long n, long expect) {
        auto [sum, order] = verify_peter_weyl(Prime(p), d, n);
        CHECK(sum == order);
        CHECK(sum == expect);
    };
    check(3, 1, 1, 27);
    check(3, 1, 2, 729);
    check(5, 1, 1, 125);
    check(3, 2, 1, 243);
}

TEST_CASE("representation matrices") {
    Prime p3(3);
    RepLabel pi = label_d1(p3, 0, 0, 0, 0, 1, 1); // lambda = 1/3

    SECTION("identity maps to the identity matrix") {
        CMatrix m = rep_matrix_entries(pi, GroupElement::identity(p3, 1, 1));
        CHECK(m.deviation_from_identity() < 1e-15);
    }

    SECTION("central elements act by the central character") {
        GroupElement z = GroupElement::from_values(p3, 1, {0}, {0}, 1);
        CMatrix m = rep_matrix_entries(pi, z);
        cdouble w = std::polar(1.0, 2.0 * std::numbers::pi / 3.0);
        for (size_t r = 0; r < 3; ++r)
            for (size_t c = 0; c < 3; ++c)
                CHECK(std::abs(m(r, c) - (r == c ? w : cdouble(0.0))) < 1e-15);
    }

    SECTION("too-coarse group elements are rejected") {
        RepLabel fine = label_d1(p3, 0, 0, 1, 2, 1, 1);
        CHECK_THROWS_AS(rep_matrix_entries(fine, GroupElement::identity(p3, 1, 1)),
                        InsufficientPrecision);
    }

    SECTION("unitary and a homomorphism over the full level-1 sweep") {
        QuotientLayout layout(p3, 1, 1);
        for (const auto& label : enumerate_dual(p3, 1, 1)) {
            std::vector<CMatrix> mats;
            for (size_t i = 0; i < layout.size(); ++i)
                mats.push_back(rep_matrix_entries(label, layout.element(i)));
            for (size_t i = 0; i < layout.size(); ++i)
                CHECK((mats[i] * mats[i].adjoint()).deviation_from_identity() < 1e-12);
            for (size_t i = 0; i < layout.size(); ++i)
                for (size_t j = 0; j < layout.size(); ++j) {
                    CMatrix prod = mats[i] * mats[j];
                    CHECK(prod.max_abs_diff(mats[layout.multiply_index(i, j)]) < 1e-12);
                }
        }
    }

    SECTION("homomorphism on random level-2 pairs") {
        QuotientLayout layout(p3, 1, 2);
        std::mt19937_64 rng(23);
        for (const auto& label : enumerate_dual(p3, 1, 2)) {
            for (int rep = 0; rep < 8; ++rep) {
                GroupElement a = layout.element(rng() % layout.size());
                GroupElement b = layout.element(rng() % layout.size());
                CMatrix prod = rep_matrix_entries(label, a) * rep_matrix_entries(label, b);
                CHECK(prod.max_abs_diff(rep_matrix_entries(label, multiply(a, b))) <
                      1e-12);
            }
        }
    }
}

TEST_CASE("characters") {
    Prime p3(3);
    RepLabel pi = label_d1(p3, 0, 0, 0, 0, 1, 1);

    SECTION("chi(e) = dim") {
        CHECK(std::abs(character_value(pi, GroupElement::identity(p3, 1, 1)) -
                       cdouble(3.0, 0.0)) < 1e-14);
    }

    SECTION("x outside pZ_p kills the character") {
        GroupElement g = GroupElement::from_values(p3, 1, {1}, {0}, 0);
        CHECK(std::abs(character_value(pi, g)) < 1e-14);
    }

    SECTION("irreducibility: mean |chi|^2 = 1 over the level-1 quotient") {
        QuotientLayout layout(p3, 1, 1);
        double acc = 0.0;
        for (size_t i = 0; i < layout.size(); ++i)
            acc += std::norm(character_value(pi, layout.element(i)));
        CHECK(acc / static_cast<double>(layout.size()) == Catch::Approx(1.0).margin(1e-12));
    }

    SECTION("closed form with the dimension factor") {
        // chi = |lambda|^d e^{2 pi i {xi.x + eta.y + lambda z}} [x][y in p^m Z]
        RepLabel l = label_d1(p3, 0, 0, 1, 2, 1, 1);
        QuotientLayout layout(p3, 1, 2);
        std::mt19937_64 rng(29);
        for (int i = 0; i < 50; ++i) {
            GroupElement g = layout.element(rng() % layout.size());
            cdouble got = character_value(l, g);
            bool supported = g.x()[0].value_mod(1) == 0 && g.y()[0].value_mod(1) == 0;
            if (!supported) {
                CHECK(std::abs(got) < 1e-13);
            } else {
                RationalPhase ph = dual_pair(l.xi(), g.x());
                ph += dual_pair(l.eta(), g.y());
                ph += dual_pair(l.lambda(), g.z());
                CHECK(std::abs(got - 3.0 * unit_phase(ph)) < 1e-13);
            }
        }
    }
}

TEST_CASE("Schur orthogonality at level 1") {
    Prime p3(3);
    auto labels = enumerate_dual(p3, 1, 1);
    std::vector<LevelFunction> funcs;
    std::vector<double> scale;
    for (const auto& label : labels) {
        auto coeffs = coefficient_functions(label, 1);
        double s = std::sqrt(static_cast<double>(label.dim()));
        for (auto& f : coeffs) {
            funcs.push_back(std::move(f));
            scale.push_back(s);
        }
    }
    REQUIRE(funcs.size() == 27);
    for (size_t i = 0; i < funcs.size(); ++i)
        for (size_t j = 0; j < funcs.size(); ++j) {
            cdouble gram = scale[i] * scale[j] * haar_inner(funcs[i], funcs[j]);
            cdouble want = (i == j) ? cdouble(1.0) : cdouble(0.0);
            CHECK(std::abs(gram - want) < 1e-12);
        }
}

TEST_CASE("matrix coefficients are exactly level-n locally constant") {
    Prime p3(3);
    for (long n = 1; n <= 2; ++n) {
        for (const auto& label : enumerate_dual(p3, 1, n)) {
            if (label.norm_exp() != n) continue;
            auto coeffs = coefficient_functions(label, n);
            // not constant on cosets of G_{n-1}: some pair of points in a
            // common level-(n-1) coset must take different values
            QuotientLayout layout(p3, 1, n);
            for (const auto& f : coeffs) {
                bool varies = false;
                std::vector<long> gc(3), sc(3), rc(3);
                for (size_t i = 0; i < layout.size() && !varies; ++i) {
                    layout.decode(i, gc);
                    // perturb by elements of G_{n-1}: coords p^{n-1} * k
                    for (long kx = 0; kx < 3 && !varies; ++kx)
                        for (long ky = 0; ky < 3 && !varies; ++ky)
                            for (long kz = 0; kz < 3 && !varies; ++kz) {
                                long pj = Prime(3).pow(n - 1);
                                sc = {pj * kx, pj * ky, pj * kz};
                                layout.multiply_coords(gc, sc, rc);
                                if (std::abs(f[layout.index(rc)] - f[i]) > 1e-9)
                                    varies = true;
                            }
                }
                CHECK(varies);
            }
        }
    }
}

TEST_CASE("span of coefficients has the smooth-function dimension") {
    // the p^{n(2d+1)} scaled coefficients over B(n) form an orthonormal set,
    // hence a basis of the level-n functions; counted here via the census
    Prime p3(3);
    auto [sum1, order1] = verify_peter_weyl(p3, 1, 1);
    CHECK(sum1 == 27);
    auto [sum2, order2] = verify_peter_weyl(p3, 1, 2);
    CHECK(sum2 == 729);
}
