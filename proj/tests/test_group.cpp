#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "heisenvt/group.hpp"
#include "heisenvt/level_function.hpp"

using namespace heisenvt;

namespace {

GroupElement g1(const Prime& p, long n, long x, long y, long z) {
    return GroupElement::from_values(p, n, {x}, {y}, z);
}

} // namespace

TEST_CASE("group law") {
    Prime p3(3);

    SECTION("central correction z + z' + x.y'") {
        CHECK(multiply(g1(p3, 2, 1, 2, 0), g1(p3, 2, 0, 1, 0)) == g1(p3, 2, 1, 3, 1));
        CHECK(multiply(g1(p3, 1, 2, 0, 0), g1(p3, 1, 0, 2, 0)) == g1(p3, 1, 2, 2, 1));
    }

    SECTION("identity") {
        GroupElement e = GroupElement::identity(p3, 1, 2);
        GroupElement g = g1(p3, 2, 4, 7, 5);
        CHECK(multiply(g, e) == g);
        CHECK(multiply(e, g) == g);
    }

    SECTION("level mismatch rejected") {
        CHECK_THROWS_AS(multiply(g1(p3, 1, 1, 0, 0), g1(p3, 2, 1, 0, 0)),
                        LevelMismatch);
    }
}

TEST_CASE("inverse") {
    Prime p3(3);
    CHECK(inverse(g1(p3, 2, 1, 1, 0)) == g1(p3, 2, -1, -1, 1));
    CHECK(inverse(GroupElement::identity(p3, 1, 2)) ==
          GroupElement::identity(p3, 1, 2));
    CHECK(inverse(g1(p3, 2, 0, 0, 5)) == g1(p3, 2, 0, 0, -5));

    SECTION("g g^{-1} = e for random elements, also at d = 2") {
        std::mt19937_64 rng(3);
        for (int i = 0; i < 100; ++i) {
            GroupElement g = GroupElement::from_values(
                p3, 2, {static_cast<long>(rng() % 9), static_cast<long>(rng() % 9)},
                {static_cast<long>(rng() % 9), static_cast<long>(rng() % 9)},
                static_cast<long>(rng() % 9));
            CHECK(multiply(g, inverse(g)).is_identity());
            CHECK(multiply(inverse(g), g).is_identity());
        }
    }
}

TEST_CASE("exponential map and BCH") {
    Prime p3(3);

    SECTION("pure directions are fixed by exp") {
        LieVector a = LieVector::from_values(p3, 2, {4}, {0}, 0);
        LieVector b = LieVector::from_values(p3, 2, {0}, {5}, 0);
        LieVector c = LieVector::from_values(p3, 2, {0}, {0}, 7);
        CHECK(exp_map(a) == g1(p3, 2, 4, 0, 0));
        CHECK(exp_map(b) == g1(p3, 2, 0, 5, 0));
        CHECK(exp_map(c) == g1(p3, 2, 0, 0, 7));
    }

    SECTION("bch of the standard generators") {
        LieVector X = LieVector::from_values(p3, 2, {1}, {0}, 0);
        LieVector Y = LieVector::from_values(p3, 2, {0}, {1}, 0);
        LieVector XY = bch_star(X, Y);
        // central part is 1/2 mod 9 = 5
        CHECK(XY.c() == Residue(p3, 2, 5));
        CHECK(XY.a()[0] == Residue(p3, 2, 1));
        CHECK(XY.b()[0] == Residue(p3, 2, 1));
    }

    SECTION("exp intertwines bch with the group law, exactly") {
        std::mt19937_64 rng(5);
        for (int i = 0; i < 100; ++i) {
            LieVector u = LieVector::from_values(
                p3, 3, {static_cast<long>(rng() % 27)}, {static_cast<long>(rng() % 27)},
                static_cast<long>(rng() % 27));
            LieVector v = LieVector::from_values(
                p3, 3, {static_cast<long>(rng() % 27)}, {static_cast<long>(rng() % 27)},
                static_cast<long>(rng() % 27));
            CHECK(exp_map(bch_star(u, v)) == multiply(exp_map(u), exp_map(v)));
        }
    }

    SECTION("one-parameter subgroups are homomorphisms in t") {
        Prime p5(5);
        LieVector v = LieVector::from_values(p5, 2, {3}, {2}, 1);
        for (long s = 0; s < 25; s += 7)
            for (long t = 0; t < 25; t += 3) {
                GroupElement lhs = one_parameter(v, Residue(p5, 2, s + t));
                GroupElement rhs = multiply(one_parameter(v, Residue(p5, 2, s)),
                                            one_parameter(v, Residue(p5, 2, t)));
                CHECK(lhs == rhs);
            }
    }
}

TEST_CASE("group norm") {
    Prime p3(3);
    CHECK(group_norm(g1(p3, 2, 0, 0, 3)).exponent == 1);
    CHECK_FALSE(group_norm(g1(p3, 2, 0, 0, 3)).at_most);
    CHECK(group_norm(g1(p3, 2, 1, 0, 3)).exponent == 0);
    PadicNorm zero = group_norm(GroupElement::identity(p3, 1, 2));
    CHECK(zero.exponent == 2);
    CHECK(zero.at_most); // the zero coset only bounds the norm

    SECTION("Vilenkin ultrametric is the (2d+1)-th power of the norm") {
        QuotientLayout layout(p3, 1, 2);
        for (size_t i = 1; i < layout.size(); ++i) {
            PadicNorm nm = layout.norm_at(i);
            if (nm.at_most) continue;
            // |g|_G = p^{-j(2d+1)} when g lies in G_j \ G_{j+1}
            double vilenkin = std::pow(3.0, -3.0 * static_cast<double>(nm.exponent));
            CHECK(std::pow(nm.to_double(p3), 3.0) == Catch::Approx(vilenkin));
        }
    }
}

TEST_CASE("quotient enumeration") {
    Prime p3(3);

    SECTION("27 elements at p=3, d=1, n=1") {
        auto els = enumerate_quotient(p3, 1, 1);
        CHECK(els.size() == 27);
    }

    SECTION("documented mixed-radix order") {
        QuotientLayout layout(p3, 2, 1);
        CHECK(layout.size() == 243);
        // index = flat(x) + p^{nd} flat(y) + p^{2nd} flat(z)
        GroupElement g = GroupElement::from_values(p3, 1, {1, 2}, {0, 1}, 2);
        size_t expect = (1 + 2 * 3) + 9 * (0 + 1 * 3) + 81 * 2;
        CHECK(layout.index_of(g) == expect);
        CHECK(layout.element(expect) == g);
    }

    SECTION("index round trip") {
        QuotientLayout layout(p3, 1, 2);
        for (size_t i = 0; i < layout.size(); ++i)
            CHECK(layout.index_of(layout.element(i)) == i);
    }

    SECTION("index-level ops agree with element ops") {
        QuotientLayout layout(p3, 1, 1);
        for (size_t i = 0; i < layout.size(); ++i)
            for (size_t j = 0; j < layout.size(); ++j)
                CHECK(layout.multiply_index(i, j) ==
                      layout.index_of(multiply(layout.element(i), layout.element(j))));
    }
}

TEST_CASE("associativity, full level-1 sweep") {
    Prime p3(3);
    QuotientLayout layout(p3, 1, 1);
    size_t n = layout.size();
    std::vector<size_t> table(n * n);
    for (size_t i = 0; i < n; ++i)
        for (size_t j = 0; j < n; ++j) table[i * n + j] = layout.multiply_index(i, j);
    for (size_t a = 0; a < n; ++a)
        for (size_t b = 0; b < n; ++b)
            for (size_t c = 0; c < n; ++c)
                REQUIRE(table[table[a * n + b] * n + c] == table[a * n + table[b * n + c]]);
}

TEST_CASE("haar average") {
    Prime p3(3);

    SECTION("constants average to themselves") {
        LevelFunction one = LevelFunction::constant(p3, 1, 1, 1.0);
        CHECK(std::abs(haar_average(one) - cdouble(1.0, 0.0)) < 1e-15);
    }

    SECTION("translation invariance") {
        LevelFunction f = LevelFunction::random(p3, 1, 2, 99);
        cdouble mean = haar_average(f);
        std::mt19937_64 rng(100);
        for (int i = 0; i < 20; ++i) {
            GroupElement g = f.layout().element(rng() % f.size());
            CHECK(std::abs(haar_average(translate_left(f, g)) - mean) < 1e-13);
            CHECK(std::abs(haar_average(translate_right(f, g)) - mean) < 1e-13);
        }
    }
}
