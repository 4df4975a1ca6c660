#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "heisenvt/padic.hpp"

using namespace heisenvt;

namespace {

// Independent digit-extraction oracle: the fractional part of a rational
// a/p^K (p coprime to a's reduced denominator) computed digit by digit from
// the p-adic expansion, never through the library path.
mpq_class fractional_part_by_digits(long p, const mpq_class& r) {
    if (r == 0) return 0;
    mpz_class num = r.get_num(), den = r.get_den();
    long v = 0;
    while (num % p == 0) { num /= p; ++v; }
    while (den % p == 0) { den /= p; --v; }
    if (v >= 0) return 0;
    // digits of the unit part num/den: u_j = (num * den^{-1}) mod p, iterated
    mpq_class acc = 0;
    mpz_class cur = num;
    mpz_class deninv;
    mpz_class pz(p);
    if (mpz_invert(deninv.get_mpz_t(), den.get_mpz_t(), pz.get_mpz_t()) == 0)
        throw std::logic_error("oracle: denominator not invertible mod p");
    mpq_class scale(1, 1);
    for (long j = 0; j < -v; ++j) scale /= p;
    for (long j = 0; j < -v; ++j) {
        mpz_class digit = (cur * deninv) % p;
        if (digit < 0) digit += p;
        acc += mpq_class(digit) * scale;
        cur = (cur - digit * den) / p;
        scale *= p;
    }
    mpz_class f;
    mpz_fdiv_q(f.get_mpz_t(), acc.get_num().get_mpz_t(), acc.get_den().get_mpz_t());
    return acc - mpq_class(f);
}

} // namespace

TEST_CASE("valuation") {
    Prime p3(3);
    CHECK(valuation(p3, mpq_class(18)) == Valuation::finite(2));
    CHECK(valuation(p3, mpq_class(5, 9)) == Valuation::finite(-2));
    CHECK(valuation(p3, mpq_class(0)).is_infinite);
    CHECK(valuation(Prime(5), mpq_class(50)) == Valuation::finite(2));
}

TEST_CASE("prime validation") {
    CHECK_THROWS_AS(Prime(2), std::invalid_argument);
    CHECK_THROWS_AS(Prime(4), std::invalid_argument);
    CHECK_THROWS_AS(Prime(9), std::invalid_argument);
    CHECK_NOTHROW(Prime(3));
    CHECK_NOTHROW(Prime(101));
}

TEST_CASE("fractional part") {
    Prime p3(3);
    CHECK(fractional_part(p3, mpq_class(5, 9)).value() == mpq_class(5, 9));
    CHECK(fractional_part(p3, mpq_class(7)).value() == 0);
    CHECK(fractional_part(p3, mpq_class(10, 3)).value() == mpq_class(1, 3));
    CHECK_THROWS_AS(fractional_part(p3, mpq_class(1, 2)), std::invalid_argument);

    SECTION("agrees with the digit-extraction oracle") {
        std::mt19937_64 rng(20240115);
        for (int i = 0; i < 200; ++i) {
            long num = static_cast<long>(rng() % 2000) - 1000;
            long kexp = static_cast<long>(rng() % 4);
            mpq_class r(num, Prime(3).pow(kexp));
            r.canonicalize();
            CHECK(fractional_part(p3, r).value() == fractional_part_by_digits(3, r));
        }
    }
}

TEST_CASE("dual norm") {
    Prime p3(3), p5(5);
    CHECK(dual_norm(DualScalar::make(p3, 2, 2)) == 9);
    CHECK(dual_norm(DualScalar::trivial(p3)) == 1);
    CHECK(DualScalar::trivial(p3).is_trivial());
    CHECK(dual_norm(DualScalar::make(p5, 1, 1)) == 5);
    // canonicalization strips common powers of p
    CHECK(DualScalar::make(p3, 3, 2) == DualScalar::make(p3, 1, 1));
    CHECK(DualScalar::make(p3, 9, 2).is_trivial());
}

TEST_CASE("dual reduce") {
    Prime p3(3);
    DualScalar x = DualScalar::make(p3, 4, 2); // 4/9
    CHECK(dual_reduce(x, 1) == DualScalar::make(p3, 1, 2)); // 1/9
    CHECK(dual_reduce(DualScalar::make(p3, 1, 1), 1).is_trivial());
    CHECK(dual_reduce(x, 0) == x);

    SECTION("exhaustive coset check mod p^{-1}Z_p over denominators <= 9") {
        // the reduced class is the unique representative with digits beyond
        // position 1 that differs from x by an element of (1/3)Z_p
        mpq_class xr = x.representative();
        int found = 0;
        DualScalar witness = DualScalar::trivial(p3);
        std::vector<DualScalar> candidates{DualScalar::trivial(p3)};
        for (long k = 1; k <= 2; ++k)
            for (long a = 1; a < Prime(3).pow(k); ++a)
                if (a % 3 != 0) candidates.push_back(DualScalar::make(p3, a, k));
        for (const auto& c : candidates) {
            if (dual_reduce(c, 1) != c) continue; // digit c_1 must vanish
            mpq_class diff = xr - c.representative();
            bool in_coset = diff == 0 || valuation(p3, diff).v >= -1;
            if (in_coset) { ++found; witness = c; }
        }
        CHECK(found == 1);
        CHECK(witness == dual_reduce(x, 1));
    }

    SECTION("idempotent and a homomorphism mod p^{-m}") {
        std::mt19937_64 rng(7);
        for (int i = 0; i < 300; ++i) {
            DualScalar a = DualScalar::make(p3, static_cast<long>(rng() % 81),
                                            static_cast<long>(rng() % 5));
            DualScalar b = DualScalar::make(p3, static_cast<long>(rng() % 81),
                                            static_cast<long>(rng() % 5));
            long m = static_cast<long>(rng() % 4);
            CHECK(dual_reduce(dual_reduce(a, m), m) == dual_reduce(a, m));
            CHECK(dual_reduce(a + b, m) ==
                  dual_reduce(dual_reduce(a, m) + dual_reduce(b, m), m));
        }
    }
}

TEST_CASE("dual pairing and characters") {
    Prime p3(3);

    SECTION("worked examples") {
        DualScalar xi = DualScalar::make(p3, 1, 1); // 1/3
        Residue u(p3, 2, 1);
        CHECK(dual_pair(xi, u).value() == mpq_class(1, 3));
        auto c = character_value(std::span<const DualScalar>(&xi, 1),
                                 std::span<const Residue>(&u, 1));
        CHECK(std::abs(c - std::polar(1.0, 2.0 * std::numbers::pi / 3.0)) < 1e-15);

        DualScalar triv = DualScalar::trivial(p3);
        CHECK(dual_pair(triv, u).is_zero());

        CHECK(dual_pair(DualScalar::make(p3, 2, 2), Residue(p3, 2, 4)).value() ==
              mpq_class(8, 9));
        // digit check of {8/9}_3 = 2/9 + 2/3
        CHECK(fractional_part_by_digits(3, mpq_class(8, 9)) == mpq_class(8, 9));
    }

    SECTION("insufficient precision is rejected") {
        DualScalar xi = DualScalar::make(p3, 1, 2); // denominator 9
        Residue u(p3, 1, 1);                        // known only mod 3
        CHECK_THROWS_AS(dual_pair(xi, u), InsufficientPrecision);
    }

    SECTION("bilinearity: {xi.(u+v)} = {xi.u} + {xi.v} mod 1, exact") {
        std::mt19937_64 rng(11);
        for (int i = 0; i < 300; ++i) {
            long k = 1 + static_cast<long>(rng() % 3);
            std::vector<DualScalar> xi{
                DualScalar::make(p3, static_cast<long>(rng() % 27), k),
                DualScalar::make(p3, static_cast<long>(rng() % 27), rng() % 2 ? k : 0)};
            std::vector<Residue> u{Residue(p3, 3, static_cast<long>(rng() % 27)),
                                   Residue(p3, 3, static_cast<long>(rng() % 27))};
            std::vector<Residue> v{Residue(p3, 3, static_cast<long>(rng() % 27)),
                                   Residue(p3, 3, static_cast<long>(rng() % 27))};
            std::vector<Residue> uv{u[0] + v[0], u[1] + v[1]};
            CHECK(dual_pair(xi, uv) == dual_pair(xi, u) + dual_pair(xi, v));
        }
    }

    SECTION("characters have unit modulus") {
        std::mt19937_64 rng(13);
        for (int i = 0; i < 100; ++i) {
            DualScalar xi = DualScalar::make(p3, static_cast<long>(rng() % 81), 4);
            Residue u(p3, 4, static_cast<long>(rng() % 81));
            auto c = character_value(std::span<const DualScalar>(&xi, 1),
                                     std::span<const Residue>(&u, 1));
            CHECK(std::abs(std::abs(c) - 1.0) < 1e-15);
        }
    }
}

TEST_CASE("dual scale and add") {
    Prime p3(3);
    DualScalar lam = DualScalar::make(p3, 1, 2); // 1/9

    SECTION("scaling by residues") {
        CHECK(dual_scale(lam, Residue(p3, 2, 3)) == DualScalar::make(p3, 3, 2));
        CHECK(dual_scale(lam, Residue(p3, 2, 3)) == DualScalar::make(p3, 1, 1));
        CHECK(dual_scale(lam, Residue(p3, 2, 0)).is_trivial());
        // h known only mod 3 is too coarse for a denominator of 9
        CHECK_THROWS_AS(dual_scale(lam, Residue(p3, 1, 1)), InsufficientPrecision);
    }

    SECTION("norm never grows under scaling") {
        std::mt19937_64 rng(17);
        for (int i = 0; i < 200; ++i) {
            DualScalar l = DualScalar::make(p3, static_cast<long>(rng() % 81), 4);
            Residue h(p3, 4, static_cast<long>(rng() % 81));
            CHECK(dual_norm(dual_scale(l, h)) <= dual_norm(l));
        }
    }

    SECTION("class arithmetic in Q_p/Z_p") {
        DualScalar a = DualScalar::make(p3, 2, 1); // 2/3
        DualScalar b = DualScalar::make(p3, 2, 1);
        CHECK(a + b == DualScalar::make(p3, 1, 1)); // 4/3 = 1/3 mod 1
        CHECK((a - a).is_trivial());
        CHECK(a + DualScalar::trivial(p3) == a);
    }
}

TEST_CASE("phase arithmetic stays exact") {
    Prime p3(3);
    RationalPhase a = fractional_part(p3, mpq_class(2, 3));
    RationalPhase b = fractional_part(p3, mpq_class(2, 3));
    CHECK((a + b).value() == mpq_class(1, 3)); // wraps mod 1 exactly
    CHECK(RationalPhase().is_zero());
}
