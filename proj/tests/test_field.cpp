#include <catch2/catch_amalgamated.hpp>

#include "sprank/field.hpp"
#include "sprank/randgen.hpp"

using namespace sprank;

namespace {

// independent irreducibility oracle: a monic polynomial of degree e over GF(p)
// is irreducible iff no monic polynomial of degree 1..e/2 divides it
bool divides(const std::vector<uint64_t>& f, const std::vector<uint64_t>& g, uint64_t p) {
    std::vector<uint64_t> rem = f;
    detail::gfp_mod(rem, g, p);
    return rem.empty();
}

bool irreducible_by_trial_division(const std::vector<uint64_t>& f, uint64_t p) {
    int e = static_cast<int>(f.size()) - 1;
    for (int dg = 1; dg <= e / 2; ++dg) {
        uint64_t total = 1;
        for (int i = 0; i < dg; ++i) total *= p;
        for (uint64_t k = 0; k < total; ++k) {
            std::vector<uint64_t> g(dg + 1, 0);
            g[dg] = 1;
            uint64_t v = k;
            for (int i = 0; i < dg; ++i) {
                g[i] = v % p;
                v /= p;
            }
            if (divides(f, g, p)) return false;
        }
    }
    return true;
}

} // namespace

TEST_CASE("field_make parses the spec grammar") {
    CHECK(field_make("Q").kind() == FieldCtx::Kind::Rational);
    CHECK(field_make("GF(7)").kind() == FieldCtx::Kind::Prime);
    CHECK(field_make("GF(7)").p() == 7);
    CHECK_THROWS_MATCHES(field_make("GF(6)"), Error,
                         Catch::Matchers::Predicate<Error>(
                             [](const Error& e) { return e.code() == Errc::NON_PRIME; }));
    CHECK_THROWS_AS(field_make("ZZ"), Error);
    CHECK(field_make("GF(2^3)") == field_make("GF(8)"));
    CHECK(field_make("GF(3^2;1,0,1)").modulus() == std::vector<uint64_t>{1, 0, 1});
    CHECK_THROWS_MATCHES(field_make("GF(2^2;1,0,1)"), Error,
                         Catch::Matchers::Predicate<Error>(
                             [](const Error& e) { return e.code() == Errc::REDUCIBLE_MODULUS; }));
}

TEST_CASE("GF(4) picks the unique monic irreducible quadratic") {
    // oracle: enumerate all monic quadratics over GF(2)
    std::vector<std::vector<uint64_t>> irreducible;
    for (uint64_t c0 = 0; c0 < 2; ++c0)
        for (uint64_t c1 = 0; c1 < 2; ++c1) {
            std::vector<uint64_t> f{c0, c1, 1};
            bool has_root = false;
            for (uint64_t x = 0; x < 2; ++x)
                if ((c0 + c1 * x + x * x) % 2 == 0) has_root = true;
            if (!has_root) irreducible.push_back(f);
        }
    REQUIRE(irreducible.size() == 1);
    CHECK(irreducible[0] == std::vector<uint64_t>{1, 1, 1});
    CHECK(field_make("GF(4)").modulus() == std::vector<uint64_t>{1, 1, 1});
}

TEST_CASE("default moduli are the lex-smallest irreducible and Rabin agrees with trial division") {
    for (uint64_t p : {2ull, 3ull, 5ull}) {
        for (uint32_t e : {2u, 3u, 4u}) {
            FieldCtx F = FieldCtx::extension(p, e);
            const auto& mod = F.modulus();
            CHECK(irreducible_by_trial_division(mod, p));
            // nothing lexicographically smaller is irreducible
            uint64_t total = 1;
            for (uint32_t i = 0; i < e; ++i) total *= p;
            bool found_smaller = false;
            for (uint64_t k = 0; k < total && !found_smaller; ++k) {
                std::vector<uint64_t> cand(e + 1, 0);
                cand[e] = 1;
                uint64_t v = k;
                for (uint32_t i = 0; i < e; ++i) {
                    cand[e - 1 - i] = v % p;
                    v /= p;
                }
                if (cand == mod) break; // reached the chosen one first
                if (irreducible_by_trial_division(cand, p)) found_smaller = true;
            }
            CHECK_FALSE(found_smaller);
        }
    }
}

TEST_CASE("arith matches the spec examples") {
    FieldCtx f7 = field_make("GF(7)");
    // oracle: 3 * k == 1 mod 7 by direct scan
    uint64_t inv3 = 0;
    for (uint64_t k = 1; k < 7; ++k)
        if (3 * k % 7 == 1) inv3 = k;
    REQUIRE(inv3 == 5);
    CHECK(arith(f7, f7.zero(), f7.from_int(3), ArithOp::INV) == f7.from_int(5));

    FieldCtx f4 = field_make("GF(4)");
    FieldElement w = f4.gen();
    // x^2 mod x^2+x+1 = x+1
    CHECK(f4.mul(w, w) == f4.from_coeffs({1, 1}));

    FieldCtx f5 = field_make("GF(5)");
    CHECK_THROWS_MATCHES(arith(f5, f5.zero(), f5.zero(), ArithOp::INV), Error,
                         Catch::Matchers::Predicate<Error>(
                             [](const Error& e) { return e.code() == Errc::DIV_BY_ZERO; }));
}

TEST_CASE("field axioms hold on seeded random triples") {
    for (const std::string& spec : {"Q", "GF(7)", "GF(4)", "GF(9)", "GF(27)"}) {
        FieldCtx F = field_make(spec);
        Rng rng(0x5eed + spec.size());
        for (int i = 0; i < 1000; ++i) {
            FieldElement a = random_element(F, rng);
            FieldElement b = random_element(F, rng);
            FieldElement c = random_element(F, rng);
            CHECK(F.add(F.add(a, b), c) == F.add(a, F.add(b, c)));
            CHECK(F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c)));
            if (!F.is_zero(a)) CHECK(F.mul(a, F.inv(a)) == F.one());
        }
    }
}

TEST_CASE("element literals round-trip to the identical element") {
    for (const std::string& spec : {"Q", "GF(7)", "GF(9)"}) {
        FieldCtx F = field_make(spec);
        Rng rng(42);
        for (int i = 0; i < 200; ++i) {
            FieldElement x = random_element(F, rng);
            CHECK(F.parse(F.format(x)) == x);
        }
    }
    FieldCtx Q = field_make("Q");
    CHECK(Q.format(Q.parse("-6/4")) == "-3/2");
    CHECK(Q.parse("5") == Q.from_int(5));
}

TEST_CASE("ext_coords on the power basis") {
    FieldCtx f2 = field_make("GF(2)");
    FieldCtx f4 = field_make("GF(4)");
    FieldExt ext = FieldExt::make(f2, f4);
    CHECK(ext.degree() == 2);
    CHECK(ext.coords(f4.zero()) == std::vector<FieldElement>{f2.zero(), f2.zero()});
    // w + 1 has coordinates (1, 1) in the basis (1, w)
    FieldElement w1 = f4.from_coeffs({1, 1});
    CHECK(ext.coords(w1) == std::vector<FieldElement>{f2.one(), f2.one()});

    FieldCtx f3 = field_make("GF(3)");
    FieldCtx f9 = field_make("GF(9)");
    FieldExt ext9 = FieldExt::make(f3, f9);
    CHECK(ext9.coords(f9.one()) == std::vector<FieldElement>{f3.one(), f3.zero()});
}

TEST_CASE("ext_coords is K-linear and inverts recombine") {
    struct Pair {
        const char* K;
        const char* L;
    };
    for (Pair pr : {Pair{"GF(2)", "GF(4)"}, Pair{"GF(2)", "GF(8)"}, Pair{"GF(3)", "GF(9)"},
                    Pair{"GF(4)", "GF(16)"}, Pair{"Q", "Q"}}) {
        FieldCtx K = field_make(pr.K);
        FieldCtx L = field_make(pr.L);
        FieldExt ext = FieldExt::make(K, L);
        Rng rng(7);
        for (int i = 0; i < 1000; ++i) {
            FieldElement x = random_element(L, rng);
            FieldElement y = random_element(L, rng);
            auto cx = ext.coords(x);
            auto cy = ext.coords(y);
            auto cs = ext.coords(L.add(x, y));
            for (uint32_t j = 0; j < ext.degree(); ++j)
                CHECK(cs[j] == K.add(cx[j], cy[j]));
            CHECK(ext.recombine(cx) == x);
        }
        // embedding respects multiplication
        Rng rng2(8);
        for (int i = 0; i < 200; ++i) {
            FieldElement a = random_element(K, rng2);
            FieldElement b = random_element(K, rng2);
            CHECK(ext.embed(K.mul(a, b)) == L.mul(ext.embed(a), ext.embed(b)));
        }
    }
    CHECK_THROWS_MATCHES(FieldExt::make(field_make("GF(2)"), field_make("GF(9)")), Error,
                         Catch::Matchers::Predicate<Error>(
                             [](const Error& e) { return e.code() == Errc::NOT_AN_EXTENSION; }));
}
