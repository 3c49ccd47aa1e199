#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "diffalg/scalar.hpp"

using namespace diffalg;

namespace {

// Deterministic random scalar in Q(alpha)[theta]/(theta^2+3): small rational
// coordinates over the power basis.
Scalar random_scalar(std::mt19937& rng, const Field& f, const Scalar& al,
                     const Scalar& th) {
    std::uniform_int_distribution<int> num(-6, 6);
    std::uniform_int_distribution<int> den(1, 4);
    auto q = [&] { return Scalar(mpq_class(num(rng), den(rng))); };
    Scalar v = lift_to(q(), f);
    v = v + q() * al + q() * th + q() * al * th;
    return v;
}

}  // namespace

TEST_CASE("quadratic extension arithmetic pins") {
    Field f = field_with_parameters({"alpha", "beta"});
    Field fe = adjoin_root(f, {Scalar(3), Scalar(0), Scalar(1)}, "sqrtm3");
    const Scalar th = generator(fe, "sqrtm3");
    const Scalar one(1);

    CHECK((one + th) * (one - th) == Scalar(4));
    CHECK(pow(one + th, 3) == Scalar(-8));

    const Scalar al = generator(fe, "alpha");
    CHECK((al * al - Scalar(1)) / (al - Scalar(1)) == al + Scalar(1));

    SECTION("square roots inside the tower") {
        const Scalar sq = (one + th) * (one + th) / Scalar(4);
        auto r = try_sqrt(sq);
        REQUIRE(r);
        CHECK(*r * *r == sq);
        CHECK(!try_sqrt(th));  // sqrt(sqrt(-3)) is not in the tower
        CHECK(!try_sqrt(lift_to(Scalar(2), fe)));
    }

    SECTION("reducible minimal polynomial is rejected") {
        CHECK_THROWS_AS(adjoin_root(f, {Scalar(-4), Scalar(0), Scalar(1)}, "g"),
                        reducible_error);
    }
}

TEST_CASE("specialization of the parameter point") {
    Field f = field_with_parameters({"alpha", "beta"});
    Field fe = adjoin_root(f, {Scalar(3), Scalar(0), Scalar(1)}, "sqrtm3");
    const Scalar al = generator(fe, "alpha");
    const Scalar be = generator(fe, "beta");

    Field tq = adjoin_root(rationals(), {Scalar(3), Scalar(0), Scalar(1)}, "sqrtm3");
    const Scalar thq = generator(tq);
    SpecializationMap sp(fe, tq,
                         {{"alpha", -(Scalar(1) + thq) / Scalar(4)},
                          {"beta", -(Scalar(1) + thq) / Scalar(8)}});

    CHECK(sp.apply(Scalar(256) * pow(al, 3) - Scalar(27)) == Scalar(5));

    const Scalar g1 = pow(pow(be, 4) + be + al, 2);
    CHECK(sp.apply(g1) ==
          Scalar(mpq_class(37249, 262144)) * pow(Scalar(1) + thq, 2));

    SpecializationMap sp2(f, rationals(),
                          {{"alpha", Scalar(mpq_class(5, 2))}, {"beta", Scalar(0)}});
    auto ii = is_rational_integer(sp2.apply(generator(f, "alpha") - Scalar(mpq_class(1, 2))));
    REQUIRE(ii);
    CHECK(*ii == 2);
    CHECK(!is_rational_integer(Scalar(mpq_class(1, 2))));
    CHECK(is_rational_integer(Scalar(-7)));
}

TEST_CASE("rational coordinates expose integer relations") {
    auto m = rational_coordinates({Scalar(1), Scalar(mpq_class(1, 2))}, true);
    REQUIRE(m.rows.size() == 2);
    REQUIRE(m.monomials.size() == 1);
    CHECK(m.rows[0][0] * 1 + m.rows[1][0] * (-2) == 0);
}

TEST_CASE("sqrt_or_adjoin naming") {
    const Field& q = rationals();
    auto [f1, i] = sqrt_or_adjoin(Scalar(-1), q);
    CHECK(has_generator(f1, "i"));
    CHECK(i * i == Scalar(-1));
    // a second non-square radicand gets a fresh w-name
    auto [f2, w] = sqrt_or_adjoin(lift_to(Scalar(5), f1), f1);
    CHECK(w * w == Scalar(5));
    CHECK(has_generator(f2, "w1"));
    // square radicands never extend
    auto [f3, s] = sqrt_or_adjoin(lift_to(Scalar(mpq_class(9, 4)), f2), f2);
    CHECK(field_eq(f3, f2));
    CHECK(s == Scalar(mpq_class(3, 2)));
}

TEST_CASE("field axioms on random elements") {
    Field f0 = field_with_parameters({"alpha"});
    Field f = adjoin_root(f0, {Scalar(3), Scalar(0), Scalar(1)}, "sqrtm3");
    const Scalar al = generator(f, "alpha");
    const Scalar th = generator(f, "sqrtm3");
    std::mt19937 rng(20240817);
    for (int k = 0; k < 500; ++k) {
        const Scalar a = random_scalar(rng, f, al, th);
        const Scalar b = random_scalar(rng, f, al, th);
        const Scalar c = random_scalar(rng, f, al, th);
        REQUIRE(a + (b + c) == (a + b) + c);
        REQUIRE(a * (b * c) == (a * b) * c);
        REQUIRE(a * (b + c) == a * b + a * c);
        REQUIRE(a + b == b + a);
        REQUIRE(a * b == b * a);
        REQUIRE(a - a == Scalar(0));
        if (!b.is_zero()) REQUIRE(a / b * b == a);
        REQUIRE(pow(a, 3) == a * a * a);
    }
}

TEST_CASE("lift and comparison across the tower") {
    const Field& q = rationals();
    Field fa = add_parameter(q, "alpha");
    Field fe = adjoin_root(fa, {Scalar(3), Scalar(0), Scalar(1)}, "sqrtm3");
    const Scalar two(2);
    CHECK(lift_to(two, fe) == two);  // comparison lifts automatically
    CHECK_THROWS_AS(
        [&] {
            Field other = add_parameter(q, "beta");
            return generator(other, "beta") + generator(fa, "alpha");
        }(),
        descriptor_mismatch);
}
