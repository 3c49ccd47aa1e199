#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "diffalg/diffop.hpp"

using namespace diffalg;
using P = UPoly<Scalar>;
using F = RatF<Scalar>;

namespace {

F fx() { return F::x(); }
F fc(long n) { return F(Scalar(n)); }

DiffOperator bessel(const Scalar& al) {
    const F alx = F(P(al), P::x());
    return DiffOperator(OpForm::ddx, {fc(1) - alx * alx, fx().inverse(), fc(1)});
}

DiffOperator random_op(std::mt19937& rng, int maxord) {
    std::uniform_int_distribution<int> coeff(-3, 3);
    std::uniform_int_distribution<int> ord(1, maxord);
    const int n = ord(rng);
    std::vector<F> c(static_cast<std::size_t>(n) + 1);
    for (auto& v : c) {
        const int num = coeff(rng);
        const int s = coeff(rng);
        v = F(P(Scalar(num))) + F(P(Scalar(s)), P::x());
    }
    if (c.back().is_zero()) c.back() = fc(1);
    return DiffOperator(OpForm::ddx, c);
}

}  // namespace

TEST_CASE("euler and ddx forms convert both ways") {
    const DiffOperator d2(OpForm::ddx, {fc(0), fc(0), fc(1)});
    const DiffOperator e = to_euler(d2);
    const F x2inv = (fx() * fx()).inverse();
    CHECK(e.coeff(2) == x2inv);
    CHECK(e.coeff(1) == fc(0) - x2inv);
    CHECK(to_ddx(e) == d2);

    std::mt19937 rng(31415);
    for (int k = 0; k < 40; ++k) {
        const DiffOperator l = random_op(rng, 3);
        REQUIRE(to_ddx(to_euler(l)) == l);
    }
}

TEST_CASE("operator composition is associative and distributive") {
    std::mt19937 rng(2718);
    for (int k = 0; k < 25; ++k) {
        const DiffOperator a = random_op(rng, 2);
        const DiffOperator b = random_op(rng, 2);
        const DiffOperator c = random_op(rng, 2);
        REQUIRE((a * b) * c == a * (b * c));
        REQUIRE(a * (b + c) == a * b + a * c);
        REQUIRE((a + b) * c == a * c + b * c);
    }
}

TEST_CASE("application and twist") {
    const DiffOperator d2(OpForm::ddx, {fc(0), fc(0), fc(1)});
    CHECK(d2.apply(F(P::x() * P::x())) == fc(2));
    const DiffOperator tw = twisted(d2, fx().inverse());
    CHECK(tw.coeff(1) == fc(2) * fx().inverse());
    CHECK(tw.coeff(0).is_zero());
    // twist moves exponential factors onto polynomial solutions
    auto sols = polynomial_solutions(tw, 1);
    REQUIRE(sols.size() == 1);
    CHECK(sols[0].is_one());
}

TEST_CASE("polynomial solution pins") {
    const DiffOperator d1(OpForm::ddx, {fc(0), fc(1)});
    auto s1 = polynomial_solutions(d1, 3);
    REQUIRE(s1.size() == 1);
    CHECK(s1[0].is_one());

    const DiffOperator d2(OpForm::ddx, {fc(0), fc(0), fc(1)});
    auto s2 = polynomial_solutions(d2, 2);
    REQUIRE(s2.size() == 2);
    CHECK(s2[0].is_one());
    CHECK(s2[1] == P::x());

    // x^2 y'' - 2x y' + 2 y has basis {x, x^2}
    const DiffOperator l3(OpForm::ddx,
                          {fc(2) * (fx() * fx()).inverse(), fc(-2) * fx().inverse(), fc(1)});
    auto s3 = polynomial_solutions(l3, 2);
    REQUIRE(s3.size() == 2);
    CHECK(s3[0] == P::x());
    CHECK(s3[1] == P::x() * P::x());

    CHECK(polynomial_solutions(l3, 0).empty());
}

TEST_CASE("right division") {
    Field fa = add_parameter(rationals(), "alpha");
    const Scalar al = generator(fa, "alpha");
    const F alx = F(P(al), P::x());
    const DiffOperator bes = bessel(al);
    const DiffOperator m(OpForm::ddx, {fc(0) - alx, fc(1)});

    auto qr = right_divide(bes, m);
    CHECK(qr.quotient * m + qr.remainder == bes);
    CHECK(qr.remainder.order() <= 0);
    // remainder of dividing by D - u is the Riccati residual of u
    const F u = alx;
    const F ric = u.derivative() + u * u + fx().inverse() * u + fc(1) - alx * alx;
    CHECK(qr.remainder.coeff(0) == ric);

    std::mt19937 rng(161803);
    for (int k = 0; k < 30; ++k) {
        const DiffOperator a = random_op(rng, 3);
        const DiffOperator b = random_op(rng, 2);
        auto d = right_divide(a, b);
        REQUIRE(d.quotient * b + d.remainder == a);
        REQUIRE(d.remainder.order() < b.order());
    }
}

TEST_CASE("transport to a point and back") {
    Field fa = add_parameter(rationals(), "alpha");
    const DiffOperator bes = bessel(generator(fa, "alpha"));
    CHECK(moved_from_infinity(moved_from_infinity(bes)) == bes);
    CHECK(moved_to_origin(moved_to_origin(bes, Scalar(3)), Scalar(-3)) == bes);
}

TEST_CASE("companion system") {
    Field fa = add_parameter(rationals(), "alpha");
    const Scalar al = generator(fa, "alpha");
    const F alx = F(P(al), P::x());
    auto a = companion_system(bessel(al));
    REQUIRE(a.size() == 2);
    CHECK(a[0][0].is_zero());
    CHECK(a[0][1] == fc(1));
    CHECK(a[1][0] == alx * alx - fc(1));
    CHECK(a[1][1] == fc(0) - fx().inverse());
    CHECK_THROWS_AS(companion_system(DiffOperator::function(OpForm::ddx, fc(3))),
                    not_monic);
}

TEST_CASE("singular denominator") {
    Field fa = add_parameter(rationals(), "alpha");
    const DiffOperator bes = bessel(generator(fa, "alpha"));
    CHECK(singular_denominator(bes) == P::x() * P::x());
    const DiffOperator d2(OpForm::ddx, {fc(0), fc(0), fc(1)});
    CHECK(singular_denominator(d2).is_one());
}

TEST_CASE("proto degree bound values") {
    CHECK(proto_degree_bound(1) == 64);
    CHECK(proto_degree_bound(2) == mpz_class("68719476736"));
    CHECK_THROWS_AS(proto_degree_bound(0), error);
}

TEST_CASE("operator printing") {
    Field fa = add_parameter(rationals(), "alpha");
    const DiffOperator bes = bessel(generator(fa, "alpha"));
    CHECK(to_string(bes) == "D^2 + (1/x)*D + ((-alpha^2+x^2)/x^2)");
    CHECK(to_string(to_euler(bes)) == "(1/x^2)*TH^2 + ((-alpha^2+x^2)/x^2)");
}
