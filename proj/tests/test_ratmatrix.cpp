#include <catch2/catch_amalgamated.hpp>

#include "diffalg/ratmatrix.hpp"

using namespace diffalg;
using P = UPoly<Scalar>;
using F = RatF<Scalar>;

namespace {

F fx() { return F::x(); }
F fc(long n) { return F(Scalar(n)); }
const auto der = [](const F& f) { return f.derivative(); };

DiffOperator bessel_sym() {
    Field fa = add_parameter(rationals(), "alpha");
    const F alx = F(P(generator(fa, "alpha")), P::x());
    return DiffOperator(OpForm::ddx, {fc(1) - alx * alx, fx().inverse(), fc(1)});
}

}  // namespace

TEST_CASE("gauge transform is a cocycle") {
    Matrix<F> a = {{fx(), fc(1)}, {fx().inverse(), fc(0)}};
    Matrix<F> g = {{fc(1), fx()}, {fc(0), fc(1)}};
    Matrix<F> h = {{fx(), fc(0)}, {fc(1), fc(1)}};
    CHECK(gauge_transform(gauge_transform(a, g, der), h, der) ==
          gauge_transform(a, mat_mul(g, h), der));
    CHECK(gauge_transform(a, identity_matrix<F>(2), der) == a);
}

TEST_CASE("wronskians") {
    CHECK((wronskian<F>({fc(1), fx()}, der) == fc(1)));
    CHECK((wronskian<F>({fx(), fx() * fx()}, der) == fx() * fx()));
    CHECK((wronskian<F>({fx(), fc(5) * fx()}, der).is_zero()));
}

TEST_CASE("exterior power systems") {
    auto a = companion_system(bessel_sym());
    CHECK(exterior_power_system(a, 1) == a);
    auto l2 = exterior_power_system(a, 2);
    REQUIRE(l2.size() == 1);
    CHECK(l2[0][0] == fc(0) - fx().inverse());  // the trace
    CHECK_THROWS_AS(exterior_power_system(a, 3), error);
}

TEST_CASE("cyclic scalarization") {
    SECTION("companion input returns itself") {
        const DiffOperator bes = bessel_sym();
        auto cs = cyclic_scalarize(companion_system(bes));
        CHECK(cs.op.monic() == bes.monic());
        CHECK(cs.t == identity_matrix<F>(2));
    }
    SECTION("diagonal system needs the shifted candidate") {
        Matrix<F> dg = {{fc(0), fc(0)}, {fc(0), fx().inverse()}};
        auto cs = cyclic_scalarize(dg);
        CHECK(cs.op == DiffOperator(OpForm::ddx, {fc(0), fc(0) - fx().inverse(), fc(1)}));
        // the defining property: T gauges the system onto the companion form
        CHECK(gauge_transform(dg, cs.t, der) == companion_system(cs.op));
    }
    SECTION("one-by-one system") {
        Field fa = add_parameter(rationals(), "alpha");
        const F a(P(generator(fa, "alpha")));
        auto cs = cyclic_scalarize(Matrix<F>{{a}});
        CHECK(cs.op == DiffOperator(OpForm::ddx, {fc(0) - a, fc(1)}));
        CHECK(cs.t == identity_matrix<F>(1));
    }
}

TEST_CASE("matrix entry polynomials") {
    auto detp = MatEntryPoly<F>::determinant(2);
    Matrix<F> a = {{fx(), fc(1)}, {fc(0), fx() * fx()}};
    Matrix<F> id = identity_matrix<F>(2);

    SECTION("determinant derivative at identity is the trace") {
        auto fl = character_logderivs(a, id, {detp}, der);
        REQUIRE(fl.size() == 1);
        CHECK(fl[0] == fx() + fx() * fx());
    }
    SECTION("coordinate characters pick diagonal entries") {
        auto x11 = MatEntryPoly<F>::entry(2, 0, 0);
        auto x22 = MatEntryPoly<F>::entry(2, 1, 1);
        auto fl = character_logderivs(a, id, {x11, x22}, der);
        CHECK(fl[0] == fx());
        CHECK(fl[1] == fx() * fx());
    }
    SECTION("constant characters vanish") {
        auto fl = character_logderivs(a, id, {MatEntryPoly<F>::constant(2, fc(1))}, der);
        CHECK(fl[0].is_zero());
    }
    SECTION("evaluation and arithmetic") {
        auto p = detp * detp + MatEntryPoly<F>::entry(2, 0, 1);
        CHECK(p.eval(a) == fx() * fx() * fx() * fx() * fx() * fx() + fc(1));
    }
}
