#include <catch2/catch_amalgamated.hpp>

#include <diffalg/quadfield.hpp>
#include <diffalg/ratmatrix.hpp>

using namespace diffalg;

namespace {
using P = UPoly<Scalar>;
using F = RatF<Scalar>;

F fx() { return F::x(); }
F fc(long n) { return F(Scalar(n)); }
}  // namespace

TEST_CASE("construction rejects degenerate branch polynomials") {
    CHECK_THROWS_AS(QuadField(P(Scalar(3))), error);                      // constant
    CHECK_THROWS_AS(QuadField(P({Scalar(0), Scalar(0), Scalar(1)})),      // x^2
                    not_squarefree_error);
    CHECK_THROWS_AS(QuadField(P({Scalar(0), Scalar(3)})), error);         // lc 3 not a square
    QuadField ok(P({Scalar(1), Scalar(4)}));  // 4x + 1: lc 4 = 2^2
    CHECK(ok.lc_root() == Scalar(2));
}

TEST_CASE("arithmetic satisfies the defining relation and field axioms") {
    QuadField K(P::x(), "z");  // z^2 = x
    const QuadElt z = K.z();
    const QuadElt x = K.from(fx());

    CHECK(z * z == x);
    CHECK((x + z) * (x - z) == x * x - x);

    const QuadElt u = K.make(fx() + fc(1), fx());  // (x+1) + x z
    CHECK(u * u.inverse() == QuadElt(1));
    CHECK(u / u == QuadElt(1));
    CHECK(u - u == QuadElt(0));
}

TEST_CASE("rational constants join into the field of the other operand") {
    QuadField K(P::x());
    const QuadElt z = K.z();
    CHECK(QuadElt(3) + z == K.make(fc(3), fc(1)));
    CHECK(z * QuadElt(2) == K.make(F{}, fc(2)));
    CHECK(QuadElt(0) == K.from(F{}));  // null-ctx zero equals in-field zero

    QuadField K2(P({Scalar(1), Scalar(0), Scalar(1)}));
    CHECK_THROWS_AS(K.z() + K2.z(), descriptor_mismatch);
}

TEST_CASE("conjugate and norm") {
    QuadField K(P({Scalar(1), Scalar(1), Scalar(0), Scalar(0), Scalar(1)}));  // z^2 = x^4+x+1
    const QuadElt u = K.make(fx(), fc(2));
    CHECK(u * u.conj() == K.from(u.norm()));
    CHECK(u.norm() == fx() * fx() - fc(4) * F(P({Scalar(1), Scalar(1), Scalar(0), Scalar(0), Scalar(1)})));
}

TEST_CASE("derivation extends d/dx with dz = f'/(2f) z and obeys Leibniz") {
    QuadField K(P::x());  // z^2 = x
    const QuadElt z = K.z();
    const QuadElt x = K.from(fx());

    CHECK(z.derivative() == K.make(F{}, fc(1) / (fc(2) * fx())));
    CHECK((z * z).derivative() == QuadElt(1));  // d(x) = 1

    const QuadElt u = K.make(fx() + fc(1), fx() * fx());
    const QuadElt v = K.make(fc(1) / fx(), fc(3));
    CHECK((u * v).derivative() == u.derivative() * v + u * v.derivative());
    CHECK((u + v).derivative() == u.derivative() + v.derivative());
    CHECK((u / v).derivative() == (u.derivative() * v - u * v.derivative()) / (v * v));
}

TEST_CASE("gauge transform diagonalizes the symmetric-square-style system") {
    // A = [[0,1],[a + b' - b^2 - a'b/(2a), 2b + a'/(2a)]], g = [[1,1],[b+z, b-z]],
    // z^2 = a: the gauged system is diag(b+z, b-z) and the entry characters
    // log-differentiate to exactly those two functions.
    auto run = [](const F& a, const F& b, const QuadField& K) {
        const F A21 = a + b.derivative() - b * b - a.derivative() * b / (fc(2) * a);
        const F A22 = fc(2) * b + a.derivative() / (fc(2) * a);
        Matrix<QuadElt> A = {{QuadElt(0), QuadElt(1)}, {K.from(A21), K.from(A22)}};
        const QuadElt chi1 = K.make(b, fc(1));
        const QuadElt chi2 = K.make(b, fc(-1));
        Matrix<QuadElt> g = {{QuadElt(1), QuadElt(1)}, {chi1, chi2}};

        const Matrix<QuadElt> M = gauge_transform(A, g, QuadDeriv{});
        CHECK(M[0][0] == chi1);
        CHECK(M[1][1] == chi2);
        CHECK(M[0][1].is_zero());
        CHECK(M[1][0].is_zero());

        const std::vector<MatEntryPoly<QuadElt>> lifts = {
            MatEntryPoly<QuadElt>::entry(2, 0, 0), MatEntryPoly<QuadElt>::entry(2, 1, 1)};
        const auto chars = character_logderivs(A, g, lifts, QuadDeriv{});
        REQUIRE(chars.size() == 2);
        CHECK(chars[0] == chi1);
        CHECK(chars[1] == chi2);

        const std::vector<MatEntryPoly<QuadElt>> dl = {MatEntryPoly<QuadElt>::determinant(2)};
        const auto dchar = character_logderivs(A, g, dl, QuadDeriv{});
        CHECK(dchar[0] == K.from(fc(2) * b));  // trace: chi1 + chi2
    };

    SECTION("a = x, b = x") { run(fx(), fx(), QuadField(P::x(), "eta")); }
    SECTION("a = x^2 + 1, b = 0") {
        const P a2({Scalar(1), Scalar(0), Scalar(1)});
        run(F(a2), F{}, QuadField(a2, "eta"));
    }
}

TEST_CASE("printing") {
    QuadField K(P::x(), "eta");
    CHECK(to_string(K.make(fx(), fc(1))) == "x + eta");
    CHECK(to_string(K.make(fx(), fc(-1))) == "x - eta");
    CHECK(to_string(K.make(F{}, fx())) == "x*eta");
    CHECK(to_string(K.from(fx())) == "x");
}
