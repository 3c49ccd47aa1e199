#include <catch2/catch_amalgamated.hpp>

#include <random>

#include <diffalg/places.hpp>

using namespace diffalg;
using P = UPoly<Scalar>;

namespace {
RatF<Scalar> rf(const P& n, const P& d) { return RatF<Scalar>(n) / RatF<Scalar>(d); }
P lin(int c) { return P({Scalar(c), Scalar(1)}); }  // x + c
}  // namespace

TEST_CASE("residues of a rational-part form concentrate on the ramification block") {
    // z^2 = x^4 + x + alpha with a free parameter alpha; the form
    // ((x - beta)^2 / f) dx has all its poles over the roots of f
    const Field qa = add_parameter(rationals(), "alpha");
    const Scalar al = generator(qa, "alpha");
    const P f({al, Scalar(1), Scalar(0), Scalar(0), Scalar(1)});
    const QuadField k(f);
    const Scalar beta(2);
    const P xb({-beta, Scalar(1)});

    const QuadElt gf = k.from(rf(xb * xb, f));
    const auto rd = residue_divisor(k, gf);
    REQUIRE(rd.size() == 1);
    CHECK(rd[0].place.kind == Place::Kind::block_ramified);
    CHECK(rd[0].place.g == f);
    CHECK(rd[0].place.degree() == 4);

    using M = ModPoly<Scalar>;
    const auto ctx = M::make_ctx(f);
    const M y = M::generator(ctx);
    const M rhs =
        (M(2) * (y - M(beta)) * (y - M(beta))) * (M(4) * y * y * y + M(1)).inverse();
    REQUIRE(rd[0].residue.rep == ResidueValue::Rep::algebraic);
    CHECK(rd[0].residue.m == rhs);

    SECTION("product over the block is a resultant ratio") {
        // prod_i 2 (y_i - beta)^2 / f'(y_i) = 16 f(beta)^2 / (256 alpha^3 - 27)
        const Scalar prod = norm_over_block(rd[0].residue.m);
        const Scalar expect = Scalar(16) * f.eval(beta) * f.eval(beta) /
                              (Scalar(256) * al * al * al - Scalar(27));
        CHECK(prod == expect);
    }
    SECTION("residue theorem: the block carries every pole") {
        CHECK(rd[0].residue.trace() == Scalar(0));
    }
    SECTION("slots expose the value over a rational basis") {
        const auto slots = rd[0].residue.slots();
        REQUIRE(slots.size() == 4);
        for (const auto& [key, val] : slots) {
            CHECK(key.second == 0);
            CHECK(val == rhs.value().coeff(static_cast<std::size_t>(key.first)));
        }
    }
}

TEST_CASE("the third-kind form (x - beta)/z dx has residues -1, +1 at infinity") {
    const Field qa = add_parameter(rationals(), "alpha");
    const Scalar al = generator(qa, "alpha");
    const P f({al, Scalar(1), Scalar(0), Scalar(0), Scalar(1)});
    const QuadField k(f);
    const P xb({Scalar(-2), Scalar(1)});

    // (x - beta)/z = (x - beta) z / f
    const QuadElt eta = k.make(RatF<Scalar>(P{}), rf(xb, f));
    const auto rd = residue_divisor(k, eta);
    REQUIRE(rd.size() == 2);
    CHECK(rd[0].place == Place::at_infinity(+1));
    REQUIRE(rd[0].residue.rep == ResidueValue::Rep::scalar);
    CHECK(rd[0].residue.s == Scalar(-1));
    CHECK(rd[1].place == Place::at_infinity(-1));
    CHECK(rd[1].residue.s == Scalar(1));
}

TEST_CASE("split, quadratic, and ramified residues") {
    SECTION("simple poles at a split pair: z/x on z^2 = x^4 + 1") {
        const QuadField k(P({Scalar(1), Scalar(0), Scalar(0), Scalar(0), Scalar(1)}));
        const QuadElt h = k.make(RatF<Scalar>(P{}), rf(P({Scalar(1)}), P::x()));
        const auto r = residue_divisor(k, h);
        REQUIRE(r.size() == 2);
        CHECK(r[0].place == Place::split_at(Scalar(0), Scalar(1)));
        CHECK(r[0].residue.s == Scalar(1));
        CHECK(r[1].place == Place::split_at(Scalar(0), Scalar(-1)));
        CHECK(r[1].residue.s == Scalar(-1));
    }
    SECTION("a closed quadratic point: z/(x-1) on z^2 = x^4 + 1") {
        const QuadField k(P({Scalar(1), Scalar(0), Scalar(0), Scalar(0), Scalar(1)}));
        const QuadElt h = k.make(RatF<Scalar>(P{}), rf(P({Scalar(1)}), lin(-1)));
        const auto r = residue_divisor(k, h);
        REQUIRE(r.size() == 3);
        // f(1) = 2 is not a square, so x = 1 carries one closed point of
        // degree two whose residue is the branch generator itself
        CHECK(r[0].place == Place::quad_at(Scalar(1)));
        REQUIRE(r[0].residue.rep == ResidueValue::Rep::algebraic);
        CHECK(r[0].residue.trace() == Scalar(0));
        const auto slots = r[0].residue.slots();
        REQUIRE(slots.size() == 1);
        CHECK(slots[0].first == std::make_pair(1, 0));
        CHECK(slots[0].second == Scalar(1));
        CHECK(r[1].residue.s + r[2].residue.s == Scalar(0));
    }
    SECTION("double pole at a ramified point: 1/(x-1) on z^2 = x^4 - 1") {
        const QuadField k(P({Scalar(-1), Scalar(0), Scalar(0), Scalar(0), Scalar(1)}));
        const QuadElt h = k.from(rf(P({Scalar(1)}), lin(-1)));
        const auto r = residue_divisor(k, h);
        Scalar total(0);
        bool saw = false;
        for (const auto& e : r) {
            total += e.residue.trace();
            if (e.place.kind == Place::Kind::ramified && e.place.x0 == Scalar(1)) {
                saw = true;
                // the x-line residue of dx/(x-1) is 1; ramification doubles it
                CHECK(e.residue.s == Scalar(2));
            }
        }
        CHECK(saw);
        CHECK(total == Scalar(0));
    }
}

TEST_CASE("residue theorem across random third-kind forms") {
    // Denominator pool mixes split points, ramified points, quadratic
    // points, and blocks of both kinds; the traced residues must always
    // sum to zero.
    const std::vector<P> fields = {
        P({Scalar(1), Scalar(0), Scalar(0), Scalar(0), Scalar(1)}),    // x^4 + 1
        P({Scalar(-1), Scalar(0), Scalar(0), Scalar(0), Scalar(1)}),   // x^4 - 1
        P({Scalar(1), Scalar(1), Scalar(0), Scalar(0), Scalar(1)}),    // x^4 + x + 1
    };
    const std::vector<P> dens = {
        P::x(), lin(-1), lin(1), lin(-2),
        P({Scalar(2), Scalar(0), Scalar(1)}),             // x^2 + 2: a block
        P({Scalar(1), Scalar(1), Scalar(1)}),             // x^2 + x + 1: a block
        P::x() * lin(-1),
    };
    std::mt19937 rng(20240811);
    auto small = [&]() { return Scalar(static_cast<int>(rng() % 7) - 3); };

    for (const auto& f : fields) {
        const QuadField k(f);
        for (int trial = 0; trial < 8; ++trial) {
            const P& da = dens[rng() % dens.size()];
            const P& db = dens[rng() % dens.size()];
            const RatF<Scalar> a = rf(P({small(), small()}), da);
            const RatF<Scalar> b = rf(P({small(), small(), small()}), db * f);
            const QuadElt gf = k.make(a, b);
            if (gf.is_zero()) continue;
            Scalar total(0);
            for (const auto& e : residue_divisor(k, gf)) total += e.residue.trace();
            INFO("f = " << to_string(f) << ", a = " << to_string(a)
                        << ", b = " << to_string(b));
            CHECK(total == Scalar(0));
        }
    }
}

TEST_CASE("function divisors have degree zero") {
    SECTION("div(z) on z^2 = x^4 + 1") {
        const QuadField k(P({Scalar(1), Scalar(0), Scalar(0), Scalar(0), Scalar(1)}));
        const auto d = function_divisor(k, k.z());
        REQUIRE(d.size() == 3);
        CHECK(d[0].place.kind == Place::Kind::block_ramified);
        CHECK(d[0].val == 1);
        CHECK(d[0].place.degree() == 4);
        CHECK(d[1].place == Place::at_infinity(+1));
        CHECK(d[1].val == -2);
        CHECK(d[2].place == Place::at_infinity(-1));
        CHECK(d[2].val == -2);
        CHECK(divisor_degree(d) == 0);
    }
    SECTION("div(x - 1) on z^2 = x^4 - 1: a ramified zero counts twice") {
        const QuadField k(P({Scalar(-1), Scalar(0), Scalar(0), Scalar(0), Scalar(1)}));
        const auto d = function_divisor(k, k.from(RatF<Scalar>(lin(-1))));
        CHECK(divisor_degree(d) == 0);
        int v_ram = 0, v_inf = 0;
        for (const auto& e : d) {
            if (e.place.kind == Place::Kind::ramified) {
                CHECK(e.place.x0 == Scalar(1));
                v_ram = e.val;
            }
            if (e.place.kind == Place::Kind::infinite) v_inf += e.val;
        }
        CHECK(v_ram == 2);
        CHECK(v_inf == -2);
    }
    SECTION("div(z - 1) on z^2 = x^4 + 1: a single high-order branch zero") {
        const QuadField k(P({Scalar(1), Scalar(0), Scalar(0), Scalar(0), Scalar(1)}));
        const QuadElt h = k.z() - QuadElt(1);
        CHECK(valuation_at_place(k, h, Place::split_at(Scalar(0), Scalar(1))) == 4);
        CHECK(valuation_at_place(k, h, Place::split_at(Scalar(0), Scalar(-1))) == 0);
        const auto d = function_divisor(k, h);
        CHECK(divisor_degree(d) == 0);
        REQUIRE(d.size() == 3);
        CHECK(d[0].place == Place::split_at(Scalar(0), Scalar(1)));
        CHECK(d[0].val == 4);
    }
    SECTION("valuations at infinity separate the two branches") {
        const QuadField k(P({Scalar(-1), Scalar(0), Scalar(0), Scalar(0), Scalar(1)}));
        // z - x^2 = (w - 1)/t^2 with w = 1 - t^4/2 - ... on the + branch
        const QuadElt g = k.z() - k.from(RatF<Scalar>(P::x() * P::x()));
        CHECK(valuation_at_place(k, g, Place::at_infinity(+1)) == 2);
        CHECK(valuation_at_place(k, g, Place::at_infinity(-1)) == -2);
    }
    SECTION("random products: divisors add") {
        const QuadField k(P({Scalar(-1), Scalar(0), Scalar(0), Scalar(0), Scalar(1)}));
        std::mt19937 rng(7);
        auto small = [&]() { return Scalar(static_cast<int>(rng() % 5) - 2); };
        for (int trial = 0; trial < 6; ++trial) {
            const QuadElt h1 = k.make(RatF<Scalar>(P({small(), small()})),
                                      rf(P({small()}), lin(-1)));
            const QuadElt h2 = k.make(rf(P({small(), Scalar(1)}), P::x()),
                                      RatF<Scalar>(P({small()})));
            if (h1.is_zero() || h2.is_zero()) continue;
            const auto d1 = function_divisor(k, h1);
            const auto d2 = function_divisor(k, h2);
            const auto d12 = function_divisor(k, h1 * h2);
            CHECK(divisor_degree(d1) == 0);
            CHECK(divisor_degree(d2) == 0);
            CHECK(divisor_degree(d12) == 0);
            // valuation additivity at every place where all three numbers
            // exist.  A block entry produced by one function may be a union
            // of closed points that another function tells apart (different
            // valuations on the pieces, or only one branch of the fiber);
            // valuation_at_place refuses those with an error, which is the
            // honest outcome -- additivity is only asserted where it is
            // meaningful.
            std::vector<Place> support;
            for (const auto& e : d1) support.push_back(e.place);
            for (const auto& e : d2) support.push_back(e.place);
            for (const auto& e : d12) support.push_back(e.place);
            for (const auto& p : support) {
                int v1 = 0, v2 = 0, v12 = 0;
                try {
                    v12 = valuation_at_place(k, h1 * h2, p);
                    v1 = valuation_at_place(k, h1, p);
                    v2 = valuation_at_place(k, h2, p);
                } catch (const diffalg::error&) {
                    continue;
                }
                INFO("at " << to_string(p));
                CHECK(v12 == v1 + v2);
            }
        }
    }
}

TEST_CASE("zeros on a single branch split the block with an explicit witness") {
    // h = -x - 2z/(x-1) on z^2 = x^4 - 1 vanishes over an irreducible cubic
    // on exactly one branch of z (its norm has odd multiplicity there); the
    // divisor must recover the branch as a closed point z = w0(x)
    const QuadField k(P({Scalar(-1), Scalar(0), Scalar(0), Scalar(0), Scalar(1)}));
    const QuadElt h = k.make(RatF<Scalar>(P({Scalar(0), Scalar(-1)})),
                             rf(P({Scalar(-2)}), lin(-1)));
    const auto d = function_divisor(k, h);
    CHECK(divisor_degree(d) == 0);
    bool saw_split = false;
    for (const auto& e : d)
        if (e.place.kind == Place::Kind::block_split) {
            saw_split = true;
            CHECK(e.place.degree() == 3);
            CHECK(e.val == 1);
            // the witness squares to f modulo the block
            using M = ModPoly<Scalar>;
            const auto ctx = M::make_ctx(e.place.g);
            const M w0(ctx, e.place.w0);
            M fbar;
            const M y = M::generator(ctx);
            for (int i = k.f().deg(); i >= 0; --i)
                fbar = fbar * y + M(k.f().coeff(static_cast<std::size_t>(i)));
            CHECK(w0 * w0 == fbar);
            // asking the bundled block for one number is refused
            CHECK_THROWS_WITH(valuation_at_place(k, h, Place::block_at(e.place.g, false)),
                              Catch::Matchers::ContainsSubstring("splits"));
        }
    CHECK(saw_split);
}

TEST_CASE("residues over nonramified blocks live in a quadratic extension") {
    // z^2 = x^4 + 1 over the block x^2 + 2: f mod g = (x^2)^2 + 1 = 4 + 1
    // = 5 is not obviously a square, so the fiber is carried as one closed
    // point of degree 4 with values a + b w, w^2 = f mod g.
    const QuadField k(P({Scalar(1), Scalar(0), Scalar(0), Scalar(0), Scalar(1)}));
    const P g({Scalar(2), Scalar(0), Scalar(1)});
    const QuadElt h = k.make(RatF<Scalar>(P{}), rf(P({Scalar(1)}), g * k.f()));
    // b = 1/(g f), so (b z) dx = z/(g f) dx = dx/(g z): poles over g and at
    // the ramification block
    const auto rd = residue_divisor(k, h);
    Scalar total(0);
    bool saw_block = false;
    for (const auto& e : rd) {
        total += e.residue.trace();
        if (e.place.kind == Place::Kind::block) {
            saw_block = true;
            CHECK(e.place.g == g);
            CHECK(e.place.degree() == 4);
            CHECK(e.residue.rep == ResidueValue::Rep::quadratic);
            // dx/(g z) picks up 1/z != rational: the residue must involve w
            bool has_w = false;
            for (const auto& [key, val] : e.residue.slots()) {
                (void)val;
                if (key.second == 1) has_w = true;
            }
            CHECK(has_w);
        }
    }
    CHECK(saw_block);
    CHECK(total == Scalar(0));
}
