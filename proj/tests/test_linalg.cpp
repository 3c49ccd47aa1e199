#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "diffalg/linalg.hpp"
#include "diffalg/scalar.hpp"

using namespace diffalg;

TEST_CASE("rref, rank, det, inverse over the rationals") {
    Matrix<mpq_class> a = {{1, 2}, {3, 4}};
    CHECK(det(a) == -2);
    CHECK(rank(a) == 2);
    auto inv = try_mat_inverse(a);
    REQUIRE(inv);
    CHECK(mat_mul(*inv, a) == identity_matrix<mpq_class>(2));

    Matrix<mpq_class> sing = {{1, 2}, {2, 4}};
    CHECK(rank(sing) == 1);
    CHECK(!try_mat_inverse(sing));
    CHECK_THROWS_AS(mat_inverse(sing), division_by_zero);
}

TEST_CASE("nullspace is deterministic and correct") {
    Matrix<mpq_class> m = {{1, 0, mpq_class(-1, 2), mpq_class(-1, 2)},
                           {0, 1, mpq_class(-1, 2), mpq_class(1, 2)}};
    auto ns = nullspace(m);
    REQUIRE(ns.size() == 2);
    for (const auto& v : ns)
        for (const auto& row : m) {
            mpq_class dot = 0;
            for (std::size_t j = 0; j < v.size(); ++j) dot += row[j] * v[j];
            REQUIRE(dot == 0);
        }
}

TEST_CASE("solve_linear") {
    Matrix<mpq_class> a = {{2, 0}, {0, 3}};
    auto x = solve_linear(a, {4, 9});
    REQUIRE(x);
    CHECK((*x)[0] == 2);
    CHECK((*x)[1] == 3);
    Matrix<mpq_class> bad = {{1, 1}, {1, 1}};
    CHECK(!solve_linear(bad, {0, 1}));
}

TEST_CASE("hermite normal form and lattice membership") {
    std::vector<std::vector<mpz_class>> gens = {{2, 0}, {0, 2}, {1, 1}};
    auto h = hermite_normal_form(gens);
    CHECK(lattice_contains(h, {1, 1}));
    CHECK(lattice_contains(h, {2, 0}));
    CHECK(lattice_contains(h, {3, 1}));
    CHECK(!lattice_contains(h, {1, 0}));
}

TEST_CASE("integer kernel is saturated") {
    // x0 = (x2+x3)/2, x1 = (x2-x3)/2: the kernel lattice has index-2 vectors
    // that naive primitive scaling of a rational basis misses.
    Matrix<mpq_class> m = {{1, 0, mpq_class(-1, 2), mpq_class(-1, 2)},
                           {0, 1, mpq_class(-1, 2), mpq_class(1, 2)}};
    auto k = integer_kernel(m);
    CHECK(lattice_contains(k, {1, 0, 1, 1}));
    CHECK(lattice_contains(k, {0, 1, 1, -1}));

    Matrix<mpq_class> single = {{1, mpq_class(1, 2)}};
    auto k2 = integer_kernel(single);
    REQUIRE(k2.size() == 1);
    CHECK((k2[0] == std::vector<mpz_class>{1, -2}));
}

TEST_CASE("integer kernel saturation on random systems") {
    std::mt19937 rng(5150);
    std::uniform_int_distribution<int> num(-4, 4);
    std::uniform_int_distribution<int> den(1, 3);
    for (int trial = 0; trial < 60; ++trial) {
        Matrix<mpq_class> m(2, std::vector<mpq_class>(4));
        for (auto& row : m)
            for (auto& v : row) {
                v = mpq_class(num(rng), den(rng));
                v.canonicalize();
            }
        auto k = integer_kernel(m);
        // every generator maps to zero
        for (const auto& v : k) {
            for (const auto& row : m) {
                mpq_class dot = 0;
                for (std::size_t j = 0; j < 4; ++j) dot += row[j] * v[j];
                REQUIRE(dot == 0);
            }
        }
        // saturation: brute-force small integer vectors in the kernel must lie
        // in the lattice spanned by k
        for (int a = -3; a <= 3; ++a)
            for (int b = -3; b <= 3; ++b)
                for (int c = -3; c <= 3; ++c)
                    for (int d = -3; d <= 3; ++d) {
                        std::vector<mpz_class> v = {a, b, c, d};
                        bool in_kernel = true;
                        for (const auto& row : m) {
                            mpq_class dot = 0;
                            for (std::size_t j = 0; j < 4; ++j) dot += row[j] * v[j];
                            if (dot != 0) in_kernel = false;
                        }
                        if (in_kernel) REQUIRE(lattice_contains(k, v));
                    }
    }
}

TEST_CASE("primitive integer vector") {
    auto v = primitive_integer_vector({mpq_class(2, 3), mpq_class(-4, 3)});
    REQUIRE(v.size() == 2);
    CHECK(v[0] == 1);
    CHECK(v[1] == -2);
}

TEST_CASE("generic field elimination works over the tower") {
    Field fa = add_parameter(rationals(), "t");
    const Scalar t = generator(fa, "t");
    Matrix<Scalar> a = {{t, Scalar(1)}, {Scalar(1), t}};
    CHECK(det(a) == t * t - Scalar(1));
    auto inv = try_mat_inverse(a);
    REQUIRE(inv);
    CHECK(mat_mul(*inv, a) == identity_matrix<Scalar>(2));
}
