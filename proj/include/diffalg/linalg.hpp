#pragma once

// Small dense exact linear algebra over an arbitrary field type, plus the
// integer-lattice routines (Hermite normal form, saturated integer kernels,
// lattice membership) used for relation lattices.

#include <gmpxx.h>

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "polyvec.hpp"

namespace diffalg {

template <class K>
using Matrix = std::vector<std::vector<K>>;

template <class K>
Matrix<K> identity_matrix(std::size_t n) {
    Matrix<K> m(n, std::vector<K>(n, K{}));
    for (std::size_t i = 0; i < n; ++i) m[i][i] = K(1);
    return m;
}

template <class K>
Matrix<K> mat_mul(const Matrix<K>& a, const Matrix<K>& b) {
    if (a.empty() || b.empty()) return {};
    const std::size_t n = a.size(), m = b[0].size(), k = b.size();
    Matrix<K> r(n, std::vector<K>(m, K{}));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t l = 0; l < k; ++l) {
            if (detail::kz(a[i][l])) continue;
            for (std::size_t j = 0; j < m; ++j) r[i][j] = r[i][j] + a[i][l] * b[l][j];
        }
    return r;
}

template <class K>
std::vector<K> mat_vec(const Matrix<K>& a, const std::vector<K>& v) {
    std::vector<K> r(a.size(), K{});
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j) r[i] = r[i] + a[i][j] * v[j];
    return r;
}

// In-place reduced row echelon form; returns the pivot columns.
template <class K>
std::vector<std::size_t> rref(Matrix<K>& m) {
    std::vector<std::size_t> pivots;
    if (m.empty()) return pivots;
    const std::size_t rows = m.size(), cols = m[0].size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && detail::kz(m[p][c])) ++p;
        if (p == rows) continue;
        std::swap(m[p], m[r]);
        const K inv = K(1) / m[r][c];
        for (std::size_t j = c; j < cols; ++j) m[r][j] = m[r][j] * inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == r || detail::kz(m[i][c])) continue;
            const K f = m[i][c];
            for (std::size_t j = c; j < cols; ++j) m[i][j] = m[i][j] - f * m[r][j];
        }
        pivots.push_back(c);
        ++r;
    }
    return pivots;
}

// Basis of { x : M x = 0 } in the standard echelon parametrization: one
// vector per free column, entry 1 there, deterministic order.
template <class K>
std::vector<std::vector<K>> nullspace(Matrix<K> m) {
    std::vector<std::vector<K>> basis;
    if (m.empty() || m[0].empty()) return basis;
    const std::size_t cols = m[0].size();
    const auto pivots = rref(m);
    std::vector<bool> is_pivot(cols, false);
    for (auto c : pivots) is_pivot[c] = true;
    for (std::size_t f = 0; f < cols; ++f) {
        if (is_pivot[f]) continue;
        std::vector<K> v(cols, K{});
        v[f] = K(1);
        for (std::size_t k = 0; k < pivots.size(); ++k) v[pivots[k]] = K{} - m[k][f];
        basis.push_back(std::move(v));
    }
    return basis;
}

template <class K>
std::size_t rank(Matrix<K> m) {
    return rref(m).size();
}

template <class K>
K det(Matrix<K> m) {
    const std::size_t n = m.size();
    K d = K(1);
    for (std::size_t c = 0; c < n; ++c) {
        std::size_t p = c;
        while (p < n && detail::kz(m[p][c])) ++p;
        if (p == n) return K{};
        if (p != c) {
            std::swap(m[p], m[c]);
            d = K{} - d;
        }
        d = d * m[c][c];
        const K inv = K(1) / m[c][c];
        for (std::size_t i = c + 1; i < n; ++i) {
            if (detail::kz(m[i][c])) continue;
            const K f = m[i][c] * inv;
            for (std::size_t j = c; j < n; ++j) m[i][j] = m[i][j] - f * m[c][j];
        }
    }
    return d;
}

template <class K>
std::optional<Matrix<K>> try_mat_inverse(const Matrix<K>& a) {
    const std::size_t n = a.size();
    Matrix<K> m(n, std::vector<K>(2 * n, K{}));
    for (std::size_t i = 0; i < n; ++i) {
        if (a[i].size() != n) throw error("matrix is not square");
        for (std::size_t j = 0; j < n; ++j) m[i][j] = a[i][j];
        m[i][n + i] = K(1);
    }
    const auto pivots = rref(m);
    if (pivots.size() != n || (n > 0 && pivots.back() != n - 1)) return std::nullopt;
    Matrix<K> inv(n, std::vector<K>(n, K{}));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) inv[i][j] = m[i][n + j];
    return inv;
}

template <class K>
Matrix<K> mat_inverse(const Matrix<K>& a) {
    auto inv = try_mat_inverse(a);
    if (!inv) throw division_by_zero("matrix is singular");
    return *inv;
}

// Solve M x = b; nullopt when inconsistent.  Free variables are set to 0.
template <class K>
std::optional<std::vector<K>> solve_linear(Matrix<K> m, const std::vector<K>& b) {
    if (m.empty()) return std::vector<K>{};
    const std::size_t cols = m[0].size();
    for (std::size_t i = 0; i < m.size(); ++i) m[i].push_back(b[i]);
    const auto pivots = rref(m);
    if (!pivots.empty() && pivots.back() == cols) return std::nullopt;
    std::vector<K> x(cols, K{});
    for (std::size_t k = 0; k < pivots.size(); ++k) x[pivots[k]] = m[k][cols];
    return x;
}

// ------------------------------------------------------- integer lattices

inline mpz_class fdiv_q(const mpz_class& a, const mpz_class& b) {
    mpz_class q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

// Scale a rational vector to a primitive integer vector (entry gcd 1,
// first nonzero entry positive).
inline std::vector<mpz_class> primitive_integer_vector(const std::vector<mpq_class>& v) {
    mpz_class l = 1;
    for (const auto& q : v) l = lcm(l, q.get_den());
    std::vector<mpz_class> w(v.size());
    mpz_class g = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        w[i] = mpz_class(mpq_class(v[i] * l));
        g = gcd(g, w[i]);
    }
    if (g != 0)
        for (auto& z : w) z /= g;
    for (const auto& z : w) {
        if (z == 0) continue;
        if (z < 0)
            for (auto& y : w) y = -y;
        break;
    }
    return w;
}

// Row-style Hermite normal form: echelon with positive pivots, entries
// above each pivot reduced into [0, pivot).  Returns the nonzero rows.
inline std::vector<std::vector<mpz_class>> hermite_normal_form(std::vector<std::vector<mpz_class>> m) {
    if (m.empty()) return m;
    const std::size_t cols = m[0].size();
    std::size_t r = 0;
    for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
        while (true) {
            std::size_t p = m.size();
            for (std::size_t i = r; i < m.size(); ++i)
                if (m[i][c] != 0 && (p == m.size() || abs(m[i][c]) < abs(m[p][c]))) p = i;
            if (p == m.size()) break;
            std::swap(m[p], m[r]);
            bool done = true;
            for (std::size_t i = r + 1; i < m.size(); ++i) {
                if (m[i][c] == 0) continue;
                const mpz_class q = m[i][c] / m[r][c];
                for (std::size_t j = 0; j < cols; ++j) m[i][j] -= q * m[r][j];
                if (m[i][c] != 0) done = false;
            }
            if (done) break;
        }
        if (m[r][c] != 0) {
            if (m[r][c] < 0)
                for (std::size_t j = 0; j < cols; ++j) m[r][j] = -m[r][j];
            for (std::size_t i = 0; i < r; ++i) {
                const mpz_class q = fdiv_q(m[i][c], m[r][c]);
                if (q != 0)
                    for (std::size_t j = 0; j < cols; ++j) m[i][j] -= q * m[r][j];
            }
            ++r;
        }
    }
    m.resize(r);
    return m;
}

// Membership of v in the row lattice spanned by HNF rows.
inline bool lattice_contains(const std::vector<std::vector<mpz_class>>& hnf, std::vector<mpz_class> v) {
    std::size_t row = 0;
    for (std::size_t c = 0; c < v.size(); ++c) {
        const bool pivot_here = row < hnf.size() && hnf[row][c] != 0;
        if (pivot_here) {
            const mpz_class q = fdiv_q(v[c], hnf[row][c]);
            for (std::size_t j = c; j < v.size(); ++j) v[j] -= q * hnf[row][j];
            if (v[c] != 0) return false;
            ++row;
        } else if (v[c] != 0) {
            return false;
        }
    }
    return true;
}

// The full integer kernel { x in Z^n : M x = 0 } of a rational matrix, as
// HNF basis rows.  Rows of M are cleared to integers (kernel unchanged),
// then columns are reduced by unimodular operations while tracking the
// transformation; columns that reach zero carry a Z-basis of the kernel.
// This yields the saturated lattice, not merely a finite-index sublattice.
inline std::vector<std::vector<mpz_class>> integer_kernel(const Matrix<mpq_class>& m) {
    if (m.empty() || m[0].empty()) return {};
    const std::size_t rows = m.size(), n = m[0].size();
    Matrix<mpz_class> g(rows, std::vector<mpz_class>(n));
    for (std::size_t i = 0; i < rows; ++i) {
        mpz_class l = 1;
        for (const auto& q : m[i]) l = lcm(l, q.get_den());
        for (std::size_t j = 0; j < n; ++j) g[i][j] = mpz_class(mpq_class(m[i][j] * l));
    }
    struct Col {
        std::vector<mpz_class> a;  // current column of g
        std::vector<mpz_class> u;  // column of the accumulated unimodular U
    };
    std::vector<Col> cols(n);
    for (std::size_t j = 0; j < n; ++j) {
        cols[j].a.resize(rows);
        for (std::size_t i = 0; i < rows; ++i) cols[j].a[i] = g[i][j];
        cols[j].u.assign(n, 0);
        cols[j].u[j] = 1;
    }
    std::size_t lead = 0;
    for (std::size_t r = 0; r < rows && lead < n; ++r) {
        while (true) {
            std::size_t p = n;
            for (std::size_t j = lead; j < n; ++j)
                if (cols[j].a[r] != 0 && (p == n || abs(cols[j].a[r]) < abs(cols[p].a[r]))) p = j;
            if (p == n) break;
            std::swap(cols[p], cols[lead]);
            bool done = true;
            for (std::size_t j = lead + 1; j < n; ++j) {
                if (cols[j].a[r] == 0) continue;
                const mpz_class q = cols[j].a[r] / cols[lead].a[r];
                for (std::size_t i = 0; i < rows; ++i) cols[j].a[i] -= q * cols[lead].a[i];
                for (std::size_t i = 0; i < n; ++i) cols[j].u[i] -= q * cols[lead].u[i];
                if (cols[j].a[r] != 0) done = false;
            }
            if (done) break;
        }
        if (cols[lead].a[r] != 0) ++lead;
    }
    std::vector<std::vector<mpz_class>> kernel;
    for (std::size_t j = lead; j < n; ++j) kernel.push_back(cols[j].u);
    return hermite_normal_form(std::move(kernel));
}

}  // namespace diffalg
