#pragma once

// Matrix differential systems over a generic differential field F:
// gauge transforms, wronskians, exterior-power systems, cyclic-vector
// scalarization, and polynomial expressions in matrix entries (used for
// character log-derivatives).  The derivation is passed as a callable so
// the same code serves rational functions and quadratic function fields.

#include <algorithm>
#include <cstddef>
#include <map>
#include <utility>
#include <vector>

#include "diffop.hpp"
#include "errors.hpp"
#include "linalg.hpp"

namespace diffalg {

template <class F>
Matrix<F> mat_add(const Matrix<F>& a, const Matrix<F>& b) {
    Matrix<F> r = a;
    for (std::size_t i = 0; i < r.size(); ++i)
        for (std::size_t j = 0; j < r[i].size(); ++j) r[i][j] = r[i][j] + b[i][j];
    return r;
}

template <class F, class Der>
Matrix<F> mat_derivative(const Matrix<F>& a, Der der) {
    Matrix<F> r = a;
    for (auto& row : r)
        for (auto& e : row) e = der(e);
    return r;
}

// A -> der(g^{-1}) g + g^{-1} A g, the system matrix after the change of
// fundamental matrix Y -> g^{-1} Y.
template <class F, class Der>
Matrix<F> gauge_transform(const Matrix<F>& a, const Matrix<F>& g, Der der) {
    const Matrix<F> gi = mat_inverse(g);
    return mat_add(mat_mul(mat_derivative(gi, der), g), mat_mul(gi, mat_mul(a, g)));
}

// Determinant of the matrix of iterated derivatives (row i holds the i-th
// derivatives).
template <class F, class Der>
F wronskian(const std::vector<F>& elems, Der der) {
    if (elems.empty()) throw error("wronskian of an empty list");
    const std::size_t n = elems.size();
    Matrix<F> w(n, std::vector<F>(n));
    w[0] = elems;
    for (std::size_t i = 1; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) w[i][j] = der(w[i - 1][j]);
    return det(std::move(w));
}

namespace detail {
inline std::vector<std::vector<std::size_t>> sorted_subsets(std::size_t n, std::size_t s) {
    std::vector<std::vector<std::size_t>> out;
    std::vector<std::size_t> c(s);
    for (std::size_t i = 0; i < s; ++i) c[i] = i;
    while (true) {
        out.push_back(c);
        std::size_t i = s;
        while (i > 0 && c[i - 1] == n - s + i - 1) --i;
        if (i == 0) break;
        ++c[i - 1];
        for (std::size_t j = i; j < s; ++j) c[j] = c[j - 1] + 1;
    }
    return out;
}
}  // namespace detail

// The system satisfied by the s x s minors of a fundamental matrix of
// Y' = A Y: differentiating the minor with rows I replaces row i by row j
// with coefficient A[i][j]; sorting the replaced row set gives the sign.
template <class F>
Matrix<F> exterior_power_system(const Matrix<F>& a, std::size_t s) {
    const std::size_t n = a.size();
    if (s < 1 || s > n) throw error("exterior power index out of range");
    const auto subsets = detail::sorted_subsets(n, s);
    std::map<std::vector<std::size_t>, std::size_t> index;
    for (std::size_t k = 0; k < subsets.size(); ++k) index[subsets[k]] = k;
    Matrix<F> b(subsets.size(), std::vector<F>(subsets.size(), F{}));
    for (std::size_t k = 0; k < subsets.size(); ++k) {
        const auto& rows = subsets[k];
        for (std::size_t pos = 0; pos < s; ++pos) {
            for (std::size_t j = 0; j < n; ++j) {
                if (detail::kz(a[rows[pos]][j])) continue;
                bool repeated = false;
                for (std::size_t q = 0; q < s; ++q)
                    if (q != pos && rows[q] == j) repeated = true;
                if (repeated) continue;
                std::vector<std::size_t> target = rows;
                target[pos] = j;
                // bubble the replaced row to its sorted position
                int sign = 1;
                std::size_t p = pos;
                while (p > 0 && target[p - 1] > target[p]) {
                    std::swap(target[p - 1], target[p]);
                    --p;
                    sign = -sign;
                }
                while (p + 1 < s && target[p] > target[p + 1]) {
                    std::swap(target[p], target[p + 1]);
                    ++p;
                    sign = -sign;
                }
                const F term = a[rows[pos]][j];
                auto& cell = b[k][index[target]];
                cell = sign > 0 ? cell + term : cell - term;
            }
        }
    }
    return b;
}

struct CyclicScalarization {
    DiffOperator op;          // monic, ddx form
    Matrix<DiffOperator::Fn> t;  // gauge_transform(A, t) is the companion of op
};

// Scalarize Y' = A Y through a cyclic covector c: the rows r_0 = c,
// r_{k+1} = r_k' + r_k A stack into an invertible matrix R, and
// u = c . Y satisfies the returned scalar operator.  T = R^{-1}.
inline CyclicScalarization cyclic_scalarize(const Matrix<DiffOperator::Fn>& a) {
    using Fn = DiffOperator::Fn;
    const std::size_t n = a.size();
    if (n == 0) throw error("cyclic scalarization of an empty system");
    std::vector<std::vector<Fn>> candidates;
    for (std::size_t k = 0; k < n; ++k) {
        std::vector<Fn> e(n, Fn{});
        e[k] = Fn(Scalar(1));
        candidates.push_back(std::move(e));
    }
    for (const Scalar& shift : {Scalar(0), Scalar(1)}) {
        std::vector<Fn> v(n);
        Fn p(Scalar(1));
        const Fn base = Fn(UPoly<Scalar>::x()) + Fn(shift);
        for (std::size_t k = 0; k < n; ++k) {
            v[k] = p;
            p = p * base;
        }
        candidates.push_back(std::move(v));
    }
    for (const auto& c : candidates) {
        Matrix<Fn> rows(n, std::vector<Fn>(n));
        rows[0] = c;
        auto next_row = [&](const std::vector<Fn>& r) {
            std::vector<Fn> s(n);
            for (std::size_t j = 0; j < n; ++j) {
                s[j] = r[j].derivative();
                for (std::size_t i = 0; i < n; ++i) s[j] = s[j] + r[i] * a[i][j];
            }
            return s;
        };
        for (std::size_t k = 1; k < n; ++k) rows[k] = next_row(rows[k - 1]);
        auto tinv = try_mat_inverse(rows);
        if (!tinv) continue;
        const std::vector<Fn> rn = next_row(rows[n - 1]);
        Matrix<Fn> cols(n, std::vector<Fn>(n));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t k = 0; k < n; ++k) cols[i][k] = rows[k][i];
        const auto mu = solve_linear(std::move(cols), rn);
        if (!mu) continue;
        std::vector<Fn> oc(n + 1);
        oc[n] = Fn(Scalar(1));
        for (std::size_t k = 0; k < n; ++k) oc[k] = Fn{} - (*mu)[k];
        return {DiffOperator(OpForm::ddx, std::move(oc)), *tinv};
    }
    throw no_cyclic_vector("deterministic candidate list exhausted");
}

// ------------------------------------------------ matrix-entry polynomials

// Polynomials in the n^2 entries X_ij of a matrix, with coefficients in F.
// Exponents are stored flat, row-major.
template <class F>
class MatEntryPoly {
public:
    explicit MatEntryPoly(std::size_t n) : n_(n) {}

    static MatEntryPoly constant(std::size_t n, F c) {
        MatEntryPoly p(n);
        if (!detail::kz(c)) p.terms_[std::vector<unsigned>(n * n, 0)] = std::move(c);
        return p;
    }
    static MatEntryPoly entry(std::size_t n, std::size_t i, std::size_t j) {
        MatEntryPoly p(n);
        std::vector<unsigned> e(n * n, 0);
        e[i * n + j] = 1;
        p.terms_[std::move(e)] = F(1);
        return p;
    }
    static MatEntryPoly determinant(std::size_t n) {
        MatEntryPoly p(n);
        std::vector<std::size_t> perm(n);
        for (std::size_t i = 0; i < n; ++i) perm[i] = i;
        do {
            int sign = 1;
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = i + 1; j < n; ++j)
                    if (perm[i] > perm[j]) sign = -sign;
            std::vector<unsigned> e(n * n, 0);
            for (std::size_t i = 0; i < n; ++i) e[i * n + perm[i]] += 1;
            p.terms_[std::move(e)] = F(sign);
        } while (std::next_permutation(perm.begin(), perm.end()));
        return p;
    }

    std::size_t dim() const { return n_; }

    friend MatEntryPoly operator+(const MatEntryPoly& a, const MatEntryPoly& b) {
        MatEntryPoly r = a;
        for (const auto& [e, c] : b.terms_) r.add_term(e, c);
        return r;
    }
    friend MatEntryPoly operator-(const MatEntryPoly& a, const MatEntryPoly& b) {
        MatEntryPoly r = a;
        for (const auto& [e, c] : b.terms_) r.add_term(e, F{} - c);
        return r;
    }
    friend MatEntryPoly operator*(const MatEntryPoly& a, const MatEntryPoly& b) {
        MatEntryPoly r(a.n_);
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) {
                std::vector<unsigned> e = ea;
                for (std::size_t i = 0; i < e.size(); ++i) e[i] += eb[i];
                r.add_term(e, ca * cb);
            }
        return r;
    }

    MatEntryPoly partial(std::size_t i, std::size_t j) const {
        MatEntryPoly r(n_);
        const std::size_t v = i * n_ + j;
        for (const auto& [e, c] : terms_) {
            if (e[v] == 0) continue;
            std::vector<unsigned> d = e;
            d[v] -= 1;
            r.add_term(d, c * F(static_cast<int>(e[v])));
        }
        return r;
    }

    F eval(const Matrix<F>& x) const {
        F acc{};
        for (const auto& [e, c] : terms_) {
            F t = c;
            for (std::size_t v = 0; v < e.size(); ++v)
                for (unsigned k = 0; k < e[v]; ++k) t = t * x[v / n_][v % n_];
            acc = acc + t;
        }
        return acc;
    }

private:
    void add_term(const std::vector<unsigned>& e, const F& c) {
        auto it = terms_.find(e);
        if (it == terms_.end()) {
            if (!detail::kz(c)) terms_[e] = c;
            return;
        }
        it->second = it->second + c;
        if (detail::kz(it->second)) terms_.erase(it);
    }

    std::size_t n_;
    std::map<std::vector<unsigned>, F> terms_;
};

// f_l = sum_ij dQ_l/dX_ij (Id) * gauge_transform(A, g)_ij.
template <class F, class Der>
std::vector<F> character_logderivs(const Matrix<F>& a, const Matrix<F>& g,
                                   const std::vector<MatEntryPoly<F>>& lifts, Der der) {
    const Matrix<F> m = gauge_transform(a, g, der);
    const std::size_t n = m.size();
    Matrix<F> id(n, std::vector<F>(n, F{}));
    for (std::size_t i = 0; i < n; ++i) id[i][i] = F(1);
    std::vector<F> out;
    for (const auto& q : lifts) {
        F f{};
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j) {
                const F w = q.partial(i, j).eval(id);
                if (!detail::kz(w)) f = f + w * m[i][j];
            }
        out.push_back(f);
    }
    return out;
}

}  // namespace diffalg
