#pragma once

// Dense univariate polynomial arithmetic over an arbitrary field type K.
// Polynomials are coefficient vectors, constant term first, no trailing
// zeros (the zero polynomial is the empty vector).  K needs value-semantic
// +,-,*,/, ==, a default constructor giving 0, and construction from int.
//
// These helpers are deliberately free of any polynomial class so they can
// serve both the scalar tower (whose levels are rational functions and
// algebraic extensions) and the public polynomial types.

#include <vector>
#include <utility>

#include "errors.hpp"

namespace diffalg::detail {

template <class K>
bool kz(const K& x) {
    return x == K{};
}

template <class K>
void pv_norm(std::vector<K>& p) {
    while (!p.empty() && kz(p.back())) p.pop_back();
}

template <class K>
int pv_deg(const std::vector<K>& p) {
    return static_cast<int>(p.size()) - 1;  // deg 0 constants, -1 for zero
}

template <class K>
std::vector<K> pv_add(std::vector<K> a, const std::vector<K>& b) {
    if (a.size() < b.size()) a.resize(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) a[i] = a[i] + b[i];
    pv_norm(a);
    return a;
}

template <class K>
std::vector<K> pv_neg(std::vector<K> a) {
    for (auto& c : a) c = K{} - c;
    return a;
}

template <class K>
std::vector<K> pv_sub(std::vector<K> a, const std::vector<K>& b) {
    if (a.size() < b.size()) a.resize(b.size());
    for (std::size_t i = 0; i < b.size(); ++i) a[i] = a[i] - b[i];
    pv_norm(a);
    return a;
}

template <class K>
std::vector<K> pv_scale(std::vector<K> a, const K& c) {
    if (kz(c)) return {};
    for (auto& x : a) x = x * c;
    pv_norm(a);
    return a;
}

template <class K>
std::vector<K> pv_mul(const std::vector<K>& a, const std::vector<K>& b) {
    if (a.empty() || b.empty()) return {};
    std::vector<K> r(a.size() + b.size() - 1, K{});
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            r[i + j] = r[i + j] + a[i] * b[j];
    pv_norm(r);
    return r;
}

// Multiply by the monomial x^k.
template <class K>
std::vector<K> pv_shift_up(std::vector<K> a, std::size_t k) {
    if (a.empty()) return a;
    a.insert(a.begin(), k, K{});
    return a;
}

// Euclidean division; the divisor's leading coefficient must be invertible.
template <class K>
std::pair<std::vector<K>, std::vector<K>> pv_divmod(std::vector<K> a, const std::vector<K>& b) {
    if (b.empty()) throw division_by_zero("polynomial division by zero");
    const int db = pv_deg(b);
    const K inv_lc = K(1) / b.back();
    std::vector<K> q;
    if (pv_deg(a) >= db) q.assign(a.size() - b.size() + 1, K{});
    while (pv_deg(a) >= db) {
        const int k = pv_deg(a) - db;
        K c = a.back() * inv_lc;
        q[k] = c;
        for (int i = 0; i <= db; ++i) a[k + i] = a[k + i] - c * b[i];
        a.pop_back();  // leading term cancels exactly
        pv_norm(a);
    }
    pv_norm(q);
    return {q, a};
}

template <class K>
std::vector<K> pv_rem(std::vector<K> a, const std::vector<K>& b) {
    return pv_divmod(std::move(a), b).second;
}

template <class K>
std::vector<K> pv_monic(std::vector<K> a) {
    if (a.empty()) return a;
    const K inv = K(1) / a.back();
    for (auto& c : a) c = c * inv;
    return a;
}

template <class K>
std::vector<K> pv_gcd(std::vector<K> a, std::vector<K> b) {
    while (!b.empty()) {
        auto r = pv_rem(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    return pv_monic(std::move(a));
}

// Extended gcd: returns (g, u, v) with u*a + v*b = g, g monic (or zero).
template <class K>
struct PvXgcd {
    std::vector<K> g, u, v;
};

template <class K>
PvXgcd<K> pv_xgcd(std::vector<K> a, std::vector<K> b) {
    std::vector<K> u0{K(1)}, v0{}, u1{}, v1{K(1)};
    while (!b.empty()) {
        auto [q, r] = pv_divmod(a, b);
        a = std::move(b);
        b = std::move(r);
        auto u2 = pv_sub(u0, pv_mul(q, u1));
        auto v2 = pv_sub(v0, pv_mul(q, v1));
        u0 = std::move(u1); v0 = std::move(v1);
        u1 = std::move(u2); v1 = std::move(v2);
    }
    if (!a.empty()) {
        const K inv = K(1) / a.back();
        a = pv_scale(std::move(a), inv);
        u0 = pv_scale(std::move(u0), inv);
        v0 = pv_scale(std::move(v0), inv);
    }
    return {std::move(a), std::move(u0), std::move(v0)};
}

template <class K>
std::vector<K> pv_derivative(const std::vector<K>& a) {
    if (a.size() <= 1) return {};
    std::vector<K> r(a.size() - 1, K{});
    for (std::size_t i = 1; i < a.size(); ++i) r[i - 1] = a[i] * K(static_cast<int>(i));
    pv_norm(r);
    return r;
}

template <class K>
K pv_eval(const std::vector<K>& a, const K& x) {
    K r{};
    for (std::size_t i = a.size(); i-- > 0;) r = r * x + a[i];
    return r;
}

// Compose: a(b(x)).
template <class K>
std::vector<K> pv_compose(const std::vector<K>& a, const std::vector<K>& b) {
    std::vector<K> r;
    for (std::size_t i = a.size(); i-- > 0;) {
        r = pv_mul(r, b);
        if (!kz(a[i])) r = pv_add(r, std::vector<K>{a[i]});
    }
    return r;
}

template <class K>
std::vector<K> pv_pow(std::vector<K> a, unsigned long e) {
    std::vector<K> r{K(1)};
    while (e) {
        if (e & 1) r = pv_mul(r, a);
        a = pv_mul(a, a);
        e >>= 1;
    }
    return r;
}

// Monic square root of a monic polynomial, if one exists.
template <class K>
bool pv_sqrt(const std::vector<K>& p, std::vector<K>& out) {
    if (p.empty()) { out.clear(); return true; }
    const int d = pv_deg(p);
    if (d % 2 != 0) return false;
    const int m = d / 2;
    std::vector<K> s(static_cast<std::size_t>(m) + 1, K{});
    s[m] = K(1);
    const K half = K(1) / K(2);
    while (true) {
        auto r = pv_sub(p, pv_mul(s, s));
        if (r.empty()) { out = std::move(s); return true; }
        const int dr = pv_deg(r);
        if (dr < m) return false;
        s[dr - m] = s[dr - m] + r.back() * half;
    }
}

}  // namespace diffalg::detail
