#pragma once

// Dense univariate polynomials and rational functions over a field K, plus
// the exact machinery built on them: resultants, discriminants, squarefree
// decomposition, root extraction up to degree 2, valuations/residues at
// points of the projective line, and partial fractions.
//
// Conventions for orders at a point p (including infinity):
//   val_at  -- the valuation: negative at poles, positive at zeros;
//   ord_at  -- its negative (pole order positive), with ord(0) = val(0) = 0.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "polyvec.hpp"
#include "scalar.hpp"

namespace diffalg {

template <class K>
class UPoly {
public:
    UPoly() = default;
    UPoly(const K& c) { if (!detail::kz(c)) c_ = {c}; }
    explicit UPoly(std::vector<K> c) : c_(std::move(c)) { detail::pv_norm(c_); }

    static UPoly x() { return UPoly(std::vector<K>{K{}, K(1)}); }
    static UPoly monomial(const K& c, std::size_t k) {
        std::vector<K> v(k + 1, K{});
        v[k] = c;
        UPoly p;
        p.c_ = std::move(v);
        detail::pv_norm(p.c_);
        return p;
    }

    int deg() const { return detail::pv_deg(c_); }
    bool is_zero() const { return c_.empty(); }
    bool is_one() const { return c_.size() == 1 && c_[0] == K(1); }
    const std::vector<K>& coeffs() const { return c_; }
    K coeff(std::size_t i) const { return i < c_.size() ? c_[i] : K{}; }
    const K& lc() const {
        if (c_.empty()) throw error("leading coefficient of the zero polynomial");
        return c_.back();
    }

    friend UPoly operator+(const UPoly& a, const UPoly& b) { return UPoly(detail::pv_add(a.c_, b.c_)); }
    friend UPoly operator-(const UPoly& a, const UPoly& b) { return UPoly(detail::pv_sub(a.c_, b.c_)); }
    friend UPoly operator-(const UPoly& a) { return UPoly(detail::pv_neg(a.c_)); }
    friend UPoly operator*(const UPoly& a, const UPoly& b) { return UPoly(detail::pv_mul(a.c_, b.c_)); }
    friend UPoly operator*(const UPoly& a, const K& c) { return UPoly(detail::pv_scale(a.c_, c)); }
    friend UPoly operator*(const K& c, const UPoly& a) { return a * c; }
    friend bool operator==(const UPoly& a, const UPoly& b) {
        if (a.c_.size() != b.c_.size()) return false;
        for (std::size_t i = 0; i < a.c_.size(); ++i)
            if (!(a.c_[i] == b.c_[i])) return false;
        return true;
    }
    friend bool operator!=(const UPoly& a, const UPoly& b) { return !(a == b); }

    UPoly& operator+=(const UPoly& b) { return *this = *this + b; }
    UPoly& operator-=(const UPoly& b) { return *this = *this - b; }
    UPoly& operator*=(const UPoly& b) { return *this = *this * b; }

    std::pair<UPoly, UPoly> divmod(const UPoly& b) const {
        auto [q, r] = detail::pv_divmod(c_, b.c_);
        return {UPoly(std::move(q)), UPoly(std::move(r))};
    }
    UPoly operator/(const UPoly& b) const { return divmod(b).first; }
    UPoly operator%(const UPoly& b) const { return divmod(b).second; }

    UPoly derivative() const { return UPoly(detail::pv_derivative(c_)); }
    K eval(const K& v) const { return detail::pv_eval(c_, v); }
    UPoly compose(const UPoly& inner) const { return UPoly(detail::pv_compose(c_, inner.c_)); }
    UPoly pow(unsigned long e) const { return UPoly(detail::pv_pow(c_, e)); }
    UPoly monic() const { return UPoly(detail::pv_monic(c_)); }

    // x -> x + c.
    UPoly shifted(const K& c) const { return compose(UPoly(std::vector<K>{c, K(1)})); }
    // Coefficients reversed: x^deg * p(1/x).
    UPoly reversed() const { return UPoly(std::vector<K>(c_.rbegin(), c_.rend())); }

private:
    std::vector<K> c_;
};

template <class K>
UPoly<K> gcd(const UPoly<K>& a, const UPoly<K>& b) {
    return UPoly<K>(detail::pv_gcd(a.coeffs(), b.coeffs()));
}

template <class K>
struct PolyXgcd {
    UPoly<K> g, u, v;  // u*a + v*b = g (monic or zero)
};

template <class K>
PolyXgcd<K> xgcd(const UPoly<K>& a, const UPoly<K>& b) {
    auto e = detail::pv_xgcd(a.coeffs(), b.coeffs());
    return {UPoly<K>(std::move(e.g)), UPoly<K>(std::move(e.u)), UPoly<K>(std::move(e.v))};
}

// Resultant by the Euclidean remainder sequence with the standard
// correction factors (exact over any field).
template <class K>
K resultant(UPoly<K> a, UPoly<K> b) {
    if (a.is_zero() || b.is_zero()) return K{};
    K acc = K(1);
    bool negate = false;
    while (b.deg() > 0) {
        const UPoly<K> r = a % b;
        if ((a.deg() & 1) && (b.deg() & 1)) negate = !negate;
        const int drop = a.deg() - (r.is_zero() ? -1 : r.deg());
        // multiply by lc(b)^(deg a - deg r)
        K lb = b.lc();
        K f = K(1);
        for (int i = 0; i < drop; ++i) f = f * lb;
        acc = acc * f;
        if (r.is_zero()) return K{};
        a = b;
        b = r;
    }
    // b is a nonzero constant: res(a, c) = c^deg(a)
    K c = b.coeff(0), f = K(1);
    for (int i = 0; i < a.deg(); ++i) f = f * c;
    acc = acc * f;
    return negate ? K{} - acc : acc;
}

template <class K>
K discriminant(const UPoly<K>& a) {
    const int d = a.deg();
    if (d < 1) throw error("discriminant needs degree >= 1");
    K r = resultant(a, a.derivative());
    r = r / a.lc();
    return ((static_cast<long>(d) * (d - 1) / 2) % 2) ? K{} - r : r;
}

// Yun's squarefree decomposition: returns (g_i, i) with a = lc * prod g_i^i,
// each g_i monic squarefree, pairwise coprime, g_i nonconstant only listed.
template <class K>
std::vector<std::pair<UPoly<K>, int>> squarefree_decomposition(const UPoly<K>& a) {
    std::vector<std::pair<UPoly<K>, int>> out;
    if (a.deg() < 1) return out;
    UPoly<K> p = a.monic();
    UPoly<K> g = gcd(p, p.derivative());
    UPoly<K> w = p / g, y = p.derivative() / g;
    int i = 1;
    while (w.deg() > 0) {
        UPoly<K> z = y - w.derivative();
        UPoly<K> gi = gcd(w, z);
        if (gi.deg() > 0) out.emplace_back(gi, i);
        w = w / gi;
        y = z / gi;
        ++i;
    }
    return out;
}

// Roots lying in the coefficient tower, decided honestly for deg <= 2.
// Higher degrees return nothing (callers treat such factors as blocks).
inline std::vector<Scalar> roots_in_field(const UPoly<Scalar>& p) {
    std::vector<Scalar> out;
    if (p.deg() == 1) {
        out.push_back(-p.coeff(0) / p.coeff(1));
    } else if (p.deg() == 2) {
        const Scalar a = p.coeff(2), b = p.coeff(1), c = p.coeff(0);
        const Scalar disc = b * b - Scalar(4) * a * c;
        if (auto s = try_sqrt(disc)) {
            const Scalar two_a = Scalar(2) * a;
            out.push_back((-b + *s) / two_a);
            if (!s->is_zero()) out.push_back((-b - *s) / two_a);
        }
    }
    return out;
}

// ------------------------------------------------------- rational functions

template <class K>
class RatF {
public:
    RatF() : den_(K(1)) {}
    RatF(const K& c) : num_(c), den_(K(1)) {}
    RatF(const UPoly<K>& p) : num_(p), den_(K(1)) {}
    RatF(UPoly<K> num, UPoly<K> den) { assign(std::move(num), std::move(den)); }

    static RatF x() { return RatF(UPoly<K>::x()); }

    const UPoly<K>& num() const { return num_; }
    const UPoly<K>& den() const { return den_; }
    bool is_zero() const { return num_.is_zero(); }
    bool is_polynomial() const { return den_.deg() == 0; }
    // max(deg num, deg den): the degree of a rational function.
    int deg() const { return num_.is_zero() ? 0 : std::max(num_.deg(), den_.deg()); }

    friend RatF operator+(const RatF& a, const RatF& b) {
        return RatF(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RatF operator-(const RatF& a, const RatF& b) {
        return RatF(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
    }
    friend RatF operator-(const RatF& a) {
        RatF r = a;
        r.num_ = -r.num_;
        return r;
    }
    friend RatF operator*(const RatF& a, const RatF& b) {
        return RatF(a.num_ * b.num_, a.den_ * b.den_);
    }
    friend RatF operator/(const RatF& a, const RatF& b) {
        if (b.is_zero()) throw division_by_zero();
        return RatF(a.num_ * b.den_, a.den_ * b.num_);
    }
    friend bool operator==(const RatF& a, const RatF& b) {
        return a.num_ == b.num_ && a.den_ == b.den_;
    }
    friend bool operator!=(const RatF& a, const RatF& b) { return !(a == b); }

    RatF& operator+=(const RatF& b) { return *this = *this + b; }
    RatF& operator-=(const RatF& b) { return *this = *this - b; }
    RatF& operator*=(const RatF& b) { return *this = *this * b; }
    RatF& operator/=(const RatF& b) { return *this = *this / b; }

    RatF derivative() const {
        return RatF(num_.derivative() * den_ - num_ * den_.derivative(), den_ * den_);
    }

    RatF inverse() const {
        if (is_zero()) throw division_by_zero();
        return RatF(den_, num_);
    }

    // Value at a finite point; throws on a pole.
    K eval(const K& v) const {
        const K d = den_.eval(v);
        if (detail::kz(d)) throw division_by_zero("evaluation at a pole");
        return num_.eval(v) / d;
    }
    std::optional<K> try_eval(const K& v) const {
        const K d = den_.eval(v);
        if (detail::kz(d)) return std::nullopt;
        return num_.eval(v) / d;
    }

    // u(1/x) as a rational function of x.
    RatF subst_inverse() const {
        if (num_.is_zero()) return RatF();
        UPoly<K> n = num_.reversed(), d = den_.reversed();
        const int dn = num_.deg(), dd = den_.deg();
        if (dd > dn) n = n * UPoly<K>::monomial(K(1), static_cast<std::size_t>(dd - dn));
        if (dn > dd) d = d * UPoly<K>::monomial(K(1), static_cast<std::size_t>(dn - dd));
        return RatF(std::move(n), std::move(d));
    }

    // Substitute x -> x + c.
    RatF shifted(const K& c) const { return RatF(num_.shifted(c), den_.shifted(c)); }

    RatF pow(long e) const {
        RatF base = *this;
        if (e < 0) {
            base = base.inverse();
            e = -e;
        }
        RatF r(K(1));
        while (e) {
            if (e & 1) r = r * base;
            base = base * base;
            e >>= 1;
        }
        return r;
    }

private:
    void assign(UPoly<K> num, UPoly<K> den) {
        if (den.is_zero()) throw division_by_zero();
        if (num.is_zero()) {
            num_ = UPoly<K>();
            den_ = UPoly<K>(K(1));
            return;
        }
        UPoly<K> g = gcd(num, den);
        if (g.deg() > 0) {
            num = num / g;
            den = den / g;
        }
        const K inv_lc = K(1) / den.lc();
        num_ = num * inv_lc;
        den_ = den * inv_lc;
    }

    UPoly<K> num_, den_;
};

// ------------------------------------------------------ points of the line

struct LinePoint {
    bool infinite = false;
    Scalar x0;

    static LinePoint infinity() { return LinePoint{true, Scalar(0)}; }
    static LinePoint at(Scalar v) { return LinePoint{false, std::move(v)}; }

    friend bool operator==(const LinePoint& a, const LinePoint& b) {
        if (a.infinite != b.infinite) return false;
        return a.infinite || a.x0 == b.x0;
    }
};

inline std::string to_string(const LinePoint& p) {
    return p.infinite ? "infinity" : to_string(p.x0);
}

// Multiplicity of the root v in p (0 if not a root).
template <class K>
int root_multiplicity(UPoly<K> p, const K& v) {
    if (p.is_zero()) return 0;
    int m = 0;
    const UPoly<K> lin(std::vector<K>{K{} - v, K(1)});
    while (true) {
        auto [q, r] = p.divmod(lin);
        if (!r.is_zero()) return m;
        ++m;
        p = std::move(q);
        if (p.is_zero()) return m;
    }
}

// Valuation of u at p: negative at poles, positive at zeros, 0 for the zero
// function (by the ord(0) = 0 convention shared with ord_at).
template <class K>
int val_at(const RatF<K>& u, const K& p) {
    if (u.is_zero()) return 0;
    return root_multiplicity(u.num(), p) - root_multiplicity(u.den(), p);
}

inline int val_at(const RatF<Scalar>& u, const LinePoint& p) {
    if (u.is_zero()) return 0;
    if (p.infinite) return u.den().deg() - u.num().deg();
    return val_at(u, p.x0);
}

// Pole-order-positive order at p (paper convention), ord(0) = 0.
inline int ord_at(const RatF<Scalar>& u, const LinePoint& p) { return -val_at(u, p); }

// Residue of u dx at a finite point, by the derivative formula
// res = (d/dx)^{m-1} [ u * (x-p)^m ] (p) / (m-1)!.
template <class K>
K residue_at_point(const RatF<K>& u, const K& p) {
    const int m = root_multiplicity(u.den(), p);
    if (m == 0) return K{};
    const UPoly<K> lin(std::vector<K>{K{} - p, K(1)});
    RatF<K> v = u * RatF<K>(lin.pow(static_cast<unsigned long>(m)));
    K fact = K(1);
    for (int i = 1; i < m; ++i) {
        v = v.derivative();
        fact = fact * K(i);
    }
    return v.eval(p) / fact;
}

// Residue at a point of the projective line; at infinity this is
// res_0( -(1/x^2) u(1/x) ).
inline Scalar residue_at(const RatF<Scalar>& u, const LinePoint& p) {
    if (p.infinite) {
        const RatF<Scalar> x2(UPoly<Scalar>::monomial(Scalar(1), 2));
        return residue_at_point(-u.subst_inverse() / x2, Scalar(0));
    }
    return residue_at_point(u, p.x0);
}

// --------------------------------------------------------- partial fractions

// u = poly + sum of terms num/(factor^power) with deg num < deg factor *
// power... normalized further: each term has deg num < deg(factor^power).
// Linear and splittable quadratic factors of the denominator are broken
// into points of the current tower; other squarefree factors stay as
// symbolic blocks.
struct PartialFractionTerm {
    UPoly<Scalar> factor;   // monic squarefree factor of the denominator
    int power = 1;          // its multiplicity in this term's denominator
    UPoly<Scalar> num;      // deg num < deg(factor^power)
    bool split = false;     // true when factor is linear (a point term)
};

struct PartialFractions {
    UPoly<Scalar> poly;
    std::vector<PartialFractionTerm> terms;
};

inline PartialFractions partial_fractions(const RatF<Scalar>& u) {
    PartialFractions out;
    if (u.is_zero()) return out;
    auto [q, r] = u.num().divmod(u.den());
    out.poly = q;
    if (r.is_zero()) return out;
    // Split the denominator into coprime squarefree-power pieces, refining
    // degree <= 2 factors by their tower roots.
    std::vector<std::pair<UPoly<Scalar>, int>> pieces;
    for (const auto& [g, m] : squarefree_decomposition(u.den())) {
        UPoly<Scalar> rest = g;
        for (const auto& root : roots_in_field(g)) {
            UPoly<Scalar> lin(std::vector<Scalar>{-root, Scalar(1)});
            pieces.emplace_back(lin, m);
            rest = rest / lin;
        }
        if (rest.deg() > 0) pieces.emplace_back(rest, m);
    }
    // Partial-fraction split by pairwise-coprime moduli: for each piece P^m
    // the component is r * (D/P^m)^{-1} mod P^m.
    for (const auto& [f, m] : pieces) {
        const UPoly<Scalar> fm = f.pow(static_cast<unsigned long>(m));
        const UPoly<Scalar> cof = u.den() / fm;
        auto e = xgcd(cof, fm);
        if (e.g.deg() != 0) throw error("partial fraction moduli are not coprime");
        // inverse of cof mod fm, scaled by 1/g
        UPoly<Scalar> inv = e.u * (Scalar(1) / e.g.coeff(0));
        UPoly<Scalar> numpart = (r * inv) % fm;
        if (numpart.is_zero()) continue;
        PartialFractionTerm t;
        t.factor = f;
        t.power = m;
        t.num = numpart;
        t.split = f.deg() == 1;
        out.terms.push_back(std::move(t));
    }
    return out;
}

// ---------------------------------------------------------------- printing

inline std::string to_string(const UPoly<Scalar>& p, const std::string& var = "x") {
    return detail::poly_to_string(p.coeffs(), var);
}

inline std::string to_string(const RatF<Scalar>& u, const std::string& var = "x") {
    std::string n = to_string(u.num(), var);
    if (u.den().is_one()) return n;
    std::string d = to_string(u.den(), var);
    if (detail::needs_parens(n)) n = "(" + n + ")";
    if (detail::needs_parens(d)) d = "(" + d + ")";
    return n + "/" + d;
}

}  // namespace diffalg
