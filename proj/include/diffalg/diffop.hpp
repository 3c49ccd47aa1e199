#pragma once

// Linear ordinary differential operators with rational-function
// coefficients over a scalar tower, in two interchangeable forms:
//
//   ddx   : polynomials in D = d/dx
//   euler : polynomials in T = x * d/dx   (the Euler derivation)
//
// Multiplication is composition, so D * b = b * D + b' and
// T * b = b * T + x * b'.  Conversions use x^k D^k = T(T-1)...(T-k+1).

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "linalg.hpp"
#include "scalar.hpp"
#include "upoly.hpp"

namespace diffalg {

enum class OpForm { ddx, euler };

class DiffOperator {
public:
    using Fn = RatF<Scalar>;

    DiffOperator() = default;
    explicit DiffOperator(OpForm f) : form_(f) {}
    DiffOperator(OpForm f, std::vector<Fn> c) : form_(f), c_(std::move(c)) { normalize(); }

    // The derivation symbol itself (D or T) as an operator.
    static DiffOperator derivation(OpForm f) { return DiffOperator(f, {Fn{}, Fn(Scalar(1))}); }
    // Multiplication by a fixed function, as an order-0 operator.
    static DiffOperator function(OpForm f, Fn a) { return DiffOperator(f, {std::move(a)}); }

    OpForm form() const { return form_; }
    bool is_zero() const { return c_.empty(); }
    // Order of the zero operator is -1 by convention.
    int order() const { return static_cast<int>(c_.size()) - 1; }
    const std::vector<Fn>& coeffs() const { return c_; }
    Fn coeff(std::size_t i) const { return i < c_.size() ? c_[i] : Fn{}; }
    const Fn& lc() const {
        if (c_.empty()) throw error("zero operator has no leading coefficient");
        return c_.back();
    }

    // The coefficient derivation for this form: b -> b' or b -> x b'.
    Fn derive_coeff(const Fn& b) const {
        Fn d = b.derivative();
        if (form_ == OpForm::euler) d = Fn::x() * d;
        return d;
    }

    friend DiffOperator operator+(const DiffOperator& a, const DiffOperator& b) {
        a.check_form(b);
        std::vector<Fn> c(std::max(a.c_.size(), b.c_.size()));
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = a.coeff(i) + b.coeff(i);
        return DiffOperator(a.form_, std::move(c));
    }
    friend DiffOperator operator-(const DiffOperator& a) {
        std::vector<Fn> c(a.c_.size());
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = Fn{} - a.c_[i];
        return DiffOperator(a.form_, std::move(c));
    }
    friend DiffOperator operator-(const DiffOperator& a, const DiffOperator& b) { return a + (-b); }

    // Composition.
    friend DiffOperator operator*(const DiffOperator& a, const DiffOperator& b) {
        a.check_form(b);
        DiffOperator acc(a.form_);
        DiffOperator dib = b;  // D^i * b, iteratively
        for (std::size_t i = 0; i < a.c_.size(); ++i) {
            if (!a.c_[i].is_zero()) acc = acc + a.c_[i] * dib;
            if (i + 1 < a.c_.size()) dib = dib.derived_once();
        }
        return acc;
    }
    friend DiffOperator operator*(const Fn& a, const DiffOperator& b) {
        std::vector<Fn> c(b.c_.size());
        for (std::size_t i = 0; i < c.size(); ++i) c[i] = a * b.c_[i];
        return DiffOperator(b.form_, std::move(c));
    }

    friend bool operator==(const DiffOperator& a, const DiffOperator& b) {
        return a.form_ == b.form_ && a.c_ == b.c_;
    }
    friend bool operator!=(const DiffOperator& a, const DiffOperator& b) { return !(a == b); }

    // D * this (one application of the derivation from the left).
    DiffOperator derived_once() const {
        std::vector<Fn> c(c_.size() + 1);
        for (std::size_t i = 0; i < c_.size(); ++i) {
            c[i] = c[i] + derive_coeff(c_[i]);
            c[i + 1] = c[i + 1] + c_[i];
        }
        return DiffOperator(form_, std::move(c));
    }

    // Apply the operator to a function.
    Fn apply(const Fn& g) const {
        Fn acc;
        Fn dg = g;
        for (std::size_t i = 0; i < c_.size(); ++i) {
            if (!c_[i].is_zero()) acc = acc + c_[i] * dg;
            if (i + 1 < c_.size()) dg = derive_coeff(dg);
        }
        return acc;
    }
    Fn apply(const UPoly<Scalar>& p) const { return apply(Fn(p)); }

    DiffOperator monic() const {
        if (is_zero()) throw not_monic("zero operator cannot be made monic");
        const Fn inv = lc().inverse();
        return inv * *this;
    }

    void normalize() {
        while (!c_.empty() && c_.back().is_zero()) c_.pop_back();
    }

private:
    void check_form(const DiffOperator& o) const {
        if (form_ != o.form_) throw error("operators are in different forms; convert first");
    }

    OpForm form_ = OpForm::ddx;
    std::vector<Fn> c_;
};

// Substitute another operator for the derivation symbol: L = sum a_i D^i
// becomes sum a_i N^i.  N must be in the target arithmetic form.
inline DiffOperator substitute_derivation(const DiffOperator& l, const DiffOperator& n) {
    DiffOperator acc(n.form());
    DiffOperator pw = DiffOperator::function(n.form(), DiffOperator::Fn(Scalar(1)));
    for (std::size_t i = 0; i < l.coeffs().size(); ++i) {
        if (!l.coeffs()[i].is_zero()) acc = acc + l.coeffs()[i] * pw;
        if (i + 1 < l.coeffs().size()) pw = pw * n;
    }
    return acc;
}

// ddx -> euler via x^k D^k = T(T-1)...(T-k+1), i.e. D^k = x^{-k} T(T-1)...
inline DiffOperator to_euler(const DiffOperator& l) {
    if (l.form() == OpForm::euler) return l;
    using Fn = DiffOperator::Fn;
    const DiffOperator t = DiffOperator::derivation(OpForm::euler);
    DiffOperator acc(OpForm::euler);
    DiffOperator falling = DiffOperator::function(OpForm::euler, Fn(Scalar(1)));
    Fn xpow(Scalar(1));
    const Fn xinv = Fn::x().inverse();
    for (std::size_t i = 0; i < l.coeffs().size(); ++i) {
        if (!l.coeffs()[i].is_zero()) acc = acc + (l.coeffs()[i] * xpow) * falling;
        if (i + 1 < l.coeffs().size()) {
            falling = falling * (t - DiffOperator::function(OpForm::euler, Fn(Scalar(static_cast<long>(i)))));
            xpow = xpow * xinv;
        }
    }
    return acc;
}

// euler -> ddx via T = x D.
inline DiffOperator to_ddx(const DiffOperator& l) {
    if (l.form() == OpForm::ddx) return l;
    const DiffOperator xd(OpForm::ddx, {DiffOperator::Fn{}, DiffOperator::Fn(UPoly<Scalar>::x())});
    DiffOperator r = substitute_derivation(DiffOperator(OpForm::ddx, l.coeffs()), xd);
    return r;
}

inline DiffOperator converted(const DiffOperator& l, OpForm f) {
    return f == OpForm::euler ? to_euler(l) : to_ddx(l);
}

// T -> T + e in an euler-form operator.
inline DiffOperator exponent_shift(const DiffOperator& l, const DiffOperator::Fn& e) {
    if (l.form() != OpForm::euler) throw error("exponent shift expects euler form");
    return substitute_derivation(l, DiffOperator::derivation(OpForm::euler) +
                                        DiffOperator::function(OpForm::euler, e));
}

// D -> D + w in a ddx-form operator: the twist by exp(int w).
inline DiffOperator twisted(const DiffOperator& l, const DiffOperator::Fn& w) {
    if (l.form() != OpForm::ddx) throw error("twist expects ddx form");
    return substitute_derivation(l, DiffOperator::derivation(OpForm::ddx) +
                                        DiffOperator::function(OpForm::ddx, w));
}

// Move the point p to the origin: coefficients x -> x + p, derivation fixed.
inline DiffOperator moved_to_origin(const DiffOperator& l, const Scalar& p) {
    if (l.form() != OpForm::ddx) throw error("transport expects ddx form");
    std::vector<DiffOperator::Fn> c;
    c.reserve(l.coeffs().size());
    for (const auto& a : l.coeffs()) c.push_back(a.shifted(p));
    return DiffOperator(OpForm::ddx, std::move(c));
}

// Move infinity to the origin: x -> 1/x, D -> -x^2 D.
inline DiffOperator moved_from_infinity(const DiffOperator& l) {
    if (l.form() != OpForm::ddx) throw error("transport expects ddx form");
    using Fn = DiffOperator::Fn;
    const UPoly<Scalar> x2 = UPoly<Scalar>::x() * UPoly<Scalar>::x();
    const DiffOperator n(OpForm::ddx, {Fn{}, Fn{} - Fn(x2)});
    DiffOperator acc(OpForm::ddx);
    DiffOperator pw = DiffOperator::function(OpForm::ddx, Fn(Scalar(1)));
    for (std::size_t i = 0; i < l.coeffs().size(); ++i) {
        if (!l.coeffs()[i].is_zero()) acc = acc + l.coeffs()[i].subst_inverse() * pw;
        if (i + 1 < l.coeffs().size()) pw = pw * n;
    }
    return acc;
}

struct OpDivision {
    DiffOperator quotient;
    DiffOperator remainder;
};

// L = Q * M + R with order(R) < order(M).
inline OpDivision right_divide(const DiffOperator& l, const DiffOperator& m) {
    if (m.is_zero()) throw division_by_zero("right division by the zero operator");
    if (l.form() != m.form()) throw error("operators are in different forms; convert first");
    DiffOperator r = l;
    DiffOperator q(l.form());
    while (!r.is_zero() && r.order() >= m.order()) {
        const std::size_t k = static_cast<std::size_t>(r.order() - m.order());
        std::vector<DiffOperator::Fn> tc(k + 1);
        tc[k] = r.lc() / m.lc();
        const DiffOperator t(l.form(), std::move(tc));
        q = q + t;
        r = r - t * m;
    }
    return {q, r};
}

// First-order companion system Y' = A Y for the monic normalization of L,
// with Y = (y, Dy, ..., D^{nu-1} y).
inline Matrix<DiffOperator::Fn> companion_system(const DiffOperator& l) {
    if (l.order() < 1) throw not_monic("companion system requires an operator of positive order");
    const DiffOperator m = l.monic();
    const std::size_t nu = static_cast<std::size_t>(m.order());
    Matrix<DiffOperator::Fn> a(nu, std::vector<DiffOperator::Fn>(nu, DiffOperator::Fn{}));
    for (std::size_t i = 0; i + 1 < nu; ++i) a[i][i + 1] = DiffOperator::Fn(Scalar(1));
    for (std::size_t j = 0; j < nu; ++j) a[nu - 1][j] = DiffOperator::Fn{} - m.coeff(j);
    return a;
}

// Least common denominator of the monic normalization's coefficients:
// its roots are the finite singular points.
inline UPoly<Scalar> singular_denominator(const DiffOperator& l) {
    const DiffOperator m = l.monic();
    UPoly<Scalar> d(Scalar(1));
    for (const auto& c : m.coeffs()) {
        const UPoly<Scalar> g = gcd(d, c.den());
        d = (d * c.den()) / g;
    }
    return d.monic();
}

// Polynomial kernel elements of degree <= bound, as an echelon basis.
inline std::vector<UPoly<Scalar>> polynomial_solutions(const DiffOperator& l, long bound) {
    std::vector<UPoly<Scalar>> sols;
    if (bound < 0 || l.is_zero()) return sols;
    const std::size_t cols = static_cast<std::size_t>(bound) + 1;
    std::vector<UPoly<Scalar>> num(cols);
    UPoly<Scalar> den(Scalar(1));
    std::vector<DiffOperator::Fn> img(cols);
    UPoly<Scalar> xj(Scalar(1));
    for (std::size_t j = 0; j < cols; ++j) {
        img[j] = l.apply(xj);
        const UPoly<Scalar> g = gcd(den, img[j].den());
        den = (den * img[j].den()) / g;
        xj = xj * UPoly<Scalar>::x();
    }
    std::size_t maxdeg = 0;
    for (std::size_t j = 0; j < cols; ++j) {
        const DiffOperator::Fn cleared = img[j] * DiffOperator::Fn(den);
        if (!cleared.is_polynomial()) throw error("denominator clearing failed");
        num[j] = cleared.num();
        if (!num[j].is_zero()) maxdeg = std::max(maxdeg, static_cast<std::size_t>(num[j].deg()));
    }
    Matrix<Scalar> e(maxdeg + 1, std::vector<Scalar>(cols, Scalar(0)));
    for (std::size_t j = 0; j < cols; ++j)
        for (int k = 0; k <= num[j].deg(); ++k) e[static_cast<std::size_t>(k)][j] = num[j].coeff(k);
    for (const auto& v : nullspace(std::move(e))) sols.emplace_back(v);
    return sols;
}

// The a-priori degree bound d(n) = (4n)^(3n^2) used for proto-group
// equations in dimension n.
inline mpz_class proto_degree_bound(long n) {
    if (n < 1) throw error("degree bound is defined for dimension >= 1");
    mpz_class r;
    const mpz_class base = 4 * mpz_class(n);
    const unsigned long e = static_cast<unsigned long>(3 * n * n);
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

namespace detail {
inline bool single_token(const std::string& s) {
    if (s.empty()) return false;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const char ch = s[i];
        if (ch == '+' || ch == '*' || ch == '/' || ch == ' ' || ch == '^') return false;
        if (ch == '-' && i > 0) return false;
    }
    return true;
}
}  // namespace detail

inline std::string to_string(const DiffOperator& l) {
    if (l.is_zero()) return "0";
    const std::string sym = l.form() == OpForm::ddx ? "D" : "TH";
    std::string out;
    for (int i = l.order(); i >= 0; --i) {
        const auto c = l.coeff(static_cast<std::size_t>(i));
        if (c.is_zero()) continue;
        std::string cs = to_string(c);
        std::string term;
        if (i == 0) {
            term = detail::single_token(cs) ? cs : "(" + cs + ")";
        } else {
            const std::string dpow = i == 1 ? sym : sym + "^" + std::to_string(i);
            if (cs == "1")
                term = dpow;
            else if (cs == "-1")
                term = "-" + dpow;
            else
                term = (detail::single_token(cs) ? cs : "(" + cs + ")") + "*" + dpow;
        }
        if (out.empty()) {
            out = term;
        } else if (!term.empty() && term[0] == '-') {
            out += " - " + term.substr(1);
        } else {
            out += " + " + term;
        }
    }
    return out;
}

}  // namespace diffalg
