#pragma once

// Truncated Laurent series over a field-like coefficient type K, plus local
// expansions of rational functions at points of the projective line and at
// symbolic root blocks.
//
// A series stores its leading exponent and a vector of consecutive known
// coefficients (its relative precision); arithmetic tracks how much of the
// result is actually known.  Normalization drops known-zero leading terms,
// so a series that became empty is only known to vanish up to its absolute
// precision -- callers that need its valuation re-expand with more terms.

#include <vector>

#include "errors.hpp"
#include "modpoly.hpp"
#include "upoly.hpp"

namespace diffalg {

template <class K>
class LaurentSeries {
public:
    LaurentSeries() : lead_(0) {}
    LaurentSeries(int lead, std::vector<K> coeffs) : lead_(lead), c_(std::move(coeffs)) {
        normalize();
    }

    // Exact polynomial in t, truncated to absolute precision `abs_prec`.
    static LaurentSeries from_poly(const UPoly<K>& p, int abs_prec) {
        std::vector<K> c;
        for (int i = 0; i < abs_prec; ++i) c.push_back(p.coeff(static_cast<std::size_t>(i)));
        return LaurentSeries(0, std::move(c));
    }
    static LaurentSeries monomial(const K& v, int e, int rel_prec) {
        std::vector<K> c(static_cast<std::size_t>(rel_prec), K{});
        if (!c.empty()) c[0] = v;
        return LaurentSeries(e, std::move(c));
    }

    int lead() const { return lead_; }                       // exponent of c_[0]
    int terms() const { return static_cast<int>(c_.size()); }
    int abs_prec() const { return lead_ + terms(); }         // coeffs known below this
    bool known_zero() const { return c_.empty(); }
    // valuation if visible within the known terms (c_[0] != 0 after normalize)
    bool has_valuation() const { return !c_.empty(); }
    int valuation() const {
        if (c_.empty()) throw error("series vanishes to working precision");
        return lead_;
    }

    K coeff(int e) const {  // coefficient of t^e; must be below abs_prec
        if (e >= abs_prec()) throw error("series coefficient beyond working precision");
        if (e < lead_) return K{};
        return c_[static_cast<std::size_t>(e - lead_)];
    }

    friend LaurentSeries operator+(const LaurentSeries& a, const LaurentSeries& b) {
        if (a.c_.empty() && b.c_.empty())
            return LaurentSeries(std::min(a.abs_prec(), b.abs_prec()), {});
        if (a.c_.empty()) return b.truncated_abs(std::min(a.abs_prec(), b.abs_prec()));
        if (b.c_.empty()) return a.truncated_abs(std::min(a.abs_prec(), b.abs_prec()));
        const int lead = std::min(a.lead_, b.lead_);
        const int prec = std::min(a.abs_prec(), b.abs_prec());
        std::vector<K> c(static_cast<std::size_t>(prec - lead), K{});
        for (int e = lead; e < prec; ++e) {
            K v{};
            if (e >= a.lead_ && e < a.abs_prec()) v = v + a.c_[static_cast<std::size_t>(e - a.lead_)];
            if (e >= b.lead_ && e < b.abs_prec()) v = v + b.c_[static_cast<std::size_t>(e - b.lead_)];
            c[static_cast<std::size_t>(e - lead)] = v;
        }
        return LaurentSeries(lead, std::move(c));
    }
    friend LaurentSeries operator-(const LaurentSeries& a) {
        LaurentSeries r = a;
        for (auto& v : r.c_) v = K{} - v;
        return r;
    }
    friend LaurentSeries operator-(const LaurentSeries& a, const LaurentSeries& b) { return a + (-b); }

    friend LaurentSeries operator*(const LaurentSeries& a, const LaurentSeries& b) {
        if (a.c_.empty() || b.c_.empty()) {
            // zero * (series with valuation >= lead) vanishes at least to...
            const int pa = a.abs_prec() + (b.c_.empty() ? b.abs_prec() : b.lead_);
            const int pb = b.abs_prec() + (a.c_.empty() ? a.abs_prec() : a.lead_);
            return LaurentSeries(std::min(pa, pb), {});
        }
        const int n = std::min(a.terms(), b.terms());
        std::vector<K> c(static_cast<std::size_t>(n), K{});
        for (int i = 0; i < a.terms() && i < n; ++i)
            for (int j = 0; j < b.terms() && i + j < n; ++j)
                c[static_cast<std::size_t>(i + j)] = c[static_cast<std::size_t>(i + j)] + a.c_[static_cast<std::size_t>(i)] * b.c_[static_cast<std::size_t>(j)];
        return LaurentSeries(a.lead_ + b.lead_, std::move(c));
    }

    LaurentSeries inverse() const {
        if (c_.empty()) throw division_by_zero("inverting a series that vanishes to working precision");
        const int n = terms();
        std::vector<K> w(static_cast<std::size_t>(n), K{});
        const K inv0 = K(1) / c_[0];
        w[0] = inv0;
        for (int k = 1; k < n; ++k) {
            K s{};
            for (int j = 1; j <= k; ++j) s = s + c_[static_cast<std::size_t>(j)] * w[static_cast<std::size_t>(k - j)];
            w[static_cast<std::size_t>(k)] = K{} - inv0 * s;
        }
        return LaurentSeries(-lead_, std::move(w));
    }
    friend LaurentSeries operator/(const LaurentSeries& a, const LaurentSeries& b) {
        return a * b.inverse();
    }

    // Square root given a square root s0 of the leading coefficient; the
    // leading exponent must be even.
    LaurentSeries sqrt_with(const K& s0) const {
        if (c_.empty()) throw error("sqrt of a series that vanishes to working precision");
        if (lead_ % 2 != 0) throw error("sqrt of a series with odd valuation");
        if (!(s0 * s0 == c_[0])) throw error("provided leading square root is wrong");
        const int n = terms();
        std::vector<K> s(static_cast<std::size_t>(n), K{});
        s[0] = s0;
        const K inv2s0 = K(1) / (K(2) * s0);
        for (int k = 1; k < n; ++k) {
            K acc = c_[static_cast<std::size_t>(k)];
            for (int j = 1; j < k; ++j) acc = acc - s[static_cast<std::size_t>(j)] * s[static_cast<std::size_t>(k - j)];
            s[static_cast<std::size_t>(k)] = acc * inv2s0;
        }
        return LaurentSeries(lead_ / 2, std::move(s));
    }

    // d/dt.
    LaurentSeries derivative() const {
        std::vector<K> c(c_.size(), K{});
        for (int i = 0; i < terms(); ++i) c[static_cast<std::size_t>(i)] = c_[static_cast<std::size_t>(i)] * K(lead_ + i);
        return LaurentSeries(lead_ - 1, std::move(c));
    }

    LaurentSeries shifted_by(int k) const {  // multiply by t^k
        LaurentSeries r = *this;
        r.lead_ += k;
        return r;
    }

    LaurentSeries truncated_abs(int abs) const {
        LaurentSeries r = *this;
        if (r.abs_prec() > abs) {
            const int keep = abs - r.lead_;
            if (keep <= 0) { r.c_.clear(); r.lead_ = abs; }
            else r.c_.resize(static_cast<std::size_t>(keep));
        }
        return r;
    }

private:
    void normalize() {
        while (!c_.empty() && detail::kz(c_[0])) {
            c_.erase(c_.begin());
            ++lead_;
        }
    }

    int lead_;
    std::vector<K> c_;
};

// Evaluate a polynomial at a series argument (Horner).  The argument must
// have nonnegative leading exponent for the precision accounting to hold.
template <class K>
LaurentSeries<K> eval_poly_at_series(const UPoly<K>& p, const LaurentSeries<K>& s, int rel_prec) {
    LaurentSeries<K> r(rel_prec, {});  // zero to absolute precision rel_prec
    for (int i = p.deg(); i >= 0; --i)
        r = r * s + LaurentSeries<K>::monomial(p.coeff(static_cast<std::size_t>(i)), 0, rel_prec);
    return r.truncated_abs(rel_prec);
}

// Expansion of u in the local parameter t = x - p (finite p): exact leading
// exponent, `rel_prec` correct coefficients.
template <class K>
LaurentSeries<K> expand_at(const RatF<K>& u, const K& p, int rel_prec) {
    if (u.is_zero()) return LaurentSeries<K>(rel_prec, {});
    const UPoly<K> ns = u.num().shifted(p), ds = u.den().shifted(p);
    const int vn = root_multiplicity(ns, K{}), vd = root_multiplicity(ds, K{});
    // strip t^v from both parts
    auto strip = [](const UPoly<K>& q, int v) {
        std::vector<K> c(q.coeffs().begin() + v, q.coeffs().end());
        return UPoly<K>(std::move(c));
    };
    const UPoly<K> n1 = strip(ns, vn), d1 = strip(ds, vd);
    auto sn = LaurentSeries<K>::from_poly(n1, rel_prec);
    auto sd = LaurentSeries<K>::from_poly(d1, rel_prec);
    return (sn * sd.inverse()).shifted_by(vn - vd);
}

// Expansion of u at infinity in the local parameter t = 1/x.
inline LaurentSeries<Scalar> expand_at_infinity(const RatF<Scalar>& u, int rel_prec) {
    return expand_at(u.subst_inverse(), Scalar(0), rel_prec);
}

inline LaurentSeries<Scalar> expand_at(const RatF<Scalar>& u, const LinePoint& p, int rel_prec) {
    if (p.infinite) return expand_at_infinity(u, rel_prec);
    return expand_at(u, p.x0, rel_prec);
}

// Expansion of u at the block of roots of a monic squarefree modulus g:
// t = x - T over K[T]/(g).  Denominator leading coefficients that are zero
// divisors surface as reducible_error from ModPoly::inverse.
template <class K>
LaurentSeries<ModPoly<K>> expand_at_block(const RatF<K>& u, const typename ModPoly<K>::Ctx& ctx,
                                          int rel_prec) {
    if (u.is_zero()) return LaurentSeries<ModPoly<K>>(rel_prec, {});
    const ModPoly<K> T = ModPoly<K>::generator(ctx);
    // Taylor coefficients of q(T + t): q^{(j)}(T)/j! for j < rel_prec.
    auto taylor = [&](const UPoly<K>& q) {
        std::vector<ModPoly<K>> c(static_cast<std::size_t>(rel_prec), ModPoly<K>{});
        UPoly<K> d = q;
        K fact(1);
        for (int j = 0; j < rel_prec && !d.is_zero(); ++j) {
            if (j > 0) {
                d = d.derivative();
                fact = fact * K(j);
            }
            ModPoly<K> val;
            for (int i = d.deg(); i >= 0; --i)
                val = val * T + ModPoly<K>(ctx, UPoly<K>(d.coeff(static_cast<std::size_t>(i))));
            c[static_cast<std::size_t>(j)] = val * ModPoly<K>(K(1) / fact);
        }
        return LaurentSeries<ModPoly<K>>(0, std::move(c));
    };
    auto sn = taylor(u.num());
    auto sd = taylor(u.den());
    if (!sn.has_valuation() && !u.num().is_zero()) {
        // numerator vanishes identically on the block to this precision; its
        // true valuation exceeds rel_prec only if g^rel_prec divides it,
        // which a degree check rules out for sane precisions
        throw error("block expansion lost the numerator; raise the precision");
    }
    return sn * sd.inverse();
}

}  // namespace diffalg
