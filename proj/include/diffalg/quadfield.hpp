#pragma once

// The quadratic function field K(x)(z) with z^2 = f(x) for a squarefree
// polynomial f, as a differential field extending (K(x), d/dx) by
// delta(z) = f'/(2z) = (f'/2f) z.  Elements are a + b z with rational
// function parts a, b; they satisfy the operator set the generic linear
// algebra and gauge machinery expects (ring ops, division, ==, int and
// default construction), so Matrix<QuadElt> works out of the box.
//
// An element without a field handle behaves as a plain rational function
// and adopts the other operand's field on binary operations, the same
// convention ModPoly and the scalar tower use.

#include <memory>
#include <string>
#include <utility>

#include "errors.hpp"
#include "upoly.hpp"

namespace diffalg {

class QuadElt;

namespace detail {
struct QuadFieldNode {
    UPoly<Scalar> f;          // z^2 = f, squarefree, deg >= 1
    Scalar lc_root;           // c with c^2 = lc(f); 1 when f is monic
    RatF<Scalar> dlog_half;   // f'/(2f): delta(z) = dlog_half * z
    std::string name;         // printed generator name
};
using QuadCtx = std::shared_ptr<const QuadFieldNode>;

inline const QuadCtx& quad_join(const QuadCtx& a, const QuadCtx& b) {
    if (a && b) {
        if (a.get() != b.get() && !(a->f == b->f))
            throw descriptor_mismatch("elements of different quadratic function fields");
        return a;
    }
    return a ? a : b;
}
}  // namespace detail

// Handle describing the field; elements are made through it.
class QuadField {
public:
    QuadField() = default;
    explicit QuadField(UPoly<Scalar> f, std::string name = "z") {
        if (f.deg() < 1) throw error("quadratic extension needs deg f >= 1");
        const auto sq = xgcd(f, f.derivative());
        if (sq.g.deg() > 0)
            throw not_squarefree_error("branch polynomial has a repeated root: " +
                                       to_string(sq.g));
        Scalar c(1);
        if (!(f.lc() == Scalar(1))) {
            auto r = try_sqrt(f.lc());
            if (!r)
                throw error("leading coefficient of the branch polynomial must be a square "
                            "in the scalar tower");
            c = *r;
        }
        const RatF<Scalar> rf{f};
        detail::QuadFieldNode node{std::move(f), std::move(c),
                                   RatF<Scalar>(rf.num().derivative()) /
                                       (RatF<Scalar>(Scalar(2)) * rf),
                                   std::move(name)};
        n_ = std::make_shared<const detail::QuadFieldNode>(std::move(node));
    }

    bool valid() const { return static_cast<bool>(n_); }
    const UPoly<Scalar>& f() const { return n_->f; }
    // monic model: z = lc_root() * zm with zm^2 = monic_f()
    const Scalar& lc_root() const { return n_->lc_root; }
    UPoly<Scalar> monic_f() const { return n_->f * (Scalar(1) / n_->f.lc()); }
    const std::string& gen_name() const { return n_->name; }

    inline QuadElt z() const;
    inline QuadElt make(RatF<Scalar> a, RatF<Scalar> b) const;  // a + b z
    inline QuadElt from(RatF<Scalar> a) const;

    friend bool operator==(const QuadField& a, const QuadField& b) {
        if (!a.n_ || !b.n_) return a.n_ == b.n_;
        return a.n_.get() == b.n_.get() || a.n_->f == b.n_->f;
    }

private:
    detail::QuadCtx n_;
    friend class QuadElt;
    friend QuadField quad_field_of(const QuadElt&);
};

class QuadElt {
public:
    QuadElt() {}
    QuadElt(int v) : a_(Scalar(v)) {}
    explicit QuadElt(Scalar v) : a_(std::move(v)) {}
    explicit QuadElt(RatF<Scalar> v) : a_(std::move(v)) {}
    QuadElt(detail::QuadCtx ctx, RatF<Scalar> a, RatF<Scalar> b)
        : ctx_(std::move(ctx)), a_(std::move(a)), b_(std::move(b)) {
        if (!ctx_ && !b_.is_zero())
            throw error("algebraic part requires a quadratic field handle");
    }

    const RatF<Scalar>& rat_part() const { return a_; }
    const RatF<Scalar>& alg_part() const { return b_; }
    bool is_zero() const { return a_.is_zero() && b_.is_zero(); }
    bool is_rational() const { return b_.is_zero(); }

    QuadElt conj() const { return QuadElt(ctx_, a_, RatF<Scalar>{} - b_); }
    // a^2 - b^2 f = (a + b z)(a - b z), a rational function
    RatF<Scalar> norm() const {
        if (b_.is_zero()) return a_ * a_;
        return a_ * a_ - b_ * b_ * RatF<Scalar>(ctx_->f);
    }

    friend QuadElt operator+(const QuadElt& a, const QuadElt& b) {
        return QuadElt(detail::quad_join(a.ctx_, b.ctx_), a.a_ + b.a_, a.b_ + b.b_);
    }
    friend QuadElt operator-(const QuadElt& a, const QuadElt& b) {
        return QuadElt(detail::quad_join(a.ctx_, b.ctx_), a.a_ - b.a_, a.b_ - b.b_);
    }
    friend QuadElt operator-(const QuadElt& a) {
        return QuadElt(a.ctx_, RatF<Scalar>{} - a.a_, RatF<Scalar>{} - a.b_);
    }
    friend QuadElt operator*(const QuadElt& a, const QuadElt& b) {
        const auto& c = detail::quad_join(a.ctx_, b.ctx_);
        RatF<Scalar> ra = a.a_ * b.a_;
        if (!a.b_.is_zero() && !b.b_.is_zero()) ra = ra + a.b_ * b.b_ * RatF<Scalar>(c->f);
        return QuadElt(c, std::move(ra), a.a_ * b.b_ + a.b_ * b.a_);
    }
    QuadElt inverse() const {
        if (is_zero()) throw division_by_zero("inverting the zero function");
        const RatF<Scalar> n = norm();  // nonzero: f squarefree is not a square
        return QuadElt(ctx_, a_ / n, RatF<Scalar>{} - b_ / n);
    }
    friend QuadElt operator/(const QuadElt& a, const QuadElt& b) { return a * b.inverse(); }

    friend bool operator==(const QuadElt& a, const QuadElt& b) {
        detail::quad_join(a.ctx_, b.ctx_);
        return a.a_ == b.a_ && a.b_ == b.b_;
    }
    friend bool operator!=(const QuadElt& a, const QuadElt& b) { return !(a == b); }

    // delta(a + b z) = a' + (b' + b f'/(2f)) z
    QuadElt derivative() const {
        if (b_.is_zero()) return QuadElt(ctx_, a_.derivative(), {});
        return QuadElt(ctx_, a_.derivative(), b_.derivative() + b_ * ctx_->dlog_half);
    }

private:
    detail::QuadCtx ctx_;
    RatF<Scalar> a_, b_;
    friend class QuadField;
    friend QuadField quad_field_of(const QuadElt&);
};

inline QuadElt QuadField::z() const { return QuadElt(n_, {}, RatF<Scalar>(Scalar(1))); }
inline QuadElt QuadField::make(RatF<Scalar> a, RatF<Scalar> b) const {
    return QuadElt(n_, std::move(a), std::move(b));
}
inline QuadElt QuadField::from(RatF<Scalar> a) const { return QuadElt(n_, std::move(a), {}); }

inline QuadField quad_field_of(const QuadElt& e) {
    QuadField f;
    f.n_ = e.ctx_;
    return f;
}

struct QuadDeriv {
    QuadElt operator()(const QuadElt& e) const { return e.derivative(); }
};

// Composition: evaluate a polynomial / rational function at a field element.
inline QuadElt eval_at(const UPoly<Scalar>& p, const QuadElt& t) {
    QuadElt acc;
    for (int i = p.deg(); i >= 0; --i) acc = acc * t + QuadElt(p.coeff(i));
    return acc;
}

inline QuadElt eval_at(const RatF<Scalar>& r, const QuadElt& t) {
    return eval_at(r.num(), t) / eval_at(r.den(), t);
}

inline std::string to_string(const QuadElt& e, const std::string& var = "x") {
    if (e.is_rational()) return to_string(e.rat_part(), var);
    const std::string name = quad_field_of(e).gen_name();
    std::string b = to_string(e.alg_part(), var);
    std::string bz;
    if (b == "1") bz = name;
    else if (b == "-1") bz = "-" + name;
    else {
        if (detail::needs_parens(b)) b = "(" + b + ")";
        bz = b + "*" + name;
    }
    if (e.rat_part().is_zero()) return bz;
    if (!bz.empty() && bz[0] == '-')
        return to_string(e.rat_part(), var) + " - " + bz.substr(1);
    return to_string(e.rat_part(), var) + " + " + bz;
}

}  // namespace diffalg
