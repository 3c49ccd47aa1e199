#pragma once

// Elements of K[T]/(g) for a monic modulus g: the residue ring used to work
// with all conjugate roots of an irreducible-or-assumed-irreducible block at
// once.  Inverses exist exactly when the element is coprime to the modulus;
// attempting to invert a zero divisor throws reducible_error (the modulus
// just factored), which callers surface as an "assumed irreducible" failure.
//
// A ModPoly without a modulus behaves as a plain constant and adopts the
// other operand's modulus on binary operations, mirroring how rationals
// embed into every level of the scalar tower.

#include <memory>
#include <type_traits>

#include "errors.hpp"
#include "upoly.hpp"

namespace diffalg {

template <class K>
class ModPoly {
public:
    using Ctx = std::shared_ptr<const UPoly<K>>;

    ModPoly() = default;
    ModPoly(int v) : v_(K(v)) {}
    ModPoly(const K& v) : v_(v) {}
    ModPoly(Ctx ctx, UPoly<K> v) : ctx_(std::move(ctx)), v_(std::move(v)) { reduce(); }

    static Ctx make_ctx(UPoly<K> modulus) {
        if (modulus.deg() < 1) throw error("modulus must have degree >= 1");
        if (!(modulus.lc() == K(1))) throw not_monic("modulus must be monic");
        return std::make_shared<const UPoly<K>>(std::move(modulus));
    }
    static ModPoly generator(const Ctx& ctx) { return ModPoly(ctx, UPoly<K>::x()); }

    const Ctx& ctx() const { return ctx_; }
    const UPoly<K>& value() const { return v_; }
    bool is_zero() const { return v_.is_zero(); }
    int block_degree() const { return ctx_ ? ctx_->deg() : 1; }

    friend ModPoly operator+(const ModPoly& a, const ModPoly& b) {
        auto c = join(a, b);
        return ModPoly(c, a.v_ + b.v_);
    }
    friend ModPoly operator-(const ModPoly& a, const ModPoly& b) {
        auto c = join(a, b);
        return ModPoly(c, a.v_ - b.v_);
    }
    friend ModPoly operator-(const ModPoly& a) { return ModPoly(a.ctx_, -a.v_); }
    friend ModPoly operator*(const ModPoly& a, const ModPoly& b) {
        auto c = join(a, b);
        return ModPoly(c, a.v_ * b.v_);
    }
    friend ModPoly operator/(const ModPoly& a, const ModPoly& b) { return a * b.inverse(); }
    friend bool operator==(const ModPoly& a, const ModPoly& b) {
        join(a, b);  // assert compatibility
        return a.v_ == b.v_;
    }
    friend bool operator!=(const ModPoly& a, const ModPoly& b) { return !(a == b); }

    ModPoly inverse() const {
        if (v_.is_zero()) throw division_by_zero();
        if (!ctx_) return ModPoly(K(1) / v_.coeff(0));
        auto e = xgcd(v_, *ctx_);
        if (e.g.deg() != 0) {
            std::string factor;
            if constexpr (std::is_same_v<K, Scalar>) factor = to_string(e.g);
            throw reducible_error("block modulus factors: a zero divisor was inverted", factor);
        }
        return ModPoly(ctx_, e.u * (K(1) / e.g.coeff(0)));
    }

private:
    static const std::shared_ptr<const UPoly<K>>& join(const ModPoly& a, const ModPoly& b) {
        if (a.ctx_ && b.ctx_) {
            if (a.ctx_.get() != b.ctx_.get() && !(*a.ctx_ == *b.ctx_))
                throw descriptor_mismatch("residue classes over different moduli");
            return a.ctx_;
        }
        return a.ctx_ ? a.ctx_ : b.ctx_;
    }

    void reduce() {
        if (ctx_ && v_.deg() >= ctx_->deg()) v_ = v_ % *ctx_;
    }

    Ctx ctx_;
    UPoly<K> v_;
};

// Sum of v over all roots of the modulus: the trace of multiplication by v.
template <class K>
K trace_over_block(const ModPoly<K>& v) {
    if (!v.ctx()) return v.value().coeff(0);
    const int d = v.ctx()->deg();
    K tr{};
    UPoly<K> cur = v.value();  // v * T^0
    const UPoly<K>& m = *v.ctx();
    for (int j = 0; j < d; ++j) {
        tr = tr + cur.coeff(static_cast<std::size_t>(j));
        cur = (cur * UPoly<K>::x()) % m;
    }
    return tr;
}

// Product of v over all roots of the (monic) modulus: res(modulus, v).
template <class K>
K norm_over_block(const ModPoly<K>& v) {
    if (!v.ctx()) {
        return v.value().coeff(0);
    }
    return resultant(*v.ctx(), v.value());
}

}  // namespace diffalg
