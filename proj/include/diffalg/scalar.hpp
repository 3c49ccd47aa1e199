#pragma once

// Exact scalar arithmetic in a tower of fields
//
//   Q  ->  Q(p1)(p2)...  ->  simple algebraic extensions on top of that,
//
// where each parameter level is a rational-function field in one named
// transcendental and each extension level is K[y]/(m(y)) for a monic
// minimal polynomial m.  Every value carries a descriptor of the field it
// lives in; mixed-field arithmetic lifts along the ancestor chain and
// refuses anything else.  All representations are canonical, so equality
// is structural and decidable.

#include <gmpxx.h>

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "polyvec.hpp"

namespace diffalg {

enum class FieldKind { rationals, parameter, extension };

struct FieldNode;
using Field = std::shared_ptr<const FieldNode>;

const Field& rationals();
bool field_eq(const Field& a, const Field& b);

class Scalar {
public:
    Scalar() : fld_(rationals()) {}                       // zero in Q
    Scalar(int v) : fld_(rationals()), q_(v) {}
    Scalar(long v) : fld_(rationals()), q_(v) {}
    // mpq_class(n, d) does not canonicalize on its own; do it here so the
    // reduced-fraction invariant holds no matter how the caller built v.
    explicit Scalar(mpq_class v) : fld_(rationals()), q_(std::move(v)) {
        q_.canonicalize();
    }
    explicit Scalar(const mpz_class& v) : fld_(rationals()), q_(v) {}

    const Field& field() const { return fld_; }
    FieldKind kind() const;

    bool is_zero() const;
    bool is_one() const;

    // Representation (read-only outside this header):
    Field fld_;
    mpq_class q_;             // rationals level
    std::vector<Scalar> a_;   // parameter: numerator / extension: residue coeffs
    std::vector<Scalar> b_;   // parameter: monic denominator

    friend bool operator==(const Scalar& x, const Scalar& y);
    friend bool operator!=(const Scalar& x, const Scalar& y) { return !(x == y); }
};

struct FieldNode {
    FieldKind kind = FieldKind::rationals;
    Field base;                   // null iff kind == rationals
    std::string name;             // generator name (parameter / extension)
    std::vector<Scalar> minpoly;  // extension only: monic, coefficients over base
    bool assumed_irreducible = false;  // degree >= 3 extension: caller-asserted
    int depth = 0;                // number of levels above Q
};

inline const Field& rationals() {
    static const Field q = std::make_shared<FieldNode>();
    return q;
}

inline FieldKind Scalar::kind() const { return fld_->kind; }

inline bool Scalar::is_zero() const {
    if (fld_->kind == FieldKind::rationals) return sgn(q_) == 0;
    return a_.empty();
}

inline bool field_eq(const Field& a, const Field& b) {
    if (a.get() == b.get()) return true;
    if (!a || !b) return false;
    if (a->kind != b->kind || a->depth != b->depth || a->name != b->name) return false;
    if (a->kind == FieldKind::rationals) return true;
    if (a->kind == FieldKind::extension) {
        if (a->minpoly.size() != b->minpoly.size()) return false;
        for (std::size_t i = 0; i < a->minpoly.size(); ++i)
            if (!(a->minpoly[i] == b->minpoly[i])) return false;
    }
    return field_eq(a->base, b->base);
}

namespace detail {

inline bool is_ancestor(const Field& anc, const Field& f) {
    Field cur = f;
    while (cur && cur->depth > anc->depth) cur = cur->base;
    return cur && field_eq(anc, cur);
}

inline Field common_field(const Field& a, const Field& b) {
    if (field_eq(a, b)) return a;
    if (a->depth >= b->depth && is_ancestor(b, a)) return a;
    if (b->depth > a->depth && is_ancestor(a, b)) return b;
    throw descriptor_mismatch("scalars live in incompatible field towers");
}

}  // namespace detail

// Lift a value into a field containing its own field as an ancestor.
inline Scalar lift_to(const Scalar& v, const Field& f) {
    if (field_eq(v.fld_, f)) return v;
    if (!detail::is_ancestor(v.fld_, f))
        throw descriptor_mismatch("cannot lift scalar into unrelated field");
    Scalar inner = lift_to(v, f->base);
    Scalar out;
    out.fld_ = f;
    if (!inner.is_zero()) out.a_ = {inner};
    if (f->kind == FieldKind::parameter) out.b_ = {lift_to(Scalar(1), f->base)};
    return out;
}

namespace detail {

inline Scalar sc_zero(const Field& f) { return lift_to(Scalar(0), f); }
inline Scalar sc_one(const Field& f) { return lift_to(Scalar(1), f); }

// Canonical parameter-level fraction: coprime, monic denominator, zero as
// empty numerator over denominator 1.
inline void normalize_fraction(std::vector<Scalar>& num, std::vector<Scalar>& den, const Field& base) {
    pv_norm(num);
    pv_norm(den);
    if (den.empty()) throw division_by_zero();
    if (num.empty()) {
        den = {sc_one(base)};
        return;
    }
    auto g = pv_gcd(num, den);
    if (pv_deg(g) > 0) {
        num = pv_divmod(num, g).first;
        den = pv_divmod(den, g).first;
    }
    Scalar lc = den.back();
    if (!lc.is_one()) {
        const std::vector<Scalar> c{lc};
        num = pv_divmod(num, c).first;
        den = pv_divmod(den, c).first;
    }
}

inline Scalar make_param(const Field& f, std::vector<Scalar> num, std::vector<Scalar> den) {
    normalize_fraction(num, den, f->base);
    Scalar out;
    out.fld_ = f;
    out.a_ = std::move(num);
    out.b_ = std::move(den);
    return out;
}

inline Scalar make_ext(const Field& f, std::vector<Scalar> coeffs) {
    pv_norm(coeffs);
    if (pv_deg(coeffs) >= pv_deg(f->minpoly)) coeffs = pv_rem(std::move(coeffs), f->minpoly);
    Scalar out;
    out.fld_ = f;
    out.a_ = std::move(coeffs);
    return out;
}

}  // namespace detail

inline bool operator==(const Scalar& x, const Scalar& y) {
    Field f = detail::common_field(x.fld_, y.fld_);
    const Scalar xl = lift_to(x, f), yl = lift_to(y, f);
    if (f->kind == FieldKind::rationals) return xl.q_ == yl.q_;
    if (xl.a_.size() != yl.a_.size() || xl.b_.size() != yl.b_.size()) return false;
    for (std::size_t i = 0; i < xl.a_.size(); ++i)
        if (!(xl.a_[i] == yl.a_[i])) return false;
    for (std::size_t i = 0; i < xl.b_.size(); ++i)
        if (!(xl.b_[i] == yl.b_[i])) return false;
    return true;
}

inline bool Scalar::is_one() const {
    if (fld_->kind == FieldKind::rationals) return q_ == 1;
    if (a_.size() != 1 || !a_[0].is_one()) return false;
    if (fld_->kind == FieldKind::parameter) return b_.size() == 1 && b_[0].is_one();
    return true;
}

// --------------------------------------------------------------- arithmetic

inline Scalar operator+(const Scalar& x, const Scalar& y) {
    using namespace detail;
    Field f = common_field(x.fld_, y.fld_);
    const Scalar xl = lift_to(x, f), yl = lift_to(y, f);
    switch (f->kind) {
        case FieldKind::rationals: return Scalar(mpq_class(xl.q_ + yl.q_));
        case FieldKind::parameter: {
            auto num = pv_add(pv_mul(xl.a_, yl.b_), pv_mul(yl.a_, xl.b_));
            auto den = pv_mul(xl.b_, yl.b_);
            return make_param(f, std::move(num), std::move(den));
        }
        case FieldKind::extension: return make_ext(f, pv_add(xl.a_, yl.a_));
    }
    throw error("unreachable");
}

inline Scalar operator-(const Scalar& x) {
    Scalar out = x;
    if (out.fld_->kind == FieldKind::rationals) {
        out.q_ = -out.q_;
    } else {
        for (auto& c : out.a_) c = -c;
    }
    return out;
}

inline Scalar operator-(const Scalar& x, const Scalar& y) { return x + (-y); }

inline Scalar operator*(const Scalar& x, const Scalar& y) {
    using namespace detail;
    Field f = common_field(x.fld_, y.fld_);
    const Scalar xl = lift_to(x, f), yl = lift_to(y, f);
    switch (f->kind) {
        case FieldKind::rationals: return Scalar(mpq_class(xl.q_ * yl.q_));
        case FieldKind::parameter:
            return make_param(f, pv_mul(xl.a_, yl.a_), pv_mul(xl.b_, yl.b_));
        case FieldKind::extension: return make_ext(f, pv_mul(xl.a_, yl.a_));
    }
    throw error("unreachable");
}

inline Scalar inverse(const Scalar& x) {
    using namespace detail;
    if (x.is_zero()) throw division_by_zero();
    const Field& f = x.fld_;
    switch (f->kind) {
        case FieldKind::rationals: return Scalar(mpq_class(1 / x.q_));
        case FieldKind::parameter: return make_param(f, x.b_, x.a_);
        case FieldKind::extension: {
            auto e = pv_xgcd(x.a_, f->minpoly);
            if (pv_deg(e.g) != 0)
                throw reducible_error("minimal polynomial of '" + f->name +
                                      "' factors (found while inverting)");
            const Scalar inv_g = inverse(e.g[0]);
            return make_ext(f, pv_scale(std::move(e.u), inv_g));
        }
    }
    throw error("unreachable");
}

inline Scalar operator/(const Scalar& x, const Scalar& y) {
    Field f = detail::common_field(x.fld_, y.fld_);
    return lift_to(x, f) * inverse(lift_to(y, f));
}

inline Scalar& operator+=(Scalar& x, const Scalar& y) { return x = x + y; }
inline Scalar& operator-=(Scalar& x, const Scalar& y) { return x = x - y; }
inline Scalar& operator*=(Scalar& x, const Scalar& y) { return x = x * y; }
inline Scalar& operator/=(Scalar& x, const Scalar& y) { return x = x / y; }

inline Scalar pow(Scalar base, long e) {
    if (e < 0) {
        base = inverse(base);
        e = -e;
    }
    Scalar r(1);
    while (e) {
        if (e & 1) r = r * base;
        base = base * base;
        e >>= 1;
    }
    return r;
}

// ------------------------------------------------------------ construction

inline Field add_parameter(const Field& base, const std::string& name) {
    for (Field c = base; c; c = c->base)
        if (c->name == name) throw error("generator name '" + name + "' already in use");
    auto node = std::make_shared<FieldNode>();
    node->kind = FieldKind::parameter;
    node->base = base;
    node->name = name;
    node->depth = base->depth + 1;
    return node;
}

inline Field field_with_parameters(const std::vector<std::string>& names) {
    Field f = rationals();
    for (const auto& n : names) f = add_parameter(f, n);
    return f;
}

std::optional<Scalar> try_sqrt(const Scalar& v);

// Adjoin a root of a monic polynomial (coefficients over `base`, constant
// term first).  Irreducibility is decided here up to degree 2; degree >= 3
// requires the caller's assertion, which is recorded on the descriptor.
inline Field adjoin_root(const Field& base, std::vector<Scalar> minpoly, const std::string& name,
                         bool caller_asserts_irreducible = false) {
    using namespace detail;
    for (Field c = base; c; c = c->base)
        if (c->name == name) throw error("generator name '" + name + "' already in use");
    for (auto& c : minpoly) c = lift_to(c, base);
    pv_norm(minpoly);
    const int d = pv_deg(minpoly);
    if (d < 2) throw error("adjoin_root needs a minimal polynomial of degree >= 2");
    if (!minpoly.back().is_one()) throw not_monic("minimal polynomial must be monic");
    auto g = pv_gcd(minpoly, pv_derivative(minpoly));
    if (pv_deg(g) > 0) throw not_squarefree_error("minimal polynomial has a repeated root");
    bool assumed = false;
    if (d == 2) {
        // y^2 + p y + q splits over the base iff p^2 - 4q is a square there.
        const Scalar p = minpoly[1], q = minpoly[0];
        if (try_sqrt(p * p - Scalar(4) * q))
            throw reducible_error("quadratic minimal polynomial splits over the base field");
    } else {
        if (!caller_asserts_irreducible)
            throw error("irreducibility is only decided up to degree 2; "
                        "degree >= 3 adjunction requires the caller's assertion");
        assumed = true;
    }
    auto node = std::make_shared<FieldNode>();
    node->kind = FieldKind::extension;
    node->base = base;
    node->name = name;
    node->minpoly = std::move(minpoly);
    node->assumed_irreducible = assumed;
    node->depth = base->depth + 1;
    return node;
}

// The generator of the tower level carrying `name`, lifted into `f`.
inline Scalar generator(const Field& f, const std::string& name) {
    Field level = f;
    while (level && level->kind != FieldKind::rationals && level->name != name) level = level->base;
    if (!level || level->kind == FieldKind::rationals)
        throw error("no generator named '" + name + "' in this field");
    Scalar g;
    g.fld_ = level;
    g.a_ = {detail::sc_zero(level->base), detail::sc_one(level->base)};
    if (level->kind == FieldKind::parameter) g.b_ = {detail::sc_one(level->base)};
    return lift_to(g, f);
}

inline Scalar generator(const Field& f) {
    if (f->kind == FieldKind::rationals) throw error("Q has no generator");
    return generator(f, f->name);
}

// Does the tower contain a generator with this name?
inline bool has_generator(const Field& f, const std::string& name) {
    for (Field c = f; c && c->kind != FieldKind::rationals; c = c->base)
        if (c->name == name) return true;
    return false;
}

// ----------------------------------------------------------------- queries

inline std::optional<mpq_class> as_rational(const Scalar& v) {
    switch (v.fld_->kind) {
        case FieldKind::rationals: return v.q_;
        case FieldKind::parameter:
            if (!(v.b_.size() == 1 && v.b_[0].is_one())) return std::nullopt;
            [[fallthrough]];
        case FieldKind::extension:
            if (v.a_.empty()) return mpq_class(0);
            if (v.a_.size() > 1) return std::nullopt;
            return as_rational(v.a_[0]);
    }
    return std::nullopt;
}

inline std::optional<mpz_class> is_rational_integer(const Scalar& v) {
    auto q = as_rational(v);
    if (!q || q->get_den() != 1) return std::nullopt;
    return q->get_num();
}

// ------------------------------------------------------------------- sqrt

inline std::optional<Scalar> try_sqrt(const Scalar& v) {
    using namespace detail;
    if (v.is_zero()) return sc_zero(v.fld_);
    const Field& f = v.fld_;
    switch (f->kind) {
        case FieldKind::rationals: {
            if (sgn(v.q_) < 0) return std::nullopt;
            const mpz_class num = v.q_.get_num(), den = v.q_.get_den();
            if (!mpz_perfect_square_p(num.get_mpz_t()) || !mpz_perfect_square_p(den.get_mpz_t()))
                return std::nullopt;
            mpz_class rn, rd;
            mpz_sqrt(rn.get_mpz_t(), num.get_mpz_t());
            mpz_sqrt(rd.get_mpz_t(), den.get_mpz_t());
            return Scalar(mpq_class(rn, rd));
        }
        case FieldKind::parameter: {
            // v = c * (monic)/(monic): a square iff every part is one.
            const Scalar lcn = v.a_.back(), lcd = v.b_.back();
            const Scalar c = lcn / lcd;
            auto sc = try_sqrt(c);
            if (!sc) return std::nullopt;
            auto num = pv_scale(v.a_, inverse(lcn));
            std::vector<Scalar> sn, sd;
            if (!pv_sqrt(num, sn) || !pv_sqrt(v.b_, sd)) return std::nullopt;
            return make_param(f, pv_scale(std::move(sn), *sc), std::move(sd));
        }
        case FieldKind::extension: {
            if (pv_deg(f->minpoly) != 2) return std::nullopt;  // decided only on quadratic levels
            // Completed square: mu = theta + p/2 has mu^2 = p^2/4 - q =: D.
            const Scalar p = f->minpoly[1], q0 = f->minpoly[0];
            const Scalar half(mpq_class(1, 2));
            const Scalar D = p * p * Scalar(mpq_class(1, 4)) - q0;
            const Scalar v0 = v.a_.size() > 0 ? v.a_[0] : sc_zero(f->base);
            const Scalar v1 = v.a_.size() > 1 ? v.a_[1] : sc_zero(f->base);
            const Scalar w0 = v0 - v1 * p * half, w1 = v1;
            auto assemble = [&](const Scalar& x, const Scalar& y) {
                return make_ext(f, {x + y * p * half, y});  // x + y*mu in theta coordinates
            };
            if (w1.is_zero()) {
                if (auto x = try_sqrt(w0)) return assemble(*x, sc_zero(f->base));
                if (!D.is_zero())
                    if (auto y = try_sqrt(w0 / D)) return assemble(sc_zero(f->base), *y);
                return std::nullopt;
            }
            // (x + y mu)^2 = v needs x^2 to solve X^2 - w0 X + w1^2 D / 4 = 0.
            auto t = try_sqrt(w0 * w0 - w1 * w1 * D);
            if (!t) return std::nullopt;
            for (int sign = 0; sign < 2; ++sign) {
                const Scalar X = (sign ? (w0 - *t) : (w0 + *t)) * half;
                if (X.is_zero()) continue;
                if (auto x = try_sqrt(X)) {
                    const Scalar y = w1 / (Scalar(2) * *x);
                    return assemble(*x, y);
                }
            }
            return std::nullopt;
        }
    }
    return std::nullopt;
}

// sqrt within the tower if it exists, otherwise adjoin one.  The new
// generator is named "i" when v == -1, else "w<n>" with n fresh.
inline std::pair<Field, Scalar> sqrt_or_adjoin(const Scalar& v, const Field& f) {
    const Scalar vl = lift_to(v, f);
    if (auto s = try_sqrt(vl)) return {f, *s};
    std::string name;
    if (vl == lift_to(Scalar(-1), f) && !has_generator(f, "i")) name = "i";
    for (int n = 1; name.empty(); ++n) {
        std::string cand = "w" + std::to_string(n);
        if (!has_generator(f, cand)) name = cand;
    }
    Field ext = adjoin_root(f, {-vl, detail::sc_zero(f), detail::sc_one(f)}, name);
    return {ext, generator(ext)};
}

// ---------------------------------------------------------------- printing

std::string to_string(const Scalar& v);

namespace detail {

inline bool needs_parens(const std::string& s) {
    int depth = 0;
    for (std::size_t i = 0; i < s.size(); ++i) {
        const char c = s[i];
        if (c == '(') ++depth;
        else if (c == ')') --depth;
        else if (depth == 0 && (c == '+' || c == '*' || c == '/' || (c == '-' && i > 0)))
            return true;
    }
    return !s.empty() && s[0] == '-';
}

inline std::string poly_to_string(const std::vector<Scalar>& coeffs, const std::string& var) {
    if (coeffs.empty()) return "0";
    std::string out;
    for (std::size_t i = 0; i < coeffs.size(); ++i) {
        if (coeffs[i].is_zero()) continue;
        const std::string cs = to_string(coeffs[i]);
        std::string term;
        if (i == 0) {
            term = cs;
        } else {
            const std::string mon = var + (i > 1 ? "^" + std::to_string(i) : "");
            if (cs == "1") term = mon;
            else if (cs == "-1") term = "-" + mon;
            else term = (needs_parens(cs) ? "(" + cs + ")" : cs) + "*" + mon;
        }
        if (out.empty()) out = term;
        else if (!term.empty() && term[0] == '-') out += term;
        else out += "+" + term;
    }
    return out.empty() ? "0" : out;
}

}  // namespace detail

inline std::string to_string(const Scalar& v) {
    using namespace detail;
    switch (v.fld_->kind) {
        case FieldKind::rationals: return v.q_.get_str();
        case FieldKind::parameter: {
            std::string n = poly_to_string(v.a_, v.fld_->name);
            if (v.b_.size() == 1 && v.b_[0].is_one()) return n;
            std::string d = poly_to_string(v.b_, v.fld_->name);
            if (needs_parens(n)) n = "(" + n + ")";
            if (needs_parens(d) || d.find('^') != std::string::npos || d.find(v.fld_->name) != std::string::npos)
                d = "(" + d + ")";
            return n + "/" + d;
        }
        case FieldKind::extension: return poly_to_string(v.a_, v.fld_->name);
    }
    return "?";
}

inline std::string to_string(const Field& f) {
    if (f->kind == FieldKind::rationals) return "Q";
    const std::string base = to_string(f->base);
    if (f->kind == FieldKind::parameter) return base + "(" + f->name + ")";
    return base + "[" + f->name + "]";
}

// ----------------------------------------------------------- specialization

// A partial map of towers: parameters go to chosen values in the target,
// extension generators go to the same-named generators of the target.
class SpecializationMap {
public:
    SpecializationMap(Field source, Field target, std::map<std::string, Scalar> values)
        : src_(std::move(source)), dst_(std::move(target)), values_(std::move(values)) {
        std::vector<Field> chain;
        for (Field c = src_; c->kind != FieldKind::rationals; c = c->base) chain.push_back(c);
        for (auto it = chain.rbegin(); it != chain.rend(); ++it) {
            const Field& lvl = *it;
            if (lvl->kind == FieldKind::parameter) {
                auto v = values_.find(lvl->name);
                if (v == values_.end())
                    throw descriptor_mismatch("no value assigned to parameter '" + lvl->name + "'");
                if (!field_eq(v->second.field(), dst_) && !detail::is_ancestor(v->second.field(), dst_))
                    throw descriptor_mismatch("value of '" + lvl->name + "' lives outside the target field");
            } else {
                Field tgt = dst_;
                while (tgt && tgt->kind != FieldKind::rationals && tgt->name != lvl->name) tgt = tgt->base;
                if (!tgt || tgt->kind != FieldKind::extension)
                    throw descriptor_mismatch("target tower lacks extension '" + lvl->name + "'");
                if (tgt->minpoly.size() != lvl->minpoly.size())
                    throw descriptor_mismatch("extension '" + lvl->name + "' has a mismatched minimal polynomial");
                for (std::size_t i = 0; i < lvl->minpoly.size(); ++i)
                    if (!(apply(lvl->minpoly[i]) == lift_to(tgt->minpoly[i], dst_)))
                        throw descriptor_mismatch("extension '" + lvl->name + "' has a mismatched minimal polynomial");
            }
        }
    }

    const Field& source() const { return src_; }
    const Field& target() const { return dst_; }

    Scalar apply(const Scalar& v) const {
        const Field& f = v.field();
        if (f->kind == FieldKind::rationals) return lift_to(Scalar(v.q_), dst_);
        if (!detail::is_ancestor(f, src_))
            throw descriptor_mismatch("scalar lives outside the source tower");
        if (f->kind == FieldKind::parameter) {
            const Scalar val = lift_to(values_.at(f->name), dst_);
            const Scalar num = eval_poly(v.a_, val);
            const Scalar den = eval_poly(v.b_, val);
            if (den.is_zero())
                throw denominator_vanishes("denominator vanishes at the specialization point");
            return num / den;
        }
        return eval_poly(v.a_, generator(dst_, f->name));
    }

    std::optional<Scalar> try_apply(const Scalar& v) const {
        try {
            return apply(v);
        } catch (const denominator_vanishes&) {
            return std::nullopt;
        }
    }

private:
    Scalar eval_poly(const std::vector<Scalar>& coeffs, const Scalar& at) const {
        Scalar r = lift_to(Scalar(0), dst_);
        for (std::size_t i = coeffs.size(); i-- > 0;) r = r * at + apply(coeffs[i]);
        return r;
    }

    Field src_, dst_;
    std::map<std::string, Scalar> values_;
};

// ----------------------------------------------------- rational coordinates

// Q-linear coordinates of a list of scalars with respect to monomials in
// the tower generators.  Parameter-level denominators are cleared first
// with one common multiplier when `clear_denominators` is set; that
// preserves linear relations among the list but not the individual values.
struct QCoordMatrix {
    std::vector<std::vector<mpq_class>> rows;      // one row per input value
    std::vector<std::vector<unsigned>> monomials;  // column keys, bottom level first
    int constant_column = -1;                      // index of the 1-monomial, -1 if absent
};

namespace detail {

inline bool has_denominators(const Scalar& v) {
    if (v.fld_->kind == FieldKind::rationals) return false;
    if (v.fld_->kind == FieldKind::parameter && !(v.b_.size() == 1 && v.b_[0].is_one())) return true;
    for (const auto& c : v.a_)
        if (has_denominators(c)) return true;
    return false;
}

// The topmost level below-or-at f where some value carries a denominator,
// returned as the lcm of those denominators (1 when everything is clean).
inline Scalar denominator_lcm_at_top(const std::vector<Scalar>& vals, const Field& f) {
    if (f->kind == FieldKind::rationals) return Scalar(1);
    std::vector<Scalar> coeffs;
    if (f->kind == FieldKind::parameter) {
        std::vector<Scalar> l{sc_one(f->base)};
        for (const auto& v : vals) {
            const Scalar vl = lift_to(v, f);
            auto g = pv_gcd(l, vl.b_);
            l = pv_mul(pv_divmod(l, g).first, vl.b_);
        }
        if (!(pv_deg(l) == 0 && l[0].is_one())) return make_param(f, l, {sc_one(f->base)});
    }
    for (const auto& v : vals) {
        const Scalar vl = lift_to(v, f);
        for (const auto& c : vl.a_) coeffs.push_back(c);
    }
    if (coeffs.empty()) return Scalar(1);
    return denominator_lcm_at_top(coeffs, f->base);
}

inline void scalar_coords(const Scalar& v, std::vector<unsigned>& prefix,
                          std::map<std::vector<unsigned>, mpq_class>& out) {
    if (v.fld_->kind == FieldKind::rationals) {
        if (sgn(v.q_) != 0) {
            std::vector<unsigned> key(prefix.rbegin(), prefix.rend());
            auto [it, fresh] = out.emplace(std::move(key), v.q_);
            if (!fresh) it->second += v.q_;
        }
        return;
    }
    if (v.fld_->kind == FieldKind::parameter && !(v.b_.size() == 1 && v.b_[0].is_one()))
        throw error("rational coordinates need denominator-free values");
    for (std::size_t i = 0; i < v.a_.size(); ++i) {
        prefix.push_back(static_cast<unsigned>(i));
        scalar_coords(v.a_[i], prefix, out);
        prefix.pop_back();
    }
}

}  // namespace detail

inline QCoordMatrix rational_coordinates(std::vector<Scalar> vals, bool clear_denominators) {
    using namespace detail;
    QCoordMatrix m;
    if (vals.empty()) return m;
    Field f = vals[0].field();
    for (const auto& v : vals) f = common_field(f, v.field());
    for (auto& v : vals) v = lift_to(v, f);
    if (clear_denominators) {
        int guard = 0;
        while (true) {
            bool dirty = false;
            for (const auto& v : vals)
                if (has_denominators(v)) { dirty = true; break; }
            if (!dirty) break;
            if (++guard > 64) throw error("denominator clearing failed to converge");
            const Scalar step = denominator_lcm_at_top(vals, f);
            if (step.is_one()) throw error("denominator clearing stalled");
            const Scalar sl = lift_to(step, f);
            for (auto& v : vals) v = v * sl;
        }
    }
    std::vector<std::map<std::vector<unsigned>, mpq_class>> per_row(vals.size());
    for (std::size_t i = 0; i < vals.size(); ++i) {
        std::vector<unsigned> prefix;
        scalar_coords(vals[i], prefix, per_row[i]);
    }
    std::map<std::vector<unsigned>, std::size_t> columns;
    for (const auto& row : per_row)
        for (const auto& [k, q] : row) columns.emplace(k, 0);
    std::size_t idx = 0;
    for (auto& [k, v] : columns) v = idx++;
    m.monomials.resize(columns.size());
    for (const auto& [k, v] : columns) m.monomials[v] = k;
    m.rows.assign(vals.size(), std::vector<mpq_class>(columns.size(), mpq_class(0)));
    for (std::size_t i = 0; i < vals.size(); ++i)
        for (const auto& [k, q] : per_row[i]) m.rows[i][columns.at(k)] = q;
    const std::vector<unsigned> zero_key(static_cast<std::size_t>(f->depth), 0u);
    auto it = columns.find(zero_key);
    m.constant_column = it == columns.end() ? -1 : static_cast<int>(it->second);
    return m;
}

}  // namespace diffalg
