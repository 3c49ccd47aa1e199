#pragma once

// Elliptic curves v^2 = u^3 + c2 u^2 + c1 u + c0 over the exact scalar
// tower: chord-tangent group law, scalar multiples, bounded torsion
// classification, reduction of a squarefree monic quartic z^2 = f(x) to this
// form together with the induced correspondence on points, and construction
// of a function with a prescribed principal divisor by straight-line
// accumulation.

#include <cstdlib>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "quadfield.hpp"
#include "upoly.hpp"

namespace diffalg {

struct EllPoint {
    bool inf = true;
    Scalar u, v;

    static EllPoint infinity() { return EllPoint{}; }
    static EllPoint at(Scalar u, Scalar v) { return EllPoint{false, std::move(u), std::move(v)}; }

    friend bool operator==(const EllPoint& a, const EllPoint& b) {
        if (a.inf != b.inf) return false;
        return a.inf || (a.u == b.u && a.v == b.v);
    }
    friend bool operator!=(const EllPoint& a, const EllPoint& b) { return !(a == b); }
};

inline std::string to_string(const EllPoint& p) {
    if (p.inf) return "O";
    return "(" + to_string(p.u) + ", " + to_string(p.v) + ")";
}

class EllCurve {
public:
    EllCurve(Scalar c2, Scalar c1, Scalar c0)
        : c2_(std::move(c2)), c1_(std::move(c1)), c0_(std::move(c0)) {
        const auto sq = xgcd(cubic(), cubic().derivative());
        if (sq.g.deg() > 0)
            throw degenerate_curve("right-hand side has a repeated root: " + to_string(sq.g));
    }

    const Scalar& c2() const { return c2_; }
    const Scalar& c1() const { return c1_; }
    const Scalar& c0() const { return c0_; }
    UPoly<Scalar> cubic() const { return UPoly<Scalar>({c0_, c1_, c2_, Scalar(1)}); }

    bool contains(const EllPoint& p) const {
        if (p.inf) return true;
        return p.v * p.v == cubic().eval(p.u);
    }

    EllPoint neg(const EllPoint& p) const {
        if (p.inf) return p;
        return EllPoint::at(p.u, -p.v);
    }

    EllPoint add(const EllPoint& p, const EllPoint& q) const {
        if (p.inf) return q;
        if (q.inf) return p;
        if (p.u == q.u && p.v == -q.v) return EllPoint::infinity();
        const Scalar lam = p == q ? (Scalar(3) * p.u * p.u + Scalar(2) * c2_ * p.u + c1_) /
                                        (Scalar(2) * p.v)
                                  : (q.v - p.v) / (q.u - p.u);
        const Scalar u3 = lam * lam - c2_ - p.u - q.u;
        return EllPoint::at(u3, lam * (p.u - u3) - p.v);
    }

    EllPoint mul(EllPoint p, long n) const {
        if (n < 0) {
            p = neg(p);
            n = -n;
        }
        EllPoint acc = EllPoint::infinity();
        while (n > 0) {
            if (n & 1) acc = add(acc, p);
            n >>= 1;
            if (n) p = add(p, p);
        }
        return acc;
    }

    friend bool operator==(const EllCurve& a, const EllCurve& b) {
        return a.c2_ == b.c2_ && a.c1_ == b.c1_ && a.c0_ == b.c0_;
    }

private:
    Scalar c2_, c1_, c0_;
};

inline std::string to_string(const EllCurve& e) {
    return "v^2 = " + to_string(e.cubic(), "u");
}

// Degree of the scalar tower over the rationals; nullopt when the tower
// contains a transcendental parameter (no number field).
inline std::optional<int> number_field_degree(const Field& f) {
    int d = 1;
    for (Field cur = f; cur; cur = cur->base) {
        if (cur->kind == FieldKind::parameter) return std::nullopt;
        if (cur->kind == FieldKind::extension)
            d *= static_cast<int>(cur->minpoly.size()) - 1;
    }
    return d;
}

// Outcome of the bounded torsion search.  Over Q and over quadratic number
// fields the classification of rational torsion makes the bounded search
// decisive (orders are at most 12 resp. 18); over larger towers or in the
// presence of parameters a miss stays undecided.
struct TorsionDecision {
    enum class Kind { finite, free, undecided } kind;
    int order = 0;     // set when kind == finite
    int searched = 0;  // multiples tested
};

inline TorsionDecision classify_torsion(const EllCurve& e, const EllPoint& p, int bound = 0) {
    if (p.inf) return {TorsionDecision::Kind::finite, 1, 0};
    // the relevant tower is the deepest one among curve and point coordinates
    Field f = p.u.field();
    for (const Scalar* s : {&p.v, &e.c2(), &e.c1(), &e.c0()})
        if (s->field()->depth > f->depth) f = s->field();
    const auto deg = number_field_degree(f);
    std::optional<int> decisive;
    if (deg && *deg == 1) decisive = 12;
    else if (deg && *deg == 2) decisive = 18;
    // Without a classification the search cannot become decisive, and over
    // parameter fields coordinate degrees grow quadratically with the
    // multiple, so the default stays shallow; callers can pass a bound.
    if (bound <= 0) bound = decisive.value_or(8);
    EllPoint q = p;  // holds n * p at the top of iteration n
    for (int n = 1; n <= bound; ++n) {
        if (q.inf) return {TorsionDecision::Kind::finite, n, n};
        if (n < bound) q = e.add(q, p);
    }
    if (decisive && bound >= *decisive) return {TorsionDecision::Kind::free, 0, bound};
    return {TorsionDecision::Kind::undecided, 0, bound};
}

// ------------------------------------------------ quartic curve z^2 = f(x)

// A point of the hyperelliptic model z^2 = f(x), f a squarefree quartic:
// either finite (x0, z0) with z0^2 = f(x0), or one of the two points at
// infinity labelled by the branch c = +/-1 of z ~ c x^2.
struct QuarticPoint {
    bool infinite = false;
    int branch = 0;
    Scalar x0, z0;

    static QuarticPoint at(Scalar x, Scalar z) {
        return QuarticPoint{false, 0, std::move(x), std::move(z)};
    }
    static QuarticPoint at_infinity(int branch) {
        return QuarticPoint{true, branch, Scalar(0), Scalar(0)};
    }

    friend bool operator==(const QuarticPoint& a, const QuarticPoint& b) {
        if (a.infinite != b.infinite) return false;
        if (a.infinite) return a.branch == b.branch;
        return a.x0 == b.x0 && a.z0 == b.z0;
    }
    friend bool operator!=(const QuarticPoint& a, const QuarticPoint& b) { return !(a == b); }
};

inline std::string to_string(const QuarticPoint& p) {
    if (p.infinite) return p.branch > 0 ? "infinity+" : "infinity-";
    return "(" + to_string(p.x0) + ", " + to_string(p.z0) + ")";
}

// Writing f = q^2 + L x + M with q = x^2 + q1 x + q0 monic (always possible
// for a monic quartic), the substitution u = 2(q - z), v = -u q' - L maps
// z^2 = f(x) onto
//
//   v^2 = u^3 + (q1^2 - 4 q0) u^2 + (2 q1 L - 4 M) u + L^2,
//
// an isomorphism of smooth models.  The branch z ~ +x^2 at infinity lands on
// (0, L), the branch z ~ -x^2 on the origin O of the group law.
struct QuarticModel {
    UPoly<Scalar> f;  // monic squarefree quartic
    UPoly<Scalar> q;  // x^2 + q1 x + q0
    Scalar q1, q0, L, M;
    EllCurve curve;

    EllPoint to_curve(const QuarticPoint& p) const {
        if (p.infinite) return p.branch > 0 ? EllPoint::at(Scalar(0), L) : EllPoint::infinity();
        if (!(p.z0 * p.z0 == f.eval(p.x0)))
            throw error("point does not lie on the quartic curve");
        const Scalar u = Scalar(2) * (q.eval(p.x0) - p.z0);
        return EllPoint::at(u, -u * q.derivative().eval(p.x0) - L);
    }

    QuarticPoint from_curve(const EllPoint& p) const {
        if (p.inf) return QuarticPoint::at_infinity(-1);
        if (p.u.is_zero()) {
            if (L.is_zero() || p.v == L) return QuarticPoint::at_infinity(+1);
            const Scalar x0 = -M / L;
            return QuarticPoint::at(x0, q.eval(x0));
        }
        const Scalar x0 = -(p.v + L + q1 * p.u) / (Scalar(2) * p.u);
        return QuarticPoint::at(x0, q.eval(x0) - p.u / Scalar(2));
    }

    // u and v as elements of the quartic function field K(x)(z), z^2 = f.
    QuadElt u_func(const QuadField& k) const {
        return k.make(RatF<Scalar>(q * Scalar(2)), RatF<Scalar>(Scalar(-2)));
    }
    QuadElt v_func(const QuadField& k) const {
        const RatF<Scalar> dq(q.derivative());
        return QuadElt(0) - u_func(k) * k.from(dq) - QuadElt(L);
    }

    // Pull a function A(u) + B(u) v on the Weierstrass model back to the
    // quartic field.
    QuadElt pull_back(const QuadElt& h, const QuadField& k) const {
        const QuadElt uu = u_func(k), vv = v_func(k);
        QuadElt out = eval_at(h.rat_part(), uu);
        if (!h.alg_part().is_zero()) out = out + eval_at(h.alg_part(), uu) * vv;
        return out;
    }
};

inline QuarticModel quartic_to_weierstrass(const UPoly<Scalar>& f) {
    if (f.deg() != 4) throw error("expected a quartic, got degree " + std::to_string(f.deg()));
    if (!(f.lc() == Scalar(1))) throw not_monic("the quartic must be monic");
    const auto sq = xgcd(f, f.derivative());
    if (sq.g.deg() > 0)
        throw not_squarefree_error("quartic has a repeated root: " + to_string(sq.g));
    const Scalar q1 = f.coeff(3) / Scalar(2);
    const Scalar q0 = (f.coeff(2) - q1 * q1) / Scalar(2);
    const Scalar L = f.coeff(1) - Scalar(2) * q1 * q0;
    const Scalar M = f.coeff(0) - q0 * q0;
    const UPoly<Scalar> q({q0, q1, Scalar(1)});
    EllCurve e(q1 * q1 - Scalar(4) * q0, Scalar(2) * q1 * L - Scalar(4) * M, L * L);
    return QuarticModel{f, q, q1, q0, L, M, std::move(e)};
}

// ------------------------------------------------------ principal divisors

namespace detail {
// Leading coefficient of the expansion of A(u) + B(u) v at the base point O,
// where u has a double and v a triple pole, both with leading coefficient 1
// in the local parameter u/v; the orders of the two parts never tie (parity).
inline Scalar base_point_lead(const RatF<Scalar>& a, const RatF<Scalar>& b) {
    const int orda = a.is_zero() ? (1 << 20) : 2 * (a.den().deg() - a.num().deg());
    const int ordb = b.is_zero() ? (1 << 20) : 2 * (b.den().deg() - b.num().deg()) - 3;
    const RatF<Scalar>& dom = orda <= ordb ? a : b;
    return dom.num().lc() / dom.den().lc();
}
}  // namespace detail

// A function on the Weierstrass model with divisor sum n_i (P_i), given that
// sum n_i = 0 and the group sum of [n_i] P_i is O.  The result lives in the
// quadratic field Q(u)(v), v^2 = cubic, and is normalized so its expansion
// at O has leading coefficient 1.  Throws when the divisor is not principal.
inline QuadElt principal_function(const EllCurve& e,
                                  const std::vector<std::pair<EllPoint, int>>& divisor,
                                  const QuadField& w) {
    if (!(w.f() == e.cubic()))
        throw descriptor_mismatch("function field does not belong to this curve");
    long total = 0;
    for (const auto& [p, n] : divisor) total += n;
    if (total != 0) throw error("divisor degree is not zero");

    QuadElt h(1);
    std::vector<EllPoint> work;  // each entry stands for (P) - (O)
    auto vertical = [&](const EllPoint& p) {
        return w.make(RatF<Scalar>(UPoly<Scalar>({-p.u, Scalar(1)})), RatF<Scalar>{});
    };
    for (const auto& [p, n] : divisor) {
        if (p.inf || n == 0) continue;  // (O) - (O) contributes nothing
        if (!e.contains(p)) throw error("divisor point is not on the curve");
        if (n > 0) {
            for (int i = 0; i < n; ++i) work.push_back(p);
        } else {
            // -(P) + (O) = (-P) - (O) - div(u - u_P)
            for (int i = 0; i < -n; ++i) {
                work.push_back(e.neg(p));
                h = h / vertical(p);
            }
        }
    }
    while (work.size() >= 2) {
        const EllPoint p = work[work.size() - 2];
        const EllPoint qq = work[work.size() - 1];
        work.pop_back();
        work.pop_back();
        if (qq == e.neg(p)) {  // (P) + (-P) - 2(O) = div(u - u_P)
            h = h * vertical(p);
            continue;
        }
        const Scalar lam =
            p == qq ? (Scalar(3) * p.u * p.u + Scalar(2) * e.c2() * p.u + e.c1()) /
                          (Scalar(2) * p.v)
                    : (qq.v - p.v) / (qq.u - p.u);
        // line v - v_P - lam (u - u_P) through P and Q
        const QuadElt line =
            w.make(RatF<Scalar>(UPoly<Scalar>({lam * p.u - p.v, -lam})), RatF<Scalar>(Scalar(1)));
        const EllPoint r = e.add(p, qq);  // not O: Q = -P was handled above
        h = h * line / vertical(r);
        work.push_back(r);
    }
    if (!work.empty() && !work.back().inf)
        throw error("divisor class is not trivial: remainder " + to_string(work.back()));
    const Scalar lead = detail::base_point_lead(h.rat_part(), h.alg_part());
    return h * QuadElt(Scalar(1) / lead);
}

}  // namespace diffalg
