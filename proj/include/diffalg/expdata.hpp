#pragma once

// Local analysis of a linear differential operator at points of the
// projective line: generalized exponents via Newton polygons, principal
// parts of candidate logarithmic derivatives, a degree bound for
// exponential solutions, the exponential solutions themselves, and a
// degree bound for polynomial relations among entries of a fundamental
// matrix of a first-order system.

#include <algorithm>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "diffop.hpp"
#include "errors.hpp"
#include "ratmatrix.hpp"
#include "scalar.hpp"
#include "upoly.hpp"

namespace diffalg {

namespace detail {

// Valuation and leading coefficient of a nonzero rational function at the
// origin, read off the first nonzero coefficients of numerator and
// denominator.  No series expansion is needed.
inline std::pair<long, Scalar> local_lead_at0(const RatF<Scalar>& f) {
    const int mn = root_multiplicity(f.num(), Scalar(0));
    const int md = root_multiplicity(f.den(), Scalar(0));
    return {static_cast<long>(mn) - static_cast<long>(md),
            f.num().coeff(static_cast<std::size_t>(mn)) /
                f.den().coeff(static_cast<std::size_t>(md))};
}

// sum_j c[j] x^{-j} as a rational function.
inline RatF<Scalar> laurent_tail(const std::vector<Scalar>& c) {
    RatF<Scalar> out;
    for (std::size_t j = 0; j < c.size(); ++j) {
        if (c[j].is_zero()) continue;
        out = out + RatF<Scalar>(UPoly<Scalar>(c[j]),
                                 UPoly<Scalar>::monomial(Scalar(1), j));
    }
    return out;
}

// q = r^2 * m with m an integer free of small square factors.  Trial
// division is capped; a surviving large square factor only makes the
// adjoined generator non-minimal, never incorrect.
inline std::pair<mpq_class, mpz_class> rational_square_split(const mpq_class& q) {
    mpz_class n = q.get_num() * q.get_den();
    const int sign = sgn(n) < 0 ? -1 : 1;
    mpz_class a = abs(n);
    mpz_class r = 1;
    for (mpz_class p = 2; p <= 1000 && p * p <= a; ++p) {
        const mpz_class pp = p * p;
        while (a % pp == 0) {
            a /= pp;
            r *= p;
        }
    }
    if (mpz_perfect_square_p(a.get_mpz_t())) {
        mpz_class s;
        mpz_sqrt(s.get_mpz_t(), a.get_mpz_t());
        r *= s;
        a = 1;
    }
    return {mpq_class(r) / q.get_den(), sign * a};
}

// Field of definition of an operator: the deepest tower among its
// coefficient scalars.
inline Field op_field(const DiffOperator& l) {
    Field f = rationals();
    for (const auto& a : l.coeffs()) {
        for (const auto& c : a.num().coeffs()) f = common_field(f, c.field());
        for (const auto& c : a.den().coeffs()) f = common_field(f, c.field());
    }
    return f;
}

}  // namespace detail

// ------------------------------------------------------------- root finding

struct RootList {
    std::vector<std::pair<Scalar, int>> roots;
    std::optional<std::string> blocking_factor;
};

// Roots of a univariate polynomial over the scalar tower, with multiplicity.
// Linear and quadratic factors are solved exactly; solving a quadratic may
// adjoin one square root to `field`, which is updated in place.  Any factor
// of degree three or more is reported as blocking rather than solved.
inline RootList extract_roots(const UPoly<Scalar>& p, Field& field) {
    RootList out;
    if (p.deg() < 1) return out;
    UPoly<Scalar> a = p;
    const int m0 = root_multiplicity(a, Scalar(0));
    if (m0 > 0) {
        out.roots.emplace_back(Scalar(0), m0);
        std::vector<Scalar> c;
        for (int i = m0; i <= a.deg(); ++i)
            c.push_back(a.coeff(static_cast<std::size_t>(i)));
        a = UPoly<Scalar>(c);
    }
    for (const auto& [g, mult] : squarefree_decomposition(a)) {
        if (g.deg() == 1) {
            out.roots.emplace_back(-g.coeff(0) / g.coeff(1), mult);
        } else if (g.deg() == 2) {
            const Scalar b = g.coeff(1) / g.coeff(2);
            const Scalar c = g.coeff(0) / g.coeff(2);
            const Scalar disc = b * b - Scalar(4) * c;
            Scalar s;
            if (auto sq = try_sqrt(disc)) {
                s = *sq;
            } else if (auto dq = as_rational(disc)) {
                // Split off the rational square part first so that, e.g.,
                // disc = -4 adjoins sqrt(-1) rather than sqrt(-4).
                const auto [r, m] = detail::rational_square_split(*dq);
                auto [ext, sm] = sqrt_or_adjoin(Scalar(m), field);
                field = ext;
                s = Scalar(r) * sm;
            } else {
                auto [ext, sd] = sqrt_or_adjoin(disc, field);
                field = ext;
                s = sd;
            }
            const Scalar half = Scalar(1) / Scalar(2);
            out.roots.emplace_back((s - b) * half, mult);
            out.roots.emplace_back((Scalar(0) - s - b) * half, mult);
        } else if (!out.blocking_factor) {
            out.blocking_factor = to_string(g);
        }
    }
    return out;
}

// --------------------------------------------------------- newton polygons

struct NewtonData {
    UPoly<Scalar> poly;
    long level = 0;
};

// Slope-zero edge polynomial of an euler-form operator at the origin: with
// a_i the coefficient of the i-th derivation power and v_i its valuation at
// the origin, the level is min_i v_i and the polynomial collects the leading
// coefficients of the minimal-valuation terms.
inline NewtonData newton_polynomial_slope0(const DiffOperator& l) {
    if (l.form() != OpForm::euler)
        throw error("newton data expects an euler-form operator");
    if (l.is_zero()) throw error("newton data of the zero operator");
    std::vector<std::pair<std::size_t, std::pair<long, Scalar>>> pts;
    long level = 0;
    bool first = true;
    for (std::size_t i = 0; i < l.coeffs().size(); ++i) {
        if (l.coeffs()[i].is_zero()) continue;
        const auto vl = detail::local_lead_at0(l.coeffs()[i]);
        if (first || vl.first < level) level = vl.first;
        first = false;
        pts.emplace_back(i, vl);
    }
    std::vector<Scalar> c(l.coeffs().size());
    for (const auto& [i, vl] : pts)
        if (vl.first == level) c[i] = vl.second;
    return {UPoly<Scalar>(c), level};
}

// ---------------------------------------------------- generalized exponents

// One generalized exponent at a point, reported in the sign convention of
// the classical literature: a solution behaves like
// exp(-int e/u du) * (1 + ...) in the local coordinate u, where
// e = sum_j coeffs[j] u^{-j}.  Internally the search works with the negated
// ("honest") coefficients, for which the shifted operator has Newton root 0.
struct GenExp {
    LinePoint point;
    std::vector<Scalar> coeffs;
    int multiplicity = 0;
};

struct GenExpList {
    Field field;
    std::vector<GenExp> exponents;
    bool complete = false;
    std::optional<std::string> blocking_factor;
};

namespace detail {

inline std::vector<Scalar> trimmed_tail(std::vector<Scalar> c) {
    while (c.size() > 1 && c.back().is_zero()) c.pop_back();
    if (c.empty()) c.push_back(Scalar(0));
    return c;
}

inline std::string tail_key(const std::vector<Scalar>& c) {
    std::string k;
    for (const auto& v : c) k += to_string(v) + ";";
    return k;
}

// Depth-first Newton-polygon refinement.  At each stage the candidate tail
// holds the coefficients of u^{-j} for j > 0 found so far; edges of slope at
// most `smax` refine it, and the slope-zero polynomial completes it with a
// constant term.  Slopes strictly decrease along a branch, so every
// candidate is produced exactly once.
inline void exponent_search(const DiffOperator& m, long smax,
                            const std::vector<Scalar>& tail, Field& field,
                            std::vector<std::vector<Scalar>>& found,
                            std::optional<std::string>& blocking) {
    struct Pt {
        long i;
        long v;
        Scalar lead;
    };
    std::vector<Pt> pts;
    for (std::size_t i = 0; i < m.coeffs().size(); ++i) {
        if (m.coeffs()[i].is_zero()) continue;
        const auto vl = local_lead_at0(m.coeffs()[i]);
        pts.push_back({static_cast<long>(i), vl.first, vl.second});
    }
    if (pts.empty()) return;
    long vmin = pts[0].v, vmax = pts[0].v;
    for (const auto& q : pts) {
        vmin = std::min(vmin, q.v);
        vmax = std::max(vmax, q.v);
    }
    for (long s = 1; s <= std::min(smax, vmax - vmin); ++s) {
        long b = pts[0].v - s * pts[0].i;
        for (const auto& q : pts) b = std::min(b, q.v - s * q.i);
        long imin = -1, imax = -1;
        for (const auto& q : pts)
            if (q.v - s * q.i == b) {
                if (imin < 0) imin = q.i;
                imax = q.i;
            }
        if (imax == imin) continue;  // single support point: no edge
        std::vector<Scalar> ec(static_cast<std::size_t>(imax - imin) + 1);
        for (const auto& q : pts)
            if (q.v - s * q.i == b) ec[static_cast<std::size_t>(q.i - imin)] = q.lead;
        RootList rl = extract_roots(UPoly<Scalar>(ec), field);
        if (rl.blocking_factor && !blocking) blocking = rl.blocking_factor;
        for (const auto& [root, mult] : rl.roots) {
            (void)mult;
            if (root.is_zero()) continue;
            const RatF<Scalar> term(UPoly<Scalar>(root),
                                    UPoly<Scalar>::monomial(Scalar(1),
                                                            static_cast<std::size_t>(s)));
            std::vector<Scalar> t2 = tail;
            if (t2.size() < static_cast<std::size_t>(s) + 1)
                t2.resize(static_cast<std::size_t>(s) + 1, Scalar(0));
            t2[static_cast<std::size_t>(s)] = root;
            exponent_search(exponent_shift(m, term), s - 1, t2, field, found, blocking);
        }
    }
    const NewtonData nd = newton_polynomial_slope0(m);
    RootList rl = extract_roots(nd.poly, field);
    if (rl.blocking_factor && !blocking) blocking = rl.blocking_factor;
    for (const auto& [root, mult] : rl.roots) {
        (void)mult;
        std::vector<Scalar> c = tail;
        if (c.empty()) c.resize(1, Scalar(0));
        c[0] = root;
        found.push_back(trimmed_tail(c));
    }
    // A constant term of zero is also admissible when the slope-zero
    // polynomial vanishes at the origin; extract_roots already reports the
    // root 0 in that case, so nothing more to do here.
}

}  // namespace detail

// Generalized exponents of an operator at one point of the projective line.
// The returned multiplicities are recomputed definitionally: e is kept with
// multiplicity k when the slope-zero polynomial of the shifted operator has
// the root 0 with multiplicity exactly k, which filters any spurious
// candidate produced along the way.  Unsolvable (degree >= 3) factors are
// reported via blocking_factor and make the list incomplete rather than
// raising.  Adjoined square roots extend `field` in place, so several calls
// sharing one Field variable stay inside a single tower.
inline GenExpList generalized_exponents(const DiffOperator& l, const LinePoint& p,
                                        Field& field) {
    if (l.is_zero()) throw error("local data of the zero operator");
    const DiffOperator ld = converted(l, OpForm::ddx);
    const DiffOperator moved =
        p.infinite ? moved_from_infinity(ld) : moved_to_origin(ld, p.x0);
    const DiffOperator m = to_euler(moved);
    GenExpList out;
    field = detail::common_field(field, detail::op_field(m));
    std::vector<std::vector<Scalar>> cands;
    detail::exponent_search(m, 1L << 40, {}, field, cands, out.blocking_factor);
    std::map<std::string, GenExp> uniq;
    for (const auto& honest : cands) {
        const DiffOperator sh = exponent_shift(m, detail::laurent_tail(honest));
        const NewtonData nd = newton_polynomial_slope0(sh);
        const int mult = root_multiplicity(nd.poly, lift_to(Scalar(0), field));
        if (mult < 1) continue;
        std::vector<Scalar> rep;
        rep.reserve(honest.size());
        for (const auto& c : honest) rep.push_back(Scalar(0) - c);
        GenExp e{p, detail::trimmed_tail(rep), mult};
        uniq.emplace(detail::tail_key(e.coeffs), e);
    }
    int total = 0;
    for (auto& [k, e] : uniq) {
        (void)k;
        total += e.multiplicity;
        out.exponents.push_back(e);
    }
    out.field = field;
    out.complete = !out.blocking_factor && total == ld.order();
    return out;
}

inline GenExpList generalized_exponents(const DiffOperator& l, const LinePoint& p) {
    Field field = detail::op_field(l);
    return generalized_exponents(l, p, field);
}

// ---------------------------------------------------------- principal parts

// Principal part at p of the logarithmic derivative of a local solution with
// generalized exponent e: for finite p this is e_h(x-p)/(x-p) and at
// infinity -e_h(1/x)/x, where e_h is the honest (negated) coefficient
// vector.  `residue` is its residue at p and `ord` its pole order there.
struct PrincipalPart {
    LinePoint point;
    RatF<Scalar> part;
    Scalar residue;
    long ord = 0;
    std::vector<Scalar> honest;
};

struct PrincipalPartList {
    Field field;
    std::vector<GenExp> exponents;
    std::vector<PrincipalPart> parts;  // parts[i] belongs to exponents[i]
    bool complete = false;
    std::optional<std::string> blocking_factor;
};

inline PrincipalPartList principal_parts(const DiffOperator& l, const LinePoint& p,
                                         Field& field) {
    const GenExpList ge = generalized_exponents(l, p, field);
    PrincipalPartList out{ge.field, ge.exponents, {}, ge.complete, ge.blocking_factor};
    for (const auto& e : ge.exponents) {
        std::vector<Scalar> honest;
        honest.reserve(e.coeffs.size());
        for (const auto& c : e.coeffs) honest.push_back(Scalar(0) - c);
        const RatF<Scalar> ef = detail::laurent_tail(honest);
        RatF<Scalar> pp;
        if (p.infinite) {
            pp = -ef.subst_inverse() * RatF<Scalar>::x().inverse();
        } else {
            const UPoly<Scalar> lin(std::vector<Scalar>{Scalar(0) - p.x0, Scalar(1)});
            pp = ef.shifted(Scalar(0) - p.x0) * RatF<Scalar>(UPoly<Scalar>(Scalar(1)), lin);
        }
        out.parts.push_back(
            {p, pp, residue_at(pp, p), static_cast<long>(ord_at(pp, p)), honest});
    }
    return out;
}

inline PrincipalPartList principal_parts(const DiffOperator& l, const LinePoint& p) {
    Field field = detail::op_field(l);
    return principal_parts(l, p, field);
}

// ------------------------------------------------------------- degree bound

struct PointLocal {
    LinePoint point;
    std::vector<GenExp> exponents;
    std::vector<PrincipalPart> parts;
    long max_ord = 0;
};

// Report of the degree bound N(L) for exponential solutions.  `bound` is
// empty when some singular point admits no principal part at all, in which
// case no exponential solution exists.  The bound is
//   sum_p max_h ord_p(h)  +  max({0} and the rational integers in Im(Phi))
// where Phi sends a tuple of principal parts (one per singular point) to
// minus the sum of their residues.
struct ExpBoundReport {
    Field field;
    std::vector<PointLocal> locals;
    std::vector<Scalar> phi_image;
    std::vector<mpz_class> phi_integers;
    std::optional<mpz_class> bound;
};

inline ExpBoundReport exp_bound(const DiffOperator& l0) {
    const DiffOperator l = converted(l0, OpForm::ddx);
    if (l.is_zero()) throw error("degree bound of the zero operator");
    ExpBoundReport rep;
    Field field = detail::op_field(l);
    RootList sing = extract_roots(singular_denominator(l), field);
    if (sing.blocking_factor)
        throw needs_higher_extension(
            "singular points lie in an extension of degree >= 3 (roots of " +
                *sing.blocking_factor + "); adjoin a root first",
            *sing.blocking_factor);
    std::vector<LinePoint> points;
    for (const auto& [r, m] : sing.roots) {
        (void)m;
        points.push_back(LinePoint::at(r));
    }
    std::sort(points.begin(), points.end(),
              [](const LinePoint& a, const LinePoint& b) {
                  return to_string(a.x0) < to_string(b.x0);
              });
    points.push_back(LinePoint::infinity());
    bool some_empty = false;
    for (const auto& pt : points) {
        PrincipalPartList ppl = principal_parts(l, pt, field);
        if (ppl.blocking_factor)
            throw needs_higher_extension(
                "generalized exponents at " + to_string(pt) +
                    " lie in an extension of degree >= 3 (roots of " +
                    *ppl.blocking_factor + "); adjoin a root first",
                *ppl.blocking_factor);
        PointLocal loc{pt, ppl.exponents, ppl.parts, 0};
        if (ppl.parts.empty()) {
            some_empty = true;
        } else {
            loc.max_ord = ppl.parts[0].ord;
            for (const auto& h : ppl.parts) loc.max_ord = std::max(loc.max_ord, h.ord);
        }
        rep.locals.push_back(std::move(loc));
    }
    rep.field = field;
    if (some_empty) return rep;  // bound stays empty: no exponential solution
    // Image of Phi over all tuples of principal parts.
    std::vector<std::size_t> idx(rep.locals.size(), 0);
    std::vector<std::string> seen;
    while (true) {
        Scalar phi(0);
        for (std::size_t k = 0; k < idx.size(); ++k)
            phi = phi - rep.locals[k].parts[idx[k]].residue;
        const std::string key = to_string(phi);
        if (std::find(seen.begin(), seen.end(), key) == seen.end()) {
            seen.push_back(key);
            rep.phi_image.push_back(phi);
            if (auto n = is_rational_integer(phi)) rep.phi_integers.push_back(*n);
        }
        std::size_t k = 0;
        while (k < idx.size() && ++idx[k] == rep.locals[k].parts.size()) {
            idx[k] = 0;
            ++k;
        }
        if (k == idx.size()) break;
    }
    std::sort(rep.phi_integers.begin(), rep.phi_integers.end());
    mpz_class bound = 0;
    for (const auto& loc : rep.locals) bound += loc.max_ord;
    mpz_class top = 0;
    for (const auto& n : rep.phi_integers) top = std::max(top, n);
    rep.bound = bound + top;
    return rep;
}

// ---------------------------------------------------- exponential solutions

// All u in the coefficient field with L(exp(int u)) = 0, i.e. all first-order
// right factors D - u.  Each candidate tuple of principal parts yields a
// twist; polynomial solutions of the twisted operator up to the tuple degree
// produce candidates, and each candidate is verified by right division.
inline std::vector<RatF<Scalar>> exponential_solutions(const DiffOperator& l0) {
    const DiffOperator l = converted(l0, OpForm::ddx);
    const ExpBoundReport rep = exp_bound(l);
    std::vector<RatF<Scalar>> out;
    std::vector<std::string> keys;
    if (!rep.bound) return out;
    const DiffOperator lm = l.monic();
    std::vector<std::size_t> idx(rep.locals.size(), 0);
    while (true) {
        Scalar phi(0);
        for (std::size_t k = 0; k < idx.size(); ++k)
            phi = phi - rep.locals[k].parts[idx[k]].residue;
        if (auto d = is_rational_integer(phi); d && *d >= 0) {
            if (!d->fits_slong_p()) throw cap_exceeded("tuple degree does not fit a machine word");
            RatF<Scalar> w;
            for (std::size_t k = 0; k < idx.size(); ++k) {
                const PrincipalPart& h = rep.locals[k].parts[idx[k]];
                w = w + h.part;
                if (h.point.infinite && !h.honest.empty())
                    // Drop the u^{-1} term of the principal part at infinity:
                    // it is accounted for by the polynomial degree.
                    w = w + RatF<Scalar>(UPoly<Scalar>(h.honest[0]),
                                         UPoly<Scalar>::x());
            }
            const DiffOperator tw = twisted(l, w);
            for (const auto& pol : polynomial_solutions(tw, d->get_si())) {
                if (pol.is_zero()) continue;
                const RatF<Scalar> u = RatF<Scalar>(pol.derivative()) / RatF<Scalar>(pol) + w;
                const DiffOperator rhs(
                    OpForm::ddx, {RatF<Scalar>{} - u, RatF<Scalar>(Scalar(1))});
                if (!right_divide(lm, rhs).remainder.is_zero()) continue;
                const std::string key = to_string(u);
                if (std::find(keys.begin(), keys.end(), key) == keys.end()) {
                    keys.push_back(key);
                    out.push_back(u);
                }
            }
        }
        std::size_t k = 0;
        while (k < idx.size() && ++idx[k] == rep.locals[k].parts.size()) {
            idx[k] = 0;
            ++k;
        }
        if (k == idx.size()) break;
    }
    std::sort(out.begin(), out.end(),
              [](const RatF<Scalar>& a, const RatF<Scalar>& b) {
                  return to_string(a) < to_string(b);
              });
    return out;
}

// ------------------------------------------------- relation degree bound

// Degree bound for polynomial relations among the entries of a fundamental
// matrix of Y' = A Y: the maximum over 1 <= s <= nu of
//   2 C(nu,s) deg(T_s) + C(nu,s)(C(nu,s)-1) N(L_s)
// where L_s is a cyclic scalarization of the s-th exterior power system with
// transition matrix T_s.  When N(L_s) reports that no exponential solution
// exists, that s contributes only the first term.  Binomials above `cap`
// raise cap_exceeded.
inline mpz_class relation_degree_bound(const Matrix<RatF<Scalar>>& a,
                                       unsigned long cap = 20) {
    const std::size_t nu = a.size();
    if (nu == 0) throw error("relation bound of an empty system");
    mpz_class best = 0;
    for (std::size_t s = 1; s <= nu; ++s) {
        mpz_class binom;
        mpz_bin_uiui(binom.get_mpz_t(), nu, s);
        if (binom > cap)
            throw cap_exceeded("exterior power dimension exceeds the configured cap");
        const auto cyc = cyclic_scalarize(exterior_power_system(a, s));
        long degt = 0;
        for (const auto& row : cyc.t)
            for (const auto& e : row)
                if (!e.is_zero()) degt = std::max(degt, static_cast<long>(e.deg()));
        mpz_class term = 2 * binom * degt;
        if (binom > 1) {
            const ExpBoundReport rep = exp_bound(cyc.op);
            if (rep.bound) term += binom * (binom - 1) * *rep.bound;
        }
        best = std::max(best, term);
    }
    return best;
}

// ------------------------------------------------------------------ output

inline std::string to_string(const GenExp& e) {
    std::string s;
    for (std::size_t j = 0; j < e.coeffs.size(); ++j) {
        if (e.coeffs[j].is_zero()) continue;
        std::string c = to_string(e.coeffs[j]);
        if (detail::needs_parens(c)) c = "(" + c + ")";
        if (!s.empty()) s += " + ";
        s += c;
        if (j == 1) s += "/x";
        else if (j > 1) s += "/x^" + std::to_string(j);
    }
    return s.empty() ? "0" : s;
}

}  // namespace diffalg
