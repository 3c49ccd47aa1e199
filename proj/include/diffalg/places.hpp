#pragma once

// Places, valuations, and residues of differentials on the genus-one
// function field K(x)(z), z^2 = f(x), f a monic squarefree quartic over the
// scalar tower K.
//
// Finite places are grouped by the monic factor of the x-line they lie
// over.  Factors of degree one give honest points of the tower; factors of
// degree >= 2 are carried symbolically as blocks (the same assumed-
// irreducible convention the scalar tower uses: a zero divisor encountered
// along the way surfaces as reducible_error with the discovered factor).
// Over a block the fiber is handled in the quadratic extension w^2 = f mod g
// without deciding whether f is actually a square there; when it secretly
// is, the two conjugate branches are treated as one closed point, which is
// exact for residue bookkeeping at inert fibers and conservative otherwise.
// Residue values therefore live in one of three rings: the tower itself, a
// block ModPoly, or the quadratic extension of a block.

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "elliptic.hpp"
#include "errors.hpp"
#include "modpoly.hpp"
#include "quadfield.hpp"
#include "series.hpp"
#include "upoly.hpp"

namespace diffalg {

struct Place {
    enum class Kind {
        split,           // x = x0, z = z0 with z0^2 = f(x0) != 0
        quad,            // x = x0, f(x0) not a square: closed point z^2 = f(x0)
        ramified,        // x = x0 a root of f, z = 0
        infinite,        // z ~ branch * x^2
        block,           // x a root of g (deg >= 2, g does not divide f), z^2 = f mod g
        block_ramified,  // x a root of g (deg >= 2) dividing f, z = 0
        block_split,     // x a root of g, z = w0(x) with w0^2 = f mod g
    };

    Kind kind;
    Scalar x0, z0;       // finite rational kinds (z0 only for split)
    int branch = 0;      // infinite: +1 or -1
    UPoly<Scalar> g;     // block kinds: monic squarefree, assumed irreducible
    UPoly<Scalar> w0;    // block_split: representative of the z branch mod g

    static Place split_at(Scalar x, Scalar z) {
        return Place{Kind::split, std::move(x), std::move(z), 0, {}, {}};
    }
    static Place quad_at(Scalar x) {
        return Place{Kind::quad, std::move(x), Scalar(0), 0, {}, {}};
    }
    static Place ramified_at(Scalar x) {
        return Place{Kind::ramified, std::move(x), Scalar(0), 0, {}, {}};
    }
    static Place at_infinity(int branch) {
        return Place{Kind::infinite, Scalar(0), Scalar(0), branch, {}, {}};
    }
    static Place block_at(UPoly<Scalar> g, bool ramified) {
        return Place{ramified ? Kind::block_ramified : Kind::block, Scalar(0), Scalar(0), 0,
                     std::move(g), {}};
    }
    static Place block_split_at(UPoly<Scalar> g, UPoly<Scalar> w0) {
        w0 = w0 % g;
        return Place{Kind::block_split, Scalar(0), Scalar(0), 0, std::move(g), std::move(w0)};
    }

    // Degree of the place over the tower: the number of geometric points it
    // bundles together.
    int degree() const {
        switch (kind) {
            case Kind::split:
            case Kind::ramified:
            case Kind::infinite: return 1;
            case Kind::quad: return 2;
            case Kind::block_ramified:
            case Kind::block_split: return g.deg();
            case Kind::block: return 2 * g.deg();
        }
        return 0;
    }

    friend bool operator==(const Place& a, const Place& b) {
        if (a.kind != b.kind) return false;
        switch (a.kind) {
            case Kind::split: return a.x0 == b.x0 && a.z0 == b.z0;
            case Kind::quad:
            case Kind::ramified: return a.x0 == b.x0;
            case Kind::infinite: return a.branch == b.branch;
            case Kind::block:
            case Kind::block_ramified: return a.g == b.g;
            case Kind::block_split: return a.g == b.g && a.w0 == b.w0;
        }
        return false;
    }
};

inline std::string to_string(const Place& p) {
    switch (p.kind) {
        case Place::Kind::split:
            return "(" + to_string(p.x0) + ", " + to_string(p.z0) + ")";
        case Place::Kind::quad:
            return "(x = " + to_string(p.x0) + ", z^2 = f(x))";
        case Place::Kind::ramified:
            return "(" + to_string(p.x0) + ", 0)";
        case Place::Kind::infinite:
            return p.branch > 0 ? "infinity+" : "infinity-";
        case Place::Kind::block:
            return "(roots of " + to_string(p.g, "y") + ", z^2 = f)";
        case Place::Kind::block_ramified:
            return "(roots of " + to_string(p.g, "y") + ", 0)";
        case Place::Kind::block_split:
            return "(roots of " + to_string(p.g, "y") + ", z = " + to_string(p.w0, "y") + ")";
    }
    return "?";
}

// A residue, in the smallest of the three rings that can hold it.
struct ResidueValue {
    enum class Rep { scalar, algebraic, quadratic } rep = Rep::scalar;
    Scalar s;                        // rep == scalar
    ModPoly<Scalar> m;               // rep == algebraic: value over the block
    ModPoly<ModPoly<Scalar>> n;      // rep == quadratic: value over w^2 = f mod g

    static ResidueValue of(Scalar v) { return ResidueValue{Rep::scalar, std::move(v), {}, {}}; }
    static ResidueValue of(ModPoly<Scalar> v) {
        return ResidueValue{Rep::algebraic, Scalar(0), std::move(v), {}};
    }
    static ResidueValue of(ModPoly<ModPoly<Scalar>> v) {
        return ResidueValue{Rep::quadratic, Scalar(0), {}, std::move(v)};
    }

    bool is_zero() const {
        switch (rep) {
            case Rep::scalar: return s.is_zero();
            case Rep::algebraic: return m.is_zero();
            case Rep::quadratic: return n.is_zero();
        }
        return true;
    }

    // Sum over the geometric points of the place (trace down to the tower).
    Scalar trace() const {
        switch (rep) {
            case Rep::scalar: return s;
            case Rep::algebraic: return trace_over_block(m);
            case Rep::quadratic: return trace_over_block(trace_over_block(n));
        }
        return Scalar(0);
    }

    // The residue flattened to (y-degree, w-degree) slots over the tower,
    // where y is the block generator and w the quadratic branch generator.
    // Rational-kind residues occupy the single slot (0, 0).
    std::vector<std::pair<std::pair<int, int>, Scalar>> slots() const {
        std::vector<std::pair<std::pair<int, int>, Scalar>> out;
        switch (rep) {
            case Rep::scalar:
                if (!s.is_zero()) out.push_back({{0, 0}, s});
                break;
            case Rep::algebraic:
                for (int j = 0; j <= m.value().deg(); ++j)
                    if (!m.value().coeff(static_cast<std::size_t>(j)).is_zero())
                        out.push_back({{j, 0}, m.value().coeff(static_cast<std::size_t>(j))});
                break;
            case Rep::quadratic:
                for (int w = 0; w <= n.value().deg(); ++w) {
                    const ModPoly<Scalar>& part = n.value().coeff(static_cast<std::size_t>(w));
                    for (int j = 0; j <= part.value().deg(); ++j)
                        if (!part.value().coeff(static_cast<std::size_t>(j)).is_zero())
                            out.push_back(
                                {{j, w}, part.value().coeff(static_cast<std::size_t>(j))});
                }
                break;
        }
        return out;
    }
};

inline std::string to_string(const ResidueValue& r) {
    switch (r.rep) {
        case ResidueValue::Rep::scalar: return to_string(r.s);
        case ResidueValue::Rep::algebraic: return to_string(r.m.value(), "y");
        case ResidueValue::Rep::quadratic: {
            const UPoly<ModPoly<Scalar>>& v = r.n.value();
            std::string a = v.deg() >= 0 ? to_string(v.coeff(0).value(), "y") : "0";
            if (v.deg() < 1) return a;
            std::string b = to_string(v.coeff(1).value(), "y");
            if (detail::needs_parens(b)) b = "(" + b + ")";
            return a + " + " + b + "*w";
        }
    }
    return "0";
}

// ------------------------------------------------------------------ detail

namespace detail {

inline Scalar embed_sc(const Scalar& v, const Scalar*) { return v; }
inline ModPoly<Scalar> embed_sc(const Scalar& v, const ModPoly<Scalar>*) {
    return ModPoly<Scalar>(v);
}
inline ModPoly<ModPoly<Scalar>> embed_sc(const Scalar& v, const ModPoly<ModPoly<Scalar>>*) {
    return ModPoly<ModPoly<Scalar>>(ModPoly<Scalar>(v));
}

template <class K>
K embed_scalar(const Scalar& v) {
    return embed_sc(v, static_cast<const K*>(nullptr));
}

template <class K>
UPoly<K> embed_poly(const UPoly<Scalar>& p) {
    std::vector<K> c;
    for (int i = 0; i <= p.deg(); ++i)
        c.push_back(embed_scalar<K>(p.coeff(static_cast<std::size_t>(i))));
    return UPoly<K>(std::move(c));
}

template <class K, class K0>
LaurentSeries<K> lift_series(const LaurentSeries<K0>& s) {
    std::vector<K> c;
    for (int e = s.lead(); e < s.abs_prec(); ++e) c.push_back(K(s.coeff(e)));
    return LaurentSeries<K>(s.lead(), std::move(c));
}

inline ModPoly<Scalar> reduce_mod_block(const UPoly<Scalar>& p,
                                        const ModPoly<Scalar>::Ctx& ctx) {
    ModPoly<Scalar> acc;
    const ModPoly<Scalar> y = ModPoly<Scalar>::generator(ctx);
    for (int i = p.deg(); i >= 0; --i)
        acc = acc * y + ModPoly<Scalar>(p.coeff(static_cast<std::size_t>(i)));
    return acc;
}

// Multiplicity of the monic factor g in p (0 when p is zero or g absent).
inline int factor_multiplicity(UPoly<Scalar> p, const UPoly<Scalar>& g) {
    if (p.is_zero() || g.deg() < 1) return 0;
    int m = 0;
    while (true) {
        auto [q, r] = p.divmod(g);
        if (!r.is_zero()) return m;
        ++m;
        p = std::move(q);
        if (p.is_zero()) return m;
    }
}

// The series of z on the branch z(P) = z0, from the series of f; then the
// residue of (A + B z) dx with dx = dt.
template <class K>
std::optional<K> branch_residue(const LaurentSeries<K>& sa, const LaurentSeries<K>& sb,
                                const LaurentSeries<K>& sf, const K& z0) {
    const LaurentSeries<K> zs = sf.sqrt_with(z0);
    const LaurentSeries<K> integrand = sa + sb * zs;
    if (integrand.abs_prec() <= -1) return std::nullopt;
    return integrand.coeff(-1);
}

// Residue at a ramified place: local parameter t = z, x = y0 + s(t) with
// s solved from f(y0 + s) = t^2 by Newton iteration (s is even, s ~ t^2 /
// f'(y0)), and res = coeff_{t^{-1}} (A + B t)(y0 + s) s'(t).
template <class K>
std::optional<K> ramified_residue(const RatF<Scalar>& a, const RatF<Scalar>& b,
                                  const UPoly<Scalar>& f, const K& y0, int prec) {
    using LS = LaurentSeries<K>;
    const UPoly<K> fs = embed_poly<K>(f).shifted(y0);
    const K df0 = fs.coeff(1);  // f'(y0) != 0 for squarefree f
    LS s = LS::monomial(K(1) / df0, 2, prec);
    const LS t2 = LS::monomial(K(1), 2, prec + 2);
    for (int depth = 4; depth < 2 * prec + 8; depth *= 2) {
        const LS err = eval_poly_at_series(fs, s, prec + 2) - t2;
        if (err.known_zero()) break;
        s = s - err * eval_poly_at_series(fs.derivative(), s, prec + 2).inverse();
    }
    auto comp = [&](const RatF<Scalar>& r) -> LS {
        if (r.is_zero()) return LS(prec, {});
        const UPoly<K> n = embed_poly<K>(r.num()).shifted(y0);
        const UPoly<K> d = embed_poly<K>(r.den()).shifted(y0);
        return eval_poly_at_series(n, s, prec) * eval_poly_at_series(d, s, prec).inverse();
    };
    const LS integrand =
        (comp(a) + comp(b) * LS::monomial(K(1), 1, prec)) * s.derivative();
    if (integrand.abs_prec() <= -1) return std::nullopt;
    return integrand.coeff(-1);
}

// Residue at one of the two places over x = infinity: t = 1/x,
// z = branch * t^{-2} sqrt(t^4 f(1/t)), dx = -t^{-2} dt.
inline std::optional<Scalar> infinite_residue(const RatF<Scalar>& a, const RatF<Scalar>& b,
                                              const UPoly<Scalar>& f, int branch, int prec) {
    using LS = LaurentSeries<Scalar>;
    const LS sa = expand_at_infinity(a, prec);
    const LS sb = expand_at_infinity(b, prec);
    std::vector<Scalar> rev(f.coeffs().rbegin(), f.coeffs().rend());
    const LS w = LS::from_poly(UPoly<Scalar>(std::move(rev)), prec).sqrt_with(Scalar(1));
    const LS z = (w * LS::monomial(Scalar(branch), 0, prec)).shifted_by(-2);
    const LS integrand = -(sa + sb * z).shifted_by(-2);
    if (integrand.abs_prec() <= -1) return std::nullopt;
    return integrand.coeff(-1);
}

}  // namespace detail

// ------------------------------------------------------------- residues

// Residue of (A + B z) dx at a single place, graded by kind.  Adaptive
// precision: restart with more terms until the t^{-1} coefficient is seen.
inline ResidueValue residue_at_place(const QuadField& k, const QuadElt& gf, const Place& p) {
    const UPoly<Scalar>& f = k.f();
    const RatF<Scalar>& a = gf.rat_part();
    const RatF<Scalar>& b = gf.alg_part();
    for (int prec = 8; prec <= 512; prec *= 2) {
        switch (p.kind) {
            case Place::Kind::split: {
                const auto sa = expand_at(a, p.x0, prec);
                const auto sb = expand_at(b, p.x0, prec);
                const auto sf = expand_at(RatF<Scalar>(f), p.x0, prec);
                if (auto r = detail::branch_residue(sa, sb, sf, p.z0))
                    return ResidueValue::of(std::move(*r));
                break;
            }
            case Place::Kind::quad: {
                using M = ModPoly<Scalar>;
                const Scalar d = f.eval(p.x0);
                const auto ctx = M::make_ctx(UPoly<Scalar>({-d, Scalar(0), Scalar(1)}));
                const M w = M::generator(ctx);
                const auto sa = detail::lift_series<M>(expand_at(a, p.x0, prec));
                const auto sb = detail::lift_series<M>(expand_at(b, p.x0, prec));
                const auto sf = detail::lift_series<M>(expand_at(RatF<Scalar>(f), p.x0, prec));
                // `+ 0 with context` so that trace()/slots() see the residue
                // field even when the value happens to be rational
                if (auto r = detail::branch_residue(sa, sb, sf, w))
                    return ResidueValue::of(*r + M(ctx, {}));
                break;
            }
            case Place::Kind::ramified: {
                if (auto r = detail::ramified_residue(a, b, f, p.x0, prec))
                    return ResidueValue::of(std::move(*r));
                break;
            }
            case Place::Kind::infinite: {
                if (auto r = detail::infinite_residue(a, b, f, p.branch, prec))
                    return ResidueValue::of(std::move(*r));
                break;
            }
            case Place::Kind::block_ramified: {
                using M = ModPoly<Scalar>;
                const auto ctx = M::make_ctx(p.g);
                if (auto r = detail::ramified_residue(a, b, f, M::generator(ctx), prec))
                    return ResidueValue::of(*r + M(ctx, {}));
                break;
            }
            case Place::Kind::block: {
                using M = ModPoly<Scalar>;
                using N = ModPoly<M>;
                const auto ctx = M::make_ctx(p.g);
                const M fbar = detail::reduce_mod_block(f, ctx);
                const auto wctx = N::make_ctx(UPoly<M>({-fbar, M{}, M(1)}));
                const N w = N::generator(wctx);
                const auto sa = detail::lift_series<N>(expand_at_block(a, ctx, prec));
                const auto sb = detail::lift_series<N>(expand_at_block(b, ctx, prec));
                const auto sf =
                    detail::lift_series<N>(expand_at_block(RatF<Scalar>(f), ctx, prec));
                if (auto r = detail::branch_residue(sa, sb, sf, w))
                    return ResidueValue::of(*r + N(wctx, {}));
                break;
            }
            case Place::Kind::block_split: {
                using M = ModPoly<Scalar>;
                const auto ctx = M::make_ctx(p.g);
                const M w0(ctx, p.w0);
                const auto sa = expand_at_block(a, ctx, prec);
                const auto sb = expand_at_block(b, ctx, prec);
                const auto sf = expand_at_block(RatF<Scalar>(f), ctx, prec);
                if (auto r = detail::branch_residue(sa, sb, sf, w0))
                    return ResidueValue::of(*r + M(ctx, {}));
                break;
            }
        }
    }
    throw error("residue did not stabilize at " + to_string(p) + "; the form is too singular");
}

// ------------------------------------------------- support and divisors

namespace detail {
struct XLoci {
    std::vector<Scalar> roots;             // tower points
    std::vector<UPoly<Scalar>> blocks;     // monic squarefree factors, deg >= 2
};

// The x-line support of a set of polynomials, as tower roots plus blocks.
// The squarefree parts of the inputs are refined into a pairwise-coprime
// basis (repeated gcds), each piece is split against `against` (so that
// factors of the ramification locus never hide inside a larger block), and
// every piece the tower can solve is turned into explicit roots.  Pieces of
// degree >= 3 that survive are blocks under the assumed-irreducible
// convention; a zero divisor met later surfaces as reducible_error.
inline XLoci split_x_loci(const std::vector<UPoly<Scalar>>& inputs,
                          const UPoly<Scalar>& against) {
    auto monic = [](const UPoly<Scalar>& q) {
        return q * (Scalar(1) / q.coeff(static_cast<std::size_t>(q.deg())));
    };

    // pairwise-coprime basis of the squarefree parts
    std::vector<UPoly<Scalar>> basis;
    auto insert = [&](const UPoly<Scalar>& q0) {
        std::vector<UPoly<Scalar>> queue{q0};
        while (!queue.empty()) {
            UPoly<Scalar> cur = queue.back();
            queue.pop_back();
            if (cur.deg() < 1) continue;
            cur = monic(cur);
            for (std::size_t i = 0; i < basis.size() && cur.deg() >= 1; ++i) {
                const UPoly<Scalar> d = gcd(cur, basis[i]);
                if (d.deg() < 1) continue;
                if (d.deg() < basis[i].deg()) {
                    // refine basis[i] = d * rest; both stay pairwise coprime
                    const UPoly<Scalar> rest = basis[i] / d;
                    basis[i] = d;
                    basis.push_back(rest);
                }
                cur = cur / d;
            }
            if (cur.deg() >= 1) basis.push_back(cur);
        }
    };
    for (const auto& p : inputs)
        for (const auto& [g, mult] : squarefree_decomposition(p)) {
            (void)mult;
            insert(g);
        }

    // split each piece against the reference polynomial
    for (std::size_t i = 0; i < basis.size(); ++i) {
        const UPoly<Scalar> d = gcd(basis[i], against);
        if (d.deg() >= 1 && d.deg() < basis[i].deg()) {
            const UPoly<Scalar> rest = basis[i] / d;
            basis[i] = d;
            basis.push_back(rest);
        }
    }

    // pull out every root the tower can see
    XLoci out;
    for (const auto& piece : basis) {
        UPoly<Scalar> rest = piece;
        for (const auto& root : roots_in_field(piece)) {
            out.roots.push_back(root);
            rest = rest / UPoly<Scalar>({-root, Scalar(1)});
        }
        if (rest.deg() == 1) out.roots.push_back(-rest.coeff(0));
        else if (rest.deg() >= 2) out.blocks.push_back(rest);
    }
    return out;
}

// Branch data of h = A + B z over a nonramified block: the valuation of the
// series on the symbolic branch z = W (which is min over the two geometric
// branches) together with the leading coefficient split as (a, b) with
// c = a + b W.
struct BlockLead {
    int val = 0;
    ModPoly<Scalar> a, b;
};

template <class N>
std::optional<BlockLead> block_series_lead(const LaurentSeries<N>& s) {
    if (!s.has_valuation()) return std::nullopt;
    const int m = s.valuation();
    const auto c = s.coeff(m);
    const auto& v = c.value();  // UPoly over the block ring
    BlockLead out;
    out.val = m;
    out.a = v.deg() >= 0 ? v.coeff(0) : ModPoly<Scalar>{};
    out.b = v.deg() >= 1 ? v.coeff(1) : ModPoly<Scalar>{};
    return out;
}

inline std::optional<BlockLead> nonram_block_lead(const QuadField& k, const QuadElt& h,
                                                  const UPoly<Scalar>& g, int prec) {
    using M = ModPoly<Scalar>;
    using N = ModPoly<M>;
    const auto ctx = M::make_ctx(g);
    const M fbar = reduce_mod_block(k.f(), ctx);
    const auto wctx = N::make_ctx(UPoly<M>({-fbar, M{}, M(1)}));
    const auto sa = lift_series<N>(expand_at_block(h.rat_part(), ctx, prec));
    const auto sb = lift_series<N>(expand_at_block(h.alg_part(), ctx, prec));
    const auto sf = lift_series<N>(expand_at_block(RatF<Scalar>(k.f()), ctx, prec));
    return block_series_lead(sa + sb * sf.sqrt_with(N::generator(wctx)));
}
}  // namespace detail

struct ResidueEntry {
    Place place;
    ResidueValue residue;
};

// All nonzero residues of the differential (A + B z) dx.  Poles can only sit
// over the denominators of A and B and at the two places at infinity, so the
// support enumeration walks exactly those loci.
inline std::vector<ResidueEntry> residue_divisor(const QuadField& k, const QuadElt& gf) {
    const UPoly<Scalar>& f = k.f();
    const RatF<Scalar>& a = gf.rat_part();
    const RatF<Scalar>& b = gf.alg_part();
    std::vector<ResidueEntry> out;
    auto push = [&](const Place& p) {
        ResidueValue r = residue_at_place(k, gf, p);
        if (!r.is_zero()) out.push_back({p, std::move(r)});
    };

    const auto loci = detail::split_x_loci({a.den(), b.den()}, f);
    for (const auto& x0 : loci.roots) {
        const Scalar fx = f.eval(x0);
        if (fx.is_zero()) {
            push(Place::ramified_at(x0));
        } else if (auto z0 = try_sqrt(fx)) {
            push(Place::split_at(x0, *z0));
            push(Place::split_at(x0, -*z0));
        } else {
            push(Place::quad_at(x0));
        }
    }
    for (const auto& g : loci.blocks) {
        const bool ram = detail::factor_multiplicity(f, g) > 0;
        push(Place::block_at(g, ram));
    }
    push(Place::at_infinity(+1));
    push(Place::at_infinity(-1));
    return out;
}

// ------------------------------------------------------------ valuations

// Valuation of a nonzero function h = A + B z at a place.  At involution-
// fixed places (ramified and their blocks) this is read off exactly from
// norm(h) = A^2 - B^2 f; elsewhere a series expansion is used, with the
// block caveat from the header comment.
inline int valuation_at_place(const QuadField& k, const QuadElt& h, const Place& p) {
    if (h.is_zero()) throw error("valuation of the zero function");
    const UPoly<Scalar>& f = k.f();
    const RatF<Scalar>& a = h.rat_part();
    const RatF<Scalar>& b = h.alg_part();
    const RatF<Scalar> nm = h.norm();
    switch (p.kind) {
        case Place::Kind::ramified:
            return root_multiplicity(nm.num(), p.x0) - root_multiplicity(nm.den(), p.x0);
        case Place::Kind::block_ramified:
            return detail::factor_multiplicity(nm.num(), p.g) -
                   detail::factor_multiplicity(nm.den(), p.g);
        case Place::Kind::quad: {
            // the two branches are Galois conjugate, so they share the value
            const int v = val_at(nm, p.x0);
            if (v % 2 != 0) throw error("odd norm valuation at a quadratic point");
            return v / 2;
        }
        default: break;
    }
    for (int prec = 8; prec <= 512; prec *= 2) {
        switch (p.kind) {
            case Place::Kind::split: {
                const auto sa = expand_at(a, p.x0, prec);
                const auto sb = expand_at(b, p.x0, prec);
                const auto sf = expand_at(RatF<Scalar>(f), p.x0, prec);
                const auto s = sa + sb * sf.sqrt_with(p.z0);
                if (s.has_valuation()) return s.valuation();
                break;
            }
            case Place::Kind::infinite: {
                const auto sa = expand_at_infinity(a, prec);
                const auto sb = expand_at_infinity(b, prec);
                std::vector<Scalar> rev(f.coeffs().rbegin(), f.coeffs().rend());
                const auto w = LaurentSeries<Scalar>::from_poly(UPoly<Scalar>(std::move(rev)), prec)
                                   .sqrt_with(Scalar(1));
                const auto z =
                    (w * LaurentSeries<Scalar>::monomial(Scalar(p.branch), 0, prec)).shifted_by(-2);
                const auto s = sa + sb * z;
                if (s.has_valuation()) return s.valuation();
                break;
            }
            case Place::Kind::block: {
                // the series on the symbolic branch z = W has the minimum of
                // the two geometric branch valuations; the norm carries their
                // sum.  When the two disagree the fiber provably splits and a
                // single number would be a lie, so refuse and point at the
                // branch places instead (function_divisor constructs them).
                if (const auto lead = detail::nonram_block_lead(k, h, p.g, prec)) {
                    const int vnorm = detail::factor_multiplicity(nm.num(), p.g) -
                                      detail::factor_multiplicity(nm.den(), p.g);
                    if (2 * lead->val != vnorm)
                        throw error("the fiber over " + to_string(p.g, "y") +
                                    " splits for this function; use its branch places");
                    // the reduced function must be a unit across the whole
                    // fiber, or the "valuation" would mix different numbers
                    const ModPoly<Scalar> u =
                        lead->a * lead->a -
                        lead->b * lead->b *
                            detail::reduce_mod_block(f, ModPoly<Scalar>::make_ctx(p.g));
                    const auto d = gcd(u.value(), p.g);
                    if (d.deg() >= 1)
                        throw error("the block " + to_string(p.g, "y") +
                                    " factors (a piece: " + to_string(d, "y") +
                                    "); its points carry different valuations");
                    return lead->val;
                }
                break;
            }
            case Place::Kind::block_split: {
                using M = ModPoly<Scalar>;
                const auto ctx = M::make_ctx(p.g);
                const auto sa = expand_at_block(a, ctx, prec);
                const auto sb = expand_at_block(b, ctx, prec);
                const auto sf = expand_at_block(RatF<Scalar>(f), ctx, prec);
                const auto s = sa + sb * sf.sqrt_with(M(ctx, p.w0));
                if (s.has_valuation()) {
                    const M c = s.coeff(s.valuation());
                    const auto d = gcd(c.value(), p.g);
                    if (d.deg() >= 1)
                        throw error("the block " + to_string(p.g, "y") +
                                    " factors (a piece: " + to_string(d, "y") +
                                    "); its points carry different valuations");
                    return s.valuation();
                }
                break;
            }
            default: break;
        }
    }
    throw error("valuation did not stabilize at " + to_string(p));
}

struct PlaceValuation {
    Place place;
    int val = 0;
};

// The full divisor of a nonzero function h = A + B z: places over the
// denominators of A and B, over the zeros of norm(h), over the ramification
// locus, and at infinity.
//
// Over a nonramified block the two branch valuations need not agree: their
// sum is the norm valuation, their minimum is the symbolic-branch series
// valuation.  When they differ, the fiber provably splits and the function
// itself hands over the witness -- the leading series coefficient a + b W
// vanishes on one branch, so w0 = -a/b satisfies w0^2 = f mod g -- and the
// divisor reports the two branch places separately and exactly.
inline std::vector<PlaceValuation> function_divisor(const QuadField& k, const QuadElt& h) {
    if (h.is_zero()) throw error("divisor of the zero function");
    const UPoly<Scalar>& f = k.f();
    const RatF<Scalar> nm = h.norm();
    std::vector<UPoly<Scalar>> carriers = {h.rat_part().den(), h.alg_part().den(), f,
                                           nm.num(), nm.den()};

    std::vector<PlaceValuation> out;
    auto push = [&](const Place& p) {
        const int v = valuation_at_place(k, h, p);
        if (v != 0) out.push_back({p, v});
    };
    const auto loci = detail::split_x_loci(carriers, f);
    for (const auto& x0 : loci.roots) {
        const Scalar fx = f.eval(x0);
        if (fx.is_zero()) {
            push(Place::ramified_at(x0));
        } else if (auto z0 = try_sqrt(fx)) {
            push(Place::split_at(x0, *z0));
            push(Place::split_at(x0, -*z0));
        } else {
            push(Place::quad_at(x0));
        }
    }
    for (const auto& g : loci.blocks) {
        if (detail::factor_multiplicity(f, g) > 0) {
            push(Place::block_at(g, true));
            continue;
        }
        const int vnorm = detail::factor_multiplicity(nm.num(), g) -
                          detail::factor_multiplicity(nm.den(), g);
        std::optional<detail::BlockLead> lead;
        for (int prec = 8; prec <= 512 && !lead; prec *= 2)
            lead = detail::nonram_block_lead(k, h, g, prec);
        if (!lead) throw error("valuation did not stabilize over " + to_string(g, "y"));
        if (2 * lead->val == vnorm) {
            // branch-symmetric: one bundled entry covers the whole fiber
            // (push re-derives the valuation, which also verifies that the
            // reduced function is a unit across the fiber)
            if (lead->val != 0) push(Place::block_at(g, false));
            continue;
        }
        // asymmetric branches: recover the splitting witness from the lead
        using M = ModPoly<Scalar>;
        const auto ctx = M::make_ctx(g);
        if (lead->b.is_zero())
            throw error("branch asymmetry without an algebraic part over " + to_string(g, "y"));
        const M w0 = -(lead->a * lead->b.inverse());
        if (!(w0 * w0 == detail::reduce_mod_block(f, ctx)))
            throw error("inconsistent branch witness over " + to_string(g, "y"));
        const Place hi = Place::block_split_at(g, w0.value());
        const Place lo = Place::block_split_at(g, (-w0).value());
        const int vhi = valuation_at_place(k, h, hi);
        const int vlo = valuation_at_place(k, h, lo);
        if (vhi + vlo != vnorm)
            throw error("branch valuations disagree with the norm over " + to_string(g, "y"));
        if (vhi != 0) out.push_back({hi, vhi});
        if (vlo != 0) out.push_back({lo, vlo});
    }
    push(Place::at_infinity(+1));
    push(Place::at_infinity(-1));
    return out;
}

// Degree of a divisor: sum of val * deg(place); zero for a principal one.
inline int divisor_degree(const std::vector<PlaceValuation>& d) {
    int total = 0;
    for (const auto& e : d) total += e.val * e.place.degree();
    return total;
}

}  // namespace diffalg
