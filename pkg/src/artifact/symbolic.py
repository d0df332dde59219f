"""Poisson brackets, normal forms, and the column reduction pipeline.

Coordinates ``y_i_j`` (strictly lower positions) carry the Lie-Poisson
bracket {y_ij, y_kl} = [j==k] y_il - [l==i] y_kj.  Constants ``c_i_j``
are central parameters.  The column reduction peels canonical pairs off
each column of a maximal diagram and accumulates one generator per
closure root; the result is a triangular ideal handle with decidable
membership.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Optional, Tuple

from ._poly import (
    FieldMismatch,
    LocalizedPolynomial,
    Polynomial,
    coerce_scalar,
    poly_text,
)
from .admissible import NotMaximal, is_maximal
from .root_system import (
    Root,
    c_split,
    columns_and_chain,
    lex_greater,
    lex_sort_key,
    positive_roots,
)

__all__ = [
    "FieldMismatch", "IdealHandle", "LocalizedPolynomial",
    "NotCanonicalPair", "NotMaximal", "Polynomial", "Rule",
    "UnsupportedColumn", "UnsupportedIdealShape", "bracket", "build_ideal",
    "c_var", "const", "evaluate", "initial_context", "is_casimir_mod",
    "is_poisson_ideal", "loc", "poly_text", "reduce_column", "tilde_map",
    "y_var",
]


class UnsupportedColumn(ValueError):
    """The column's pick pattern is outside the supported reduction cases."""


class UnsupportedIdealShape(ValueError):
    """The generators do not triangularize, so membership is undecidable
    here (the zero element is always recognized)."""


class NotCanonicalPair(ValueError):
    """The pair's bracket is not congruent to one modulo the ideal."""


# --- element constructors ----------------------------------------------

def y_var(row: int, col: int, p: Optional[int] = None) -> Polynomial:
    return Polynomial.variable(("y", row, col), p)


def c_var(root: Root, p: Optional[int] = None) -> Polynomial:
    return Polynomial.variable(("c", root.row, root.col), p)


def const(value, p: Optional[int] = None) -> Polynomial:
    return Polynomial({(): value}, p)


def loc(num: Polynomial, den=None) -> LocalizedPolynomial:
    return LocalizedPolynomial(num, den)


def _as_loc(x, p: Optional[int] = None) -> LocalizedPolynomial:
    if isinstance(x, LocalizedPolynomial):
        return x
    if isinstance(x, Polynomial):
        return LocalizedPolynomial(x)
    if isinstance(x, (int, Fraction)):
        return LocalizedPolynomial(Polynomial({(): x}, p))
    raise TypeError(f"cannot interpret {type(x).__name__} as an element")


# --- the bracket --------------------------------------------------------

def _partial(poly: Polynomial, key) -> Polynomial:
    out: Dict = {}
    for mono, coef in poly.terms.items():
        d = dict(mono)
        e = d.get(key, 0)
        if not e:
            continue
        if e == 1:
            d.pop(key)
        else:
            d[key] = e - 1
        m2 = tuple(sorted(d.items()))
        out[m2] = out.get(m2, 0) + coef * e
    return Polynomial(out, poly.p)


def _bracket_vars(a, b, p: Optional[int]) -> Polynomial:
    if a[0] != "y" or b[0] != "y":
        return Polynomial.zero(p)
    _, i, j = a
    _, k, l = b
    out = Polynomial.zero(p)
    if j == k:
        out = out + y_var(i, l, p)
    if l == i:
        out = out - y_var(k, j, p)
    return out


def _bracket_poly(f: Polynomial, g: Polynomial) -> Polynomial:
    if f.p != g.p:
        raise FieldMismatch(f"mixed coefficient fields: {f.p} vs {g.p}")
    p = f.p
    out = Polynomial.zero(p)
    f_y = [k for k in f.variables() if k[0] == "y"]
    g_y = [k for k in g.variables() if k[0] == "y"]
    for a in f_y:
        df = _partial(f, a)
        if df.is_zero():
            continue
        for b in g_y:
            base = _bracket_vars(a, b, p)
            if base.is_zero():
                continue
            dg = _partial(g, b)
            if dg.is_zero():
                continue
            out = out + df * dg * base
    return out


def bracket(f, g):
    """Poisson bracket; returns a Polynomial for polynomial inputs and a
    LocalizedPolynomial when either side has a denominator."""
    if isinstance(f, Polynomial) and isinstance(g, Polynomial):
        return _bracket_poly(f, g)
    fl = _as_loc(f)
    gl = _as_loc(g)
    a, b = fl.num, fl.den
    c, d = gl.num, gl.den
    num = (_bracket_poly(a, c) * b * d
           - _bracket_poly(a, d) * b * c
           - _bracket_poly(b, c) * a * d
           + _bracket_poly(b, d) * a * c)
    return LocalizedPolynomial(num, b * b * d * d)


# --- evaluation ---------------------------------------------------------

def evaluate(expr, form):
    """Evaluate at a linear form (an object with .p and .value(root)).

    Rational expressions may be evaluated at finite-field forms (the
    coefficients reduce mod p); a finite-field expression requires a form
    over the same prime.
    """
    target = form.p
    if isinstance(expr, LocalizedPolynomial):
        num = evaluate(expr.num, form)
        den = evaluate(expr.den, form)
        if den == 0:
            raise ZeroDivisionError("denominator vanishes at the form")
        if target is None:
            return Fraction(num) / Fraction(den)
        return (num * pow(den, -1, target)) % target
    if not isinstance(expr, Polynomial):
        expr = const(expr, target)
    if expr.p is not None and expr.p != target:
        raise FieldMismatch(
            f"expression over p={expr.p} evaluated at a form over "
            f"p={target}")
    total = Fraction(0) if target is None else 0
    for mono, coef in expr.terms.items():
        val = coerce_scalar(coef, target)
        for key, exp in mono:
            if key[0] != "y":
                raise ValueError(f"unbound variable {key} in evaluation")
            point = coerce_scalar(form.value(Root(key[1], key[2])), target)
            if target is None:
                val *= point ** exp
            else:
                val = (val * pow(point, exp, target)) % target
        total = total + val
    return total if target is None else total % target


# --- triangular ideal handles ------------------------------------------

@dataclass(frozen=True)
class Rule:
    """One triangular relation den * y_root + rest = 0."""
    root: Root
    den: Polynomial
    rest: Polynomial

    @property
    def value(self) -> LocalizedPolynomial:
        return LocalizedPolynomial(-self.rest, self.den)


def _subst_poly(poly: Polynomial, key,
                rep: LocalizedPolynomial) -> LocalizedPolynomial:
    top = poly.degree_in(key)
    if top == 0:
        return LocalizedPolynomial(poly)
    acc = Polynomial.zero(poly.p)
    for exp in range(top + 1):
        part = poly.coefficient_of(key, exp)
        if part.is_zero():
            continue
        acc = acc + part * (rep.num ** exp) * (rep.den ** (top - exp))
    return LocalizedPolynomial(acc, rep.den ** top)


def _subst_loc(val: LocalizedPolynomial, key,
               rep: LocalizedPolynomial) -> LocalizedPolynomial:
    return _subst_poly(val.num, key, rep) / _subst_poly(val.den, key, rep)


class IdealHandle:
    """Generators plus, when they triangularize, a substitution system."""

    def __init__(self, n: int, generators: List[Polynomial],
                 rules: Optional[Dict[Root, Rule]],
                 invertible: Tuple[Root, ...], p: Optional[int] = None):
        self.n = n
        self.generators = list(generators)
        self.rules = rules
        self.invertible = tuple(invertible)
        self.p = p

    @classmethod
    def zero(cls, n: int) -> "IdealHandle":
        return cls(n, [], {}, ())

    @classmethod
    def from_generators(cls, n: int, generators, invertible=None
                        ) -> "IdealHandle":
        generators = list(generators)
        inv = tuple(invertible or ())
        inv_set = set(inv)
        p = generators[0].p if generators else None
        rules: Optional[Dict[Root, Rule]] = {}
        for gen in generators:
            if gen.is_zero():
                continue
            # Reduce by the rules extracted so far; pivots must be sought in
            # the reduced form, whose leading coefficients can simplify to
            # units even when the raw ones do not.
            red_loc = _as_loc(gen, gen.p)
            for prev in sorted(rules, key=lex_sort_key, reverse=True):
                pk = ("y", prev.row, prev.col)
                red_loc = _subst_loc(red_loc, pk, rules[prev].value)
            red = red_loc.num
            if red.is_zero():
                continue
            found = None
            y_roots = sorted(
                {Root(k[1], k[2]) for k in red.variables() if k[0] == "y"},
                key=lex_sort_key, reverse=True)  # least root first
            for v in y_roots:
                key = ("y", v.row, v.col)
                if red.degree_in(key) != 1:
                    continue
                den = red.coefficient_of(key, 1)
                rest = red - den * Polynomial.variable(key, gen.p)
                good = True
                for dk in den.variables():
                    if dk[0] != "y":
                        continue
                    r = Root(dk[1], dk[2])
                    if r not in inv_set or not lex_greater(r, v):
                        good = False
                        break
                if good:
                    for mono in rest.terms:
                        for rk, _e in mono:
                            if rk[0] == "y" and not lex_greater(
                                    Root(rk[1], rk[2]), v):
                                good = False
                if good:
                    found = (v, den, rest)
                    break
            if found is None or (rules is not None and found[0] in rules):
                rules = None
                break
            rules[found[0]] = Rule(found[0], found[1], found[2])
        return cls(n, generators, rules, inv, p)

    def _rule_order(self) -> List[Root]:
        # least root first: substituting upward eliminates each variable
        # once, because every rule's right side only involves greater roots.
        return sorted(self.rules, key=lex_sort_key, reverse=True)

    def normal_form(self, x) -> LocalizedPolynomial:
        val = _as_loc(x, self.p)
        if self.rules is None:
            raise UnsupportedIdealShape(
                "generators did not triangularize; no normal form")
        for root in self._rule_order():
            key = ("y", root.row, root.col)
            val = _subst_loc(val, key, self.rules[root].value)
        return val

    def contains(self, x) -> bool:
        val = _as_loc(x, self.p)
        if val.num.is_zero():
            return True
        if self.rules is None:
            raise UnsupportedIdealShape(
                "generators did not triangularize; membership undecidable")
        return self.normal_form(val).num.is_zero()


def is_casimir_mod(z, handle: IdealHandle) -> bool:
    """True when z brackets into the ideal with every coordinate."""
    p = z.p if isinstance(z, Polynomial) else z.num.p
    for r in positive_roots(handle.n):
        if not handle.contains(bracket(z, y_var(r.row, r.col, p))):
            return False
    return True


def is_poisson_ideal(handle: IdealHandle) -> bool:
    for gen in handle.generators:
        for r in positive_roots(handle.n):
            if not handle.contains(bracket(gen, y_var(r.row, r.col, gen.p))):
                return False
    return True


# --- the twist map ------------------------------------------------------

def _series(val: LocalizedPolynomial, p_elt: LocalizedPolynomial,
            q_elt: LocalizedPolynomial, limit: int) -> LocalizedPolynomial:
    """sum_s (-1)^s/s! ad_p^s(val) q^s; the adjoint action must be
    nilpotent within ``limit`` steps."""
    field = val.p
    acc = val
    cur = val
    factorial = 1
    for s in range(1, limit + 1):
        cur = bracket(p_elt, cur)
        cur = _as_loc(cur, field)
        if cur.num.is_zero():
            return acc
        factorial *= s
        if field is not None and factorial % field == 0:
            raise UnsupportedColumn(
                f"series coefficient 1/{s}! undefined mod {field}")
        coef = Fraction((-1) ** s, factorial)
        acc = acc + cur * (q_elt ** s) * coef
    raise UnsupportedColumn("adjoint series did not terminate")


def tilde_map(x, p_elt, q_elt, ideal: IdealHandle):
    """Twist x by the canonical pair (p, q); requires {p, q} = 1 modulo
    the given ideal."""
    pl = _as_loc(p_elt)
    ql = _as_loc(q_elt)
    pb = _as_loc(bracket(pl, ql), pl.p)
    if not ideal.contains(pb - 1):
        raise NotCanonicalPair(
            "the pair's bracket is not one modulo the ideal")
    limit = ideal.n * ideal.n + 2
    return _series(_as_loc(x, pl.p), pl, ql, limit)


# --- column reduction ---------------------------------------------------

def _column_case(xis, bset) -> int:
    """1: lone cross; 2: cross sharing its column with a box; 3: no cross."""
    crosses = [r for r, is_x in xis if is_x]
    if len(crosses) >= 2:
        raise UnsupportedColumn(
            f"two crosses in one column: {crosses[0]!r}, {crosses[1]!r}")
    if not crosses:
        return 3
    boxes = [r for r, is_x in xis if not is_x]
    return 2 if boxes else 1


class ReductionContext:
    """Mutable state threaded through the per-column reduction."""

    def __init__(self, s, cmap: Dict[Root, Polynomial]):
        self.s = s
        self.n = s.n
        self.cmap = cmap
        self.tmaps: List[Tuple[LocalizedPolynomial, LocalizedPolynomial]] = []
        self.gens: List[Polynomial] = []
        self.handle: IdealHandle = IdealHandle.zero(s.n)
        self._var_cache: Dict = {}


def initial_context(s, c=None) -> ReductionContext:
    cmap: Dict[Root, Polynomial] = {}
    for r in s.xi:
        if c is None:
            cmap[r] = c_var(r)
        else:
            cmap[r] = const(c.get(r, 0))
    return ReductionContext(s, cmap)


def _map_var(ctx: ReductionContext, pair_index: int, key
             ) -> LocalizedPolynomial:
    cache_key = (pair_index, key)
    hit = ctx._var_cache.get(cache_key)
    if hit is not None:
        return hit
    pl, ql = ctx.tmaps[pair_index]
    base = LocalizedPolynomial(Polynomial.variable(key))
    if key[0] != "y":
        out = base
    else:
        out = _series(base, pl, ql, ctx.n * ctx.n + 2)
    ctx._var_cache[cache_key] = out
    return out


def _hom_apply(ctx: ReductionContext, pair_index: int,
               poly: Polynomial) -> LocalizedPolynomial:
    acc = LocalizedPolynomial(Polynomial.zero(poly.p))
    for mono, coef in poly.terms.items():
        term = LocalizedPolynomial(const(coef, poly.p))
        for key, exp in mono:
            term = term * (_map_var(ctx, pair_index, key) ** exp)
        acc = acc + term
    return acc


def _apply_tmap(ctx: ReductionContext, pair_index: int,
                val: LocalizedPolynomial) -> LocalizedPolynomial:
    num = _hom_apply(ctx, pair_index, val.num)
    den = _hom_apply(ctx, pair_index, val.den)
    if den.num.is_zero():
        raise UnsupportedColumn("denominator image vanished identically")
    return num / den


def reduce_column(ctx: ReductionContext, s, t: int, c=None):
    """Process column t: derive its canonical pairs, push the images of
    the column's closure roots through the accumulated maps, and extend
    the ideal by their cleared generators.

    Returns (pairs, images, ideal).
    """
    _deltas, bs = columns_and_chain(s)
    bset = bs[t - 1]
    xis = [(r, is_x) for r, is_x in zip(s.xi, s.otimes_mask) if r.col == t]
    case = _column_case(xis, set(bset))
    new_pairs: List[Tuple[LocalizedPolynomial, LocalizedPolynomial]] = []
    if case in (1, 2):
        cross = next(r for r, is_x in xis if is_x)
        plus, _minus = c_split(cross, bset)
        y_cross = y_var(cross.row, cross.col)
        if case == 1:
            for gamma in plus:  # iteration is greatest-first peel order
                delta = Root(cross.row, gamma.row)
                new_pairs.append((loc(y_var(delta.row, delta.col)),
                                  loc(y_var(gamma.row, gamma.col), y_cross)))
        else:
            boxes = [r for r, is_x in xis if not is_x]
            for gamma in plus:  # greatest-first peel order, as in case 1
                delta = Root(cross.row, gamma.row)
                # Only a box strictly inside the row span of the delta
                # side obstructs it; boxes outside the span leave the
                # delta side free to carry the denominator.
                blocked = any(gamma.row < b.row < cross.row for b in boxes)
                if not blocked:
                    pair = (loc(y_var(delta.row, delta.col), y_cross),
                            loc(y_var(gamma.row, gamma.col)))
                else:
                    pair = (loc(y_var(gamma.row, gamma.col)),
                            loc(-y_var(delta.row, delta.col), y_cross))
                check = _as_loc(bracket(pair[0], pair[1])) - 1
                if not check.num.is_zero():
                    raise UnsupportedColumn(
                        f"column {t} pair is not canonical")
                new_pairs.append(pair)
    # Within a column the last peeled pair acts first.
    ctx.tmaps.extend(reversed(new_pairs))
    images: Dict[Root, LocalizedPolynomial] = {}
    for eta in (r for r in s.a_set if r.col == t):
        val = _as_loc(y_var(eta.row, eta.col))
        # Later columns act innermost: their pairs are peeled off first.
        for index in reversed(range(len(ctx.tmaps))):
            val = _apply_tmap(ctx, index, val)
        images[eta] = val
    for eta, val in images.items():
        cval = ctx.cmap.get(eta, Polynomial.zero())
        ctx.gens.append(val.num - cval * val.den)
    ctx.handle = IdealHandle.from_generators(
        s.n, list(ctx.gens), invertible=list(s.s_otimes))
    return new_pairs, images, ctx.handle


def build_ideal(s, c=None) -> IdealHandle:
    """The defining ideal of the family attached to a maximal diagram.

    With ``c is None`` the generators carry symbolic constants c_i_j;
    otherwise ``c`` maps each pick to its value.
    """
    if not is_maximal(s):
        raise NotMaximal("the diagram admits a proper extension")
    ctx = initial_context(s, c)
    for t in range(1, s.n):
        reduce_column(ctx, s, t, c)
    return ctx.handle
