"""Characteristic-matrix minors and the invariants they generate.

The characteristic matrix of the generic point has ones on the diagonal,
``tau * y_i_j`` below it, and zeros above.  Square minors of this matrix,
read off by their tau-coefficients, provide orbit invariants: one family
indexed by the closure roots of a maximal diagram (the triangular
system), and the fixed families used for regular and subregular orbits.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Dict, List, Optional, Sequence, Tuple

from ._poly import LocalizedPolynomial, Polynomial
from .root_system import Root, lex_greater, lex_sort_key
from .symbolic import _subst_loc, c_var, const, loc, y_var

__all__ = [
    "LemmaFailure", "MinorSpec", "NotInA", "TauPolynomial", "WEta",
    "bordered_minors", "h_subset", "minor", "p_h_eta", "p_n0_prime",
    "phi_tau", "regular_minors", "triangular_system", "w_eta",
    "z_coefficients",
]

_TAU = ("tau",)


class NotInA(KeyError):
    """The root is not a closure root of the diagram."""


class LemmaFailure(ArithmeticError):
    """An invariant failed to reduce to the expected linear shape."""


def phi_tau(n: int) -> List[List[Polynomial]]:
    """The n-by-n characteristic matrix, 0-indexed."""
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            if i == j:
                row.append(const(1))
            elif i > j:
                row.append(Polynomial.variable(_TAU) * y_var(i + 1, j + 1))
            else:
                row.append(Polynomial.zero())
        rows.append(row)
    return rows


@dataclass(frozen=True)
class MinorSpec:
    cols: Tuple[int, ...]
    rows: Tuple[int, ...]


class TauPolynomial:
    """A polynomial split by tau-degree; coefficients are tau-free."""

    def __init__(self, parts: Dict[int, Polynomial],
                 p: Optional[int] = None):
        self._parts = {k: v for k, v in parts.items() if not v.is_zero()}
        self.p = p

    @classmethod
    def from_polynomial(cls, poly: Polynomial) -> "TauPolynomial":
        parts: Dict[int, Polynomial] = {}
        for mono, coef in poly.terms.items():
            rest = []
            deg = 0
            for key, exp in mono:
                if key == _TAU:
                    deg = exp
                else:
                    rest.append((key, exp))
            part = parts.get(deg, Polynomial.zero(poly.p))
            parts[deg] = part + Polynomial({tuple(rest): coef}, poly.p)
        return cls(parts, poly.p)

    def coeff(self, k: int) -> Polynomial:
        return self._parts.get(k, Polynomial.zero(self.p))

    def degrees(self) -> List[int]:
        return sorted(self._parts)


def _det_cofactor(m: Sequence[Sequence[Polynomial]]) -> Polynomial:
    size = len(m)
    if size == 0:
        return const(1)
    if size == 1:
        return m[0][0]
    total = Polynomial.zero(m[0][0].p)
    for r in range(size):
        if m[r][0].is_zero():
            continue
        sub = [row[1:] for i, row in enumerate(m) if i != r]
        term = m[r][0] * _det_cofactor(sub)
        total = total + term if r % 2 == 0 else total - term
    return total


def _det_bareiss(m: Sequence[Sequence[Polynomial]]) -> Polynomial:
    size = len(m)
    if size == 0:
        return const(1)
    a = [list(row) for row in m]
    p = a[0][0].p
    sign = 1
    prev = const(1, p)
    for k in range(size - 1):
        if a[k][k].is_zero():
            swap = next((r for r in range(k + 1, size)
                         if not a[r][k].is_zero()), None)
            if swap is None:
                return Polynomial.zero(p)
            a[k], a[swap] = a[swap], a[k]
            sign = -sign
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                num = a[i][j] * a[k][k] - a[i][k] * a[k][j]
                a[i][j] = num.exact_div(prev)
        prev = a[k][k]
    det = a[size - 1][size - 1]
    return det if sign > 0 else -det


def minor(n: int, spec: MinorSpec) -> TauPolynomial:
    cols = tuple(spec.cols)
    rows = tuple(spec.rows)
    if len(cols) != len(rows):
        raise ValueError(
            f"minor needs a square selection, got {len(rows)} rows "
            f"and {len(cols)} columns")
    if not cols:
        raise ValueError("empty minor")
    for idx in cols + rows:
        if not 1 <= idx <= n:
            raise ValueError(f"index {idx} outside 1..{n}")
    m = phi_tau(n)
    sub = [[m[r - 1][c - 1] for c in cols] for r in rows]
    det = _det_bareiss(sub) if len(sub) >= 4 else _det_cofactor(sub)
    return TauPolynomial.from_polynomial(det)


# --- the word attached to a closure root --------------------------------

@dataclass(frozen=True)
class WEta:
    rows: Tuple[int, ...]
    q: int
    d: int


def _w_perm(s, eta: Root) -> Dict[int, int]:
    """The permutation: reflect in eta first, then in each marked pick
    lex-greater than eta, least of those first."""
    perm = {m: m for m in range(1, s.n + 1)}

    def apply(root: Root) -> None:
        for m in perm:
            if perm[m] == root.row:
                perm[m] = root.col
            elif perm[m] == root.col:
                perm[m] = root.row

    apply(eta)
    betas = [b for b in s.s_otimes if lex_greater(b, eta)]
    for b in sorted(betas, key=lex_sort_key, reverse=True):  # least first
        apply(b)
    return perm


def w_eta(s, eta: Root) -> WEta:
    if eta not in s.a_set:
        raise NotInA(f"{eta!r} is not a closure root of the diagram")
    j = eta.col
    perm = _w_perm(s, eta)
    image = sorted(perm[m] for m in range(1, j + 1))
    q = sum(1 for m in range(1, j + 1) if m not in set(image))
    d = sum(1 for m, r in enumerate(image, start=1) if r > m)
    return WEta(tuple(image), q, d)


def h_subset(s, eta: Root) -> Tuple[frozenset, int]:
    """The unique sub-collection of marked picks above eta whose root sum
    matches the defect of the word, plus one for eta itself."""
    if eta not in s.a_set:
        raise NotInA(f"{eta!r} is not a closure root of the diagram")
    n = s.n
    j = eta.col
    perm = _w_perm(s, eta)
    # epsilon coordinates: root (i, j) contributes +1 at j, -1 at i.
    v = [0] * (n + 1)
    for m in range(1, j + 1):
        v[m] += 1
        v[perm[m]] -= 1
    v[eta.col] -= 1
    v[eta.row] += 1
    betas = [b for b in s.s_otimes if lex_greater(b, eta)]
    matches = []
    for size in range(len(betas) + 1):
        for combo in itertools.combinations(betas, size):
            w = [0] * (n + 1)
            for b in combo:
                w[b.col] += 1
                w[b.row] -= 1
            if w == v:
                matches.append(frozenset(combo))
    if len(matches) != 1:
        raise LemmaFailure(
            f"defect of {eta!r} has {len(matches)} pick decompositions")
    return matches[0], len(matches[0]) + 1


def p_h_eta(s, eta: Root) -> Polynomial:
    """The invariant attached to a closure root: one tau-coefficient of
    the minor on columns 1..col(eta) and the rows of the word."""
    _hs, h = h_subset(s, eta)
    w = w_eta(s, eta)
    spec = MinorSpec(cols=tuple(range(1, eta.col + 1)), rows=w.rows)
    return minor(s.n, spec).coeff(h)


# --- the triangular system of invariants --------------------------------

@dataclass(frozen=True)
class TriangularSystem:
    rules: Dict[Root, LocalizedPolynomial]
    coeffs: Dict[Root, LocalizedPolynomial]


def _canonical_value(poly: Polynomial, values: Dict[Root, Polynomial]
                     ) -> Polynomial:
    total = Polynomial.zero(poly.p)
    for mono, coef in poly.terms.items():
        term = Polynomial({(): coef}, poly.p)
        alive = True
        for key, exp in mono:
            if key[0] != "y":
                term = term * Polynomial.variable(key, poly.p) ** exp
                continue
            val = values.get(Root(key[1], key[2]))
            if val is None:
                alive = False
                break
            term = term * val ** exp
        if alive:
            total = total + term
    return total


def triangular_system(s, c=None) -> TriangularSystem:
    """Solve each closure root's invariant for its own coordinate.

    Processing the closure roots from the lex-greatest down, each
    invariant — with all previously solved coordinates substituted — must
    be linear in its own coordinate with a constants-only leading
    coefficient; otherwise LemmaFailure.
    """
    values: Dict[Root, Polynomial] = {}
    for r in s.xi:
        values[r] = c_var(r) if c is None else const(c.get(r, 0))
    rules: Dict[Root, LocalizedPolynomial] = {}
    coeffs: Dict[Root, LocalizedPolynomial] = {}
    order: List[Root] = []
    for eta in sorted(s.a_set, key=lex_sort_key):  # lex-greatest first
        invariant = p_h_eta(s, eta)
        red = LocalizedPolynomial(invariant)
        for rho in order:
            red = _subst_loc(red, ("y", rho.row, rho.col), rules[rho])
        key = ("y", eta.row, eta.col)
        if red.num.degree_in(key) != 1:
            raise LemmaFailure(
                f"invariant of {eta!r} is not linear in its coordinate")
        lead = red.num.coefficient_of(key, 1)
        rest = red.num.coefficient_of(key, 0)
        if lead.is_zero() or any(k[0] == "y" for k in lead.variables()):
            raise LemmaFailure(
                f"leading coefficient for {eta!r} is not constants-only")
        base = _canonical_value(invariant, values)
        rules[eta] = loc(base * red.den - rest, lead)
        coeffs[eta] = loc(lead, red.den)
        order.append(eta)
    return TriangularSystem(rules, coeffs)


# --- fixed minor families ------------------------------------------------

def regular_minors(n: int) -> List[Polynomial]:
    """The corner minors; the j-th cuts columns 1..j against the last j
    rows and is concentrated in a single tau-degree."""
    out = []
    for j in range(1, n // 2 + 1):
        spec = MinorSpec(cols=tuple(range(1, j + 1)),
                         rows=tuple(range(n - j + 1, n + 1)))
        out.append(minor(n, spec).coeff(j))
    return out


def z_coefficients(n: int) -> List[Polynomial]:
    """Near-corner coefficients, one per admissible stage."""
    out = []
    for m in range(1, (n - 1) // 2 + 1):
        spec = MinorSpec(cols=tuple(range(1, n - m + 1)),
                         rows=tuple(range(m + 1, n + 1)))
        part = minor(n, spec).coeff(m + 1)
        out.append(part if (n - 1) % 2 == 0 else -part)
    return out


def bordered_minors(n: int, j: int) -> Tuple[Polynomial, Polynomial]:
    """The two minors bordering the j-th corner minor: shift the row
    window up by one, or skip the j-th column."""
    if not 1 <= j <= n // 2:
        raise ValueError(f"bordered minors need 1 <= j <= {n // 2}")
    rows1 = (n - j,) + tuple(range(n - j + 2, n + 1))
    spec1 = MinorSpec(cols=tuple(range(1, j + 1)), rows=rows1)
    cols2 = tuple(range(1, j)) + (j + 1,)
    spec2 = MinorSpec(cols=cols2, rows=tuple(range(n - j + 1, n + 1)))
    return _pure_coeff(n, spec1), _pure_coeff(n, spec2)


def p_n0_prime(n: int) -> Polynomial:
    """The extra bordered minor used at the middle column; even n only."""
    if n % 2 != 0:
        raise ValueError("defined for even sizes only")
    n0 = n // 2
    rows = (n0,) + tuple(range(n0 + 3, n + 1))
    spec = MinorSpec(cols=tuple(range(1, n0)), rows=rows)
    return _pure_coeff(n, spec)


def _pure_coeff(n: int, spec: MinorSpec) -> Polynomial:
    t = minor(n, spec)
    degs = t.degrees()
    if not degs:
        return Polynomial.zero()
    if len(degs) != 1:
        raise LemmaFailure(f"minor {spec} is not concentrated in one degree")
    return t.coeff(degs[0])
