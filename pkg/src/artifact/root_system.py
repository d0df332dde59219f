"""Root combinatorics for the strictly lower-triangular nilpotent algebra.

A root is an off-diagonal matrix position (row, col) with row > col; it
stands for the elementary matrix e_{row,col} and, dually, for the
coordinate function y_{row,col}.  The total order used everywhere is the
column-major order: a root is greater when its column is smaller, and
within a column when its row is larger.  The greatest root of the n-by-n
algebra is (n, 1).
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Optional


class InvalidDimension(ValueError):
    """Matrix size must be an integer >= 2."""


class NotSubset(ValueError):
    """First argument is required to be contained in the second."""


class NotMember(ValueError):
    """The distinguished root must belong to the given set."""


@dataclass(frozen=True, order=True)
class Root:
    row: int
    col: int

    def __iter__(self) -> Iterator[int]:
        yield self.row
        yield self.col

    def __repr__(self) -> str:  # compact, used in assertion messages
        return f"Root({self.row},{self.col})"


def lex_greater(a: Root, b: Root) -> bool:
    """Strict column-major comparison."""
    if a.col != b.col:
        return a.col < b.col
    return a.row > b.row


def lex_sort_key(r: Root):
    """Sort key: ascending order of this key is descending root order."""
    return (r.col, -r.row)


class RootSet:
    """An immutable set of roots inside a fixed n-by-n algebra.

    Iteration is in decreasing root order.
    """

    __slots__ = ("n", "_roots")

    def __init__(self, n: int, roots=()):
        if not isinstance(n, int) or n < 2:
            raise InvalidDimension(f"matrix size must be >= 2, got {n!r}")
        self.n = n
        self._roots = frozenset(roots)

    def __len__(self) -> int:
        return len(self._roots)

    def __iter__(self) -> Iterator[Root]:
        return iter(sorted(self._roots, key=lex_sort_key))

    def __contains__(self, r) -> bool:
        return r in self._roots

    def __eq__(self, other) -> bool:
        if isinstance(other, RootSet):
            return self.n == other.n and self._roots == other._roots
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.n, self._roots))

    def __repr__(self) -> str:
        inner = ", ".join(repr(r) for r in self)
        return f"RootSet({self.n}, [{inner}])"

    def difference(self, other) -> "RootSet":
        return RootSet(self.n, self._roots - frozenset(other))

    def union(self, other) -> "RootSet":
        return RootSet(self.n, self._roots | frozenset(other))


def positive_roots(n: int) -> RootSet:
    """All strictly lower positions of the n-by-n matrix."""
    if not isinstance(n, int) or n < 2:
        raise InvalidDimension(f"matrix size must be >= 2, got {n!r}")
    return RootSet(n, (Root(i, j) for i in range(2, n + 1)
                       for j in range(1, i)))


def root_sum(a: Root, b: Root) -> Optional[Root]:
    """The root a + b when the sum is again a root, else None."""
    if a.col == b.row:
        return Root(a.row, b.col)
    if b.col == a.row:
        return Root(b.row, a.col)
    return None


def is_additive(rs: RootSet) -> bool:
    """Closed under root sums."""
    members = set(rs)
    for a in members:
        for b in members:
            s = root_sum(a, b)
            if s is not None and s not in members:
                return False
    return True


def is_normal(sub: RootSet, ambient: RootSet) -> bool:
    """sub absorbs ambient: any root sum from sub + ambient landing in
    ambient must land in sub."""
    sub_set = set(sub)
    amb_set = set(ambient)
    if not sub_set <= amb_set:
        raise NotSubset("first set must be contained in the second")
    for a in sub_set:
        for b in amb_set:
            s = root_sum(a, b)
            if s is not None and s in amb_set and s not in sub_set:
                return False
    return True


def c_split(xi: Root, rs: RootSet) -> tuple:
    """Split the two-part decompositions of xi inside rs.

    Returns (plus, minus): for every intermediate index a with both parts
    (a, xi.col) and (xi.row, a) in rs, the column part goes to plus and
    the row part to minus.  Column parts are the greater member of each
    pair.
    """
    if xi not in rs:
        raise NotMember(f"{xi!r} is not in the set")
    plus = []
    minus = []
    for a in range(xi.col + 1, xi.row):
        gamma = Root(a, xi.col)
        delta = Root(xi.row, a)
        if gamma in rs and delta in rs:
            plus.append(gamma)
            minus.append(delta)
    return RootSet(rs.n, plus), RootSet(rs.n, minus)


def restrict(rs: RootSet, xi: Root) -> RootSet:
    """xi together with the members of rs strictly inside its span."""
    if xi not in rs:
        raise NotMember(f"{xi!r} is not in the set")
    inner = [r for r in rs
             if r == xi or (r.col > xi.col and r.row < xi.row)]
    return RootSet(rs.n, inner)


def columns_and_chain(s) -> tuple:
    """Column slices and the per-column working sets of a diagram.

    Returns (deltas, bs) where deltas[t-1] is the full column-t slice of
    the positive roots (t = 1..n-1) and bs[t-1] is the working set for
    column t: the roots in columns >= t that survive every choice made in
    columns before t.
    """
    n = s.n
    full = positive_roots(n)
    deltas = [RootSet(n, (r for r in full if r.col == t))
              for t in range(1, n)]
    bs = []
    for t in range(1, n + 1):
        stage = 0
        for j, xi in enumerate(s.xi, start=1):
            if xi.col < t:
                stage = j
        a_stage = s.a_chain[stage]
        bs.append(RootSet(n, (r for r in a_stage if r.col >= t)))
    return deltas, bs


def root_to_text(r: Root) -> str:
    return f"{r.row},{r.col}"


def root_from_text(text: str) -> Root:
    parts = text.split(",")
    if len(parts) != 2:
        raise ValueError(f"expected 'row,col', got {text!r}")
    row, col = (int(p.strip()) for p in parts)
    if row <= col or col < 1:
        raise ValueError(f"not a strictly lower position: {text!r}")
    return Root(row, col)


def root_to_json(r: Root) -> dict:
    return {"row": r.row, "col": r.col}
