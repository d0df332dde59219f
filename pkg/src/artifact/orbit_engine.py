"""Finite-field orbit enumeration and classification.

Linear forms on the strictly lower triangle are acted on by the lower
unitriangular group through conjugation of the corresponding upper
triangular value matrix.  Orbits are enumerated by breadth-first search
over the generator set I + e_alpha, which is linear on value vectors and
therefore vectorizes to one matrix per generator.
"""
from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

import numpy as np

from ._poly import coerce_scalar
from .admissible import AdmissibleSubset, dimension, enumerate_maximal
from .root_system import Root, RootSet, c_split, columns_and_chain, \
    positive_roots, root_sum
from .symbolic import evaluate, IdealHandle, Polynomial, UnsupportedColumn

__all__ = [
    "BudgetExceeded", "ClassificationMismatch", "GroupElement", "InvalidC",
    "LinearForm", "NotSubregular", "Orbit", "all_orbits", "canonical_form",
    "census", "classify", "coadjoint_act", "kirillov_rank", "orbit_bfs",
    "polarization", "regular_ideal", "stratum", "stratum_max_dims",
    "subregular_classify", "verify_polarization",
]

_DEFAULT_BUDGET = 1 << 26


class InvalidC(ValueError):
    """The constants do not match the diagram's picks."""


class BudgetExceeded(RuntimeError):
    """Orbit enumeration visited more states than the budget allows."""


class ClassificationMismatch(RuntimeError):
    """An orbit failed its canonical-member or size cross-check."""


class NotSubregular(ValueError):
    """The orbit dimension is not the subregular one."""


# --- linear forms and the group ------------------------------------------

class LinearForm:
    """A linear form on the strictly lower triangle; zero values are not
    stored, and finite-field values are reduced immediately."""

    __slots__ = ("n", "p", "values", "_hash")

    def __init__(self, n: int, p: Optional[int],
                 values: Optional[Dict[Root, object]] = None):
        vals: Dict[Root, object] = {}
        for root, raw in (values or {}).items():
            v = coerce_scalar(raw, p)
            if v != 0:
                vals[root] = v
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "values", vals)
        object.__setattr__(self, "_hash", None)

    def __setattr__(self, name, value):
        raise AttributeError("LinearForm is immutable")

    def value(self, root: Root):
        return self.values.get(root, Fraction(0) if self.p is None else 0)

    def __eq__(self, other):
        if not isinstance(other, LinearForm):
            return NotImplemented
        return (self.n, self.p, self.values) == \
            (other.n, other.p, other.values)

    def __hash__(self):
        h = self._hash
        if h is None:
            h = hash((self.n, self.p, frozenset(self.values.items())))
            object.__setattr__(self, "_hash", h)
        return h

    def __repr__(self):
        inner = ", ".join(f"({r.row},{r.col}): {v}"
                          for r, v in sorted(
                              self.values.items(),
                              key=lambda kv: (kv[0].row, kv[0].col)))
        return f"LinearForm(n={self.n}, p={self.p}, {{{inner}}})"


class GroupElement:
    """A lower unitriangular matrix over the field."""

    __slots__ = ("n", "p", "matrix")

    def __init__(self, n: int, p: Optional[int],
                 entries: Optional[Dict[Tuple[int, int], object]] = None,
                 _matrix: Optional[List[List[object]]] = None):
        self.n = n
        self.p = p
        if _matrix is not None:
            self.matrix = _matrix
            return
        one = coerce_scalar(1, p)
        zero = coerce_scalar(0, p)
        m = [[one if i == j else zero for j in range(n)] for i in range(n)]
        for (i, j), raw in (entries or {}).items():
            if not 1 <= j < i <= n:
                raise ValueError(f"entry ({i},{j}) is not strictly lower")
            m[i - 1][j - 1] = coerce_scalar(raw, p)
        self.matrix = m

    def _mul(self, a, b):
        n, p = self.n, self.p
        out = [[coerce_scalar(0, p) for _ in range(n)] for _ in range(n)]
        for i in range(n):
            for k in range(n):
                if a[i][k] == 0:
                    continue
                for j in range(n):
                    if b[k][j] == 0:
                        continue
                    v = out[i][j] + a[i][k] * b[k][j]
                    out[i][j] = v % p if p is not None else v
        return out

    def compose(self, other: "GroupElement") -> "GroupElement":
        if (self.n, self.p) != (other.n, other.p):
            raise ValueError("cannot compose over different fields")
        return GroupElement(self.n, self.p,
                            _matrix=self._mul(self.matrix, other.matrix))

    def inverse(self) -> "GroupElement":
        n, p = self.n, self.p
        one = coerce_scalar(1, p)
        nil = [[self.matrix[i][j] - (one if i == j else 0)
                for j in range(n)] for i in range(n)]
        if p is not None:
            nil = [[v % p for v in row] for row in nil]
        ident = GroupElement(n, p).matrix
        acc = [row[:] for row in ident]
        power = [row[:] for row in ident]
        sign = 1
        for _ in range(n - 1):
            power = self._mul(power, nil)
            sign = -sign
            for i in range(n):
                for j in range(n):
                    v = acc[i][j] + sign * power[i][j]
                    acc[i][j] = v % p if p is not None else v
        return GroupElement(n, p, _matrix=acc)


def coadjoint_act(g: GroupElement, f: LinearForm) -> LinearForm:
    """Conjugate the value matrix and keep its strictly upper part."""
    if (g.n, g.p) != (f.n, f.p):
        raise ValueError("group element and form live over different fields")
    n, p = f.n, f.p
    zero = coerce_scalar(0, p)
    val = [[zero for _ in range(n)] for _ in range(n)]
    for root, v in f.values.items():
        val[root.col - 1][root.row - 1] = v
    tmp = g._mul(g.matrix, val)
    conj = g._mul(tmp, g.inverse().matrix)
    out: Dict[Root, object] = {}
    for j in range(n):
        for i in range(j + 1, n):
            if conj[j][i] != 0:
                out[Root(i + 1, j + 1)] = conj[j][i]
    return LinearForm(n, p, out)


# --- canonical forms ------------------------------------------------------

def canonical_form(s: AdmissibleSubset, c: Dict[Root, object],
                   p: Optional[int] = None) -> LinearForm:
    """The point with value c on each pick and zero elsewhere.  Every pick
    needs a value and marked picks need a nonzero one."""
    picks = set(s.xi)
    for key in c:
        if key not in picks:
            raise InvalidC(f"{key!r} is not a pick of the diagram")
    values: Dict[Root, object] = {}
    for root, marked in zip(s.xi, s.otimes_mask):
        if root not in c:
            raise InvalidC(f"missing value for pick {root!r}")
        v = coerce_scalar(c[root], p)
        if marked and v == 0:
            raise InvalidC(f"marked pick {root!r} needs a nonzero value")
        values[root] = v
    return LinearForm(s.n, p, values)


# --- orbit enumeration ----------------------------------------------------

def _root_order(n: int) -> List[Root]:
    return list(positive_roots(n))


def _action_matrices(n: int, p: int) -> List[np.ndarray]:
    roots = _root_order(n)
    index = {r: k for k, r in enumerate(roots)}
    mats = []
    for gen_root in roots:
        g = GroupElement(n, p, {(gen_root.row, gen_root.col): 1})
        mat = np.zeros((len(roots), len(roots)), dtype=np.int64)
        for k, basis_root in enumerate(roots):
            image = coadjoint_act(g, LinearForm(n, p, {basis_root: 1}))
            for root, v in image.values.items():
                mat[index[root], k] = v
        mats.append(mat)
    return mats


class Orbit:
    """A coadjoint orbit over a finite field, stored as packed states."""

    def __init__(self, n: int, p: int, representative: LinearForm,
                 packed: set):
        self.n = n
        self.p = p
        self.representative = representative
        self._packed = packed
        self._roots = _root_order(n)
        self._powers = [p ** k for k in range(len(self._roots))]

    def _pack(self, f: LinearForm) -> int:
        total = 0
        for k, root in enumerate(self._roots):
            total += int(f.value(root)) * self._powers[k]
        return total

    def _unpack(self, code: int) -> LinearForm:
        vals = {}
        for k, root in enumerate(self._roots):
            digit = (code // self._powers[k]) % self.p
            if digit:
                vals[root] = digit
        return LinearForm(self.n, self.p, vals)

    def __len__(self) -> int:
        return len(self._packed)

    def __contains__(self, f) -> bool:
        if not isinstance(f, LinearForm) or (f.n, f.p) != (self.n, self.p):
            return False
        return self._pack(f) in self._packed

    def __iter__(self):
        for code in sorted(self._packed):
            yield self._unpack(code)

    def member_array(self) -> np.ndarray:
        codes = np.fromiter(self._packed, dtype=np.int64,
                            count=len(self._packed))
        codes.sort()
        out = np.empty((len(codes), len(self._roots)), dtype=np.int64)
        rem = codes
        for k in range(len(self._roots)):
            out[:, k] = rem % self.p
            rem = rem // self.p
        return out


def _budget_value(budget: Optional[int]) -> int:
    if budget is not None:
        return budget
    raw = os.environ.get("ARTIFACT_BFS_BUDGET")
    return int(raw) if raw else _DEFAULT_BUDGET


def orbit_bfs(f: LinearForm, budget: Optional[int] = None) -> Orbit:
    """Breadth-first closure of f under the generator actions."""
    if f.p is None:
        raise ValueError("orbit enumeration needs a finite field")
    n, p = f.n, f.p
    limit = _budget_value(budget)
    roots = _root_order(n)
    powers = np.array([p ** k for k in range(len(roots))], dtype=np.int64)
    mats = _action_matrices(n, p)
    start = np.array([[int(f.value(r)) for r in roots]], dtype=np.int64)
    start_code = int(start[0] @ powers)
    visited = {start_code}
    frontier = start
    while frontier.size:
        if len(visited) > limit:
            raise BudgetExceeded(
                f"orbit search passed {limit} states")
        images = [frontier @ mat.T % p for mat in mats]
        cand = np.unique(np.concatenate(images, axis=0), axis=0)
        codes = cand @ powers
        fresh_rows = []
        for row, code in zip(cand, codes.tolist()):
            if code not in visited:
                visited.add(code)
                fresh_rows.append(row)
        if len(visited) > limit:
            raise BudgetExceeded(
                f"orbit search passed {limit} states")
        frontier = np.array(fresh_rows, dtype=np.int64) if fresh_rows \
            else np.empty((0, len(roots)), dtype=np.int64)
    return Orbit(n, p, f, visited)


def all_orbits(n: int, p: int, budget: Optional[int] = None) -> List[Orbit]:
    """Partition the whole dual space into orbits, in order of the least
    packed state."""
    roots = _root_order(n)
    total = p ** len(roots)
    seen: set = set()
    orbits = []
    probe = Orbit(n, p, LinearForm(n, p, {}), set())
    for code in range(total):
        if code in seen:
            continue
        f = probe._unpack(code)
        orbit = orbit_bfs(f, budget=budget)
        seen.update(orbit._packed)
        orbits.append(orbit)
    return orbits


# --- invariants of a point ------------------------------------------------

def kirillov_rank(f: LinearForm) -> int:
    """Rank of the form's bracket matrix over the positive roots."""
    roots = _root_order(f.n)
    p = f.p
    size = len(roots)
    mat = [[coerce_scalar(0, p) for _ in range(size)] for _ in range(size)]
    for a, alpha in enumerate(roots):
        for b, beta in enumerate(roots):
            i, j = alpha.row, alpha.col
            k, l = beta.row, beta.col
            v = coerce_scalar(0, p)
            if j == k and i > l:
                v = v + f.value(Root(i, l))
            if l == i and k > j:
                v = v - f.value(Root(k, j))
            mat[a][b] = v % p if p is not None else v
    rank = 0
    row = 0
    for col in range(size):
        pivot = next((r for r in range(row, size) if mat[r][col] != 0), None)
        if pivot is None:
            continue
        mat[row], mat[pivot] = mat[pivot], mat[row]
        inv = (pow(int(mat[row][col]), -1, p) if p is not None
               else Fraction(1) / mat[row][col])
        for r in range(row + 1, size):
            if mat[r][col] == 0:
                continue
            factor = mat[r][col] * inv
            for cc in range(col, size):
                v = mat[r][cc] - factor * mat[row][cc]
                mat[r][cc] = v % p if p is not None else v
        rank += 1
        row += 1
        if row == size:
            break
    return rank


def stratum(f: LinearForm) -> int:
    """How many first-column values vanish, counted from the bottom row
    up to the first nonzero one."""
    count = 0
    for row in range(f.n, 1, -1):
        if f.value(Root(row, 1)) != 0:
            break
        count += 1
    return count


# --- polarizations --------------------------------------------------------

def _column_pairs(s: AdmissibleSubset) -> List[Tuple[Root, Root]]:
    """(p-side, q-side) root pairs of every column, in peel order."""
    _deltas, bs = columns_and_chain(s)
    out: List[Tuple[Root, Root]] = []
    for t in range(1, s.n):
        bset = bs[t - 1]
        xis = [(r, m) for r, m in zip(s.xi, s.otimes_mask) if r.col == t]
        crosses = [r for r, m in xis if m]
        if len(crosses) >= 2:
            raise UnsupportedColumn(
                f"two crosses in column {t}")
        if not crosses:
            continue
        cross = crosses[0]
        plus, _minus = c_split(cross, bset)
        boxes = [r for r, m in xis if not m]
        if not boxes:
            for gamma in plus:
                out.append((Root(cross.row, gamma.row), gamma))
        else:
            for gamma in plus:
                delta = Root(cross.row, gamma.row)
                blocked = any(gamma.row < b.row < cross.row for b in boxes)
                if not blocked:
                    out.append((delta, gamma))
                else:
                    out.append((gamma, delta))
    return out


def polarization(s: AdmissibleSubset) -> RootSet:
    """The positive roots minus the p-side of every canonical pair."""
    removed = {pair[0] for pair in _column_pairs(s)}
    keep = [r for r in positive_roots(s.n) if r not in removed]
    return RootSet(s.n, keep)


def verify_polarization(pol: Iterable[Root], f: LinearForm) -> bool:
    """Check the subalgebra, isotropy, and size conditions at the form."""
    roots = set(pol)
    n = f.n
    total = n * (n - 1) // 2
    rank = kirillov_rank(f)
    if len(roots) != total - rank // 2:
        return False
    for a in roots:
        for b in roots:
            summed = root_sum(a, b)
            if summed is None:
                continue
            if summed not in roots:
                return False
            if f.value(summed) != 0:
                return False
    return True


# --- classification -------------------------------------------------------

def _diagram_catalog(n: int) -> List[AdmissibleSubset]:
    return enumerate_maximal(n)


def _classify_orbit(orbit: Orbit) -> Tuple[AdmissibleSubset, Dict[Root, int]]:
    n, p = orbit.n, orbit.p
    roots = _root_order(n)
    index = {r: k for k, r in enumerate(roots)}
    members = orbit.member_array()
    matches: List[Tuple[AdmissibleSubset, Dict[Root, int]]] = []
    for s in _diagram_catalog(n):
        picks = set(s.xi)
        outside = [index[r] for r in roots if r not in picks]
        marked = [index[r] for r, m in zip(s.xi, s.otimes_mask) if m]
        mask = np.ones(len(members), dtype=bool)
        if outside:
            mask &= (members[:, outside] == 0).all(axis=1)
        if marked:
            mask &= (members[:, marked] != 0).all(axis=1)
        for row in members[mask]:
            values = {r: int(row[index[r]]) for r in s.xi}
            matches.append((s, values))
    if len(matches) != 1:
        raise ClassificationMismatch(
            f"orbit has {len(matches)} canonical members")
    s, values = matches[0]
    if len(orbit) != p ** dimension(s):
        raise ClassificationMismatch(
            f"orbit size {len(orbit)} != p^{dimension(s)}")
    return s, values


def classify(f: LinearForm, budget: Optional[int] = None
             ) -> Tuple[AdmissibleSubset, Dict[Root, int]]:
    """Find the diagram and constants of the orbit through f."""
    if f.p is None:
        raise ValueError("classification needs a finite field")
    return _classify_orbit(orbit_bfs(f, budget=budget))


def census(n: int, p: int, budget: Optional[int] = None) -> Dict:
    """Classify every orbit and tally counts per diagram label, together
    with the two counting identities."""
    orbits = all_orbits(n, p, budget=budget)
    tally: Dict[Tuple[int, int, int], Dict[str, int]] = {}
    for orbit in orbits:
        s, _values = _classify_orbit(orbit)
        dim = dimension(s)
        row = tally.setdefault(s.label, {"dim": dim, "count": 0})
        if row["dim"] != dim:
            raise ClassificationMismatch("label with inconsistent dimension")
        row["count"] += 1
    rows = []
    point_sum = 0
    formula_ok = True
    for s in _diagram_catalog(n):
        row = tally.get(s.label)
        if row is None:
            formula_ok = False
            continue
        boxes = sum(1 for m in s.otimes_mask if not m)
        marked = len(list(s.s_otimes))
        expected = (p - 1) ** marked * p ** boxes
        if row["count"] != expected:
            formula_ok = False
        point_sum += row["count"] * p ** row["dim"]
        rows.append({"label": ",".join(str(x) for x in s.label),
                     "dim": row["dim"], "count": row["count"]})
    rows.sort(key=lambda r: tuple(int(x) for x in r["label"].split(",")))
    total = p ** (n * (n - 1) // 2)
    return {
        "n": n,
        "p": p,
        "orbits": rows,
        "identities": {
            "point_sum_ok": point_sum == total,
            "formula_ok": formula_ok,
        },
    }


def stratum_max_dims(n: int, p: int, budget: Optional[int] = None
                     ) -> List[int]:
    """Largest orbit dimension within each first-column stratum."""
    best = [0] * n
    for orbit in all_orbits(n, p, budget=budget):
        size = len(orbit)
        dim = 0
        while p ** dim < size:
            dim += 1
        if p ** dim != size:
            raise ClassificationMismatch(
                f"orbit size {size} is not a power of {p}")
        st = stratum(orbit.representative)
        best[st] = max(best[st], dim)
    return best


# --- regular and subregular families --------------------------------------

def regular_ideal(n: int, constants: Sequence) -> IdealHandle:
    """The ideal cutting out a regular orbit: corner minors pinned to the
    given constants, the first of which must be invertible."""
    from .char_matrix import regular_minors

    minors = regular_minors(n)
    if len(constants) != len(minors):
        raise InvalidC(
            f"need {len(minors)} constants, got {len(constants)}")
    if coerce_scalar(constants[0], None) == 0:
        raise InvalidC("the first constant must be nonzero")
    gens = [m - Polynomial({(): c}) for m, c in zip(minors, constants)]
    return IdealHandle.from_generators(n, gens, invertible=[Root(n, 1)])


@dataclass(frozen=True)
class SubregularRecord:
    case: str
    j0: int
    system: Tuple[Polynomial, ...]
    cuts_exactly: Optional[bool]


def _eval_rows(poly: Polynomial, members: np.ndarray,
               index: Dict[Root, int], p: int) -> np.ndarray:
    out = np.zeros(len(members), dtype=np.int64)
    for mono, coef in poly.terms.items():
        term = np.full(len(members), int(coerce_scalar(coef, p)),
                       dtype=np.int64)
        for key, exp in mono:
            col = index[Root(key[1], key[2])]
            term = term * pow_mod_array(members[:, col], exp, p) % p
        out = (out + term) % p
    return out


def pow_mod_array(col: np.ndarray, exp: int, p: int) -> np.ndarray:
    out = np.ones_like(col)
    base = col % p
    e = exp
    while e:
        if e & 1:
            out = out * base % p
        base = base * base % p
        e >>= 1
    return out


def subregular_classify(target, budget: Optional[int] = None
                        ) -> SubregularRecord:
    """Classify a subregular orbit given either (diagram, constants) or a
    finite-field point, and assemble its cutting system."""
    from .char_matrix import bordered_minors, p_n0_prime, regular_minors, \
        z_coefficients

    if isinstance(target, LinearForm):
        f = target
        n = f.n
        dim = kirillov_rank(f)
    else:
        s, c = target
        n = s.n
        f = canonical_form(s, c, p=None)
        dim = dimension(s)
    total = n * (n - 1) // 2
    n0 = n // 2
    nx = (n - 1) // 2
    if dim != total - n0 - 2:
        raise NotSubregular(
            f"dimension {dim} is not the subregular {total - n0 - 2}")
    minors = regular_minors(n)
    values = [evaluate(m, f) for m in minors]
    j0 = next((j for j, v in enumerate(values, start=1) if v == 0), None)
    if j0 is None:
        raise NotSubregular("no corner minor vanishes")
    if j0 < nx:
        case = "1"
    elif n % 2 == 1 and j0 == n0:
        case = "2"
    elif n % 2 == 0 and j0 == nx:
        prime_val = evaluate(bordered_minors(n, j0)[0], f)
        case = "3a" if prime_val != 0 else "3b"
    else:
        raise NotSubregular(
            f"vanishing pattern at column {j0} is not supported")
    system: List[Polynomial] = [
        minors[j - 1] - Polynomial({(): values[j - 1]})
        for j in range(1, j0)]
    prime, second = bordered_minors(n, j0)
    if case in ("1", "3a"):
        z = z_coefficients(n)[j0 - 1]
        system += [
            prime - Polynomial({(): evaluate(prime, f)}),
            second - Polynomial({(): evaluate(second, f)}),
            minors[j0 - 1],
            z - Polynomial({(): evaluate(z, f)}),
        ]
    elif case == "2":
        system += [
            prime - Polynomial({(): evaluate(prime, f)}),
            second - Polynomial({(): evaluate(second, f)}),
            minors[j0 - 1],
        ]
    else:
        middle = p_n0_prime(n)
        system += [
            minors[j0 - 1],
            prime,
            middle - Polynomial({(): evaluate(middle, f)}),
            second - Polynomial({(): evaluate(second, f)}),
        ]
    cuts: Optional[bool] = None
    if f.p is not None:
        p = f.p
        roots = _root_order(n)
        index = {r: k for k, r in enumerate(roots)}
        codes = np.arange(p ** len(roots), dtype=np.int64)
        members = np.empty((len(codes), len(roots)), dtype=np.int64)
        rem = codes
        for k in range(len(roots)):
            members[:, k] = rem % p
            rem = rem // p
        mask = np.ones(len(codes), dtype=bool)
        for gen in system:
            mask &= _eval_rows(gen, members, index, p) == 0
        cut_set = set(codes[mask].tolist())
        orbit = orbit_bfs(f, budget=budget)
        cuts = cut_set == orbit._packed
    return SubregularRecord(case, j0, tuple(system), cuts)
