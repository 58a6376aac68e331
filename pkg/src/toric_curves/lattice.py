"""Exact integer and rational linear algebra.

Everything here works on Python ints and :class:`fractions.Fraction`; there is
no floating point anywhere.  Matrices act on row vectors unless a docstring
says otherwise (``hnf`` returns ``u`` with ``u @ m == h``).
"""

from __future__ import annotations

import itertools
import math
import operator
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .errors import ToricError

RatVector = tuple  # tuple[Fraction, ...]


def ratvec(values: Iterable) -> tuple[Fraction, ...]:
    """Coerce ints, Fractions or ``"p/q"`` strings to a tuple of Fractions."""
    out = []
    for v in values:
        if isinstance(v, float):
            raise TypeError("floating point entries are not accepted")
        out.append(Fraction(v))
    return tuple(out)


class IntMatrix:
    """Immutable matrix of arbitrary-precision integers (row-major)."""

    __slots__ = ("_rows", "_ncols")

    def __init__(self, rows: Iterable[Iterable[int]], ncols: Optional[int] = None):
        data = []
        for row in rows:
            r = []
            for x in row:
                if isinstance(x, bool) or isinstance(x, float):
                    raise TypeError(f"non-integer matrix entry {x!r}")
                if isinstance(x, Fraction):
                    if x.denominator != 1:
                        raise TypeError(f"non-integer matrix entry {x}")
                    x = x.numerator
                r.append(operator.index(x))
            data.append(tuple(r))
        if ncols is None:
            if not data:
                raise ValueError("ncols required for a matrix with no rows")
            ncols = len(data[0])
        if any(len(r) != ncols for r in data):
            raise ValueError("ragged matrix rows")
        self._rows = tuple(data)
        self._ncols = ncols

    @classmethod
    def identity(cls, n: int) -> "IntMatrix":
        return cls(((1 if i == j else 0) for j in range(n)) for i in range(n)) if n else cls((), 0)

    @classmethod
    def zeros(cls, nrows: int, ncols: int) -> "IntMatrix":
        return cls(((0,) * ncols for _ in range(nrows)), ncols)

    @property
    def rows(self) -> tuple[tuple[int, ...], ...]:
        return self._rows

    @property
    def nrows(self) -> int:
        return len(self._rows)

    @property
    def ncols(self) -> int:
        return self._ncols

    @property
    def shape(self) -> tuple[int, int]:
        return (len(self._rows), self._ncols)

    @property
    def T(self) -> "IntMatrix":
        return self.transpose()

    def transpose(self) -> "IntMatrix":
        if not self._rows:
            return IntMatrix([() for _ in range(self._ncols)], 0)
        return IntMatrix(zip(*self._rows), self.nrows)

    def column(self, j: int) -> tuple[int, ...]:
        return tuple(r[j] for r in self._rows)

    def __getitem__(self, idx):
        if isinstance(idx, tuple):
            i, j = idx
            return self._rows[i][j]
        return self._rows[idx]

    def __iter__(self):
        return iter(self._rows)

    def __len__(self):
        return len(self._rows)

    def __eq__(self, other):
        if isinstance(other, IntMatrix):
            return self._ncols == other._ncols and self._rows == other._rows
        return NotImplemented

    def __hash__(self):
        return hash((self._rows, self._ncols))

    def __matmul__(self, other: "IntMatrix") -> "IntMatrix":
        if self._ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        cols = list(zip(*other.rows)) if other.rows else []
        return IntMatrix(
            (tuple(sum(a * b for a, b in zip(r, c)) for c in cols) for r in self._rows),
            other.ncols,
        )

    def tolist(self) -> list[list[int]]:
        return [list(r) for r in self._rows]

    def __repr__(self):
        return f"IntMatrix({self.tolist()!r})"


# -- Hermite and Smith normal forms ---------------------------------------


def hnf(m: IntMatrix) -> tuple[IntMatrix, IntMatrix]:
    """Row-style Hermite normal form.

    Returns ``(h, u)`` with ``u`` unimodular and ``u @ m == h``.  Pivots are
    positive, entries above a pivot lie in ``[0, pivot)`` and zero rows sit at
    the bottom, so ``h`` depends only on the row space of ``m``.
    """
    a = m.tolist()
    n, c = m.nrows, m.ncols
    u = [[int(i == j) for j in range(n)] for i in range(n)]
    pr = 0
    for col in range(c):
        if pr == n:
            break
        while True:
            nz = [i for i in range(pr, n) if a[i][col]]
            if not nz:
                break
            piv = min(nz, key=lambda i: abs(a[i][col]))
            a[pr], a[piv] = a[piv], a[pr]
            u[pr], u[piv] = u[piv], u[pr]
            clean = True
            p = a[pr][col]
            for i in range(pr + 1, n):
                if a[i][col]:
                    q = a[i][col] // p
                    a[i] = [x - q * y for x, y in zip(a[i], a[pr])]
                    u[i] = [x - q * y for x, y in zip(u[i], u[pr])]
                    if a[i][col]:
                        clean = False
            if clean:
                break
        if a[pr][col] == 0:
            continue
        if a[pr][col] < 0:
            a[pr] = [-x for x in a[pr]]
            u[pr] = [-x for x in u[pr]]
        p = a[pr][col]
        for i in range(pr):
            q = a[i][col] // p
            if q:
                a[i] = [x - q * y for x, y in zip(a[i], a[pr])]
                u[i] = [x - q * y for x, y in zip(u[i], u[pr])]
        pr += 1
    return IntMatrix(a, c), IntMatrix(u, n)


def snf(m: IntMatrix) -> tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Smith normal form ``(d, u, v)`` with ``u @ m @ v == d``.

    The diagonal of ``d`` is nonnegative and each entry divides the next.
    """
    a = m.tolist()
    n, c = m.nrows, m.ncols
    u = [[int(i == j) for j in range(n)] for i in range(n)]
    v = [[int(i == j) for j in range(c)] for i in range(c)]

    def col_op(j, t, q):  # col_j -= q * col_t
        for row in a:
            row[j] -= q * row[t]
        for row in v:
            row[j] -= q * row[t]

    def col_swap(j, t):
        for row in a:
            row[j], row[t] = row[t], row[j]
        for row in v:
            row[j], row[t] = row[t], row[j]

    for t in range(min(n, c)):
        while True:
            best = None
            for i in range(t, n):
                for j in range(t, c):
                    if a[i][j] and (best is None or abs(a[i][j]) < abs(a[best[0]][best[1]])):
                        best = (i, j)
            if best is None:
                return IntMatrix(a, c), IntMatrix(u, n), IntMatrix(v, c)
            i, j = best
            a[t], a[i] = a[i], a[t]
            u[t], u[i] = u[i], u[t]
            if j != t:
                col_swap(j, t)
            p = a[t][t]
            clean = True
            for i in range(t + 1, n):
                if a[i][t]:
                    q = a[i][t] // p
                    a[i] = [x - q * y for x, y in zip(a[i], a[t])]
                    u[i] = [x - q * y for x, y in zip(u[i], u[t])]
                    clean = clean and a[i][t] == 0
            for j in range(t + 1, c):
                if a[t][j]:
                    col_op(j, t, a[t][j] // p)
                    clean = clean and a[t][j] == 0
            if not clean:
                continue
            bad = next(
                (i for i in range(t + 1, n) for j in range(t + 1, c) if a[i][j] % p),
                None,
            )
            if bad is None:
                break
            a[t] = [x + y for x, y in zip(a[t], a[bad])]
            u[t] = [x + y for x, y in zip(u[t], u[bad])]
        if a[t][t] < 0:
            a[t] = [-x for x in a[t]]
            u[t] = [-x for x in u[t]]
    return IntMatrix(a, c), IntMatrix(u, n), IntMatrix(v, c)


def invariant_factors(m: IntMatrix) -> tuple[int, ...]:
    """Nonzero diagonal entries of the Smith normal form."""
    d, _, _ = snf(m)
    return tuple(d[i, i] for i in range(min(d.shape)) if d[i, i])


# -- rational helpers ------------------------------------------------------


def _rref(rows: list[list[Fraction]], ncols: int) -> tuple[list[list[Fraction]], list[int]]:
    a = [list(r) for r in rows]
    pivots = []
    r = 0
    for col in range(ncols):
        piv = next((i for i in range(r, len(a)) if a[i][col] != 0), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = 1 / a[r][col]
        a[r] = [x * inv for x in a[r]]
        for i in range(len(a)):
            if i != r and a[i][col] != 0:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(col)
        r += 1
        if r == len(a):
            break
    return a, pivots


def rank(m) -> int:
    rows = [[Fraction(x) for x in r] for r in m]
    if not rows:
        return 0
    return len(_rref(rows, len(rows[0]))[1])


def det(m) -> Fraction:
    rows = [[Fraction(x) for x in r] for r in m]
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("determinant of a non-square matrix")
    sign = 1
    result = Fraction(1)
    a = rows
    for col in range(n):
        piv = next((i for i in range(col, n) if a[i][col] != 0), None)
        if piv is None:
            return Fraction(0)
        if piv != col:
            a[col], a[piv] = a[piv], a[col]
            sign = -sign
        p = a[col][col]
        result *= p
        for i in range(col + 1, n):
            if a[i][col] != 0:
                f = a[i][col] / p
                a[i] = [x - f * y for x, y in zip(a[i], a[col])]
    return sign * result


def inverse(m) -> list[list[Fraction]]:
    rows = [[Fraction(x) for x in r] for r in m]
    n = len(rows)
    aug = [r + [Fraction(int(i == j)) for j in range(n)] for i, r in enumerate(rows)]
    red, piv = _rref(aug, 2 * n)
    if piv[:n] != list(range(n)):
        raise ToricError("matrix is singular")
    return [r[n:] for r in red]


def solve_rational(m, rhs: Sequence) -> Optional[tuple[Fraction, ...]]:
    """One exact solution ``x`` of ``m x = rhs`` (column convention), or None.

    Free variables are set to zero.
    """
    rows = [[Fraction(x) for x in r] for r in m]
    rhs = ratvec(rhs)
    if len(rows) != len(rhs):
        raise ValueError("rhs length does not match the number of rows")
    if not rows:
        return ()
    n = len(rows[0])
    red, pivots = _rref([r + [b] for r, b in zip(rows, rhs)], n + 1)
    if n in pivots:
        return None
    x = [Fraction(0)] * n
    for row, col in zip(red, pivots):
        x[col] = row[n]
    return tuple(x)


def nullspace(m, ncols: Optional[int] = None) -> list[tuple[Fraction, ...]]:
    """Basis of ``{x : m x = 0}`` over the rationals."""
    rows = [[Fraction(x) for x in r] for r in m]
    n = ncols if ncols is not None else len(rows[0])
    if not rows:
        return [tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)]
    red, pivots = _rref(rows, n)
    free = [j for j in range(n) if j not in pivots]
    basis = []
    for f in free:
        x = [Fraction(0)] * n
        x[f] = Fraction(1)
        for row, col in zip(red, pivots):
            x[col] = -row[f]
        basis.append(tuple(x))
    return basis


def _fm_eliminate(cons):
    """Drop the last variable from constraints ``c0 + c.t >= 0``."""
    keep, pos, neg = [], [], []
    for c0, c in cons:
        a = c[-1]
        if a > 0:
            pos.append((c0, c))
        elif a < 0:
            neg.append((c0, c))
        else:
            keep.append((c0, c[:-1]))
    for p0, p in pos:
        for n0, nn in neg:
            ap, an = p[-1], -nn[-1]
            keep.append((p0 * an + n0 * ap, tuple(x * an + y * ap for x, y in zip(p[:-1], nn[:-1]))))
    seen = {}
    for c0, c in keep:
        scale = max([abs(x) for x in c] + [abs(c0)]) or Fraction(1)
        key = (c0 / scale, tuple(x / scale for x in c))
        seen[key] = key
    return list(seen.values())


def feasible_nonneg(a, b: Sequence) -> Optional[tuple[Fraction, ...]]:
    """Find rational ``x >= 0`` with ``a x = b`` by Fourier-Motzkin, or None."""
    rows = [[Fraction(x) for x in r] for r in a]
    x0 = solve_rational(rows, b)
    if x0 is None:
        return None
    n = len(x0)
    null = nullspace(rows, n) if rows else [tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n)]
    f = len(null)
    cons = [(x0[i], tuple(null[j][i] for j in range(f))) for i in range(n)]
    levels = [cons]
    for _ in range(f):
        cons = _fm_eliminate(cons)
        levels.append(cons)
    if any(c0 < 0 for c0, _ in levels[-1]):
        return None
    t: list[Fraction] = []
    for k in range(1, f + 1):
        lo, hi = None, None
        for c0, c in levels[f - k]:
            rest = c0 + sum(ci * ti for ci, ti in zip(c[:-1], t))
            a_ = c[-1]
            if a_ > 0:
                bound = -rest / a_
                lo = bound if lo is None or bound > lo else lo
            elif a_ < 0:
                bound = rest / -a_
                hi = bound if hi is None or bound < hi else hi
        t.append(lo if lo is not None else (hi if hi is not None else Fraction(0)))
    x = tuple(x0[i] + sum(null[j][i] * t[j] for j in range(f)) for i in range(n))
    assert all(xi >= 0 for xi in x)
    return x


# -- lattices --------------------------------------------------------------


def _lcm_denominators(values) -> int:
    d = 1
    for v in values:
        d = math.lcm(d, Fraction(v).denominator)
    return d


@dataclass(frozen=True)
class Sublattice:
    """The lattice ``(1/denominator) * rowspace_Z(basis)`` inside Q^ambient_rank.

    ``basis`` is in row Hermite normal form with no zero rows and the
    denominator is minimal, so equal lattices compare equal.
    """

    ambient_rank: int
    basis: IntMatrix
    denominator: int = 1

    @classmethod
    def from_generators(cls, gens: Iterable[Sequence], ambient_rank: int) -> "Sublattice":
        gens = [ratvec(g) for g in gens]
        if any(len(g) != ambient_rank for g in gens):
            raise ValueError("generator length does not match ambient rank")
        den = _lcm_denominators(x for g in gens for x in g)
        ints = IntMatrix([[int(x * den) for x in g] for g in gens], ambient_rank)
        h, _ = hnf(ints) if gens else (IntMatrix((), ambient_rank), None)
        rows = [r for r in h.rows if any(r)]
        g = den
        for r in rows:
            for x in r:
                g = math.gcd(g, x)
        return cls(ambient_rank, IntMatrix([[x // g for x in r] for r in rows], ambient_rank), den // g)

    @property
    def rank(self) -> int:
        return self.basis.nrows

    @property
    def rows(self) -> tuple[tuple[Fraction, ...], ...]:
        return tuple(tuple(Fraction(x, self.denominator) for x in r) for r in self.basis.rows)

    @property
    def pivots(self) -> tuple[int, ...]:
        return tuple(next(j for j, x in enumerate(r) if x) for r in self.basis.rows)

    def coordinates(self, x: Sequence) -> Optional[tuple[Fraction, ...]]:
        """Coefficients ``y`` with ``x = y . rows``, or None if x is outside the span."""
        x = ratvec(x)
        rows = self.rows
        cols = [[rows[i][j] for i in range(len(rows))] for j in range(self.ambient_rank)]
        return solve_rational(cols, x)

    def contains(self, x: Sequence) -> bool:
        y = self.coordinates(x)
        return y is not None and all(c.denominator == 1 for c in y)

    def __contains__(self, x) -> bool:
        return self.contains(x)


def integer_kernel(m: IntMatrix) -> Sublattice:
    """Lattice of integer row vectors ``k`` with ``k @ m == 0``."""
    h, u = hnf(m)
    gens = [u[i] for i in range(h.nrows) if not any(h[i])]
    return Sublattice.from_generators(gens, m.nrows)


def dual_lattice(s: Sublattice) -> Sublattice:
    """Rational vectors pairing integrally with ``s``, in the canonical section.

    Classes modulo the annihilator of ``span(s)`` are represented by vectors
    vanishing outside the HNF pivot columns of ``s``.
    """
    if s.rank == 0:
        raise ToricError("dual of trivial lattice")
    piv = s.pivots
    rows = s.rows
    bp = [[rows[i][j] for j in piv] for i in range(s.rank)]
    inv = inverse(bp)
    gens = []
    for j in range(s.rank):
        x = [Fraction(0)] * s.ambient_rank
        for a, col in enumerate(piv):
            x[col] = inv[a][j]
        gens.append(x)
    return Sublattice.from_generators(gens, s.ambient_rank)


# -- cones -----------------------------------------------------------------


def in_cone(gens: Sequence[Sequence], x: Sequence) -> bool:
    """Whether ``x`` is a nonnegative rational combination of ``gens``."""
    gens = [ratvec(g) for g in gens]
    x = ratvec(x)
    if not gens:
        return all(v == 0 for v in x)
    cols = [[g[i] for g in gens] for i in range(len(x))]
    return feasible_nonneg(cols, x) is not None


def is_pointed(gens: Sequence[Sequence]) -> bool:
    """A cone is pointed iff no nontrivial nonnegative combination vanishes."""
    gens = [ratvec(g) for g in gens]
    if not gens:
        return True
    n = len(gens[0])
    cols = [[g[i] for g in gens] for i in range(n)] + [[Fraction(1)] * len(gens)]
    return feasible_nonneg(cols, [0] * n + [1]) is None


def _content(v: Sequence[Fraction]) -> Fraction:
    num = 0
    den = 1
    for x in v:
        num = math.gcd(num, x.numerator)
        den = math.lcm(den, x.denominator)
    return Fraction(num, den)


class _LatticeFrame:
    """Coordinates with respect to a full-rank lattice basis of its span."""

    def __init__(self, basis_rows: Sequence[Sequence], ambient: int):
        self.rows = [ratvec(r) for r in basis_rows]
        self.ambient = ambient
        self.m = len(self.rows)
        if rank(self.rows) != self.m:
            raise ToricError("lattice basis rows are dependent")

    def coords(self, x) -> tuple[Fraction, ...]:
        cols = [[self.rows[i][j] for i in range(self.m)] for j in range(self.ambient)]
        y = solve_rational(cols, x)
        if y is None:
            raise ToricError("vector outside the span of the lattice")
        return y

    def point(self, y) -> tuple[Fraction, ...]:
        return tuple(sum(y[i] * self.rows[i][j] for i in range(self.m)) for j in range(self.ambient))

    def primitive(self, x) -> tuple[Fraction, ...]:
        """First lattice point on the ray through ``x``."""
        y = self.coords(x)
        c = _content(y)
        if c == 0:
            raise ToricError("zero cone generator")
        return self.point(tuple(v / c for v in y))


def parallelepiped_points(gens: Sequence[Sequence], lattice: Optional[Sequence[Sequence]] = None):
    """Lattice points ``sum t_i g_i`` with ``0 <= t_i < 1``.

    ``gens`` must be linearly independent lattice vectors.  Yields pairs
    ``(point, t)``; the count equals the index of the generated sublattice
    in the saturated lattice of its span.
    """
    gens = [ratvec(g) for g in gens]
    k = len(gens)
    if k == 0:
        return [(tuple(), tuple())]
    n = len(gens[0])
    frame = _LatticeFrame(lattice if lattice is not None else IntMatrix.identity(n).rows, n)
    c = [frame.coords(g) for g in gens]
    if any(x.denominator != 1 for r in c for x in r):
        raise ToricError("cone generators are not lattice points")
    mat = IntMatrix([[int(x) for x in r] for r in c], frame.m)
    d, u, _ = snf(mat)
    diag = [d[i, i] for i in range(k)]
    if any(x == 0 for x in diag):
        raise ToricError("cone generators are linearly dependent")
    # t = w u with w_i in (1/s_i) Z / Z
    ranges = [range(s) for s in diag]
    out = []
    for a in itertools.product(*ranges):
        w = [Fraction(a_i, s) for a_i, s in zip(a, diag)]
        t = [sum(w[i] * u[i, j] for i in range(k)) for j in range(k)]
        t = tuple(x - math.floor(x) for x in t)
        p = tuple(sum(t[i] * gens[i][j] for i in range(k)) for j in range(n))
        out.append((p, t))
    out.sort(key=lambda pt: (sum(pt[1]), pt[1]))
    return out


def simplicial_cover(gens: Sequence[Sequence]) -> list[tuple[int, ...]]:
    """Index sets of all linearly independent ``dim``-subsets of ``gens``.

    Their cones cover the cone spanned by ``gens`` (Caratheodory).
    """
    gens = [ratvec(g) for g in gens]
    d = rank(gens)
    return [s for s in itertools.combinations(range(len(gens)), d) if rank([gens[i] for i in s]) == d]


def hilbert_basis(gens: Sequence[Sequence], lattice: Optional[Sequence[Sequence]] = None) -> list[tuple[Fraction, ...]]:
    """Minimal generating set of ``cone(gens) ∩ lattice``.

    ``lattice`` is given by basis rows (default: the standard integer
    lattice) and must span a space containing the cone.  Candidates are the
    primitive ray generators plus fundamental-parallelepiped points of a
    simplicial cover; reducible candidates are filtered out.  Returned sorted.
    """
    gens = [ratvec(g) for g in gens]
    if not gens:
        return []
    n = len(gens[0])
    if not is_pointed(gens):
        raise ToricError("cone is not pointed")
    frame = _LatticeFrame(lattice if lattice is not None else IntMatrix.identity(n).rows, n)
    prim = []
    for g in gens:
        p = frame.primitive(g)
        if p not in prim:
            prim.append(p)
    candidates = set(prim)
    for simplex in simplicial_cover(prim):
        sub = [prim[i] for i in simplex]
        for p, _ in parallelepiped_points(sub, frame.rows):
            if any(p):
                candidates.add(p)
    cand = sorted(candidates)
    basis = []
    for c in cand:
        reducible = any(
            h != c and in_cone(prim, tuple(a - b for a, b in zip(c, h))) for h in cand
        )
        if not reducible:
            basis.append(c)
    return basis


def _vectors_of_l1(k: int, norm: int, cap: int):
    """Integer vectors of length k, L1 norm ``norm``, entries in [-cap, cap]."""
    if k == 0:
        if norm == 0:
            yield ()
        return
    for a in range(0, min(norm, cap) + 1):
        for s in ((a,) if a == 0 else (a, -a)):
            for rest in _vectors_of_l1(k - 1, norm - a, cap):
                yield (s,) + rest


def find_positive_functional(vectors: Sequence[Sequence], dim: int, cap: int = 6) -> Optional[tuple[int, ...]]:
    """First integer ``c`` (by L1 norm, then a fixed order) with ``c . v > 0`` for all v.

    Entries are bounded by ``cap``; returns None if the search is exhausted.
    """
    vecs = [ratvec(v) for v in vectors]
    for norm in range(1, cap * dim + 1):
        for c in _vectors_of_l1(dim, norm, cap):
            if all(sum(a * b for a, b in zip(c, v)) > 0 for v in vecs):
                return c
    return None
