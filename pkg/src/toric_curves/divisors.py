"""Support functions, their dual lattice of labels, and topological invariants.

A support function is recorded by its values ``h_i = h(v_i)`` on the rays,
so ``SF`` is a sublattice of ``Z^u``.  Labels are rational ray-coordinate
vectors ``x`` paired with ``h`` by the dot product.  Two labels are equal when
they pair identically with ``SF``; the canonical representative vanishes off
the HNF pivot columns of the ``SF`` basis.

Internally a label is often handled through its *pairing vector*
``y = B x`` where ``B`` is the HNF basis of ``SF``.  In those coordinates the
dual lattice is exactly ``Z^k``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .errors import FanError, InputFormatError, NotInDualError, ToricError
from .fan import Fan
from .lattice import (
    IntMatrix,
    Sublattice,
    hilbert_basis,
    integer_kernel,
    inverse,
    invariant_factors,
    ratvec,
)


@dataclass(frozen=True)
class AbelianGroup:
    free_rank: int
    torsion: tuple[int, ...] = ()

    @property
    def is_trivial(self) -> bool:
        return self.free_rank == 0 and not self.torsion

    def __str__(self) -> str:
        parts = []
        if self.free_rank:
            parts.append("Z" if self.free_rank == 1 else f"Z^{self.free_rank}")
        parts += [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) if parts else "0"


def _group_from_relations(rows, ambient: int) -> AbelianGroup:
    """``Z^ambient`` modulo the row span of ``rows``."""
    if not rows:
        return AbelianGroup(ambient)
    factors = invariant_factors(IntMatrix(rows, ambient))
    return AbelianGroup(ambient - len(factors), tuple(d for d in factors if d > 1))


class SupportLattice:
    """``SF`` of a complete fan together with the canonical section of its dual."""

    def __init__(self, fan: Fan, lattice: Sublattice):
        if lattice.denominator != 1:
            raise ToricError("support lattice must be integral")
        self.fan = fan
        self.lattice = lattice
        self.basis = lattice.basis
        self.rank = lattice.rank
        self.pivots = lattice.pivots
        bp = [[self.basis[i, j] for j in self.pivots] for i in range(self.rank)]
        self._bp_inv = inverse(bp)

    @property
    def u(self) -> int:
        return self.fan.nrays

    def __repr__(self) -> str:
        return f"SupportLattice(rank={self.rank}, basis={self.basis.tolist()})"

    def contains(self, h: Sequence) -> bool:
        return self.lattice.contains(h)

    def sf_coordinates(self, h: Sequence) -> tuple[int, ...]:
        """Integer coefficients of ``h`` in the HNF basis."""
        c = self.lattice.coordinates(h)
        if c is None or any(x.denominator != 1 for x in c):
            raise ToricError(f"{list(h)} is not a support function of the fan")
        return tuple(int(x) for x in c)

    # pairing coordinates
    def pairing(self, x: Sequence) -> tuple[Fraction, ...]:
        x = ratvec(x)
        if len(x) != self.u:
            raise ToricError(f"label has {len(x)} coordinates, expected {self.u}")
        return tuple(sum(b * xi for b, xi in zip(row, x)) for row in self.basis.rows)

    def pairing_int(self, x: Sequence) -> tuple[int, ...]:
        y = self.pairing(x)
        if any(c.denominator != 1 for c in y):
            raise NotInDualError("not in SF(Δ)*: " + format_label(x))
        return tuple(int(c) for c in y)

    def in_dual(self, x: Sequence) -> bool:
        return all(c.denominator == 1 for c in self.pairing(x))

    def from_pairing(self, y: Sequence) -> tuple[Fraction, ...]:
        """Canonical label with pairing vector ``y``."""
        out = [Fraction(0)] * self.u
        for a, col in enumerate(self.pivots):
            out[col] = sum(self._bp_inv[a][j] * y[j] for j in range(self.rank))
        return tuple(out)

    def canonicalize(self, x: Sequence) -> tuple[Fraction, ...]:
        return self.from_pairing(self.pairing_int(x))

    def evaluate(self, h: Sequence, x: Sequence) -> Fraction:
        """Pairing of a support function with a label."""
        return sum(Fraction(a) * b for a, b in zip(h, ratvec(x)))

    def unit_label(self, i: int) -> tuple[Fraction, ...]:
        return self.canonicalize([int(j == i) for j in range(self.u)])


@lru_cache(maxsize=None)
def support_lattice(f: Fan) -> SupportLattice:
    """Integer ray values of support functions that are linear with integral
    slope on every maximal cone."""
    if not f.report.is_complete:
        raise FanError("fan not complete")
    u, r = f.nrays, f.rank
    cones = f.max_cones
    nvars = u + r * len(cones)
    # columns are equations h_i - <m_c, v_i> = 0; rows are variables
    cols = []
    for c, idx in enumerate(cones):
        for i in idx:
            col = [0] * nvars
            col[i] = 1
            for k in range(r):
                col[u + r * c + k] = -f.rays[i][k]
            cols.append(col)
    m = IntMatrix([[col[v] for col in cols] for v in range(nvars)], len(cols))
    kern = integer_kernel(m)
    gens = [row[:u] for row in kern.basis.rows]
    return SupportLattice(f, Sublattice.from_generators(gens, u))


def iota(f: Fan) -> IntMatrix:
    """``r x u`` matrix; row ``k`` is the support function of the k-th coordinate."""
    return f.ray_matrix().T


def iota_star(f: Fan) -> IntMatrix:
    """``r x u`` matrix sending ray coordinates ``x`` to ``sum x_i v_i``."""
    return f.ray_matrix().T


def apply_iota_star(f: Fan, x: Sequence) -> tuple[Fraction, ...]:
    x = ratvec(x)
    return tuple(sum(xi * v[k] for xi, v in zip(x, f.rays)) for k in range(f.rank))


def picard(f: Fan) -> AbelianGroup:
    """``SF / iota(Z^r)``; for complete fans this is ``H^2`` and the Picard group."""
    sl = support_lattice(f)
    rows = [sl.sf_coordinates(row) for row in iota(f).rows]
    return _group_from_relations(rows, sl.rank)


def pi1_variety(f: Fan) -> AbelianGroup:
    """``Z^r`` modulo the subgroup generated by the lattice points of the cones."""
    if not f.report.is_complete:
        raise FanError("fan not complete")
    gens = []
    for idx in f.max_cones:
        for p in hilbert_basis([f.rays[i] for i in idx]):
            gens.append([int(x) for x in p])
    return _group_from_relations(gens, f.rank)


def pi2_lattice(f: Fan) -> Sublattice:
    """Labels in the kernel of ``iota*``, in canonical coordinates.

    This is ``pi_2`` when ``H_2`` is torsion free; in general it is the
    curve-class lattice modulo torsion.
    """
    sl = support_lattice(f)
    k = sl.rank
    # iota* of the canonical label with pairing vector e_j
    images = [apply_iota_star(f, sl.from_pairing([int(a == j) for a in range(k)])) for j in range(k)]
    den = 1
    for img in images:
        for c in img:
            den = math.lcm(den, c.denominator)
    m = IntMatrix([[int(c * den) for c in img] for img in images], f.rank)
    kern = integer_kernel(m)
    labels = [sl.from_pairing(y) for y in kern.basis.rows]
    return Sublattice.from_generators(labels, f.nrays) if labels else Sublattice(f.nrays, IntMatrix((), f.nrays))


@dataclass(frozen=True)
class DivisorClass:
    label: tuple[Fraction, ...]
    in_kernel: bool


def divisor_class(f: Fan, x: Sequence) -> DivisorClass:
    sl = support_lattice(f)
    lab = sl.canonicalize(x)
    return DivisorClass(lab, all(c == 0 for c in apply_iota_star(f, lab)))


def canonicalize(f: Fan, x: Sequence) -> tuple[Fraction, ...]:
    return support_lattice(f).canonicalize(x)


# -- formatting and files --------------------------------------------------


def format_rational(q: Fraction) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def format_label(x: Sequence) -> str:
    return "(" + ", ".join(format_rational(Fraction(c)) for c in x) + ")"


def parse_rational(s) -> Fraction:
    if isinstance(s, bool) or isinstance(s, float):
        raise InputFormatError(f"expected an integer or a 'p/q' string, got {s!r}")
    if isinstance(s, int):
        return Fraction(s)
    if not isinstance(s, str):
        raise InputFormatError(f"expected a rational string, got {s!r}")
    try:
        q = Fraction(s.strip())
    except (ValueError, ZeroDivisionError):
        raise InputFormatError(f"malformed rational {s!r}") from None
    if "." in s or "e" in s.lower():
        raise InputFormatError(f"decimal notation is not accepted: {s!r}")
    return q


def label_from_json(text: str) -> tuple[Fraction, ...]:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputFormatError(f"divisor file is not valid JSON: {exc}") from None
    if not isinstance(data, dict) or set(data) != {"coords"} or not isinstance(data["coords"], list):
        raise InputFormatError('divisor file must be an object {"coords": [...]}')
    return tuple(parse_rational(s) for s in data["coords"])


def label_to_json(x: Sequence) -> str:
    return json.dumps({"coords": [format_rational(Fraction(c)) for c in x]}) + "\n"


def check_label_length(f: Fan, x: Sequence) -> None:
    if len(x) != f.nrays:
        raise InputFormatError(f"label has {len(x)} coordinates but the fan has {f.nrays} rays")

