"""The partial monoid of valid labels.

Labels are handled through integer pairing vectors (see ``divisors``).  Two
membership rules are offered:

``cone``
    a label is valid when some representative is nonnegative and supported on
    the rays of a single maximal cone.  This rule is invariant under scaling.
``resolution``
    a label is valid when it is the pushforward of a nonnegative integer label
    supported on one cone of a resolution.  Each final ray ``j`` pushes
    forward to an integer vector ``g_j`` and validity means ``y`` is a
    nonnegative integer combination of the ``g_j`` of one final cone.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional, Sequence

from .divisors import SupportLattice, support_lattice
from .errors import ToricError
from .fan import Fan
from .lattice import feasible_nonneg, find_positive_functional, hilbert_basis, ratvec, solve_rational
from .resolve import ResolutionChain, desingularize, pullback_T

SEMANTICS = ("cone", "resolution")


def _add(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _sub(a, b):
    return tuple(x - y for x, y in zip(a, b))


class PartialMonoid:
    """Valid labels of a complete fan under a chosen membership rule.

    Args:
        fan: a complete fan.
        semantics: ``"cone"`` or ``"resolution"``.
        chain: resolution used by the resolution rule; computed with
            :func:`desingularize` when omitted.
    """

    def __init__(self, fan: Fan, semantics: str = "resolution", chain: Optional[ResolutionChain] = None):
        if semantics not in SEMANTICS:
            raise ToricError(f"unknown semantics {semantics!r}; use cone or resolution")
        self.fan = fan
        self.semantics = semantics
        self.sl: SupportLattice = support_lattice(fan)
        self.k = self.sl.rank
        self.chain = None
        if semantics == "resolution":
            self.chain = chain if chain is not None else desingularize(fan)
            if self.chain.base_fan != fan:
                raise ToricError("resolution chain does not start at this fan")
            self._cones = self._resolution_cones()
        else:
            self._cones = [
                [tuple(self.sl.basis[a, i] for a in range(self.k)) for i in idx] for idx in fan.max_cones
            ]
        self._valid: dict = {}
        self._gens: Optional[list[list[tuple[int, ...]]]] = None
        self._grading = None
        self._simples = None

    def _resolution_cones(self):
        final = self.chain.final_fan
        pulled = [pullback_T(self.chain, row) for row in self.sl.basis.rows]
        g = [tuple(int(p[j]) for p in pulled) for j in range(final.nrays)]
        return [[g[j] for j in idx] for idx in final.max_cones]

    # -- membership --------------------------------------------------------

    def pairing(self, label: Sequence) -> tuple[int, ...]:
        return self.sl.pairing_int(label)

    def label(self, y: Sequence[int]) -> tuple[Fraction, ...]:
        return self.sl.from_pairing(y)

    def is_valid_pairing(self, y: tuple[int, ...]) -> bool:
        y = tuple(y)
        hit = self._valid.get(y)
        if hit is None:
            hit = not any(y) or any(self._in_cone(gens, y) for gens in self._cones)
            self._valid[y] = hit
        return hit

    def _in_cone(self, gens, y) -> bool:
        cols = [[g[a] for g in gens] for a in range(self.k)]
        if self.semantics == "cone":
            return feasible_nonneg(cols, y) is not None
        x = solve_rational(cols, y)
        return x is not None and all(c >= 0 and c.denominator == 1 for c in x)

    def is_valid_label(self, label: Sequence) -> bool:
        """Condition (X) for ``label``; raises if it is not in the dual lattice."""
        return self.is_valid_pairing(self.pairing(label))

    # -- generators, grading and simples -----------------------------------

    def cone_generators(self) -> list[list[tuple[int, ...]]]:
        """Per cone, a finite set generating its valid labels as a monoid."""
        if self._gens is None:
            if self.semantics == "resolution":
                self._gens = [list(g) for g in self._cones]
            else:
                self._gens = [
                    [tuple(int(x) for x in h) for h in hilbert_basis(gens)] for gens in self._cones
                ]
        return self._gens

    def candidates(self) -> list[tuple[int, ...]]:
        out = set()
        for gens in self.cone_generators():
            out.update(gens)
        return sorted(out)

    @property
    def grading(self) -> tuple[int, ...]:
        """Support function (ray values) positive on every nonzero valid label."""
        if self._grading is None:
            c = find_positive_functional(self.candidates(), self.k)
            if c is None:
                raise ToricError("no positive grading found")
            self._kappa_coeffs = c
            self._grading = tuple(
                sum(ci * row[i] for ci, row in zip(c, self.sl.basis.rows)) for i in range(self.fan.nrays)
            )
        return self._grading

    def kappa(self, y: Sequence[int]) -> int:
        self.grading
        return sum(a * b for a, b in zip(self._kappa_coeffs, y))

    def kappa_label(self, label: Sequence) -> Fraction:
        return self.sl.evaluate(self.grading, label)

    def valid_up_to(self, bound: int) -> list[tuple[int, ...]]:
        """Nonzero valid pairing vectors of grade at most ``bound``, sorted."""
        out = set()
        for gens in self.cone_generators():
            weights = [self.kappa(g) for g in gens]

            def rec(i, acc, left):
                if i == len(gens):
                    if any(acc):
                        out.add(acc)
                    return
                n = 0
                cur = acc
                while n * weights[i] <= left:
                    rec(i + 1, cur, left - n * weights[i])
                    cur = _add(cur, gens[i])
                    n += 1

            rec(0, (0,) * self.k, bound)
        return sorted(out)

    def simple_pairings(self) -> list[tuple[int, ...]]:
        if self._simples is None:
            cands = self.candidates()
            top = max((self.kappa(c) for c in cands), default=0)
            pool = [a for a in self.valid_up_to(top)]
            simples = []
            for c in cands:
                kc = self.kappa(c)
                split = any(
                    self.kappa(a) < kc and a != c and self.is_valid_pairing(_sub(c, a)) and any(_sub(c, a))
                    for a in pool
                )
                if not split:
                    simples.append(c)
            simples.sort(key=self.label)
            self._simples = simples
        return self._simples

    def simple_labels(self) -> list[tuple[Fraction, ...]]:
        """Valid labels that are not sums of two nonzero valid labels, sorted."""
        return [self.label(y) for y in self.simple_pairings()]


def is_valid_label(fan: Fan, label: Sequence, semantics: str = "resolution") -> bool:
    return PartialMonoid(fan, semantics).is_valid_label(label)


def simple_labels(fan: Fan, semantics: str = "resolution") -> list[tuple[Fraction, ...]]:
    return PartialMonoid(fan, semantics).simple_labels()


def find_grading(fan: Fan, semantics: str = "resolution") -> tuple[int, ...]:
    return PartialMonoid(fan, semantics).grading


def label_hilbert_basis(pm: PartialMonoid, cone_index: int) -> list[tuple[Fraction, ...]]:
    """Hilbert basis of a maximal cone of the base fan over the dual lattice, as labels."""
    idx = pm.fan.max_cones[cone_index]
    gens = [tuple(pm.sl.basis[a, i] for a in range(pm.k)) for i in idx]
    return sorted(pm.label(tuple(int(x) for x in h)) for h in hilbert_basis(gens))


def to_label(x: Sequence) -> tuple[Fraction, ...]:
    return ratvec(x)
