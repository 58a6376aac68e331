"""Connected components and fundamental-group generators of the label configuration space.

The oracle works on the *merge graph*: vertices are multisets of nonzero
valid labels summing to ``D``; two vertices are joined when one arises from
the other by collapsing several parts whose sum is again valid into a single
part.  Splits are the same edges read backwards.
"""

from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence

from .errors import ResourceLimitError, ToricError
from .fan import multiplicity
from .lattice import rank, solve_rational
from .monoid import PartialMonoid, _add, _sub
from .resolve import simplicialize

DEFAULT_MAX_VERTICES = 200_000


def max_vertices_default() -> int:
    env = os.environ.get("TORIC_MAX_VERTICES")
    if env:
        try:
            return int(env)
        except ValueError:
            raise ToricError(f"TORIC_MAX_VERTICES must be an integer, got {env!r}") from None
    return DEFAULT_MAX_VERTICES


@dataclass(frozen=True)
class Pi0Result:
    components: int
    representatives: tuple[tuple[tuple[Fraction, ...], ...], ...]
    vertices: int


def _target(pm: PartialMonoid, D: Sequence) -> tuple[int, ...]:
    y = pm.pairing(D)
    if pm.kappa(y) < 0:
        raise ToricError("divisor has negative grade, so no decomposition exists")
    return y


def _decompositions(pm: PartialMonoid, y, parts: list, cap: int) -> list[tuple[int, ...]]:
    """Multisets (nondecreasing index tuples into ``parts``) summing to ``y``."""
    weights = [pm.kappa(p) for p in parts]
    count = [0]

    @lru_cache(maxsize=None)
    def rec(rest, start):
        if not any(rest):
            return ((),)
        left = pm.kappa(rest)
        out = []
        for i in range(start, len(parts)):
            if weights[i] > left:
                continue
            for tail in rec(_sub(rest, parts[i]), i):
                out.append((i,) + tail)
                count[0] += 1
                if count[0] > cap * 4:
                    raise ResourceLimitError(f"decomposition enumeration exceeded {cap} vertices")
        return tuple(out)

    result = list(rec(tuple(y), 0))
    if len(result) > cap:
        raise ResourceLimitError(f"merge graph has more than {cap} vertices")
    return result


def pi0_oracle(pm: PartialMonoid, D: Sequence, max_vertices: Optional[int] = None) -> Pi0Result:
    """Count connected components of the merge graph of ``D``."""
    cap = max_vertices if max_vertices is not None else max_vertices_default()
    y = _target(pm, D)
    if not any(y):
        return Pi0Result(1, ((),), 1)
    parts = pm.valid_up_to(pm.kappa(y))
    verts = _decompositions(pm, y, parts, cap)
    if not verts:
        return Pi0Result(0, (), 0)
    vid = {v: n for n, v in enumerate(verts)}
    parent = list(range(len(verts)))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    splits: dict[int, list] = {}
    for v, n in vid.items():
        for i in set(v):
            if i not in splits:
                splits[i] = [w for w in _decompositions(pm, parts[i], parts, cap) if len(w) > 1]
            if not splits[i]:
                continue
            rest = list(v)
            rest.remove(i)
            for w in splits[i]:
                m = vid[tuple(sorted(rest + list(w)))]
                ra, rb = find(n), find(m)
                if ra != rb:
                    parent[max(ra, rb)] = min(ra, rb)
    roots = {}
    for n, v in enumerate(verts):
        r = find(n)
        if r not in roots:
            roots[r] = v
    reps = []
    for v in roots.values():
        reps.append(tuple(sorted(pm.label(parts[i]) for i in v)))
    reps.sort()
    return Pi0Result(len(roots), tuple(reps), len(verts))


# -- certificates ------------------------------------------------------------


def _combination(ms: list, y) -> Optional[tuple[Fraction, ...]]:
    cols = [[m[a] for m in ms] for a in range(len(y))]
    return solve_rational(cols, y)


def _is_m_combination(ms, p) -> Optional[tuple[int, ...]]:
    k = _combination(ms, p)
    if k is None or any(c < 0 or c.denominator != 1 for c in k):
        return None
    return tuple(int(c) for c in k)


def _reduce_to(pm: PartialMonoid, ms: list, start: tuple, limit: int) -> bool:
    """Greedy walk along merge-graph edges from ``start`` to a multiset of elements of ``ms``."""
    mset = set(ms)
    state = sorted(start)
    seen = set()
    for _ in range(limit):
        key = tuple(state)
        if key in seen:
            return False
        seen.add(key)
        if all(p in mset for p in state):
            return True
        moved = False
        # split an M-combination by peeling off one element of M
        for n, p in enumerate(state):
            if p in mset:
                continue
            coeffs = _is_m_combination(ms, p)
            if coeffs is None:
                continue
            for c, m in zip(coeffs, ms):
                rest = _sub(p, m)
                if c > 0 and any(rest) and pm.is_valid_pairing(rest):
                    state = sorted(state[:n] + state[n + 1 :] + [m, rest])
                    moved = True
                    break
            if moved:
                break
        if moved:
            continue
        # merge a non-M part with a partner, preferring M-combination sums
        best = None
        for a, b in itertools.combinations(range(len(state)), 2):
            pa, pb = state[a], state[b]
            if pa in mset and pb in mset:
                continue
            s = _add(pa, pb)
            if not pm.is_valid_pairing(s):
                continue
            score = 0 if _is_m_combination(ms, s) is not None else 1
            if best is None or score < best[0]:
                best = (score, a, b, s)
        if best is None:
            return False
        _, a, b, s = best
        state = sorted([p for n, p in enumerate(state) if n not in (a, b)] + [s])
    return False


def verify_certificate(pm: PartialMonoid, D: Sequence, labels: Sequence[Sequence]) -> bool:
    """Check that ``labels`` certify connectedness of the merge graph of ``D``.

    The labels must be valid, linearly independent, and write ``D`` with
    nonnegative integer coefficients; every all-simple decomposition of ``D``
    must then reduce to a decomposition into these labels.
    """
    y = _target(pm, D)
    ms = [pm.pairing(m) for m in labels]
    if not all(any(m) and pm.is_valid_pairing(m) for m in ms):
        return False
    if ms and rank(ms) != len(ms):
        return False
    if _is_m_combination(ms, y) is None:
        return False
    simples = pm.simple_pairings()
    limit = 50 * (pm.kappa(y) + 2) ** 2
    for v in _decompositions(pm, y, simples, max_vertices_default()):
        if not _reduce_to(pm, ms, tuple(simples[i] for i in v), limit):
            return False
    return True


def pi0_certificate(pm: PartialMonoid, D: Sequence) -> Optional[list[tuple[Fraction, ...]]]:
    """A set of simple labels certifying that the merge graph of ``D`` is connected.

    Subsets are tried by size, then in the order of :meth:`simple_labels`.
    Returns None when no subset works; that proves nothing.
    """
    y = _target(pm, D)
    simples = pm.simple_pairings()
    if not any(y):
        return []
    for size in range(1, min(len(simples), pm.k) + 1):
        for sub in itertools.combinations(simples, size):
            ms = list(sub)
            if rank(ms) != size or _is_m_combination(ms, y) is None:
                continue
            labels = [pm.label(m) for m in ms]
            if verify_certificate(pm, pm.label(y), labels):
                return labels
    return None


# -- fundamental group -------------------------------------------------------


@dataclass(frozen=True)
class Pi1Presentation:
    # pairs of indices into the simple-label list
    generators: tuple[tuple[int, int], ...]
    orders: tuple  # int or math.inf
    simples: tuple[tuple[Fraction, ...], ...]

    @property
    def all_infinite(self) -> bool:
        return all(o == math.inf for o in self.orders)


def index_bound(pm: PartialMonoid) -> int:
    f = pm.fan
    if not f.report.is_simplicial:
        f = simplicialize(f)
    n = 1
    for c in range(len(f.max_cones)):
        n *= multiplicity(f, f.cone(c))
    return n


def pi1_presentation(pm: PartialMonoid, n_max: Optional[int] = None) -> Pi1Presentation:
    """One generator per pair of simples whose sum is invalid, with its order."""
    simples = pm.simple_pairings()
    bound = n_max if n_max is not None else index_bound(pm)
    gens, orders = [], []
    for i, j in itertools.combinations(range(len(simples)), 2):
        s = _add(simples[i], simples[j])
        if pm.is_valid_pairing(s):
            continue
        order = math.inf
        for n in range(2, bound + 1):
            if pm.is_valid_pairing(tuple(n * x for x in s)):
                order = n
                break
        gens.append((i, j))
        orders.append(order)
    return Pi1Presentation(tuple(gens), tuple(orders), tuple(pm.label(s) for s in simples))
