"""Complete rational fans: validation, smoothness, faces and a small catalog."""

from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Optional, Sequence

from .errors import FanError, InputFormatError
from .lattice import (
    IntMatrix,
    feasible_nonneg,
    inverse,
    invariant_factors,
    is_pointed,
    nullspace,
    rank,
)


@dataclass(frozen=True)
class Cone:
    ray_indices: tuple[int, ...]
    generators: IntMatrix


@dataclass(frozen=True)
class FanReport:
    is_simplicial: bool
    is_smooth: bool
    is_complete: bool
    # only simplicial maximal cones appear here
    multiplicities: dict = field(default_factory=dict)


def _primitive(v: Sequence[int]) -> tuple[int, ...]:
    g = 0
    for x in v:
        g = math.gcd(g, x)
    if g == 0:
        raise FanError("zero ray vector")
    return tuple(x // g for x in v)


@dataclass(frozen=True)
class Fan:
    """A fan given by primitive rays and the ray-index sets of its maximal cones.

    Build fans with :meth:`Fan.build`, which normalizes rays and checks the
    structural invariants; geometric checks live in :func:`validate`.
    """

    rank: int
    rays: tuple[tuple[int, ...], ...]
    max_cones: tuple[tuple[int, ...], ...]
    lattice_note: Optional[str] = field(default=None, compare=False)
    name: Optional[str] = field(default=None, compare=False)

    @classmethod
    def build(
        cls,
        rank: int,
        rays: Sequence[Sequence[int]],
        max_cones: Sequence[Sequence[int]],
        lattice_basis: Optional[Sequence[Sequence[int]]] = None,
        name: Optional[str] = None,
        lattice_note: Optional[str] = None,
    ) -> "Fan":
        if rank < 1:
            raise FanError("lattice rank must be positive")
        rays = [tuple(int(x) for x in IntMatrix([r], rank).rows[0]) for r in rays]
        if lattice_basis is not None:
            rays = _rebase(rays, lattice_basis, rank)
            lattice_note = "rays rebased onto lattice basis " + json.dumps(
                [list(b) for b in lattice_basis]
            )
        rays = [_primitive(r) for r in rays]
        if len(set(rays)) != len(rays):
            raise FanError("duplicate rays")
        cones = []
        for c in max_cones:
            s = tuple(sorted(set(int(i) for i in c)))
            if not s:
                raise FanError("empty maximal cone")
            if any(i < 0 or i >= len(rays) for i in s):
                raise FanError(f"ray index out of range in cone {list(c)}")
            cones.append(s)
        used = set().union(*cones) if cones else set()
        if used != set(range(len(rays))):
            raise FanError("every ray must lie in some maximal cone")
        for a, b in itertools.permutations(range(len(cones)), 2):
            if set(cones[a]) <= set(cones[b]):
                raise FanError(f"maximal cone {list(cones[a])} is contained in {list(cones[b])}")
        return cls(rank, tuple(rays), tuple(cones), lattice_note, name)

    @property
    def nrays(self) -> int:
        return len(self.rays)

    def cone(self, i: int) -> Cone:
        idx = self.max_cones[i]
        return Cone(idx, IntMatrix([self.rays[j] for j in idx], self.rank))

    def cone_of(self, ray_indices: Sequence[int]) -> Cone:
        idx = tuple(sorted(ray_indices))
        return Cone(idx, IntMatrix([self.rays[j] for j in idx], self.rank))

    def ray_matrix(self) -> IntMatrix:
        """u x r matrix whose rows are the rays."""
        return IntMatrix(self.rays, self.rank)

    @cached_property
    def report(self) -> FanReport:
        return validate(self)

    def label(self) -> str:
        return self.name or "fan"


def _rebase(rays, basis, rank):
    basis = [list(b) for b in basis]
    if len(basis) != rank or any(len(b) != rank for b in basis):
        raise FanError("lattice_basis must be a rank x rank matrix")
    try:
        inv = inverse(basis)
    except Exception as exc:
        raise FanError("lattice_basis is singular") from exc
    out = []
    for v in rays:
        y = [sum(Fraction(v[i]) * inv[i][j] for i in range(rank)) for j in range(rank)]
        if any(c.denominator != 1 for c in y):
            raise FanError(f"ray {list(v)} is not in the given lattice")
        out.append(tuple(int(c) for c in y))
    return out


# -- geometry --------------------------------------------------------------


def _is_simplicial_cone(f: Fan, idx) -> bool:
    gens = [f.rays[i] for i in idx]
    return rank(gens) == len(gens)


def multiplicity(f: Fan, c: Cone) -> int:
    """Index of the group generated by the cone's rays in the saturated lattice."""
    gens = c.generators
    if rank(gens.rows) != gens.nrows:
        raise FanError("multiplicity is defined only for simplicial cones")
    m = 1
    for d in invariant_factors(gens):
        m *= d
    return m


def cone_facets(rays: Sequence[Sequence[int]], idx: Sequence[int]) -> list[tuple[tuple[int, ...], tuple[Fraction, ...]]]:
    """Facets of the cone on ``rays[i]`` (i in idx) as (ray subset, inward normal).

    Works inside the linear span of the cone, so lower-dimensional cones are
    fine; the normal lies in that span.
    """
    gens = {i: tuple(rays[i]) for i in idx}
    n = len(next(iter(gens.values())))
    dim = rank(list(gens.values()))
    complement = nullspace(list(gens.values()), n)
    out = {}
    for sub in itertools.combinations(idx, dim - 1):
        rows = [gens[i] for i in sub]
        if rank(rows) != dim - 1:
            continue
        (normal,) = nullspace(rows + list(complement), n)
        vals = {i: sum(Fraction(a) * b for a, b in zip(gens[i], normal)) for i in idx}
        if all(v >= 0 for v in vals.values()):
            pass
        elif all(v <= 0 for v in vals.values()):
            normal = tuple(-x for x in normal)
            vals = {i: -v for i, v in vals.items()}
        else:
            continue
        on = tuple(sorted(i for i, v in vals.items() if v == 0))
        out.setdefault(on, normal)
    return sorted(out.items())


def _improper_overlap(f: Fan, a, b) -> bool:
    """Simplicial cones a, b meet in more than the cone on their common rays."""
    common = set(a) & set(b)
    ga, gb = list(a), list(b)
    n = len(ga) + len(gb)
    rows = []
    for k in range(f.rank):
        rows.append([f.rays[i][k] for i in ga] + [-f.rays[j][k] for j in gb])
    rows.append([0 if i in common else 1 for i in ga] + [0 if j in common else 1 for j in gb])
    return feasible_nonneg(rows, [0] * f.rank + [1]) is not None and n > 0


def _facet_pairing(f: Fan) -> Optional[str]:
    """None if complete; otherwise "incomplete" or "overlap"."""
    facets = {}
    for c, idx in enumerate(f.max_cones):
        if rank([f.rays[i] for i in idx]) != f.rank:
            return "incomplete"
        for on, normal in cone_facets(f.rays, idx):
            facets.setdefault(on, []).append((c, normal))
    for on, owners in facets.items():
        if len(owners) == 1:
            return "incomplete"
        if len(owners) > 2:
            return "overlap"
        (c1, n1), (c2, n2) = owners
        # inward normals must point to opposite sides
        ratio = next(a / b for a, b in zip(n1, n2) if b != 0)
        if ratio > 0:
            return "overlap"
    return None


def validate(f: Fan) -> FanReport:
    """Check strong convexity, proper intersections and completeness."""
    for idx in f.max_cones:
        if not is_pointed([f.rays[i] for i in idx]):
            raise FanError(f"not strongly convex: cone {list(idx)}")
    simplicial = all(_is_simplicial_cone(f, idx) for idx in f.max_cones)
    if simplicial:
        for a, b in itertools.combinations(f.max_cones, 2):
            if _improper_overlap(f, a, b):
                raise FanError(f"cones overlap improperly: {list(a)} and {list(b)}")
    pairing = _facet_pairing(f)
    if pairing == "overlap":
        raise FanError("cones overlap improperly")
    if pairing == "incomplete":
        raise FanError("fan not complete")
    mults = {}
    for c, idx in enumerate(f.max_cones):
        if _is_simplicial_cone(f, idx):
            mults[c] = multiplicity(f, f.cone(c))
    smooth = simplicial and all(m == 1 for m in mults.values())
    return FanReport(simplicial, smooth, True, mults)


def is_smooth(f: Fan) -> bool:
    return f.report.is_smooth


def is_simplicial(f: Fan) -> bool:
    return all(_is_simplicial_cone(f, idx) for idx in f.max_cones)


def is_complete(f: Fan) -> bool:
    """Facet-pairing test; does not raise on incomplete fans."""
    for idx in f.max_cones:
        if not is_pointed([f.rays[i] for i in idx]):
            return False
    return _facet_pairing(f) is None


def face_sets(f: Fan) -> list[tuple[int, ...]]:
    """All ray-index sets contained in some maximal cone (the empty set included)."""
    out = set()
    for idx in f.max_cones:
        for k in range(len(idx) + 1):
            out.update(itertools.combinations(idx, k))
    return sorted(out, key=lambda s: (len(s), s))


def is_face_set(f: Fan, s) -> bool:
    s = set(s)
    return any(s <= set(idx) for idx in f.max_cones)


def minimal_nonfaces(f: Fan) -> list[tuple[int, ...]]:
    """Inclusion-minimal ray sets contained in no maximal cone."""
    top = max(len(c) for c in f.max_cones) + 1
    out = []
    for k in range(1, top + 1):
        for s in itertools.combinations(range(f.nrays), k):
            if is_face_set(f, s):
                continue
            if all(is_face_set(f, t) for t in itertools.combinations(s, k - 1)):
                out.append(s)
    return out


def containing_cones(f: Fan, v: Sequence) -> list[int]:
    """Indices of maximal cones whose rational cone contains ``v``."""
    out = []
    for c, idx in enumerate(f.max_cones):
        cols = [[f.rays[i][k] for i in idx] for k in range(f.rank)]
        if feasible_nonneg(cols, v) is not None:
            out.append(c)
    return out


# -- catalog ---------------------------------------------------------------


def _omit_one(n_rays: int) -> list[tuple[int, ...]]:
    return [tuple(j for j in range(n_rays) if j != i) for i in range(n_rays)]


def projective(n: int) -> Fan:
    if n < 1:
        raise FanError("projective space needs n >= 1")
    rays = [tuple([-1] * n)] + [tuple(int(i == j) for j in range(n)) for i in range(n)]
    return Fan.build(n, rays, _omit_one(n + 1), name=f"projective({n})")


def hirzebruch(k: int) -> Fan:
    if k < 0:
        raise FanError("Hirzebruch parameter must be nonnegative")
    rays = [(1, 0), (0, 1), (-1, k), (0, -1)]
    return Fan.build(2, rays, [(0, 1), (1, 2), (2, 3), (3, 0)], name=f"hirzebruch({k})")


def weighted(*weights: int) -> Fan:
    """Weighted projective space with weights ``(1, a_1, ..., a_n)``."""
    if len(weights) < 2:
        raise FanError("weighted projective space needs at least two weights")
    if any(w <= 0 for w in weights):
        raise FanError("weights must be positive")
    if weights[0] != 1:
        raise FanError("the first weight must be 1")
    n = len(weights) - 1
    rays = [tuple(int(i == j) for j in range(n)) for i in range(n)]
    rays.append(tuple(-w for w in weights[1:]))
    name = "weighted(" + ",".join(str(w) for w in weights) + ")"
    return Fan.build(n, rays, _omit_one(n + 1), name=name)


def quadric() -> Fan:
    rays = [(1, 0), (-1, 2), (0, -1)]
    return Fan.build(2, rays, [(0, 1), (1, 2), (2, 0)], name="quadric")


TETRAHEDRAL_AMBIENT_RAYS = (
    (1, 1, -1),
    (1, -1, 1),
    (-1, 1, 1),
    (1, 1, 1),
    (-1, -1, 1),
    (-1, 1, -1),
    (1, -1, -1),
    (-1, -1, -1),
)
TETRAHEDRAL_RAY_NAMES = ("v12", "v13", "v23", "v123", "v'12", "v'13", "v'23", "v'123")
TETRAHEDRAL_BASIS = ((1, 1, 1), (1, 1, -1), (1, -1, 1))


def tetrahedral() -> Fan:
    """Fan over the faces of the cube with vertices (+-1, +-1, +-1)."""
    cones = []
    for axis in range(3):
        for sign in (1, -1):
            cones.append(tuple(i for i, v in enumerate(TETRAHEDRAL_AMBIENT_RAYS) if v[axis] == sign))
    return Fan.build(
        3, TETRAHEDRAL_AMBIENT_RAYS, cones, lattice_basis=TETRAHEDRAL_BASIS, name="tetrahedral"
    )


CATALOG = {
    "projective": projective,
    "hirzebruch": hirzebruch,
    "weighted": weighted,
    "quadric": quadric,
    "tetrahedral": tetrahedral,
}


def catalog(name: str, *params: int) -> Fan:
    try:
        ctor = CATALOG[name]
    except KeyError:
        raise FanError(f"unknown catalog fan {name!r}; known: {', '.join(sorted(CATALOG))}") from None
    try:
        return ctor(*params)
    except TypeError as exc:
        raise FanError(f"invalid parameters for {name}: {list(params)}") from exc


# -- file format -----------------------------------------------------------


def fan_from_dict(data) -> Fan:
    if not isinstance(data, dict):
        raise InputFormatError("fan file must hold a JSON object")
    allowed = {"rank", "rays", "max_cones", "lattice_basis", "name", "lattice_note"}
    extra = set(data) - allowed
    if extra:
        raise InputFormatError(f"unknown fan keys: {sorted(extra)}")
    try:
        r = data["rank"]
        rays = data["rays"]
        cones = data["max_cones"]
    except KeyError as exc:
        raise InputFormatError(f"fan file missing key {exc.args[0]!r}") from None
    ok = (
        isinstance(r, int)
        and not isinstance(r, bool)
        and isinstance(rays, list)
        and all(isinstance(v, list) and len(v) == r and all(isinstance(x, int) and not isinstance(x, bool) for x in v) for v in rays)
        and isinstance(cones, list)
        and all(isinstance(c, list) and all(isinstance(i, int) and not isinstance(i, bool) for i in c) for c in cones)
    )
    if not ok:
        raise InputFormatError("fan file: rank must be an integer, rays integer vectors of that length, max_cones lists of indices")
    basis = data.get("lattice_basis")
    if basis is not None and not (
        isinstance(basis, list) and all(isinstance(b, list) and all(isinstance(x, int) for x in b) for b in basis)
    ):
        raise InputFormatError("lattice_basis must be an integer matrix")
    return Fan.build(r, rays, cones, lattice_basis=basis, name=data.get("name"), lattice_note=data.get("lattice_note"))


def fan_from_json(text: str) -> Fan:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputFormatError(f"fan file is not valid JSON: {exc}") from None
    return fan_from_dict(data)


def fan_to_dict(f: Fan) -> dict:
    out = {"rank": f.rank, "rays": [list(v) for v in f.rays], "max_cones": [list(c) for c in f.max_cones]}
    if f.name is not None:
        out["name"] = f.name
    if f.lattice_note is not None:
        out["lattice_note"] = f.lattice_note
    return out


def fan_to_json(f: Fan) -> str:
    return json.dumps(fan_to_dict(f), indent=None, separators=(", ", ": ")) + "\n"
