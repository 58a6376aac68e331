"""Based holomorphic maps as tuples of monic polynomials, one per ray.

A map of a smooth toric variety is a tuple ``(p_1, ..., p_u)``: the roots of
``p_i`` mark where the curve meets the i-th orbit closure.  Reading off root
multiplicities gives a labelled configuration and multiplying out a
configuration gives the tuple back.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .divisors import apply_iota_star, support_lattice
from .errors import InputFormatError, MapError
from .fan import Fan, is_face_set, is_simplicial, is_smooth, minimal_nonfaces
from .lattice import IntMatrix, hilbert_basis, invariant_factors, ratvec
from .polys import GaussianRational, Poly, gcd_many, parse_gaussian, product
from .resolve import ResolutionChain, pullback_T, pushforward_Tstar


@dataclass(frozen=True)
class HolMap:
    fan: Fan
    polys: tuple[Poly, ...]
    degree_label: tuple[Fraction, ...]


@dataclass(frozen=True)
class Configuration:
    points: tuple[tuple[GaussianRational, tuple[Fraction, ...]], ...]

    @property
    def total(self) -> tuple[Fraction, ...]:
        if not self.points:
            return ()
        n = len(self.points[0][1])
        return tuple(sum((lab[i] for _, lab in self.points), Fraction(0)) for i in range(n))


def _require_smooth(f: Fan) -> None:
    if not is_smooth(f):
        raise MapError("polynomial tuples describe maps only for smooth fans; resolve first")


def check_condition_x(f: Fan, polys: Sequence[Poly]) -> Optional[tuple[int, ...]]:
    """The first minimal non-face whose polynomials share a root, or None."""
    for s in minimal_nonfaces(f):
        if not gcd_many([polys[i] for i in s]).is_one():
            return s
    return None


def validate_map(f: Fan, polys: Sequence[Poly], require_kernel: bool = True) -> HolMap:
    _require_smooth(f)
    polys = tuple(polys)
    if len(polys) != f.nrays:
        raise MapError(f"need one polynomial per ray: got {len(polys)}, fan has {f.nrays} rays")
    for i, p in enumerate(polys):
        if not p.monic:
            raise MapError(f"polynomial {i} is not monic")
    bad = check_condition_x(f, polys)
    if bad is not None:
        raise MapError(f"condition (X) violated at non-face {list(bad)}")
    D = ratvec(p.degree for p in polys)
    if require_kernel and any(apply_iota_star(f, D)):
        raise MapError(f"degrees {[p.degree for p in polys]} not in ker iota*")
    return HolMap(f, polys, D)


# -- configurations ----------------------------------------------------------


def config_from_map(m: HolMap) -> Configuration:
    """Distinct roots of the tuple, each labelled by its multiplicities."""
    if any(p.factored_form is None for p in m.polys):
        raise MapError("configuration extraction needs every polynomial in factored form")
    u = len(m.polys)
    labels: dict[GaussianRational, list[int]] = {}
    for i, p in enumerate(m.polys):
        for z, k in p.factored_form:
            labels.setdefault(z, [0] * u)[i] += k
    points = []
    for z in sorted(labels):
        lab = ratvec(labels[z])
        support = [i for i, x in enumerate(lab) if x]
        if not is_face_set(m.fan, support):
            raise MapError(f"label at {z} is supported on rays {support}, which span no cone")
        points.append((z, lab))
    return Configuration(tuple(points))


def map_from_config(f: Fan, c: Configuration) -> HolMap:
    _require_smooth(f)
    zs = [z for z, _ in c.points]
    if len(set(zs)) != len(zs):
        raise MapError("configuration points must be distinct")
    for z, lab in c.points:
        if len(lab) != f.nrays:
            raise MapError(f"label at {z} has {len(lab)} coordinates, fan has {f.nrays} rays")
        if not any(lab):
            raise MapError(f"label at {z} is zero")
        if any(x < 0 or Fraction(x).denominator != 1 for x in lab):
            raise MapError(f"label at {z} needs nonnegative integer coordinates")
        support = [i for i, x in enumerate(lab) if x]
        if not is_face_set(f, support):
            raise MapError(f"invalid label at {z}: rays {support} span no cone")
    polys = tuple(Poly.from_roots((z, int(lab[i])) for z, lab in c.points) for i in range(f.nrays))
    D = ratvec(p.degree for p in polys)
    return HolMap(f, polys, D)


# -- projective embeddings -----------------------------------------------------


@dataclass(frozen=True)
class Embedding:
    """Monomial data: character exponents ``m_1..m_N`` (``m_0 = 0`` implied)."""

    fan: Fan
    exponents: tuple[tuple[int, ...], ...]
    # exponent of p_j in every coordinate, so nothing is negative
    shifts: tuple[int, ...]
    relations: tuple[tuple[tuple[int, ...], tuple[int, ...]], ...] = ()

    def powers(self) -> list[list[int]]:
        rows = []
        for m in ((0,) * self.fan.rank,) + self.exponents:
            rows.append([sum(a * b for a, b in zip(m, v)) + s for v, s in zip(self.fan.rays, self.shifts)])
        return rows


def monomial_data(f: Fan, exponents: Sequence[Sequence[int]], relations=()) -> Embedding:
    """Record the monomial map ``z -> [1; z^m_1; ...; z^m_N]`` on the fan's torus."""
    ms = tuple(tuple(int(x) for x in m) for m in exponents)
    if any(len(m) != f.rank for m in ms):
        raise MapError(f"exponent vectors must have length {f.rank}")
    # with m_0 = 0 the differences m_i - m_j span the same lattice as the m_i
    if not ms or _index(ms, f.rank) != 1:
        raise MapError("the exponent differences do not generate the character lattice")
    shifts = tuple(max([0] + [-sum(a * b for a, b in zip(m, v)) for m in ms]) for v in f.rays)
    rels = tuple(_relation(r, len(ms) + 1) for r in relations)
    return Embedding(f, ms, shifts, rels)


def _index(rows, n: int) -> int:
    inv = invariant_factors(IntMatrix(rows))
    if len([x for x in inv if x]) < n:
        return 0
    out = 1
    for x in inv:
        if x:
            out *= x
    return out


def _relation(r, n: int):
    try:
        lhs, rhs = r
        lhs, rhs = tuple(int(x) for x in lhs), tuple(int(x) for x in rhs)
    except (TypeError, ValueError):
        raise InputFormatError(f"relation must be a pair of exponent vectors, got {r!r}") from None
    if len(lhs) != n or len(rhs) != n or min(lhs + rhs) < 0:
        raise InputFormatError(f"relation exponent vectors must be nonnegative of length {n}")
    return lhs, rhs


def embedding_tuple(emb: Embedding, m: HolMap) -> tuple[Poly, ...]:
    if m.fan != emb.fan:
        raise MapError("map and embedding live on different fans")
    return tuple(product(zip(m.polys, row)) for row in emb.powers())


@dataclass(frozen=True)
class RelationFailure:
    relation: int
    degree: int
    lhs: GaussianRational
    rhs: GaussianRational


@dataclass(frozen=True)
class RelationCheck:
    failures: tuple[RelationFailure, ...]

    def __bool__(self):
        return not self.failures


def check_relations(polys: Sequence[Poly], relations) -> RelationCheck:
    """Test each ``monomial = monomial`` relation identically in z."""
    rels = [_relation(r, len(polys)) for r in relations]
    fails = []
    for n, (lhs, rhs) in enumerate(rels):
        a = product(zip(polys, lhs))
        b = product(zip(polys, rhs))
        if a != b:
            width = max(len(a.coeffs), len(b.coeffs))
            for k in range(width):
                x = a.coeffs[k] if k < len(a.coeffs) else GaussianRational()
                y = b.coeffs[k] if k < len(b.coeffs) else GaussianRational()
                if x != y:
                    fails.append(RelationFailure(n, k, x, y))
                    break
    return RelationCheck(tuple(fails))


def verify_embedding(emb: Embedding, m: HolMap) -> RelationCheck:
    return check_relations(embedding_tuple(emb, m), emb.relations)


# -- singular varieties ----------------------------------------------------------


def positive_generators(f: Fan) -> list[tuple[int, ...]]:
    """Hilbert basis of the nonnegative support functions."""
    if not is_simplicial(f):
        raise MapError("positive generators are computed for simplicial fans only")
    sl = support_lattice(f)
    return [tuple(int(x) for x in h) for h in hilbert_basis(IntMatrix.identity(f.nrays).rows, sl.basis.rows)]


def representation_exponents(chain: ResolutionChain, generators: Sequence[Sequence[int]]) -> list[tuple[int, ...]]:
    """Rows ``b_i`` with ``T(tau_i) = sum_j b_ij sigma_j`` on the resolved fan."""
    base = chain.base_fan
    sl = support_lattice(base)
    taus = [tuple(int(x) for x in t) for t in generators]
    for t in taus:
        if len(t) != base.nrays:
            raise MapError(f"generator {list(t)} needs {base.nrays} ray values")
        if not sl.contains(t):
            raise MapError(f"generator {list(t)} is not a support function")
        if min(t) < 0:
            raise MapError(f"generator {list(t)} is not positive")
    if is_simplicial(base):
        have = set(taus)
        missing = [h for h in positive_generators(base) if h not in have]
        if missing:
            raise MapError(f"generators miss {[list(h) for h in missing]} of the positive support functions")
    rows = []
    for t in taus:
        b = pullback_T(chain, t)
        if any(x.denominator != 1 or x < 0 for x in b):
            raise MapError(f"pullback of {list(t)} is not a nonnegative integer vector")
        rows.append(tuple(int(x) for x in b))
    return rows


def singular_representation(chain: ResolutionChain, generators: Sequence[Sequence[int]], mhat: HolMap) -> tuple[Poly, ...]:
    """The tuple ``(p^b_1, ..., p^b_v)`` of a map into a singular variety."""
    if mhat.fan != chain.final_fan:
        raise MapError("the map must live on the resolved fan")
    rows = representation_exponents(chain, generators)
    D = pushforward_Tstar(chain, mhat.degree_label)
    qs = tuple(product(zip(mhat.polys, b)) for b in rows)
    for t, q in zip(generators, qs):
        want = sum(Fraction(a) * x for a, x in zip(t, D))
        if q.degree != want:
            raise MapError(f"degree of the polynomial for {list(t)} is {q.degree}, expected {want}")
    return qs


# -- files -------------------------------------------------------------------


def poly_from_data(item) -> Poly:
    if not isinstance(item, dict) or len(item) != 1 or not ({"coeffs", "roots"} & set(item)):
        raise InputFormatError('each polynomial is {"coeffs": [...]} or {"roots": [[z, mult], ...]}')
    if "coeffs" in item:
        cs = item["coeffs"]
        if not isinstance(cs, list) or not cs:
            raise InputFormatError("coeffs must be a nonempty list, constant term first")
        return Poly(parse_gaussian(c) for c in cs)
    roots = item["roots"]
    if not isinstance(roots, list):
        raise InputFormatError("roots must be a list of [z, multiplicity] pairs")
    pairs = []
    for r in roots:
        if not isinstance(r, list) or len(r) != 2 or not isinstance(r[1], int) or isinstance(r[1], bool) or r[1] < 0:
            raise InputFormatError(f"bad root entry {r!r}; use [z, multiplicity]")
        pairs.append((parse_gaussian(r[0]), r[1]))
    return Poly.from_roots(pairs)


def polys_from_json(text: str) -> tuple[Poly, ...]:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputFormatError(f"map file is not valid JSON: {exc}") from None
    if not isinstance(data, dict) or "polys" not in data or not isinstance(data["polys"], list):
        raise InputFormatError('map file must be an object with a "polys" list')
    extra = set(data) - {"polys"}
    if extra:
        raise InputFormatError(f"unknown map file keys: {sorted(extra)}")
    return tuple(poly_from_data(p) for p in data["polys"])


def poly_to_data(p: Poly) -> dict:
    if p.factored_form is not None:
        return {"roots": [[str(z), k] for z, k in p.factored_form]}
    return {"coeffs": [str(c) for c in p.coeffs]}


def polys_to_json(polys: Sequence[Poly]) -> str:
    return json.dumps({"polys": [poly_to_data(p) for p in polys]}) + "\n"
