"""Toric resolution by ray insertion, with the induced maps on divisors.

A chain is a list of steps.  An *insertion* step adds one ray ``v = sum c_i v_i``
inside a parent cone and star-subdivides; the new ray always gets the next
index.  A *refinement* step adds no rays and only triangulates non-simplicial
cones.  Support functions pull back along a chain (``pullback_T``) and labels
push forward (``pushforward_Tstar``); ``fiber`` enumerates the preimage of a
divisor class on the final fan.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .divisors import SupportLattice, apply_iota_star, format_rational, parse_rational, support_lattice
from .errors import FanError, InputFormatError, ToricError
from .fan import Fan, cone_facets, containing_cones, multiplicity
from .lattice import find_positive_functional, parallelepiped_points, rank, ratvec

MAX_STEPS = 200


@dataclass(frozen=True)
class ResolutionStep:
    inserted_ray: Optional[tuple[int, ...]]
    parent_cone: tuple[int, ...]
    coefficients: tuple[Fraction, ...]
    resulting_fan: Fan = field(compare=False)

    @property
    def is_refinement(self) -> bool:
        return self.inserted_ray is None


@dataclass(frozen=True)
class ResolutionChain:
    base_fan: Fan
    steps: tuple[ResolutionStep, ...]

    @property
    def final_fan(self) -> Fan:
        return self.steps[-1].resulting_fan if self.steps else self.base_fan

    def fans(self) -> list[Fan]:
        """Base fan followed by the fan after each step."""
        return [self.base_fan] + [s.resulting_fan for s in self.steps]

    def __len__(self) -> int:
        return len(self.steps)


# -- subdivision -----------------------------------------------------------


def insert_ray(f: Fan, v: Sequence[int]) -> Fan:
    """Star subdivision of ``f`` at the primitive lattice vector ``v``."""
    v = tuple(int(x) for x in v)
    if len(v) != f.rank:
        raise FanError("ray has the wrong length")
    if math.gcd(*v) != 1:
        raise FanError(f"ray {list(v)} is not primitive")
    if v in f.rays:
        raise FanError(f"{list(v)} is already a ray of the fan")
    hits = set(containing_cones(f, v))
    if not hits:
        raise FanError(f"{list(v)} is not in the support of the fan")
    new = len(f.rays)
    rays = list(f.rays) + [v]
    cones = []
    for c, idx in enumerate(f.max_cones):
        if c not in hits:
            cones.append(idx)
            continue
        pieces = []
        for on, normal in cone_facets(f.rays, idx):
            if sum(Fraction(a) * b for a, b in zip(v, normal)) != 0:
                pieces.append(tuple(sorted(on + (new,))))
        cones.extend(sorted(pieces))
    # a cone may be produced twice when v lies on a shared face
    seen, unique = set(), []
    for c in cones:
        if c not in seen:
            seen.add(c)
            unique.append(c)
    name = f"{f.label()}+{list(v)}"
    return Fan.build(f.rank, rays, unique, name=name, lattice_note=f.lattice_note)


def _pulling_triangulation(rays, idx) -> list[tuple[int, ...]]:
    gens = [rays[i] for i in idx]
    if rank(gens) == len(gens):
        return [tuple(sorted(idx))]
    apex = min(idx)
    out = []
    for on, _ in cone_facets(rays, idx):
        if apex in on:
            continue
        for piece in _pulling_triangulation(rays, on):
            out.append(tuple(sorted(piece + (apex,))))
    return sorted(set(out))


def simplicialize(f: Fan) -> Fan:
    """Triangulate non-simplicial cones by pulling their lowest-index ray."""
    cones = []
    for idx in f.max_cones:
        cones.extend(_pulling_triangulation(f.rays, idx))
    return Fan.build(f.rank, f.rays, cones, name=f"{f.label()}/simplicial", lattice_note=f.lattice_note)


def _choose_point(f: Fan, idx) -> tuple[tuple[int, ...], tuple[Fraction, ...]]:
    gens = [f.rays[i] for i in idx]
    best = None
    for p, t in parallelepiped_points(gens):
        if not any(p):
            continue
        key = (sum(t), tuple(-x for x in t))
        if best is None or key < best[0]:
            best = (key, p, t)
    assert best is not None
    return tuple(int(x) for x in best[1]), best[2]


def desingularize(f: Fan) -> ResolutionChain:
    """Resolve ``f`` to a smooth fan.

    Non-simplicial cones are first triangulated without new rays.  Then the
    singular cone of lowest multiplicity (ties: lowest cone index) is
    subdivided at its parallelepiped point with the smallest coefficient sum
    (ties: lexicographically largest coefficients in ray order).
    """
    f.report  # validates
    steps = []
    cur = f
    if not cur.report.is_simplicial:
        nxt = simplicialize(cur)
        nxt.report
        steps.append(ResolutionStep(None, (), (), nxt))
        cur = nxt
    while True:
        mults = {c: multiplicity(cur, cur.cone(c)) for c in range(len(cur.max_cones))}
        singular = [c for c, m in mults.items() if m > 1]
        if not singular:
            break
        if len(steps) >= MAX_STEPS:
            raise ToricError(f"resolution did not finish within {MAX_STEPS} steps")
        c = min(singular, key=lambda c: (mults[c], c))
        idx = cur.max_cones[c]
        v, t = _choose_point(cur, idx)
        nxt = insert_ray(cur, v)
        new = len(cur.rays)
        # termination witness: every new cone is less singular than its parent
        for parent in containing_cones(cur, v):
            for idx2 in nxt.max_cones:
                if new in idx2 and set(idx2) - {new} <= set(cur.max_cones[parent]):
                    assert multiplicity(nxt, nxt.cone_of(idx2)) < mults[parent]
        steps.append(ResolutionStep(v, idx, t, nxt))
        cur = nxt
    chain = ResolutionChain(f, tuple(steps))
    assert chain.final_fan.report.is_smooth
    return chain


# -- induced maps ----------------------------------------------------------


def pullback_T(chain: ResolutionChain, h: Sequence) -> tuple[Fraction, ...]:
    """Values of the pulled-back support function on the final fan's rays."""
    h = ratvec(h)
    base = support_lattice(chain.base_fan)
    if len(h) != chain.base_fan.nrays or not base.contains(h):
        raise ToricError(f"{[format_rational(x) for x in h]} is not a support function of the base fan")
    vals = list(h)
    for step in chain.steps:
        if step.is_refinement:
            continue
        vals.append(sum(c * vals[i] for c, i in zip(step.coefficients, step.parent_cone)))
    return tuple(vals)


def _push_step(step: ResolutionStep, x: list[Fraction]) -> list[Fraction]:
    if step.is_refinement:
        return x
    out = list(x[:-1])
    d = x[-1]
    for c, i in zip(step.coefficients, step.parent_cone):
        out[i] += c * d
    return out


def pushforward_Tstar(chain: ResolutionChain, x: Sequence) -> tuple[Fraction, ...]:
    """Canonical base label of ``T*(x)`` for a label ``x`` on the final fan."""
    x = list(ratvec(x))
    if len(x) != chain.final_fan.nrays:
        raise ToricError("label length does not match the final fan")
    for step in reversed(chain.steps):
        x = _push_step(step, x)
    return support_lattice(chain.base_fan).canonicalize(x)


def partial_pushforward(chain: ResolutionChain, x: Sequence, level: int) -> tuple[Fraction, ...]:
    """Push a final-fan label down to the fan after ``level`` steps (raw coordinates)."""
    x = list(ratvec(x))
    for step in reversed(chain.steps[level:]):
        x = _push_step(step, x)
    return tuple(x)


# -- fibers ----------------------------------------------------------------


@dataclass(frozen=True)
class FiberResult:
    elements: tuple[tuple[Fraction, ...], ...]
    # (d0, l, m): inserted-ray degrees d0, d0+l, ..., d0+m*l of a one-insertion chain
    progression: Optional[tuple[Fraction, Fraction, int]] = None


def _progression(ds: list[Fraction], spacing: Fraction) -> Optional[tuple[Fraction, Fraction, int]]:
    if not ds:
        return None
    ds = sorted(ds)
    if any(b - a != spacing for a, b in zip(ds, ds[1:])):
        raise ToricError("fiber degrees do not form an arithmetic progression")
    return (ds[0], spacing, len(ds) - 1)


def insertion_spacing(step: ResolutionStep, upper: SupportLattice) -> Fraction:
    """Least positive ``l`` such that moving ``l`` units onto the new ray stays in the dual lattice."""
    n = upper.u - 1
    cmap = dict(zip(step.parent_cone, step.coefficients))
    w = upper.pairing([-cmap.get(i, Fraction(0)) for i in range(n)] + [Fraction(1)])
    num, den = 0, 1
    for x in w:
        num = math.gcd(num, x.numerator)
        den = math.lcm(den, x.denominator)
    if num == 0:
        raise ToricError("inserted ray pairs trivially with the support lattice")
    return Fraction(den, num)


def insertion_degrees(step: ResolutionStep, upper: SupportLattice, e: Sequence[Fraction]) -> list[Fraction]:
    """Admissible degrees ``d`` of the inserted ray over the lower label ``e``."""
    n = len(e)
    cmap = dict(zip(step.parent_cone, step.coefficients))
    bounds = [e[i] / c for i, c in cmap.items() if c > 0]
    dmax = min(bounds) if bounds else None
    if dmax is None or dmax < 0:
        return []
    base = list(e) + [Fraction(0)]
    direction = [-cmap.get(i, Fraction(0)) for i in range(n)] + [Fraction(1)]
    a = upper.pairing(base)
    w = upper.pairing(direction)
    den = 1
    for aj, wj in zip(a, w):
        if wj != 0:
            den = math.lcm(den, (aj / wj).denominator, (1 / wj).denominator)
    if all(wj == 0 for wj in w):
        raise ToricError("inserted ray pairs trivially with the support lattice")
    out = []
    for k in range(math.floor(dmax * den) + 1):
        d = Fraction(k, den)
        if all((aj + d * wj).denominator == 1 for aj, wj in zip(a, w)):
            if all(x >= 0 for x in _lift(e, cmap, d)):
                out.append(d)
    return out


def _lift(e, cmap, d):
    return tuple(e[i] - cmap.get(i, 0) * d for i in range(len(e))) + (d,)


def _refinement_lifts(lower: SupportLattice, upper: SupportLattice, e: Sequence[Fraction]) -> list[tuple[Fraction, ...]]:
    """Nonnegative labels on a refined fan (same rays) lying over ``e``."""
    kappa = positive_support_function(lower)
    target = lower.pairing_int(e)
    total = lower.evaluate(kappa, e)
    den = 1
    for j in range(upper.rank):
        for c in upper.from_pairing([int(a == j) for a in range(upper.rank)]):
            den = math.lcm(den, c.denominator)
    u = len(e)
    out = []
    scaled = total * den
    if scaled < 0 or scaled.denominator != 1:
        return []

    def rec(i, acc, budget):
        if i == u - 1:
            if budget % kappa[i] == 0:
                cand = tuple(acc + [Fraction(budget // kappa[i], den)])
                if upper.in_dual(cand) and lower.pairing(cand) == target:
                    out.append(cand)
            return
        for n in range(budget // kappa[i] + 1):
            rec(i + 1, acc + [Fraction(n, den)], budget - kappa[i] * n)

    rec(0, [], int(scaled))
    return sorted(out)


def positive_support_function(sl: SupportLattice) -> tuple[int, ...]:
    """A support function taking positive values on every ray."""
    cols = [sl.basis.column(i) for i in range(sl.u)]
    c = find_positive_functional(cols, sl.rank)
    if c is None:
        raise ToricError("no positive grading found")
    return tuple(sum(ci * r[i] for ci, r in zip(c, sl.basis.rows)) for i in range(sl.u))


def step_fiber(chain: ResolutionChain, level: int, e: Sequence[Fraction]) -> list[tuple[tuple[Fraction, ...], Optional[Fraction]]]:
    """Lifts of the label ``e`` on fan ``level`` through step ``level``.

    Returns pairs (lifted label, inserted-ray degree or None).
    """
    fans = chain.fans()
    step = chain.steps[level]
    lower = support_lattice(fans[level])
    upper = support_lattice(fans[level + 1])
    e = tuple(ratvec(e))
    if step.is_refinement:
        return [(x, None) for x in _refinement_lifts(lower, upper, e)]
    cmap = dict(zip(step.parent_cone, step.coefficients))
    return [(_lift(e, cmap, d), d) for d in insertion_degrees(step, upper, e)]


def fiber(chain: ResolutionChain, D: Sequence, require_kernel: bool = True) -> FiberResult:
    """All nonnegative labels on the final fan whose pushforward is ``D``."""
    base = chain.base_fan
    sl = support_lattice(base)
    D = sl.canonicalize(D)
    if require_kernel and any(apply_iota_star(base, D)):
        raise ToricError("divisor is not in the kernel of iota*")
    if not chain.steps:
        return FiberResult((D,) if all(x >= 0 for x in D) else ())
    start = [D]
    if not chain.steps[0].is_refinement and any(x < 0 for x in D):
        start = []
    degrees = []
    out = []

    def dfs(level, e):
        if level == len(chain.steps):
            out.append(e)
            return
        for lifted, d in step_fiber(chain, level, e):
            if level == 0 and d is not None:
                degrees.append(d)
            dfs(level + 1, lifted)

    for e in start:
        dfs(0, e)
    prog = None
    inserts = [s for s in chain.steps if not s.is_refinement]
    if len(chain.steps) == 1 and len(inserts) == 1:
        upper = support_lattice(chain.steps[0].resulting_fan)
        prog = _progression(sorted(set(degrees)), insertion_spacing(chain.steps[0], upper))
    return FiberResult(tuple(sorted(set(out))), prog)


# -- chain files -----------------------------------------------------------


def chain_to_data(chain: ResolutionChain) -> list:
    out = []
    for s in chain.steps:
        item = {
            "inserted_ray": list(s.inserted_ray) if s.inserted_ray is not None else None,
            "parent_cone": list(s.parent_cone),
            "coefficients": [format_rational(c) for c in s.coefficients],
        }
        if s.is_refinement:
            item["max_cones"] = [list(c) for c in s.resulting_fan.max_cones]
        out.append(item)
    return out


def chain_to_json(chain: ResolutionChain) -> str:
    return json.dumps(chain_to_data(chain)) + "\n"


def chain_from_data(base: Fan, data) -> ResolutionChain:
    """Replay a serialized chain on ``base``, checking every step."""
    if not isinstance(data, list):
        raise InputFormatError("chain file must hold a JSON list of steps")
    base.report
    cur = base
    steps = []
    for n, item in enumerate(data):
        if not isinstance(item, dict) or not {"inserted_ray", "parent_cone", "coefficients"} <= set(item):
            raise InputFormatError(f"chain step {n} needs inserted_ray, parent_cone and coefficients")
        if item["inserted_ray"] is None:
            cones = item.get("max_cones")
            if not isinstance(cones, list):
                raise InputFormatError(f"refinement step {n} needs max_cones")
            nxt = Fan.build(cur.rank, cur.rays, cones, name=f"{cur.label()}/refined", lattice_note=cur.lattice_note)
            nxt.report
            steps.append(ResolutionStep(None, (), (), nxt))
            cur = nxt
            continue
        try:
            v = tuple(int(x) for x in item["inserted_ray"])
            parent = tuple(int(i) for i in item["parent_cone"])
        except (TypeError, ValueError):
            raise InputFormatError(f"chain step {n} has malformed ray or cone") from None
        coeffs = tuple(parse_rational(c) for c in item["coefficients"])
        if len(coeffs) != len(parent):
            raise InputFormatError(f"chain step {n}: one coefficient per parent ray")
        if any(i < 0 or i >= cur.nrays for i in parent):
            raise FanError(f"chain step {n}: parent cone index out of range")
        combo = tuple(sum(c * cur.rays[i][k] for c, i in zip(coeffs, parent)) for k in range(cur.rank))
        if combo != v or any(c < 0 for c in coeffs):
            raise FanError(f"chain step {n}: coefficients do not express the inserted ray in its parent cone")
        nxt = insert_ray(cur, v)
        nxt.report
        steps.append(ResolutionStep(v, parent, coeffs, nxt))
        cur = nxt
    return ResolutionChain(base, tuple(steps))


def chain_from_json(base: Fan, text: str) -> ResolutionChain:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputFormatError(f"chain file is not valid JSON: {exc}") from None
    return chain_from_data(base, data)
