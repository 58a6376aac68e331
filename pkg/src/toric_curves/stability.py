"""Stability dimension n(D) of the stabilization maps between label spaces.

For a smooth fan n(D) is the least ray coordinate of D.  For a fan resolved
by a single ray insertion it is given by a max-min over the fiber of the
resolution.  Longer resolutions are handled step by step: each ray of each
intermediate fan carries a *rate*, the dimension up to which adding that ray
to a label is an equivalence, and rates are pushed down the chain.

Rates here are floor-linear, ``x -> floor(s * x)``.  Going down a step whose
inserted ray has slope ``a``, a parent-cone ray with slope ``b`` and
coefficient ``c`` gets slope ``a*b / (a + b*c)``: the value of the max-min
``max_d min(a*d, b*(x - c*d))``.  Only the bottom step is evaluated exactly,
over the actual fiber of D.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .divisors import support_lattice
from .errors import ToricError
from .fan import Fan, is_smooth
from .lattice import ratvec
from .resolve import ResolutionChain, ResolutionStep, fiber, step_fiber


@dataclass(frozen=True)
class RayRate:
    ray: int
    slope: Fraction = Fraction(1)

    def evaluate(self, x) -> int:
        if x < 0:
            raise ToricError(f"rate of ray {self.ray} evaluated at negative {x}")
        return math.floor(self.slope * Fraction(x))


@dataclass(frozen=True)
class StabilityResult:
    n: int
    # index into the fiber (ordered by inserted-ray degree) that attains the max
    j: Optional[int] = None
    # the term attaining the outer minimum: "e" or "ray <i>"
    active: str = ""
    method: str = "smooth"
    degree: Optional[Fraction] = None
    terms: dict = field(default_factory=dict, compare=False)


def _label(f: Fan, D: Sequence) -> tuple[Fraction, ...]:
    D = ratvec(D)
    if len(D) != f.nrays:
        raise ToricError(f"divisor has {len(D)} coordinates, fan has {f.nrays} rays")
    return support_lattice(f).canonicalize(D)


def _outer_min(terms: dict) -> tuple[int, str]:
    key = min(terms, key=lambda k: (terms[k], k != "e", k))
    return terms[key], key


def stability_smooth(f: Fan, D: Sequence) -> StabilityResult:
    """n(D) = min of the ray coordinates for a smooth complete fan."""
    if not is_smooth(f):
        raise ToricError("stability_smooth needs a smooth fan")
    D = _label(f, D)
    if any(x < 0 for x in D):
        raise ToricError("negative coordinate: not representable by holomorphic maps")
    if not D:
        return StabilityResult(0)
    terms = {f"ray {i}": int(x) for i, x in enumerate(D)}
    n, active = _outer_min(terms)
    return StabilityResult(n, None, active, "smooth", None, terms)


def stability_single_step(base: Fan, step: ResolutionStep, D: Sequence) -> StabilityResult:
    """Max-min formula for a resolution by one ray insertion."""
    if step.is_refinement:
        raise ToricError("single-step formula needs a ray insertion")
    if not is_smooth(step.resulting_fan):
        raise ToricError("single-step formula needs a smooth resolved fan")
    D = _label(base, D)
    chain = ResolutionChain(base, (step,))
    res = fiber(chain, D, require_kernel=False)
    if not res.elements:
        raise ToricError("empty fiber: D has no nonnegative lift to the resolution")
    d0, l, m = res.progression
    cmap = dict(zip(step.parent_cone, step.coefficients))
    best = None
    for j in range(m + 1):
        d = d0 + j * l
        vals = [math.floor(d)] + [math.floor(D[i] - c * d) for i, c in cmap.items()]
        v = min(vals)
        if best is None or v > best[0]:
            best = (v, j, d)
    e, j, d = best
    terms = {"e": e}
    for i, x in enumerate(D):
        if i not in cmap:
            terms[f"ray {i}"] = math.floor(x)
    n, active = _outer_min(terms)
    return StabilityResult(n, j, active, "single insertion", d, terms)


def chain_rates(chain: ResolutionChain, level: int) -> list[RayRate]:
    """Rates of the rays of fan ``level`` of the chain, propagated from the top."""
    fans = chain.fans()
    slopes = [Fraction(1)] * fans[-1].nrays
    for s in range(len(chain.steps) - 1, level - 1, -1):
        step = chain.steps[s]
        if step.is_refinement:
            raise ToricError("rate method needs ray insertions, not refinements")
        a = slopes[-1]
        lower = slopes[:-1]
        for i, c in zip(step.parent_cone, step.coefficients):
            if c > 0:
                b = lower[i]
                lower[i] = a * b / (a + b * c)
        slopes = lower
    return [RayRate(i, s) for i, s in enumerate(slopes)]


def stability_chained(chain: ResolutionChain, D: Sequence) -> StabilityResult:
    """n(D) by pushing per-ray rates down a resolution chain."""
    base = chain.base_fan
    if not chain.steps:
        return stability_smooth(base, D)
    if not is_smooth(chain.final_fan):
        raise ToricError("chain does not end in a smooth fan")
    D = _label(base, D)
    if any(x < 0 for x in D):
        raise ToricError("negative coordinate: not representable by holomorphic maps")
    step = chain.steps[0]
    if step.is_refinement:
        raise ToricError("rate method needs ray insertions, not refinements")
    rates = chain_rates(chain, 1)
    lifts = step_fiber(chain, 0, D)
    if not lifts:
        raise ToricError("empty fiber: D has no nonnegative lift to the first resolution step")
    new = len(D)
    best = None
    for j, (x, d) in enumerate(sorted(lifts, key=lambda t: t[1])):
        vals = [rates[new].evaluate(math.floor(d))]
        vals += [rates[i].evaluate(math.floor(x[i])) for i in step.parent_cone]
        v = min(vals)
        if best is None or v > best[0]:
            best = (v, j, d)
    e, j, d = best
    terms = {"e": e}
    for i, x in enumerate(D):
        if i not in step.parent_cone:
            terms[f"ray {i}"] = rates[i].evaluate(math.floor(x))
    n, active = _outer_min(terms)
    method = "single insertion" if len(chain.steps) == 1 else "chained rates"
    return StabilityResult(n, j, active, method, d, terms)
