"""P(1,2,3): a three-step resolution and the per-ray rates pushed down it.

Run with ``python3 demos/weighted_123.py``.
"""

from toric_curves.fan import catalog
from toric_curves.resolve import desingularize
from toric_curves.stability import chain_rates, stability_chained

chain = desingularize(catalog("weighted", 1, 2, 3))
for n, s in enumerate(chain.steps, 1):
    coeffs = ", ".join(str(c) for c in s.coefficients)
    print(f"step {n}: insert {s.inserted_ray} into {s.parent_cone} ({coeffs})")

for level in range(len(chain.steps), -1, -1):
    rates = ", ".join(str(r.slope) for r in chain_rates(chain, level))
    print(f"slopes at level {level}: {rates}")

print(" d  n(2d, 3d, d)")
for d in range(11):
    print(f"{d:2d}  {stability_chained(chain, (2 * d, 3 * d, d)).n}")
