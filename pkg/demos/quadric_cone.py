"""The quadric cone: labels, resolution, stability and a polynomial tuple.

Run with ``python3 demos/quadric_cone.py``.
"""

import random

from toric_curves.divisors import format_label, iota_star, support_lattice
from toric_curves.fan import catalog, multiplicity
from toric_curves.maps import Configuration, map_from_config, positive_generators, singular_representation
from toric_curves.monoid import PartialMonoid
from toric_curves.polys import GaussianRational
from toric_curves.qspace import pi0_certificate, pi0_oracle
from toric_curves.resolve import desingularize, fiber
from toric_curves.stability import stability_chained

f = catalog("quadric")
print("rays:", f.rays)
print("multiplicities:", [multiplicity(f, f.cone_of(c)) for c in f.max_cones])
print("support functions:", support_lattice(f).basis.rows)
print("iota*:", iota_star(f).rows)

pm = PartialMonoid(f)
print("simple labels:", ", ".join(format_label(s) for s in pm.simple_labels()))

chain = desingularize(f)
step = chain.steps[0]
print(f"resolve by inserting {step.inserted_ray} into cone {step.parent_cone}")

g = 3
D = (g, g, 2 * g)
res = fiber(chain, D)
print(f"fiber over D = {D}:")
for x in res.elements:
    print("   ", format_label(x))
print("n(D) =", stability_chained(chain, D).n)

r = pi0_oracle(pm, (1, 1, 2))
print("components for D = (1, 1, 2):", r.components, "from", r.vertices, "vertices")
print("certificate:", ", ".join(format_label(c) for c in pi0_certificate(pm, (1, 1, 2))))

# a map on the resolution, pushed to the four-term tuple of the cone
rng = random.Random(1)
lift = res.elements[1]
points = []
for i, k in enumerate(lift):
    for _ in range(int(k)):
        lab = [0] * 4
        lab[i] = 1
        points.append((GaussianRational(rng.randint(-50, 50), rng.randint(1, 9)), tuple(lab)))
mhat = map_from_config(chain.final_fan, Configuration(tuple(sorted(points))))
qs = singular_representation(chain, [(0, 0, 1), (2, 0, 0), (1, 1, 0), (0, 2, 0)], mhat)
print("generators:", positive_generators(f))
for q in qs:
    print("    degree", q.degree)
print("q2^2 == q1 q3:", qs[2] ** 2 == qs[1] * qs[3])
