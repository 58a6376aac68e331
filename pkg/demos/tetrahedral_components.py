"""Components of the label space of the tetrahedral complex for small d.

Counts use both validity semantics.  d = 3 takes about a second; d = 4
takes several.  Run with ``python3 demos/tetrahedral_components.py [dmax]``.
"""

import sys
import time

from toric_curves.divisors import format_label
from toric_curves.fan import catalog
from toric_curves.monoid import PartialMonoid
from toric_curves.qspace import pi0_oracle

dmax = int(sys.argv[1]) if len(sys.argv) > 1 else 3
f = catalog("tetrahedral")
for sem in ("resolution", "cone"):
    pm = PartialMonoid(f, sem)
    print(f"{sem} semantics, simple labels:")
    for s in pm.simple_labels():
        print("   ", format_label(s))
    for d in range(1, dmax + 1):
        t = time.perf_counter()
        r = pi0_oracle(pm, (d, d, d, -d, 0, 0, 0, 0))
        print(f"  d = {d}: {r.components} components, {r.vertices} vertices ({time.perf_counter() - t:.1f}s)")
