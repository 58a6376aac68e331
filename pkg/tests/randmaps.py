"""Seeded generators of valid polynomial tuples for smooth fans."""

import random
from fractions import Fraction

from toric_curves.maps import Configuration, map_from_config
from toric_curves.polys import GaussianRational


def random_point(rng: random.Random, used: set) -> GaussianRational:
    while True:
        z = GaussianRational(Fraction(rng.randint(-9, 9), rng.randint(1, 4)), Fraction(rng.randint(-3, 3), rng.randint(1, 3)))
        if z not in used:
            used.add(z)
            return z


def random_config(rng: random.Random, fan, degrees) -> Configuration:
    """Random configuration with the given total, every label supported on a cone."""
    left = [int(x) for x in degrees]
    used: set = set()
    points = []
    while any(left):
        i = rng.choice([k for k, x in enumerate(left) if x])
        cone = rng.choice([c for c in fan.max_cones if i in c])
        lab = [0] * fan.nrays
        for j in cone:
            lab[j] = rng.randint(1 if j == i else 0, left[j])
            left[j] -= lab[j]
        points.append((random_point(rng, used), tuple(Fraction(x) for x in lab)))
    return Configuration(tuple(sorted(points)))


def random_map(rng: random.Random, fan, degrees):
    return map_from_config(fan, random_config(rng, fan, degrees))
