from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from toric_curves.errors import ToricError
from toric_curves.fan import catalog
from toric_curves.resolve import ResolutionChain, desingularize, simplicialize
from toric_curves.stability import (
    RayRate,
    chain_rates,
    stability_chained,
    stability_single_step,
    stability_smooth,
)

QUADRIC = catalog("quadric")
QCHAIN = desingularize(QUADRIC)
P123 = catalog("weighted", 1, 2, 3)
PCHAIN = desingularize(P123)


def test_projective_min_coordinate():
    assert stability_smooth(catalog("projective", 3), (4, 4, 4, 4)).n == 4
    r = stability_smooth(catalog("projective", 2), (3, 1, 2))
    assert r.n == 1 and r.active == "ray 1"


@pytest.mark.parametrize("k", [0, 1, 2, 3])
def test_hirzebruch_unit_divisor(k):
    assert stability_smooth(catalog("hirzebruch", k), (1, 1, 1, k + 1)).n == 1


def test_zero_divisor():
    assert stability_smooth(catalog("projective", 2), (0, 0, 0)).n == 0
    assert stability_chained(QCHAIN, (0, 0, 0)).n == 0


def test_smooth_errors():
    with pytest.raises(ToricError, match="not representable by holomorphic maps"):
        stability_smooth(catalog("projective", 2), (1, -1, 0))
    with pytest.raises(ToricError, match="smooth fan"):
        stability_smooth(QUADRIC, (1, 1, 2))
    with pytest.raises(ToricError, match="coordinates"):
        stability_smooth(catalog("projective", 2), (1, 1))


@pytest.mark.parametrize("g", range(13))
def test_quadric_two_thirds(g):
    r = stability_single_step(QUADRIC, QCHAIN.steps[0], (g, g, 2 * g))
    assert r.n == (2 * g) // 3
    assert stability_chained(QCHAIN, (g, g, 2 * g)).n == r.n


def test_quadric_g3_witness():
    r = stability_single_step(QUADRIC, QCHAIN.steps[0], (3, 3, 6))
    assert r.n == 2 and r.active == "e"
    # max over j of min(2j, 3 - j) is reached at j = 1
    assert r.j == 1 and r.degree == 2


def test_single_step_errors():
    tet = catalog("tetrahedral")
    with pytest.raises(ToricError, match="ray insertion"):
        stability_single_step(tet, desingularize(tet).steps[0], (0,) * 8)
    with pytest.raises(ToricError, match="smooth resolved fan"):
        stability_single_step(P123, PCHAIN.steps[0], (2, 3, 1))


def test_weighted_123_closed_form():
    bad = []
    for e1 in range(16):
        for e2 in range(16):
            for e4 in range(16):
                want = min(e1 // 2, (2 * e2) // 3, (2 * e4) // 5)
                if stability_chained(PCHAIN, (e1, e2, e4)).n != want:
                    bad.append((e1, e2, e4))
    assert bad == []


@pytest.mark.parametrize("d", range(11))
def test_weighted_123_kernel_ray(d):
    r = stability_chained(PCHAIN, (2 * d, 3 * d, d))
    assert r.n == (2 * d) // 5
    assert r.method == "chained rates"


def test_weighted_123_rates():
    def slopes(level):
        return [r.slope for r in chain_rates(PCHAIN, level)]

    assert slopes(3) == [1] * 6
    # the rays (-2,-3) and (0,-1) are two thirds as stable one level down
    assert slopes(2) == [1, 1, F(2, 3), 1, F(2, 3)]
    assert slopes(1) == [F(1, 2), 1, F(1, 2), 1]
    assert slopes(0) == [F(1, 2), F(2, 3), F(2, 5)]


def test_ray_rate():
    r = RayRate(0, F(2, 3))
    assert [r.evaluate(x) for x in range(6)] == [0, 0, 1, 2, 2, 3]
    with pytest.raises(ToricError, match="negative"):
        r.evaluate(-1)


def test_chained_errors():
    tet = catalog("tetrahedral")
    with pytest.raises(ToricError, match="refinements"):
        stability_chained(desingularize(tet), (0,) * 8)
    with pytest.raises(ToricError, match="smooth fan"):
        stability_chained(ResolutionChain(P123, PCHAIN.steps[:1]), (2, 3, 1))
    with pytest.raises(ToricError, match="not representable"):
        stability_chained(PCHAIN, (-2, 0, 0))
    assert simplicialize(catalog("projective", 2)) == catalog("projective", 2)


def test_empty_chain_is_smooth_formula():
    f = catalog("hirzebruch", 2)
    chain = desingularize(f)
    for D in [(1, 1, 1, 3), (2, 5, 2, 9), (0, 4, 0, 4)]:
        assert stability_chained(chain, D) == stability_smooth(f, D)


@settings(max_examples=80, deadline=None)
@given(st.integers(0, 20), st.integers(0, 20), st.integers(0, 40))
def test_chained_matches_single_step(a, b, c):
    D = (a, b, c)
    assert stability_chained(QCHAIN, D).n == stability_single_step(QUADRIC, QCHAIN.steps[0], D).n


@settings(max_examples=80, deadline=None)
@given(st.lists(st.integers(0, 12), min_size=3, max_size=3), st.integers(0, 2))
def test_monotone_under_adding_a_ray(D, i):
    bigger = list(D)
    bigger[i] += 1
    assert stability_chained(PCHAIN, bigger).n >= stability_chained(PCHAIN, D).n
    assert stability_chained(QCHAIN, bigger).n >= stability_chained(QCHAIN, D).n


def test_witness_consistency():
    for D in [(3, 3, 6), (5, 2, 7), (4, 4, 1)]:
        r = stability_chained(QCHAIN, D)
        assert r.n == min(r.terms.values())
        assert r.terms[r.active] == r.n


@pytest.mark.parametrize(
    "chain,D0,c",
    [(QCHAIN, (1, 1, 2), F(2, 3)), (PCHAIN, (2, 3, 1), F(2, 5)), (PCHAIN, (1, 1, 1), F(2, 5))],
)
def test_growth_along_rays(chain, D0, c):
    for t in range(1, 30):
        n = stability_chained(chain, [t * x for x in D0]).n
        assert n >= t * c - 1
