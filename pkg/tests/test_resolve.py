from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from toric_curves.divisors import support_lattice
from toric_curves.errors import FanError, InputFormatError, ToricError
from toric_curves.fan import catalog, is_smooth, multiplicity
from toric_curves.resolve import (
    chain_from_json,
    chain_to_json,
    desingularize,
    fiber,
    insert_ray,
    partial_pushforward,
    pullback_T,
    pushforward_Tstar,
    simplicialize,
)

half = F(1, 2)


def _steps(chain):
    return [(s.inserted_ray, s.coefficients) for s in chain.steps]


def test_quadric_resolves_to_sigma2():
    chain = desingularize(catalog("quadric"))
    assert _steps(chain) == [((0, 1), (half, half))]
    final = chain.final_fan
    assert is_smooth(final)
    # the same fan as the Hirzebruch surface with k = 2, up to ray order
    assert set(final.rays) == {(1, 0), (-1, 2), (0, -1), (0, 1)}


def test_weighted_123_resolution():
    chain = desingularize(catalog("weighted", 1, 2, 3))
    assert _steps(chain) == [
        ((-1, -1), (half, half)),
        ((0, -1), (F(2, 3), F(1, 3))),
        ((-1, -2), (half, half)),
    ]
    assert is_smooth(chain.final_fan)


def test_multiplicity_drops_below_parent():
    chain = desingularize(catalog("weighted", 1, 2, 3))
    for lower, step in zip(chain.fans(), chain.steps):
        parent = multiplicity(lower, lower.cone_of(step.parent_cone))
        new = step.resulting_fan.nrays - 1
        for idx in step.resulting_fan.max_cones:
            if new in idx:
                assert multiplicity(step.resulting_fan, step.resulting_fan.cone_of(idx)) < parent


@pytest.mark.parametrize("args", [("projective", 2), ("hirzebruch", 2)])
def test_smooth_fans_need_no_steps(args):
    assert len(desingularize(catalog(*args))) == 0


def test_tetrahedral_refines_to_smooth():
    chain = desingularize(catalog("tetrahedral"))
    assert len(chain) == 1 and chain.steps[0].is_refinement
    assert is_smooth(chain.final_fan)
    assert simplicialize(catalog("tetrahedral")) == chain.final_fan


def test_insert_ray_errors():
    q = catalog("quadric")
    with pytest.raises(FanError, match="not primitive"):
        insert_ray(q, (0, 2))
    with pytest.raises(FanError, match="already a ray"):
        insert_ray(q, (1, 0))


def test_insert_ray_appends():
    f = insert_ray(catalog("projective", 2), (1, 1))
    assert f.rays[-1] == (1, 1)
    assert len(f.max_cones) == 4


def test_pullback_and_pushforward():
    chain = desingularize(catalog("quadric"))
    assert pullback_T(chain, (2, 0, 0)) == (2, 0, 0, 1)
    assert pullback_T(chain, (0, 0, 1)) == (0, 0, 1, 0)
    assert pushforward_Tstar(chain, (0, 0, 0, 1)) == (half, half, 0)


@pytest.mark.parametrize("g", [0, 1, 2, 5])
def test_quadric_fiber_formula(g):
    chain = desingularize(catalog("quadric"))
    res = fiber(chain, (g, g, 2 * g))
    # final rays: sigma_1, sigma_2, sigma_3, inserted sigma'
    want = {(g - b, g - b, 2 * g, 2 * b) for b in range(g + 1)}
    assert set(res.elements) == want
    assert res.progression == (0, 2, g)


def test_fiber_requires_kernel():
    chain = desingularize(catalog("quadric"))
    with pytest.raises(ToricError, match="kernel"):
        fiber(chain, (1, 0, 0))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(-4, 4), min_size=6, max_size=6), st.lists(st.integers(-4, 4), min_size=3, max_size=3))
def test_pullback_pushforward_adjoint(xhat, y):
    chain = desingularize(catalog("weighted", 1, 2, 3))
    sl = support_lattice(chain.base_fan)
    h = [sum(c * row[i] for c, row in zip(y, sl.basis.rows)) for i in range(3)]
    lhs = sum(a * b for a, b in zip(pullback_T(chain, h), xhat))
    rhs = sum(a * b for a, b in zip(h, pushforward_Tstar(chain, xhat)))
    assert lhs == rhs


def test_partial_pushforward_levels():
    chain = desingularize(catalog("weighted", 1, 2, 3))
    x = (1, 0, 0, 0, 0, 2)
    assert partial_pushforward(chain, x, 0) == pushforward_Tstar(chain, x)
    assert partial_pushforward(chain, x, 3) == x


def test_chain_file_round_trip():
    for args in (("weighted", 1, 2, 3), ("tetrahedral",), ("quadric",)):
        f = catalog(*args)
        chain = desingularize(f)
        again = chain_from_json(f, chain_to_json(chain))
        assert again.final_fan == chain.final_fan
        assert _steps(again) == _steps(chain)


def test_chain_file_errors():
    q = catalog("quadric")
    with pytest.raises(FanError, match="do not express"):
        chain_from_json(q, '[{"inserted_ray": [1, 1], "parent_cone": [0, 1], "coefficients": ["1/2", "1/2"]}]')
    with pytest.raises(InputFormatError):
        chain_from_json(q, '{"steps": []}')
    with pytest.raises(InputFormatError):
        chain_from_json(q, "[")
