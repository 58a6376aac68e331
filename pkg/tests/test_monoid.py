import itertools
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from toric_curves.errors import NotInDualError, ToricError
from toric_curves.fan import catalog, is_face_set
from toric_curves.monoid import SEMANTICS, PartialMonoid, label_hilbert_basis, simple_labels

half = F(1, 2)

QUADRIC_SIMPLES = {(1, 0, 0), (half, half, 0), (0, 1, 0), (0, 0, 1)}

TETRAHEDRAL_SIMPLES = {
    (1, 1, 0, -1),
    (1, 0, 1, -1),
    (0, 1, 1, -1),
    (1, 1, 1, -2),
    (0, 0, 1, 0),
    (0, 1, 0, 0),
    (1, 0, 0, 0),
    (0, 0, 0, 1),
}


@pytest.mark.parametrize("semantics", SEMANTICS)
def test_quadric_simples(semantics):
    assert set(simple_labels(catalog("quadric"), semantics)) == QUADRIC_SIMPLES


@pytest.mark.parametrize("semantics", SEMANTICS)
def test_tetrahedral_simples(semantics):
    got = {s[:4] for s in simple_labels(catalog("tetrahedral"), semantics)}
    assert got == TETRAHEDRAL_SIMPLES


def test_weighted_123_simples():
    got = set(simple_labels(catalog("weighted", 1, 2, 3)))
    assert got == {
        (1, 0, 0),
        (0, 1, 0),
        (0, 0, 1),
        (0, half, half),
        (F(1, 3), 0, F(2, 3)),
        (F(2, 3), 0, F(1, 3)),
    }


@pytest.mark.parametrize("args", [("projective", 2), ("hirzebruch", 3), ("projective", 3)])
def test_smooth_simples_are_unit_vectors(args):
    f = catalog(*args)
    got = set(simple_labels(f))
    assert got == {tuple(int(i == j) for i in range(f.nrays)) for j in range(f.nrays)}


def test_validity_examples():
    pm = PartialMonoid(catalog("quadric"))
    assert pm.is_valid_label((half, half, 0))
    assert pm.is_valid_label((F(3, 2), half, 0))
    assert pm.is_valid_label((1, 0, 1))
    assert not pm.is_valid_label((half, half, 1))
    assert not pm.is_valid_label((-1, 0, 0))
    with pytest.raises(NotInDualError):
        pm.is_valid_label((half, 0, 0))


def test_semantics_agree_on_catalog():
    for args in (("quadric",), ("weighted", 1, 2, 3), ("weighted", 1, 1, 2)):
        f = catalog(*args)
        a, b = PartialMonoid(f, "cone"), PartialMonoid(f, "resolution")
        for y in itertools.product(range(-1, 7), repeat=a.k):
            assert a.is_valid_pairing(y) == b.is_valid_pairing(y), (args, y)


def test_unknown_semantics():
    with pytest.raises(ToricError, match="unknown semantics"):
        PartialMonoid(catalog("quadric"), "nope")


def test_grading_positive_on_candidates():
    for args in (("quadric",), ("weighted", 1, 2, 3), ("tetrahedral",), ("hirzebruch", 2)):
        pm = PartialMonoid(catalog(*args))
        assert all(pm.kappa(c) > 0 for c in pm.candidates())


def test_label_hilbert_basis():
    pm = PartialMonoid(catalog("weighted", 1, 2, 3), "cone")
    f = pm.fan
    idx = f.max_cones.index((0, 2))
    hb = label_hilbert_basis(pm, idx)
    assert (1, 0, 0) in hb and (0, 0, 1) in hb
    assert (F(1, 3), 0, F(2, 3)) in hb and (F(2, 3), 0, F(1, 3)) in hb
    assert len(hb) == 4


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(0, 3), min_size=4, max_size=4))
def test_smooth_validity_is_support_in_a_cone(x):
    f = catalog("hirzebruch", 1)
    pm = PartialMonoid(f)
    support = [i for i, c in enumerate(x) if c]
    assert pm.is_valid_label(x) == is_face_set(f, support)


@pytest.mark.parametrize("args", [("quadric",), ("weighted", 1, 2, 3), ("tetrahedral",)])
def test_simples_do_not_split(args):
    pm = PartialMonoid(catalog(*args))
    simples = pm.simple_pairings()
    pool = pm.valid_up_to(max(pm.kappa(s) for s in simples))
    for s in simples:
        for a in pool:
            rest = tuple(p - q for p, q in zip(s, a))
            assert a == s or not any(rest) or not pm.is_valid_pairing(rest)


@pytest.mark.parametrize("args", [("quadric",), ("weighted", 1, 2, 3)])
def test_valid_labels_are_sums_of_simples(args):
    pm = PartialMonoid(catalog(*args))
    simples = pm.simple_pairings()
    reach = {(0,) * pm.k}
    for _ in range(4):
        reach |= {tuple(p + q for p, q in zip(r, s)) for r in reach for s in simples}
    for y in pm.valid_up_to(4):
        assert y in reach
