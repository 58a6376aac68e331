import json
import random
from fractions import Fraction as F

import pytest

from randmaps import random_config, random_map
from toric_curves.errors import InputFormatError, MapError
from toric_curves.fan import catalog
from toric_curves.maps import (
    Configuration,
    HolMap,
    check_condition_x,
    check_relations,
    config_from_map,
    embedding_tuple,
    map_from_config,
    monomial_data,
    polys_from_json,
    polys_to_json,
    positive_generators,
    representation_exponents,
    singular_representation,
    validate_map,
    verify_embedding,
)
from toric_curves.polys import GaussianRational as G
from toric_curves.polys import Poly
from toric_curves.resolve import desingularize, fiber

QCHAIN = desingularize(catalog("quadric"))
PCHAIN = desingularize(catalog("weighted", 1, 2, 3))
QGENS = [(0, 0, 1), (2, 0, 0), (1, 1, 0), (0, 2, 0)]
PGENS = [(0, 0, 6), (1, 0, 4), (2, 0, 2), (3, 0, 0), (0, 1, 3), (0, 2, 0), (1, 1, 1)]
# projective embedding of P(1,2,3) in CP^6, monomials over z_0..z_6
P123_RELATIONS = [
    ((1, 0, 1, 0, 0, 0, 0), (0, 2, 0, 0, 0, 0, 0)),
    ((0, 0, 1, 0, 0, 1, 0), (0, 0, 0, 0, 0, 0, 2)),
    ((0, 1, 0, 1, 0, 0, 0), (0, 0, 2, 0, 0, 0, 0)),
    ((0, 1, 0, 0, 0, 1, 0), (0, 0, 0, 0, 1, 0, 1)),
]
QUADRIC_RELATION = [((0, 1, 0, 1), (0, 0, 2, 0))]


def roots(*zs):
    return Poly.from_roots((z, 1) for z in zs)


def test_hirzebruch_valid_map():
    f = catalog("hirzebruch", 2)
    # degrees (a, b, a, b + 2a) lie in the kernel
    m = validate_map(f, [roots(1), roots(2, 3), roots(4), roots(1, 7, 5, 6)])
    assert m.degree_label == (1, 2, 1, 4)


def test_projective_line_common_root_rejected():
    with pytest.raises(MapError, match=r"condition \(X\) violated at non-face \[0, 1\]"):
        validate_map(catalog("projective", 1), [roots(0), roots(0)])


def test_degree_mismatch_rejected():
    f = catalog("hirzebruch", 2)
    with pytest.raises(MapError, match="not in ker iota"):
        validate_map(f, [roots(1), roots(2), roots(4), roots(1, 5)])
    assert validate_map(f, [roots(1), roots(2), roots(4), roots(1, 5)], require_kernel=False)


def test_validate_map_errors():
    f = catalog("projective", 1)
    with pytest.raises(MapError, match="one polynomial per ray"):
        validate_map(f, [roots(1)])
    with pytest.raises(MapError, match="not monic"):
        validate_map(f, [Poly([1, 2]), roots(1)])
    with pytest.raises(MapError, match="resolve first"):
        validate_map(catalog("quadric"), [roots(1)] * 3)


def test_condition_x_on_expanded_polys():
    f = catalog("hirzebruch", 1)
    # (z^2 + 1) and (z - i) share the root i
    polys = [Poly([1, 0, 1]), roots(5), roots(G(0, 1)), roots(6)]
    assert check_condition_x(f, polys) == (0, 2)


def test_projective_line_configuration():
    m = validate_map(catalog("projective", 1), [roots(0, 1), Poly.from_roots([(2, 2)])], require_kernel=False)
    c = config_from_map(m)
    assert c.points == ((G(0), (1, 0)), (G(1), (1, 0)), (G(2), (0, 2)))
    assert map_from_config(m.fan, c).polys == m.polys


def test_empty_configuration():
    f = catalog("projective", 2)
    m = map_from_config(f, Configuration(()))
    assert all(p.is_one() for p in m.polys) and m.degree_label == (0, 0, 0)


def test_configuration_errors():
    f = catalog("hirzebruch", 1)
    with pytest.raises(MapError, match="span no cone"):
        map_from_config(f, Configuration(((G(0), (1, 0, 1, 0)),)))
    with pytest.raises(MapError, match="distinct"):
        map_from_config(f, Configuration(((G(0), (1, 0, 0, 0)), (G(0), (0, 1, 0, 0)))))
    with pytest.raises(MapError, match="zero"):
        map_from_config(f, Configuration(((G(0), (0, 0, 0, 0)),)))
    with pytest.raises(MapError, match="integer"):
        map_from_config(f, Configuration(((G(0), (F(1, 2), 0, 0, 0)),)))
    m = HolMap(f, (Poly([1, 0, 1]),) * 4, (2, 2, 2, 2))
    with pytest.raises(MapError, match="factored form"):
        config_from_map(m)


@pytest.mark.parametrize("args", [("projective", 1), ("projective", 2), ("hirzebruch", 2), ("hirzebruch", 3)])
def test_round_trip(args):
    f = catalog(*args)
    rng = random.Random(7)
    for _ in range(25):
        D = [rng.randint(0, 4) for _ in range(f.nrays)]
        c = random_config(rng, f, D)
        m = map_from_config(f, c)
        assert check_condition_x(f, m.polys) is None
        assert config_from_map(m) == c
        assert m.degree_label == c.total


def test_quadric_representation_exponents():
    # (p4, p1^2 p2, p1 p2 p3, p2 p3^2) with the final rays ordered (1,0), (-1,2), (0,-1), (0,1)
    assert positive_generators(catalog("quadric")) == sorted(QGENS)
    assert representation_exponents(QCHAIN, QGENS) == [(0, 0, 1, 0), (2, 0, 0, 1), (1, 1, 0, 1), (0, 2, 0, 1)]


def test_weighted_123_representation_exponents():
    assert positive_generators(catalog("weighted", 1, 2, 3)) == sorted(PGENS)
    # written with p1..p6 in the order (1,0), (0,1), (-1,-1), (-2,-3), (-1,-2), (0,-1)
    listed = [
        (0, 0, 3, 6, 4, 2),
        (1, 0, 2, 4, 3, 2),
        (2, 0, 1, 2, 2, 2),
        (3, 0, 0, 0, 1, 2),
        (0, 1, 2, 3, 2, 1),
        (0, 2, 1, 0, 0, 0),
        (1, 1, 1, 1, 1, 1),
    ]
    perm = [0, 1, 3, 2, 5, 4]
    assert representation_exponents(PCHAIN, PGENS) == [tuple(r[k] for k in perm) for r in listed]


def test_representation_errors():
    with pytest.raises(MapError, match="not a support function"):
        representation_exponents(QCHAIN, [(1, 0, 0)])
    with pytest.raises(MapError, match="miss"):
        representation_exponents(QCHAIN, QGENS[:3])
    with pytest.raises(MapError, match="not positive"):
        representation_exponents(QCHAIN, QGENS + [(0, 0, -1)])
    with pytest.raises(MapError, match="resolved fan"):
        singular_representation(QCHAIN, QGENS, map_from_config(catalog("projective", 2), Configuration(())))


def _sample(chain, D, rng):
    lifts = fiber(chain, D).elements
    Dhat = rng.choice(lifts)
    return random_map(rng, chain.final_fan, Dhat)


@pytest.mark.parametrize("g", [1, 2, 3])
def test_quadric_tuple_relation(g):
    rng = random.Random(g)
    for _ in range(20):
        mhat = _sample(QCHAIN, (g, g, 2 * g), rng)
        qs = singular_representation(QCHAIN, QGENS, mhat)
        assert all(q.degree == 2 * g for q in qs)
        assert check_relations(qs, QUADRIC_RELATION)


@pytest.mark.parametrize("g", [1, 2])
def test_weighted_123_tuple_relations(g):
    rng = random.Random(10 + g)
    for _ in range(15):
        mhat = _sample(PCHAIN, (2 * g, 3 * g, g), rng)
        qs = singular_representation(PCHAIN, PGENS, mhat)
        assert all(q.degree == 6 * g for q in qs)
        assert check_relations(qs, P123_RELATIONS)


def test_trivial_map_representation():
    mhat = map_from_config(PCHAIN.final_fan, Configuration(()))
    assert all(q.is_one() for q in singular_representation(PCHAIN, PGENS, mhat))
    assert check_relations([Poly([1])] * 7, P123_RELATIONS)


def test_relation_failure_reports_coefficient():
    res = check_relations([roots(1), roots(2), roots(3), roots(4)], QUADRIC_RELATION)
    assert not res
    f = res.failures[0]
    assert f.relation == 0 and f.degree == 0 and f.lhs != f.rhs


@pytest.mark.parametrize("k", [0, 1, 2, 3])
def test_hirzebruch_embedding_equation(k):
    # x = (p4, p2 p3^k, p2 p1^k), y = (p1, p3), and x1 y1^k = x2 y2^k
    f = catalog("hirzebruch", k)
    rng = random.Random(k)
    for _ in range(10):
        a, b = rng.randint(0, 3), rng.randint(0, 3)
        p1, p2, p3, p4 = random_map(rng, f, (a, b, a, b + k * a)).polys
        x1, x2 = p2 * p3**k, p2 * p1**k
        assert x1 * p1**k == x2 * p3**k
        assert check_relations([p4, x1, x2, p1, p3], [((0, 1, 0, k, 0), (0, 0, 1, 0, k))])


def test_quadric_embedding_on_resolution():
    f = QCHAIN.final_fan
    emb = monomial_data(f, [(2, 1), (1, 1), (0, 1)], QUADRIC_RELATION)
    rng = random.Random(3)
    for g in (1, 2, 3):
        mhat = _sample(QCHAIN, (g, g, 2 * g), rng)
        assert verify_embedding(emb, mhat)
        assert embedding_tuple(emb, mhat) == singular_representation(QCHAIN, QGENS, mhat)


def test_monomial_data_errors():
    f = catalog("projective", 2)
    with pytest.raises(MapError, match="generate"):
        monomial_data(f, [(2, 0), (0, 1)])
    with pytest.raises(MapError, match="length"):
        monomial_data(f, [(1, 0, 0)])
    with pytest.raises(InputFormatError):
        monomial_data(f, [(1, 0), (0, 1)], [((1, 0), (0, 1))])
    emb = monomial_data(f, [(1, 0), (0, 1)])
    # rays (-1,-1), (1,0), (0,1): the standard embedding [p0 : p1 : p2]
    assert emb.shifts == (1, 0, 0)
    assert emb.powers() == [[1, 0, 0], [0, 1, 0], [0, 0, 1]]


def test_map_files():
    polys = (roots(1, G(0, 1)), Poly([G(F(1, 2), 1), 0, 1]))
    again = polys_from_json(polys_to_json(polys))
    assert again == polys and again[0].factored_form == polys[0].factored_form
    text = json.dumps({"polys": [{"coeffs": ["-1", "0", "1"]}, {"roots": [["1/2+i", 2]]}]})
    a, b = polys_from_json(text)
    assert a == roots(1, -1) and b == Poly.from_roots([(G(F(1, 2), 1), 2)])


@pytest.mark.parametrize(
    "text",
    [
        "[",
        "[]",
        '{"polys": [], "extra": 1}',
        '{"polys": [{"coeffs": []}]}',
        '{"polys": [{"coeffs": ["0.5", "1"]}]}',
        '{"polys": [{"roots": [["1", -1]]}]}',
        '{"polys": [{"roots": [["1"]]}]}',
        '{"polys": [{"coeffs": ["1"], "roots": []}]}',
    ],
)
def test_map_file_errors(text):
    with pytest.raises(InputFormatError):
        polys_from_json(text)
