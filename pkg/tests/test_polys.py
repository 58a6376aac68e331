from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from toric_curves.errors import InputFormatError, MapError
from toric_curves.polys import GaussianRational as G
from toric_curves.polys import Poly, gcd_many, parse_gaussian, poly_gcd, product

I = G(0, 1)


def roots(*zs):
    return Poly.from_roots((z, 1) for z in zs)


def test_gcd_shared_factor():
    assert poly_gcd(roots(1, 2), roots(2, 3)) == roots(2)


def test_gcd_coprime_and_idempotent():
    assert poly_gcd(roots(1), roots(I)).is_one()
    a = Poly([2, 4, 6])
    assert poly_gcd(a, a) == Poly([F(1, 3), F(2, 3), 1])
    with pytest.raises(MapError):
        poly_gcd(Poly([]), Poly([]))


def test_gcd_many():
    assert gcd_many([roots(1, 2, 3), roots(2, 3), roots(3, 5)]) == roots(3)
    assert gcd_many([roots(1), roots(2), roots(1, 2)]).is_one()


def test_gaussian_arithmetic():
    assert I * I == -1
    assert (G(1, 1) / G(1, -1)) == I
    assert G(F(1, 2), -3) - F(1, 2) == G(0, -3)
    with pytest.raises(ZeroDivisionError):
        G(1) / G(0)


@pytest.mark.parametrize(
    "text,want",
    [
        ("3", G(3)),
        ("-2/3", G(F(-2, 3))),
        ("i", I),
        ("-i", -I),
        ("-2/3i", G(0, F(-2, 3))),
        ("1/2+3/4i", G(F(1, 2), F(3, 4))),
        ("1-i", G(1, -1)),
        ("-1/2 - 2i", G(F(-1, 2), -2)),
        (7, G(7)),
    ],
)
def test_parse_gaussian(text, want):
    assert parse_gaussian(text) == want
    assert parse_gaussian(str(want)) == want


@pytest.mark.parametrize("text", ["0.5", "i+1", "ii", "1/2/3", "", "x", True, 0.5])
def test_parse_gaussian_rejects(text):
    with pytest.raises(InputFormatError):
        parse_gaussian(text)


def test_from_roots_and_evaluation():
    p = Poly.from_roots([(1, 2), (I, 1)])
    assert p.degree == 3 and p.monic
    assert p(1) == 0 and p(I) == 0 and p(0) == -I
    assert p.factored_form == ((G(0, 1), 1), (G(1), 2))
    with pytest.raises(MapError, match="negative multiplicity"):
        Poly.from_roots([(1, -1)])


def test_division():
    a = roots(1, 2, 3)
    q, r = a.divmod(roots(2))
    assert q == roots(1, 3) and r.is_zero()
    q, r = Poly([1, 0, 1]).divmod(Poly([-1, 1]))
    assert r == Poly([2])


def test_str():
    assert str(Poly([1, -2, 1])) == "z^2 - 2*z + 1"
    assert str(Poly([])) == "0"
    assert str(Poly([G(1, 1), 1])) == "z + (1+i)"


def test_product_and_power():
    assert product([(roots(1), 2), (roots(2), 0)]) == roots(1) ** 2
    with pytest.raises(MapError):
        roots(1) ** -1


gauss = st.builds(G, st.builds(F, st.integers(-9, 9), st.integers(1, 4)), st.integers(-3, 3))


@settings(max_examples=60, deadline=None)
@given(st.lists(gauss, min_size=1, max_size=4), st.lists(gauss, min_size=1, max_size=4), st.lists(gauss, max_size=3))
def test_gcd_divides_and_contains_common_roots(a, b, c):
    pa = roots(*(a + c))
    pb = roots(*(b + c))
    g = poly_gcd(pa, pb)
    assert pa.divmod(g)[1].is_zero() and pb.divmod(g)[1].is_zero()
    shared = set(a + c) & set(b + c)
    assert g.degree >= len(shared)
    assert all(g(z) == 0 for z in shared)
