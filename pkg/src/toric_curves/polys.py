"""Exact univariate polynomials over the Gaussian rationals."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence, Union

from .errors import InputFormatError, MapError

Number = Union[int, Fraction, "GaussianRational"]


@dataclass(frozen=True, order=True)
class GaussianRational:
    re: Fraction = Fraction(0)
    im: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "re", Fraction(self.re))
        object.__setattr__(self, "im", Fraction(self.im))

    @classmethod
    def of(cls, x: Number) -> "GaussianRational":
        if isinstance(x, GaussianRational):
            return x
        if isinstance(x, (int, Fraction)):
            return cls(Fraction(x))
        raise TypeError(f"not an exact number: {x!r}")

    def __add__(self, o):
        o = GaussianRational.of(o)
        return GaussianRational(self.re + o.re, self.im + o.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, o):
        return self + (-GaussianRational.of(o))

    def __rsub__(self, o):
        return GaussianRational.of(o) - self

    def __mul__(self, o):
        o = GaussianRational.of(o)
        return GaussianRational(self.re * o.re - self.im * o.im, self.re * o.im + self.im * o.re)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = GaussianRational.of(o)
        n = o.re * o.re + o.im * o.im
        if n == 0:
            raise ZeroDivisionError("division by zero")
        return self * GaussianRational(o.re / n, -o.im / n)

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __eq__(self, o):
        if isinstance(o, (int, Fraction)):
            o = GaussianRational(Fraction(o))
        if not isinstance(o, GaussianRational):
            return NotImplemented
        return self.re == o.re and self.im == o.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __str__(self):
        if not self.im:
            return _fmt(self.re)
        im = "i" if self.im == 1 else "-i" if self.im == -1 else f"{_fmt(self.im)}i"
        if not self.re:
            return im
        return f"{_fmt(self.re)}{'' if im.startswith('-') else '+'}{im}"

    def __repr__(self):
        return f"GaussianRational({self})"


def _fmt(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


_RAT = re.compile(r"[+-]?\d+(?:/\d+)?")


def _rat(text: str, whole: str) -> Fraction:
    if not _RAT.fullmatch(text):
        raise InputFormatError(f"not an exact Gaussian rational: {whole!r}")
    return Fraction(text)


def parse_gaussian(text) -> GaussianRational:
    """Parse ``"p/q"``, ``"p/q+r/s i"``, ``"i"`` or ``"-2/3i"``; integers are accepted as such."""
    if isinstance(text, bool):
        raise InputFormatError(f"not a number: {text!r}")
    if isinstance(text, int):
        return GaussianRational(Fraction(text))
    if not isinstance(text, str):
        raise InputFormatError(f"numbers must be strings or integers, got {text!r}")
    s = text.replace(" ", "")
    if not s.endswith("i"):
        return GaussianRational(_rat(s, text))
    body = s[:-1]
    cut = max(body.rfind("+"), body.rfind("-"))
    re_txt, im_txt = (body[:cut], body[cut:]) if cut > 0 else ("", body)
    if im_txt in ("", "+"):
        im = Fraction(1)
    elif im_txt == "-":
        im = Fraction(-1)
    else:
        im = _rat(im_txt, text)
    return GaussianRational(_rat(re_txt, text) if re_txt else Fraction(0), im)


ZERO = GaussianRational()
ONE = GaussianRational(Fraction(1))


class Poly:
    """Polynomial with coefficients listed from the constant term upward.

    ``factored_form``, when present, is a tuple of ``(root, multiplicity)``
    pairs and the polynomial is the monic product of ``(z - root)**mult``.
    """

    __slots__ = ("coeffs", "factored_form")

    def __init__(self, coeffs: Iterable[Number], factored_form=None):
        c = [GaussianRational.of(x) for x in coeffs]
        while c and not c[-1]:
            c.pop()
        self.coeffs: tuple[GaussianRational, ...] = tuple(c)
        self.factored_form: Optional[tuple[tuple[GaussianRational, int], ...]] = factored_form

    @classmethod
    def from_roots(cls, roots: Iterable[tuple[Number, int]]) -> "Poly":
        merged: dict[GaussianRational, int] = {}
        for z, k in roots:
            z = GaussianRational.of(z)
            if k < 0:
                raise MapError(f"negative multiplicity {k} at root {z}")
            if k:
                merged[z] = merged.get(z, 0) + k
        p = cls([1])
        for z, k in sorted(merged.items()):
            p = p * cls([-z, 1]) ** k
        return cls(p.coeffs, tuple(sorted(merged.items())))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def monic(self) -> bool:
        return bool(self.coeffs) and self.coeffs[-1] == ONE

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_one(self) -> bool:
        return self.coeffs == (ONE,)

    def make_monic(self) -> "Poly":
        if not self.coeffs:
            raise MapError("the zero polynomial has no monic form")
        lead = self.coeffs[-1]
        return Poly([c / lead for c in self.coeffs])

    def __eq__(self, o):
        return isinstance(o, Poly) and self.coeffs == o.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __add__(self, o: "Poly") -> "Poly":
        n = max(len(self.coeffs), len(o.coeffs))
        a = self.coeffs + (ZERO,) * (n - len(self.coeffs))
        b = o.coeffs + (ZERO,) * (n - len(o.coeffs))
        return Poly([x + y for x, y in zip(a, b)])

    def __neg__(self):
        return Poly([-c for c in self.coeffs])

    def __sub__(self, o: "Poly") -> "Poly":
        return self + (-o)

    def __mul__(self, o: "Poly") -> "Poly":
        if not self.coeffs or not o.coeffs:
            return Poly([])
        out = [ZERO] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(o.coeffs):
                out[i + j] = out[i + j] + a * b
        return Poly(out)

    def __pow__(self, k: int) -> "Poly":
        if k < 0:
            raise MapError("negative power of a polynomial")
        out, base = Poly([1]), self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def divmod(self, o: "Poly") -> tuple["Poly", "Poly"]:
        if o.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        q = [ZERO] * max(len(rem) - len(o.coeffs) + 1, 0)
        lead = o.coeffs[-1]
        for k in range(len(q) - 1, -1, -1):
            c = rem[k + len(o.coeffs) - 1] / lead
            q[k] = c
            if c:
                for j, b in enumerate(o.coeffs):
                    rem[k + j] = rem[k + j] - c * b
        return Poly(q), Poly(rem[: len(o.coeffs) - 1])

    def __call__(self, z: Number) -> GaussianRational:
        acc = ZERO
        for c in reversed(self.coeffs):
            acc = acc * z + c
        return acc

    def __str__(self):
        if not self.coeffs:
            return "0"
        terms = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if not c:
                continue
            mono = "" if k == 0 else "z" if k == 1 else f"z^{k}"
            if not mono:
                terms.append(str(c) if not (c.re and c.im) else f"({c})")
            elif c == ONE:
                terms.append(mono)
            elif c == -ONE:
                terms.append(f"-{mono}")
            else:
                cs = str(c) if not (c.re and c.im) else f"({c})"
                terms.append(f"{cs}*{mono}")
        return " + ".join(terms).replace("+ -", "- ")

    def __repr__(self):
        return f"Poly({self})"


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd by the Euclidean algorithm."""
    if a.is_zero() and b.is_zero():
        raise MapError("gcd of two zero polynomials is undefined")
    while not b.is_zero():
        a, b = b, a.divmod(b)[1]
    return a.make_monic()


def gcd_many(polys: Sequence[Poly]) -> Poly:
    g = Poly([])
    for p in polys:
        g = p.make_monic() if g.is_zero() else poly_gcd(g, p)
        if g.is_one():
            break
    return g


def product(polys: Iterable[tuple[Poly, int]]) -> Poly:
    out = Poly([1])
    for p, k in polys:
        if k:
            out = out * p**k
    return out
