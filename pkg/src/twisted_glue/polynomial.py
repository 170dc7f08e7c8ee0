"""Integer polynomials in q, and exact interpolation of point counts."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union


class InterpolationError(ValueError):
    """Samples are not explained by an integer polynomial within the degree bound."""


@dataclass(frozen=True)
class CountPolynomial:
    """Integer coefficients, constant term first, no trailing zeros."""

    coeffs: tuple[int, ...]

    def __init__(self, coeffs: Iterable[int] = ()) -> None:
        c = list(coeffs)
        while c and c[-1] == 0:
            c.pop()
        if any(not isinstance(x, int) for x in c):
            raise TypeError("coefficients must be integers")
        object.__setattr__(self, "coeffs", tuple(c))

    @classmethod
    def constant(cls, c: int) -> CountPolynomial:
        return cls((c,))

    @classmethod
    def monomial(cls, degree: int, coeff: int = 1) -> CountPolynomial:
        return cls((0,) * degree + (coeff,))

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __call__(self, q: int) -> int:
        out = 0
        for c in reversed(self.coeffs):
            out = out * q + c
        return out

    def _lift(self, other: PolyLike) -> CountPolynomial:
        return other if isinstance(other, CountPolynomial) else CountPolynomial.constant(other)

    def __add__(self, other: PolyLike) -> CountPolynomial:
        o = self._lift(other).coeffs
        m = max(len(self.coeffs), len(o))
        a = self.coeffs + (0,) * (m - len(self.coeffs))
        b = o + (0,) * (m - len(o))
        return CountPolynomial(x + y for x, y in zip(a, b))

    __radd__ = __add__

    def __neg__(self) -> CountPolynomial:
        return CountPolynomial(-c for c in self.coeffs)

    def __sub__(self, other: PolyLike) -> CountPolynomial:
        return self + (-self._lift(other))

    def __rsub__(self, other: PolyLike) -> CountPolynomial:
        return self._lift(other) - self

    def __mul__(self, other: PolyLike) -> CountPolynomial:
        o = self._lift(other).coeffs
        if not self.coeffs or not o:
            return CountPolynomial()
        out = [0] * (len(self.coeffs) + len(o) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(o):
                out[i + j] += a * b
        return CountPolynomial(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> CountPolynomial:
        out = CountPolynomial.constant(1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other: object) -> bool:
        if isinstance(other, int):
            other = CountPolynomial.constant(other)
        if not isinstance(other, CountPolynomial):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self) -> int:
        return hash(self.coeffs)

    def __str__(self) -> str:
        terms = []
        for k in range(len(self.coeffs) - 1, -1, -1):
            c = self.coeffs[k]
            if c == 0:
                continue
            mag = abs(c)
            if k == 0:
                body = str(mag)
            else:
                var = "q" if k == 1 else f"q^{k}"
                body = var if mag == 1 else f"{mag}{var}"
            sign = "-" if c < 0 else "+"
            terms.append((sign, body))
        if not terms:
            return "0"
        first_sign, first = terms[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in terms[1:]:
            out += sign + body
        return out

    def __repr__(self) -> str:
        return f"CountPolynomial({str(self)!r})"


PolyLike = Union[CountPolynomial, int]

Q = CountPolynomial((0, 1))


def interpolate_count_polynomial(
    samples: Sequence[tuple[int, int]], degree_bound: int
) -> CountPolynomial:
    """Integer polynomial through (q, count) samples, via Newton divided differences.

    Needs at least degree_bound + 1 samples. The interpolant through all
    samples is computed exactly; it must have integer coefficients and
    degree at most degree_bound.
    """
    xs = [int(x) for x, _ in samples]
    if len(set(xs)) != len(xs):
        raise ValueError("sample abscissae must be distinct")
    if len(xs) < degree_bound + 1:
        raise ValueError(f"need at least {degree_bound + 1} samples, got {len(xs)}")

    table = [Fraction(y) for _, y in samples]
    newton = [table[0]]
    for level in range(1, len(xs)):
        table = [(table[i + 1] - table[i]) / (xs[i + level] - xs[i]) for i in range(len(table) - 1)]
        newton.append(table[0])

    # expand the Newton form into monomial coefficients
    coeffs = [Fraction(0)]
    for k in range(len(newton) - 1, -1, -1):
        shifted = [Fraction(0)] + coeffs
        for i, c in enumerate(coeffs):
            shifted[i] -= xs[k] * c
        shifted[0] += newton[k]
        coeffs = shifted

    if any(c.denominator != 1 for c in coeffs):
        raise InterpolationError(f"non-integral interpolant {coeffs} for samples {list(samples)}")
    poly = CountPolynomial(int(c) for c in coeffs)
    if poly.degree > degree_bound:
        raise InterpolationError(f"interpolant {poly} exceeds degree bound {degree_bound}")
    for x, y in samples:
        if poly(x) != y:
            raise InterpolationError(f"interpolant {poly} misses sample ({x}, {y})")
    return poly
