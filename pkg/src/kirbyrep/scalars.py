"""Scalar engines: complex floats with a tolerance, or exact Gaussian rationals."""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Literal, Union

import numpy as np

__all__ = [
    "GaussianRational",
    "Engine",
    "FLOAT",
    "EXACT",
    "as_gaussian",
    "parse_gaussian",
    "format_scalar",
]


class GaussianRational:
    """An element ``re + im*i`` of Q(i), with ``Fraction`` parts.

    Instances are immutable and hashable; they interoperate with ``int`` and
    ``Fraction`` so that numpy object arrays (which start reductions from the
    integer 0) behave.
    """

    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        object.__setattr__(self, "re", Fraction(re))
        object.__setattr__(self, "im", Fraction(im))

    def __setattr__(self, name, value):
        raise AttributeError("GaussianRational is immutable")

    @classmethod
    def _raw(cls, re: Fraction, im: Fraction) -> "GaussianRational":
        obj = object.__new__(cls)
        object.__setattr__(obj, "re", re)
        object.__setattr__(obj, "im", im)
        return obj

    # arithmetic -----------------------------------------------------------
    def __add__(self, other):
        if isinstance(other, GaussianRational):
            return GaussianRational._raw(self.re + other.re, self.im + other.im)
        if isinstance(other, Rational):
            return GaussianRational._raw(self.re + other, self.im)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, GaussianRational):
            return GaussianRational._raw(self.re - other.re, self.im - other.im)
        if isinstance(other, Rational):
            return GaussianRational._raw(self.re - other, self.im)
        return NotImplemented

    def __rsub__(self, other):
        if isinstance(other, Rational):
            return GaussianRational._raw(other - self.re, -self.im)
        return NotImplemented

    def __mul__(self, other):
        if isinstance(other, GaussianRational):
            a, b, c, d = self.re, self.im, other.re, other.im
            if not b and not d:
                return GaussianRational._raw(a * c, b)
            return GaussianRational._raw(a * c - b * d, a * d + b * c)
        if isinstance(other, Rational):
            return GaussianRational._raw(self.re * other, self.im * other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Rational):
            other = GaussianRational(other)
        if not isinstance(other, GaussianRational):
            return NotImplemented
        return self * other.reciprocal()

    def __rtruediv__(self, other):
        if isinstance(other, Rational):
            return GaussianRational(other) * self.reciprocal()
        return NotImplemented

    def __neg__(self):
        return GaussianRational._raw(-self.re, -self.im)

    def __pos__(self):
        return self

    def __pow__(self, n: int):
        if not isinstance(n, int):
            return NotImplemented
        base = self if n >= 0 else self.reciprocal()
        out = GaussianRational(1)
        for _ in range(abs(n)):
            out = out * base
        return out

    def reciprocal(self) -> "GaussianRational":
        norm = self.re * self.re + self.im * self.im
        if not norm:
            raise ZeroDivisionError("division by zero Gaussian rational")
        return GaussianRational._raw(self.re / norm, -self.im / norm)

    def conjugate(self) -> "GaussianRational":
        return GaussianRational._raw(self.re, -self.im)

    # comparisons / conversions -------------------------------------------
    def __eq__(self, other):
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, Rational):
            return not self.im and self.re == other
        if isinstance(other, (float, complex)):
            return complex(self) == other
        return NotImplemented

    def __hash__(self):
        if not self.im:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __abs__(self) -> float:
        return abs(complex(self))

    def __repr__(self):
        return f"GaussianRational({format_scalar(self)!r})"

    def __str__(self):
        return format_scalar(self)


Number = Union[int, Fraction, GaussianRational, float, complex]


def as_gaussian(x) -> GaussianRational:
    """Convert ints, Fractions, strings and binary floats exactly."""
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, (int, Fraction, np.integer)):
        return GaussianRational(int(x) if isinstance(x, np.integer) else x)
    if isinstance(x, str):
        return parse_gaussian(x)
    if isinstance(x, (float, np.floating)):
        return GaussianRational(Fraction(float(x)))
    if isinstance(x, (complex, np.complexfloating)):
        return GaussianRational(Fraction(x.real), Fraction(x.imag))
    raise TypeError(f"cannot convert {type(x).__name__} to an exact scalar")


_RAT = r"\d+(?:/\d+)?"
_IMAG_ONLY = re.compile(rf"([+-]?)({_RAT})?i")
_FULL = re.compile(rf"([+-]?{_RAT})(?:([+-])({_RAT})?i)?")


def parse_gaussian(text: str) -> GaussianRational:
    """Parse ``"p/q"``, ``"p/q+r/si"``, ``"-i"``, ``"3i"`` and similar."""
    s = text.strip()
    m = _IMAG_ONLY.fullmatch(s)
    if m:
        imag = Fraction(m.group(2)) if m.group(2) else Fraction(1)
        return GaussianRational(0, -imag if m.group(1) == "-" else imag)
    m = _FULL.fullmatch(s)
    if not m:
        raise ValueError(f"malformed exact scalar {text!r}")
    imag = Fraction(0)
    if m.group(2):
        imag = Fraction(m.group(3)) if m.group(3) else Fraction(1)
        if m.group(2) == "-":
            imag = -imag
    return GaussianRational(Fraction(m.group(1)), imag)


def _fmt_frac(f: Fraction) -> str:
    return str(f.numerator) if f.denominator == 1 else f"{f.numerator}/{f.denominator}"


def format_scalar(x, digits: int = 12) -> str:
    """Canonical text for a scalar; exact values round-trip via parse_gaussian."""
    if isinstance(x, (int, Fraction)):
        x = GaussianRational(x)
    if isinstance(x, GaussianRational):
        if not x.im:
            return _fmt_frac(x.re)
        imag = "i" if x.im == 1 else "-i" if x.im == -1 else _fmt_frac(x.im) + "i"
        if not x.re:
            return imag
        sign = "" if imag.startswith("-") else "+"
        return f"{_fmt_frac(x.re)}{sign}{imag}"
    z = complex(x)
    re_s = f"{z.real:.{digits}g}"
    if abs(z.imag) <= 0.0:
        return re_s
    im_s = f"{z.imag:+.{digits}g}"
    if abs(z.real) <= 0.0:
        return f"{z.imag:.{digits}g}i"
    return f"{re_s}{im_s}i"


@dataclass(frozen=True)
class Engine:
    """Which scalar field the computation runs over.

    ``float``: complex128 with entrywise tolerance ``epsilon``.
    ``exact``: Gaussian rationals, equality is exact and ``epsilon`` is 0.
    """

    kind: Literal["float", "exact"] = "float"
    epsilon: float = 1e-9

    def __post_init__(self):
        if self.kind not in ("float", "exact"):
            raise ValueError(f"unknown engine {self.kind!r}")
        if self.kind == "exact" and self.epsilon != 0:
            object.__setattr__(self, "epsilon", 0.0)
        if self.epsilon < 0:
            raise ValueError("epsilon must be nonnegative")

    @property
    def exact(self) -> bool:
        return self.kind == "exact"

    def passes(self, residual: float, exactly_zero: bool | None = None) -> bool:
        if self.exact:
            return residual == 0.0 if exactly_zero is None else exactly_zero
        return residual <= self.epsilon

    def to_dict(self) -> dict:
        return {"engine": self.kind, "epsilon": self.epsilon}


FLOAT = Engine("float", 1e-9)
EXACT = Engine("exact", 0.0)
