"""Skein relations from minimal polynomials of represented braids.

If ``P(X) = sum_j a_j X^j`` annihilates ``A = rho(beta)``, then for links
``L_i`` that agree outside a disk and carry ``beta^i`` inside it,
``sum_j a_j rho(L_{m+j}) = 0``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .diagram import Gen, TangleWord, braid_word, identity_word, juxtapose, stack
from .linalg import exact_inverse, minimal_polynomial
from .parsing import SequenceSpec
from .rep import SMatrix, evaluate
from .scalars import Engine, as_gaussian, format_scalar

__all__ = [
    "SkeinRelation",
    "BetaSequence",
    "braid_power",
    "skein_relation",
    "verify_skein",
    "interpolate_family",
]


def _strands_for(braid: Sequence[int]) -> int:
    return max((abs(g) for g in braid), default=0) + 1


def braid_power(braid: Sequence[int], power: int) -> list[int]:
    """``beta^power``; negative powers use the reversed, sign-flipped word."""
    base = list(braid) if power >= 0 else [-g for g in reversed(braid)]
    return base * abs(power)


@dataclass(frozen=True)
class SkeinRelation:
    """Monic relation ``sum_j coeffs[j] X^(offset + j) = 0`` for ``X = rho(beta)``."""

    braid: tuple
    strands: int
    coeffs: tuple
    offset: int = 0

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    @property
    def exponents(self) -> range:
        return range(self.offset, self.offset + len(self.coeffs))

    def shifted(self, offset: int) -> "SkeinRelation":
        """The same relation multiplied by ``X^(offset - self.offset)``."""
        return SkeinRelation(self.braid, self.strands, self.coeffs, offset)

    def format(self) -> str:
        terms = []
        for e, c in zip(self.exponents, self.coeffs):
            if c == 0:
                continue
            mono = "1" if e == 0 else ("X" if e == 1 else f"X^{e}")
            terms.append(f"({format_scalar(c)}) {mono}")
        return " + ".join(terms) + " = 0"


@dataclass(frozen=True)
class BetaSequence:
    """Closed diagrams ``below``, ``beta^i`` in a hole, ``above`` for each power ``i``.

    ``below`` is a ``(0, M)`` word, ``above`` an ``(M, 0)`` word and the braid
    occupies strands ``hole+1 .. hole+strands`` of the ``M`` in between.
    """

    below: TangleWord
    above: TangleWord
    hole: int
    braid: tuple
    strands: int
    powers: tuple

    def __post_init__(self):
        object.__setattr__(self, "braid", tuple(self.braid))
        object.__setattr__(self, "powers", tuple(self.powers))
        if self.below.dom != 0 or self.above.cod != 0:
            raise ValueError("context words must close up: below is (0,M), above is (M,0)")
        if self.below.cod != self.above.dom:
            raise ValueError(f"context widths differ: {self.below.cod} below, "
                             f"{self.above.dom} above")
        if not 0 <= self.hole <= self.below.cod - self.strands:
            raise ValueError(f"hole at {self.hole} with {self.strands} strands does not fit "
                             f"in {self.below.cod} strands")

    @classmethod
    def closure(cls, braid: Sequence[int], strands: int | None = None,
                powers: Sequence[int] = (0, 1, 2)) -> "BetaSequence":
        """Plain braid closures ``closure(beta^i)``."""
        w = strands or _strands_for(braid)
        below = TangleWord.of([(Gen.ID,) * k + (Gen.CAP,) + (Gen.ID,) * k for k in range(w)])
        above = TangleWord.of([(Gen.ID,) * k + (Gen.CUP,) + (Gen.ID,) * k
                               for k in range(w - 1, -1, -1)])
        return cls(below, above, 0, tuple(braid), w, tuple(powers))

    @classmethod
    def from_spec(cls, spec: SequenceSpec, braid: Sequence[int],
                  strands: int | None = None) -> "BetaSequence":
        return cls(spec.below, spec.above, spec.hole, tuple(braid),
                   strands or _strands_for(braid), spec.powers)

    def link(self, power: int) -> TangleWord:
        width = self.below.cod
        inner = braid_word(braid_power(self.braid, power), self.strands)
        middle = juxtapose(identity_word(self.hole), inner,
                           identity_word(width - self.hole - self.strands))
        return stack(self.below, middle, self.above)


def skein_relation(sm: SMatrix, braid: Sequence[int], strands: int | None = None) -> SkeinRelation:
    """The minimal polynomial of ``rho(beta)`` as a skein relation."""
    w = strands or _strands_for(braid)
    a = evaluate(braid_word(list(braid), w), sm)
    coeffs = minimal_polynomial(a, sm.engine)
    return SkeinRelation(tuple(braid), w, tuple(coeffs), 0)


def verify_skein(sm: SMatrix, rel: SkeinRelation, seq: BetaSequence) -> float:
    """``|sum_j a_j rho(L_{m+j})|`` over the sequence's closed diagrams."""
    if tuple(seq.braid) != tuple(rel.braid) or seq.strands != rel.strands:
        raise ValueError("sequence and relation use different braids")
    missing = [e for e in rel.exponents if e not in seq.powers]
    if missing:
        raise ValueError(f"sequence lacks powers {missing} required by the relation")
    total = None
    for e, c in zip(rel.exponents, rel.coeffs):
        value = evaluate(seq.link(e), sm).scalar_value()
        term = as_gaussian(c) * value if sm.exact else complex(c) * complex(value)
        total = term if total is None else total + term
    return abs(complex(total))


def interpolate_family(sample: Callable, degree: int, *, offset: int = 0,
                       points: Sequence | None = None, engine: Engine | None = None):
    """Laurent coefficients of ``x -> sample(x)`` assuming exponents ``offset..offset+degree``.

    The sampled values are multiplied by ``x^-offset``, interpolated by a
    polynomial of the given degree and checked at one extra point.  Returns
    ``(coefficients, check_residual)``.
    """
    exact = engine.exact if engine is not None else True
    if points is None:
        points = [as_gaussian(j + 2) for j in range(degree + 2)] if exact else \
            [float(j + 2) for j in range(degree + 2)]
    if len(points) < degree + 2:
        raise ValueError("need degree + 2 sample points (one is kept for checking)")
    fit, check = list(points[: degree + 1]), points[degree + 1]
    if exact:
        xs = [as_gaussian(x) for x in fit]
        ys = [as_gaussian(sample(x)) * x ** (-offset) for x in xs]
        vander = np.empty((degree + 1, degree + 1), dtype=object)
        for i, x in enumerate(xs):
            for j in range(degree + 1):
                vander[i, j] = x**j
        coeffs = list(exact_inverse(vander) @ np.array(ys, dtype=object))
        xc = as_gaussian(check)
        predicted = sum((c * xc ** (j + offset) for j, c in enumerate(coeffs)), as_gaussian(0))
        residual = abs(complex(predicted - as_gaussian(sample(xc))))
        return coeffs, residual
    xs = np.array(fit, dtype=complex)
    ys = np.array([complex(sample(x)) for x in fit]) * xs ** (-offset)
    coeffs = np.linalg.solve(np.vander(xs, degree + 1, increasing=True), ys)
    xc = complex(check)
    predicted = sum(c * xc ** (j + offset) for j, c in enumerate(coeffs))
    return [complex(c) for c in coeffs], abs(predicted - complex(sample(check)))
