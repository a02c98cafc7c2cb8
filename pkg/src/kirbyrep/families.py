"""Concrete S-matrix families, Yang-Baxter-preserving transforms and a small gallery.

``dim2_family(k, p, q)`` is the twisted flip with diagonal ``k, k`` and
antidiagonal ``q, p``.  It solves the Yang-Baxter equation for every choice
of parameters but satisfies the sliding condition only when all of
``k, p, q`` are ``+-1``.  ``dim2_conjugate(k)`` is a change of basis of
``S(k, 1/k, 1/k)`` into a basis that is orthonormal for the cup, and is a
genuine S-matrix for every nonzero rational ``k``.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .diagram import FramedLink, disjoint_union
from .rep import SMatrix, link_invariant
from .scalars import GaussianRational, as_gaussian, format_scalar
from .tensor import (
    ArityError,
    LinearMap,
    from_matrix,
    identity,
    inverse,
    tensor_product,
    twist_map,
)

__all__ = [
    "Dim2Params",
    "dim2_family",
    "dim2_samples",
    "dim2_conjugate",
    "dim2_basis_change",
    "signed_flip",
    "random_orthogonal",
    "transform_smatrix",
    "TRANSFORMS",
    "GalleryRow",
    "Gallery",
    "manifold_gallery",
]


@dataclass(frozen=True)
class Dim2Params:
    k: object
    p: object
    q: object

    def __post_init__(self):
        for name in ("k", "p", "q"):
            if getattr(self, name) == 0:
                raise ValueError(f"parameter {name} must be nonzero")

    @property
    def on_variety(self) -> bool:
        return as_gaussian(self.k) ** 2 * as_gaussian(self.p) * as_gaussian(self.q) == 1

    def as_tuple(self) -> tuple:
        return self.k, self.p, self.q


def dim2_family(params, exact: bool | None = None) -> LinearMap:
    """The 4x4 matrix in basis order 11, 12, 21, 22: rows ``k000 / 00q0 / 0p00 / 000k``."""
    if not isinstance(params, Dim2Params):
        params = Dim2Params(*params)
    k, p, q = params.as_tuple()
    if exact is None:
        exact = all(isinstance(x, (int, Fraction, GaussianRational)) for x in (k, p, q))
    rows = [[k, 0, 0, 0], [0, 0, q, 0], [0, p, 0, 0], [0, 0, 0, k]]
    return from_matrix(2, 2, 2, rows, exact=exact)


def dim2_samples(count: int, *, on_variety: bool = True, seed: int = 0) -> list[Dim2Params]:
    """Exact rational parameter points; on the variety ``q = 1/(k^2 p)``, off it ``k^2 pq != 1``."""
    rng = random.Random(seed)

    def rational():
        while True:
            x = Fraction(rng.randint(-9, 9), rng.randint(1, 6))
            if x:
                return x

    out = []
    for _ in range(count):
        k, p = rational(), rational()
        factor = 1 if on_variety else rng.choice([2, 3, -1, Fraction(1, 2), Fraction(-5, 3)])
        out.append(Dim2Params(k, p, factor / (k * k * p)))
    return out


def dim2_basis_change(exact: bool = True) -> LinearMap:
    """``P`` with columns ``(1, 1/2)`` and ``(i, -i/2)``."""
    i = GaussianRational(0, 1)
    rows = [[1, i], [Fraction(1, 2), -i / 2]]
    return from_matrix(2, 1, 1, rows if exact else [[complex(x) for x in r] for r in rows], exact)


def dim2_conjugate(k, exact: bool | None = None) -> LinearMap:
    """``(P^-1 (x) P^-1) S(k, 1/k, 1/k) (P (x) P)``, real with ``a = (k+1/k)/2``, ``c = (k-1/k)/2``."""
    if k == 0:
        raise ValueError("k must be nonzero")
    if exact is None:
        exact = isinstance(k, (int, Fraction, GaussianRational))
    k = as_gaussian(k) if exact else complex(k)
    a = (k + 1 / k) / 2
    c = (k - 1 / k) / 2
    rows = [[a, 0, 0, -c], [0, c, a, 0], [0, a, c, 0], [-c, 0, 0, a]]
    return from_matrix(2, 2, 2, rows, exact=exact)


def signed_flip(signs: Sequence[Sequence[int]], exact: bool = True) -> LinearMap:
    """``e_i (x) e_j -> c_ij e_j (x) e_i`` for a ``v x v`` table of coefficients."""
    v = len(signs)
    rows = [[0] * (v * v) for _ in range(v * v)]
    for i in range(v):
        for j in range(v):
            rows[j * v + i][i * v + j] = signs[i][j]
    return from_matrix(v, 2, 2, rows, exact=exact)


def random_orthogonal(v: int, rng: np.random.Generator, exact: bool = False) -> LinearMap:
    """Random orthogonal ``Q``; exact ones come from the Cayley transform of a skew matrix."""
    if not exact:
        from scipy.stats import ortho_group

        q = ortho_group.rvs(v, random_state=rng) if v > 1 else np.array([[1.0]])
        return from_matrix(v, 1, 1, q)
    skew = np.empty((v, v), dtype=object)
    for i in range(v):
        skew[i, i] = as_gaussian(0)
        for j in range(i + 1, v):
            x = as_gaussian(Fraction(int(rng.integers(-4, 5)), int(rng.integers(1, 4))))
            skew[i, j], skew[j, i] = x, -x
    a = LinearMap(v, 1, 1, skew)
    ident = identity(v, 1, True)
    return (ident - a) @ inverse(ident + a)


TRANSFORMS = ("scalar", "inverse", "transpose", "twist", "conjugate")


def transform_smatrix(S: LinearMap, kind: str, arg=None) -> LinearMap:
    """Yang-Baxter-preserving transforms of a ``2 -> 2`` map.

    ``scalar``: ``arg * S``; ``inverse``; ``transpose``; ``twist``: ``T S T``;
    ``conjugate``: ``(Q (x) Q) S (Q^-1 (x) Q^-1)`` for ``Q = arg``.
    """
    if (S.dom, S.cod) != (2, 2):
        raise ArityError("transforms act on maps V(x)V -> V(x)V")
    if kind == "scalar":
        if arg is None or arg == 0:
            raise ValueError("scale factor must be nonzero")
        return S.scale(arg)
    if kind == "inverse":
        return inverse(S)
    if kind == "transpose":
        return S.T
    if kind == "twist":
        t = twist_map(S.v, 2, S.exact)
        return t @ S @ t
    if kind == "conjugate":
        if arg is None or (arg.dom, arg.cod) != (1, 1):
            raise ValueError("conjugation needs an endomorphism Q of V")
        try:
            q_inv = inverse(arg)
        except (ZeroDivisionError, np.linalg.LinAlgError):
            raise ValueError("Q is singular") from None
        if not arg.exact and not np.all(np.isfinite(q_inv.data)):
            raise ValueError("Q is singular")
        return tensor_product(arg, arg) @ S @ tensor_product(q_inv, q_inv)
    raise ValueError(f"unknown transform {kind!r}")


# --------------------------------------------------------------------------
# gallery

@dataclass(frozen=True)
class GalleryRow:
    label: str
    manifold: str
    link: FramedLink
    value: object


@dataclass(frozen=True)
class Gallery:
    rows: tuple
    multiplicativity_residual: float
    invariant: bool

    def to_dict(self) -> dict:
        return {
            "invariant": self.invariant,
            "multiplicativity_residual": self.multiplicativity_residual,
            "rows": [{"presentation": r.label, "manifold": r.manifold,
                      "value": format_scalar(r.value)} for r in self.rows],
        }

    def format(self) -> str:
        width = max(len(r.label) for r in self.rows)
        mwidth = max(len(r.manifold) for r in self.rows)
        lines = [f"{'presentation':<{width}}  {'manifold':<{mwidth}}  value"]
        for r in self.rows:
            lines.append(f"{r.label:<{width}}  {r.manifold:<{mwidth}}  {format_scalar(r.value)}")
        lines.append(f"multiplicativity residual: {self.multiplicativity_residual:.3g}")
        if not self.invariant:
            lines.append("note: no invariance certificate; values are framed-link invariants only")
        return "\n".join(lines)


def _manifold(m: int) -> str:
    """Connected sum of ``m`` copies of ``S^1 x S^2`` (``S^3`` when ``m = 0``)."""
    return "S^3" if m == 0 else ("S^1 x S^2" if m == 1 else f"#{m} S^1 x S^2")


def manifold_gallery(sm: SMatrix, n_max: int = 3, *, invariant: bool = False) -> Gallery:
    """Values on the empty link, trivial links and ``+-1``-framed unknots, plus unions."""
    base = [(f"trivial {m}-component, framing 0", m, FramedLink.trivial(m))
            for m in range(1, n_max + 1)]
    base += [("unknot, framing +1", 0, FramedLink.unknot(1)),
             ("unknot, framing -1", 0, FramedLink.unknot(-1))]
    empty = FramedLink.empty()
    rows = [GalleryRow("empty", _manifold(0), empty, link_invariant(empty, sm))]
    values = [link_invariant(link, sm) for _, _, link in base]
    rows += [GalleryRow(label, _manifold(m), link, val)
             for (label, m, link), val in zip(base, values)]

    worst = 0.0
    for i, (l1, m1, k1) in enumerate(base):
        for j in range(i, len(base)):
            l2, m2, k2 = base[j]
            link = disjoint_union(k1, k2)
            value = link_invariant(link, sm)
            worst = max(worst, abs(complex(value) - complex(values[i]) * complex(values[j])))
            rows.append(GalleryRow(f"{l1} + {l2}", _manifold(m1 + m2), link, value))
    return Gallery(tuple(rows), worst, invariant)
