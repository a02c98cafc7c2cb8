"""Dense linear maps between tensor powers of a fixed space V = K^v.

A :class:`LinearMap` from ``V^{(x)m}`` to ``V^{(x)n}`` stores a ``v**n`` by
``v**m`` matrix.  Multi-indices are laid out v-adically with the leftmost
tensor factor most significant, which is exactly the ordering produced by
``numpy.kron``.  Entries are complex128 (float engine) or
:class:`~kirbyrep.scalars.GaussianRational` objects (exact engine).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .scalars import Engine, GaussianRational, as_gaussian

__all__ = [
    "LinearMap",
    "ArityError",
    "identity",
    "scalar",
    "from_matrix",
    "tensor_product",
    "compose",
    "partial_trace",
    "full_trace",
    "twist_map",
    "permutation_map",
    "inverse",
    "embed",
    "max_abs",
    "stack",
]

ZERO = GaussianRational(0)
ONE = GaussianRational(1)


class ArityError(ValueError):
    """Raised when maps are combined with incompatible dimensions or arities."""


def _exact_array(values) -> np.ndarray:
    arr = np.asarray(values, dtype=object)
    out = np.empty(arr.shape, dtype=object)
    flat_in = arr.reshape(-1)
    flat_out = out.reshape(-1)
    for i, x in enumerate(flat_in):
        flat_out[i] = as_gaussian(x)
    return out


def _zeros(shape, exact: bool) -> np.ndarray:
    if exact:
        out = np.empty(shape, dtype=object)
        out.fill(ZERO)
        return out
    return np.zeros(shape, dtype=complex)


def _split(arr: np.ndarray) -> tuple[np.ndarray, np.ndarray, int]:
    """Write an exact array as ``(re + i*im) / den`` with integer object arrays."""
    flat = arr.reshape(-1)
    den = 1
    for x in flat:
        den = math.lcm(den, x.re.denominator, x.im.denominator)
    re = np.empty(arr.shape, dtype=object)
    im = np.empty(arr.shape, dtype=object)
    re_flat, im_flat = re.reshape(-1), im.reshape(-1)
    for i, x in enumerate(flat):
        re_flat[i] = x.re.numerator * (den // x.re.denominator)
        im_flat[i] = x.im.numerator * (den // x.im.denominator)
    return re, im, den


def _join(re: np.ndarray, im: np.ndarray, den: int) -> np.ndarray:
    out = np.empty(re.shape, dtype=object)
    out_flat = out.reshape(-1)
    for i, (a, b) in enumerate(zip(re.reshape(-1), im.reshape(-1))):
        if a == 0 and b == 0:
            out_flat[i] = ZERO
        elif den == 1:
            out_flat[i] = GaussianRational._raw(Fraction(int(a)), Fraction(int(b)))
        else:
            out_flat[i] = GaussianRational._raw(Fraction(int(a), den), Fraction(int(b), den))
    return out


def exact_bilinear(op, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Apply a bilinear numpy operation to exact arrays through integer numerators."""
    ar, ai, da = _split(a)
    br, bi, db = _split(b)
    re = op(ar, br) - op(ai, bi)
    im = op(ar, bi) + op(ai, br)
    return _join(re, im, da * db)


def max_abs(arr: np.ndarray) -> float:
    """Largest entry modulus, as a float (0.0 for an empty array)."""
    if arr.size == 0:
        return 0.0
    if arr.dtype == object:
        return max(abs(complex(x)) for x in arr.reshape(-1))
    return float(np.max(np.abs(arr)))


@dataclass(frozen=True, eq=False)
class LinearMap:
    """Immutable map ``V^{(x)dom} -> V^{(x)cod}`` with ``dim V = v``."""

    v: int
    dom: int
    cod: int
    data: np.ndarray

    def __post_init__(self):
        if self.v < 1:
            raise ValueError("dimension v must be positive")
        if self.dom < 0 or self.cod < 0:
            raise ValueError("arities must be nonnegative")
        shape = (self.v**self.cod, self.v**self.dom)
        data = self.data
        if data.dtype != object and data.dtype != complex:
            data = data.astype(complex)
        if data.shape != shape:
            raise ArityError(f"coefficient array has shape {data.shape}, expected {shape}")
        data = data.copy()
        data.flags.writeable = False
        object.__setattr__(self, "data", data)

    # views ----------------------------------------------------------------
    @property
    def exact(self) -> bool:
        return self.data.dtype == object

    @property
    def shape(self) -> tuple[int, int]:
        return self.data.shape

    def tensor(self) -> np.ndarray:
        """Coefficients as an array indexed ``[k_1..k_cod, j_1..j_dom]``."""
        return self.data.reshape((self.v,) * (self.cod + self.dom))

    def entry(self, out_index: Sequence[int], in_index: Sequence[int]):
        return self.tensor()[tuple(out_index) + tuple(in_index)]

    @property
    def T(self) -> "LinearMap":
        return LinearMap(self.v, self.cod, self.dom, self.data.T)

    def to_float(self) -> "LinearMap":
        if not self.exact:
            return self
        conv = np.vectorize(complex, otypes=[complex])
        return LinearMap(self.v, self.dom, self.cod, conv(self.data) if self.data.size else
                         np.zeros(self.data.shape, dtype=complex))

    def to_exact(self) -> "LinearMap":
        if self.exact:
            return self
        return LinearMap(self.v, self.dom, self.cod, _exact_array(self.data))

    def with_engine(self, engine: Engine) -> "LinearMap":
        return self.to_exact() if engine.exact else self.to_float()

    def scalar_value(self):
        """The single coefficient of an arity (0, 0) map."""
        if self.dom or self.cod:
            raise ArityError("not an arity-0 scalar")
        return self.data[0, 0]

    # arithmetic -------------------------------------------------------------
    def _coerce(self, other: "LinearMap") -> tuple[np.ndarray, np.ndarray]:
        if (self.v, self.dom, self.cod) != (other.v, other.dom, other.cod):
            raise ArityError("maps have different shapes")
        if self.exact == other.exact:
            return self.data, other.data
        return self.to_float().data, other.to_float().data

    def __add__(self, other: "LinearMap") -> "LinearMap":
        a, b = self._coerce(other)
        return LinearMap(self.v, self.dom, self.cod, a + b)

    def __sub__(self, other: "LinearMap") -> "LinearMap":
        a, b = self._coerce(other)
        return LinearMap(self.v, self.dom, self.cod, a - b)

    def __neg__(self) -> "LinearMap":
        return LinearMap(self.v, self.dom, self.cod, -self.data)

    def scale(self, c) -> "LinearMap":
        if self.exact:
            c = as_gaussian(c)
            return LinearMap(self.v, self.dom, self.cod, self.data * c)
        return LinearMap(self.v, self.dom, self.cod, self.data * complex(c))

    def __matmul__(self, other: "LinearMap") -> "LinearMap":
        return compose(self, other)

    def residual(self, other: "LinearMap") -> float:
        """Max absolute entry difference."""
        return max_abs((self - other).data)

    def is_zero(self) -> bool:
        if self.exact:
            return not any(self.data.reshape(-1))
        return not np.any(self.data)

    def equals(self, other: "LinearMap", engine: Engine | None = None) -> bool:
        diff = self - other
        if diff.exact:
            return diff.is_zero()
        eps = engine.epsilon if engine is not None else 1e-9
        return max_abs(diff.data) <= eps

    def __repr__(self):
        kind = "exact" if self.exact else "float"
        return f"LinearMap(v={self.v}, {self.dom}->{self.cod}, {kind})"


# constructors -------------------------------------------------------------

def identity(v: int, n: int = 1, exact: bool = False) -> LinearMap:
    size = v**n
    data = _zeros((size, size), exact)
    for i in range(size):
        data[i, i] = ONE if exact else 1.0
    return LinearMap(v, n, n, data)


def scalar(value, v: int, exact: bool | None = None) -> LinearMap:
    """Arity-0 map carrying one coefficient; the unit object when value is 1."""
    if exact is None:
        exact = isinstance(value, (int, Fraction, GaussianRational))
    if exact:
        return LinearMap(v, 0, 0, _exact_array([[value]]))
    return LinearMap(v, 0, 0, np.array([[complex(value)]]))


def from_matrix(v: int, dom: int, cod: int, rows, exact: bool = False) -> LinearMap:
    """Build a map from a nested list / array of shape ``(v**cod, v**dom)``."""
    if exact:
        data = _exact_array(rows)
    else:
        data = np.asarray(rows, dtype=complex)
    if data.ndim != 2:
        data = data.reshape(v**cod, v**dom)
    return LinearMap(v, dom, cod, data)


def _check_v(maps: Sequence[LinearMap]) -> int:
    vs = {m.v for m in maps}
    if len(vs) != 1:
        raise ArityError(f"dimension mismatch: {sorted(vs)}")
    return vs.pop()


def _align(maps: Sequence[LinearMap]) -> list[np.ndarray]:
    if all(m.exact for m in maps):
        return [m.data for m in maps]
    return [m.to_float().data for m in maps]


def tensor_product(*maps: LinearMap) -> LinearMap:
    """Juxtaposition ``A (x) B (x) ...``; arities add, coefficients are Kronecker products."""
    if not maps:
        raise ValueError("tensor_product needs at least one map")
    v = _check_v(maps)
    arrays = _align(maps)
    if maps[0].exact and all(m.exact for m in maps):
        data = reduce(lambda x, y: exact_bilinear(np.kron, x, y), arrays)
    else:
        data = reduce(np.kron, arrays)
    return LinearMap(v, sum(m.dom for m in maps), sum(m.cod for m in maps), data)


def compose(a: LinearMap, b: LinearMap) -> LinearMap:
    """``a`` after ``b``."""
    v = _check_v([a, b])
    if b.cod != a.dom:
        raise ArityError(f"cannot compose: inner arities {b.cod} and {a.dom} differ")
    x, y = _align([a, b])
    if x.dtype == object:
        return LinearMap(v, b.dom, a.cod, exact_bilinear(np.dot, x, y))
    return LinearMap(v, b.dom, a.cod, x @ y)


def partial_trace(a: LinearMap, side: str = "right") -> LinearMap:
    """Contract the last (``right``) or first (``left``) input/output index pair.

    ``r(A)^{k_1..k_{i-1}}_{j_1..j_{i-1}} = sum_r A^{k_1..k_{i-1} r}_{j_1..j_{i-1} r}``
    and the left version sums over the leading index instead.
    """
    if a.dom != a.cod:
        raise ArityError("partial trace needs an endomorphism")
    if a.dom == 0:
        raise ArityError("partial trace of an arity-0 map")
    v, i = a.v, a.dom
    rest = v ** (i - 1)
    if side == "right":
        t = a.data.reshape(rest, v, rest, v)
        data = sum(t[:, r, :, r] for r in range(v))
    elif side == "left":
        t = a.data.reshape(v, rest, v, rest)
        data = sum(t[r, :, r, :] for r in range(v))
    else:
        raise ValueError(f"side must be 'left' or 'right', not {side!r}")
    return LinearMap(v, i - 1, i - 1, np.asarray(data).reshape(rest, rest))


def full_trace(a: LinearMap):
    if a.dom != a.cod:
        raise ArityError("trace needs an endomorphism")
    diag = a.data.diagonal()
    if a.exact:
        return sum(diag, ZERO)
    return complex(np.sum(diag))


def permutation_map(v: int, perm: Sequence[int], exact: bool = False) -> LinearMap:
    """Map sending tensor factor ``i`` to position ``perm[i]``."""
    n = len(perm)
    if sorted(perm) != list(range(n)):
        raise ValueError(f"{perm} is not a permutation")
    size = v**n
    data = _zeros((size, size), exact)
    for flat in range(size):
        idx = np.unravel_index(flat, (v,) * n) if n else ()
        out = [0] * n
        for i, p in enumerate(perm):
            out[p] = idx[i]
        row = int(np.ravel_multi_index(out, (v,) * n)) if n else 0
        data[row, flat] = ONE if exact else 1.0
    return LinearMap(v, n, n, data)


def twist_map(v: int, n: int, exact: bool = False) -> LinearMap:
    """Order reversal ``e_{i_1}(x)...(x)e_{i_n} -> e_{i_n}(x)...(x)e_{i_1}``."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return permutation_map(v, list(reversed(range(n))), exact)


def inverse(a: LinearMap) -> LinearMap:
    if a.dom != a.cod:
        raise ArityError("only endomorphisms are invertible here")
    if a.exact:
        from .linalg import exact_inverse

        data = exact_inverse(a.data)
    else:
        data = np.linalg.inv(a.data)
    return LinearMap(a.v, a.dom, a.cod, data)


def embed(a: LinearMap, left: int, right: int) -> LinearMap:
    """``id_left (x) a (x) id_right``."""
    parts = []
    if left:
        parts.append(identity(a.v, left, a.exact))
    parts.append(a)
    if right:
        parts.append(identity(a.v, right, a.exact))
    return tensor_product(*parts)


def stack(maps: Iterable[LinearMap]) -> LinearMap:
    """Compose a bottom-to-top sequence: ``stack([f, g]) = g o f``."""
    maps = list(maps)
    return reduce(lambda acc, m: compose(m, acc), maps[1:], maps[0])
