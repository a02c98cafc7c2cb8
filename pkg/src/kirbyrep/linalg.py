"""Nullspaces, exact inversion and minimal polynomials for :class:`LinearMap`.

Float engine: rank-revealing SVD, singular values at or below
``epsilon * sigma_max`` count as zero.  Exact engine: fraction-free Gaussian
elimination over the Gaussian integers on sparse rows.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

import numpy as np
import scipy.linalg
import scipy.sparse as sp

from .scalars import FLOAT, Engine, GaussianRational, as_gaussian
from .tensor import ONE, ZERO, LinearMap, ArityError, identity, max_abs

__all__ = [
    "Nullspace",
    "SparseRows",
    "nullspace",
    "kernel_vectors",
    "exact_inverse",
    "minimal_polynomial",
    "poly_eval",
]

SparseRows = list  # list[dict[int, scalar]]
Block = Union[np.ndarray, sp.spmatrix, SparseRows]


@dataclass(frozen=True)
class Nullspace:
    dimension: int
    basis: list[LinearMap]


# --------------------------------------------------------------------------
# exact fraction-free elimination over Z[i]

GInt = tuple  # (re, im) pair of Python ints


def _gmul(a: GInt, b: GInt) -> GInt:
    return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])


def _row_to_gint(row: dict) -> dict[int, GInt]:
    """Scale a row of Gaussian rationals to Gaussian integers (drops zeros)."""
    items = [(c, as_gaussian(x)) for c, x in row.items()]
    items = [(c, x) for c, x in items if x]
    if not items:
        return {}
    den = 1
    for _, x in items:
        den = math.lcm(den, x.re.denominator, x.im.denominator)
    out = {}
    for c, x in items:
        out[c] = (int(x.re * den), int(x.im * den))
    return _primitive(out)


def _primitive(row: dict[int, GInt]) -> dict[int, GInt]:
    g = 0
    for a, b in row.values():
        g = math.gcd(g, a, b)
        if g == 1:
            return row
    if g > 1:
        return {c: (a // g, b // g) for c, (a, b) in row.items()}
    return row


def _combine(p: GInt, row: dict, q: GInt, other: dict) -> dict:
    """``p*row - q*other`` with zero entries removed."""
    out = {c: _gmul(p, x) for c, x in row.items()}
    for c, y in other.items():
        qy = _gmul(q, y)
        if c in out:
            a = out[c]
            s = (a[0] - qy[0], a[1] - qy[1])
            if s == (0, 0):
                del out[c]
            else:
                out[c] = s
        else:
            out[c] = (-qy[0], -qy[1])
    return out


class _FractionFreeEliminator:
    """Incremental reduced echelon form over Z[i], one sparse row at a time."""

    def __init__(self, ncols: int):
        self.ncols = ncols
        self.pivots: dict[int, dict[int, GInt]] = {}

    def add(self, row: dict[int, GInt]) -> bool:
        for c in [c for c in row if c in self.pivots]:
            if c not in row:
                continue
            prow = self.pivots[c]
            row = _combine(prow[c], row, row[c], prow)
        if not row:
            return False
        row = _primitive(row)
        col = min(row)
        for pc, prow in list(self.pivots.items()):
            if col in prow:
                self.pivots[pc] = _primitive(_combine(row[col], prow, prow[col], row))
        self.pivots[col] = row
        return True

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def kernel(self) -> list[dict[int, GaussianRational]]:
        free = [c for c in range(self.ncols) if c not in self.pivots]
        by_free: dict[int, list[int]] = {f: [] for f in free}
        for pc, prow in self.pivots.items():
            for c in prow:
                if c != pc:
                    by_free[c].append(pc)
        vectors = []
        for f in free:
            vec = {f: ONE}
            for pc in by_free[f]:
                prow = self.pivots[pc]
                p = GaussianRational(*prow[pc])
                vec[pc] = -GaussianRational(*prow[f]) / p
            vectors.append(vec)
        return vectors


def _iter_exact_rows(block: Block) -> Iterable[dict]:
    if isinstance(block, list):
        yield from block
    elif sp.issparse(block):
        csr = block.tocsr()
        for i in range(csr.shape[0]):
            lo, hi = csr.indptr[i], csr.indptr[i + 1]
            yield {int(c): x for c, x in zip(csr.indices[lo:hi], csr.data[lo:hi])}
    else:
        arr = np.asarray(block, dtype=object)
        for r in arr:
            yield {c: x for c, x in enumerate(r) if x}


def _check_width(blocks: Sequence, ncols: int) -> None:
    for b in blocks:
        if isinstance(b, list):
            if any(c < 0 or c >= ncols for row in b for c in row):
                raise ValueError("constraint refers to a column outside the unknown")
        elif b.shape[-1] != ncols:
            raise ValueError(f"constraint block has {b.shape[-1]} columns, unknown has {ncols}")


def _exact_kernel(blocks: Sequence[Block], ncols: int) -> list[np.ndarray]:
    elim = _FractionFreeEliminator(ncols)
    for block in blocks:
        for row in _iter_exact_rows(block):
            g = _row_to_gint(row)
            if g:
                elim.add(g)
        if elim.rank == ncols:
            break
    out = []
    for vec in elim.kernel():
        arr = np.empty(ncols, dtype=object)
        arr.fill(ZERO)
        for c, x in vec.items():
            arr[c] = x
        out.append(arr)
    return out


# --------------------------------------------------------------------------
# float: rank-revealing SVD, one constraint block at a time

def _as_float_block(block: Block, ncols: int):
    if isinstance(block, list):
        rows, cols, vals = [], [], []
        for i, row in enumerate(block):
            for c, x in row.items():
                rows.append(i)
                cols.append(c)
                vals.append(complex(x))
        return sp.csr_matrix((vals, (rows, cols)), shape=(len(block), ncols), dtype=complex)
    if sp.issparse(block):
        return block.astype(complex).tocsr()
    arr = np.asarray(block)
    if arr.dtype == object:
        arr = np.vectorize(complex, otypes=[complex])(arr) if arr.size else arr.astype(complex)
    return np.asarray(arr, dtype=complex).reshape(-1, arr.shape[-1])


def _sigma_max(blocks: list, ncols: int) -> float:
    """Largest singular value of the stacked constraint matrix."""
    gram = None
    for b in blocks:
        g = (b.conj().T @ b)
        gram = g if gram is None else gram + g
    if gram is None:
        return 0.0
    if sp.issparse(gram):
        if ncols <= 2048:
            gram = gram.toarray()
        else:
            from scipy.sparse.linalg import eigsh

            lam = eigsh(gram, k=1, which="LA", return_eigenvectors=False)
            return float(math.sqrt(max(lam[0].real, 0.0)))
    lam = np.linalg.eigvalsh(np.asarray(gram))
    return float(math.sqrt(max(lam[-1], 0.0)))


def _float_kernel(blocks: Sequence[Block], ncols: int, eps: float) -> list[np.ndarray]:
    fblocks = [_as_float_block(b, ncols) for b in blocks]
    fblocks = [b for b in fblocks if b.shape[0]]
    smax = _sigma_max(fblocks, ncols)
    if smax == 0.0:
        return list(np.eye(ncols, dtype=complex))
    tol = eps * smax
    basis = np.eye(ncols, dtype=complex)
    for b in fblocks:
        if basis.shape[1] == 0:
            break
        m = np.asarray(b @ basis)
        if m.shape[0] > m.shape[1]:
            m = scipy.linalg.qr(m, mode="r")[0][: m.shape[1]]
        _, s, vh = np.linalg.svd(m, full_matrices=True)
        rank = int(np.sum(s > tol))
        basis = basis @ vh[rank:].conj().T
    return [basis[:, j] for j in range(basis.shape[1])]


# --------------------------------------------------------------------------

def kernel_vectors(constraints, ncols: int, engine: Engine = FLOAT) -> list[np.ndarray]:
    """Kernel of the stacked constraint blocks as a list of coefficient vectors."""
    if ncols <= 0:
        raise ValueError("empty unknown shape")
    blocks = _as_blocks(constraints)
    _check_width(blocks, ncols)
    if engine.exact:
        return _exact_kernel(blocks, ncols)
    return _float_kernel(blocks, ncols, engine.epsilon)


def _as_blocks(constraints) -> list:
    if isinstance(constraints, np.ndarray) or sp.issparse(constraints):
        return [constraints]
    constraints = list(constraints)
    if constraints and isinstance(constraints[0], dict):
        return [constraints]
    return constraints


def nullspace(constraints, v: int, dom: int, cod: int, engine: Engine = FLOAT) -> Nullspace:
    """Solve homogeneous linear constraints on an unknown ``dom -> cod`` map.

    ``constraints`` is a matrix (dense, scipy sparse, or a list of sparse
    ``{column: value}`` rows) or a list of such blocks.  Column ``c`` is the
    coefficient at flat row-major position ``c`` of the unknown's
    ``v**cod x v**dom`` array.
    """
    if v < 1 or dom < 0 or cod < 0:
        raise ValueError("empty unknown shape")
    ncols = v ** (dom + cod)
    vectors = kernel_vectors(constraints, ncols, engine)
    basis = [LinearMap(v, dom, cod, vec.reshape(v**cod, v**dom)) for vec in vectors]
    return Nullspace(len(basis), basis)


def exact_inverse(data: np.ndarray) -> np.ndarray:
    """Gauss-Jordan inverse of a square object array of Gaussian rationals."""
    n = data.shape[0]
    if data.shape != (n, n):
        raise ArityError("inverse needs a square matrix")
    a = [[as_gaussian(x) for x in row] for row in data]
    inv = [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]
    for col in range(n):
        piv = next((r for r in range(col, n) if a[r][col]), None)
        if piv is None:
            raise ZeroDivisionError("matrix is singular")
        a[col], a[piv] = a[piv], a[col]
        inv[col], inv[piv] = inv[piv], inv[col]
        p = a[col][col].reciprocal()
        a[col] = [x * p for x in a[col]]
        inv[col] = [x * p for x in inv[col]]
        for r in range(n):
            f = a[r][col]
            if r != col and f:
                a[r] = [x - f * y for x, y in zip(a[r], a[col])]
                inv[r] = [x - f * y for x, y in zip(inv[r], inv[col])]
    out = np.empty((n, n), dtype=object)
    for i in range(n):
        for j in range(n):
            out[i, j] = inv[i][j]
    return out


# --------------------------------------------------------------------------
# minimal polynomial

def poly_eval(coeffs: Sequence, a: LinearMap) -> LinearMap:
    """Evaluate ``sum_j coeffs[j] * A**j`` (ascending coefficients) by Horner."""
    if a.dom != a.cod:
        raise ArityError("polynomial evaluation needs an endomorphism")
    result = identity(a.v, a.dom, a.exact).scale(0)
    ident = identity(a.v, a.dom, a.exact)
    for c in reversed(list(coeffs)):
        result = (a @ result) + ident.scale(c)
    return result


def _exact_minpoly(a: LinearMap) -> list[GaussianRational]:
    size = a.data.shape[0]
    powers = [identity(a.v, a.dom, True).data]
    while True:
        d = len(powers) - 1
        cols = [p.reshape(-1) for p in powers]
        rows = [{j: cols[j][i] for j in range(d + 1) if cols[j][i]} for i in range(size * size)]
        ker = _exact_kernel([rows], d + 1)
        if ker:
            vec = ker[0]
            lead = vec[d]
            return [x / lead for x in vec]
        powers.append(a.data @ powers[-1])


def _float_minpoly(a: LinearMap, eps: float) -> tuple[list[complex], float]:
    """Krylov dependence test on vec(I), vec(B), vec(B^2), ... with ``B = A/|A|``.

    Returns ascending monic coefficients and the relative residual at which
    dependence was declared.
    """
    size = a.data.shape[0]
    norm = max_abs(a.data) or 1.0
    b = a.data / norm
    vecs = [np.eye(size, dtype=complex).reshape(-1)]
    q = np.zeros((size * size, 0), dtype=complex)
    current = np.eye(size, dtype=complex)
    for d in range(size + 1):
        x = current.reshape(-1)
        r = x - q @ (q.conj().T @ x)
        r = r - q @ (q.conj().T @ r)
        rel = np.linalg.norm(r) / max(np.linalg.norm(x), 1e-300)
        if d > 0 and rel <= eps:
            basis = np.stack(vecs[:d], axis=1)
            c, *_ = np.linalg.lstsq(basis, x, rcond=None)
            coeffs = [-cj for cj in c] + [1.0]
            # undo the normalisation: p_B(X) = p_A(norm X) / norm^d
            coeffs = [coeffs[j] * norm ** (d - j) for j in range(d + 1)]
            return [complex(x) for x in coeffs], rel
        q = np.concatenate([q, (r / np.linalg.norm(r))[:, None]], axis=1)
        current = b @ current
        vecs.append(current.reshape(-1))
    raise RuntimeError("Krylov sequence failed to terminate")  # pragma: no cover


def _rationalize(a: LinearMap, eps: float, max_den: int = 10**6) -> LinearMap | None:
    def conv(z):
        z = complex(z)
        return GaussianRational(Fraction(z.real).limit_denominator(max_den),
                                Fraction(z.imag).limit_denominator(max_den))

    guess = LinearMap(a.v, a.dom, a.cod, np.vectorize(conv, otypes=[object])(a.data))
    if guess.to_float().residual(a) <= eps:
        return guess
    return None


def minimal_polynomial(a: LinearMap, engine: Engine | None = None) -> list:
    """Lowest-degree monic ``P`` with ``P(A) = 0``, as ascending coefficients.

    ``[c_0, c_1, ..., 1]`` means ``c_0 + c_1 X + ... + X^d``.  Exact maps are
    handled exactly; float maps use a Krylov dependence test, falling back to
    exact arithmetic on a rationalised copy when the test is borderline.
    """
    if a.dom != a.cod:
        raise ArityError("minimal polynomial needs a square map")
    if engine is None:
        engine = Engine("exact") if a.exact else FLOAT
    if engine.exact:
        return _exact_minpoly(a.to_exact())
    af = a.to_float()
    eps = engine.epsilon
    coeffs, rel = _float_minpoly(af, eps)
    if rel > eps * 1e-3:
        # borderline: confirm exactly if the map is (numerically) rational
        guess = _rationalize(af, eps)
        if guess is not None:
            return [complex(c) for c in _exact_minpoly(guess)]
    return coeffs
