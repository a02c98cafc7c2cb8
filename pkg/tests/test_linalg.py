import random
from fractions import Fraction

import numpy as np
import pytest
import scipy.sparse as sp
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from _support import random_exact_matrix
from kirbyrep.linalg import exact_inverse, kernel_vectors, minimal_polynomial, nullspace, poly_eval
from kirbyrep.scalars import EXACT, FLOAT, GaussianRational
from kirbyrep.tensor import LinearMap, identity, twist_map
from kirbyrep.families import dim2_family


def to_sympy(data):
    return sympy.Matrix(data.shape[0], data.shape[1],
                        lambda i, j: sympy.Rational(data[i, j].re.numerator, data[i, j].re.denominator)
                        + sympy.I * sympy.Rational(data[i, j].im.numerator, data[i, j].im.denominator))


def low_rank_exact(rng, rows, cols, rank):
    left = random_exact_matrix(rng, rows, rank, -2, 2)
    right = random_exact_matrix(rng, rank, cols, -2, 2)
    return left @ right


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 5), st.integers(1, 6), st.integers(0, 4), st.integers(0, 2**32 - 1))
def test_exact_kernel_dimension_matches_sympy_rank(rows, cols, rank, seed):
    rng = random.Random(seed)
    m = low_rank_exact(rng, rows, cols, min(rank, rows, cols)) if rank else \
        np.array([[GaussianRational() for _ in range(cols)] for _ in range(rows)], dtype=object)
    vecs = kernel_vectors(m, cols, EXACT)
    assert len(vecs) == cols - to_sympy(m).rank()
    for vec in vecs:
        assert all(x == 0 for x in m @ vec)
    if vecs:
        assert to_sympy(np.stack(vecs, axis=1)).rank() == len(vecs)


def test_float_kernel_matches_numpy_rank():
    rng = np.random.default_rng(0)
    for rows, cols, rank in [(6, 8, 3), (20, 10, 7), (5, 5, 5), (3, 9, 0)]:
        m = rng.normal(size=(rows, rank)) @ rng.normal(size=(rank, cols)) if rank else np.zeros((rows, cols))
        vecs = kernel_vectors(m, cols, FLOAT)
        assert len(vecs) == cols - np.linalg.matrix_rank(m)
        for vec in vecs:
            assert np.max(np.abs(m @ vec)) <= 1e-9


def test_block_and_sparse_inputs_agree():
    rng = np.random.default_rng(1)
    a = rng.normal(size=(3, 6))
    b = rng.normal(size=(2, 6))
    dict_rows = [{c: b[r, c] for c in range(6)} for r in range(2)]
    stacked = len(kernel_vectors(np.vstack([a, b]), 6, FLOAT))
    assert len(kernel_vectors([sp.csr_matrix(a), dict_rows], 6, FLOAT)) == stacked == 1


def test_width_mismatch_is_rejected():
    with pytest.raises(ValueError):
        kernel_vectors([np.ones((2, 3))], 4, FLOAT)
    with pytest.raises(ValueError):
        kernel_vectors([{5: 1}], 4, EXACT)


def test_nullspace_shapes_basis_as_maps():
    # maps X: V -> V (v=2) with X = X^t
    rows = [{0 * 2 + 1: 1, 1 * 2 + 0: -1}]
    ns = nullspace(rows, 2, 1, 1, EXACT)
    assert ns.dimension == 3
    assert all(m.T.equals(m) for m in ns.basis)


def test_exact_inverse_matches_sympy():
    rng = random.Random(3)
    for n in (1, 2, 4):
        while True:
            m = random_exact_matrix(rng, n, n)
            if to_sympy(m).det() != 0:
                break
        inv = exact_inverse(m)
        assert to_sympy(inv) == to_sympy(m).inv()
    with pytest.raises(ZeroDivisionError):
        exact_inverse(np.array([[GaussianRational(1), GaussianRational(2)],
                                [GaussianRational(2), GaussianRational(4)]], dtype=object))


def check_minpoly_exact(a: LinearMap):
    coeffs = minimal_polynomial(a, EXACT)
    assert coeffs[-1] == 1
    assert poly_eval(coeffs, a).is_zero()
    x = sympy.Symbol("x")
    p = sum(sympy.Rational(c.re.numerator, c.re.denominator) * x**j
            + sympy.I * sympy.Rational(c.im.numerator, c.im.denominator) * x**j
            for j, c in enumerate(coeffs))
    char = to_sympy(a.data).charpoly(x).as_expr()
    assert sympy.rem(sympy.expand(char), sympy.expand(p), x) == 0
    # no lower-degree annihilator: powers I..A^(d-1) are independent
    d = len(coeffs) - 1
    powers = [identity(a.v, a.dom, True).data]
    for _ in range(d - 1):
        powers.append(a.data @ powers[-1])
    flat = np.stack([p_.reshape(-1) for p_ in powers], axis=1)
    assert to_sympy(flat).rank() == d
    return coeffs


def test_minimal_polynomial_known_cases():
    assert check_minpoly_exact(twist_map(2, 2, True)) == [-1, 0, 1]
    assert check_minpoly_exact(identity(3, 1, True)) == [-1, 1]
    s = dim2_family((2, 1, Fraction(1, 4)), exact=True)
    assert check_minpoly_exact(s) == [Fraction(1, 2), Fraction(-1, 4), -2, 1]


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_minimal_polynomial_random_exact(seed):
    rng = random.Random(seed)
    # block structure makes derogatory matrices common
    base = random_exact_matrix(rng, 2, 2, -2, 2)
    data = np.empty((4, 4), dtype=object)
    data[:] = GaussianRational()
    data[:2, :2] = base
    data[2:, 2:] = base if rng.random() < 0.5 else random_exact_matrix(rng, 2, 2, -2, 2)
    check_minpoly_exact(LinearMap(4, 1, 1, data))


def test_float_minimal_polynomial_agrees_with_exact():
    s = dim2_family((2, 1, Fraction(1, 4)), exact=True)
    exact = [complex(c) for c in minimal_polynomial(s, EXACT)]
    approx = minimal_polynomial(s.to_float(), FLOAT)
    assert len(approx) == len(exact)
    assert np.allclose(approx, exact, atol=1e-9)
    rng = np.random.default_rng(4)
    q = rng.normal(size=(5, 5))
    m = LinearMap(5, 1, 1, q @ np.diag([1, 1, 2, 3, 3]) @ np.linalg.inv(q))
    coeffs = minimal_polynomial(m, FLOAT)
    assert len(coeffs) - 1 == 3
    assert max(abs(x) for x in poly_eval(coeffs, m).data.reshape(-1)) <= 1e-6
