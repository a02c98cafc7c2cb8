import itertools
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _support import brute_kron, random_exact_matrix
from kirbyrep.tensor import (
    ArityError,
    LinearMap,
    compose,
    embed,
    from_matrix,
    full_trace,
    identity,
    inverse,
    partial_trace,
    permutation_map,
    scalar,
    tensor_product,
    twist_map,
)


def random_map(rng, v, dom, cod, exact):
    if exact:
        return LinearMap(v, dom, cod, random_exact_matrix(rng, v**cod, v**dom))
    data = np.array([[complex(rng.uniform(-1, 1), rng.uniform(-1, 1)) for _ in range(v**dom)]
                     for _ in range(v**cod)]).reshape(v**cod, v**dom)
    return LinearMap(v, dom, cod, data)


def naive_partial_trace(a: LinearMap, side: str) -> LinearMap:
    v, n = a.v, a.dom
    t = a.tensor()
    size = v ** (n - 1)
    out = np.zeros((size, size), dtype=a.data.dtype)
    if a.exact:
        out[:] = 0 * a.data[0, 0]
    for k in itertools.product(range(v), repeat=n - 1):
        for j in itertools.product(range(v), repeat=n - 1):
            acc = 0
            for r in range(v):
                if side == "right":
                    acc = acc + t[k + (r,) + j + (r,)]
                else:
                    acc = acc + t[(r,) + k + (r,) + j]
            out[np.ravel_multi_index(k, (v,) * (n - 1)) if k else 0,
                np.ravel_multi_index(j, (v,) * (n - 1)) if j else 0] = acc
    return LinearMap(v, n - 1, n - 1, out)


@pytest.mark.parametrize("exact", [True, False])
def test_tensor_product_matches_brute_force(exact):
    rng = random.Random(1)
    for v, (d1, c1, d2, c2) in itertools.product([1, 2, 3], [(1, 1, 1, 1), (0, 2, 1, 0), (2, 1, 1, 2)]):
        a = random_map(rng, v, d1, c1, exact)
        b = random_map(rng, v, d2, c2, exact)
        got = tensor_product(a, b)
        assert (got.dom, got.cod) == (d1 + d2, c1 + c2)
        ref = brute_kron(a.data, b.data)
        if exact:
            assert all(x == y for x, y in zip(got.data.reshape(-1), ref.reshape(-1)))
        else:
            assert np.allclose(got.data, ref.astype(complex))


def test_exact_compose_matches_naive_products():
    rng = random.Random(2)
    a = random_map(rng, 2, 2, 1, True)
    b = random_map(rng, 2, 1, 2, True)
    got = compose(a, b)
    for i in range(2):
        for j in range(2):
            assert got.data[i, j] == sum((a.data[i, r] * b.data[r, j] for r in range(4)), 0 * a.data[0, 0])


def test_compose_arity_error():
    with pytest.raises(ArityError):
        compose(identity(2, 1), identity(2, 2))


@pytest.mark.parametrize("side", ["right", "left"])
@pytest.mark.parametrize("exact", [True, False])
def test_partial_trace_matches_coefficient_formula(side, exact):
    rng = random.Random(3)
    for v, n in [(2, 2), (3, 2), (2, 3)]:
        a = random_map(rng, v, n, n, exact)
        got = partial_trace(a, side)
        ref = naive_partial_trace(a, side)
        assert got.residual(ref) <= 1e-12


@settings(max_examples=25, deadline=None)
@given(st.integers(1, 3), st.integers(0, 2), st.integers(0, 2), st.integers(0, 2**32 - 1))
def test_full_trace_is_cyclic(v, n, m, seed):
    rng = random.Random(seed)
    a = random_map(rng, v, n, m, True)
    b = random_map(rng, v, m, n, True)
    assert full_trace(compose(a, b)) == full_trace(compose(b, a))


def test_twist_and_permutations():
    for v in (1, 2, 3):
        t = twist_map(v, 2, True)
        assert compose(t, t).equals(identity(v, 2, True))
        for i, j in itertools.product(range(v), repeat=2):
            assert t.entry((j, i), (i, j)) == 1
    rng = random.Random(4)
    a, b = random_map(rng, 2, 1, 1, True), random_map(rng, 2, 1, 1, True)
    t = twist_map(2, 2, True)
    assert compose(compose(t, tensor_product(a, b)), t).equals(tensor_product(b, a))
    p = permutation_map(2, [1, 2, 0], True)
    q = permutation_map(2, [2, 0, 1], True)
    assert compose(p, q).equals(identity(2, 3, True))


def test_inverse_exact_and_singular():
    m = from_matrix(2, 1, 1, [[1, 2], [3, 4]], exact=True)
    assert compose(m, inverse(m)).equals(identity(2, 1, True))
    with pytest.raises(ZeroDivisionError):
        inverse(from_matrix(2, 1, 1, [[1, 2], [2, 4]], exact=True))


def test_embed_is_padding_by_identities():
    rng = random.Random(5)
    a = random_map(rng, 2, 2, 1, True)
    got = embed(a, 1, 2)
    ref = tensor_product(identity(2, 1, True), a, identity(2, 2, True))
    assert got.equals(ref)


def test_linear_map_is_read_only_and_checks_shape():
    m = identity(2, 1)
    with pytest.raises(ValueError):
        m.data[0, 0] = 5
    with pytest.raises(ArityError):
        LinearMap(2, 1, 1, np.zeros((3, 3)))


def test_scalar_map_and_engines():
    s = scalar(3, 2, exact=True)
    assert (s.dom, s.cod) == (0, 0) and s.scalar_value() == 3
    m = from_matrix(2, 1, 1, [[1, 2], [3, 4]], exact=True)
    assert m.to_float().to_exact().equals(m)
    assert m.to_float().residual(m) == 0.0
