import json
import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _support import random_exact_matrix
from kirbyrep.scalars import EXACT, FLOAT, Engine
from kirbyrep.smatrix_io import SMatrixFormatError, dump_smatrix, load_smatrix
from kirbyrep.tensor import LinearMap, twist_map


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 3), st.integers(0, 2**32 - 1))
def test_exact_round_trip_is_bit_exact(v, seed):
    s = LinearMap(v, 2, 2, random_exact_matrix(random.Random(seed), v * v, v * v))
    text = dump_smatrix(s, EXACT)
    f = load_smatrix(text)
    assert f.engine == EXACT
    assert all(a == b for a, b in zip(f.S.data.reshape(-1), s.data.reshape(-1)))
    assert dump_smatrix(f.S, f.engine) == text


@settings(max_examples=30, deadline=None)
@given(st.lists(st.complex_numbers(allow_nan=False, allow_infinity=False, max_magnitude=1e12),
                min_size=16, max_size=16))
def test_float_round_trip_is_bit_exact(values):
    s = LinearMap(2, 2, 2, np.array(values, dtype=complex).reshape(4, 4))
    engine = Engine("float", 1e-7)
    f = load_smatrix(dump_smatrix(s, engine))
    assert np.array_equal(f.S.data, s.data)
    assert f.engine == engine


def test_mixed_entries_and_defaults():
    text = json.dumps({"dim": 1, "entries": [[0.5, -1.0]]})
    f = load_smatrix(text)
    assert f.engine == FLOAT and f.S.data[0, 0] == complex(0.5, -1)
    f = load_smatrix(json.dumps({"dim": 1, "engine": "exact", "entries": [[0.5, 0]]}))
    assert str(f.S.data[0, 0]) == "1/2"
    f = load_smatrix(json.dumps({"dim": 1, "entries": ["1/2+i"]}))
    assert f.S.data[0, 0] == complex(0.5, 1)


@pytest.mark.parametrize("obj,message", [
    ([], "top level"),
    ({"dim": 0, "entries": []}, "'dim'"),
    ({"dim": 1, "entries": []}, "1 values"),
    ({"dim": 1, "entries": ["x"]}, "entry 0"),
    ({"dim": 1, "entries": [[1, 2, 3]]}, "entry 0"),
    ({"dim": 1, "entries": ["1"], "engine": "decimal"}, "'engine'"),
    ({"dim": 1, "entries": ["1"], "epsilon": -1}, "'epsilon'"),
    ({"dim": 1, "entries": ["1"], "colour": "red"}, "unknown fields"),
])
def test_malformed_files(obj, message):
    with pytest.raises(SMatrixFormatError, match=message):
        load_smatrix(json.dumps(obj))


def test_invalid_json_reports_position():
    with pytest.raises(SMatrixFormatError, match="line 2"):
        load_smatrix('{"dim": 1,\n "entries": [}')


def test_dump_rejects_wrong_arity():
    with pytest.raises(ValueError):
        dump_smatrix(twist_map(2, 1, True), EXACT)
