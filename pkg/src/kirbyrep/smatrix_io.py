"""JSON S-matrix files.

``{"dim": 2, "engine": "exact", "entries": ["1", "0", ...]}`` with ``dim**4``
row-major entries, each a ``[re, im]`` float pair or an exact string such as
``"3/4"``, ``"-i"`` or ``"1/2+3/4i"``; ``epsilon`` is optional.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .scalars import Engine, as_gaussian, format_scalar, parse_gaussian
from .tensor import LinearMap

__all__ = ["SMatrixFile", "SMatrixFormatError", "load_smatrix", "dump_smatrix", "read_smatrix"]


class SMatrixFormatError(ValueError):
    pass


@dataclass(frozen=True)
class SMatrixFile:
    S: LinearMap
    engine: Engine


def _entry(x, exact: bool, index: int):
    if isinstance(x, str):
        try:
            g = parse_gaussian(x)
        except ValueError:
            raise SMatrixFormatError(f"entry {index}: malformed exact scalar {x!r}") from None
        return g if exact else complex(g)
    if (isinstance(x, list) and len(x) == 2
            and all(isinstance(t, (int, float)) and not isinstance(t, bool) for t in x)):
        z = complex(float(x[0]), float(x[1]))
        return as_gaussian(z) if exact else z
    if isinstance(x, int) and not isinstance(x, bool):
        return as_gaussian(x) if exact else complex(x)
    raise SMatrixFormatError(f"entry {index}: expected [re, im] or a rational string, got {x!r}")


def load_smatrix(text: str) -> SMatrixFile:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as e:
        raise SMatrixFormatError(f"line {e.lineno}, column {e.colno}: {e.msg}") from None
    if not isinstance(obj, dict):
        raise SMatrixFormatError("top level must be an object")
    unknown = set(obj) - {"dim", "entries", "engine", "epsilon"}
    if unknown:
        raise SMatrixFormatError(f"unknown fields {sorted(unknown)}")
    v = obj.get("dim")
    if not isinstance(v, int) or isinstance(v, bool) or v < 1:
        raise SMatrixFormatError("'dim' must be a positive integer")
    kind = obj.get("engine", "float")
    if kind not in ("float", "exact"):
        raise SMatrixFormatError("'engine' must be 'float' or 'exact'")
    eps = obj.get("epsilon", 1e-9)
    if not isinstance(eps, (int, float)) or isinstance(eps, bool) or eps < 0:
        raise SMatrixFormatError("'epsilon' must be a nonnegative number")
    engine = Engine(kind, 0.0 if kind == "exact" else float(eps))
    entries = obj.get("entries")
    if not isinstance(entries, list) or len(entries) != v**4:
        raise SMatrixFormatError(f"'entries' must list {v**4} values")
    exact = engine.exact
    values = [_entry(x, exact, i) for i, x in enumerate(entries)]
    data = np.empty(len(values), dtype=object if exact else complex)
    data[:] = values
    return SMatrixFile(LinearMap(v, 2, 2, data.reshape(v * v, v * v)), engine)


def read_smatrix(path) -> SMatrixFile:
    with open(path, encoding="utf-8") as fh:
        return load_smatrix(fh.read())


def dump_smatrix(S: LinearMap, engine: Engine) -> str:
    """Exact maps are written as rational strings, float maps as ``[re, im]`` pairs."""
    if (S.dom, S.cod) != (2, 2):
        raise ValueError("an S-matrix file holds a map V(x)V -> V(x)V")
    flat = S.data.reshape(-1)
    if engine.exact:
        entries = [format_scalar(as_gaussian(x)) for x in flat]
    else:
        entries = [[float(complex(x).real), float(complex(x).imag)] for x in flat]
    obj = {"dim": S.v, "engine": engine.kind, "entries": entries}
    if not engine.exact:
        obj["epsilon"] = engine.epsilon
    return json.dumps(obj, indent=1, ensure_ascii=False) + "\n"
