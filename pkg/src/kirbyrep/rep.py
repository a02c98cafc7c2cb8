"""The representation functor: evaluate tangle words through an S-matrix.

Generators map to ``id_V``, ``S``, ``S^-1``, the cap ``b(1) = sum_i e_i (x) e_i``
and the cup ``d(e_i (x) e_j) = delta_ij``.  :func:`certify_smatrix` checks a
candidate against the conditions that make this assignment an invariant of
framed tangles.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .diagram import FramedLink, Gen, TangleWord, link_to_word, rotate_pi
from .scalars import FLOAT, Engine
from .tensor import (
    ONE,
    LinearMap,
    _zeros,
    compose,
    embed,
    exact_bilinear,
    identity,
    inverse,
    max_abs,
    partial_trace,
    twist_map,
)

__all__ = [
    "SMatrix",
    "Check",
    "CertReport",
    "build_cup_cap",
    "evaluate",
    "certify_smatrix",
    "link_invariant",
    "rotation_transpose_check",
    "sliding_residuals",
    "ybe_residual",
    "index_rotation_residual",
]


def build_cup_cap(v: int, exact: bool = False) -> tuple[LinearMap, LinearMap]:
    """Standard-basis cap ``b: 1 -> V(x)V`` and cup ``d: V(x)V -> 1``."""
    if v < 1:
        raise ValueError("dimension must be positive")
    data = _zeros((v * v, 1), exact)
    for i in range(v):
        data[i * v + i, 0] = ONE if exact else 1.0
    b = LinearMap(v, 0, 2, data)
    return b, b.T


@dataclass(frozen=True, eq=False)
class SMatrix:
    """An S-matrix together with its inverse and the cup/cap pair.

    Values returned by :func:`certify_smatrix` have ``certified=True``.
    :meth:`unchecked` wraps any invertible candidate for experimentation.
    """

    v: int
    S: LinearMap
    S_inv: LinearMap
    b: LinearMap
    d: LinearMap
    engine: Engine = FLOAT
    certified: bool = False

    @classmethod
    def unchecked(cls, S: LinearMap, engine: Engine = FLOAT) -> "SMatrix":
        S = S.with_engine(engine)
        if (S.dom, S.cod) != (2, 2):
            raise ValueError("an S-matrix is an endomorphism of V (x) V")
        b, d = build_cup_cap(S.v, S.exact)
        return cls(S.v, S, inverse(S), b, d, engine, False)

    @property
    def exact(self) -> bool:
        return self.engine.exact

    def generator(self, g: Gen) -> LinearMap:
        if g is Gen.ID:
            return identity(self.v, 1, self.exact)
        return {Gen.XPOS: self.S, Gen.XNEG: self.S_inv, Gen.CAP: self.b, Gen.CUP: self.d}[g]

    def curl(self, sign: int = 1) -> LinearMap:
        """``rho(tw^{+-1})``, the right partial trace of ``S^{+-1}``."""
        return partial_trace(self.S if sign > 0 else self.S_inv, "right")


# --------------------------------------------------------------------------
# evaluation

def _apply(state: np.ndarray, gen: np.ndarray, pos: int, a: int, c: int) -> np.ndarray:
    """Contract a ``(c <- a)`` generator tensor into state axes ``pos..pos+a-1``."""
    axes = (list(range(c, c + a)), list(range(pos, pos + a)))
    if state.dtype == object:
        out = exact_bilinear(lambda x, y: np.tensordot(x, y, axes=axes), gen, state)
    else:
        out = np.tensordot(gen, state, axes=axes)
    return np.moveaxis(out, list(range(c)), list(range(pos, pos + c)))


def evaluate(word: TangleWord, sm: SMatrix) -> LinearMap:
    """``rho_S(word)`` as a ``v**cod x v**dom`` map, slices applied bottom to top."""
    v = sm.v
    exact = sm.exact
    width = word.dom
    cols = v**width
    state = identity(v, width, exact).data.reshape((v,) * width + (cols,))
    tensors = {g: sm.generator(g).tensor() for g in Gen if g is not Gen.ID}
    for sl in word.slices:
        pos = 0
        for g in sl:
            if g is Gen.ID:
                pos += 1
                continue
            state = _apply(state, tensors[g], pos, g.dom, g.cod)
            pos += g.cod
        width = pos
    return LinearMap(v, word.dom, word.cod, np.asarray(state).reshape(v**word.cod, cols))


def link_invariant(link: FramedLink, sm: SMatrix):
    """Value of the closed diagram of ``link``; 1 on the empty link."""
    return evaluate(link_to_word(link), sm).scalar_value()


def rotation_transpose_check(word: TangleWord, sm: SMatrix) -> float:
    """``|(T_m rho(F) T_n)^t - rho(s(F))|`` for ``F: n -> m`` and ``s`` the pi-rotation."""
    f = evaluate(word, sm)
    lhs = compose(compose(twist_map(sm.v, word.cod, sm.exact), f),
                  twist_map(sm.v, word.dom, sm.exact)).T
    return lhs.residual(evaluate(rotate_pi(word), sm))


# --------------------------------------------------------------------------
# certification

@dataclass(frozen=True)
class Check:
    key: str
    name: str
    residual: float
    passed: bool
    required: bool = True
    detail: str = ""

    def to_dict(self) -> dict:
        out = {"key": self.key, "name": self.name, "residual": self.residual,
               "pass": self.passed, "required": self.required}
        if self.detail:
            out["detail"] = self.detail
        return out


@dataclass(frozen=True)
class CertReport:
    """Outcome of every S-matrix check, in the order they were run."""

    checks: tuple
    engine: Engine
    involutive: bool = False
    rotation_consistent: bool = True
    notes: tuple = field(default=())

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks if c.required)

    @property
    def first_failure(self) -> Check | None:
        return next((c for c in self.checks if c.required and not c.passed), None)

    def check(self, key: str) -> Check:
        return next(c for c in self.checks if c.key == key)

    def failed_keys(self) -> list[str]:
        return [c.key for c in self.checks if not c.passed]

    def to_dict(self) -> dict:
        return {
            **self.engine.to_dict(),
            "pass": self.passed,
            "involutive": self.involutive,
            "rotation_consistent": self.rotation_consistent,
            "checks": [c.to_dict() for c in self.checks],
            "notes": list(self.notes),
        }

    def format(self) -> str:
        lines = []
        for c in self.checks:
            tag = "ok  " if c.passed else ("FAIL" if c.required else "no  ")
            lines.append(f"  [{tag}] {c.name}: residual {c.residual:.3g}")
        if self.passed:
            head = "PASS (trivial S-matrix, S²=𝟙)" if self.involutive else "PASS"
        else:
            head = f"FAIL at {self.first_failure.name}"
        return "\n".join([head] + lines + [f"  {n}" for n in self.notes])


def _diff(a: LinearMap, b: LinearMap) -> tuple[float, bool]:
    d = a - b
    return max_abs(d.data), d.is_zero()


def ybe_residual(S: LinearMap) -> tuple[float, bool]:
    s1 = embed(S, 0, 1)
    s2 = embed(S, 1, 0)
    return _diff(s1 @ s2 @ s1, s2 @ s1 @ s2)


def sliding_residuals(S: LinearMap, S_inv: LinearMap, b: LinearMap):
    """Residuals of ``(S^e (x) id)(id (x) b) = (id (x) S^-e)(b (x) id)`` for ``e = +1, -1``."""
    out = []
    for x, y in ((S, S_inv), (S_inv, S)):
        lhs = embed(x, 0, 1) @ embed(b, 1, 0)
        rhs = embed(y, 1, 0) @ embed(b, 0, 1)
        out.append(_diff(lhs, rhs))
    return out


def index_rotation_residual(S: LinearMap) -> tuple[float, bool]:
    """``S^{cd}_{ab} = S^{ba}_{dc}``, i.e. ``(T S T)^t = S``."""
    t = twist_map(S.v, 2, S.exact)
    return _diff((t @ S @ t).T, S)


def certify_smatrix(candidate: LinearMap, engine: Engine = FLOAT):
    """Check a ``2 -> 2`` candidate; returns ``(SMatrix or None, CertReport)``.

    Order: invertibility, Yang-Baxter, cup/cap structure, sliding for both
    signs, equality of the partial traces, then index rotation and
    T-symmetry (reported, implied by the others).
    """
    if (candidate.dom, candidate.cod) != (2, 2):
        raise ValueError("an S-matrix candidate must be a map V(x)V -> V(x)V")
    S = candidate.with_engine(engine)
    v, ex = S.v, S.exact
    ok = engine.passes
    checks = []

    try:
        S_inv = inverse(S)
        if not ex and not np.all(np.isfinite(S_inv.data)):
            raise np.linalg.LinAlgError
        r, z = _diff(S @ S_inv, identity(v, 2, ex))
        r2, z2 = _diff(S_inv @ S, identity(v, 2, ex))
        r, z = max(r, r2), z and z2
        checks.append(Check("invertible", "invertible S S^-1 = 1", r, ok(r, z)))
    except (ZeroDivisionError, np.linalg.LinAlgError):
        checks.append(Check("invertible", "invertible S S^-1 = 1", float("inf"), False))
        return None, CertReport(tuple(checks), engine)

    b, d = build_cup_cap(v, ex)
    ident = identity(v, 1, ex)
    r, z = ybe_residual(S)
    checks.append(Check("ybe", "YBE (S⊗1)(1⊗S)(S⊗1) = (1⊗S)(S⊗1)(1⊗S)", r, ok(r, z)))

    zz1 = _diff(embed(d, 1, 0) @ embed(b, 0, 1), ident)
    zz2 = _diff(embed(d, 0, 1) @ embed(b, 1, 0), ident)
    sym = _diff(d @ twist_map(v, 2, ex), d)
    r = max(zz1[0], zz2[0], sym[0])
    checks.append(Check("cupcap", "cup/cap b(1)=Σ e_i⊗e_i, d(e_i⊗e_j)=δ_ij", r,
                        ok(r, zz1[1] and zz2[1] and sym[1])))

    (rp, zp), (rm, zm) = sliding_residuals(S, S_inv, b)
    slide_p, slide_m = ok(rp, zp), ok(rm, zm)
    checks.append(Check("sliding+", "sliding S^{+1}: (S⊗1)(1⊗b) = (1⊗S^-1)(b⊗1)", rp, slide_p))
    checks.append(Check("sliding-", "sliding S^{-1}: (S^-1⊗1)(1⊗b) = (1⊗S)(b⊗1)", rm, slide_m))

    r, z = _diff(partial_trace(S, "right"), partial_trace(S, "left"))
    checks.append(Check("traces", "partial traces r_B(S)=l_B(S)", r, ok(r, z)))

    ra, za = index_rotation_residual(S)
    rb, zb = index_rotation_residual(S_inv)
    rot = ok(ra, za) and ok(rb, zb)
    checks.append(Check("rotation", "index rotation (S^±1)^{cd}_{ab} = (S^±1)^{ba}_{dc}",
                        max(ra, rb), rot, required=False))
    t = twist_map(v, 2, ex)
    ts = t @ S
    r, z = _diff(ts.T, ts)
    checks.append(Check("tsym", "T-symmetry (T∘S)^t = T∘S", r, ok(r, z), required=False))

    # index rotation makes the two sliding signs equivalent, and both signs give rotation
    consistent = (not rot or slide_p == slide_m) and (not (slide_p and slide_m) or rot)
    notes = () if consistent else ("sliding signs disagree with index rotation",)

    involutive = (S @ S).equals(identity(v, 2, ex), engine)
    report = CertReport(tuple(checks), engine, involutive, consistent, notes)
    if not report.passed:
        return None, report
    return SMatrix(v, S, S_inv, b, d, engine, True), report
