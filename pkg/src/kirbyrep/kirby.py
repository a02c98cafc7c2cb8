"""Fenn-Rourke defects, S-compatible endomorphisms and invariance certificates.

``A_n`` compares ``n`` strands threaded through a ``+1``-framed unknot with
the ``-1`` full twist that replaces them after blowing the unknot down;
``B_n`` is the mirror image.  With this pairing ``A_0 = tr(S) - 1`` and
``B_0 = tr(S^-1) - 1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .diagram import TangleWord, braid_word, build_standard, full_twist_braid, juxtapose, stack
from .linalg import kernel_vectors, minimal_polynomial
from .rep import Check, SMatrix, certify_smatrix, evaluate
from .scalars import Engine, format_scalar
from .tensor import (
    LinearMap,
    embed,
    full_trace,
    max_abs,
    partial_trace,
    scalar,
    tensor_product,
    twist_map,
)

__all__ = [
    "DEFAULT_SIZE_CAP",
    "SizeCapExceeded",
    "fr_defect",
    "c_relation_residual",
    "t_symmetry_residual",
    "compat_constraints",
    "compat_kernel",
    "CompatReport",
    "LevelResult",
    "is_irreducible",
    "check_descent",
    "certify_invariance",
    "InvarianceCertificate",
]

DEFAULT_SIZE_CAP = 2**16
CONVENTION_FLIP = True


class SizeCapExceeded(RuntimeError):
    def __init__(self, unknowns: int, cap: int):
        self.unknowns = unknowns
        self.cap = cap
        super().__init__(f"{unknowns} unknowns exceed the size cap of {cap}")


def _check_n(n: int) -> None:
    if n < 0:
        raise ValueError("n must be nonnegative")


def fr_defect(n: int, sign: int, sm: SMatrix) -> LinearMap:
    """``A_n`` (sign +1) or ``B_n`` (sign -1) as an endomorphism of ``V^(x)n``."""
    _check_n(n)
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    side = evaluate(build_standard("FR_SIDE", n, sign), sm)
    twist = evaluate(build_standard("FULL_TWIST", n, -sign), sm)
    return side - twist


def c_relation_residual(sm: SMatrix, n: int, a_n: LinearMap | None = None) -> float:
    """``|curl^(x)n o A_n - (rho(curls o E_n) - rho(pure full twist))|``.

    The left side composes the defect with the opposite-sign curls; the right
    side evaluates the two tangles whose difference it must be.
    """
    _check_n(n)
    a_n = fr_defect(n, 1, sm) if a_n is None else a_n
    curl = sm.curl(1)
    lhs = (tensor_product(*([curl] * n)) if n else scalar(1, sm.v, sm.exact)) @ a_n
    side = build_standard("FR_SIDE", n, 1)
    left = stack(side, juxtapose(*[build_standard("CURL", 1, 1)] * n)) if n else side
    right = braid_word(full_twist_braid(n, -1), n) if n else TangleWord((), 0, 0)
    rhs = evaluate(left, sm) - evaluate(right, sm)
    return lhs.residual(rhs)


def t_symmetry_residual(m: LinearMap) -> float:
    """``|(T_n M)^t - T_n M|``."""
    tm = twist_map(m.v, m.dom, m.exact) @ m
    return tm.T.residual(tm)


# --------------------------------------------------------------------------
# the linear system for S-compatible endomorphisms

def _nonzeros(x: np.ndarray):
    """Row-wise and column-wise nonzero lists of a matrix."""
    rows = [[] for _ in range(x.shape[0])]
    cols = [[] for _ in range(x.shape[1])]
    for (i, j), val in np.ndenumerate(x):
        if val != 0:
            rows[i].append((j, val))
            cols[j].append((i, val))
    return rows, cols


def _right_product_rows(x: np.ndarray, size: int) -> list[dict]:
    """Rows of ``E o X = 0`` for ``E`` a ``size x size`` unknown."""
    _, cols = _nonzeros(x)
    out = []
    for p in range(size):
        for q in range(x.shape[1]):
            out.append({p * size + s: val for s, val in cols[q]})
    return out


def _left_product_rows(x: np.ndarray, size: int) -> list[dict]:
    """Rows of ``X o E = 0``."""
    rows, _ = _nonzeros(x)
    out = []
    for p in range(x.shape[0]):
        for q in range(size):
            out.append({r * size + q: val for r, val in rows[p]})
    return out


def _commutator_rows(x: np.ndarray) -> list[dict]:
    """Rows of ``E X - X E = 0``."""
    size = x.shape[0]
    rows, cols = _nonzeros(x)
    out = []
    for p in range(size):
        for q in range(size):
            row: dict = {}
            for s, val in cols[q]:
                row[p * size + s] = row.get(p * size + s, 0) + val
            for r, val in rows[p]:
                row[r * size + q] = row.get(r * size + q, 0) - val
            row = {c: val for c, val in row.items() if val != 0}
            if row:
                out.append(row)
    return out


def _partial_trace_rows(v: int, level: int, side: str) -> list[dict]:
    size = v**level
    rest = v ** (level - 1)
    out = []
    for k in range(rest):
        for j in range(rest):
            if side == "right":
                cols = [(k * v + r) * size + (j * v + r) for r in range(v)]
            else:
                cols = [(r * rest + k) * size + (r * rest + j) for r in range(v)]
            out.append({c: 1 for c in cols})
    return out


def _symmetry_rows(size: int) -> list[dict]:
    return [{a * size + b: 1, b * size + a: -1} for a in range(size) for b in range(a + 1, size)]


def compat_constraints(sm: SMatrix, level: int, variant: str = "plain",
                       include_gamma: bool = True) -> dict[str, list[dict]]:
    """Constraint rows on an unknown endomorphism of ``V^(x)level``, by group.

    With ``n = level - 2`` and maps read in standard (right-to-left) order:

    * alpha: ``E o b^(i,n-i) = 0`` and ``d^(i,n-i) o E = 0`` for ``0 < i < n``
      (symmetric variant: ``H = H^t`` and ``H o b^(i,n-i) = 0``);
    * beta: ``r(E) = 0`` (symmetric variant: ``l(H) = 0``);
    * gamma: ``E`` commutes with ``S^(i,n-i)`` for ``0 < i < n`` and with
      ``tw^(i,n+1-i)`` for ``0 < i < n+1``, where ``rho(tw) = r(S)``.
    """
    if variant not in ("plain", "symmetric"):
        raise ValueError(f"unknown variant {variant!r}")
    n = level - 2
    v, ex = sm.v, sm.exact
    size = v**level
    groups: dict[str, list[dict]] = {"alpha": [], "beta": [], "gamma": []}
    if variant == "symmetric":
        groups["alpha"] += _symmetry_rows(size)
    for i in range(1, n):
        bi = embed(sm.b, i, n - i).data
        groups["alpha"] += _right_product_rows(bi, size)
        if variant == "plain":
            di = embed(sm.d, i, n - i).data
            groups["alpha"] += _left_product_rows(di, size)
    if level >= 1:
        groups["beta"] += _partial_trace_rows(v, level, "right" if variant == "plain" else "left")
    if include_gamma:
        for i in range(1, n):
            groups["gamma"] += _commutator_rows(embed(sm.S, i, n - i).data)
        tw = partial_trace(sm.S, "right")
        for i in range(1, n + 1):
            groups["gamma"] += _commutator_rows(embed(tw, i, n + 1 - i).data)
    if not ex:
        for rows in groups.values():
            for row in rows:
                for c in row:
                    row[c] = complex(row[c])
    return groups


@dataclass(frozen=True)
class LevelResult:
    level: int
    kernel_dim: int
    witness: LinearMap | None
    constraint_counts: dict
    basis: tuple = field(default=(), repr=False)

    def to_dict(self) -> dict:
        return {"level": self.level, "kernel_dim": self.kernel_dim,
                "constraints": dict(self.constraint_counts),
                "witness": self.witness is not None}


@dataclass(frozen=True)
class CompatReport:
    """Kernel of the S-compatibility system at one (plain) or two (symmetric) levels."""

    n: int
    variant: str
    levels: tuple
    engine: Engine

    @property
    def kernel_dim(self) -> int:
        return sum(lv.kernel_dim for lv in self.levels)

    @property
    def witness(self) -> LinearMap | None:
        return next((lv.witness for lv in self.levels if lv.witness is not None), None)

    @property
    def constraint_counts(self) -> dict:
        return dict(self.levels[0].constraint_counts)

    @property
    def weakly_constrained(self) -> bool:
        return self.n < 2

    def to_dict(self) -> dict:
        return {"n": self.n, "variant": self.variant, "kernel_dim": self.kernel_dim,
                **self.engine.to_dict(), "weakly_constrained": self.weakly_constrained,
                "levels": [lv.to_dict() for lv in self.levels]}

    def format(self) -> str:
        lines = [f"S-compatibility ({self.variant}) n={self.n}: kernel dimension {self.kernel_dim}"]
        for lv in self.levels:
            counts = ", ".join(f"{k} {c}" for k, c in lv.constraint_counts.items())
            lines.append(f"  level {lv.level}: dim {lv.kernel_dim} ({counts} constraints)")
        if self.weakly_constrained:
            lines.append("  note: n < 2 leaves the alpha and S-commutation ranges empty")
        return "\n".join(lines)


def _solve_level(sm: SMatrix, level: int, variant: str, include_gamma: bool,
                 size_cap: int) -> LevelResult:
    v = sm.v
    unknowns = v ** (2 * level)
    if unknowns > size_cap:
        raise SizeCapExceeded(unknowns, size_cap)
    groups = compat_constraints(sm, level, variant, include_gamma)
    blocks = [rows for rows in groups.values() if rows]
    vectors = kernel_vectors(blocks, unknowns, sm.engine)
    size = v**level
    basis = tuple(LinearMap(v, level, level, vec.reshape(size, size)) for vec in vectors)
    counts = {k: len(rows) for k, rows in groups.items()}
    return LevelResult(level, len(basis), basis[0] if basis else None, counts, basis)


def compat_kernel(sm: SMatrix, n: int, variant: str = "plain", *,
                  size_cap: int = DEFAULT_SIZE_CAP, include_gamma: bool = True) -> CompatReport:
    """Kernel of the S-compatibility system for endomorphisms of ``V^(x)(n+2)``.

    The symmetric variant is solved at levels ``n+2`` and ``n+3``.
    """
    _check_n(n)
    levels = [n + 2] if variant == "plain" else [n + 2, n + 3]
    results = tuple(_solve_level(sm, lv, variant, include_gamma, size_cap) for lv in levels)
    return CompatReport(n, variant, results, sm.engine)


def is_irreducible(sm: SMatrix) -> bool:
    """Whether ``S`` is nonderogatory: its minimal polynomial has degree ``v^2``."""
    return len(minimal_polynomial(sm.S, sm.engine)) - 1 == sm.v**2


def check_descent(sm: SMatrix, n: int, *, size_cap: int = DEFAULT_SIZE_CAP) -> float:
    """``max_i |A_{n+2} o b^(i) - b^(i) o A_n|`` with ``b^(i) = id_i (x) b (x) id_{n-i}``.

    Pulling a capped pair of strands through the Fenn-Rourke tangles turns
    one side into the other, so this vanishes for every S-matrix.
    """
    _check_n(n)
    if sm.v ** (2 * (n + 2)) > size_cap:
        raise SizeCapExceeded(sm.v ** (2 * (n + 2)), size_cap)
    big = fr_defect(n + 2, 1, sm)
    small = fr_defect(n, 1, sm)
    worst = 0.0
    for i in range(n + 1):
        bi = embed(sm.b, i, n - i)
        worst = max(worst, (big @ bi).residual(bi @ small))
    return worst


# --------------------------------------------------------------------------
# certificates

STRATEGIES = ("zentral", "symmetric", "irreducible")


@dataclass(frozen=True)
class InvarianceCertificate:
    """Three-valued outcome: ``pass``, ``fail`` or ``inconclusive``."""

    strategy: str
    status: str
    checks: tuple
    engine: Engine
    n_used: int | None = None
    compat: tuple = ()
    notes: tuple = ()
    convention_flip: bool = CONVENTION_FLIP

    @property
    def passed(self) -> bool:
        return self.status == "pass"

    @property
    def first_failure(self) -> Check | None:
        return next((c for c in self.checks if not c.passed), None)

    def to_dict(self) -> dict:
        return {
            "strategy": self.strategy,
            "status": self.status,
            "n": self.n_used,
            **self.engine.to_dict(),
            "convention_flip": self.convention_flip,
            "checks": [c.to_dict() for c in self.checks],
            "compat": [r.to_dict() for r in self.compat],
            "notes": list(self.notes),
        }

    def headline(self) -> str:
        if self.status == "pass":
            extra = f", n={self.n_used}" if self.n_used is not None else ""
            return f"PASS ({self.strategy}{extra})"
        if self.status == "fail":
            c = self.first_failure
            got = f" (got {c.detail})" if c.detail else ""
            return f"FAIL at {c.name}{got}"
        return "INCONCLUSIVE"

    def format(self) -> str:
        lines = [self.headline()]
        for c in self.checks:
            tag = "ok  " if c.passed else "FAIL"
            got = f"got {c.detail}, " if c.detail else ""
            lines.append(f"  [{tag}] {c.name} ({got}residual {c.residual:.3g})")
        lines += [f"  {r.format()}".replace("\n", "\n  ") for r in self.compat]
        lines += [f"  note: {n}" for n in self.notes]
        return "\n".join(lines)


def _zero_check(key: str, name: str, m: LinearMap, engine: Engine, show=None) -> Check:
    r = max_abs(m.data)
    detail = ""
    if m.dom == 0 and m.cod == 0 and show is not None:
        detail = format_scalar(show)
    return Check(key, name, r, engine.passes(r, m.is_zero()), True, detail)


def _trace_checks(sm: SMatrix) -> list[Check]:
    out = []
    for sign, key, name in ((1, "A0", "tr(S)=1"), (-1, "B0", "tr(S^-1)=1")):
        d = fr_defect(0, sign, sm)
        value = full_trace(sm.S if sign > 0 else sm.S_inv)
        out.append(_zero_check(key, name, d, sm.engine, value))
    return out


def certify_invariance(sm: SMatrix, strategy: str = "zentral", n_max: int = 2, *,
                       size_cap: int = DEFAULT_SIZE_CAP) -> InvarianceCertificate:
    """Run one of the sufficient criteria for Kirby invariance.

    ``zentral``: all defects ``A_0, B_0, B_1, B_2, A_1 .. A_{n_max+1}`` vanish
    and some ``n <= n_max`` has a trivial S-compatibility kernel.
    ``symmetric``: additionally ``[S, T] = 0``, using the symmetric kernels
    at levels ``n+2`` and ``n+3``.
    ``irreducible``: ``tr(S^{+-1}) = 1``, ``A_1 = B_1 = 0`` and ``S``
    nonderogatory.
    """
    if strategy == "sym":
        strategy = "symmetric"
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}")
    engine = sm.engine
    checks: list[Check] = []
    notes: list[str] = []

    if not sm.certified:
        _, rep = certify_smatrix(sm.S, engine)
        if not rep.passed:
            first = rep.first_failure
            checks.append(Check("smatrix", f"S-matrix condition {first.name}",
                                first.residual, False))
        else:
            checks.append(Check("smatrix", "S-matrix conditions", 0.0, True))

    def result(status, n_used=None, compat=()):
        return InvarianceCertificate(strategy, status, tuple(checks), engine, n_used,
                                     tuple(compat), tuple(notes))

    checks += _trace_checks(sm)
    if strategy == "irreducible":
        checks.append(_zero_check("A1", "A_1=0", fr_defect(1, 1, sm), engine))
        checks.append(_zero_check("B1", "B_1=0", fr_defect(1, -1, sm), engine))
        deg = len(minimal_polynomial(sm.S, engine)) - 1
        checks.append(Check("irreducible", "S irreducible (minimal polynomial degree v²)",
                            float(sm.v**2 - deg), deg == sm.v**2, True,
                            f"degree {deg}" if deg != sm.v**2 else ""))
        return result("pass" if all(c.passed for c in checks) else "fail")

    if strategy == "symmetric":
        t = twist_map(sm.v, 2, sm.exact)
        comm = sm.S @ t - t @ sm.S
        checks.append(_zero_check("ST", "[S,T]=0", comm, engine))
    checks.append(_zero_check("B1", "B_1=0", fr_defect(1, -1, sm), engine))
    checks.append(_zero_check("B2", "B_2=0", fr_defect(2, -1, sm), engine))
    for m in range(1, n_max + 2):
        if sm.v ** (2 * m) > size_cap:
            notes.append(f"A_{m} not computed: size cap")
            break
        checks.append(_zero_check(f"A{m}", f"A_{m}=0", fr_defect(m, 1, sm), engine))
    if not all(c.passed for c in checks):
        return result("fail")

    variant = "symmetric" if strategy == "symmetric" else "plain"
    reports = []
    for n in range(n_max + 1):
        try:
            rep = compat_kernel(sm, n, variant, size_cap=size_cap)
        except SizeCapExceeded as e:
            notes.append(f"stopped at n={n}: {e}")
            break
        reports.append(rep)
        if rep.kernel_dim == 0:
            checks.append(Check(f"compat{n}", f"only the zero {variant} S-compatible map at n={n}",
                                0.0, True))
            if rep.weakly_constrained:
                notes.append(f"n={n} is weakly constrained (alpha and S-commutation ranges empty)")
            return result("pass", n, reports)
    notes.append(f"every level up to n={n_max} has nonzero S-compatible maps")
    return result("inconclusive", None, reports)
