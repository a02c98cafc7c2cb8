"""Slice-based words for framed tangles and braid-closure framed links.

A :class:`TangleWord` is a bottom-to-top list of slices; each slice is a
left-to-right tuple of :class:`Gen` generators.  Juxtaposition pads slices
with identity strands, stacking concatenates slice lists.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Sequence

__all__ = [
    "Gen",
    "Slice",
    "TangleWord",
    "FramedLink",
    "DiagramError",
    "SliceMismatch",
    "validate",
    "identity_word",
    "braid_word",
    "build_standard",
    "rotate_pi",
    "mirror",
    "stack",
    "juxtapose",
    "disjoint_union",
    "connectivity",
    "link_components",
    "self_writhe",
    "link_to_word",
    "braid_permutation",
]


class DiagramError(ValueError):
    pass


class SliceMismatch(DiagramError):
    """Adjacent slices disagree on the number of strands between them."""

    def __init__(self, index: int, below: int, above: int):
        self.index = index
        super().__init__(
            f"arity mismatch between slices {index} and {index + 1}: "
            f"{below} strands leave slice {index}, slice {index + 1} expects {above}"
        )


class Gen(Enum):
    ID = "|"
    XPOS = "X+"
    XNEG = "X-"
    CAP = "U"
    CUP = "A"

    @property
    def dom(self) -> int:
        return _ARITY[self][0]

    @property
    def cod(self) -> int:
        return _ARITY[self][1]

    @property
    def token(self) -> str:
        return self.value


_ARITY = {
    Gen.ID: (1, 1),
    Gen.XPOS: (2, 2),
    Gen.XNEG: (2, 2),
    Gen.CAP: (0, 2),
    Gen.CUP: (2, 0),
}

Slice = tuple  # tuple[Gen, ...]


def slice_arity(sl: Sequence[Gen]) -> tuple[int, int]:
    return sum(g.dom for g in sl), sum(g.cod for g in sl)


@dataclass(frozen=True)
class TangleWord:
    """Validated framed-tangle word ``dom -> cod``.

    An empty slice list denotes the identity on ``dom == cod`` strands and is
    stored as a single slice of ``ID`` when ``dom > 0``, so that every word has
    exactly one text form.
    """

    slices: tuple = ()
    dom: int = 0
    cod: int = 0

    def __post_init__(self):
        slices = tuple(tuple(Gen(g) if not isinstance(g, Gen) else g for g in sl)
                       for sl in self.slices)
        if not slices and self.dom == self.cod > 0:
            slices = ((Gen.ID,) * self.dom,)
        object.__setattr__(self, "slices", slices)
        if any(not sl for sl in slices):
            raise DiagramError("slices must contain at least one generator")
        if slices:
            dom, cod = validate(slices)
            if (dom, cod) != (self.dom, self.cod):
                raise DiagramError(
                    f"declared arities ({self.dom},{self.cod}) but slices give ({dom},{cod})")
        elif self.dom != self.cod:
            raise DiagramError("an empty word is an identity and needs dom == cod")

    @classmethod
    def of(cls, slices: Iterable[Sequence[Gen]], width: int | None = None) -> "TangleWord":
        """Build from slices, inferring arities (``width`` for an empty list)."""
        slices = tuple(tuple(sl) for sl in slices)
        if not slices:
            return identity_word(width or 0)
        dom, cod = validate(slices)
        return cls(slices, dom, cod)

    @property
    def closed(self) -> bool:
        return self.dom == 0 and self.cod == 0

    @property
    def arity(self) -> tuple[int, int]:
        return self.dom, self.cod

    def crossing_count(self) -> int:
        return sum(g in (Gen.XPOS, Gen.XNEG) for sl in self.slices for g in sl)

    def count(self, gen: Gen) -> int:
        return sum(g is gen for sl in self.slices for g in sl)

    def __len__(self):
        return len(self.slices)


def validate(word) -> tuple[int, int]:
    """Arities ``(dom, cod)`` of a word or raw slice list; raises :class:`SliceMismatch`."""
    slices = word.slices if isinstance(word, TangleWord) else tuple(word)
    if isinstance(word, TangleWord) and not slices:
        return word.dom, word.cod
    if not slices:
        return 0, 0
    arities = [slice_arity(sl) for sl in slices]
    for i in range(len(arities) - 1):
        if arities[i][1] != arities[i + 1][0]:
            raise SliceMismatch(i, arities[i][1], arities[i + 1][0])
    return arities[0][0], arities[-1][1]


# --------------------------------------------------------------------------
# combinators

def identity_word(n: int) -> TangleWord:
    return TangleWord((), n, n)


def _pad(slices: Iterable[Slice], left: int, right: int) -> list[Slice]:
    return [(Gen.ID,) * left + tuple(sl) + (Gen.ID,) * right for sl in slices]


def stack(*words: TangleWord) -> TangleWord:
    """``stack(f, g)`` is ``g`` after ``f`` (``g`` drawn on top)."""
    if not words:
        raise ValueError("stack needs at least one word")
    for lo, hi in zip(words, words[1:]):
        if lo.cod != hi.dom:
            raise DiagramError(f"cannot stack: {lo.cod} strands on top, {hi.dom} expected")
    slices = tuple(sl for w in words for sl in w.slices)
    return TangleWord(slices, words[0].dom, words[-1].cod)


def juxtapose(*words: TangleWord) -> TangleWord:
    """Side-by-side placement; evaluates to the tensor product."""
    if not words:
        return TangleWord((), 0, 0)
    acc = words[0]
    for w in words[1:]:
        slices = _pad(acc.slices, 0, w.dom) + _pad(w.slices, acc.cod, 0)
        acc = TangleWord(tuple(slices), acc.dom + w.dom, acc.cod + w.cod)
    return acc


def rotate_pi(word: TangleWord) -> TangleWord:
    """Rotate the picture by pi: reverse both axes and exchange CAP with CUP."""
    swap = {Gen.CAP: Gen.CUP, Gen.CUP: Gen.CAP}
    slices = tuple(tuple(swap.get(g, g) for g in reversed(sl)) for sl in reversed(word.slices))
    return TangleWord(slices, word.cod, word.dom)


def _mirror_word(word: TangleWord) -> TangleWord:
    swap = {Gen.XPOS: Gen.XNEG, Gen.XNEG: Gen.XPOS}
    return TangleWord(tuple(tuple(swap.get(g, g) for g in sl) for sl in word.slices),
                      word.dom, word.cod)


def braid_word(word: Sequence[int], strands: int) -> TangleWord:
    """Crossing slices for a braid word in the generators ``+-1 .. +-(strands-1)``."""
    slices = []
    for g in word:
        i = abs(g)
        if g == 0 or i >= strands:
            raise DiagramError(f"braid generator {g} out of range for {strands} strands")
        x = Gen.XPOS if g > 0 else Gen.XNEG
        slices.append((Gen.ID,) * (i - 1) + (x,) + (Gen.ID,) * (strands - i - 1))
    return TangleWord.of(slices, strands)


# --------------------------------------------------------------------------
# standard tangles

def _curl_slices(sign: int) -> list[Slice]:
    x = Gen.XPOS if sign > 0 else Gen.XNEG
    return [(Gen.ID, Gen.CAP), (x, Gen.ID), (Gen.ID, Gen.CUP)]


def _curl_at(position: int, width: int, sign: int) -> list[Slice]:
    """A curl on strand ``position`` (1-based) of ``width`` parallel strands."""
    return _pad(_curl_slices(sign), position - 1, width - position)


def full_twist_braid(n: int, sign: int) -> list[int]:
    """``(s_1 ... s_{n-1})^n`` or the inverse word, i.e. the squared half twist."""
    if n < 2:
        return []
    if sign > 0:
        return list(range(1, n)) * n
    return list(range(-(n - 1), 0)) * n


def _check_sign(sign: int) -> int:
    if sign not in (1, -1):
        raise ValueError(f"sign must be +1 or -1, not {sign}")
    return sign


def build_standard(kind: str, n: int, sign: int = 1) -> TangleWord:
    """Standard tangles: ``CURL``, ``FULL_TWIST``, ``FR_SIDE`` and ``UN``.

    * ``CURL`` (n=1): the framing curl ``tw^{+-1}``.
    * ``FULL_TWIST``: the squared half twist on n strands followed by one curl
      of the same sign on every strand.
    * ``FR_SIDE``: n parallel strands threaded through a ``+-1``-framed
      unknot.  The circle's left leg travels left across every strand and
      back, the crossings all of the given sign; the circle carries one curl.
    * ``UN``: n nested cups, a ``(2n, 0)`` word.
    """
    kind = kind.upper()
    if n < 0:
        raise ValueError("n must be nonnegative")
    if kind == "CURL":
        _check_sign(sign)
        if n != 1:
            raise ValueError("CURL is defined for n = 1 only")
        return TangleWord.of(_curl_slices(sign))
    if kind == "FULL_TWIST":
        _check_sign(sign)
        slices = list(braid_word(full_twist_braid(n, sign), n).slices) if n >= 2 else []
        for j in range(1, n + 1):
            slices += _curl_at(j, n, sign)
        return TangleWord.of(slices, n)
    if kind == "FR_SIDE":
        _check_sign(sign)
        x = Gen.XPOS if sign > 0 else Gen.XNEG
        width = n + 2
        slices: list[Slice] = [(Gen.ID,) * n + (Gen.CAP,)]

        def cross(j):  # crossing on positions j, j+1
            return (Gen.ID,) * (j - 1) + (x,) + (Gen.ID,) * (width - j - 1)

        slices += [cross(j) for j in range(n, 0, -1)]
        slices += [cross(j) for j in range(1, n + 1)]
        slices += _curl_at(n + 2, width, sign)
        slices.append((Gen.ID,) * n + (Gen.CUP,))
        return TangleWord.of(slices)
    if kind == "UN":
        slices = [(Gen.ID,) * k + (Gen.CUP,) + (Gen.ID,) * k for k in range(n - 1, -1, -1)]
        return TangleWord.of(slices, 0)
    raise ValueError(f"unknown standard tangle {kind!r}")


# --------------------------------------------------------------------------
# connectivity

def connectivity(word: TangleWord) -> tuple[dict, int]:
    """Endpoint pairing of a word and the number of closed loops.

    Endpoints are ``("bottom", i)`` and ``("top", j)`` with 1-based positions.
    """
    parent: dict = {}

    def find(x):
        while parent.setdefault(x, x) != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(a, b):
        parent[find(a)] = find(b)

    labels = [("bottom", i + 1) for i in range(word.dom)]
    fresh = 0
    for sl in word.slices:
        new = []
        pos = 0
        for g in sl:
            if g is Gen.ID:
                new.append(labels[pos])
                pos += 1
            elif g in (Gen.XPOS, Gen.XNEG):
                new += [labels[pos + 1], labels[pos]]
                pos += 2
            elif g is Gen.CAP:
                node = ("arc", fresh)
                fresh += 1
                find(node)
                new += [node, node]
            else:
                union(labels[pos], labels[pos + 1])
                pos += 2
        labels = new
    for j, lab in enumerate(labels):
        union(("top", j + 1), lab)
    ends = [("bottom", i + 1) for i in range(word.dom)] + [("top", j + 1) for j in range(word.cod)]
    by_root: dict = {}
    for e in ends:
        by_root.setdefault(find(e), []).append(e)
    loops = len({find(x) for x in list(parent)} - set(by_root))
    pairs = {}
    for a, b in by_root.values():
        pairs[a] = b
        pairs[b] = a
    return pairs, loops


# --------------------------------------------------------------------------
# framed links

@dataclass(frozen=True)
class FramedLink:
    """Closure of a braid on ``strands`` strands with one framing per component.

    Components are the cycles of the braid permutation, ordered by their least
    strand index.  ``strands = 0`` is the empty link.
    """

    strands: int
    braid: tuple = ()
    framings: tuple = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "braid", tuple(int(g) for g in self.braid))
        object.__setattr__(self, "framings", tuple(int(f) for f in self.framings))
        if self.strands < 0:
            raise DiagramError("strand count must be nonnegative")
        for g in self.braid:
            if g == 0 or abs(g) >= self.strands:
                raise DiagramError(
                    f"braid generator {g} out of range for {self.strands} strands")
        ncomp = len(link_components(self))
        if len(self.framings) != ncomp:
            raise DiagramError(
                f"closure has {ncomp} component{'s' if ncomp != 1 else ''}, "
                f"{len(self.framings)} framing{'s' if len(self.framings) != 1 else ''} given")

    @classmethod
    def unknot(cls, framing: int = 0) -> "FramedLink":
        return cls(1, (), (framing,))

    @classmethod
    def trivial(cls, m: int, framing: int = 0) -> "FramedLink":
        return cls(m, (), (framing,) * m)

    @classmethod
    def empty(cls) -> "FramedLink":
        return cls(0, (), ())

    @property
    def component_count(self) -> int:
        return len(self.framings)


def braid_permutation(braid: Sequence[int], strands: int) -> list[int]:
    """``perm[p]`` = position at the top reached from bottom position ``p`` (0-based)."""
    at = list(range(strands))  # at[pos] = strand currently at pos
    for g in braid:
        i = abs(g) - 1
        at[i], at[i + 1] = at[i + 1], at[i]
    perm = [0] * strands
    for pos, strand in enumerate(at):
        perm[strand] = pos
    return perm


def link_components(link) -> list[tuple[int, ...]]:
    """Cycles of the closure permutation as 0-based positions, least element first."""
    strands = link.strands
    perm = braid_permutation(link.braid, strands)
    seen = [False] * strands
    comps = []
    for p in range(strands):
        if seen[p]:
            continue
        cyc = []
        q = p
        while not seen[q]:
            seen[q] = True
            cyc.append(q)
            q = perm[q]
        comps.append(tuple(cyc))
    return comps


def self_writhe(link: FramedLink) -> list[int]:
    """Signed count of crossings between strands of the same component."""
    comps = link_components(link)
    owner = {}
    for c, cyc in enumerate(comps):
        for p in cyc:
            owner[p] = c
    writhe = [0] * len(comps)
    at = list(range(link.strands))
    for g in link.braid:
        i = abs(g) - 1
        a, b = at[i], at[i + 1]
        if owner[a] == owner[b]:
            writhe[owner[a]] += 1 if g > 0 else -1
        at[i], at[i + 1] = b, a
    return writhe


def link_to_word(link: FramedLink) -> TangleWord:
    """Closed word: nested caps, framing curls, the braid, nested cups.

    The braid runs on the left ``s`` strands, the right ``s`` strands carry
    them back.  Component ``c`` receives ``|f_c - w_c|`` curls of sign
    ``f_c - w_c`` on its least strand, ``w_c`` being its self-writhe, so that
    the blackboard framing of the closure equals ``f_c``.
    """
    s = link.strands
    if s == 0:
        return TangleWord((), 0, 0)
    width = 2 * s
    slices: list[Slice] = [(Gen.ID,) * k + (Gen.CAP,) + (Gen.ID,) * k for k in range(s)]
    for cyc, f, w in zip(link_components(link), link.framings, self_writhe(link)):
        extra = f - w
        sign = 1 if extra > 0 else -1
        for _ in range(abs(extra)):
            slices += _curl_at(cyc[0] + 1, width, sign)
    slices += _pad(braid_word(link.braid, s).slices, 0, s)
    slices += [(Gen.ID,) * k + (Gen.CUP,) + (Gen.ID,) * k for k in range(s - 1, -1, -1)]
    return TangleWord.of(slices)


def mirror(obj):
    """Exchange every crossing with its opposite; framings change sign."""
    if isinstance(obj, FramedLink):
        return FramedLink(obj.strands, tuple(-g for g in obj.braid), tuple(-f for f in obj.framings))
    return _mirror_word(obj)


def disjoint_union(a, b):
    """Side-by-side union of two closed words or two framed links."""
    if isinstance(a, FramedLink) and isinstance(b, FramedLink):
        shifted = tuple(g + a.strands if g > 0 else g - a.strands for g in b.braid)
        return FramedLink(a.strands + b.strands, a.braid + shifted, a.framings + b.framings)
    if isinstance(a, TangleWord) and isinstance(b, TangleWord):
        if not (a.closed and b.closed):
            raise DiagramError("disjoint union needs closed diagrams")
        return juxtapose(a, b)
    raise DiagramError("disjoint union needs two closed words or two framed links")
