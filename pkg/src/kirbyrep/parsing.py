"""Line-oriented text formats for tangles, framed links and beta-sequences.

Tangle::

    tangle
    | X+ |      # bottom slice first
    U | |
    end

Link::

    link s=2 braid: 1 1 1 ; framings: 0

Comments start with ``#``; LF and CRLF line endings are both accepted.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .diagram import DiagramError, FramedLink, Gen, SliceMismatch, TangleWord, validate

__all__ = [
    "ParseError",
    "parse_tangle",
    "format_tangle",
    "parse_link",
    "format_link",
    "parse_braid",
    "format_braid",
    "SequenceSpec",
    "parse_sequence",
    "format_sequence",
]

_TOKENS = {g.token: g for g in Gen}


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int = 1):
        self.line = line
        self.column = column
        self.message = message
        super().__init__(f"line {line}, column {column}: {message}")


def _lines(text: str):
    """Yield ``(lineno, content, offset)`` with comments stripped, skipping blanks."""
    if text.startswith("\ufeff"):
        text = text[1:]
    for n, raw in enumerate(text.split("\n"), start=1):
        raw = raw.rstrip("\r")
        body = raw.split("#", 1)[0]
        stripped = body.strip()
        if stripped:
            yield n, body, len(body) - len(body.lstrip())


def _tokens(body: str):
    for m in re.finditer(r"\S+", body):
        yield m.group(), m.start() + 1


def _parse_tangle_lines(lines, header_line: int) -> tuple[TangleWord, int]:
    slices = []
    slice_lines = []
    for n, body, _ in lines:
        if body.strip() == "end":
            break
        sl = []
        for tok, col in _tokens(body):
            g = _TOKENS.get(tok)
            if g is None:
                raise ParseError(f"unknown token {tok!r}", n, col)
            sl.append(g)
        slices.append(tuple(sl))
        slice_lines.append(n)
    else:
        last = slice_lines[-1] if slice_lines else header_line
        raise ParseError("missing 'end'", last + 1)
    try:
        dom, cod = validate(slices)
    except SliceMismatch as e:
        raise ParseError(str(e), slice_lines[e.index + 1]) from None
    return TangleWord(tuple(slices), dom, cod), n


def parse_tangle(text: str) -> TangleWord:
    lines = _lines(text)
    first = next(lines, None)
    if first is None or first[1].strip() != "tangle":
        n = first[0] if first else 1
        raise ParseError("expected header 'tangle'", n, (first[2] + 1) if first else 1)
    word, end_line = _parse_tangle_lines(lines, first[0])
    extra = next(lines, None)
    if extra is not None:
        raise ParseError("unexpected text after 'end'", extra[0], extra[2] + 1)
    return word


def format_tangle(word: TangleWord) -> str:
    """Canonical text, one line per slice."""
    lines = ["tangle"]
    lines += [" ".join(g.token for g in sl) for sl in word.slices]
    lines.append("end")
    return "\n".join(lines) + "\n"


_INT = re.compile(r"[+-]?\d+")
_LINK = re.compile(
    r"link\s+s\s*=\s*(?P<s>\S+)\s+braid:(?P<braid>[^;]*);\s*framings:(?P<fr>.*)")


def _int_list(text: str, line: int, offset: int) -> list[int]:
    out = []
    for tok, col in _tokens(text):
        if not _INT.fullmatch(tok):
            raise ParseError(f"expected an integer, found {tok!r}", line, offset + col)
        out.append(int(tok))
    return out


def parse_link(text: str) -> FramedLink:
    lines = list(_lines(text))
    if not lines:
        raise ParseError("empty link file", 1)
    n, body, indent = lines[0]
    if len(lines) > 1:
        raise ParseError("unexpected text after link line", lines[1][0], lines[1][2] + 1)
    m = _LINK.fullmatch(body.strip())
    if not m:
        raise ParseError("expected 'link s=<int> braid: <ints> ; framings: <ints>'", n, indent + 1)
    base = indent
    if not re.fullmatch(r"\d+", m.group("s")):
        raise ParseError(f"strand count must be a nonnegative integer, found {m.group('s')!r}",
                         n, base + m.start("s") + 1)
    strands = int(m.group("s"))
    braid = _int_list(m.group("braid"), n, base + m.start("braid"))
    framings = _int_list(m.group("fr"), n, base + m.start("fr"))
    try:
        return FramedLink(strands, tuple(braid), tuple(framings))
    except DiagramError as e:
        col = base + (m.start("fr") if "framing" in str(e) else m.start("braid")) + 1
        raise ParseError(str(e), n, col) from None


def _join(values) -> str:
    return "".join(f" {x}" for x in values)


def format_link(link: FramedLink) -> str:
    return f"link s={link.strands} braid:{_join(link.braid)} ; framings:{_join(link.framings)}\n"


def parse_braid(text: str) -> list[int]:
    """A whitespace- or comma-separated braid word such as ``"1 -2 1"``."""
    out = []
    for tok, col in _tokens(text.replace(",", " ")):
        if not _INT.fullmatch(tok) or int(tok) == 0:
            raise ParseError(f"bad braid generator {tok!r}", 1, col)
        out.append(int(tok))
    return out


def format_braid(word) -> str:
    return " ".join(str(g) for g in word)


@dataclass(frozen=True)
class SequenceSpec:
    """Raw beta-sequence file: a hole at strand ``hole`` between two tangles."""

    hole: int
    powers: tuple
    below: TangleWord
    above: TangleWord


_SEQ = re.compile(r"sequence\s+hole\s*=\s*(?P<hole>\d+)\s+powers:(?P<powers>.*)")


def parse_sequence(text: str) -> SequenceSpec:
    """Header ``sequence hole=<k> powers: <ints>`` then two tangle blocks.

    The first tangle ends below the hole, the second starts above it.
    """
    lines = _lines(text)
    first = next(lines, None)
    if first is None:
        raise ParseError("empty sequence file", 1)
    n, body, indent = first
    m = _SEQ.fullmatch(body.strip())
    if not m:
        raise ParseError("expected 'sequence hole=<int> powers: <ints>'", n, indent + 1)
    powers = _int_list(m.group("powers"), n, indent + m.start("powers"))
    if not powers:
        raise ParseError("no powers given", n, indent + m.start("powers") + 1)
    words = []
    last = n
    for _ in range(2):
        head = next(lines, None)
        if head is None or head[1].strip() != "tangle":
            raise ParseError("expected 'tangle'", head[0] if head else last + 1)
        word, last = _parse_tangle_lines(lines, head[0])
        words.append(word)
    extra = next(lines, None)
    if extra is not None:
        raise ParseError("unexpected text after second tangle", extra[0], extra[2] + 1)
    return SequenceSpec(int(m.group("hole")), tuple(powers), words[0], words[1])


def format_sequence(spec: SequenceSpec) -> str:
    head = f"sequence hole={spec.hole} powers:{_join(spec.powers)}\n"
    return head + format_tangle(spec.below) + format_tangle(spec.above)
