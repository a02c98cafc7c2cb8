import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from _support import component_count, random_word
from kirbyrep.diagram import FramedLink, Gen, TangleWord, identity_word
from kirbyrep.parsing import (
    ParseError,
    format_braid,
    format_link,
    format_sequence,
    format_tangle,
    parse_braid,
    parse_link,
    parse_sequence,
    parse_tangle,
)


def test_example_slice_is_four_strands():
    w = parse_tangle("tangle\n| X+ |\nend\n")
    assert w.arity == (4, 4)
    assert w.slices == ((Gen.ID, Gen.XPOS, Gen.ID),)


def test_comments_crlf_and_bom():
    text = "﻿tangle  # header\r\n\r\nU   # cap\r\nX- \r\nA\r\nend\r\n"
    w = parse_tangle(text)
    assert w.closed and len(w) == 3


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(0, 3), st.integers(1, 8))
def test_tangle_round_trip(seed, dom, length):
    w = random_word(random.Random(seed), dom, length)
    text = format_tangle(w)
    assert parse_tangle(text) == w
    assert format_tangle(parse_tangle(text)) == text


def test_empty_identity_formatting_is_stable():
    text = format_tangle(identity_word(0))
    assert text == "tangle\nend\n"
    assert parse_tangle(text).arity == (0, 0)
    wide = TangleWord((), 2, 2)
    assert format_tangle(parse_tangle(format_tangle(wide))) == format_tangle(wide)


@pytest.mark.parametrize("text,line,col", [
    ("tangle\n| X+ |\nQ\nend\n", 3, 1),
    ("tangle\n| X+ ?\nend\n", 2, 6),
    ("tangel\nend\n", 1, 1),
    ("tangle\n|\n",  3, 1),
    ("tangle\nU\n| | |\nend\n", 3, 1),
    ("tangle\n|\nend\n|\n", 4, 1),
])
def test_tangle_errors_carry_positions(text, line, col):
    with pytest.raises(ParseError) as e:
        parse_tangle(text)
    assert (e.value.line, e.value.column) == (line, col)
    assert f"line {line}, column {col}" in str(e.value)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 5), st.data())
def test_link_round_trip(strands, data):
    gens = st.integers(1, max(strands - 1, 1)).flatmap(lambda g: st.sampled_from([g, -g]))
    braid = tuple(data.draw(st.lists(gens, max_size=6))) if strands > 1 else ()
    ncomp = component_count(strands, braid)
    framings = data.draw(st.lists(st.integers(-5, 5), min_size=ncomp, max_size=ncomp))
    link = FramedLink(strands, braid, tuple(framings))
    assert parse_link(format_link(link)) == link
    assert format_link(parse_link(format_link(link))) == format_link(link)


def test_link_examples_and_errors():
    assert parse_link("link s=3 braid: ; framings: 0 0 0") == FramedLink.trivial(3)
    assert parse_link("link s=0 braid: ; framings:") == FramedLink.empty()
    with pytest.raises(ParseError) as e:
        parse_link("link s=2 braid: 1 ; framings: 0 0")
    assert "1 component, 2 framings" in str(e.value)
    with pytest.raises(ParseError) as e:
        parse_link("link s=2 braid: 1 x ; framings: 0")
    assert e.value.column == 19
    with pytest.raises(ParseError):
        parse_link("link s=-1 braid: ; framings:")
    with pytest.raises(ParseError):
        parse_link("")


def test_braid_parsing():
    assert parse_braid("1 -2, 1") == [1, -2, 1]
    assert format_braid([1, -2]) == "1 -2"
    with pytest.raises(ParseError):
        parse_braid("1 0")


def test_sequence_round_trip_and_errors():
    text = ("sequence hole=0 powers: 0 1 2\n"
            "tangle\nU\n| U |\nend\n"
            "tangle\n| X+ |\n| A |\nA\nend\n")
    spec = parse_sequence(text)
    assert spec.hole == 0 and spec.powers == (0, 1, 2)
    assert spec.below.arity == (0, 4) and spec.above.arity == (4, 0)
    assert parse_sequence(format_sequence(spec)) == spec
    with pytest.raises(ParseError):
        parse_sequence("sequence hole=0 powers:\ntangle\nend\ntangle\nend\n")
    with pytest.raises(ParseError):
        parse_sequence("sequence hole=0 powers: 1\ntangle\nU\nend\n")
