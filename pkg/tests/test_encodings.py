"""Insertion encodings: letters, configurations, encode/decode."""

import pytest

from cayenc.core import generate_cayley
from cayenc.encodings import (
    ROOT_HORIZONTAL,
    ROOT_VERTICAL,
    SLOT,
    HorizontalConfig,
    InvalidWord,
    VerticalLetter,
    horizontal_decode,
    horizontal_encode,
    max_slots,
    parse_horizontal_word,
    parse_vertical_word,
    vertical_config,
    vertical_decode,
    vertical_encode,
    vertical_trace,
    word_to_text,
)


def test_vertical_encode_example():
    word = vertical_encode((3, 1, 2, 3, 2))
    assert word_to_text(word) == "m1,1 l2,1 r2,0 f1,1 f1,0"


def test_vertical_trace_example():
    trace = vertical_trace((3, 1, 2, 3, 2))
    assert trace == (
        ROOT_VERTICAL,
        vertical_config([SLOT, 1, SLOT]),
        vertical_config([SLOT, 1, 2, SLOT]),
        vertical_config([SLOT, 1, 2, SLOT, 2]),
        vertical_config([3, 1, 2, SLOT, 2]),
        vertical_config([3, 1, 2, 3, 2]),
    )


def test_horizontal_encode_example():
    p = (3, 1, 2, 3, 2)
    word = horizontal_encode(p)
    assert word_to_text(word) == "u1,1 d1,0 f1,1 f2,0 f1,0"
    assert horizontal_decode(word) == p


def test_roundtrip_small_sizes():
    for n in range(1, 6):
        for p in generate_cayley(n):
            assert vertical_decode(vertical_encode(p)) == p
            assert horizontal_decode(horizontal_encode(p)) == p


def test_word_text_roundtrip():
    text = "m1,1 l2,1 r2,0 f1,1 f1,0"
    assert word_to_text(parse_vertical_word(text)) == text
    text = "u1,1 d1,0 f1,1 f2,0 f1,0"
    assert word_to_text(parse_horizontal_word(text)) == text


def test_parse_word_rejects_bad_tokens():
    with pytest.raises(InvalidWord):
        parse_vertical_word("x1,1")
    with pytest.raises(InvalidWord):
        parse_vertical_word("u1,1")
    with pytest.raises(InvalidWord):
        parse_horizontal_word("l1,1")
    with pytest.raises(InvalidWord):
        parse_vertical_word("m1")
    with pytest.raises(InvalidWord):
        parse_vertical_word("m0,1")


def test_vertical_decode_rejects_illegal_words():
    # first letter must introduce a new maximum
    with pytest.raises(InvalidWord):
        vertical_decode(parse_vertical_word("f1,0"))
    # slot index out of range
    with pytest.raises(InvalidWord):
        vertical_decode(parse_vertical_word("l2,1"))
    # word ends with a live slot
    with pytest.raises(InvalidWord):
        vertical_decode(parse_vertical_word("l1,1"))
    # a repeat must land strictly right of the current maximum
    with pytest.raises(InvalidWord):
        vertical_decode(parse_vertical_word("m1,1 f1,0 f1,1"))


def test_horizontal_decode_rejects_illegal_words():
    with pytest.raises(InvalidWord):
        horizontal_decode(parse_horizontal_word("f1,1"))
    with pytest.raises(InvalidWord):
        horizontal_decode(parse_horizontal_word("u2,1"))
    # only f may address a repeating slot
    with pytest.raises(InvalidWord):
        horizontal_decode(parse_horizontal_word("u1,1 u2,0 f1,1"))


def test_letter_str():
    assert str(VerticalLetter("m", 1, 1)) == "m1,1"
    assert str(VerticalLetter("f", 2, 0)) == "f2,0"


def test_roots():
    assert ROOT_VERTICAL == vertical_config([SLOT])
    assert ROOT_HORIZONTAL == HorizontalConfig((), (("new", 0),))


def test_max_slots_vertical():
    assert max_slots((1, 1, 2), "vertical") == 1
    assert max_slots((2, 1, 1), "vertical") == 2
    assert max_slots((2, 1, 2), "vertical") == 2
    assert max_slots((1,), "vertical") == 1


def test_max_slots_horizontal():
    assert max_slots((1, 2), "horizontal") == 1
    assert max_slots((3, 1, 2, 3, 2), "horizontal") == 2


def test_max_slots_bad_mode():
    with pytest.raises(ValueError):
        max_slots((1,), "diagonal")
