import math

import pytest
from hypothesis import given, strategies as st

from subuniversal.strings import (DegenerateInputWarning, all_strings, canonical, check_binary,
                                  complement, from_text, lzw_codes, lzw_compressed_length,
                                  lzw_decode, orbit, reverse, shannon_entropy, strings_up_to,
                                  to_text)

bits = st.text(alphabet="01", max_size=64)


def test_reverse_examples():
    assert reverse("0001") == "1000"
    assert reverse("") == ""
    assert reverse("0110") == "0110"


def test_complement_examples():
    assert complement("0001") == "1110"
    assert complement("") == ""
    assert complement("01") == "10"


@pytest.mark.parametrize("s, expected", [
    ("0000", {"0000", "1111"}),
    ("0010", {"0010", "0100", "1101", "1011"}),
    ("", {""}),
])
def test_orbit_examples(s, expected):
    assert orbit(s) == expected


def test_entropy_examples():
    assert shannon_entropy("0000") == 0.0
    assert shannon_entropy("0101") == 1.0
    oracle = -(0.75 * math.log2(0.75) + 0.25 * math.log2(0.25))
    assert shannon_entropy("0001") == pytest.approx(0.8113, abs=1e-4)
    assert shannon_entropy("0001") == pytest.approx(oracle, abs=1e-12)


def test_entropy_of_empty_is_flagged_zero():
    with pytest.warns(DegenerateInputWarning):
        assert shannon_entropy("") == 0.0


def test_lzw_examples():
    assert lzw_compressed_length("") == 0
    # dictionary {0,1}: one code of width 2
    assert lzw_compressed_length("0") == 2
    zeros = "0" * 16
    mixed = "0000100110101111"  # de Bruijn sequence B(2, 4)
    assert lzw_compressed_length(zeros) < lzw_compressed_length(mixed)


def test_lzw_hand_trace():
    # "0000": emit 0 (w=2) add 00; emit 00 (w=2, 3 entries) add 000; emit 0 (w=3)
    assert lzw_codes("0000") == [(0, 2), (2, 2), (0, 3)]
    assert lzw_compressed_length("0000") == 7


def test_rejects_non_binary():
    with pytest.raises(ValueError):
        check_binary("012")
    with pytest.raises(TypeError):
        check_binary(5)


def test_text_form():
    assert to_text("") == "eps"
    assert from_text("eps") == ""
    assert from_text(to_text("0110")) == "0110"


def test_enumeration_helpers():
    assert list(all_strings(2)) == ["00", "01", "10", "11"]
    assert len(list(strings_up_to(3))) == 15


@given(bits)
def test_involutions_commute(s):
    assert reverse(reverse(s)) == s
    assert complement(complement(s)) == s
    assert reverse(complement(s)) == complement(reverse(s))
    assert len(reverse(s)) == len(complement(s)) == len(s)


@given(bits)
def test_orbit_structure(s):
    o = orbit(s)
    assert 4 % len(o) == 0
    assert all(orbit(t) == o for t in o)
    assert canonical(s) in o and all(canonical(t) == canonical(s) for t in o)
    if s:
        assert len(o) in (2, 4)


@given(bits.filter(bool))
def test_entropy_symmetries(s):
    h = shannon_entropy(s)
    assert 0.0 <= h <= 1.0
    assert h == shannon_entropy(complement(s)) == shannon_entropy(reverse(s))


@given(bits)
def test_lzw_complement_symmetric_and_lossless(s):
    assert lzw_compressed_length(s) == lzw_compressed_length(complement(s))
    assert lzw_decode([c for c, _ in lzw_codes(s)]) == s
