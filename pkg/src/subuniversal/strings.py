"""Binary-string primitives, the reversal/complement symmetry group and
statistical baselines.

Binary strings are plain ``str`` objects over the characters ``"0"`` and
``"1"``; the empty string is the empty ``str``.
"""
from __future__ import annotations

import math
import warnings
from collections import Counter
from typing import Iterable, Iterator

EMPTY_TOKEN = "eps"

_COMPLEMENT = str.maketrans("01", "10")


class DegenerateInputWarning(UserWarning):
    """Raised (as a warning) when an operation is applied outside its
    meaningful domain and falls back to a defined-by-convention value."""


def check_binary(s: str) -> str:
    if not isinstance(s, str):
        raise TypeError(f"binary string expected, got {type(s).__name__}")
    if s.strip("01"):
        raise ValueError(f"not a binary string: {s!r}")
    return s


def to_text(s: str) -> str:
    """Render for CSV output (empty string becomes ``"eps"``)."""
    return s if s else EMPTY_TOKEN


def from_text(text: str) -> str:
    text = text.strip()
    if text == EMPTY_TOKEN:
        return ""
    return check_binary(text)


def reverse(s: str) -> str:
    return s[::-1]


def complement(s: str) -> str:
    return s.translate(_COMPLEMENT)


def orbit(s: str) -> frozenset[str]:
    """Orbit of ``s`` under the group generated by reversal and complement."""
    r = reverse(s)
    return frozenset((s, r, complement(s), complement(r)))


def canonical(s: str) -> str:
    """Lexicographically smallest orbit member, used as an orbit key."""
    return min(orbit(s))


def all_strings(length: int) -> Iterator[str]:
    """All binary strings of exactly ``length`` bits in lexicographic order."""
    if length == 0:
        yield ""
        return
    for i in range(1 << length):
        yield format(i, f"0{length}b")


def strings_up_to(max_length: int) -> Iterator[str]:
    for n in range(max_length + 1):
        yield from all_strings(n)


def shannon_entropy(s: str) -> float:
    """Per-bit Shannon entropy (bits/symbol) of the empirical bit frequencies.

    The empty string has no defined entropy; 0.0 is returned together with a
    :class:`DegenerateInputWarning`.
    """
    if not s:
        warnings.warn("entropy of the empty string is defined as 0",
                      DegenerateInputWarning, stacklevel=2)
        return 0.0
    n = len(s)
    h = 0.0
    for k in Counter(s).values():
        p = k / n
        h -= p * math.log2(p)
    return h + 0.0


def lzw_codes(s: str) -> list[tuple[int, int]]:
    """Run the LZW encoder and return ``(code, width)`` pairs.

    The dictionary starts as ``{"0": 0, "1": 1}``, is never reset, and each
    code is written with ``size.bit_length()`` bits where ``size`` is the
    dictionary size at emission time (enough bits for the next code to be
    assigned). No header is written.
    """
    table = {"0": 0, "1": 1}
    out: list[tuple[int, int]] = []
    w = ""
    for c in s:
        wc = w + c
        if wc in table:
            w = wc
            continue
        out.append((table[w], len(table).bit_length()))
        table[wc] = len(table)
        w = c
    if w:
        out.append((table[w], len(table).bit_length()))
    return out


def lzw_compressed_length(s: str) -> int:
    """Total number of code bits emitted by :func:`lzw_codes`."""
    return sum(width for _, width in lzw_codes(s))


def lzw_decode(codes: Iterable[int]) -> str:
    """Inverse of :func:`lzw_codes` (codes only); used to check losslessness."""
    table = ["0", "1"]
    out = []
    prev = None
    for code in codes:
        if code < len(table):
            entry = table[code]
        elif code == len(table) and prev is not None:
            entry = prev + prev[0]
        else:
            raise ValueError(f"bad LZW code {code}")
        out.append(entry)
        if prev is not None:
            table.append(prev + entry[0])
        prev = entry
    return "".join(out)
