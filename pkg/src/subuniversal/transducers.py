"""Finite-state transducers, their self-delimiting binary encodings, the
finite-state output distributions and finite-state complexity.

A transducer with states ``1..n`` is described by a binary string ``sigma``
(its encoding) and fed an input ``p``; the pair describes the output string
and has size ``len(sigma) + len(p)``.
"""
from __future__ import annotations

import math
import warnings
from collections import Counter, defaultdict
from dataclasses import dataclass
from typing import Iterator, NamedTuple

from .distributions import EmpiricalDistribution
from .strings import DegenerateInputWarning, all_strings, check_binary

MIN_ENCODING_LENGTH = 8


class Transition(NamedTuple):
    next_state: int
    output: str


@dataclass(frozen=True)
class Transducer:
    """``delta[2*(i-1) + b]`` is the transition taken in state ``i`` on
    input bit ``b``."""

    delta: tuple[Transition, ...]

    def __post_init__(self):
        if not self.delta or len(self.delta) % 2:
            raise ValueError("a transducer needs 2 transitions per state")
        n = len(self.delta) // 2
        for j, v in self.delta:
            if not 1 <= j <= n:
                raise ValueError(f"next state {j} outside 1..{n}")
            check_binary(v)

    @property
    def n_states(self) -> int:
        return len(self.delta) // 2

    @classmethod
    def from_table(cls, table) -> Transducer:
        """Build from ``{(state, bit): (next_state, output)}``."""
        n = max(i for i, _ in table)
        return cls(tuple(Transition(*table[i, b]) for i in range(1, n + 1) for b in (0, 1)))

    def __call__(self, p: str) -> str:
        return run_transducer(self, p)


EPSILON_MACHINE = Transducer((Transition(1, ""), Transition(1, "")))
IDENTITY = Transducer((Transition(1, "0"), Transition(1, "1")))


def run_transducer(t: Transducer, p: str) -> str:
    """Output of ``t`` on input ``p`` starting in state 1."""
    delta = t.delta
    state = 1
    out = []
    for bit in p:
        state, v = delta[2 * (state - 1) + (bit == "1")]
        out.append(v)
    return "".join(out)


# -- encoding schemes --------------------------------------------------------

class EncodingError(ValueError):
    pass


class DoubledBitScheme:
    """Default encoding.

    ``sigma`` is the concatenation of ``2n`` blocks, one per transition in
    the order (1,0), (1,1), (2,0), ..., (n,1). The block for a transition to
    state ``j`` with output ``v`` is::

        dbl(bin(j - 1)) + "01" + dbl(v) + "01"

    where ``dbl`` doubles every bit and ``bin(0)`` is empty (no leading
    zeros otherwise). ``"01"`` closes a field and ``"10"`` is illegal.
    The number of states is implied by the number of blocks, so the set of
    valid encodings is not prefix-free.
    """

    scheme_id = "dbl01"

    @staticmethod
    def _dbl(bits: str) -> str:
        return "".join(b + b for b in bits)

    def encode(self, t: Transducer) -> str:
        parts = []
        for j, v in t.delta:
            state_bits = format(j - 1, "b") if j > 1 else ""
            parts.append(self._dbl(state_bits) + "01" + self._dbl(v) + "01")
        return "".join(parts)

    def encoded_size(self, t: Transducer) -> int:
        return sum(4 + 2 * ((j - 1).bit_length() + len(v)) for j, v in t.delta)

    @staticmethod
    def _field(tau: str, pos: int) -> tuple[str, int] | None:
        """Read one doubled field ending with ``"01"``; ``None`` if illegal
        or truncated."""
        bits = []
        n = len(tau)
        while pos + 1 < n:
            pair = tau[pos:pos + 2]
            pos += 2
            if pair == "01":
                return "".join(bits), pos
            if pair == "00":
                bits.append("0")
            elif pair == "11":
                bits.append("1")
            else:
                return None
        return None

    def blocks(self, tau: str) -> Iterator[tuple[Transition, int]]:
        """Parse consecutive blocks from the start of ``tau``, yielding each
        transition with the position just after it; stops at the first
        malformed or incomplete block."""
        pos = 0
        while True:
            got = self._field(tau, pos)
            if got is None:
                return
            state_bits, pos = got
            if state_bits.startswith("0"):
                return
            got = self._field(tau, pos)
            if got is None:
                return
            v, pos = got
            j = int(state_bits, 2) + 1 if state_bits else 1
            yield Transition(j, v), pos

    def prefixes(self, tau: str) -> Iterator[tuple[Transducer, int]]:
        """All ``(transducer, len(sigma))`` with ``sigma`` a valid encoding
        that is a prefix of ``tau``, by increasing length."""
        delta: list[Transition] = []
        top = 0
        for tr, pos in self.blocks(tau):
            delta.append(tr)
            top = max(top, tr.next_state)
            if len(delta) % 2 == 0 and top <= len(delta) // 2:
                yield Transducer(tuple(delta)), pos

    def decode(self, sigma: str) -> Transducer:
        for t, end in self.prefixes(sigma):
            if end == len(sigma):
                return t
        raise EncodingError(f"not a valid {self.scheme_id} encoding: {sigma!r}")

    def is_valid(self, sigma: str) -> bool:
        return any(end == len(sigma) for _, end in self.prefixes(sigma))

    def enumerate(self, max_length: int) -> Iterator[tuple[Transducer, int]]:
        """Every transducer whose encoding has at most ``max_length`` bits,
        with that length. Order: by number of states, then block by block."""
        n = 1
        while 8 * n <= max_length:
            # cheapest block costs 4 bits
            yield from self._enumerate_n(n, max_length)
            n += 1

    def _enumerate_n(self, n: int, budget: int):
        per_state_cost = [4 + 2 * (j - 1).bit_length() for j in range(1, n + 1)]
        slots = 2 * n

        def rec(k, remaining, acc):
            if k == slots:
                yield Transducer(tuple(acc)), budget - remaining
                return
            reserve = 4 * (slots - k - 1)
            for j in range(1, n + 1):
                base = per_state_cost[j - 1]
                room = remaining - reserve - base
                if room < 0:
                    continue
                for ln in range(room // 2 + 1):
                    for v in all_strings(ln):
                        acc.append(Transition(j, v))
                        yield from rec(k + 1, remaining - base - 2 * ln, acc)
                        acc.pop()

        yield from rec(0, budget, [])


SCHEMES = {DoubledBitScheme.scheme_id: DoubledBitScheme()}
DEFAULT_SCHEME = DoubledBitScheme.scheme_id


def get_scheme(scheme_id: str | None = None):
    try:
        return SCHEMES[scheme_id or DEFAULT_SCHEME]
    except KeyError:
        raise ValueError(f"unknown encoding scheme {scheme_id!r}; known: {sorted(SCHEMES)}") from None


def register_scheme(scheme) -> None:
    SCHEMES[scheme.scheme_id] = scheme


@dataclass(frozen=True)
class TransducerEncoding:
    sigma: str
    scheme_id: str = DEFAULT_SCHEME

    def decode(self) -> Transducer:
        return get_scheme(self.scheme_id).decode(self.sigma)

    def __len__(self) -> int:
        return len(self.sigma)


def encode_transducer(t: Transducer, scheme: str | None = None) -> TransducerEncoding:
    sch = get_scheme(scheme)
    return TransducerEncoding(sch.encode(t), sch.scheme_id)


def decode_transducer(sigma: str, scheme: str | None = None) -> Transducer:
    return get_scheme(scheme).decode(sigma)


def decode_splits(tau: str, scheme: str | None = None) -> list[tuple[TransducerEncoding, str]]:
    """Every way of writing ``tau`` as ``sigma + p`` with ``sigma`` a valid
    encoding, by increasing ``len(sigma)``."""
    sch = get_scheme(scheme)
    return [(TransducerEncoding(tau[:end], sch.scheme_id), tau[end:])
            for _, end in sch.prefixes(tau)]


# -- enumerating descriptions ------------------------------------------------

def _outputs_by_input_length(t: Transducer, max_input: int):
    """Yield ``(len(p), output)`` for every input ``p`` with
    ``len(p) <= max_input`` (depth-first over the input tree)."""
    delta = t.delta
    stack = [(1, 0, "")]
    while stack:
        state, depth, out = stack.pop()
        yield depth, out
        if depth == max_input:
            continue
        base = 2 * (state - 1)
        for b in (1, 0):
            j, v = delta[base + b]
            stack.append((j, depth + 1, out + v))


def description_histograms(max_len: int, scheme: str | None = None,
                           min_len: int = 0) -> dict[int, Counter]:
    """Per description size ``n`` (``min_len <= n <= max_len``), a Counter
    of output strings over all valid ``(sigma, p)`` pairs of that size.

    This enumerates transducers directly; :func:`scan_histogram` gets the
    same counts by scanning every ``tau`` and is the independent check.
    """
    sch = get_scheme(scheme)
    hist: dict[int, Counter] = defaultdict(Counter)
    for t, m in sch.enumerate(max_len):
        for plen, out in _outputs_by_input_length(t, max_len - m):
            if m + plen >= min_len:
                hist[m + plen][out] += 1
    return {n: hist[n] for n in range(min_len, max_len + 1)}


def scan_histogram(n: int, scheme: str | None = None) -> Counter:
    """Output counts at description size ``n`` by testing every ``tau`` of
    length ``n`` for valid ``sigma + p`` splits."""
    sch = get_scheme(scheme)
    hist: Counter = Counter()
    for tau in all_strings(n):
        for t, end in sch.prefixes(tau):
            hist[run_transducer(t, tau[end:])] += 1
    return hist


def encoding_counts(max_len: int, scheme: str | None = None) -> Counter:
    """Number of valid encodings of each exact length."""
    return Counter(m for _, m in get_scheme(scheme).enumerate(max_len))


def pair_count(n: int, scheme: str | None = None) -> int:
    """Number of valid ``(sigma, p)`` pairs with ``len(sigma)+len(p) == n``."""
    counts = encoding_counts(n, scheme)
    return sum(k << (n - m) for m, k in counts.items())


def fsa_distribution(n: int, scheme: str | None = None,
                     _hist: Counter | None = None) -> EmpiricalDistribution:
    """Output distribution over all descriptions of size exactly ``n``.

    Raw counts are description-pair counts, so probabilities are normalised
    by the number of valid pairs.
    """
    sch = get_scheme(scheme)
    meta = {"model": "fsa", "params": {"n": n, "scheme": sch.scheme_id}}
    if n < MIN_ENCODING_LENGTH:
        warnings.warn(f"no encoding is shorter than {MIN_ENCODING_LENGTH} bits; "
                      "distribution is empty", DegenerateInputWarning, stacklevel=2)
        return EmpiricalDistribution({}, {**meta, "total": 0, "empty": True})
    hist = _hist if _hist is not None else description_histograms(n, sch.scheme_id, min_len=n)[n]
    return EmpiricalDistribution(dict(hist), {**meta, "total": sum(hist.values())})


def fsa_distributions(lo: int, hi: int, scheme: str | None = None) -> dict[int, EmpiricalDistribution]:
    """``fsa_distribution(n)`` for every ``lo <= n <= hi`` from one pass."""
    hists = description_histograms(hi, scheme, min_len=lo)
    return {n: fsa_distribution(n, scheme, _hist=hists[n]) for n in range(lo, hi + 1)}


class DescriptionTable:
    """Minimal description size, algorithmic-probability partial sums and a
    witness for every string produced by descriptions of size at most
    ``max_len``."""

    def __init__(self, max_len: int, scheme: str | None = None):
        sch = get_scheme(scheme)
        self.max_len = max_len
        self.scheme_id = sch.scheme_id
        best: dict[str, tuple[int, str, str]] = {}
        # integer numerators over 2**max_len keep the AP sums exact
        ap: Counter = Counter()
        for t, m in sch.enumerate(max_len):
            sigma = None
            delta = t.delta
            stack = [(1, "", "")]
            while stack:
                state, p, out = stack.pop()
                size = m + len(p)
                ap[out] += 1 << (max_len - size)
                cur = best.get(out)
                if cur is None or size < cur[0]:
                    if sigma is None:
                        sigma = sch.encode(t)
                    best[out] = (size, sigma, p)
                if size == max_len:
                    continue
                base = 2 * (state - 1)
                for b, bit in ((1, "1"), (0, "0")):
                    j, v = delta[base + b]
                    stack.append((j, p + bit, out + v))
        self._best = best
        self._ap = ap

    def __contains__(self, s: str) -> bool:
        return s in self._best

    @property
    def support(self) -> list[str]:
        return sorted(self._best, key=lambda s: (len(s), s))

    def complexity(self, s: str) -> int | None:
        got = self._best.get(s)
        return None if got is None else got[0]

    def witness(self, s: str) -> tuple[str, str] | None:
        got = self._best.get(s)
        return None if got is None else got[1:]

    def ap_numerator(self, s: str) -> int:
        return self._ap.get(s, 0)

    def ap(self, s: str) -> float:
        return math.ldexp(self._ap.get(s, 0), -self.max_len)

    def ap_complexity(self, s: str) -> float | None:
        num = self._ap.get(s, 0)
        if num == 0:
            return None
        return self.max_len - math.log2(num)

    def ap_distribution(self) -> EmpiricalDistribution:
        """AP partial sums as a histogram (counts in units of
        ``2**-max_len``)."""
        return EmpiricalDistribution(dict(self._ap), {
            "model": "fsa_ap", "params": {"max_len": self.max_len, "scheme": self.scheme_id}})


def fsa_ap(s: str, max_len: int, scheme: str | None = None) -> float:
    """Sum of ``2**-(len(sigma)+len(p))`` over descriptions of ``s`` with
    size at most ``max_len``."""
    check_binary(s)
    return DescriptionTable(max_len, scheme).ap(s)


def fsa_ap_complexity(s: str, max_len: int, scheme: str | None = None) -> float | None:
    """``-log2 fsa_ap(s, max_len)``; ``None`` when no description exists."""
    check_binary(s)
    return DescriptionTable(max_len, scheme).ap_complexity(s)


def identity_size(scheme: str | None = None) -> int:
    return len(encode_transducer(IDENTITY, scheme).sigma)


def shortest_input(t: Transducer, s: str) -> str | None:
    """Shortest ``p`` with ``t(p) == s`` (breadth-first over
    ``(state, characters of s produced)``), or ``None``."""
    start = (1, 0)
    parent = {start: None}
    frontier = [start]
    while frontier:
        nxt = []
        for node in frontier:
            state, i = node
            if i == len(s):
                bits = []
                while parent[node] is not None:
                    node, bit = parent[node]
                    bits.append(bit)
                return "".join(reversed(bits))
            base = 2 * (state - 1)
            for b in (0, 1):
                j, v = t.delta[base + b]
                if s.startswith(v, i):
                    child = (j, i + len(v))
                    if child not in parent:
                        parent[child] = (node, str(b))
                        nxt.append(child)
        frontier = nxt
    return None


def fsa_complexity(s: str, scheme: str | None = None) -> int:
    """Finite-state complexity: the minimal ``len(sigma) + len(p)`` over
    descriptions of ``s``.

    Transducers are tried in order of encoding length, each with its
    shortest input for ``s``; the identity transducer bounds the search.
    """
    check_binary(s)
    return fsa_witness(s, scheme)[0]


def fsa_witness(s: str, scheme: str | None = None) -> tuple[int, str, str]:
    """``(complexity, sigma, p)`` of a minimal description of ``s``."""
    sch = get_scheme(scheme)
    best = (len(s) + identity_size(sch.scheme_id), sch.encode(IDENTITY), s)
    for t, m in sorted(sch.enumerate(best[0]), key=lambda x: x[1]):
        if m >= best[0]:
            break
        p = shortest_input(t, s)
        if p is not None and m + len(p) < best[0]:
            best = (m + len(p), sch.encode(t), p)
    return best


def fsa_complexities(max_string_len: int, scheme: str | None = None) -> dict[str, int]:
    """``fsa_complexity`` for every string of length ``<= max_string_len``
    from a single table."""
    table = DescriptionTable(max_string_len + identity_size(scheme), scheme)
    return {s: table.complexity(s)
            for n in range(max_string_len + 1) for s in all_strings(n)}


def description_pairs(n: int, scheme: str | None = None) -> Iterator[tuple[str, str, int, str]]:
    """Every valid description of size exactly ``n`` as
    ``(sigma, p, number of states, output)``, ordered by ``sigma + p``."""
    sch = get_scheme(scheme)
    rows = []
    for t, m in sch.enumerate(n):
        sigma = sch.encode(t)
        for p in all_strings(n - m):
            rows.append((sigma, p, t.n_states, run_transducer(t, p)))
    rows.sort(key=lambda r: (r[0] + r[1], len(r[0])))
    return iter(rows)
