"""Enumeration of Chomsky-normal-form grammars over {0, 1}, CYK membership
and the grammar-count output distribution."""
from __future__ import annotations

import itertools
import math
import warnings
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from .distributions import EmpiricalDistribution
from .strings import DegenerateInputWarning, check_binary



@dataclass(frozen=True)
class CnfGrammar:
    """CNF grammar with nonterminals ``1..n_nonterminals``; 1 is the start
    symbol. ``rules`` is a tuple of ``(lhs, rhs)`` pairs."""

    n_nonterminals: int
    rules: tuple

    def __post_init__(self):
        seen = set()
        for lhs, rhs in self.rules:
            if not 1 <= lhs <= self.n_nonterminals:
                raise ValueError(f"lhs {lhs} outside 1..{self.n_nonterminals}")
            if isinstance(rhs, str):
                if rhs not in ("0", "1"):
                    raise ValueError(f"terminal must be '0' or '1', got {rhs!r}")
            else:
                b, c = rhs
                if not (1 <= b <= self.n_nonterminals and 1 <= c <= self.n_nonterminals):
                    raise ValueError(f"rhs {rhs} references unknown nonterminal")
            if (lhs, rhs) in seen:
                raise ValueError(f"duplicate rule {lhs} -> {rhs}")
            seen.add((lhs, rhs))

    @property
    def n_rules(self) -> int:
        return len(self.rules)

    def structure(self) -> tuple[int, ...]:
        sizes = [0] * self.n_nonterminals
        for lhs, _ in self.rules:
            sizes[lhs - 1] += 1
        return tuple(sizes)

    def mirror(self) -> CnfGrammar:
        """Swap every binary right-hand side; generates reversed strings."""
        return CnfGrammar(self.n_nonterminals, tuple(
            (lhs, rhs if isinstance(rhs, str) else (rhs[1], rhs[0])) for lhs, rhs in self.rules))

    def relabel(self) -> CnfGrammar:
        """Swap the terminals 0 and 1; generates complemented strings."""
        swap = {"0": "1", "1": "0"}
        return CnfGrammar(self.n_nonterminals, tuple(
            (lhs, swap.get(rhs, rhs) if isinstance(rhs, str) else rhs) for lhs, rhs in self.rules))

    def __str__(self) -> str:
        def show(r):
            return r if isinstance(r, str) else f"X{r[0]}X{r[1]}"
        return "; ".join(f"X{lhs}->{show(rhs)}" for lhs, rhs in self.rules)


def pairing(n: int, p: int) -> int:
    """Grammar complexity index of ``n`` nonterminals and ``p`` productions."""
    if n < 1 or p < 1:
        raise ValueError("n and p must be positive")
    return (p + n - 1) * (p + n - 2) // 2 + n


def pairing_inverse(c: int) -> tuple[int, int]:
    if c < 1:
        raise ValueError("c must be positive")
    # largest t with t(t+1)/2 < c
    t = (math.isqrt(8 * c - 7) - 1) // 2
    while t * (t + 1) // 2 >= c:
        t -= 1
    while (t + 1) * (t + 2) // 2 < c:
        t += 1
    n = c - t * (t + 1) // 2
    return n, t + 2 - n


def structures(n: int, p: int) -> list[tuple[int, ...]]:
    """Compositions of ``p`` into ``n`` positive parts, lexicographic."""
    if n < 1 or p < n:
        return []
    out = []
    for cuts in itertools.combinations(range(1, p), n - 1):
        bounds = (0,) + cuts + (p,)
        out.append(tuple(b - a for a, b in zip(bounds, bounds[1:])))
    return out


def rhs_sequence(n: int) -> list:
    """Terminals first, then all ordered nonterminal pairs."""
    return ["0", "1"] + [(b, c) for b in range(1, n + 1) for c in range(1, n + 1)]


def class_size(structure: Sequence[int], n_rhs: int) -> int:
    return math.prod(math.comb(n_rhs, k) for k in structure)


def grammars_in_class(c: int) -> Iterator[CnfGrammar]:
    """All grammars of complexity ``c``: structure classes in order; within
    one, each nonterminal's right-hand-side subset in
    ``itertools.combinations`` order, the first nonterminal varying
    slowest."""
    n, p = pairing_inverse(c)
    rhs = rhs_sequence(n)
    for structure in structures(n, p):
        rows = [list(itertools.combinations(range(len(rhs)), k)) for k in structure]
        for choice in itertools.product(*rows):
            rules = tuple((i + 1, rhs[j]) for i, row in enumerate(choice) for j in row)
            yield CnfGrammar(n, rules)


def iter_grammars() -> Iterator[tuple[int, CnfGrammar]]:
    """``(c, grammar)`` for every grammar in order of increasing ``c``."""
    for c in itertools.count(1):
        for g in grammars_in_class(c):
            yield c, g


def enumerate_grammars(limit: int) -> list[tuple[int, CnfGrammar]]:
    """The first ``limit`` grammars of the enumeration, with their class."""
    if limit < 1:
        raise ValueError("limit must be >= 1")
    return list(itertools.islice(iter_grammars(), limit))


# -- membership ----------------------------------------------------------------

def cyk_member(g: CnfGrammar, s: str) -> bool:
    """CYK recognition of ``s`` by ``g`` from nonterminal 1.

    The empty string is never generated (no epsilon rules); asking about it
    returns False with a :class:`DegenerateInputWarning`.
    """
    check_binary(s)
    if not s:
        warnings.warn("CNF grammars without epsilon rules never generate the empty string",
                      DegenerateInputWarning, stacklevel=2)
        return False
    n = len(s)
    term = {"0": 0, "1": 0}
    binary = []
    for lhs, rhs in g.rules:
        bit = 1 << (lhs - 1)
        if isinstance(rhs, str):
            term[rhs] |= bit
        else:
            binary.append((bit, 1 << (rhs[0] - 1), 1 << (rhs[1] - 1)))
    # table[i][l-1]: bitmask of nonterminals deriving s[i:i+l]
    table = [[0] * (n - i) for i in range(n)]
    for i, ch in enumerate(s):
        table[i][0] = term[ch]
    for length in range(2, n + 1):
        for i in range(n - length + 1):
            acc = 0
            for k in range(1, length):
                left = table[i][k - 1]
                right = table[i + k][length - k - 1]
                if not left or not right:
                    continue
                for bit, b, c in binary:
                    if left & b and right & c:
                        acc |= bit
            table[i][length - 1] = acc
    return bool(table[0][n - 1] & 1)


def language_upto(g: CnfGrammar, max_len: int) -> list[np.ndarray]:
    """Boolean membership arrays for the start symbol: entry ``l`` has
    shape ``(2**l,)`` and marks which ``l``-bit strings (read as integers)
    the grammar generates. Entry 0 is always all-false."""
    n = g.n_nonterminals
    term = [[False, False] for _ in range(n)]
    binary = []
    for lhs, rhs in g.rules:
        if isinstance(rhs, str):
            term[lhs - 1][int(rhs)] = True
        else:
            binary.append((lhs - 1, rhs[0] - 1, rhs[1] - 1))
    # lang[a][l] : bool array of size 2**l
    lang = [[np.zeros(1, dtype=bool), np.array(term[a], dtype=bool)] for a in range(n)]
    nonempty = [[False, bool(any(term[a]))] for a in range(n)]
    for length in range(2, max_len + 1):
        for a in range(n):
            lang[a].append(np.zeros(1 << length, dtype=bool))
            nonempty[a].append(False)
        for a, b, c in binary:
            target = lang[a][length]
            for k in range(1, length):
                if nonempty[b][k] and nonempty[c][length - k]:
                    target |= np.logical_and.outer(lang[b][k], lang[c][length - k]).ravel()
        for a in range(n):
            nonempty[a][length] = bool(lang[a][length].any())
    return lang[0]


def generated_strings(g: CnfGrammar, max_len: int) -> set[str]:
    out = set()
    for length, arr in enumerate(language_upto(g, max_len)):
        for i in np.flatnonzero(arr):
            out.add(format(int(i), f"0{length}b"))
    return out


def cfg_distribution(grammars: Iterable, strings: Sequence[str]) -> EmpiricalDistribution:
    """For each string, the number of grammars generating it.

    ``grammars`` may hold :class:`CnfGrammar` objects or ``(c, grammar)``
    pairs. Every tested string is kept in the result, with count 0 if no
    grammar produced it; ``meta['total']`` is the number of grammars, so
    ``counts[s] / meta['total']`` is the grammar fraction.
    """
    strings = list(strings)
    if not strings:
        raise ValueError("no strings to test")
    for s in strings:
        check_binary(s)
    max_len = max(len(s) for s in strings)
    index = [(len(s), int(s, 2) if s else 0) for s in strings]
    counts = [0] * len(strings)
    total = 0
    for g in grammars:
        if isinstance(g, tuple):
            g = g[1]
        total += 1
        lang = language_upto(g, max_len)
        for k, (length, i) in enumerate(index):
            if length and lang[length][i]:
                counts[k] += 1
    if total == 0:
        raise ValueError("no grammars given")
    return EmpiricalDistribution(dict(zip(strings, counts)), {
        "model": "cfg", "params": {"grammars": total, "strings": len(strings)}, "total": total})


def grammar_fractions(d: EmpiricalDistribution) -> dict[str, float]:
    """``|{G : s in L(G)}| / |{G}|`` for every tested string."""
    total = d.meta["total"]
    return {s: c / total for s, c in d.counts.items()}


def derivable_upto(g: CnfGrammar, max_len: int) -> set[str]:
    """Brute-force oracle: breadth-first leftmost expansion of sentential
    forms from the start symbol, pruned at ``max_len`` symbols."""
    by_lhs: dict[int, list] = {}
    for lhs, rhs in g.rules:
        by_lhs.setdefault(lhs, []).append(rhs)
    out: set[str] = set()
    frontier = {(1,)}
    seen = set(frontier)
    while frontier:
        nxt = set()
        for form in frontier:
            pos = next((i for i, x in enumerate(form) if isinstance(x, int)), None)
            if pos is None:
                out.add("".join(form))
                continue
            for rhs in by_lhs.get(form[pos], ()):
                new = form[:pos] + ((rhs,) if isinstance(rhs, str) else rhs) + form[pos + 1:]
                # CNF forms never shrink, so longer forms are dead ends
                if len(new) <= max_len and new not in seen:
                    seen.add(new)
                    nxt.add(new)
        frontier = nxt
    return out
