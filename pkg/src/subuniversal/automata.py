"""Non-halting cellular automata: the 256 elementary rules and the 65,536
rules whose neighbourhood is two cells to the left, the cell itself and one
cell to the right.

Runs start from a single cell differing from a uniform background. Row ``t``
is the light-cone window, i.e. every cell that the seed can have affected
after ``t`` steps; the background outside it evolves uniformly.
"""
from __future__ import annotations

import functools
from collections import Counter
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .distributions import EmpiricalDistribution
from .parallel import Checkpoint, config_hash, run_units, split_range

FAMILIES = {
    # name: (cells to the left, cells to the right)
    "elementary": (1, 1),
    "general": (2, 1),
}
MAX_WINDOW = 12


@dataclass(frozen=True)
class CaRule:
    family: str
    rule_number: int

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if not 0 <= self.rule_number < family_size(self.family):
            raise ValueError(f"rule {self.rule_number} out of range for {self.family}")

    @property
    def neighborhood(self) -> int:
        left, right = FAMILIES[self.family]
        return left + right + 1


def family_size(family: str) -> int:
    left, right = FAMILIES[family]
    return 1 << (1 << (left + right + 1))


def _table(rule: int, k: int) -> list[int]:
    return [(rule >> v) & 1 for v in range(1 << k)]


def _from_table(bits: Sequence[int]) -> int:
    return sum(b << v for v, b in enumerate(bits))


def conjugate_rule(r: CaRule) -> CaRule:
    """The rule obtained by swapping 0 and 1 in inputs and output."""
    k = r.neighborhood
    t = _table(r.rule_number, k)
    full = (1 << k) - 1
    return CaRule(r.family, _from_table([1 - t[full ^ v] for v in range(1 << k)]))


def mirror_rule(r: CaRule) -> CaRule:
    """The rule whose light-cone rows are the reversed rows of ``r``.

    Reading the neighbourhood backwards gives a rule with the left and
    right extents swapped; for the asymmetric family it is re-expressed on
    the same neighbourhood by shifting one cell per step, which the
    light-cone window absorbs.
    """
    k = r.neighborhood
    t = _table(r.rule_number, k)

    def rev(v):
        return int(format(v, f"0{k}b")[::-1], 2)

    return CaRule(r.family, _from_table([t[rev(v)] for v in range(1 << k)]))


def _evolve(rules: np.ndarray, family: str, steps: int, background: int) -> list[np.ndarray]:
    """Rows ``t = 1..steps`` for a batch of rules; row ``t`` has shape
    ``(len(rules), (left+right)*t + 1)``."""
    left, right = FAMILIES[family]
    span = left + right
    rules = rules.astype(np.int64)
    m = len(rules)
    bg = np.full(m, background, np.int64)
    row = np.full((m, 1), 1 - background, np.int64)
    rows = []
    for _ in range(steps):
        pad = np.repeat(bg[:, None], span, axis=1)
        padded = np.concatenate([pad, row, pad], axis=1)
        width = row.shape[1] + span
        value = np.zeros((m, width), np.int64)
        for k in range(span + 1):
            value = (value << 1) | padded[:, k:k + width]
        row = (rules[:, None] >> value) & 1
        bg = (rules >> (bg * ((1 << (span + 1)) - 1))) & 1
        rows.append(row)
    return rows


def ca_evolve(rule: CaRule, steps: int, background: int = 0) -> list[str]:
    """Light-cone rows for ``t = 1..steps`` from a single ``1`` on a ``0``
    background (or the complement when ``background`` is 1)."""
    if steps < 1:
        raise ValueError("steps must be >= 1")
    rows = _evolve(np.array([rule.rule_number]), rule.family, steps, background)
    return ["".join(map(str, r[0])) for r in rows]


def _row_strings(block: np.ndarray) -> list[str]:
    chars = (block + 48).astype(np.uint8)
    w = block.shape[1]
    raw = chars.tobytes()
    return [raw[i * w:(i + 1) * w].decode() for i in range(block.shape[0])]


def windows(row: str, size: int = MAX_WINDOW) -> list[tuple[str, float]]:
    """Centered ``size``-cell window(s) of a row with weights summing to 1.

    Rows no longer than ``size`` are kept whole. When the surplus is odd no
    window is exactly centered, so the two nearest ones share the weight;
    this keeps window extraction symmetric under reversal.
    """
    extra = len(row) - size
    if extra <= 0:
        return [(row, 1.0)]
    a = extra // 2
    if extra % 2 == 0:
        return [(row[a:a + size], 1.0)]
    return [(row[a:a + size], 0.5), (row[a + 1:a + 1 + size], 0.5)]


def _ca_unit(unit, family, steps, backgrounds):
    lo, hi = unit
    counts: Counter = Counter()
    rules = np.arange(lo, hi, dtype=np.int64)
    for bg in backgrounds:
        for block in _evolve(rules, family, steps, bg):
            for s, c in Counter(_row_strings(block)).items():
                for w, share in windows(s):
                    counts[w] += share * c
    return sorted(counts.items())


def ca_distribution(family: str, steps: int = 12, backgrounds: Sequence[int] = (0, 1), *,
                    jobs: int = 1, checkpoint=None) -> EmpiricalDistribution:
    """Row-window counts over every rule of ``family`` for ``t = 1..steps``
    and each background. Each row contributes total weight 1."""
    if steps < 1:
        raise ValueError("steps must be >= 1")
    if family not in FAMILIES:
        raise ValueError(f"unknown family {family!r}")
    backgrounds = tuple(sorted(set(backgrounds)))
    size = family_size(family)
    units = split_range(0, size, max(1, size // 4096))
    worker = functools.partial(_ca_unit, family=family, steps=steps, backgrounds=backgrounds)
    job = {"model": "ca", "family": family, "steps": steps, "backgrounds": backgrounds}
    ckpt = Checkpoint(checkpoint, config_hash(job)) if checkpoint else None
    counts: Counter = Counter()
    for part in run_units(worker, units, jobs, ckpt):
        for s, c in part:
            counts[s] += c
    return EmpiricalDistribution(dict(counts), {
        "model": f"ca_{family}",
        "params": {"family": family, "steps": steps,
                   "backgrounds": "".join(map(str, backgrounds))},
        "total": size * len(backgrounds),
        "rows": size * len(backgrounds) * steps,
        "conventions": {"seed": "single-cell", "window": MAX_WINDOW}})
