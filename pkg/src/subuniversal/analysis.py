"""Cross-model comparison: rank correlations over shared support, missed
strings and entropy/compression baselines."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Mapping, Sequence

import numpy as np
from scipy import stats

from .distributions import EmpiricalDistribution, complexity_table
from .strings import DegenerateInputWarning, lzw_compressed_length, shannon_entropy

METHODS = ("kendall", "spearman", "pearson")


@dataclass(frozen=True)
class RankComparison:
    model_a: str
    model_b: str
    shared_support: tuple[str, ...]
    kendall: float | None
    spearman: float | None
    pearson: float | None

    def get(self, method: str) -> float | None:
        return getattr(self, method)


def shared_support(d1: EmpiricalDistribution, d2: EmpiricalDistribution) -> list[str]:
    s2 = set(d2.support)
    return sorted((s for s in d1.support if s in s2), key=lambda s: (len(s), s))


def _values(d: EmpiricalDistribution, strings: Sequence[str]) -> np.ndarray:
    total = d.mass
    return np.array([d.counts[s] / total for s in strings], dtype=float)


def _correlate(x: np.ndarray, y: np.ndarray, method: str) -> float | None:
    if len(x) < 2 or np.all(x == x[0]) or np.all(y == y[0]):
        return None
    if method == "kendall":
        r = stats.kendalltau(x, y, variant="b").statistic
    elif method == "spearman":
        r = stats.spearmanr(x, y).statistic
    elif method == "pearson":
        # on -log2 p, the scale complexities live on
        r = stats.pearsonr(-np.log2(x), -np.log2(y)).statistic
    else:
        raise ValueError(f"unknown method {method!r}; use one of {METHODS}")
    return None if math.isnan(r) else float(r)


def rank_correlation(d1: EmpiricalDistribution, d2: EmpiricalDistribution,
                     method: str = "kendall") -> float | None:
    """Correlation of the two distributions over their shared support.

    Kendall is the tie-adjusted tau-b, Spearman uses average ranks, Pearson
    is computed on ``-log2`` probabilities. ``None`` when fewer than two
    strings are shared or one side is constant there.
    """
    common = shared_support(d1, d2)
    return _correlate(_values(d1, common), _values(d2, common), method)


def compare(d1: EmpiricalDistribution, d2: EmpiricalDistribution,
            name_a: str | None = None, name_b: str | None = None) -> RankComparison:
    common = shared_support(d1, d2)
    x, y = _values(d1, common), _values(d2, common)
    return RankComparison(name_a or d1.model or "a", name_b or d2.model or "b", tuple(common),
                          *(_correlate(x, y, m) for m in METHODS))


def compare_matrix(dists: Mapping[str, EmpiricalDistribution] | Sequence[EmpiricalDistribution],
                   reference: str | EmpiricalDistribution | None = None
                   ) -> dict[str, dict[str, RankComparison]]:
    """All pairwise comparisons, keyed ``[row][column]`` in input order.

    ``reference`` (a name in ``dists`` or an extra distribution, stored as
    ``"reference"``) is placed first.
    """
    if not isinstance(dists, Mapping):
        dists = {f"{d.model or 'd'}#{i}": d for i, d in enumerate(dists)}
    named = dict(dists)
    if isinstance(reference, EmpiricalDistribution):
        named = {"reference": reference, **named}
    elif reference is not None:
        if reference not in named:
            raise KeyError(f"reference {reference!r} not among the distributions")
        named = {reference: named[reference], **{k: v for k, v in named.items() if k != reference}}
    if len(named) < 2:
        raise ValueError("need at least two distributions")
    return {a: {b: compare(named[a], named[b], a, b) for b in named} for a in named}


def missed_strings(weak: EmpiricalDistribution, strong: EmpiricalDistribution, k: int) -> list[str]:
    """The ``k`` most complex strings of ``strong`` (by ``-log2`` frequency)
    that ``weak`` never produces, most complex first."""
    if k < 1:
        raise ValueError("k must be >= 1")
    have = set(weak.support)
    cx = complexity_table(strong)
    missing = [s for s in cx if s not in have]
    missing.sort(key=lambda s: (-cx[s], len(s), s))
    return missing[:k]


def baseline_rankings(strings: Sequence[str]) -> tuple[EmpiricalDistribution, EmpiricalDistribution]:
    """Pseudo-distributions ranking ``strings`` by per-bit Shannon entropy and
    by LZW code length; lower values get higher pseudo-probability
    (``2**-value``). Only the induced ordering is meaningful."""
    strings = list(dict.fromkeys(strings))
    if not strings:
        raise ValueError("no strings")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", DegenerateInputWarning)
        ent = {s: 2.0 ** -shannon_entropy(s) for s in strings}
    lzw = {s: 2.0 ** -lzw_compressed_length(s) for s in strings}
    meta = {"pseudo": True, "params": {"strings": len(strings)}}
    return (EmpiricalDistribution(ent, {"model": "entropy", **meta}),
            EmpiricalDistribution(lzw, {"model": "lzw", **meta}))
