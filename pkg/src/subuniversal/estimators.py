"""scikit-learn compatible wrappers.

Each estimator builds an output-frequency distribution in :meth:`fit` and
maps binary strings to complexity estimates in :meth:`transform`, so that
the models can be dropped into pipelines, grid searches and
``clone``/``get_params`` machinery::

    >>> est = TuringMachineCTM(n_states=2).fit()
    >>> est.transform(["0", "01", "0110"]).shape
    (3, 1)

Strings a model never produced get ``NaN``.
"""
from __future__ import annotations

import math
import warnings

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from . import automata, grammars, machines, transducers
from .distributions import EmpiricalDistribution, consolidate
from .strings import DegenerateInputWarning, check_binary, lzw_compressed_length, shannon_entropy


def check_strings(X, *, allow_empty_string: bool = True) -> list[str]:
    """Validate ``X`` as a sequence of binary strings.

    Accepts a list/tuple of ``str``, a 1-D array of strings, or a 2-D
    array with a single column (as pipelines pass it). Returns a list.
    """
    if isinstance(X, str):
        raise TypeError("expected a sequence of binary strings, got a single str")
    arr = np.asarray(X, dtype=object)
    if arr.ndim == 2:
        if arr.shape[1] != 1:
            raise ValueError(f"expected one column of strings, got shape {arr.shape}")
        arr = arr[:, 0]
    elif arr.ndim != 1:
        raise ValueError(f"expected 1-D or single-column input, got {arr.ndim}-D")
    out = []
    for s in arr:
        if not isinstance(s, str):
            raise TypeError(f"binary strings must be str, got {type(s).__name__}")
        check_binary(s)
        if not s and not allow_empty_string:
            raise ValueError("empty string not allowed here")
        out.append(s)
    return out


class _DistributionComplexity(TransformerMixin, BaseEstimator):
    """Base class: subclasses implement ``_build(strings)`` returning an
    :class:`EmpiricalDistribution`."""

    consolidate = False

    def _build(self, strings):
        raise NotImplementedError

    def fit(self, X=None, y=None):
        strings = None if X is None else check_strings(X)
        dist = self._build(strings)
        if self.consolidate:
            dist = consolidate(dist)
        self.distribution_ = dist
        self.n_programs_ = dist.meta.get("total")
        return self

    def score_samples(self, X) -> np.ndarray:
        """``log2`` probability of each string (``-inf`` if unseen)."""
        check_is_fitted(self, "distribution_")
        strings = check_strings(X)
        d = self.distribution_
        total = d.mass
        out = np.full(len(strings), -np.inf)
        for i, s in enumerate(strings):
            c = d.counts.get(s, 0)
            if c > 0:
                out[i] = math.log2(c / total)
        return out

    def transform(self, X) -> np.ndarray:
        """Complexity estimate ``-log2 p(s)``, shape ``(n_samples, 1)``."""
        with np.errstate(invalid="ignore"):
            k = -self.score_samples(X)
        k[np.isinf(k)] = np.nan
        return k.reshape(-1, 1)

    def get_feature_names_out(self, input_features=None):
        return np.array([f"{type(self).__name__.lower()}_complexity"], dtype=object)


class TuringMachineCTM(_DistributionComplexity):
    """Coding-theorem complexity from ``n_states``-state, 2-symbol machines
    run for at most ``cutoff`` steps.

    Parameters
    ----------
    n_states : int
    cutoff : int
        Runtime bound; the busy-beaver value exhausts the space.
    blanks : str
        Blank symbols to run on, e.g. ``"01"``.
    consolidate : bool
        Average over reversal/complement orbits after fitting.
    sample : int or None
        Number of machines to sample uniformly instead of full enumeration.
    random_state : int or None
        Seed for ``sample``.
    n_jobs : int
    """

    def __init__(self, n_states=2, cutoff=None, blanks="01", consolidate=True,
                 sample=None, random_state=None, n_jobs=1):
        self.n_states = n_states
        self.cutoff = cutoff
        self.blanks = blanks
        self.consolidate = consolidate
        self.sample = sample
        self.random_state = random_state
        self.n_jobs = n_jobs

    def _build(self, strings):
        cutoff = self.cutoff or machines.BB_STEPS.get(self.n_states)
        if cutoff is None:
            raise ValueError(f"no default cutoff for {self.n_states} states; set cutoff")
        return machines.ctm_distribution(
            self.n_states, cutoff, [int(b) for b in self.blanks],
            sampler=None if self.sample is None else (self.random_state, self.sample),
            jobs=self.n_jobs)


class NonHaltingTMCTM(_DistributionComplexity):
    """Snapshot frequencies of machines without halting entries."""

    def __init__(self, n_states=2, steps=11, blanks="01", consolidate=True,
                 sample=None, random_state=None, n_jobs=1):
        self.n_states = n_states
        self.steps = steps
        self.blanks = blanks
        self.consolidate = consolidate
        self.sample = sample
        self.random_state = random_state
        self.n_jobs = n_jobs

    def _build(self, strings):
        return machines.nonhalting_tm_distribution(
            self.n_states, self.steps,
            sampler=None if self.sample is None else (self.random_state, self.sample),
            blanks=[int(b) for b in self.blanks], jobs=self.n_jobs)


class CellularAutomatonCTM(_DistributionComplexity):
    def __init__(self, family="elementary", steps=12, consolidate=True, n_jobs=1):
        self.family = family
        self.steps = steps
        self.consolidate = consolidate
        self.n_jobs = n_jobs

    def _build(self, strings):
        return automata.ca_distribution(self.family, self.steps, jobs=self.n_jobs)


class TransducerComplexity(_DistributionComplexity):
    """Finite-state complexity from transducer descriptions of size at most
    ``max_len``.

    ``kind="ap"`` returns ``-log2`` of the algorithmic-probability partial
    sum; ``kind="min"`` returns the minimal description size (exact for
    strings whose minimum is within ``max_len``).
    """

    def __init__(self, max_len=22, kind="ap", scheme=transducers.DEFAULT_SCHEME,
                 consolidate=False):
        self.max_len = max_len
        self.kind = kind
        self.scheme = scheme
        self.consolidate = consolidate

    def _build(self, strings):
        if self.kind not in ("ap", "min"):
            raise ValueError(f"kind must be 'ap' or 'min', got {self.kind!r}")
        self.table_ = transducers.DescriptionTable(self.max_len, self.scheme)
        return self.table_.ap_distribution()

    def transform(self, X):
        if self.kind == "ap":
            return super().transform(X)
        check_is_fitted(self, "table_")
        out = [self.table_.complexity(s) for s in check_strings(X)]
        return np.array([np.nan if k is None else k for k in out], dtype=float).reshape(-1, 1)


class GrammarComplexity(_DistributionComplexity):
    """Fraction of the first ``n_grammars`` CNF grammars generating each
    string. The strings passed to :meth:`fit` are the test set."""

    def __init__(self, n_grammars=40000, consolidate=False):
        self.n_grammars = n_grammars
        self.consolidate = consolidate

    def _build(self, strings):
        if not strings:
            raise ValueError("GrammarComplexity.fit needs the strings to test")
        return grammars.cfg_distribution(grammars.enumerate_grammars(self.n_grammars), strings)


class _StatelessBaseline(TransformerMixin, BaseEstimator):
    def fit(self, X=None, y=None):
        if X is not None:
            check_strings(X)
        return self

    def transform(self, X):
        return np.array([self._value(s) for s in check_strings(X)], dtype=float).reshape(-1, 1)

    def __sklearn_tags__(self):
        tags = super().__sklearn_tags__()
        tags.requires_fit = False
        return tags


class EntropyBaseline(_StatelessBaseline):
    """Per-bit Shannon entropy of each string (0 for the empty string)."""

    def _value(self, s):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", DegenerateInputWarning)
            return shannon_entropy(s)


class LZWBaseline(_StatelessBaseline):
    """LZW code length in bits."""

    def _value(self, s):
        return lzw_compressed_length(s)


def as_distribution(est) -> EmpiricalDistribution:
    check_is_fitted(est, "distribution_")
    return est.distribution_
