"""Output-frequency histograms: consolidation, probability/complexity views,
merging and persistence."""
from __future__ import annotations

import csv
import io
import json
import math
from collections import Counter
from pathlib import Path
from types import MappingProxyType
from typing import Any, Iterable, Mapping

from .strings import check_binary, complement, from_text, orbit, reverse, to_text

FORMAT_VERSION = 1

# meta keys that describe a partition of a run rather than the run itself
_ADDITIVE_META = ("total", "halting")
_PARTITION_META = ("range",)


class IncompatibleDistributions(ValueError):
    pass


def _freeze(obj):
    if isinstance(obj, Mapping):
        return MappingProxyType({k: _freeze(v) for k, v in obj.items()})
    if isinstance(obj, list):
        return tuple(_freeze(v) for v in obj)
    return obj


def _thaw(obj):
    if isinstance(obj, Mapping):
        return {k: _thaw(v) for k, v in obj.items()}
    if isinstance(obj, tuple):
        return [_thaw(v) for v in obj]
    return obj


class EmpiricalDistribution:
    """Immutable histogram ``string -> count`` plus provenance metadata.

    Counts are exact ``int`` values when they come from an enumeration and
    become ``float`` after operations that divide (e.g. :meth:`consolidate`).

    Parameters
    ----------
    counts : mapping of str to number
        Non-negative counts. Zero entries are kept (they are part of the
        support, e.g. strings tested against grammars but never generated).
    meta : mapping, optional
        ``model`` and ``params`` identify the producing run; ``total`` and
        ``halting`` are additive program counters.
    """

    __slots__ = ("_counts", "_meta")

    def __init__(self, counts: Mapping[str, float] | None = None,
                 meta: Mapping[str, Any] | None = None):
        clean = {}
        for s, c in (counts or {}).items():
            check_binary(s)
            if c < 0 or (isinstance(c, float) and math.isnan(c)):
                raise ValueError(f"negative or NaN count for {s!r}: {c}")
            clean[s] = c
        self._counts = MappingProxyType(clean)
        self._meta = _freeze(dict(meta or {}))

    @property
    def counts(self) -> Mapping[str, float]:
        return self._counts

    @property
    def meta(self) -> Mapping[str, Any]:
        return self._meta

    @property
    def model(self) -> str | None:
        return self._meta.get("model")

    def meta_dict(self) -> dict:
        return _thaw(self._meta)

    def __len__(self) -> int:
        return len(self._counts)

    def __contains__(self, s: str) -> bool:
        return s in self._counts

    def __getitem__(self, s: str):
        return self._counts.get(s, 0)

    def __iter__(self):
        return iter(self._counts)

    def __eq__(self, other) -> bool:
        if not isinstance(other, EmpiricalDistribution):
            return NotImplemented
        return dict(self._counts) == dict(other._counts) and _thaw(self._meta) == _thaw(other._meta)

    def __repr__(self) -> str:
        return f"EmpiricalDistribution(model={self.model!r}, support={len(self)}, mass={self.mass})"

    @property
    def support(self) -> list[str]:
        return [s for s, c in self._counts.items() if c > 0]

    @property
    def mass(self):
        return sum(self._counts.values())

    @property
    def is_exact(self) -> bool:
        return all(isinstance(c, int) for c in self._counts.values())

    def with_meta(self, **updates) -> EmpiricalDistribution:
        meta = self.meta_dict()
        meta.update(updates)
        return EmpiricalDistribution(self._counts, meta)

    def restrict(self, predicate) -> EmpiricalDistribution:
        """Keep the strings for which ``predicate(s)`` is true."""
        return EmpiricalDistribution({s: c for s, c in self._counts.items() if predicate(s)},
                                     self.meta_dict())

    def max_length(self, k: int) -> EmpiricalDistribution:
        return self.restrict(lambda s: len(s) <= k)

    def ranked(self) -> list[str]:
        """Strings by descending count, ties broken lexicographically
        (shorter first)."""
        return sorted(self._counts, key=lambda s: (-self._counts[s], len(s), s))

    def probability(self) -> dict[str, float]:
        total = self.mass
        if total == 0:
            return {s: 0.0 for s in self._counts}
        return {s: c / total for s, c in self._counts.items()}

    def to_probability(self) -> EmpiricalDistribution:
        return EmpiricalDistribution(self.probability(),
                                     {**self.meta_dict(), "view": "probability"})


def consolidate(d: EmpiricalDistribution) -> EmpiricalDistribution:
    """Average each string's count over its reversal/complement orbit.

    ``value(s) = (f(s) + f(r(s)) + f(c(s)) + f(r(c(s)))) / |orbit(s)|``;
    every orbit member of a string in the support enters the result.

    The formula scales orbits of different sizes differently, so applying
    it twice would change the ranking; a distribution already marked as
    consolidated is therefore returned unchanged.
    """
    if d.meta.get("consolidated"):
        return d
    f = d.counts
    out: dict[str, float] = {}
    for s in f:
        for t in orbit(s):
            if t in out:
                continue
            rt = reverse(t)
            ct = complement(t)
            total = f.get(t, 0) + f.get(rt, 0) + f.get(ct, 0) + f.get(reverse(ct), 0)
            out[t] = total / len(orbit(t))
    meta = d.meta_dict()
    meta["consolidated"] = True
    return EmpiricalDistribution(out, meta)


def to_probability(d: EmpiricalDistribution) -> EmpiricalDistribution:
    return d.to_probability()


def ctm_complexity(d: EmpiricalDistribution, s: str) -> float | None:
    """``-log2`` of the empirical probability of ``s``; ``None`` when ``s``
    has no mass in ``d`` (complexity undefined)."""
    c = d.counts.get(s, 0)
    if c <= 0:
        return None
    return -math.log2(c / d.mass)


def complexity_table(d: EmpiricalDistribution) -> dict[str, float]:
    total = d.mass
    return {s: -math.log2(c / total) for s, c in d.counts.items() if c > 0}


def _merge_key(meta: Mapping) -> tuple:
    return (meta.get("model"),
            json.dumps(_thaw(meta.get("params", {})), sort_keys=True, default=str))


def merge(d1: EmpiricalDistribution, d2: EmpiricalDistribution) -> EmpiricalDistribution:
    """Pointwise sum of two histograms from the same model and parameters.

    An empty distribution with no ``model`` is the identity.
    """
    if not d2.meta and not d2.counts:
        return d1
    if not d1.meta and not d1.counts:
        return d2
    if _merge_key(d1.meta) != _merge_key(d2.meta):
        raise IncompatibleDistributions(
            f"cannot merge {_merge_key(d1.meta)} with {_merge_key(d2.meta)}")
    counts = Counter(d1.counts)
    for s, c in d2.counts.items():
        counts[s] = counts.get(s, 0) + c
    meta = {k: v for k, v in d1.meta_dict().items() if k not in _PARTITION_META}
    for key in _ADDITIVE_META:
        if key in d1.meta or key in d2.meta:
            meta[key] = d1.meta.get(key, 0) + d2.meta.get(key, 0)
    return EmpiricalDistribution(dict(counts), meta)


def merge_all(dists: Iterable[EmpiricalDistribution]) -> EmpiricalDistribution:
    out = EmpiricalDistribution()
    for d in dists:
        out = merge(out, d)
    return out


# -- persistence -----------------------------------------------------------

CSV_COLUMNS = ("string", "count", "probability", "ctm_complexity")


def _fmt_count(c) -> str:
    return str(c) if isinstance(c, int) else repr(float(c))


def _parse_count(text: str):
    try:
        return int(text)
    except ValueError:
        return float(text)


def to_csv(d: EmpiricalDistribution) -> str:
    """Render as CSV. Metadata goes in a leading ``#``-comment line."""
    buf = io.StringIO()
    buf.write("# meta " + json.dumps(d.meta_dict(), sort_keys=True, default=str) + "\n")
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    prob = d.probability()
    for s in d.ranked():
        c = d.counts[s]
        k = ctm_complexity(d, s)
        w.writerow([to_text(s), _fmt_count(c), repr(prob[s]), "" if k is None else repr(k)])
    return buf.getvalue()


def from_csv(text: str) -> EmpiricalDistribution:
    meta: dict = {}
    rows = []
    for line in text.splitlines():
        if line.startswith("# meta "):
            meta = json.loads(line[len("# meta "):])
        elif line.startswith("#") or not line.strip():
            continue
        else:
            rows.append(line)
    reader = csv.DictReader(rows)
    if reader.fieldnames is None or "string" not in reader.fieldnames:
        raise ValueError("distribution CSV must have a 'string' column")
    value_col = "count" if "count" in reader.fieldnames else "probability"
    counts = {from_text(r["string"]): _parse_count(r[value_col]) for r in reader}
    return EmpiricalDistribution(counts, meta)


def to_json(d: EmpiricalDistribution) -> str:
    prob = d.probability()
    rows = []
    for s in d.ranked():
        k = ctm_complexity(d, s)
        rows.append({"string": to_text(s), "count": d.counts[s],
                     "probability": prob[s], "ctm_complexity": k})
    return json.dumps({"format": FORMAT_VERSION, "meta": d.meta_dict(), "rows": rows},
                      sort_keys=True, default=str)


def from_json(text: str) -> EmpiricalDistribution:
    obj = json.loads(text)
    counts = {from_text(r["string"]): r["count"] for r in obj["rows"]}
    return EmpiricalDistribution(counts, obj.get("meta", {}))


def save(d: EmpiricalDistribution, path, fmt: str | None = None) -> Path:
    path = Path(path)
    fmt = fmt or ("json" if path.suffix == ".json" else "csv")
    text = to_json(d) if fmt == "json" else to_csv(d)
    tmp = path.with_name(path.name + ".tmp")
    tmp.write_text(text)
    tmp.replace(path)
    return path


def load(path) -> EmpiricalDistribution:
    path = Path(path)
    text = path.read_text()
    if path.suffix == ".json" or text.lstrip().startswith("{"):
        return from_json(text)
    return from_csv(text)
