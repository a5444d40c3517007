"""Busy-beaver-formalism Turing machines with ``n`` states and 2 symbols:
index bijection, bounded simulation and output-frequency censuses.

Each of the ``2n`` table entries (state ``i`` reading symbol ``b``) is either
a halt entry, which writes a symbol and stops, or a step entry
``(write, move, next)``. Entry digits in ``[0, 4n+2)`` are laid out as::

    0, 1            halt writing 0 / 1
    2 + e           e = write * 2n + right * n + (next - 1)

and a machine index is the mixed-radix number whose least significant digit
is entry (1, 0), then (1, 1), (2, 0), ...

A run starts in state 1 at cell 0 of a tape filled with the blank symbol.
Its output is the contiguous block of cells visited by the head, read left
to right, after the final write.
"""
from __future__ import annotations

import functools
import logging
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

import numpy as np

from . import _kernels
from .distributions import EmpiricalDistribution
from .parallel import Checkpoint, block_ranges, config_hash, run_units

log = logging.getLogger(__name__)

LEFT, RIGHT = -1, 1
BLOCK = 1 << 18
BB_STEPS = {1: 1, 2: 6, 3: 21, 4: 107}


class Rule(NamedTuple):
    write: int
    move: int = 0
    next: int = 0  # 0 means halt

    @property
    def halts(self) -> bool:
        return self.next == 0

    def __str__(self) -> str:
        if self.halts:
            return f"{self.write}-H"
        return f"{self.write}{'R' if self.move == RIGHT else 'L'}{self.next}"


@dataclass(frozen=True)
class TuringMachine:
    """``rules[2*(i-1) + b]`` is the entry for state ``i`` reading ``b``."""

    rules: tuple[Rule, ...]

    def __post_init__(self):
        if not self.rules or len(self.rules) % 2:
            raise ValueError("need two entries per state")
        n = self.n_states
        for r in self.rules:
            if r.write not in (0, 1):
                raise ValueError(f"bad write symbol in {r}")
            if not r.halts and (r.move not in (LEFT, RIGHT) or not 1 <= r.next <= n):
                raise ValueError(f"bad step entry {r}")

    @property
    def n_states(self) -> int:
        return len(self.rules) // 2

    @property
    def has_halt(self) -> bool:
        return any(r.halts for r in self.rules)

    def reflected(self) -> TuringMachine:
        """Swap L and R everywhere; runs produce reversed outputs."""
        return TuringMachine(tuple(r if r.halts else r._replace(move=-r.move) for r in self.rules))

    def conjugated(self) -> TuringMachine:
        """Swap the symbols 0 and 1 everywhere."""
        n = self.n_states
        out = []
        for i in range(n):
            for b in (0, 1):
                r = self.rules[2 * i + (1 - b)]
                out.append(r._replace(write=1 - r.write))
        return TuringMachine(tuple(out))

    def __str__(self) -> str:
        return " ".join(str(r) for r in self.rules)


class SimOutcome(NamedTuple):
    halted: bool
    steps: int
    output: str | None

    @property
    def status(self) -> str:
        return "Halted" if self.halted else "Cutoff"


def space_size(n: int, halting: bool = True) -> int:
    base = 4 * n + 2 if halting else 4 * n
    return base ** (2 * n)


def _rule_from_digit(d: int, n: int) -> Rule:
    if d < 2:
        return Rule(d)
    e = d - 2
    return Rule(e // (2 * n), RIGHT if (e // n) % 2 else LEFT, e % n + 1)


def _digit_from_rule(r: Rule, n: int) -> int:
    if r.halts:
        return r.write
    return 2 + r.write * 2 * n + (r.move == RIGHT) * n + r.next - 1


def machine_from_index(n: int, idx: int, halting: bool = True) -> TuringMachine:
    """Machine number ``idx`` of the ``n``-state space. With ``halting``
    false the space has no halt entries (``4n`` choices per entry)."""
    size = space_size(n, halting)
    if not 0 <= idx < size:
        raise IndexError(f"index {idx} outside [0, {size})")
    base = 4 * n + 2 if halting else 4 * n
    shift = 0 if halting else 2
    rules = []
    for _ in range(2 * n):
        idx, d = divmod(idx, base)
        rules.append(_rule_from_digit(d + shift, n))
    return TuringMachine(tuple(rules))


def machine_to_index(tm: TuringMachine, halting: bool = True) -> int:
    n = tm.n_states
    base = 4 * n + 2 if halting else 4 * n
    shift = 0 if halting else 2
    idx = 0
    for r in reversed(tm.rules):
        d = _digit_from_rule(r, n) - shift
        if d < 0:
            raise ValueError("machine has halt entries but a non-halting index was requested")
        idx = idx * base + d
    return idx


def _run(tm: TuringMachine, blank: int, steps_limit: int):
    tape: dict[int, int] = {}
    head = lo = hi = 0
    state = 1
    steps = 0
    halted = False
    while steps < steps_limit:
        r = tm.rules[2 * (state - 1) + tape.get(head, blank)]
        steps += 1
        tape[head] = r.write
        if r.halts:
            halted = True
            break
        head += r.move
        state = r.next
        lo = min(lo, head)
        hi = max(hi, head)
    out = "".join(str(tape.get(i, blank)) for i in range(lo, hi + 1))
    return halted, steps, out


def simulate(tm: TuringMachine, blank: int = 0, cutoff: int = 107) -> SimOutcome:
    """Run ``tm`` for at most ``cutoff`` steps (the halting step counts)."""
    if cutoff < 1:
        raise ValueError("cutoff must be >= 1")
    halted, steps, out = _run(tm, blank, cutoff)
    return SimOutcome(halted, steps, out if halted else None)


def run_for(tm: TuringMachine, steps: int, blank: int = 0) -> str:
    """Visited-cell snapshot after exactly ``steps`` steps of a machine with
    no halt entries."""
    if tm.has_halt:
        raise ValueError("machine has halt entries")
    return _run(tm, blank, steps)[2]


# -- censuses ------------------------------------------------------------------

def _unpack(lengths, hi, lo) -> list[str]:
    return [format((int(h) << 64) | int(l), f"0{n}b") if n else ""
            for n, h, l in zip(lengths, hi, lo)]


def _aggregate(steps, lengths, hi, lo, weights=None):
    """Collapse per-run arrays to ``[[steps, output, count], ...]`` for the
    halting runs, plus the weight of runs that did not halt."""
    if weights is None:
        weights = np.ones(len(steps), np.int64)
    halted = steps >= 0
    cut = int(weights[~halted].sum())
    if not halted.any():
        return [], cut
    keys = np.stack([steps[halted].astype(np.uint64), lengths[halted].astype(np.uint64),
                     hi[halted], lo[halted]], axis=1)
    uniq, inverse = np.unique(keys, axis=0, return_inverse=True)
    counts = np.zeros(len(uniq), np.int64)
    np.add.at(counts, inverse.ravel(), weights[halted])
    outs = _unpack(uniq[:, 1], uniq[:, 2], uniq[:, 3])
    return [[int(s), o, int(c)] for s, o, c in zip(uniq[:, 0], outs, counts)], cut


def _check_cutoff(cutoff: int):
    if cutoff < 1:
        raise ValueError("cutoff must be >= 1")
    if cutoff + 1 > _kernels.MAX_PACKED:
        raise ValueError(f"compiled runs support cutoff <= {_kernels.MAX_PACKED - 1}")


def _tree_unit(unit, n, blanks, cutoff):
    base = 4 * n + 2
    u = unit[0]
    blank = blanks[u // base]
    d = u % base
    cap = 1 << 20
    while True:
        s, ln, hi, lo, w, ok = _kernels.tree_enumerate(n, blank, cutoff, d, d + 1, cap)
        if ok:
            break
        cap *= 8
    halting, cut = _aggregate(s, ln, hi, lo, w)
    return {"blank": blank, "halting": halting, "cutoff": cut, "total": int(w.sum())}


def _index_unit(unit, n, blanks, cutoff, space, halting, sample=None):
    lo_g, hi_g = unit
    per = space if sample is None else len(sample)
    k = lo_g // per
    blank = blanks[k]
    a, b = lo_g - k * per, hi_g - k * per
    idx = np.arange(a, b, dtype=np.int64) if sample is None else sample[a:b]
    s, ln, hi, lo = _kernels.run_indices(n, idx, blank, cutoff, halting)
    res, cut = _aggregate(s, ln, hi, lo)
    return {"blank": blank, "halting": res, "cutoff": cut, "total": int(b - a)}


@dataclass
class MachineCensus:
    """Exact output counts of a machine space, broken down by blank symbol
    and halting step, from which the distribution at any cutoff up to the
    run cutoff can be read off."""

    n_states: int
    cutoff: int
    blanks: tuple[int, ...]
    halting: bool = True
    sampled: int | None = None
    seed: int | None = None
    # (blank, steps, output) -> count
    counts: Counter = field(default_factory=Counter)
    not_halted: Counter = field(default_factory=Counter)  # blank -> count
    totals: Counter = field(default_factory=Counter)      # blank -> machines run

    @property
    def model(self) -> str:
        return "tm" if self.halting else "tm_nonhalting"

    def params(self, cutoff: int | None = None) -> dict:
        p = {"n": self.n_states, "cutoff" if self.halting else "steps": cutoff or self.cutoff,
             "blanks": "".join(map(str, self.blanks))}
        if self.sampled is not None:
            p.update(sample=self.sampled, seed=self.seed)
        return p

    def add_partial(self, part: dict) -> None:
        blank = part["blank"]
        for steps, out, c in part["halting"]:
            self.counts[blank, steps, out] += c
        self.not_halted[blank] += part["cutoff"]
        self.totals[blank] += part["total"]

    def _check(self, cutoff):
        cutoff = self.cutoff if cutoff is None else cutoff
        if cutoff > self.cutoff:
            raise ValueError(f"census was run to {self.cutoff} steps, not {cutoff}")
        if not self.halting and cutoff != self.cutoff:
            raise ValueError("non-halting censuses hold a single snapshot time")
        return cutoff

    def output_counts(self, cutoff: int | None = None, blanks: Iterable[int] | None = None) -> Counter:
        cutoff = self._check(cutoff)
        blanks = self.blanks if blanks is None else tuple(blanks)
        out: Counter = Counter()
        for (b, steps, s), c in self.counts.items():
            if b in blanks and steps <= cutoff:
                out[s] += c
        return out

    def halting_count(self, cutoff: int | None = None, blanks: Iterable[int] | None = None) -> int:
        return sum(self.output_counts(cutoff, blanks).values())

    def max_steps(self) -> int:
        return max((steps for _, steps, _ in self.counts), default=0)

    def distribution(self, cutoff: int | None = None,
                     blanks: Iterable[int] | None = None) -> EmpiricalDistribution:
        cutoff = self._check(cutoff)
        blanks = self.blanks if blanks is None else tuple(blanks)
        counts = self.output_counts(cutoff, blanks)
        params = self.params(cutoff)
        params["blanks"] = "".join(map(str, blanks))
        return EmpiricalDistribution(dict(counts), {
            "model": self.model, "params": params,
            "total": sum(self.totals[b] for b in blanks),
            "halting": sum(counts.values()),
            "conventions": {"output": "visited-cells"}})

    def to_json(self) -> dict:
        return {"n": self.n_states, "cutoff": self.cutoff, "blanks": list(self.blanks),
                "halting_space": self.halting, "sampled": self.sampled, "seed": self.seed,
                "counts": sorted([b, st, s, c] for (b, st, s), c in self.counts.items()),
                "not_halted": {str(b): c for b, c in sorted(self.not_halted.items())},
                "totals": {str(b): c for b, c in sorted(self.totals.items())}}

    @classmethod
    def from_json(cls, obj: dict) -> MachineCensus:
        c = cls(obj["n"], obj["cutoff"], tuple(obj["blanks"]), obj["halting_space"],
                obj["sampled"], obj["seed"])
        for b, st, s, k in obj["counts"]:
            c.counts[b, st, s] = k
        c.not_halted.update({int(b): k for b, k in obj["not_halted"].items()})
        c.totals.update({int(b): k for b, k in obj["totals"].items()})
        return c


def _sample_indices(space: int, count: int, seed: int | None) -> np.ndarray:
    rng = np.random.default_rng(seed)
    if space <= np.iinfo(np.int64).max:
        picks = rng.choice(space, size=count, replace=False)
    else:  # pragma: no cover - larger than any space we simulate
        raise ValueError("space too large to sample")
    return np.sort(picks.astype(np.int64))


def ctm_census(n: int, cutoff: int, blanks: Sequence[int] = (0, 1), *,
               sample: int | None = None, seed: int | None = None,
               method: str = "auto", jobs: int = 1, checkpoint=None,
               stop_after: int | None = None) -> MachineCensus:
    """Run every machine of the ``n``-state halting space (or a seeded
    uniform sample of ``sample`` machines) on each blank symbol.

    ``method`` is ``"index"`` (simulate machines one by one in index order)
    or ``"tree"`` (exact weighted enumeration that defines table entries only
    when a run first reads them; full spaces only). ``"auto"`` picks the
    tree for full enumerations.
    """
    _check_cutoff(cutoff)
    blanks = tuple(sorted(set(blanks)))
    if not blanks or any(b not in (0, 1) for b in blanks):
        raise ValueError("blanks must be a non-empty subset of {0, 1}")
    space = space_size(n)
    if sample is not None and sample >= space:
        log.warning("sample of %d >= space size %d; running the full space", sample, space)
        sample = None
    if method == "auto":
        method = "tree" if sample is None else "index"
    if method == "tree" and sample is not None:
        raise ValueError("tree enumeration covers whole spaces only")

    census = MachineCensus(n, cutoff, blanks, True, sample, seed if sample is not None else None)
    job = {"model": "tm", "n": n, "cutoff": cutoff, "blanks": blanks, "method": method,
           "sample": sample, "seed": census.seed}
    if method == "tree":
        base = 4 * n + 2
        units = [(u, u + 1) for u in range(len(blanks) * base)]
        worker = functools.partial(_tree_unit, n=n, blanks=blanks, cutoff=cutoff)
    elif method == "index":
        picks = None if sample is None else _sample_indices(space, sample, seed)
        per = space if picks is None else len(picks)
        units = [r for k in range(len(blanks)) for r in block_ranges(k * per, (k + 1) * per, BLOCK)]
        worker = functools.partial(_index_unit, n=n, blanks=blanks, cutoff=cutoff,
                                   space=space, halting=True, sample=picks)
    else:
        raise ValueError(f"unknown method {method!r}")
    ckpt = Checkpoint(checkpoint, config_hash(job)) if checkpoint else None
    for part in run_units(worker, units, jobs, ckpt, stop_after):
        census.add_partial(part)
    return census


def ctm_distribution(n: int, cutoff: int, blanks: Sequence[int] = (0, 1),
                     sampler: tuple[int, int] | None = None, **kwargs) -> EmpiricalDistribution:
    """Output distribution of halting runs; ``sampler`` is ``(seed, count)``."""
    if sampler is not None:
        seed, count = sampler
        kwargs.update(seed=seed, sample=count)
    return ctm_census(n, cutoff, blanks, **kwargs).distribution()


def ctm_distributions(n: int, cutoffs: Sequence[int], blanks: Sequence[int] = (0, 1),
                      **kwargs) -> dict[int, EmpiricalDistribution]:
    """Distributions at several cutoffs from a single run at the largest."""
    census = ctm_census(n, max(cutoffs), blanks, **kwargs)
    return {c: census.distribution(c) for c in cutoffs}


def nonhalting_census(n: int, steps: int, blanks: Sequence[int] = (0, 1), *,
                      sample: int | None = None, seed: int | None = None,
                      jobs: int = 1, checkpoint=None) -> MachineCensus:
    _check_cutoff(steps)
    blanks = tuple(sorted(set(blanks)))
    space = space_size(n, halting=False)
    if sample is not None and sample >= space:
        sample = None
    picks = None if sample is None else _sample_indices(space, sample, seed)
    per = space if picks is None else len(picks)
    units = [r for k in range(len(blanks)) for r in block_ranges(k * per, (k + 1) * per, BLOCK)]
    worker = functools.partial(_index_unit, n=n, blanks=blanks, cutoff=steps,
                               space=space, halting=False, sample=picks)
    census = MachineCensus(n, steps, blanks, False, sample, seed if sample is not None else None)
    job = {"model": "tm_nonhalting", "n": n, "steps": steps, "blanks": blanks,
           "sample": sample, "seed": census.seed}
    ckpt = Checkpoint(checkpoint, config_hash(job)) if checkpoint else None
    for part in run_units(worker, units, jobs, ckpt):
        census.add_partial(part)
    return census


def nonhalting_tm_distribution(n: int, steps: int, sampler: tuple[int, int] | None = None,
                               blanks: Sequence[int] = (0, 1), **kwargs) -> EmpiricalDistribution:
    """Visited-cell snapshots after exactly ``steps`` steps over the space of
    machines without halt entries (``(4n)**(2n)`` machines)."""
    if sampler is not None:
        seed, count = sampler
        kwargs.update(seed=seed, sample=count)
    return nonhalting_census(n, steps, blanks, **kwargs).distribution()


def brute_census(n: int, cutoff: int, blank: int) -> Counter:
    """Pure-Python census of a whole space, ``(steps, output) -> count``;
    a slow reference for the compiled paths."""
    out: Counter = Counter()
    for idx in range(space_size(n)):
        r = simulate(machine_from_index(n, idx), blank, cutoff)
        if r.halted:
            out[r.steps, r.output] += 1
    return out
