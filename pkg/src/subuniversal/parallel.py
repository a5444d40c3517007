"""Partitioned execution with checkpoint/resume.

Work is split into numbered units (closed-open index ranges of some
enumeration). Each unit yields a JSON-serialisable partial result; partials
are merged in unit order, so the outcome never depends on the number of
workers or on how many times a run was resumed.
"""
from __future__ import annotations

import hashlib
import json
import logging
import os
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path
from typing import Any, Callable, Sequence

log = logging.getLogger(__name__)


class CheckpointError(RuntimeError):
    pass


def config_hash(config: dict) -> str:
    blob = json.dumps(config, sort_keys=True, default=str).encode()
    return hashlib.sha256(blob).hexdigest()[:16]


def split_range(lo: int, hi: int, parts: int) -> list[tuple[int, int]]:
    """Split ``[lo, hi)`` into at most ``parts`` contiguous non-empty ranges."""
    size = hi - lo
    if size <= 0:
        return []
    parts = max(1, min(parts, size))
    step, extra = divmod(size, parts)
    out = []
    start = lo
    for i in range(parts):
        end = start + step + (i < extra)
        out.append((start, end))
        start = end
    return out


def block_ranges(lo: int, hi: int, block: int) -> list[tuple[int, int]]:
    return [(a, min(a + block, hi)) for a in range(lo, hi, block)]


class Checkpoint:
    """Directory of completed units for one job.

    A ``job.json`` file pins the job key; each finished unit is written
    atomically as ``unit-<lo>-<hi>.json``. Loading a unit whose range or job
    key does not match refuses with instructions rather than guessing.
    """

    def __init__(self, directory, job_key: str):
        self.dir = Path(directory)
        self.job_key = job_key
        self.dir.mkdir(parents=True, exist_ok=True)
        marker = self.dir / "job.json"
        if marker.exists():
            try:
                found = json.loads(marker.read_text())["job"]
            except (ValueError, KeyError) as exc:
                raise CheckpointError(
                    f"{marker} is unreadable ({exc}); delete the checkpoint directory "
                    "to start over") from exc
            if found != job_key:
                raise CheckpointError(
                    f"checkpoint {self.dir} belongs to job {found}, not {job_key}; "
                    "use a fresh --checkpoint directory or delete this one")
        else:
            marker.write_text(json.dumps({"job": job_key}))

    def _path(self, unit: tuple[int, int]) -> Path:
        return self.dir / f"unit-{unit[0]}-{unit[1]}.json"

    def load(self, unit: tuple[int, int]):
        path = self._path(unit)
        if not path.exists():
            return None
        try:
            obj = json.loads(path.read_text())
        except ValueError as exc:
            raise CheckpointError(
                f"corrupt checkpoint file {path}; delete it (the unit will be recomputed) "
                "and rerun") from exc
        if obj.get("job") != self.job_key or tuple(obj.get("range", ())) != tuple(unit):
            raise CheckpointError(
                f"checkpoint file {path} does not match job {self.job_key} range {unit}; "
                "delete it and rerun")
        return obj["result"]

    def store(self, unit: tuple[int, int], result) -> None:
        path = self._path(unit)
        tmp = path.with_name(path.name + ".tmp")
        tmp.write_text(json.dumps({"job": self.job_key, "range": list(unit), "result": result}))
        os.replace(tmp, path)


def run_units(worker: Callable[[tuple[int, int]], Any], units: Sequence[tuple[int, int]],
              jobs: int = 1, checkpoint: Checkpoint | None = None,
              stop_after: int | None = None) -> list:
    """Evaluate ``worker`` on every unit and return results in unit order.

    ``worker`` must be a picklable top-level callable when ``jobs > 1``.
    ``stop_after`` computes at most that many new units and then raises
    :class:`KeyboardInterrupt` (used to test resumption).
    """
    results: list = [None] * len(units)
    todo = []
    for i, unit in enumerate(units):
        got = checkpoint.load(unit) if checkpoint else None
        if got is None:
            todo.append(i)
        else:
            results[i] = got
    if todo:
        log.info("%d of %d units to compute", len(todo), len(units))
    interrupted = False
    if stop_after is not None and stop_after < len(todo):
        todo = todo[:stop_after]
        interrupted = True

    def finish(i, res):
        results[i] = res
        if checkpoint:
            checkpoint.store(units[i], res)

    if jobs <= 1 or len(todo) <= 1:
        for i in todo:
            finish(i, worker(units[i]))
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            for i, res in zip(todo, pool.map(worker, [units[i] for i in todo])):
                finish(i, res)
    if interrupted:
        raise KeyboardInterrupt("stopped early by request")
    return results
