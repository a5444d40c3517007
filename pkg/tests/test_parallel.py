import json

import pytest
from hypothesis import given, strategies as st

from subuniversal.parallel import (Checkpoint, CheckpointError, block_ranges, config_hash,
                                   run_units, split_range)


def square_sum(unit):
    return sum(i * i for i in range(*unit))


@given(st.integers(0, 1000), st.integers(0, 1000), st.integers(1, 50))
def test_split_range_partitions(lo, size, parts):
    hi = lo + size
    got = split_range(lo, hi, parts)
    flat = [i for a, b in got for i in range(a, b)]
    assert flat == list(range(lo, hi))
    assert all(b > a for a, b in got)


def test_block_ranges():
    assert block_ranges(0, 10, 4) == [(0, 4), (4, 8), (8, 10)]


def test_config_hash_stable():
    assert config_hash({"a": 1, "b": [1, 2]}) == config_hash({"b": [1, 2], "a": 1})
    assert config_hash({"a": 1}) != config_hash({"a": 2})


def test_run_units_order_independent_of_workers():
    units = split_range(0, 1000, 13)
    assert run_units(square_sum, units, 1) == run_units(square_sum, units, 3)


def test_resume(tmp_path):
    units = split_range(0, 100, 10)
    ck = Checkpoint(tmp_path, "job")
    with pytest.raises(KeyboardInterrupt):
        run_units(square_sum, units, 1, ck, stop_after=5)
    assert len(list(tmp_path.glob("unit-*.json"))) == 5
    calls = []

    def counting(unit):
        calls.append(unit)
        return square_sum(unit)

    assert run_units(counting, units, 1, Checkpoint(tmp_path, "job")) == run_units(square_sum, units)
    assert len(calls) == 5


def test_checkpoint_refusals(tmp_path):
    Checkpoint(tmp_path, "job-a")
    with pytest.raises(CheckpointError, match="fresh --checkpoint"):
        Checkpoint(tmp_path, "job-b")
    ck = Checkpoint(tmp_path, "job-a")
    ck.store((0, 5), 42)
    assert ck.load((0, 5)) == 42
    (tmp_path / "unit-0-5.json").write_text("{broken")
    with pytest.raises(CheckpointError, match="corrupt"):
        ck.load((0, 5))
    (tmp_path / "unit-5-9.json").write_text(json.dumps({"job": "job-a", "range": [5, 8], "result": 1}))
    with pytest.raises(CheckpointError, match="does not match"):
        ck.load((5, 9))
    (tmp_path / "job.json").write_text("nonsense")
    with pytest.raises(CheckpointError, match="unreadable"):
        Checkpoint(tmp_path, "job-a")
