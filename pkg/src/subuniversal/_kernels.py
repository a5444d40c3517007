"""Compiled simulation kernels for 2-symbol busy-beaver-style machines.

Machine tables are flat ``int64`` arrays of length ``2n`` holding entry
digits in ``[0, 4n+2)`` (see :mod:`subuniversal.machines` for the digit
layout). Outputs up to 128 cells are packed into two 64-bit words, first
cell most significant.
"""
from __future__ import annotations

import numpy as np
from numba import njit

MAX_PACKED = 128


@njit(cache=True)
def _decode_digit(d, n):
    # returns write, move (+1/-1), next (0 = halt)
    if d < 2:
        return d, 0, 0
    e = d - 2
    write = e // (2 * n)
    move = 1 if (e // n) % 2 == 1 else -1
    return write, move, e % n + 1


@njit(cache=True)
def _pack(tape, lo, hi):
    w_hi = np.uint64(0)
    w_lo = np.uint64(0)
    one = np.uint64(1)
    for pos in range(lo, hi + 1):
        w_hi = (w_hi << one) | (w_lo >> np.uint64(63))
        w_lo = (w_lo << one) | np.uint64(tape[pos])
    return w_hi, w_lo


@njit(cache=True)
def run_indices(n, indices, blank, cutoff, halting):
    """Simulate machine ``indices[k]`` for each ``k``.

    With ``halting`` true the digit base is ``4n+2`` and the run stops at a
    halt entry or after ``cutoff`` steps; otherwise the base is ``4n`` (no
    halt entries, digits shifted by 2) and the run lasts exactly
    ``cutoff`` steps.

    Returns ``(steps, length, word_hi, word_lo)``; ``steps`` is -1 for runs
    cut off before halting (halting mode).
    """
    m = indices.shape[0]
    out_steps = np.empty(m, np.int32)
    out_len = np.empty(m, np.int32)
    out_hi = np.empty(m, np.uint64)
    out_lo = np.empty(m, np.uint64)
    base = 4 * n + 2 if halting else 4 * n
    shift = 0 if halting else 2
    size = 2 * cutoff + 3
    tape = np.empty(size, np.int8)
    writes = np.empty(2 * n, np.int64)
    moves = np.empty(2 * n, np.int64)
    nexts = np.empty(2 * n, np.int64)
    for k in range(m):
        idx = indices[k]
        for e in range(2 * n):
            d = idx % base + shift
            idx //= base
            w, mv, nx = _decode_digit(d, n)
            writes[e] = w
            moves[e] = mv
            nexts[e] = nx
        tape[:] = blank
        head = cutoff + 1
        lo = head
        hi = head
        state = 1
        steps = 0
        halted = False
        while steps < cutoff:
            e = 2 * (state - 1) + tape[head]
            steps += 1
            tape[head] = writes[e]
            if nexts[e] == 0:
                halted = True
                break
            head += moves[e]
            state = nexts[e]
            if head < lo:
                lo = head
            elif head > hi:
                hi = head
        if halting and not halted:
            out_steps[k] = -1
            out_len[k] = 0
            out_hi[k] = 0
            out_lo[k] = 0
            continue
        out_steps[k] = steps
        out_len[k] = hi - lo + 1
        if hi - lo + 1 <= MAX_PACKED:
            w_hi, w_lo = _pack(tape, lo, hi)
        else:
            w_hi, w_lo = np.uint64(0), np.uint64(0)
        out_hi[k] = w_hi
        out_lo[k] = w_lo
    return out_steps, out_len, out_hi, out_lo


@njit(cache=True)
def tree_enumerate(n, blank, cutoff, root_lo, root_hi, cap):
    """Exact weighted enumeration of the full ``(4n+2)**(2n)`` halting
    machine space by lazily defining table entries as the run reaches them.

    Each leaf stands for every completion of its partial table, so its
    weight is ``(4n+2)**(undefined entries)``; fresh states are only ever
    introduced as the lowest unused index, with the weight multiplied by
    the number of unused states. Only branches ``root_lo <= j < root_hi``
    of the first decision are explored (the partition unit).

    Returns leaf arrays ``(steps, length, word_hi, word_lo, weight)`` with
    ``steps == -1`` for runs reaching ``cutoff`` without halting, and a
    flag that is false if more than ``cap`` leaves were produced.
    """
    base = 4 * n + 2
    n_entries = 2 * n
    size = 2 * cutoff + 3
    depth_max = n_entries + 1

    leaf_steps = np.empty(cap, np.int32)
    leaf_len = np.empty(cap, np.int32)
    leaf_hi = np.empty(cap, np.uint64)
    leaf_lo = np.empty(cap, np.uint64)
    leaf_w = np.empty(cap, np.int64)
    n_leaves = 0

    # per-depth snapshots taken at each branch point
    snap_tape = np.empty((depth_max, size), np.int8)
    snap_table = np.full((depth_max, n_entries), -1, np.int64)
    snap_int = np.zeros((depth_max, 8), np.int64)  # head, lo, hi, state, steps, used, entry, weight
    branch = np.zeros(depth_max, np.int64)
    branch_end = np.zeros(depth_max, np.int64)

    pow_base = np.ones(n_entries + 1, np.int64)
    for i in range(1, n_entries + 1):
        pow_base[i] = pow_base[i - 1] * base

    tape = np.empty(size, np.int8)
    table = np.empty(n_entries, np.int64)

    # depth 0: the initial configuration, first entry read is (1, blank)
    snap_tape[0, :] = blank
    head0 = cutoff + 1
    snap_int[0, 0] = head0
    snap_int[0, 1] = head0
    snap_int[0, 2] = head0
    snap_int[0, 3] = 1
    snap_int[0, 4] = 0
    snap_int[0, 5] = 1
    snap_int[0, 6] = blank
    snap_int[0, 7] = 1
    branch[0] = root_lo
    branch_end[0] = root_hi
    depth = 0
    ok = True

    while depth >= 0:
        if branch[depth] >= branch_end[depth]:
            depth -= 1
            continue
        d = branch[depth]
        branch[depth] += 1
        used = snap_int[depth, 5]
        weight = snap_int[depth, 7]
        # digits >= 2 encode (write, move, next); skip next states beyond
        # the lowest unused one, and weight that one by the unused count
        nx = 0
        if d >= 2:
            nx = (d - 2) % n + 1
            if nx > used + 1:
                continue
            if nx == used + 1:
                weight = weight * (n - used)
        tape[:] = snap_tape[depth]
        table[:] = snap_table[depth]
        entry = snap_int[depth, 6]
        table[entry] = d
        head = snap_int[depth, 0]
        lo = snap_int[depth, 1]
        hi = snap_int[depth, 2]
        state = snap_int[depth, 3]
        steps = snap_int[depth, 4]
        if nx > used:
            used = nx
        defined = 0
        for i in range(n_entries):
            if table[i] >= 0:
                defined += 1
        # resume the run at the entry just defined
        branched = False
        halted = False
        while steps < cutoff:
            e = 2 * (state - 1) + tape[head]
            dd = table[e]
            if dd < 0:
                # push a new branch point
                nd = depth + 1
                snap_tape[nd, :] = tape
                snap_table[nd, :] = table
                snap_int[nd, 0] = head
                snap_int[nd, 1] = lo
                snap_int[nd, 2] = hi
                snap_int[nd, 3] = state
                snap_int[nd, 4] = steps
                snap_int[nd, 5] = used
                snap_int[nd, 6] = e
                snap_int[nd, 7] = weight
                branch[nd] = 0
                branch_end[nd] = base
                depth = nd
                branched = True
                break
            steps += 1
            if dd < 2:
                tape[head] = dd
                halted = True
                break
            ee = dd - 2
            tape[head] = ee // (2 * n)
            if (ee // n) % 2 == 1:
                head += 1
            else:
                head -= 1
            state = ee % n + 1
            if head < lo:
                lo = head
            elif head > hi:
                hi = head
        if branched:
            continue
        if n_leaves >= cap:
            ok = False
            break
        w = weight * pow_base[n_entries - defined]
        if halted:
            leaf_steps[n_leaves] = steps
            leaf_len[n_leaves] = hi - lo + 1
            if hi - lo + 1 <= MAX_PACKED:
                w_hi, w_lo = _pack(tape, lo, hi)
            else:
                w_hi, w_lo = np.uint64(0), np.uint64(0)
            leaf_hi[n_leaves] = w_hi
            leaf_lo[n_leaves] = w_lo
        else:
            leaf_steps[n_leaves] = -1
            leaf_len[n_leaves] = 0
            leaf_hi[n_leaves] = 0
            leaf_lo[n_leaves] = 0
        leaf_w[n_leaves] = w
        n_leaves += 1

    return (leaf_steps[:n_leaves], leaf_len[:n_leaves], leaf_hi[:n_leaves],
            leaf_lo[:n_leaves], leaf_w[:n_leaves], ok)
