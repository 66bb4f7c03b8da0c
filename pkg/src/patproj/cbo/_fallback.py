"""Pure-Python versions of the compiled kernels (same signatures, same output)."""

from __future__ import annotations

import math


def cbo_intervals(lo, hi, first: int, last: int, emit_root: bool) -> list:
    lo = [list(map(float, row)) for row in lo]
    hi = [list(map(float, row)) for row in hi]
    n = len(lo)
    if n == 0 or not lo[0]:
        raise ValueError("interval kernel needs at least one object and one attribute")
    k = len(lo[0])
    rng = range(k)

    def subsumed(ilo, ihi, g):
        lg, hg = lo[g], hi[g]
        for c in rng:
            if ilo[c] > lg[c] or hg[c] > ihi[c]:
                return False
        return True

    out = []
    root_lo, root_hi = [math.inf] * k, [-math.inf] * k
    root = 0
    for g in range(n):
        if subsumed(root_lo, root_hi, g):
            root |= 1 << g
    if emit_root:
        out.append((root, tuple(root_lo), tuple(root_hi)))

    # stack frames: [extent, lo, hi, next generator, limit]
    stack = [[root, root_lo, root_hi, first, last]]
    while stack:
        frame = stack[-1]
        ext, plo, phi, j, lim = frame
        if j >= lim:
            stack.pop()
            continue
        frame[3] = j + 1
        if ext >> j & 1:
            continue
        lj, hj = lo[j], hi[j]
        clo = [a if a < b else b for a, b in zip(plo, lj)]
        chi = [a if a > b else b for a, b in zip(phi, hj)]
        new = ext | (1 << j)
        ok = True
        for g in range(n):
            if g == j or ext >> g & 1:
                continue
            if subsumed(clo, chi, g):
                if g < j:
                    ok = False
                    break
                new |= 1 << g
        if ok:
            out.append((new, tuple(clo), tuple(chi)))
            stack.append([new, clo, chi, j + 1, n])
    return out


def _rows_to_ints(rows) -> list[int]:
    out = []
    for row in rows:
        v = 0
        for i, word in enumerate(row):
            v |= int(word) << (64 * i)
        out.append(v)
    return out


def cbo_binary(rows, nattrs: int, first: int, last: int, emit_root: bool) -> list:
    bits = _rows_to_ints(rows)
    n = len(bits)
    if n == 0:
        raise ValueError("binary kernel needs at least one object and one word")
    full = (1 << nattrs) - 1

    out = []
    root = 0
    for g in range(n):
        if full & ~bits[g] == 0:
            root |= 1 << g
    if emit_root:
        out.append((root, full))

    stack = [[root, full, first, last]]
    while stack:
        frame = stack[-1]
        ext, intent, j, lim = frame
        if j >= lim:
            stack.pop()
            continue
        frame[2] = j + 1
        if ext >> j & 1:
            continue
        cint = intent & bits[j]
        new = ext | (1 << j)
        ok = True
        for g in range(n):
            if g == j or ext >> g & 1:
                continue
            if cint & ~bits[g] == 0:
                if g < j:
                    ok = False
                    break
                new |= 1 << g
        if ok:
            out.append((new, cint))
            stack.append([new, cint, j + 1, n])
    return out
