"""Chunked, optionally threaded driver around :func:`kernels.gray_scan`."""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from typing import Callable

import numpy as np

from . import kernels

ProgressFn = Callable[[int, int], None]

_EMPTY = np.zeros(0, dtype=np.int64)


class BudgetExceededError(RuntimeError):
    """Exact enumeration would exceed the configured budget."""


def resolve_threads(threads: int | None = None) -> int:
    """``QRANK_THREADS`` wins over the argument; default is the CPU count."""
    env = os.environ.get("QRANK_THREADS")
    if env:
        return max(1, int(env))
    if threads:
        return max(1, int(threads))
    return os.cpu_count() or 1


def gray_min_rank(
    basis: np.ndarray,
    nbits: int,
    free_mask: int,
    lex_row: np.ndarray = _EMPTY,
    lex_bit: np.ndarray = _EMPTY,
    *,
    threads: int | None = None,
    progress: ProgressFn | None = None,
) -> tuple[int, int, int]:
    """Scan all ``2**len(basis)`` Gray-code combinations; returns ``(rank, g, key)``.

    The merge takes the minimum ``(rank, key)``, so the answer does not depend
    on how the index range is split.
    """
    d = basis.shape[0]
    total = 1 << d
    nthreads = resolve_threads(threads)
    nchunks = min(total, max(1, nthreads * 4, total >> 18))
    bounds = [total * i // nchunks for i in range(nchunks + 1)]
    spans = [(bounds[i], bounds[i + 1]) for i in range(nchunks) if bounds[i] < bounds[i + 1]]
    mask = np.uint64(free_mask)
    basis = np.ascontiguousarray(basis, dtype=np.uint64)

    def run(span: tuple[int, int]):
        return kernels.gray_scan(basis, nbits, mask, span[0], span[1], lex_row, lex_bit)

    results = []
    if nthreads == 1 or len(spans) == 1:
        for s in spans:
            results.append(run(s))
            if progress is not None:
                progress(s[1], total)
    else:
        with ThreadPoolExecutor(max_workers=nthreads) as pool:
            for s, res in zip(spans, pool.map(run, spans)):
                results.append(res)
                if progress is not None:
                    progress(s[1], total)
    best = (-1, -1, 0)
    for rk, g, key in results:
        rk, g, key = int(rk), int(g), int(key)
        if rk < 0:
            continue
        if best[0] < 0 or (rk, key) < (best[0], best[2]):
            best = (rk, g, key)
    return best


def combine(basis: np.ndarray, g: int) -> np.ndarray:
    """XOR of the basis rows selected by the bits of ``g``."""
    out = np.zeros(basis.shape[1], dtype=np.uint64)
    for j in range(basis.shape[0]):
        if g >> j & 1:
            out ^= basis[j]
    return out


def sample_min_rank(
    basis: np.ndarray, nbits: int, free: int, samples: int, seed: int
) -> tuple[int, np.ndarray | None]:
    """Minimum rank over random combinations; an upper bound only.

    A combination qualifies when it uses at least one of the first ``free``
    basis rows.  Returns ``(best_rank, selection bits)``.
    """
    rng = np.random.default_rng(seed)
    d = basis.shape[0]
    best: tuple[int, np.ndarray | None] = (-1, None)
    left = samples
    while left > 0:
        batch = min(left, 1 << 14)
        left -= batch
        bits = rng.integers(0, 2, size=(batch, d), dtype=np.uint8)
        bits = bits[bits[:, :free].any(axis=1)]
        if bits.shape[0] == 0:
            continue
        vecs = np.zeros((bits.shape[0], basis.shape[1]), dtype=np.uint64)
        for j in range(d):
            vecs[bits[:, j].astype(bool)] ^= basis[j]
        ranks = kernels.batch_rank(vecs, nbits)
        i = int(np.argmin(ranks))
        if best[0] < 0 or int(ranks[i]) < best[0]:
            best = (int(ranks[i]), bits[i].copy())
    return best
