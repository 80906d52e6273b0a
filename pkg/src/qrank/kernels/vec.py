"""Pure-numpy fallbacks for the GF(2) kernels.

Same signatures and results as :mod:`qrank.kernels.jit`; loops run over bit
positions while the batch dimension is vectorised.
"""

from __future__ import annotations

import numpy as np

_U1 = np.uint64(1)
_CHUNK = 1 << 15


def _u(x) -> np.uint64:
    return np.uint64(x)


def rref_inplace(words: np.ndarray, ncols: int) -> np.ndarray:
    nrows = words.shape[0]
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        w, mask = c >> 6, _U1 << _u(c & 63)
        col = (words[r:, w] & mask) != 0
        if not col.any():
            continue
        p = r + int(np.argmax(col))
        if p != r:
            words[[r, p]] = words[[p, r]]
        hit = (words[:, w] & mask) != 0
        hit[r] = False
        words[hit] ^= words[r]
        pivots.append(c)
        r += 1
    return np.asarray(pivots, dtype=np.int64)


def batch_rank(rows: np.ndarray, nbits: int) -> np.ndarray:
    B, R = rows.shape
    work = rows.copy()
    used = np.zeros((B, R), dtype=bool)
    rank = np.zeros(B, dtype=np.int64)
    ar = np.arange(B)
    for c in range(nbits):
        has = (((work >> _u(c)) & _U1) != 0) & ~used
        found = has.any(axis=1)
        if not found.any():
            continue
        piv = has.argmax(axis=1)
        prow = work[ar, piv]
        has[ar, piv] = False
        work ^= np.where(has, prow[:, None], np.uint64(0))
        used[ar[found], piv[found]] = True
        rank += found
    return rank


def _lex_keys(vecs: np.ndarray, lex_row: np.ndarray, lex_bit: np.ndarray) -> np.ndarray:
    L = lex_row.shape[0]
    bits = (vecs[:, lex_row] >> lex_bit.astype(np.uint64)) & _U1
    weights = _U1 << np.arange(L - 1, -1, -1, dtype=np.uint64)
    return np.bitwise_xor.reduce(bits * weights, axis=1)


def gray_scan(basis, nbits, free_mask, lo, hi, lex_row, lex_bit):
    d, R = basis.shape
    best = (-1, -1, np.uint64(0))
    free_mask = np.uint64(free_mask)
    use_lex = lex_row.shape[0] > 0
    for start in range(lo, hi, _CHUNK):
        i = np.arange(start, min(hi, start + _CHUNK), dtype=np.int64)
        g = i ^ (i >> 1)
        keep = (g.astype(np.uint64) & free_mask) != 0
        if not keep.any():
            continue
        g = g[keep]
        vecs = np.zeros((g.shape[0], R), dtype=np.uint64)
        for j in range(d):
            sel = ((g >> j) & 1).astype(bool)
            vecs[sel] ^= basis[j]
        ranks = batch_rank(vecs, nbits)
        rmin = int(ranks.min())
        if best[0] != -1 and rmin > best[0]:
            continue
        at = ranks == rmin
        keys = _lex_keys(vecs[at], lex_row, lex_bit) if use_lex else g[at].astype(np.uint64)
        k = int(np.argmin(keys))
        cand = (rmin, int(g[at][k]), keys[k])
        if best[0] == -1 or cand[0] < best[0] or (cand[0] == best[0] and cand[2] < best[2]):
            best = cand
    return best


def _symp(x: np.ndarray, h: np.ndarray, n: int) -> np.ndarray:
    low = (_U1 << _u(n)) - _U1
    t = ((x & low) & (h >> _u(n))) ^ ((x >> _u(n)) & (h & low))
    return (np.bitwise_count(t) & 1).astype(bool)


def build_symplectic(hs: np.ndarray, hmask: np.ndarray, n: int) -> np.ndarray:
    B, K = hs.shape
    out = np.broadcast_to(_U1 << np.arange(2 * n, dtype=np.uint64), (B, 2 * n)).copy()
    for t in range(K):
        h = hs[:, t][:, None]
        flip = _symp(out, h, n)
        out ^= np.where(flip, h, np.uint64(0))
    for q in range(n):
        on = ((hmask >> _u(q)) & _U1).astype(bool)[:, None]
        xb = (out >> _u(q)) & _U1
        zb = (out >> _u(q + n)) & _U1
        swap = on & (xb != zb)
        out ^= np.where(swap, (_U1 << _u(q)) | (_U1 << _u(q + n)), np.uint64(0))
    return out


def _apply(E: np.ndarray, A: np.ndarray, two_n: int) -> np.ndarray:
    out = np.zeros_like(E)
    for i in range(two_n):
        sel = ((E >> _u(i)) & _U1).astype(bool)
        out ^= np.where(sel, A[:, i][:, None], np.uint64(0))
    return out


def simulate_batch(gates, faults, fault_on, n):
    T, G, two_n = gates.shape
    m = faults.shape[2]
    Q = np.zeros((T, m), dtype=np.uint64)
    sum_rank = np.zeros(T, dtype=np.int64)
    changes = np.zeros(T, dtype=np.int64)
    for g in range(G):
        on = fault_on[:, g].astype(bool)
        if not on.any():
            continue
        E = np.where(on[:, None], faults[:, g], np.uint64(0))
        rk = batch_rank(E, two_n)
        sum_rank += rk
        for h in range(g + 1, G):
            E = _apply(E, gates[:, h], two_n)
            rk2 = batch_rank(E, two_n)
            changes += (rk2 != rk) & on
            rk = rk2
        Q ^= E
    return batch_rank(Q, two_n), sum_rank, changes
