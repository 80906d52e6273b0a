"""numba implementations of the GF(2) kernels.

All bit vectors are little-endian words: component ``c`` lives in bit
``c % 64`` of word ``c // 64``.  Shift counts are cast to uint64 explicitly
because mixing uint64 and int64 silently promotes to float64 in numba.
"""

from __future__ import annotations

import numpy as np
from numba import njit

_ONE = np.uint64(1)
_ZERO = np.uint64(0)


@njit(cache=True, nogil=True, inline="always")
def _bit(x, i):
    return (x >> np.uint64(i)) & _ONE


@njit(cache=True, nogil=True)
def _parity(x):
    x ^= x >> np.uint64(32)
    x ^= x >> np.uint64(16)
    x ^= x >> np.uint64(8)
    x ^= x >> np.uint64(4)
    x ^= x >> np.uint64(2)
    x ^= x >> np.uint64(1)
    return x & _ONE


@njit(cache=True, nogil=True)
def rref_inplace(words, ncols):
    """Reduce ``words`` (rows x nwords) to reduced row echelon form in place.

    Returns the pivot column of each nonzero row, in order.
    """
    nrows, nw = words.shape
    pivots = np.empty(min(nrows, ncols), dtype=np.int64)
    r = 0
    for c in range(ncols):
        if r == nrows:
            break
        w = c >> 6
        mask = _ONE << np.uint64(c & 63)
        p = -1
        for i in range(r, nrows):
            if words[i, w] & mask:
                p = i
                break
        if p < 0:
            continue
        if p != r:
            for j in range(nw):
                tmp = words[p, j]
                words[p, j] = words[r, j]
                words[r, j] = tmp
        for i in range(nrows):
            if i != r and (words[i, w] & mask):
                for j in range(nw):
                    words[i, j] ^= words[r, j]
        pivots[r] = c
        r += 1
    return pivots[:r].copy()


@njit(cache=True, nogil=True)
def _rank_rows(rows, nbits, basis):
    # xor-basis insertion keyed by leading bit; basis is scratch of length nbits
    for b in range(nbits):
        basis[b] = _ZERO
    rank = 0
    for r in range(rows.shape[0]):
        x = rows[r]
        b = nbits - 1
        while x != _ZERO and b >= 0:
            if _bit(x, b):
                if basis[b] == _ZERO:
                    basis[b] = x
                    rank += 1
                    break
                x ^= basis[b]
            b -= 1
    return rank


@njit(cache=True, nogil=True)
def batch_rank(rows, nbits):
    """GF(2) rank of each matrix ``rows[b]`` (R rows of at most 64 bits)."""
    out = np.empty(rows.shape[0], dtype=np.int64)
    basis = np.zeros(max(nbits, 1), dtype=np.uint64)
    for b in range(rows.shape[0]):
        out[b] = _rank_rows(rows[b], nbits, basis)
    return out


@njit(cache=True, nogil=True)
def _lex_key(vec, lex_row, lex_bit):
    L = lex_row.shape[0]
    key = _ZERO
    for p in range(L):
        if _bit(vec[lex_row[p]], lex_bit[p]):
            key |= _ONE << np.uint64(L - 1 - p)
    return key


@njit(cache=True, nogil=True)
def gray_scan(basis, nbits, free_mask, lo, hi, lex_row, lex_bit):
    """Minimum matrix rank over the Gray-code indices ``lo <= i < hi``.

    The vector at index ``i`` is the XOR of ``basis[j]`` over the set bits of
    ``g = i ^ (i >> 1)``; it is skipped when ``g & free_mask == 0``.  Ties are
    broken by the smaller key: ``g`` itself when ``lex_row`` is empty,
    otherwise the lexicographic key of the vector.

    Returns ``(best_rank, best_g, best_key)``; ``best_rank == -1`` if nothing
    qualified.
    """
    d, R = basis.shape
    vec = np.zeros(R, dtype=np.uint64)
    g0 = lo ^ (lo >> 1)
    for j in range(d):
        if (g0 >> j) & 1:
            for r in range(R):
                vec[r] ^= basis[j, r]
    scratch = np.zeros(max(nbits, 1), dtype=np.uint64)
    use_lex = lex_row.shape[0] > 0
    best_rank = 1 << 30
    best_g = -1
    best_key = _ZERO
    for i in range(lo, hi):
        if i > lo:
            j = 0
            while not (i >> j) & 1:
                j += 1
            for r in range(R):
                vec[r] ^= basis[j, r]
        g = i ^ (i >> 1)
        if (np.uint64(g) & free_mask) == _ZERO:
            continue
        rk = _rank_rows(vec, nbits, scratch)
        if rk > best_rank:
            continue
        if use_lex:
            key = _lex_key(vec, lex_row, lex_bit)
        else:
            key = np.uint64(g)
        if rk < best_rank or key < best_key:
            best_rank = rk
            best_g = g
            best_key = key
    if best_g < 0:
        best_rank = -1
    return best_rank, best_g, best_key


@njit(cache=True, nogil=True)
def _symp(x, h, n, lowmask):
    return _parity(((x & lowmask) & (h >> np.uint64(n))) ^ ((x >> np.uint64(n)) & (h & lowmask)))


@njit(cache=True, nogil=True)
def build_symplectic(hs, hmask, n):
    """Row images of products of symplectic transvections.

    Row ``i`` of each output starts as the unit vector ``e_i`` and is mapped
    by ``x -> x + <x, h> h`` for every ``h`` in ``hs[b]``, then the X/Z bits of
    each qubit flagged in ``hmask[b]`` are swapped.
    """
    B, K = hs.shape
    two_n = 2 * n
    lowmask = (_ONE << np.uint64(n)) - _ONE
    out = np.empty((B, two_n), dtype=np.uint64)
    for b in range(B):
        for i in range(two_n):
            x = _ONE << np.uint64(i)
            for t in range(K):
                h = hs[b, t]
                if _symp(x, h, n, lowmask):
                    x ^= h
            hm = hmask[b]
            for q in range(n):
                if _bit(hm, q):
                    xb = _bit(x, q)
                    zb = _bit(x, q + n)
                    if xb != zb:
                        x ^= (_ONE << np.uint64(q)) | (_ONE << np.uint64(q + n))
            out[b, i] = x
    return out


@njit(cache=True, nogil=True)
def _apply(E, A, two_n, out):
    for r in range(E.shape[0]):
        acc = _ZERO
        x = E[r]
        for i in range(two_n):
            if _bit(x, i):
                acc ^= A[i]
        out[r] = acc


@njit(cache=True, nogil=True)
def simulate_batch(gates, faults, fault_on, n):
    """Propagate per-gate faults to the circuit output for every trial.

    ``gates[t, g]`` holds the 2n row images of gate ``g``; ``faults[t, g]`` the
    m layer rows of the fault injected right after gate ``g`` when
    ``fault_on[t, g]`` is set.  Returns ``(rank_q, sum_fault_rank,
    rank_changes)`` per trial, where ``rank_changes`` counts propagation steps
    whose output rank differed from the input rank.
    """
    T, G, two_n = gates.shape
    m = faults.shape[2]
    rank_q = np.zeros(T, dtype=np.int64)
    sum_rank = np.zeros(T, dtype=np.int64)
    changes = np.zeros(T, dtype=np.int64)
    scratch = np.zeros(two_n, dtype=np.uint64)
    E = np.zeros(m, dtype=np.uint64)
    E2 = np.zeros(m, dtype=np.uint64)
    Q = np.zeros(m, dtype=np.uint64)
    for t in range(T):
        for r in range(m):
            Q[r] = _ZERO
        for g in range(G):
            if not fault_on[t, g]:
                continue
            for r in range(m):
                E[r] = faults[t, g, r]
            rk = _rank_rows(E, two_n, scratch)
            sum_rank[t] += rk
            for h in range(g + 1, G):
                _apply(E, gates[t, h], two_n, E2)
                rk2 = _rank_rows(E2, two_n, scratch)
                if rk2 != rk:
                    changes[t] += 1
                rk = rk2
                for r in range(m):
                    E[r] = E2[r]
            for r in range(m):
                Q[r] ^= E[r]
        rank_q[t] = _rank_rows(Q, two_n, scratch)
    return rank_q, sum_rank, changes
