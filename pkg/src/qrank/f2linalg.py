"""Dense GF(2) matrices stored as packed 64-bit row words.

Column ``c`` of a row lives in bit ``c % 64`` of word ``c // 64``.  Matrices
are treated as values: every operation returns a new :class:`MatF2`.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np

from . import kernels

__all__ = [
    "MalformedFormError",
    "MatF2",
    "SingularMatrixError",
    "alternating_congruence",
    "inverse",
    "kernel",
    "mul",
    "rank",
    "rref",
    "subspace_contains",
    "subspace_equal",
    "symplectic_gram",
    "transpose",
]


class SingularMatrixError(ValueError):
    pass


class MalformedFormError(ValueError):
    """Matrix is not an invertible alternating form."""


def _nwords(cols: int) -> int:
    return max(1, (cols + 63) // 64)


class MatF2:
    __slots__ = ("rows", "cols", "_w")

    def __init__(self, rows: int, cols: int, words: np.ndarray | None = None) -> None:
        self.rows = int(rows)
        self.cols = int(cols)
        shape = (self.rows, _nwords(self.cols))
        if words is None:
            self._w = np.zeros(shape, dtype=np.uint64)
        else:
            w = np.ascontiguousarray(words, dtype=np.uint64)
            if w.shape != shape:
                raise ValueError(f"word array shape {w.shape} != {shape}")
            self._w = w
        self._w.setflags(write=False)

    # ----- construction / conversion

    @classmethod
    def zeros(cls, rows: int, cols: int) -> "MatF2":
        return cls(rows, cols)

    @classmethod
    def identity(cls, n: int) -> "MatF2":
        return cls.from_array(np.eye(n, dtype=np.uint8))

    @classmethod
    def from_array(cls, arr: np.ndarray | Sequence[Sequence[int]], cols: int | None = None) -> "MatF2":
        a = np.asarray(arr, dtype=np.uint8)
        if a.ndim == 1:
            a = a.reshape(1, -1) if cols is None else a.reshape(-1, cols)
        if a.ndim != 2:
            raise ValueError("expected a 2-D 0/1 array")
        if cols is not None and a.shape[0] == 0:
            a = a.reshape(0, cols)
        r, c = a.shape
        nw = _nwords(c)
        padded = np.zeros((r, nw * 64), dtype=np.uint8)
        padded[:, :c] = a & 1
        packed = np.packbits(padded, axis=1, bitorder="little")
        words = packed.view("<u8").astype(np.uint64).reshape(r, nw)
        return cls(r, c, words)

    @classmethod
    def from_strings(cls, lines: Iterable[str], cols: int | None = None) -> "MatF2":
        lines = [ln.strip() for ln in lines if ln.strip()]
        if not lines:
            return cls(0, cols or 0)
        return cls.from_array([[int(ch) for ch in ln] for ln in lines])

    @classmethod
    def from_ints(cls, rows: Sequence[int], cols: int) -> "MatF2":
        nw = _nwords(cols)
        words = np.zeros((len(rows), nw), dtype=np.uint64)
        mask = (1 << 64) - 1
        for i, r in enumerate(rows):
            if r >> cols:
                raise ValueError(f"row {i} has bits beyond column {cols}")
            for j in range(nw):
                words[i, j] = (int(r) >> (64 * j)) & mask
        return cls(len(rows), cols, words)

    def to_array(self) -> np.ndarray:
        if self.rows == 0:
            return np.zeros((0, self.cols), dtype=np.uint8)
        b = np.unpackbits(self._w.astype("<u8").view(np.uint8), axis=1, bitorder="little")
        return b[:, : self.cols].copy()

    def to_ints(self) -> list[int]:
        return [self.row_int(i) for i in range(self.rows)]

    def row_int(self, i: int) -> int:
        out = 0
        for j in range(self._w.shape[1]):
            out |= int(self._w[i, j]) << (64 * j)
        return out

    def to_strings(self) -> list[str]:
        return ["".join(str(int(b)) for b in row) for row in self.to_array()]

    def to_json(self) -> dict:
        return {"rows": self.rows, "cols": self.cols, "data": self.to_strings()}

    @classmethod
    def from_json(cls, obj: dict) -> "MatF2":
        m = cls.from_strings(obj["data"]) if obj["data"] else cls(0, int(obj["cols"]))
        if (m.rows, m.cols) != (int(obj["rows"]), int(obj["cols"])):
            raise ValueError("matrix JSON shape does not match its data")
        return m

    @property
    def words(self) -> np.ndarray:
        return self._w

    @property
    def shape(self) -> tuple[int, int]:
        return self.rows, self.cols

    # ----- operators

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, MatF2):
            return NotImplemented
        return self.shape == other.shape and np.array_equal(self._w, other._w)

    __hash__ = None  # type: ignore[assignment]

    def __add__(self, other: "MatF2") -> "MatF2":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} vs {other.shape}")
        return MatF2(self.rows, self.cols, self._w ^ other._w)

    def __matmul__(self, other: "MatF2") -> "MatF2":
        return mul(self, other)

    @property
    def T(self) -> "MatF2":
        return transpose(self)

    def __getitem__(self, idx) -> "MatF2":
        return MatF2.from_array(np.atleast_2d(self.to_array()[idx]))

    def __repr__(self) -> str:
        body = "\n".join(self.to_strings()[:8])
        more = "\n..." if self.rows > 8 else ""
        return f"MatF2({self.rows}x{self.cols})\n{body}{more}"

    def rank(self) -> int:
        return rank(self)


def vstack(mats: Sequence[MatF2]) -> MatF2:
    cols = {m.cols for m in mats}
    if len(cols) != 1:
        raise ValueError("vstack needs equal column counts")
    return MatF2(sum(m.rows for m in mats), cols.pop(), np.vstack([m.words for m in mats]))


def hstack(mats: Sequence[MatF2]) -> MatF2:
    return MatF2.from_array(np.hstack([m.to_array() for m in mats]))


def _rref_words(M: MatF2) -> tuple[np.ndarray, np.ndarray]:
    work = M.words.copy()
    piv = kernels.rref_inplace(work, M.cols)
    return work, np.asarray(piv)


def rref_with_pivots(M: MatF2) -> tuple[MatF2, list[int]]:
    """Canonical RREF with the zero rows dropped, and the pivot columns."""
    work, piv = _rref_words(M)
    r = len(piv)
    return MatF2(r, M.cols, work[:r]), [int(p) for p in piv]


def rref(M: MatF2) -> MatF2:
    """Reduced row echelon form, zero rows kept at the bottom."""
    work, _ = _rref_words(M)
    return MatF2(M.rows, M.cols, work)


def rank(M: MatF2) -> int:
    if M.rows == 0 or M.cols == 0:
        return 0
    return len(_rref_words(M)[1])


def transpose(M: MatF2) -> MatF2:
    return MatF2.from_array(M.to_array().T.copy()) if M.rows else MatF2(M.cols, 0)


def mul(A: MatF2, B: MatF2) -> MatF2:
    if A.cols != B.rows:
        raise ValueError(f"shape mismatch for product: {A.shape} @ {B.shape}")
    prod = (A.to_array().astype(np.int64) @ B.to_array().astype(np.int64)) & 1
    return MatF2.from_array(prod.reshape(A.rows, B.cols), cols=B.cols)


def kernel(M: MatF2) -> MatF2:
    """Basis (as rows) of ``{x : M x^T = 0}``."""
    R, piv = rref_with_pivots(M)
    free = [c for c in range(M.cols) if c not in set(piv)]
    a = R.to_array()
    out = np.zeros((len(free), M.cols), dtype=np.uint8)
    for i, f in enumerate(free):
        out[i, f] = 1
        for r, p in enumerate(piv):
            out[i, p] = a[r, f]
    return MatF2.from_array(out, cols=M.cols)


def inverse(M: MatF2) -> MatF2:
    if M.rows != M.cols:
        raise SingularMatrixError(f"non-square matrix {M.shape}")
    n = M.rows
    aug = MatF2.from_array(np.hstack([M.to_array(), np.eye(n, dtype=np.uint8)]))
    R, piv = rref_with_pivots(aug)
    if piv[:n] != list(range(n)) or len(piv) < n:
        raise SingularMatrixError("matrix is singular over GF(2)")
    return MatF2.from_array(R.to_array()[:, n:])


def _row_space(M: MatF2) -> MatF2:
    return rref_with_pivots(M)[0]


def subspace_equal(A: MatF2, B: MatF2) -> bool:
    if A.cols != B.cols:
        raise ValueError(f"column mismatch {A.cols} vs {B.cols}")
    return _row_space(A) == _row_space(B)


def subspace_contains(A: MatF2, B: MatF2) -> bool:
    """True when ``rowspace(B)`` is contained in ``rowspace(A)``."""
    if A.cols != B.cols:
        raise ValueError(f"column mismatch {A.cols} vs {B.cols}")
    return rank(vstack([A, B])) == rank(A)


def symplectic_gram(n: int) -> MatF2:
    """``S = [[0, I], [-I, 0]]``, i.e. ``[[0, I], [I, 0]]`` over GF(2)."""
    s = np.zeros((2 * n, 2 * n), dtype=np.uint8)
    s[:n, n:] = np.eye(n, dtype=np.uint8)
    s[n:, :n] = np.eye(n, dtype=np.uint8)
    return MatF2.from_array(s)


def is_alternating(T: MatF2) -> bool:
    a = T.to_array()
    return T.rows == T.cols and np.array_equal(a, a.T) and not a.diagonal().any()


def alternating_congruence(T: MatF2) -> MatF2:
    """Invertible ``D`` with ``D T D^T = S`` via symplectic Gram-Schmidt.

    The lowest-index unprocessed vector ``u`` is paired with the
    lowest-index partner ``v`` having ``B(u, v) = 1``; the pair becomes rows
    ``i`` and ``n + i`` of ``D`` and is projected out of the rest.
    """
    if T.rows != T.cols or T.rows % 2:
        raise MalformedFormError(f"form must be 2n x 2n, got {T.shape}")
    if not is_alternating(T):
        raise MalformedFormError("form is not symmetric with zero diagonal")
    if rank(T) != T.rows:
        raise MalformedFormError("form is degenerate (singular)")
    size = T.rows
    n = size // 2
    trows = T.to_ints()

    def form(u: int, v: int) -> int:
        acc = 0
        for i in range(size):
            if u >> i & 1:
                acc ^= trows[i]
        return (acc & v).bit_count() & 1

    rest = [1 << i for i in range(size)]
    firsts: list[int] = []
    seconds: list[int] = []
    while rest:
        u = rest[0]
        v = next((w for w in rest[1:] if form(u, w)), None)
        if v is None:
            raise MalformedFormError("form is degenerate (no hyperbolic partner)")
        rest = [w for w in rest[1:] if w != v]
        rest = [w ^ (u if form(w, v) else 0) ^ (v if form(w, u) else 0) for w in rest]
        firsts.append(u)
        seconds.append(v)
    D = MatF2.from_ints(firsts + seconds, size)
    assert D @ T @ D.T == symplectic_gram(n)
    return D
