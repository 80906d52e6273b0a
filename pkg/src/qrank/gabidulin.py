"""Classical Gabidulin codes over GF(2^n): rank weights, duals, MRD checks."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Iterable, Sequence

import numpy as np

from . import _scan
from ._scan import BudgetExceededError, ProgressFn
from .f2linalg import MatF2, kernel, rank
from .gf2field import (
    BasisF2n,
    DomainError,
    Fe,
    FieldMismatchError,
    FieldSpec,
    from_hex,
    is_self_dual_basis,
    to_hex,
)

__all__ = [
    "BudgetExceededError",
    "ExtVector",
    "GabidulinCode",
    "RankDistanceCertificate",
    "SampledDistance",
    "expand_code",
    "frobenius_shift",
    "hermitian_dual",
    "hermitian_inner_product",
    "is_hermitian_self_orthogonal",
    "make_gabidulin",
    "min_rank_distance_bruteforce",
    "min_rank_distance_sampled",
    "rank_weight",
    "trace_dual_gabidulin",
    "trace_inner_product",
    "trace_orthogonal_complement",
]

DEFAULT_BUDGET = 1 << 24


def _as_int(field: FieldSpec, x: Fe | int) -> int:
    if isinstance(x, Fe):
        if x.field != field:
            raise FieldMismatchError(f"{x.field} vs {field}")
        return x.bits
    x = int(x)
    if not 0 <= x < field.order:
        raise ValueError(f"{x:#x} is not an element of {field}")
    return x


@dataclass(frozen=True)
class ExtVector:
    """A vector over GF(2^n); entries are stored as element ints."""

    field: FieldSpec
    entries: tuple[int, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "entries", tuple(_as_int(self.field, e) for e in self.entries))

    @classmethod
    def zeros(cls, field: FieldSpec, m: int) -> "ExtVector":
        return cls(field, (0,) * m)

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, i: int) -> Fe:
        return Fe(self.field, self.entries[i])

    def _check(self, other: "ExtVector") -> None:
        if other.field != self.field:
            raise FieldMismatchError(f"{self.field} vs {other.field}")
        if len(other) != len(self):
            raise ValueError(f"length mismatch {len(self)} vs {len(other)}")

    def __add__(self, other: "ExtVector") -> "ExtVector":
        self._check(other)
        return ExtVector(self.field, tuple(a ^ b for a, b in zip(self.entries, other.entries)))

    def scale(self, lam: Fe | int) -> "ExtVector":
        lam = _as_int(self.field, lam)
        return ExtVector(self.field, tuple(self.field.mul(lam, a) for a in self.entries))

    def frobenius(self, r: int) -> "ExtVector":
        return ExtVector(self.field, tuple(self.field.frob(a, r) for a in self.entries))

    def __bool__(self) -> bool:
        return any(self.entries)

    def to_json(self) -> list[str]:
        return [to_hex(e) for e in self.entries]

    def __repr__(self) -> str:
        return "ExtVector(" + ", ".join(f"0x{e:x}" for e in self.entries) + ")"


def _gf2_rank_of_elements(elems: Iterable[int], n: int) -> int:
    return rank(MatF2.from_ints(list(elems), n))


@dataclass(frozen=True)
class GabidulinCode:
    """``Gab(alpha, k)``: row ``i`` of the generator is ``alpha^(2^i)`` entrywise."""

    field: FieldSpec
    alpha: tuple[int, ...]
    k: int
    generator: tuple[tuple[int, ...], ...] = dc_field(init=False, repr=False)

    def __post_init__(self) -> None:
        alpha = tuple(_as_int(self.field, a) for a in self.alpha)
        object.__setattr__(self, "alpha", alpha)
        m = len(alpha)
        if m == 0 or m > self.field.degree:
            raise ValueError(f"evaluation vector length {m} must be in 1..{self.field.degree}")
        if _gf2_rank_of_elements(alpha, self.field.degree) != m:
            raise ValueError("evaluation points are linearly dependent over GF(2)")
        if not 1 <= self.k <= m:
            raise ValueError(f"dimension k={self.k} must be in 1..{m}")
        gen = tuple(tuple(self.field.frob(a, i) for a in alpha) for i in range(self.k))
        object.__setattr__(self, "generator", gen)

    @property
    def m(self) -> int:
        return len(self.alpha)

    @property
    def n(self) -> int:
        return self.field.degree

    def rows(self) -> list[ExtVector]:
        return [ExtVector(self.field, row) for row in self.generator]

    def encode(self, message: Sequence[Fe | int]) -> ExtVector:
        if len(message) != self.k:
            raise ValueError(f"message length {len(message)} != k={self.k}")
        f = self.field
        out = [0] * self.m
        for b, row in zip(message, self.generator):
            b = _as_int(f, b)
            if b:
                for j, g in enumerate(row):
                    out[j] ^= f.mul(b, g)
        return ExtVector(f, tuple(out))

    def gf2_basis(self) -> list[ExtVector]:
        """GF(2)-basis: index ``i*n + j`` is the codeword of message ``b_i = x^j``."""
        f = self.field
        out = []
        for row in self.generator:
            for j in range(f.degree):
                out.append(ExtVector(f, tuple(f.mul(1 << j, g) for g in row)))
        return out

    def message_from_index(self, idx: int) -> list[int]:
        """Little-endian digit split of a message integer into ``k`` elements."""
        n = self.field.degree
        return [(idx >> (i * n)) & self.field.mask for i in range(self.k)]

    def to_json(self) -> dict:
        return {"field": self.field.to_json(), "alpha": [to_hex(a) for a in self.alpha], "k": self.k}

    @classmethod
    def from_json(cls, obj: dict) -> "GabidulinCode":
        field = FieldSpec.from_json(obj["field"])
        return cls(field, tuple(from_hex(a) for a in obj["alpha"]), int(obj["k"]))


def make_gabidulin(field: FieldSpec, alpha: ExtVector | BasisF2n | Sequence[Fe | int], k: int) -> GabidulinCode:
    if isinstance(alpha, (ExtVector, BasisF2n)):
        if alpha.field != field:
            raise FieldMismatchError(f"{alpha.field} vs {field}")
        alpha = alpha.entries if isinstance(alpha, ExtVector) else alpha.elements
    return GabidulinCode(field, tuple(alpha), k)


def rank_weight(v: ExtVector, basis: BasisF2n | None = None) -> int:
    """GF(2) rank of the n x m matrix whose column j expands ``v[j]`` in ``basis``."""
    if basis is None:
        coords = v.entries
    else:
        if basis.field != v.field:
            raise FieldMismatchError(f"{basis.field} vs {v.field}")
        coords = [basis.coords(e) for e in v.entries]
    return _gf2_rank_of_elements(coords, v.field.degree)


# ---------- brute-force minimum distance


@dataclass(frozen=True)
class RankDistanceCertificate:
    d: int
    witness_message: tuple[int, ...]
    witness_rank: int
    enumerated: int
    certified: bool = True

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "witness_message": [to_hex(b) for b in self.witness_message],
            "witness_rank": self.witness_rank,
            "enumerated": self.enumerated,
            "certified": self.certified,
        }


@dataclass(frozen=True)
class SampledDistance:
    """Upper bound from random codewords; never a certificate."""

    estimate: int
    samples: int
    certified: bool = False


def _codeword_basis(code: GabidulinCode) -> np.ndarray:
    rows = code.gf2_basis()
    return np.array([r.entries for r in rows], dtype=np.uint64)


def min_rank_distance_bruteforce(
    code: GabidulinCode,
    budget: int = DEFAULT_BUDGET,
    *,
    threads: int | None = None,
    progress: ProgressFn | None = None,
) -> RankDistanceCertificate:
    """Exact minimum rank over all nonzero codewords.

    Messages are indexed by integers ``1 .. (2^n)^k - 1`` (little-endian
    digits); the witness is the smallest index attaining the minimum.
    """
    d = code.n * code.k
    total = 1 << d
    if total > budget:
        raise BudgetExceededError(
            f"(2^{code.n})^{code.k} = 2^{d} codewords exceed the budget {budget}; "
            "use min_rank_distance_sampled for a non-certifying estimate"
        )
    basis = _codeword_basis(code)
    rk, g, _ = _scan.gray_min_rank(basis, code.n, total - 1, threads=threads, progress=progress)
    return RankDistanceCertificate(rk, tuple(code.message_from_index(g)), rk, total - 1)


def min_rank_distance_sampled(code: GabidulinCode, samples: int, seed: int = 0) -> SampledDistance:
    d = code.n * code.k
    rk, _ = _scan.sample_min_rank(_codeword_basis(code), code.n, d, samples, seed)
    return SampledDistance(rk, samples)


# ---------- inner products and duals


def trace_inner_product(x: ExtVector, y: ExtVector) -> int:
    x._check(y)
    f = x.field
    s = 0
    for a, b in zip(x.entries, y.entries):
        s ^= f.tr(f.mul(a, b))
    return s


def hermitian_inner_product(x: ExtVector, y: ExtVector) -> Fe:
    """``sum x_i * y_i^(2^(n/2))``; requires even field degree."""
    x._check(y)
    f = x.field
    s = 0
    for a, b in zip(x.entries, y.entries):
        s ^= f.mul(a, f.conj(b))
    return Fe(f, s)


def _ext_kernel(field: FieldSpec, rows: Sequence[Sequence[int]], m: int) -> list[tuple[int, ...]]:
    """Basis of ``{z : A z^T = 0}`` over GF(2^n) by Gauss-Jordan elimination."""
    A = [list(r) for r in rows]
    piv: list[int] = []
    r = 0
    for c in range(m):
        p = next((i for i in range(r, len(A)) if A[i][c]), None)
        if p is None:
            continue
        A[r], A[p] = A[p], A[r]
        inv = field.inv(A[r][c])
        A[r] = [field.mul(inv, a) for a in A[r]]
        for i in range(len(A)):
            if i != r and A[i][c]:
                lam = A[i][c]
                A[i] = [a ^ field.mul(lam, b) for a, b in zip(A[i], A[r])]
        piv.append(c)
        r += 1
    out = []
    for f_col in (c for c in range(m) if c not in piv):
        z = [0] * m
        z[f_col] = 1
        for i, p in enumerate(piv):
            z[p] = A[i][f_col]  # characteristic 2: -a = a
        out.append(tuple(z))
    return out


def hermitian_dual(code: GabidulinCode) -> list[ExtVector]:
    """Extension-field basis of ``C^{perp_H}``, dimension ``m - k``."""
    f = code.field
    if f.degree % 2:
        raise DomainError(f"hermitian dual needs an even degree, got {f.degree}")
    # <c, y>_H = sum c_i conj(y_i): solve for z = conj(y), then conjugate back
    zs = _ext_kernel(f, code.generator, code.m)
    return [ExtVector(f, tuple(f.conj(z) for z in zv)) for zv in zs]


def is_hermitian_self_orthogonal(code: GabidulinCode) -> bool:
    rows = code.rows()
    if code.field.degree % 2:
        raise DomainError(f"hermitian inner product needs an even degree, got {code.field.degree}")
    return all(not hermitian_inner_product(a, b) for a in rows for b in rows)


def frobenius_shift(alpha: ExtVector, r: int) -> ExtVector:
    """Cyclic shift ``(a_r, ..., a_{n-1}, a_0, ..., a_{r-1})`` of a Frobenius orbit."""
    r %= len(alpha)
    return ExtVector(alpha.field, alpha.entries[r:] + alpha.entries[:r])


def trace_dual_gabidulin(alpha: ExtVector | BasisF2n, r: int) -> GabidulinCode:
    """``Gab(alpha^(2^r), n - r)`` for ``alpha`` a self-dual normal basis orbit."""
    if isinstance(alpha, BasisF2n):
        alpha = ExtVector(alpha.field, alpha.elements)
    f = alpha.field
    n = f.degree
    if len(alpha) != n:
        raise ValueError("alpha must list the n elements of a normal basis")
    if any(f.frob(alpha.entries[0], i) != a for i, a in enumerate(alpha.entries)):
        raise ValueError("alpha is not a Frobenius orbit")
    try:
        self_dual = is_self_dual_basis(BasisF2n(f, alpha.entries))
    except ValueError:
        self_dual = False
    if not self_dual:
        raise ValueError("alpha is not self-dual")
    if not 1 <= r < n:
        raise ValueError(f"r must satisfy 1 <= r < n, got r={r}, n={n}")
    return make_gabidulin(f, frobenius_shift(alpha, r), n - r)


def expand_code(code: GabidulinCode, basis: BasisF2n | None = None) -> MatF2:
    """GF(2) generator of the code, component-major: column ``i*n + j`` is coord j of entry i."""
    n = code.n
    rows = []
    for v in code.gf2_basis():
        packed = 0
        for i, e in enumerate(v.entries):
            c = e if basis is None else basis.coords(e)
            packed |= c << (i * n)
        rows.append(packed)
    return MatF2.from_ints(rows, code.m * n)


def trace_orthogonal_complement(code: GabidulinCode) -> MatF2:
    """``{y : <c, y>_Tr = 0 for all c in C}`` in polynomial-basis coordinates.

    Built from the trace pairing against the unit vectors ``x^j e_i``, so it
    does not rely on any self-dual basis.
    """
    f = code.field
    n = f.degree
    pairing = [
        [f.tr(f.mul(c, 1 << j)) for c in v.entries for j in range(n)] for v in code.gf2_basis()
    ]
    return kernel(MatF2.from_array(np.array(pairing, dtype=np.uint8), cols=code.m * n))
