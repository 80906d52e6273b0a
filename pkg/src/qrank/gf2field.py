"""Arithmetic in GF(2^n) and search for self-dual / normal bases.

Elements are stored as Python ints whose bit ``i`` is the coefficient of
``x^i`` (little-endian).  :class:`FieldSpec` carries the int-level arithmetic;
:class:`Fe` wraps an int with its field for operator syntax.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field as dc_field
from functools import cached_property
from typing import Iterable, Iterator, Sequence

import numpy as np

__all__ = [
    "BasisF2n",
    "DomainError",
    "Fe",
    "FieldMismatchError",
    "FieldSpec",
    "SearchExhaustedError",
    "combine_from_basis",
    "expand_in_basis",
    "fe_add",
    "fe_inv",
    "fe_mul",
    "fe_pow",
    "find_irreducible",
    "find_normal_basis",
    "find_self_dual_basis",
    "find_self_dual_normal_basis",
    "frobenius",
    "hermitian_conjugate",
    "is_irreducible",
    "is_self_dual_basis",
    "trace",
]

MAX_DEGREE = 32
BASIS_KINDS = ("general", "self_dual", "normal", "self_dual_normal")


class DomainError(ValueError):
    """Operation undefined for the given field or element."""


class FieldMismatchError(DomainError):
    """Operands belong to different fields."""


class SearchExhaustedError(RuntimeError):
    """A basis search consumed its budget without success."""


# ---------- polynomials over GF(2) as ints


def _deg(p: int) -> int:
    return p.bit_length() - 1


def _pmod(a: int, m: int) -> int:
    dm = _deg(m)
    while a and _deg(a) >= dm:
        a ^= m << (_deg(a) - dm)
    return a


def _pmulmod(a: int, b: int, m: int) -> int:
    r = 0
    dm = _deg(m)
    top = 1 << dm
    while b:
        if b & 1:
            r ^= a
        b >>= 1
        a <<= 1
        if a & top:
            a ^= m
    return r


def _pgcd(a: int, b: int) -> int:
    while b:
        a, b = b, _pmod(a, b)
    return a


def is_irreducible(modulus: int) -> bool:
    """Rabin test: ``gcd(x^(2^i) - x, f) = 1`` for all ``i <= deg/2``."""
    n = _deg(modulus)
    if n < 1:
        return False
    if n == 1:
        return True
    if not modulus & 1:
        return False
    x = 0b10
    xp = x
    for _ in range(n // 2):
        xp = _pmulmod(xp, xp, modulus)
        if _pgcd(modulus, xp ^ x) != 1:
            return False
    return True


def find_irreducible(n: int) -> "FieldSpec":
    """Smallest irreducible monic polynomial of degree ``n`` read as an integer."""
    if not 1 <= n <= MAX_DEGREE:
        raise ValueError(f"degree must be in 1..{MAX_DEGREE}, got {n}")
    for low in range(1 << n):
        cand = (1 << n) | low
        if is_irreducible(cand):
            return FieldSpec(n, cand)
    raise AssertionError("unreachable: irreducibles exist in every degree")


# ---------- the field


@dataclass(frozen=True)
class FieldSpec:
    """GF(2^degree) defined by an irreducible ``modulus`` (bit i = coeff of x^i)."""

    degree: int
    modulus: int

    def __post_init__(self) -> None:
        if not 1 <= self.degree <= MAX_DEGREE:
            raise DomainError(f"degree must be in 1..{MAX_DEGREE}, got {self.degree}")
        if _deg(self.modulus) != self.degree:
            raise DomainError(f"modulus {self.modulus:#x} does not have degree {self.degree}")
        if not is_irreducible(self.modulus):
            raise DomainError(f"modulus {self.modulus:#x} is reducible")

    @classmethod
    def from_modulus(cls, modulus: int) -> "FieldSpec":
        return cls(_deg(modulus), modulus)

    @property
    def order(self) -> int:
        return 1 << self.degree

    @property
    def mask(self) -> int:
        return self.order - 1

    def __repr__(self) -> str:
        return f"FieldSpec(degree={self.degree}, modulus={self.modulus:#x})"

    # int-level arithmetic; callers guarantee operands are reduced
    def mul(self, a: int, b: int) -> int:
        if self.degree == 1:
            return a & b
        return _pmulmod(a, b, self.modulus)

    def pow(self, a: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(a), -e)
        r = 1
        while e:
            if e & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            e >>= 1
        return r

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in GF(2^n)")
        return self.pow(a, self.order - 2)

    def frob(self, a: int, r: int = 1) -> int:
        for _ in range(r % self.degree):
            a = self.mul(a, a)
        return a

    def tr(self, a: int) -> int:
        s = 0
        x = a
        for _ in range(self.degree):
            s ^= x
            x = self.mul(x, x)
        assert s in (0, 1), "trace must land in GF(2)"
        return s

    def conj(self, a: int) -> int:
        if self.degree % 2:
            raise DomainError(f"hermitian conjugation needs an even degree, got {self.degree}")
        return self.frob(a, self.degree // 2)

    def elements(self) -> Iterator[int]:
        return iter(range(self.order))

    def __call__(self, bits: int) -> "Fe":
        return Fe(self, bits)

    @property
    def zero(self) -> "Fe":
        return Fe(self, 0)

    @property
    def one(self) -> "Fe":
        return Fe(self, 1)

    @property
    def x(self) -> "Fe":
        """Class of ``x`` modulo the modulus (the root called omega)."""
        return Fe(self, _pmod(0b10, self.modulus))

    def to_json(self) -> dict:
        return {"degree": self.degree, "modulus": to_hex(self.modulus)}

    @classmethod
    def from_json(cls, obj: dict) -> "FieldSpec":
        return cls(int(obj["degree"]), from_hex(obj["modulus"]))


def to_hex(bits: int) -> str:
    return format(bits, "x")


def from_hex(text: str) -> int:
    return int(text, 16)


@dataclass(frozen=True)
class Fe:
    """An element of ``field``; ``bits`` is its little-endian coefficient int."""

    field: FieldSpec
    bits: int

    def __post_init__(self) -> None:
        if not 0 <= self.bits < self.field.order:
            raise ValueError(f"{self.bits:#x} is not a reduced element of {self.field}")

    def _other(self, other: "Fe") -> int:
        if not isinstance(other, Fe):
            return NotImplemented  # type: ignore[return-value]
        if other.field != self.field:
            raise FieldMismatchError(f"{self.field} vs {other.field}")
        return other.bits

    def __add__(self, other: "Fe") -> "Fe":
        return Fe(self.field, self.bits ^ self._other(other))

    __sub__ = __add__

    def __neg__(self) -> "Fe":
        return self

    def __mul__(self, other: "Fe") -> "Fe":
        return Fe(self.field, self.field.mul(self.bits, self._other(other)))

    def __truediv__(self, other: "Fe") -> "Fe":
        return Fe(self.field, self.field.mul(self.bits, self.field.inv(self._other(other))))

    def __pow__(self, e: int) -> "Fe":
        return Fe(self.field, self.field.pow(self.bits, e))

    def __bool__(self) -> bool:
        return self.bits != 0

    def __int__(self) -> int:
        return self.bits

    def inv(self) -> "Fe":
        return Fe(self.field, self.field.inv(self.bits))

    def frobenius(self, r: int = 1) -> "Fe":
        return Fe(self.field, self.field.frob(self.bits, r))

    def trace(self) -> int:
        return self.field.tr(self.bits)

    def conj(self) -> "Fe":
        return Fe(self.field, self.field.conj(self.bits))

    def hex(self) -> str:
        return to_hex(self.bits)

    def __repr__(self) -> str:
        return f"Fe(0x{self.bits:x})"


def fe_add(a: Fe, b: Fe) -> Fe:
    return a + b


def fe_mul(a: Fe, b: Fe) -> Fe:
    return a * b


def fe_pow(a: Fe, e: int) -> Fe:
    if e < 0:
        raise ValueError("exponent must be nonnegative")
    return a**e


def fe_inv(a: Fe) -> Fe:
    return a.inv()


def frobenius(a: Fe, r: int) -> Fe:
    """``a^(2^r)``."""
    return a.frobenius(r)


def trace(a: Fe) -> int:
    return a.trace()


def hermitian_conjugate(a: Fe) -> Fe:
    """``a^(2^(n/2))``; raises :class:`DomainError` for odd ``n``."""
    return a.conj()


# ---------- bases


def _gf2_inverse_rows(rows: Sequence[int], n: int) -> list[int] | None:
    """Inverse of an n x n GF(2) matrix given as little-endian row ints."""
    work = [(r, 1 << i) for i, r in enumerate(rows)]
    for c in range(n):
        p = next((i for i in range(c, n) if work[i][0] >> c & 1), None)
        if p is None:
            return None
        work[c], work[p] = work[p], work[c]
        pr, pi = work[c]
        for i in range(n):
            if i != c and work[i][0] >> c & 1:
                work[i] = (work[i][0] ^ pr, work[i][1] ^ pi)
    return [w[1] for w in work]


def _independent(elems: Sequence[int], n: int) -> bool:
    return len(elems) == n and _gf2_inverse_rows(elems, n) is not None


@dataclass(frozen=True)
class BasisF2n:
    """Ordered GF(2)-basis of GF(2^n); invariants for ``kind`` are checked on construction."""

    field: FieldSpec
    elements: tuple[int, ...]
    kind: str = "general"
    generator: int | None = dc_field(default=None)

    def __post_init__(self) -> None:
        object.__setattr__(self, "elements", tuple(int(e) for e in self.elements))
        n = self.field.degree
        if self.kind not in BASIS_KINDS:
            raise ValueError(f"unknown basis kind {self.kind!r}")
        if not _independent(self.elements, n):
            raise ValueError("basis elements are not linearly independent over GF(2)")
        if self.kind in ("self_dual", "self_dual_normal") and not _gram_is_identity(
            self.field, self.elements
        ):
            raise ValueError("trace Gram matrix is not the identity")
        if self.kind in ("normal", "self_dual_normal"):
            if self.generator is None or _orbit(self.field, self.generator) != self.elements:
                raise ValueError("normal basis must be the Frobenius orbit of its generator")

    @classmethod
    def polynomial(cls, field: FieldSpec) -> "BasisF2n":
        return cls(field, tuple(1 << i for i in range(field.degree)))

    @cached_property
    def _inverse(self) -> list[int]:
        inv = _gf2_inverse_rows(self.elements, self.field.degree)
        assert inv is not None
        return inv

    def coords(self, a: int) -> int:
        """Coordinates of ``a`` packed little-endian into an int."""
        out = 0
        for i, row in enumerate(self._inverse):
            if a >> i & 1:
                out ^= row
        return out

    def element(self, coords: int) -> int:
        out = 0
        for j, e in enumerate(self.elements):
            if coords >> j & 1:
                out ^= e
        return out

    def __len__(self) -> int:
        return len(self.elements)

    def __getitem__(self, i: int) -> Fe:
        return Fe(self.field, self.elements[i])

    def to_json(self) -> dict:
        return {
            "kind": self.kind,
            "elements": [to_hex(e) for e in self.elements],
            "generator": None if self.generator is None else to_hex(self.generator),
        }

    @classmethod
    def from_json(cls, field: FieldSpec, obj: dict) -> "BasisF2n":
        gen = obj.get("generator")
        return cls(
            field,
            tuple(from_hex(e) for e in obj["elements"]),
            obj.get("kind", "general"),
            None if gen is None else from_hex(gen),
        )


def _orbit(field: FieldSpec, theta: int) -> tuple[int, ...]:
    out = []
    x = theta
    for _ in range(field.degree):
        out.append(x)
        x = field.mul(x, x)
    return tuple(out)


def _gram_is_identity(field: FieldSpec, elems: Sequence[int]) -> bool:
    return all(
        field.tr(field.mul(a, b)) == (i == j) for i, a in enumerate(elems) for j, b in enumerate(elems)
    )


def trace_gram(field: FieldSpec, elems: Sequence[int]) -> np.ndarray:
    return np.array([[field.tr(field.mul(a, b)) for b in elems] for a in elems], dtype=np.uint8)


def expand_in_basis(a: Fe, basis: BasisF2n) -> np.ndarray:
    """Coordinate bit vector of ``a`` (length n) in ``basis``."""
    if a.field != basis.field:
        raise FieldMismatchError(f"{a.field} vs {basis.field}")
    c = basis.coords(a.bits)
    return np.array([(c >> j) & 1 for j in range(basis.field.degree)], dtype=np.uint8)


def combine_from_basis(coords: Iterable[int], basis: BasisF2n) -> Fe:
    packed = 0
    for j, c in enumerate(coords):
        if int(c) & 1:
            packed |= 1 << j
    return Fe(basis.field, basis.element(packed))


def is_self_dual_basis(basis: BasisF2n | Sequence[Fe]) -> bool:
    if isinstance(basis, BasisF2n):
        field, elems = basis.field, basis.elements
    else:
        elems_fe = list(basis)
        if not elems_fe:
            return False
        field = elems_fe[0].field
        if any(e.field != field for e in elems_fe):
            return False
        elems = tuple(e.bits for e in elems_fe)
    return _independent(elems, field.degree) and _gram_is_identity(field, elems)


def find_self_dual_basis(field: FieldSpec, *, seed: int = 0, budget: int = 100_000) -> BasisF2n:
    """Self-dual basis by congruence-diagonalising the trace form.

    Starts from the polynomial basis and orthonormalises against
    ``B(u, v) = Tr(uv)``; whenever only isotropic vectors remain, a hyperbolic
    pair ``(u, v)`` and an earlier unit vector ``e`` are replaced by
    ``e+u+v, e+u, e+v``.  A seeded random search is the fallback.
    """

    def form(u: int, v: int) -> int:
        return field.tr(field.mul(u, v))

    rest = [1 << i for i in range(field.degree)]
    done: list[int] = []
    ok = True
    while rest:
        e = next((w for w in rest if form(w, w)), None)
        if e is not None:
            rest.remove(e)
            done.append(e)
            rest = [w ^ e if form(w, e) else w for w in rest]
            continue
        u = rest[0]
        v = next((w for w in rest[1:] if form(u, w)), None)
        if v is None or not done:
            ok = False
            break
        rest = [w for w in rest if w not in (u, v)]
        rest = [w ^ (u if form(w, v) else 0) ^ (v if form(w, u) else 0) for w in rest]
        e = done.pop()
        done += [e ^ u ^ v, e ^ u, e ^ v]
    if ok and _independent(done, field.degree) and _gram_is_identity(field, done):
        return BasisF2n(field, tuple(done), "self_dual")
    return _random_self_dual(field, seed, budget)


def _random_self_dual(field: FieldSpec, seed: int, budget: int) -> BasisF2n:
    rng = random.Random(seed)
    n = field.degree
    for _ in range(budget):
        # greedy: orthonormal vectors are automatically independent
        picked: list[int] = []
        for _ in range(64 * n):
            a = rng.randrange(1, field.order)
            if field.tr(field.mul(a, a)) != 1:
                continue
            if any(field.tr(field.mul(a, b)) for b in picked):
                continue
            picked.append(a)
            if len(picked) == n:
                break
        if len(picked) == n and _independent(picked, n) and _gram_is_identity(field, picked):
            return BasisF2n(field, tuple(picked), "self_dual")
    raise SearchExhaustedError(f"no self-dual basis found for {field} within budget")


def find_normal_basis(field: FieldSpec, generator: Fe | int | None = None) -> BasisF2n:
    """Normal basis ``theta^(2^i)``; scans elements in ascending order unless given."""
    n = field.degree
    if generator is not None:
        theta = int(generator)
        orbit = _orbit(field, theta)
        if not _independent(orbit, n):
            raise DomainError(f"0x{theta:x} does not generate a normal basis")
        return BasisF2n(field, orbit, "normal", theta)
    for theta in range(1, field.order):
        orbit = _orbit(field, theta)
        if _independent(orbit, n):
            return BasisF2n(field, orbit, "normal", theta)
    raise AssertionError("normal basis theorem violated")


def find_self_dual_normal_basis(field: FieldSpec, *, budget: int | None = None) -> BasisF2n:
    n = field.degree
    if n % 2 == 0:
        raise DomainError(f"self-dual normal bases are only searched for odd degree, got {n}")
    limit = field.order if budget is None else min(field.order, budget + 1)
    for theta in range(1, limit):
        orbit = _orbit(field, theta)
        if _independent(orbit, n) and _gram_is_identity(field, orbit):
            return BasisF2n(field, orbit, "self_dual_normal", theta)
    raise SearchExhaustedError(f"no self-dual normal basis for {field} within budget")
