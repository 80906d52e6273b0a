"""Stacked Pauli errors, their rank, and Clifford fault propagation.

A Pauli operator on m layers of n cells is stored as ``i^phase_exp`` times
``prod X^x_ij Z^z_ij``.  Its phase-free image ``mu`` is the m x 2n GF(2)
matrix whose row i is ``(x_i | z_i)``; the error rank is the rank of that
matrix.  Conjugating every layer by the same Clifford acts as ``E -> E A``.
"""

from __future__ import annotations

import json
import re
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import kernels
from ._scan import resolve_threads
from .f2linalg import MatF2, SingularMatrixError, inverse, rank, symplectic_gram
from .seeding import derive_seed

__all__ = [
    "CliffordSymplectic",
    "PauliString",
    "SimulationReport",
    "StackedError",
    "TrialResult",
    "commutes",
    "error_rank",
    "mu_layer",
    "mu_map",
    "pauli_mul",
    "propagate",
    "random_clifford_symplectic",
    "random_two_cell_fault",
    "simulate_faulty_circuit",
    "simulate_trials",
    "stabilizer_generators",
]

_PHASES = {"+1": 0, "+i": 1, "-1": 2, "-i": 3}
_PHASE_TEXT = {v: k for k, v in _PHASES.items()}


class ShapeError(ValueError):
    pass


def _bitmat(a, m: int, n: int) -> np.ndarray:
    arr = np.asarray(a, dtype=np.uint8) & 1
    if arr.shape != (m, n):
        raise ShapeError(f"expected shape {(m, n)}, got {arr.shape}")
    arr = arr.copy()
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class PauliString:
    m: int
    n: int
    phase_exp: int
    x_bits: np.ndarray
    z_bits: np.ndarray

    def __post_init__(self) -> None:
        object.__setattr__(self, "phase_exp", int(self.phase_exp) % 4)
        object.__setattr__(self, "x_bits", _bitmat(self.x_bits, self.m, self.n))
        object.__setattr__(self, "z_bits", _bitmat(self.z_bits, self.m, self.n))

    @classmethod
    def identity(cls, m: int, n: int) -> "PauliString":
        z = np.zeros((m, n), dtype=np.uint8)
        return cls(m, n, 0, z, z)

    @classmethod
    def from_symplectic(cls, v: Sequence[int] | np.ndarray, m: int, n: int) -> "PauliString":
        """Stacked vector ``(a | b)`` of length 2mn -> ``X^a Z^b`` with phase 0."""
        v = np.asarray(v, dtype=np.uint8).ravel()
        if v.size != 2 * m * n:
            raise ShapeError(f"expected length {2 * m * n}, got {v.size}")
        return cls(m, n, 0, v[: m * n].reshape(m, n), v[m * n :].reshape(m, n))

    @classmethod
    def parse(cls, text: str) -> "PauliString":
        """``"+1 XI | YX | IX | IY"``; layers split on ``|`` or newlines.

        A ``Y`` letter means ``i X Z`` and contributes one power of i.
        """
        text = text.strip()
        phase = 0
        m = re.match(r"^([+-])(1|i)\s*", text)
        if m:
            phase = _PHASES[m.group(1) + m.group(2)]
            text = text[m.end() :]
        layers = [ln.strip() for ln in re.split(r"[|\n]", text) if ln.strip()]
        if not layers:
            raise ValueError("empty Pauli string")
        n = len(layers[0])
        if any(len(ln) != n for ln in layers):
            raise ShapeError("all layers need the same number of cells")
        x = np.zeros((len(layers), n), dtype=np.uint8)
        z = np.zeros_like(x)
        for i, ln in enumerate(layers):
            for j, ch in enumerate(ln.upper()):
                if ch not in "IXYZ":
                    raise ValueError(f"bad Pauli letter {ch!r}")
                x[i, j] = ch in "XY"
                z[i, j] = ch in "ZY"
                phase += ch == "Y"
        return cls(len(layers), n, phase, x, z)

    def letters(self) -> list[str]:
        table = np.array(["I", "X", "Z", "Y"])
        idx = self.x_bits + 2 * self.z_bits
        return ["".join(table[row]) for row in idx]

    def __str__(self) -> str:
        shown = (self.phase_exp - int((self.x_bits & self.z_bits).sum())) % 4
        return f"{_PHASE_TEXT[shown]} " + " | ".join(self.letters())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PauliString):
            return NotImplemented
        return (
            (self.m, self.n, self.phase_exp) == (other.m, other.n, other.phase_exp)
            and np.array_equal(self.x_bits, other.x_bits)
            and np.array_equal(self.z_bits, other.z_bits)
        )

    def __mul__(self, other: "PauliString") -> "PauliString":
        return pauli_mul(self, other)

    def symplectic_vector(self) -> np.ndarray:
        return np.concatenate([self.x_bits.ravel(), self.z_bits.ravel()])


@dataclass(frozen=True)
class StackedError:
    matrix: MatF2

    @property
    def m(self) -> int:
        return self.matrix.rows

    @property
    def n(self) -> int:
        return self.matrix.cols // 2

    @classmethod
    def zeros(cls, m: int, n: int) -> "StackedError":
        return cls(MatF2.zeros(m, 2 * n))

    def __xor__(self, other: "StackedError") -> "StackedError":
        return StackedError(self.matrix + other.matrix)


def mu_layer(x_row: Sequence[int], z_row: Sequence[int]) -> np.ndarray:
    return np.concatenate([np.asarray(x_row, np.uint8), np.asarray(z_row, np.uint8)]) & 1


def mu_map(P: PauliString) -> StackedError:
    return StackedError(MatF2.from_array(np.hstack([P.x_bits, P.z_bits]), cols=2 * P.n))


def error_rank(E: StackedError | PauliString) -> int:
    if isinstance(E, PauliString):
        E = mu_map(E)
    return rank(E.matrix)


def _same_shape(P: PauliString, Q: PauliString) -> None:
    if (P.m, P.n) != (Q.m, Q.n):
        raise ShapeError(f"shape mismatch {(P.m, P.n)} vs {(Q.m, Q.n)}")


def pauli_mul(P: PauliString, Q: PauliString) -> PauliString:
    """Sitewise ``X^a Z^b X^c Z^d = (-1)^(bc) X^(a+c) Z^(b+d)``."""
    _same_shape(P, Q)
    sign = int((P.z_bits & Q.x_bits).sum())
    return PauliString(
        P.m, P.n, P.phase_exp + Q.phase_exp + 2 * sign, P.x_bits ^ Q.x_bits, P.z_bits ^ Q.z_bits
    )


def commutes(P: PauliString, Q: PauliString) -> bool:
    """Symplectic test, cross-checked against the phases of PQ and QP."""
    _same_shape(P, Q)
    s = int(((P.x_bits & Q.z_bits).sum() + (Q.x_bits & P.z_bits).sum()) % 2)
    diff = (pauli_mul(P, Q).phase_exp - pauli_mul(Q, P).phase_exp) % 4
    if diff not in (0, 2) or (diff == 2) != bool(s):
        raise AssertionError("symplectic product disagrees with phase bookkeeping")
    return s == 0


def stabilizer_generators(code) -> list[PauliString]:
    """Generator rows of a ``BinarySymplecticCode`` as phase-0 Pauli strings."""
    return [PauliString.from_symplectic(row, code.m, code.n) for row in code.generators.to_array()]


# ---------- Clifford action


@dataclass(frozen=True)
class CliffordSymplectic:
    n: int
    A: MatF2

    def __post_init__(self) -> None:
        if self.A.shape != (2 * self.n, 2 * self.n):
            raise ShapeError(f"A must be {2 * self.n}x{2 * self.n}")
        try:
            inverse(self.A)
        except SingularMatrixError:
            raise ValueError("A is singular") from None
        lam = symplectic_gram(self.n)
        if self.A @ lam @ self.A.T != lam:
            raise ValueError("A does not preserve the symplectic form")

    @classmethod
    def identity(cls, n: int) -> "CliffordSymplectic":
        return cls(n, MatF2.identity(2 * n))


def _words_to_mat(rows: np.ndarray, cols: int) -> MatF2:
    return MatF2(len(rows), cols, np.asarray(rows, dtype=np.uint64).reshape(-1, 1))


def _random_gate_rows(rng: np.random.Generator, count: int, n: int, transvections: int) -> np.ndarray:
    if transvections == 0:
        eye = np.left_shift(np.uint64(1), np.arange(2 * n, dtype=np.uint64))
        return np.broadcast_to(eye, (count, 2 * n)).copy()
    top = 1 << (2 * n)
    hs = rng.integers(1, top, size=(count, transvections), dtype=np.uint64, endpoint=False)
    hmask = rng.integers(0, 1 << n, size=count, dtype=np.uint64)
    return kernels.build_symplectic(hs, hmask, n)


def random_clifford_symplectic(n: int, seed: int, transvections: int | None = None) -> CliffordSymplectic:
    """Product of random transvections ``x -> x + <x,h>h`` then random X/Z swaps.

    ``transvections=0`` returns the identity.
    """
    if not 1 <= n <= 32:
        raise ValueError(f"n must be in [1, 32], got {n}")
    k = 4 * n if transvections is None else int(transvections)
    if k == 0:
        return CliffordSymplectic.identity(n)
    rng = np.random.default_rng(derive_seed(seed))
    rows = _random_gate_rows(rng, 1, n, k)[0]
    return CliffordSymplectic(n, _words_to_mat(rows, 2 * n))


def propagate(E: StackedError, U: CliffordSymplectic | MatF2) -> StackedError:
    """``E -> E A``; A need only be invertible for rank to be preserved."""
    A = U.A if isinstance(U, CliffordSymplectic) else U
    if A.rows != E.matrix.cols:
        raise ShapeError(f"gate acts on {A.rows // 2} cells, error has {E.n}")
    return StackedError(E.matrix @ A)


def _two_cell_rows(rng: np.random.Generator, m: int, n: int, c1: int, c2: int) -> np.ndarray:
    bits = rng.integers(0, 16, size=m, dtype=np.uint64)
    cols = (c1, c2, n + c1, n + c2)
    out = np.zeros(m, dtype=np.uint64)
    for j, c in enumerate(cols):
        out |= ((bits >> np.uint64(j)) & np.uint64(1)) << np.uint64(c)
    return out


def _check_cells(n: int, cells: Sequence[int]) -> tuple[int, int]:
    if len(cells) != 2:
        raise ValueError("a fault needs exactly two cells")
    c1, c2 = (int(c) for c in cells)
    if c1 == c2 or not (0 <= c1 < n and 0 <= c2 < n):
        raise ValueError(f"cells must be distinct and in [0, {n}), got {cells}")
    return c1, c2


def random_two_cell_fault(m: int, n: int, cells: Sequence[int], seed: int) -> StackedError:
    """Uniform m x 2n matrix supported on columns ``c1, c2, n+c1, n+c2``."""
    c1, c2 = _check_cells(n, cells)
    rng = np.random.default_rng(derive_seed(seed))
    return StackedError(_words_to_mat(_two_cell_rows(rng, m, n, c1, c2), 2 * n))


def simulate_faulty_circuit(
    m: int,
    n: int,
    gates: Sequence[CliffordSymplectic],
    fault_positions: Iterable[int],
    seed: int,
) -> tuple[StackedError, int, bool]:
    """Inject a two-cell fault after each listed gate and push it to the output.

    Returns ``(Q, t, rank(Q) <= 4t)``.  Each propagation step also asserts
    rank invariance.
    """
    positions = sorted(set(int(p) for p in fault_positions))
    if any(not 0 <= p < len(gates) for p in positions):
        raise ValueError("fault positions must index the gate list")
    if n < 2:
        raise ValueError("two-cell faults need n >= 2")
    rng = np.random.default_rng(derive_seed(seed))
    Q = StackedError.zeros(m, n)
    for p in positions:
        c1, c2 = (int(c) for c in rng.choice(n, size=2, replace=False))
        E = StackedError(_words_to_mat(_two_cell_rows(rng, m, n, c1, c2), 2 * n))
        r = error_rank(E)
        for U in gates[p + 1 :]:
            E = propagate(E, U)
            if error_rank(E) != r:
                raise AssertionError("rank changed under an invertible gate")
        Q = Q ^ E
    t = len(positions)
    return Q, t, error_rank(Q) <= 4 * t


# ---------- batched Monte Carlo


@dataclass(frozen=True)
class TrialResult:
    trial: int
    t: int
    rank_q: int
    sum_fault_rank: int
    rank_changes: int

    @property
    def bound_ok(self) -> bool:
        return self.rank_q <= 4 * self.t

    def to_json(self) -> dict:
        return {"trial": self.trial, "t": self.t, "rank_q": self.rank_q, "bound_ok": self.bound_ok}


@dataclass(frozen=True)
class SimulationReport:
    m: int
    n: int
    gates: int
    trials: tuple[TrialResult, ...]

    @property
    def violations(self) -> int:
        return sum(not r.bound_ok for r in self.trials)

    @property
    def subadditivity_violations(self) -> int:
        return sum(r.rank_q > r.sum_fault_rank for r in self.trials)

    @property
    def rank_changes(self) -> int:
        return sum(r.rank_changes for r in self.trials)

    @property
    def max_ratio(self) -> float:
        ratios = [r.rank_q / (4 * r.t) for r in self.trials if r.t]
        return max(ratios, default=0.0)

    def summary(self) -> dict:
        return {
            "summary": True,
            "m": self.m,
            "n": self.n,
            "gates": self.gates,
            "trials": len(self.trials),
            "violations": self.violations,
            "subadditivity_violations": self.subadditivity_violations,
            "rank_changes": self.rank_changes,
            "max_rank_ratio": round(self.max_ratio, 6),
        }

    def json_lines(self) -> Iterator[str]:
        for r in self.trials:
            yield json.dumps(r.to_json())
        yield json.dumps(self.summary())


def _draw_trial(seed: int, trial: int, m: int, n: int, G: int, faults: int | tuple[int, int], transvections: int):
    rng = np.random.default_rng(derive_seed(seed, trial))
    gates = _random_gate_rows(rng, G, n, transvections)
    lo, hi = (faults, faults) if isinstance(faults, int) else faults
    t = int(rng.integers(lo, hi + 1))
    on = np.zeros(G, dtype=np.bool_)
    if t:
        on[rng.choice(G, size=t, replace=False)] = True
    rows = np.zeros((G, m), dtype=np.uint64)
    for g in np.flatnonzero(on):
        c1, c2 = (int(c) for c in rng.choice(n, size=2, replace=False))
        rows[g] = _two_cell_rows(rng, m, n, c1, c2)
    return gates, rows, on, t


def simulate_trials(
    m: int,
    n: int,
    gates: int,
    faults: int | tuple[int, int],
    trials: int,
    seed: int = 0,
    *,
    transvections: int | None = None,
    threads: int | None = None,
    chunk: int = 1024,
) -> SimulationReport:
    """Independent random circuits; trial i is seeded by ``derive_seed(seed, i)``.

    ``faults`` is either an exact count or an inclusive ``(lo, hi)`` range
    drawn uniformly per trial.
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    if not 2 <= n <= 32 or m < 1 or gates < 1:
        raise ValueError(f"bad sizes m={m}, n={n}, gates={gates}")
    lo, hi = (faults, faults) if isinstance(faults, int) else faults
    if not 0 <= lo <= hi <= gates:
        raise ValueError(f"fault count must lie in [0, {gates}]")
    k = 4 * n if transvections is None else transvections

    def run(span: tuple[int, int]) -> list[TrialResult]:
        a, b = span
        drawn = [_draw_trial(seed, i, m, n, gates, faults, k) for i in range(a, b)]
        G = np.stack([d[0] for d in drawn])
        F = np.stack([d[1] for d in drawn])
        on = np.stack([d[2] for d in drawn])
        rq, sr, ch = kernels.simulate_batch(G, F, on, n)
        return [
            TrialResult(a + j, drawn[j][3], int(rq[j]), int(sr[j]), int(ch[j])) for j in range(b - a)
        ]

    spans = [(a, min(a + chunk, trials)) for a in range(0, trials, chunk)]
    nthreads = resolve_threads(threads)
    if nthreads == 1 or len(spans) == 1:
        parts = [run(s) for s in spans]
    else:
        with ThreadPoolExecutor(max_workers=nthreads) as pool:
            parts = list(pool.map(run, spans))
    return SimulationReport(m, n, gates, tuple(r for p in parts for r in p))
