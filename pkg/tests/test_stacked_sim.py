import numpy as np
import pytest
from hypothesis import given, strategies as st

from qrank.f2linalg import MatF2, rank, symplectic_gram
from qrank.qconstruct import build_css_code, build_proposed_code
from qrank.seeding import derive_seed, splitmix64
from qrank.stacked_sim import (
    CliffordSymplectic,
    PauliString,
    StackedError,
    commutes,
    error_rank,
    mu_map,
    pauli_mul,
    propagate,
    random_clifford_symplectic,
    random_two_cell_fault,
    simulate_faulty_circuit,
    simulate_trials,
    stabilizer_generators,
)


@st.composite
def paulis(draw, m=3, n=3):
    x = np.array(draw(st.lists(st.integers(0, 1), min_size=m * n, max_size=m * n)), dtype=np.uint8)
    z = np.array(draw(st.lists(st.integers(0, 1), min_size=m * n, max_size=m * n)), dtype=np.uint8)
    return PauliString(m, n, draw(st.integers(0, 3)), x.reshape(m, n), z.reshape(m, n))


def test_text_format():
    P = PauliString.parse("-i XI | YZ")
    assert str(P) == "-i XI | YZ"
    assert P.phase_exp == (3 + 1) % 4  # one Y contributes i
    assert PauliString.parse("+1 IY").phase_exp == 1
    assert str(PauliString.from_symplectic([0, 1, 0, 1], 1, 2)) == "-i IY"
    with pytest.raises(ValueError):
        PauliString.parse("XQ")
    with pytest.raises(ValueError):
        PauliString.parse("XI | X")


@given(paulis())
def test_parse_render_round_trip(P):
    assert PauliString.parse(str(P)) == P


def test_mu_examples():
    assert not mu_map(PauliString.identity(2, 3)).matrix.to_array().any()
    assert mu_map(PauliString.parse("X")).matrix.to_strings() == ["10"]
    y = PauliString.parse("Y")
    assert mu_map(y).matrix.to_strings() == ["11"] and y.phase_exp == 1


def test_error_rank_examples():
    assert error_rank(StackedError.zeros(3, 3)) == 0
    assert error_rank(PauliString.parse("XII | III")) == 1
    assert error_rank(PauliString.parse("XI | IX | ZZ")) == 3


def test_pauli_algebra():
    X, Z = PauliString.parse("X"), PauliString.parse("Z")
    I = PauliString.identity(1, 1)
    assert X * I == X
    assert (pauli_mul(X, Z).phase_exp - pauli_mul(Z, X).phase_exp) % 4 == 2
    assert pauli_mul(X, X) == I
    Y = PauliString.parse("Y")
    assert pauli_mul(Y, Y) == I  # Y^2 = 1


@given(paulis(), paulis())
def test_mu_additive(P, Q):
    assert mu_map(P * Q).matrix == mu_map(P).matrix + mu_map(Q).matrix


@given(paulis(), paulis(), paulis())
def test_multiplication_associative(P, Q, R):
    assert (P * Q) * R == P * (Q * R)


@given(paulis(), paulis())
def test_commutation_three_way(P, Q):
    sym = int(
        (P.x_bits.ravel() @ Q.z_bits.ravel().astype(int) + Q.x_bits.ravel() @ P.z_bits.ravel().astype(int)) % 2
    )
    diff = ((P * Q).phase_exp - (Q * P).phase_exp) % 4
    assert commutes(P, Q) == (sym == 0) == (diff == 0)


def test_commutes_examples():
    X, Z = PauliString.parse("X"), PauliString.parse("Z")
    assert commutes(X, X)
    assert not commutes(X, Z)
    with pytest.raises(ValueError):
        commutes(X, PauliString.parse("XX"))


def test_reference_generators_commute():
    gens = [PauliString.parse(s) for s in ("XI|YX|IX|IY", "ZX|XY|IY|YY", "YZ|XZ|YY|ZY", "ZI|XX|ZY|IZ")]
    assert all(commutes(a, b) for a in gens for b in gens)


@pytest.mark.parametrize(
    "builder", [lambda: build_proposed_code(2, 1), lambda: build_proposed_code(3, 1), lambda: build_css_code(5, 1, 2)]
)
def test_stabilizers_commute(builder):
    code, _ = builder()
    gens = stabilizer_generators(code)
    assert all(commutes(a, b) for a in gens for b in gens)


@pytest.mark.parametrize("n", [2, 4, 8])
def test_random_clifford_is_symplectic(n):
    lam = symplectic_gram(n)
    for seed in range(100):
        U = random_clifford_symplectic(n, seed)
        assert U.A @ lam @ U.A.T == lam
    assert random_clifford_symplectic(n, 5) == random_clifford_symplectic(n, 5)
    assert random_clifford_symplectic(n, 5, transvections=0) == CliffordSymplectic.identity(n)


def test_non_symplectic_rejected():
    A = MatF2.from_strings(["1100", "0100", "0010", "0001"])
    with pytest.raises(ValueError):
        CliffordSymplectic(2, A)


@given(st.integers(0, 2**32), st.integers(1, 6), st.integers(1, 6))
def test_rank_invariance_symplectic(seed, m, n):
    rng = np.random.default_rng(seed)
    E = StackedError(MatF2.from_array(rng.integers(0, 2, size=(m, 2 * n)), cols=2 * n))
    U = random_clifford_symplectic(n, seed)
    assert error_rank(propagate(E, U)) == error_rank(E)
    assert propagate(E, CliffordSymplectic.identity(n)) == E
    assert error_rank(propagate(StackedError.zeros(m, n), U)) == 0


@given(st.integers(0, 2**32), st.integers(1, 6), st.integers(1, 5))
def test_rank_invariance_any_invertible(seed, m, n):
    rng = np.random.default_rng(seed)
    while True:
        A = MatF2.from_array(rng.integers(0, 2, size=(2 * n, 2 * n)))
        if rank(A) == 2 * n:
            break
    E = StackedError(MatF2.from_array(rng.integers(0, 2, size=(m, 2 * n)), cols=2 * n))
    assert error_rank(propagate(E, A)) == error_rank(E)


@given(st.integers(0, 2**32), st.integers(1, 10), st.integers(2, 10), st.data())
def test_two_cell_fault_support(seed, m, n, data):
    c1, c2 = data.draw(st.lists(st.integers(0, n - 1), min_size=2, max_size=2, unique=True))
    E = random_two_cell_fault(m, n, (c1, c2), seed)
    arr = E.matrix.to_array()
    allowed = {c1, c2, n + c1, n + c2}
    assert not arr[:, [c for c in range(2 * n) if c not in allowed]].any()
    assert error_rank(E) <= 4


def test_two_cell_fault_rejects_bad_cells():
    with pytest.raises(ValueError):
        random_two_cell_fault(2, 3, (1, 1), 0)
    with pytest.raises(ValueError):
        random_two_cell_fault(2, 3, (0, 3), 0)


def test_simulate_faulty_circuit():
    gates = [random_clifford_symplectic(8, s) for s in range(20)]
    Q, t, ok = simulate_faulty_circuit(8, 8, gates, [], 0)
    assert t == 0 and ok and error_rank(Q) == 0
    for seed in range(20):
        Q, t, ok = simulate_faulty_circuit(8, 8, gates, [seed % 20], seed)
        assert t == 1 and ok and error_rank(Q) <= 4
    ident = [CliffordSymplectic.identity(4)] * 5
    Q, t, ok = simulate_faulty_circuit(3, 4, ident, [2], 9)
    assert ok and error_rank(Q) <= 4


def test_simulate_trials_report():
    rep = simulate_trials(8, 8, 20, (1, 5), 300, seed=4)
    assert rep.violations == 0 and rep.subadditivity_violations == 0 and rep.rank_changes == 0
    assert all(1 <= r.t <= 5 for r in rep.trials)
    zero = simulate_trials(4, 4, 5, 0, 20, seed=1)
    assert all(r.rank_q == 0 for r in zero.trials)
    lines = list(rep.json_lines())
    assert len(lines) == 301


def test_simulate_trials_thread_independent(monkeypatch):
    monkeypatch.delenv("QRANK_THREADS", raising=False)
    a = simulate_trials(6, 5, 10, (0, 4), 200, seed=3, threads=1, chunk=32)
    b = simulate_trials(6, 5, 10, (0, 4), 200, seed=3, threads=8, chunk=7)
    assert a.trials == b.trials


def test_seeding():
    assert splitmix64(0) == 0xE220A8397B1DCDAF
    assert derive_seed(1, 2) != derive_seed(1, 3)
    assert derive_seed(7) == derive_seed(7)
