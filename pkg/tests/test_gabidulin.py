import itertools

import pytest
from hypothesis import given, strategies as st

from qrank._scan import BudgetExceededError
from qrank.f2linalg import MatF2, rank, subspace_equal
from qrank.gabidulin import (
    ExtVector,
    expand_code,
    hermitian_dual,
    hermitian_inner_product,
    is_hermitian_self_orthogonal,
    make_gabidulin,
    min_rank_distance_bruteforce,
    min_rank_distance_sampled,
    rank_weight,
    trace_dual_gabidulin,
    trace_inner_product,
    trace_orthogonal_complement,
)
from qrank.gf2field import BasisF2n, FieldSpec, find_irreducible, find_self_dual_basis, find_self_dual_normal_basis

GF16 = FieldSpec(4, 0x13)
ALPHA = (0x8, 0xB, 0xF, 0xD)


def test_generator_rows_are_frobenius_powers():
    code = make_gabidulin(GF16, ALPHA, 2)
    assert code.generator[0] == ALPHA
    assert code.generator[1] == tuple(GF16.mul(a, a) for a in ALPHA)


def test_dependent_points_rejected():
    with pytest.raises(ValueError):
        make_gabidulin(GF16, (1, 1, 2, 4), 1)
    with pytest.raises(ValueError):
        make_gabidulin(GF16, ALPHA, 5)


def test_encode_is_linear():
    code = make_gabidulin(GF16, ALPHA, 2)
    a = code.encode([3, 5])
    b = code.encode([7, 9])
    assert a + b == code.encode([3 ^ 7, 5 ^ 9])


def naive_rank_weight(v: ExtVector) -> int:
    """Span size over GF(2): count distinct XOR combinations."""
    span = {0}
    for e in v.entries:
        span |= {s ^ e for s in span}
    return len(span).bit_length() - 1


@given(st.lists(st.integers(0, 15), min_size=1, max_size=6))
def test_rank_weight_matches_span_size(entries):
    v = ExtVector(GF16, tuple(entries))
    assert rank_weight(v) == naive_rank_weight(v)
    assert rank_weight(v, find_self_dual_basis(GF16)) == rank_weight(v)


@pytest.mark.parametrize("k,d", [(1, 4), (2, 3), (3, 2), (4, 1)])
def test_mrd_over_gf16(k, d):
    cert = min_rank_distance_bruteforce(make_gabidulin(GF16, ALPHA, k))
    assert cert.d == d
    assert cert.enumerated == 16**k - 1
    witness = make_gabidulin(GF16, ALPHA, k).encode(cert.witness_message)
    assert rank_weight(witness) == d


def test_mrd_naive_enumeration_small():
    f = find_irreducible(3)
    code = make_gabidulin(f, (1, 2, 4), 2)
    best = min(
        rank_weight(code.encode(list(msg)))
        for msg in itertools.product(range(8), repeat=2)
        if any(msg)
    )
    assert best == min_rank_distance_bruteforce(code).d == 2


def test_distance_budget_and_sampling():
    code = make_gabidulin(GF16, ALPHA, 3)
    with pytest.raises(BudgetExceededError):
        min_rank_distance_bruteforce(code, budget=100)
    est = min_rank_distance_sampled(code, 2000, seed=3)
    assert est.estimate >= 2 and not est.certified


def test_parallel_distance_is_deterministic():
    code = make_gabidulin(GF16, ALPHA, 2)
    a = min_rank_distance_bruteforce(code, threads=1)
    b = min_rank_distance_bruteforce(code, threads=8)
    assert a == b


@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_hermitian_self_orthogonal_for_self_dual_alpha(m):
    f = find_irreducible(2 * m)
    alpha = find_self_dual_basis(f)
    for k in range(1, m + 1):
        assert is_hermitian_self_orthogonal(make_gabidulin(f, alpha, k))


def test_not_self_orthogonal_for_polynomial_basis():
    assert not is_hermitian_self_orthogonal(make_gabidulin(GF16, (1, 2, 4, 8), 2))


def test_hermitian_dual_dimension_and_orthogonality():
    code = make_gabidulin(GF16, ALPHA, 1)
    dual = hermitian_dual(code)
    assert len(dual) == 3
    for c in code.rows():
        for y in dual:
            assert not hermitian_inner_product(c, y)


@pytest.mark.parametrize("n", [3, 5])
def test_trace_dual_gabidulin(n):
    f = find_irreducible(n)
    alpha = find_self_dual_normal_basis(f)
    for r in range(1, n):
        code = make_gabidulin(f, alpha, r)
        dual = trace_dual_gabidulin(alpha, r)
        assert subspace_equal(trace_orthogonal_complement(code), expand_code(dual))
        for a in code.gf2_basis():
            for b in dual.gf2_basis():
                assert trace_inner_product(a, b) == 0


def test_trace_dual_requires_self_dual_orbit():
    f = find_irreducible(3)
    with pytest.raises(ValueError):
        trace_dual_gabidulin(ExtVector(f, (1, 2, 4)), 1)


def test_expand_code_dimension():
    code = make_gabidulin(GF16, ALPHA, 2)
    M = expand_code(code, BasisF2n(GF16, ALPHA))
    assert M.rows == 8 and rank(M) == 8 and M.cols == 16
