"""Acceptance criteria, one PASS/FAIL line each (see the terminal summary)."""

import json
import time
from fractions import Fraction as F

import pytest

from qrank.f2linalg import MatF2, rank, subspace_contains, subspace_equal, symplectic_gram, vstack
from qrank.gabidulin import (
    ExtVector,
    expand_code,
    hermitian_dual,
    is_hermitian_self_orthogonal,
    make_gabidulin,
    min_rank_distance_bruteforce,
    rank_weight,
    trace_dual_gabidulin,
    trace_orthogonal_complement,
)
from qrank.gf2field import BasisF2n, FieldSpec, find_irreducible, find_self_dual_basis, find_self_dual_normal_basis
from qrank.qconstruct import (
    build_css_code,
    build_mu_context,
    build_proposed_code,
    certify_distance,
    compare_table,
    m_map,
    mu_expand_vector,
    symplectic_self_orthogonal,
)
from qrank.stacked_sim import PauliString, commutes, simulate_trials
from qrank.worked_example import run_example

GF16 = FieldSpec(4, 0x13)
W = lambda e: GF16.pow(0b10, e)
ALPHA = tuple(W(e) for e in (3, 7, 12, 13))
THETA = W(3)
REF_T = ["0100", "1001", "0001", "0110"]
REF_D = ["1000", "0010", "0100", "1001"]
REF_P = ["XI | YX | IX | IY", "ZX | XY | IY | YY", "YZ | XZ | YY | ZY", "ZI | XX | ZY | IZ"]
TABLE_CASES = [(2, 1), (3, 1), (3, 2), (5, 2)]


def test_c01_golden_t_and_d(criterion):
    t0 = time.perf_counter()
    ctx = build_mu_context(GF16, THETA)
    D = MatF2.from_strings(REF_D)
    t_ok = ctx.T.to_strings() == REF_T
    d_ok = D @ ctx.T @ D.T == symplectic_gram(2)
    own_ok = ctx.D @ ctx.T @ ctx.D.T == symplectic_gram(2)
    dt = time.perf_counter() - t0
    criterion("1", t_ok and d_ok and own_ok and dt < 1.0, f"T matches={t_ok}, reference D congruent={d_ok}, {dt:.3f}s < 1s")


def test_c02_certify_8_4_2(criterion):
    t0 = time.perf_counter()
    code, _ = build_proposed_code(2, 1, GF16, ALPHA, THETA)
    p = certify_distance(code)
    dt = time.perf_counter() - t0
    cert = p.certificate
    ok = (p.N, p.K, p.D_R, p.certified) == (8, 4, 2, True)
    ok &= cert.enumerated == 2**12 and rank(m_map(cert.witness, code.m, code.n)) == 2
    criterion("2", ok and dt < 1.0, f"{p.label()} certified, witness rank {cert.witness_rank}, {cert.enumerated} dual vectors, {dt:.3f}s < 1s")


def test_c03_stabilizer_membership(criterion):
    code, _ = build_proposed_code(2, 1, GF16, ALPHA, THETA)
    ps = [PauliString.parse(s) for s in REF_P]
    mus = MatF2.from_array([p.symplectic_vector() for p in ps], cols=16)
    member = subspace_contains(code.generators, mus)
    spans = rank(mus) == 4 and rank(vstack([mus, code.generators])) == 4
    pairs = all(commutes(ps[i], ps[j]) for i in range(4) for j in range(i + 1, 4))
    criterion("3", member and spans and pairs, f"P1..P4 in Phi(C)={member}, span rank 4={spans}, 6 pairs commute={pairs}")


def test_c04_hermitian_self_orthogonality(criterion):
    failures, checked = 0, 0
    for m in range(1, 5):
        f = find_irreducible(2 * m)
        alpha = find_self_dual_basis(f)
        for k in range(1, m + 1):
            checked += 1
            failures += not is_hermitian_self_orthogonal(make_gabidulin(f, alpha, k))
    criterion("4", failures == 0, f"{checked} (m, k) pairs with 2 <= 2m <= 8, {failures} failures")


def test_c05_trace_dual(criterion):
    failures, checked = 0, 0
    for n in (3, 5):
        f = find_irreducible(n)
        alpha = find_self_dual_normal_basis(f)
        for r in range(1, n):
            checked += 1
            lhs = trace_orthogonal_complement(make_gabidulin(f, alpha, r))
            rhs = expand_code(trace_dual_gabidulin(alpha, r))
            failures += not subspace_equal(lhs, rhs)
    criterion("5", failures == 0, f"{checked} (n, r) cases, {failures} subspace mismatches")


def test_c06_css(criterion):
    t0 = time.perf_counter()
    code, _ = build_css_code(3, 1, 1)
    p = certify_distance(code)
    dt = time.perf_counter() - t0
    n, r = 3, 1
    ok = symplectic_self_orthogonal(code.generators) and (p.N, p.K, p.D_R) == (n * n, n * (n - 2 * r), r + 1)
    criterion("6", ok and p.certified and dt < 5.0, f"{p.label()} certified={p.certified}, {dt:.3f}s < 5s")


def test_c07_mrd(criterion):
    deviations, checked = [], 0
    for n in range(1, 21):
        f = find_irreducible(n)
        alpha = BasisF2n.polynomial(f)
        for k in range(1, n + 1):
            if n * k > 20:
                break
            checked += 1
            d = min_rank_distance_bruteforce(make_gabidulin(f, alpha, k), budget=2**20).d
            if d != n - k + 1:
                deviations.append((n, k, d))
    criterion("7", not deviations, f"{checked} (n, k) pairs with (2^n)^k <= 2^20, deviations {deviations}")


def test_c08_rank_equivalence(criterion):
    ctx = build_mu_context(GF16, THETA)
    dual = hermitian_dual(make_gabidulin(GF16, ALPHA, 1))
    basis = [y.scale(1 << j) for y in dual for j in range(4)]
    mismatches, count = 0, 0
    for g in range(1 << len(basis)):
        c = ExtVector.zeros(GF16, 4)
        for j, b in enumerate(basis):
            if g >> j & 1:
                c = c + b
        count += 1
        mismatches += rank(m_map(mu_expand_vector(c, ctx), 4, 2)) != rank_weight(c)
    criterion("8", mismatches == 0, f"all {count} vectors of C^perp_H (dim {len(dual)} over GF(16)), {mismatches} mismatches")


def test_c09_monte_carlo(criterion):
    t0 = time.perf_counter()
    rep = simulate_trials(8, 8, 20, (1, 5), 10_000, seed=2024)
    dt = time.perf_counter() - t0
    ok = rep.violations == 0 and rep.rank_changes == 0 and rep.subadditivity_violations == 0
    criterion(
        "9",
        ok and len(rep.trials) == 10_000 and dt < 60,
        f"{len(rep.trials)} circuits, bound violations {rep.violations}, rank changes {rep.rank_changes}, "
        f"max rank(Q)/4t {rep.max_ratio:.3f}, {dt:.2f}s < 60s",
    )


def _table1(n, k):
    """Closed forms straight from the table, independent of compare_table."""
    lo, hi = 2 * n - 1, 2 * n + 1
    return [
        (lo**2, lo * (lo - 2 * k), 1 - F(2 * k, lo), F(k + 1, lo**2)),
        (hi**2, hi * (hi - 2 * k), 1 - F(2 * k, hi), F(k + 1, hi**2)),
        (2 * n * n, 2 * n * (n - k), 1 - F(k, n), F(k + 1, 2 * n * n)),
    ]


def test_c10_table(criterion):
    bad = []
    for n, k in TABLE_CASES:
        got = [(c.N, c.K, c.R, c.delta) for c in compare_table(n, k).columns]
        if got != _table1(n, k) or any(c.D != k + 1 for c in compare_table(n, k).columns):
            bad.append((n, k))
    ratio = compare_table(50, 1)
    r1, r2 = float(ratio.ratio_vs_minus), float(ratio.ratio_vs_plus)
    ok = not bad and 1.9 <= r1 <= 2.1 and 1.9 <= r2 <= 2.1
    criterion("10", ok, f"exact entries for {TABLE_CASES} (mismatches {bad}); delta ratio at n=50,k=1: {r1:.4f}, {r2:.4f}")


def _certificates(threads):
    out = {}
    out["example"] = run_example(threads=threads).to_json()
    code, _ = build_proposed_code(2, 1, GF16, ALPHA, THETA)
    out["8_4_2"] = code.to_json(certify_distance(code, threads=threads))
    css, _ = build_css_code(3, 1, 1)
    out["css"] = css.to_json(certify_distance(css, threads=threads))
    out["mrd"] = [
        min_rank_distance_bruteforce(make_gabidulin(find_irreducible(n), BasisF2n.polynomial(find_irreducible(n)), k), threads=threads).to_json()
        for n in range(1, 11)
        for k in range(1, n + 1)
        if n * k <= 20
    ]
    out["table"] = [compare_table(n, k).to_json() for n, k in TABLE_CASES + [(50, 1)]]
    out["sim"] = list(simulate_trials(8, 8, 20, (1, 5), 10_000, seed=2024, threads=threads).json_lines())
    return json.dumps(out, sort_keys=True).encode()


def test_c11_determinism(criterion, monkeypatch):
    monkeypatch.delenv("QRANK_THREADS", raising=False)
    a = _certificates(1)
    b = _certificates(1)
    c = _certificates(8)
    criterion("11", a == b == c, f"{len(a)} bytes of certificates identical across 2 runs and threads 1 / 8")
