"""The m = 2, k = 1 construction over GF(16), replayed with golden checks.

Reference values (T, a valid D, four stabilizer strings) are fixed
constants; every step compares the computed object against them or against
its defining invariant and raises :class:`VerificationError` on mismatch.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .f2linalg import MatF2, rank, subspace_contains, symplectic_gram, vstack
from .gabidulin import is_hermitian_self_orthogonal, make_gabidulin
from .gf2field import BasisF2n, FieldSpec, find_normal_basis, is_irreducible, is_self_dual_basis, to_hex, trace_gram
from .qconstruct import (
    BinarySymplecticCode,
    QuantumCodeParams,
    VerificationError,
    build_mu_context,
    build_proposed_code,
    certify_distance,
    symplectic_self_orthogonal,
)
from .stacked_sim import PauliString, commutes, stabilizer_generators

MODULUS = 0x13
ALPHA_EXPONENTS = (3, 7, 12, 13)
THETA_EXPONENT = 3

REFERENCE_T = ("0100", "1001", "0001", "0110")
REFERENCE_D = ("1000", "0010", "0100", "1001")
REFERENCE_STABILIZERS = (
    "XI | YX | IX | IY",
    "ZX | XY | IY | YY",
    "YZ | XZ | YY | ZY",
    "ZI | XX | ZY | IZ",
)


@dataclass
class Step:
    title: str
    lines: list[str] = field(default_factory=list)
    checks: list[tuple[str, bool]] = field(default_factory=list)

    def check(self, name: str, ok: bool) -> None:
        self.checks.append((name, bool(ok)))
        if not ok:
            raise VerificationError(f"{self.title}: {name} failed")

    def to_json(self) -> dict:
        return {"title": self.title, "lines": self.lines, "checks": {k: v for k, v in self.checks}}


@dataclass
class ExampleResult:
    steps: list[Step]
    code: BinarySymplecticCode
    params: QuantumCodeParams

    def render(self) -> str:
        out = []
        for i, s in enumerate(self.steps, 1):
            out.append(f"[{i}] {s.title}")
            out.extend(f"    {ln}" for ln in s.lines)
            out.extend(f"    check {name}: {'ok' if ok else 'FAIL'}" for name, ok in s.checks)
        out.append(f"parameters {self.params.label()}")
        return "\n".join(out)

    def to_json(self) -> dict:
        return {
            "steps": [s.to_json() for s in self.steps],
            "params": self.params.to_json(),
            "certificate": self.params.certificate.to_json() if self.params.certificate else None,
        }


def _omega(field: FieldSpec, e: int) -> int:
    return field.pow(0b10, e)


def _matrix_lines(M: MatF2) -> list[str]:
    return [" ".join(row) for row in M.to_strings()]


def run_example(threads: int | None = None) -> ExampleResult:
    steps: list[Step] = []
    fs = FieldSpec(4, MODULUS)

    s = Step("field GF(2^4) = GF(2)[x]/(x^4 + x + 1), w = x")
    s.lines.append(f"modulus 0x{MODULUS:x}")
    s.check("modulus irreducible", is_irreducible(MODULUS))
    steps.append(s)

    s = Step("self-dual basis alpha")
    alpha = BasisF2n(fs, tuple(_omega(fs, e) for e in ALPHA_EXPONENTS), kind="self_dual")
    s.lines.append("alpha = (" + ", ".join(f"w^{e}" for e in ALPHA_EXPONENTS) + ")")
    s.lines.append("hex   = (" + ", ".join(to_hex(a) for a in alpha.elements) + ")")
    s.lines.append("trace Gram = " + " ".join("".join(map(str, r)) for r in trace_gram(fs, alpha.elements)))
    s.check("Tr(alpha_i alpha_j) = delta_ij", is_self_dual_basis(alpha))
    steps.append(s)

    s = Step("Gab(alpha, 1) is Hermitian self-orthogonal")
    gab = make_gabidulin(fs, alpha, 1)
    verdict = is_hermitian_self_orthogonal(gab)
    s.lines.append(f"verdict: {verdict}")
    s.check("C subset of C^perp_H", verdict)
    steps.append(s)

    s = Step("normal basis from theta = w^3")
    theta = _omega(fs, THETA_EXPONENT)
    nb = find_normal_basis(fs, theta)
    s.lines.append("(theta, theta^2, theta^4, theta^8) = (" + ", ".join(to_hex(b) for b in nb.elements) + ")")
    s.check("orbit has full rank", nb.kind == "normal")
    steps.append(s)

    ctx = build_mu_context(fs, theta)
    s = Step("form matrix T")
    s.lines.extend(_matrix_lines(ctx.T))
    s.check("T matches reference", ctx.T == MatF2.from_strings(REFERENCE_T))
    steps.append(s)

    s = Step("congruence D with D T D^T = S")
    S = symplectic_gram(2)
    s.lines.extend(_matrix_lines(ctx.D))
    s.check("computed D T D^T = S", ctx.D @ ctx.T @ ctx.D.T == S)
    ref_d = MatF2.from_strings(REFERENCE_D)
    s.check("reference D T D^T = S", ref_d @ ctx.T @ ref_d.T == S)
    steps.append(s)

    code, _ = build_proposed_code(2, 1, fs, alpha, theta)
    s = Step("Phi(C) generator matrix (16 columns: a-block | b-block)")
    s.lines.extend(" ".join(row[i : i + 2] for i in range(0, 16, 2)) for row in code.generators.to_strings())
    s.check("symplectic self-orthogonal", symplectic_self_orthogonal(code.generators))
    s.check("dim Phi(C) = 4", code.dim == 4)
    steps.append(s)

    s = Step("stabilizer generators")
    gens = stabilizer_generators(code)
    s.lines.extend(str(g) for g in gens)
    ref = [PauliString.parse(t) for t in REFERENCE_STABILIZERS]
    ref_mat = MatF2.from_array([p.symplectic_vector() for p in ref], cols=16)
    s.lines.append("reference strings:")
    s.lines.extend(f"  P{i + 1} = {t}" for i, t in enumerate(REFERENCE_STABILIZERS))
    s.check("reference strings lie in Phi(C)", subspace_contains(code.generators, ref_mat))
    s.check("reference strings span Phi(C)", rank(ref_mat) == 4 == rank(vstack([ref_mat, code.generators])))
    s.check("all pairs commute", all(commutes(a, b) for a in ref + gens for b in ref + gens))
    steps.append(s)

    params = certify_distance(code, threads=threads)
    s = Step("minimum rank distance over C^perp_S minus C")
    cert = params.certificate
    assert cert is not None
    s.lines.append(f"enumerated {cert.enumerated} dual vectors")
    s.lines.append(f"witness {''.join(map(str, cert.witness))} rank {cert.witness_rank}")
    s.check("D_R = 2", params.D_R == 2)
    s.check("N = 8, K = 4", (params.N, params.K) == (8, 4))
    steps.append(s)
    return ExampleResult(steps, code, params)
