"""Numerical uniqueness certificates for conserved currents.

A candidate current is a real linear combination of the terms of an
:class:`AnsatzFamily`. Conservation on every sampled solution is a linear
condition on the coefficient vector, so the conserved members of the family
form the nullspace of a residual matrix whose columns are the divergences
of the individual terms.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .gamma_algebra import BASIS_LABELS, METRIC, GammaRep, build_standard_rep, hermitian_basis, hermitian_coordinates
from .solution_factory import (
    DIRAC,
    KLEIN_GORDON,
    FieldJet,
    PhysicalConstants,
    WaveField,
    eval_jet,
    random_dirac_field,
    random_kg_field,
)
from .verify import VerificationError, divergence_at, sample_points

_REP = build_standard_rep()
_ETA = np.diag(METRIC)

NULL_REL_THRESHOLD = 1e-8
MIN_GAP = 10.0


@dataclass(frozen=True)
class AnsatzFamily:
    """Ordered candidate-current terms with real coefficients.

    ``evaluate(jet)`` returns every term at once, shape ``(..., count, 4)``
    (upper index). ``constant`` flags the additive-constant terms.
    """

    equation: str
    labels: tuple[str, ...]
    evaluate: Callable[[FieldJet], np.ndarray] = field(repr=False)
    constant: np.ndarray = field(repr=False)

    @property
    def count(self) -> int:
        return len(self.labels)


def dirac_ansatz_family(rep: GammaRep = _REP) -> AnsatzFamily:
    """Per component mu: the 16 Hermitian forms psi^dag H_Q psi plus one constant (68 terms)."""
    H = hermitian_basis(rep)
    labels = []
    for mu in range(4):
        labels += [f"j{mu}:{lab}" for lab in BASIS_LABELS]
        labels.append(f"j{mu}:const")
    constant = np.array([lab.endswith(":const") for lab in labels])

    def evaluate(jet: FieldJet) -> np.ndarray:
        psi = jet.value
        forms = np.einsum("...a,qab,...b->...q", np.conj(psi), H, psi)
        out = np.zeros(psi.shape[:-1] + (68, 4), dtype=complex)
        for mu in range(4):
            out[..., mu * 17: mu * 17 + 16, mu] = forms
            out[..., mu * 17 + 16, mu] = 1.0
        return out

    return AnsatzFamily(DIRAC, tuple(labels), evaluate, constant)


def dirac_reference(rep: GammaRep = _REP, axial: bool = False) -> np.ndarray:
    """Coefficients of psi-bar gamma^mu psi (or psi-bar gamma^mu gamma^5 psi) in the Dirac family."""
    ref = np.zeros(68)
    g = rep.gammas
    for mu in range(4):
        m = rep.g0 @ g[mu] @ (rep.g5 if axial else np.eye(4))
        ref[mu * 17: mu * 17 + 16] = hermitian_coordinates(rep, m)
    return ref


def _monomials(max_degree: int) -> list[tuple[int, int]]:
    return [(a, d - a) for d in range(max_degree + 1) for a in range(d, -1, -1)]


def kg_ansatz_family(max_degree: int = 2, include_derivative_invariants: bool = False) -> AnsatzFamily:
    """j^mu = X d^mu psi + Y d^mu psi* + h^mu with X, Y complex polynomials.

    X and Y run over monomials psi^a psi*^b of total degree <= max_degree,
    optionally multiplied by one of the invariants d psi.d psi,
    d psi*.d psi*, d psi.d psi*. Each complex coefficient is split into real
    and imaginary parts; the constant h^mu contributes 8 real terms.
    """
    if max_degree not in (1, 2):
        raise ValueError(f"unsupported degree {max_degree}; expected 1 or 2")
    monos = _monomials(max_degree)
    invs = ["1", "dpsi.dpsi", "dpsi*.dpsi*", "dpsi.dpsi*"] if include_derivative_invariants else ["1"]
    labels = []
    for target in ("X", "Y"):
        for a, b in monos:
            for inv in invs:
                for part in ("re", "im"):
                    labels.append(f"{target}:psi^{a}psi*^{b}:{inv}:{part}")
    for mu in range(4):
        for part in ("re", "im"):
            labels.append(f"h{mu}:{part}")
    constant = np.array([lab.startswith("h") for lab in labels])
    n_var = len(labels) - 8

    def evaluate(jet: FieldJet) -> np.ndarray:
        psi, d1, _ = jet.scalar
        d1u = d1 * _ETA
        cpsi, cd1u = np.conj(psi), np.conj(d1u)
        inv_vals = [np.ones_like(psi)]
        if include_derivative_invariants:
            inv_vals += [
                np.einsum("...m,...m->...", d1u, d1),
                np.einsum("...m,...m->...", cd1u, np.conj(d1)),
                np.einsum("...m,...m->...", d1u, np.conj(d1)),
            ]
        cols = []
        for tgt in (d1u, cd1u):
            for a, b in monos:
                mono = psi**a * cpsi**b
                for iv in inv_vals:
                    base = (mono * iv)[..., None] * tgt
                    cols += [base, 1j * base]
        out = np.zeros(psi.shape + (n_var + 8, 4), dtype=complex)
        out[..., :n_var, :] = np.stack(cols, axis=-2)
        for mu in range(4):
            out[..., n_var + 2 * mu, mu] = 1.0
            out[..., n_var + 2 * mu + 1, mu] = 1j
        return out

    return AnsatzFamily(KLEIN_GORDON, tuple(labels), evaluate, constant)


def kg_reference(family: AnsatzFamily, imaginary: bool = False) -> np.ndarray:
    """Coefficients of g (psi* d psi - psi d psi*) with g = 1 (or g = i)."""
    part = "im" if imaginary else "re"
    ref = np.zeros(family.count)
    ref[family.labels.index(f"X:psi^0psi*^1:1:{part}")] = 1.0
    ref[family.labels.index(f"Y:psi^1psi*^0:1:{part}")] = -1.0
    return ref


# ---------------------------------------------------------------------------
# Residual system


def _value_rank(values: np.ndarray, rel_tol: float = 1e-10) -> int:
    s = np.linalg.svd(values, compute_uv=False)
    return int(np.sum(s > rel_tol * s[0])) if s.size and s[0] > 0 else 0


def assemble_residual_matrix(
    family: AnsatzFamily,
    fields: Sequence[WaveField],
    points_per_field: int,
    seed: int,
) -> np.ndarray:
    """Real matrix whose rows are Re/Im of the divergence of every term at each sample.

    Fields are rescaled to unit amplitude norm first. A coefficient vector c
    describes a conserved current exactly when ``matrix @ c`` vanishes.
    """
    rows, values = [], []
    for i, f in enumerate(fields):
        norm = f.amplitude_norm()
        if norm > 0:
            f = f.scaled(1.0 / norm)
        x = sample_points(points_per_field, seed + 7919 * i)
        d = divergence_at(family.evaluate, f, x)
        rows += [d.real, d.imag]
        v = family.evaluate(eval_jet(f, x))  # (N, T, 4)
        v = np.moveaxis(v, -1, 1).reshape(-1, family.count)
        values += [v.real, v.imag]
    matrix = np.vstack(rows)
    if matrix.shape[0] < 4 * family.count:
        raise ValueError(f"need at least {4 * family.count} rows, got {matrix.shape[0]}")
    if _value_rank(np.vstack(values)) < family.count:
        raise VerificationError("degenerate sampling")
    return matrix


@dataclass(frozen=True)
class NullspaceReport:
    singular_values: np.ndarray
    threshold: float
    dimension: int
    basis: np.ndarray
    alignment: float
    gap: float
    n_constant: int
    nonconstant_dimension: int

    def to_dict(self) -> dict:
        return {
            "singular_values": [float(s) for s in self.singular_values],
            "threshold": self.threshold,
            "dimension": self.dimension,
            "nonconstant_dimension": self.nonconstant_dimension,
            "n_constant": self.n_constant,
            "alignment": self.alignment,
            "gap": self.gap,
            "basis": [[float(v) for v in row] for row in self.basis],
        }


def nullspace_report(
    matrix: np.ndarray,
    reference: np.ndarray,
    rel_threshold: float = NULL_REL_THRESHOLD,
    min_gap: float = MIN_GAP,
) -> NullspaceReport:
    """SVD nullspace of ``matrix`` and its alignment with ``reference``.

    ``reference`` is one coefficient vector or a stack of them; the reported
    alignment is the smallest |cos| between a reference vector and the
    nullspace restricted to the non-constant terms (all-zero columns).
    """
    matrix = np.asarray(matrix, dtype=float)
    _, s, vt = np.linalg.svd(matrix, full_matrices=False)
    thr = rel_threshold * s[0]
    null = s <= thr
    dim = int(np.sum(null))
    above = s[~null]
    below = s[null]
    smallest_above = float(above.min()) if above.size else np.inf
    largest_below = float(below.max()) if below.size else 0.0
    if smallest_above < min_gap * thr or largest_below > thr / min_gap:
        raise VerificationError("ill-separated nullspace, increase sampling")
    gap = smallest_above / largest_below if largest_below > 0 else np.inf

    basis = vt[s.size - dim:] if dim else np.zeros((0, matrix.shape[1]))
    zero_cols = np.all(matrix == 0.0, axis=0)
    sub = basis[:, ~zero_cols]
    if sub.size:
        u, sv, qt = np.linalg.svd(sub, full_matrices=False)
        q = qt[sv > 1e-8 * max(sv.max(), 1e-300)]
    else:
        q = np.zeros((0, int(np.sum(~zero_cols))))
    refs = np.atleast_2d(np.asarray(reference, dtype=float))[:, ~zero_cols]
    aligns = [np.linalg.norm(q @ r) / np.linalg.norm(r) for r in refs]
    return NullspaceReport(
        singular_values=s,
        threshold=float(thr),
        dimension=dim,
        basis=basis,
        alignment=float(min(aligns)) if aligns else 0.0,
        gap=float(gap),
        n_constant=int(np.sum(zero_cols)),
        nonconstant_dimension=int(q.shape[0]),
    )


def matrix_scale(matrix: np.ndarray) -> float:
    """RMS norm of the non-zero columns: the typical residual of a unit coefficient."""
    norms = np.linalg.norm(matrix, axis=0)
    norms = norms[norms > 0]
    return float(np.sqrt(np.mean(norms**2)))


def residual_ratio(matrix: np.ndarray, coeffs: np.ndarray) -> float:
    """||matrix c|| / ||c|| in units of :func:`matrix_scale`."""
    c = np.asarray(coeffs, dtype=float)
    return float(np.linalg.norm(matrix @ c) / np.linalg.norm(c) / matrix_scale(matrix))


def principal_angles(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Principal angles between the row spaces of ``a`` and ``b`` (orthonormal rows)."""
    s = np.linalg.svd(a @ b.T, compute_uv=False)
    return np.arccos(np.clip(s, -1.0, 1.0))


# ---------------------------------------------------------------------------
# Sampling designs


def uniqueness_fields(
    equation: str,
    n_fields: int,
    seed: int,
    constants: PhysicalConstants = PhysicalConstants(),
    min_modes: int = 4,
    max_modes: int = 8,
) -> list[WaveField]:
    """Generic on-shell fields: 4-8 modes, momenta in [-2, 2]^3, mixed energy signs."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(n_fields):
        n = int(rng.integers(min_modes, max_modes + 1))
        if equation == DIRAC:
            out.append(random_dirac_field(rng, n, constants))
        elif equation == KLEIN_GORDON:
            out.append(random_kg_field(rng, n, constants))
        else:
            raise ValueError(f"no uniqueness design for {equation}")
    return out


def dirac_certificate(n_fields: int = 6, points_per_field: int = 60, seed: int = 0,
                      constants: PhysicalConstants = PhysicalConstants()):
    """(family, matrix, report) for the Dirac bilinear family."""
    fam = dirac_ansatz_family()
    fields = uniqueness_fields(DIRAC, n_fields, seed, constants)
    m = assemble_residual_matrix(fam, fields, points_per_field, seed)
    return fam, m, nullspace_report(m, dirac_reference())


def kg_certificate(include_derivative_invariants: bool = False, n_fields: int = 6,
                   points_per_field: int | None = None, seed: int = 0,
                   constants: PhysicalConstants = PhysicalConstants()):
    fam = kg_ansatz_family(2, include_derivative_invariants)
    if points_per_field is None:
        points_per_field = max(40, -(-4 * fam.count // (2 * n_fields)) * 2)
    fields = uniqueness_fields(KLEIN_GORDON, n_fields, seed, constants)
    m = assemble_residual_matrix(fam, fields, points_per_field, seed)
    refs = np.stack([kg_reference(fam), kg_reference(fam, imaginary=True)])
    return fam, m, nullspace_report(m, refs)


# ---------------------------------------------------------------------------
# Density constraint relations


@dataclass(frozen=True)
class DensityCandidate:
    """A candidate density j0(psi, psi^dag).

    ``grad(psi)`` returns (d j0 / d psi as a row, d j0 / d psi^dag as a
    column), treating psi and psi^dag as independent. Without it,
    Wirtinger derivatives are taken by central differences.
    """

    name: str
    func: Callable[[np.ndarray], float]
    grad: Callable[[np.ndarray], tuple[np.ndarray, np.ndarray]] | None = None


def _fd_wirtinger(func, psi: np.ndarray, step: float = 1e-6):
    dpsi = np.zeros(4, dtype=complex)
    for a in range(4):
        e = np.zeros(4, dtype=complex)
        e[a] = step
        fx = (func(psi + e) - func(psi - e)) / (2 * step)
        fy = (func(psi + 1j * e) - func(psi - 1j * e)) / (2 * step)
        dpsi[a] = 0.5 * (fx - 1j * fy)
    # j0 is real, so d j0 / d psi* is the conjugate of d j0 / d psi
    return dpsi, np.conj(dpsi)


def builtin_candidates(rep: GammaRep = _REP) -> dict[str, DensityCandidate]:
    g0, g5 = rep.g0, rep.g5

    def form(m):
        return lambda psi: float(np.real(np.conj(psi) @ m @ psi))

    def form_grad(m):
        return lambda psi: (np.conj(psi) @ m, m @ psi)

    alpha, beta = form(np.eye(4)), form(g0)

    def beta_alpha_grad(psi):
        a, b = alpha(psi), beta(psi)
        return a * np.conj(psi) @ g0 + b * np.conj(psi), a * g0 @ psi + b * psi

    return {
        "alpha": DensityCandidate("alpha", alpha, form_grad(np.eye(4))),
        "delta": DensityCandidate("delta", form(g5), form_grad(g5)),
        "beta_alpha": DensityCandidate("beta_alpha", lambda psi: beta(psi) * alpha(psi), beta_alpha_grad),
    }


def constraint_residuals(candidate: DensityCandidate, rep: GammaRep = _REP, n_spinors: int = 200,
                         seed: int = 0) -> tuple[float, float]:
    """Largest residuals of the two density relations over random unit spinors.

    r1: (dj0/dpsi) g0 psi - psi^dag g0 (dj0/dpsi^dag)
    r2: (dj0/dpsi) g0 g^mu psi - psi^dag g0 g^mu (dj0/dpsi^dag), maximized over mu
    """
    rng = np.random.default_rng(seed)
    g = rep.gammas
    r1 = r2 = 0.0
    for _ in range(n_spinors):
        psi = rng.normal(size=4) + 1j * rng.normal(size=4)
        psi /= np.linalg.norm(psi)
        if candidate.grad is not None:
            dpsi, dpsidag = candidate.grad(psi)
        else:
            dpsi, dpsidag = _fd_wirtinger(candidate.func, psi)
        psidag = np.conj(psi)
        r1 = max(r1, abs(dpsi @ rep.g0 @ psi - psidag @ rep.g0 @ dpsidag))
        for mu in range(4):
            m = rep.g0 @ g[mu]
            r2 = max(r2, abs(dpsi @ m @ psi - psidag @ m @ dpsidag))
    return float(r1), float(r2)
