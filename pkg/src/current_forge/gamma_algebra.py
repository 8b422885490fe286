"""Dirac gamma matrices in the standard (Dirac) representation.

The representation is fixed: gamma^0 = diag(I, -I), gamma^i carries the Pauli
matrices on the off-diagonal blocks and gamma^5 = i g0 g1 g2 g3 is the
block-swap matrix. Metric signature is (+, -, -, -).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

MATRIX_ATOL = 1e-13

METRIC = np.diag([1.0, -1.0, -1.0, -1.0])

PAULI = np.array(
    [
        [[0, 1], [1, 0]],
        [[0, -1j], [1j, 0]],
        [[1, 0], [0, -1]],
    ],
    dtype=complex,
)

# Fixed ordering of the 16-element basis; coefficient vectors index into this.
BASIS_LABELS = (
    "I",
    "g0", "g1", "g2", "g3",
    "g01", "g02", "g03", "g12", "g13", "g23",
    "g0g5", "g1g5", "g2g5", "g3g5",
    "g5",
)


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=complex)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class GammaRep:
    g0: np.ndarray
    g1: np.ndarray
    g2: np.ndarray
    g3: np.ndarray
    g5: np.ndarray
    metric: np.ndarray = field(default_factory=lambda: METRIC.copy())

    @cached_property
    def gammas(self) -> np.ndarray:
        """Stack of gamma^mu with shape (4, 4, 4), upper index first."""
        return np.stack([self.g0, self.g1, self.g2, self.g3])

    def sigma(self, mu: int, nu: int) -> np.ndarray:
        """gamma^{mu nu} = (gamma^mu gamma^nu - gamma^nu gamma^mu) / 2."""
        g = self.gammas
        return 0.5 * (g[mu] @ g[nu] - g[nu] @ g[mu])

    @cached_property
    def sigmas(self) -> np.ndarray:
        """All gamma^{mu nu} with shape (4, 4, 4, 4); antisymmetric in the first pair."""
        g = self.gammas
        return 0.5 * (np.einsum("mab,nbc->mnac", g, g) - np.einsum("nab,mbc->mnac", g, g))


def build_standard_rep() -> GammaRep:
    eye2 = np.eye(2, dtype=complex)
    zero2 = np.zeros((2, 2), dtype=complex)
    g0 = np.block([[eye2, zero2], [zero2, -eye2]])
    gi = [np.block([[zero2, s], [-s, zero2]]) for s in PAULI]
    g5 = np.block([[zero2, eye2], [eye2, zero2]])
    return GammaRep(*(_frozen(m) for m in (g0, *gi, g5)))


def anticommutator_residuals(rep: GammaRep) -> np.ndarray:
    """Max entrywise residual of {g^mu, g^nu} - 2 eta^{mu nu} I for each pair mu <= nu (10 values)."""
    g = rep.gammas
    eye = np.eye(4)
    out = []
    for mu in range(4):
        for nu in range(mu, 4):
            r = g[mu] @ g[nu] + g[nu] @ g[mu] - 2.0 * rep.metric[mu, nu] * eye
            out.append(np.max(np.abs(r)))
    return np.array(out)


def gamma5_residual(rep: GammaRep) -> float:
    return float(np.max(np.abs(rep.g5 - 1j * rep.g0 @ rep.g1 @ rep.g2 @ rep.g3)))


def sixteen_basis(rep: GammaRep) -> list[np.ndarray]:
    """The 16 matrices {I, g^mu, g^{mu nu} (mu<nu), g^mu g^5, g^5} in BASIS_LABELS order."""
    g = rep.gammas
    basis = [np.eye(4, dtype=complex)]
    basis += [g[mu] for mu in range(4)]
    basis += [rep.sigma(mu, nu) for mu in range(4) for nu in range(mu + 1, 4)]
    basis += [g[mu] @ rep.g5 for mu in range(4)]
    basis.append(np.array(rep.g5))
    return basis


def hermitian_basis(rep: GammaRep) -> np.ndarray:
    """sixteen_basis with anti-Hermitian members multiplied by i; shape (16, 4, 4).

    Each element squares to the identity and Tr(H_Q H_R) = 4 delta_QR, so these
    span the real vector space of Hermitian 4x4 matrices.
    """
    out = []
    for m in sixteen_basis(rep):
        if np.allclose(m.conj().T, m, atol=MATRIX_ATOL, rtol=0):
            out.append(m)
        else:
            out.append(1j * m)
    return np.array(out)


def hermitian_coordinates(rep: GammaRep, matrix: np.ndarray) -> np.ndarray:
    """Real coefficients c_Q with matrix = sum_Q c_Q H_Q (matrix must be Hermitian)."""
    h = hermitian_basis(rep)
    coeffs = np.einsum("qab,ba->q", h, matrix) / 4.0
    if np.max(np.abs(coeffs.imag)) > MATRIX_ATOL:
        raise ValueError("matrix is not Hermitian")
    return coeffs.real


def commutes(a: np.ndarray, b: np.ndarray, atol: float = MATRIX_ATOL) -> bool:
    return bool(np.max(np.abs(a @ b - b @ a)) <= atol)


def commutant_in_basis(rep: GammaRep, generators, candidates=None) -> list[int]:
    """Indices of basis elements commuting with every generator.

    ``candidates`` restricts the search to a subset of indices, which lets the
    result be re-filtered against the same generators.
    """
    basis = sixteen_basis(rep)
    idx = range(len(basis)) if candidates is None else candidates
    return [q for q in idx if all(commutes(basis[q], np.asarray(g)) for g in generators)]
