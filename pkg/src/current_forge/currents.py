"""Conserved currents, decomposition terms and stress tensors as functions of a field jet.

All four-vectors are returned with an upper index, shape ``(..., 4)``; jets
carry lower-index derivatives. The metric is diag(1, -1, -1, -1). Dirac and
Klein-Gordon results are complex (imaginary parts are diagnostics); the
non-relativistic currents return real ``(rho, j)`` pairs.
"""

from __future__ import annotations

import numpy as np

from .gamma_algebra import METRIC, PAULI, GammaRep, build_standard_rep
from .solution_factory import FieldJet, PhysicalConstants

_REP = build_standard_rep()
_ETA = np.diag(METRIC)
_DEFAULT = PhysicalConstants()

# Levi-Civita symbol for curls.
_EPS = np.zeros((3, 3, 3))
_EPS[0, 1, 2] = _EPS[1, 2, 0] = _EPS[2, 0, 1] = 1.0
_EPS[0, 2, 1] = _EPS[2, 1, 0] = _EPS[1, 0, 2] = -1.0


def _bar(psi: np.ndarray, rep: GammaRep) -> np.ndarray:
    """Row spinor psi^dagger gamma^0 (works for psi or any derivative of psi)."""
    return np.einsum("...a,ab->...b", np.conj(psi), rep.g0)


def _raise(v: np.ndarray) -> np.ndarray:
    return v * _ETA


# ---------------------------------------------------------------------------
# Dirac


def dirac_current(jet: FieldJet, g: complex = 1.0, h=(0.0, 0.0, 0.0, 0.0), rep: GammaRep = _REP) -> np.ndarray:
    """j^mu = g psi-bar gamma^mu psi + h^mu. With g = c and h = 0 this is the probability current."""
    psi = jet.value
    v = np.einsum("...a,mab,...b->...m", _bar(psi, rep), rep.gammas, psi)
    return g * v + np.asarray(h, dtype=complex)


def gordon_decomposition(
    jet: FieldJet,
    constants: PhysicalConstants = _DEFAULT,
    A=(0.0, 0.0, 0.0, 0.0),
    rep: GammaRep = _REP,
) -> tuple[np.ndarray, np.ndarray]:
    """Convective and internal (spin) parts of the Dirac current.

    convective: G_mu = (i hbar/2m)(psi-bar d_mu psi - (d_mu psi-bar) psi) - (e/m) psi-bar psi A_mu
    internal:   (i hbar/2m) d_nu (psi-bar gamma^{mu nu} psi)

    Their sum equals c psi-bar gamma^mu psi only for solutions of the Dirac
    equation. ``A`` is the constant contravariant potential.
    """
    k = constants
    psi, d1 = jet.value, jet.d1
    pbar = _bar(psi, rep)
    dbar = _bar(d1, rep)
    pref = 1j * k.hbar / (2 * k.m)
    A_lower = METRIC @ np.asarray(A, dtype=float)
    beta = np.einsum("...a,...a->...", pbar, psi)
    conv = pref * (
        np.einsum("...a,...ma->...m", pbar, d1) - np.einsum("...ma,...a->...m", dbar, psi)
    ) - (k.e / k.m) * beta[..., None] * A_lower
    internal = bivector_current(jet, pref, rep)
    return _raise(conv), internal


def bivector_current(jet: FieldJet, k: complex = 1.0, rep: GammaRep = _REP) -> np.ndarray:
    """a^mu = k d_nu (psi-bar gamma^{mu nu} psi); divergence-free for any field."""
    psi, d1 = jet.value, jet.d1
    sig = rep.sigmas
    t = np.einsum("...na,mnab,...b->...m", _bar(d1, rep), sig, psi)
    t = t + np.einsum("...a,mnab,...nb->...m", _bar(psi, rep), sig, d1)
    return k * t


def g0_reduction(jet: FieldJet, constants: PhysicalConstants = _DEFAULT, rep: GammaRep = _REP):
    """(G^0, c psi^dag psi - (i hbar/2m) d_i(psi^dag g^i psi)) for a free field.

    The two agree on solutions, so G^0 differs from c psi^dag psi by a
    spatial divergence that integrates to zero over the box.
    """
    k = constants
    psi, d1 = jet.value, jet.d1
    g = rep.gammas
    G0 = gordon_decomposition(jet, k, rep=rep)[0][..., 0]
    dens = np.einsum("...a,...a->...", np.conj(psi), psi)
    div = np.einsum("...ia,iab,...b->...", np.conj(d1[..., 1:, :]), g[1:], psi)
    div = div + np.einsum("...a,iab,...ib->...", np.conj(psi), g[1:], d1[..., 1:, :])
    return G0, k.c * dens - 1j * k.hbar / (2 * k.m) * div


def dirac_second_order(jet: FieldJet, constants: PhysicalConstants = _DEFAULT, rep: GammaRep = _REP) -> np.ndarray:
    """Second-order current conserved for free Dirac fields.

    (hbar^2/2m^2c) [ -psi-bar g^nu d_nu d^mu psi - (d_nu d^mu psi-bar) g^nu psi
                     + d_nu (psi-bar g^mu d^nu psi + (d^nu psi-bar) g^mu psi) ]
    """
    k = constants
    psi, d1, d2 = jet.value, jet.d1, jet.d2
    g = rep.gammas
    pbar, dbar, ddbar = _bar(psi, rep), _bar(d1, rep), _bar(d2, rep)
    d1_up = d1 * _ETA[:, None]
    d2_mixed = d2 * _ETA[None, :, None]  # [nu, mu] -> d_nu d^mu
    box = np.einsum("n,...nna->...a", _ETA, d2)
    dbar_up = dbar * _ETA[:, None]
    boxbar = np.einsum("n,...nna->...a", _ETA, ddbar)

    t1 = -np.einsum("...a,nab,...nmb->...m", pbar, g, d2_mixed)
    t2 = -np.einsum("...nma,nab,...b->...m", ddbar * _ETA[None, :, None], g, psi)
    # d_nu(psi-bar g^mu d^nu psi) = (d_nu psi-bar) g^mu d^nu psi + psi-bar g^mu box psi
    t3 = np.einsum("...na,mab,...nb->...m", dbar, g, d1_up) + np.einsum("...a,mab,...b->...m", pbar, g, box)
    # d_nu((d^nu psi-bar) g^mu psi) = (box psi-bar) g^mu psi + (d^nu psi-bar) g^mu d_nu psi
    t4 = np.einsum("...a,mab,...b->...m", boxbar, g, psi) + np.einsum("...na,mab,...nb->...m", dbar_up, g, d1)
    return k.hbar**2 / (2 * k.m**2 * k.c) * (t1 + t2 + t3 + t4)


def dirac_stress(jet: FieldJet, rep: GammaRep = _REP) -> np.ndarray:
    """T^{mu nu} = psi-bar g^mu d^nu psi - (d^mu psi-bar) g^nu psi, shape (..., 4, 4).

    Unnormalized: the conventional canonical tensor carries an extra i hbar c / 2.
    """
    psi, d1 = jet.value, jet.d1
    g = rep.gammas
    d1_up = d1 * _ETA[:, None]
    t = np.einsum("...a,mab,...nb->...mn", _bar(psi, rep), g, d1_up)
    t -= np.einsum("...ma,nab,...b->...mn", _bar(d1_up, rep), g, psi)
    return t


def t00_rewrite(jet: FieldJet, constants: PhysicalConstants = _DEFAULT, rep: GammaRep = _REP):
    """(T^00, (2mc/i hbar) psi-bar psi + (d_i psi-bar) g^i psi - psi-bar g^i d_i psi).

    The two agree for free Dirac solutions.
    """
    k = constants
    psi, d1 = jet.value, jet.d1
    g = rep.gammas
    lhs = dirac_stress(jet, rep)[..., 0, 0]
    pbar = _bar(psi, rep)
    beta = np.einsum("...a,...a->...", pbar, psi)
    rhs = (2 * k.m * k.c / (1j * k.hbar)) * beta
    rhs = rhs + np.einsum("...ia,iab,...b->...", _bar(d1[..., 1:, :], rep), g[1:], psi)
    rhs = rhs - np.einsum("...a,iab,...ib->...", pbar, g[1:], d1[..., 1:, :])
    return lhs, rhs


# ---------------------------------------------------------------------------
# Klein-Gordon


def kg_current(jet: FieldJet, g: complex | None = None, h=(0.0, 0.0, 0.0, 0.0),
               constants: PhysicalConstants = _DEFAULT) -> np.ndarray:
    """j^mu = g (psi* d^mu psi - psi d^mu psi*) + h^mu; g defaults to i hbar / 2m."""
    if g is None:
        g = 1j * constants.hbar / (2 * constants.m)
    psi, d1, _ = jet.scalar
    low = np.conj(psi)[..., None] * d1 - psi[..., None] * np.conj(d1)
    return g * _raise(low) + np.asarray(h, dtype=complex)


def kg_bivector_current(jet: FieldJet, k: complex = 1.0) -> np.ndarray:
    """a^mu = k d_nu (d^mu psi d^nu psi* - d^nu psi d^mu psi*); divergence-free for any field."""
    psi, d1, d2 = jet.scalar
    d1u = _raise(d1)
    cd1u = np.conj(d1u)
    d2mu = d2 * _ETA  # [nu, mu] -> d_nu d^mu
    box = np.einsum("n,...nn->...", _ETA, d2)
    t = (
        np.einsum("...nm,...n->...m", d2mu, cd1u)
        + d1u * np.conj(box)[..., None]
        - box[..., None] * cd1u
        - np.einsum("...n,...nm->...m", d1u, np.conj(d2mu))
    )
    return k * t


def kg_second_order(jet: FieldJet, constants: PhysicalConstants = _DEFAULT) -> np.ndarray:
    """(i hbar^3 / 2 m^3 c^2)(d_nu d^mu psi d^nu psi* - d^nu psi d_nu d^mu psi*)."""
    k = constants
    psi, d1, d2 = jet.scalar
    d2mu = d2 * _ETA
    d1u = _raise(d1)
    t = np.einsum("...nm,...n->...m", d2mu, np.conj(d1u)) - np.einsum("...n,...nm->...m", d1u, np.conj(d2mu))
    return 1j * k.hbar**3 / (2 * k.m**3 * k.c**2) * t


def kg_stress_tensor(jet: FieldJet, constants: PhysicalConstants = _DEFAULT) -> np.ndarray:
    """Symmetric Klein-Gordon tensor
    T^{mu nu} = d^mu psi* d^nu psi + d^nu psi* d^mu psi - eta^{mu nu}(d^a psi* d_a psi - (mc/hbar)^2 psi* psi).
    """
    psi, d1, _ = jet.scalar
    d1u = _raise(d1)
    outer = np.einsum("...m,...n->...mn", np.conj(d1u), d1u)
    lag = np.einsum("...a,...a->...", np.conj(d1u), d1) - constants.compton_wavenumber**2 * np.abs(psi) ** 2
    return outer + np.swapaxes(outer, -1, -2) - METRIC * lag[..., None, None]


def kg_stress_current(jet: FieldJet, k=(1.0, 0.0, 0.0, 0.0), constants: PhysicalConstants = _DEFAULT) -> np.ndarray:
    """l^mu = k_nu T^{mu nu} for a constant contravariant ``k``."""
    k_lower = METRIC @ np.asarray(k, dtype=float)
    return np.einsum("...mn,n->...m", kg_stress_tensor(jet, constants), k_lower)


# ---------------------------------------------------------------------------
# Non-relativistic


def pauli_current(jet: FieldJet, constants: PhysicalConstants = _DEFAULT, A=(0.0, 0.0, 0.0)):
    """(rho, j) for a Pauli two-spinor.

    j = (hbar/2mi)(phi^dag grad phi - (grad phi^dag) phi) - (e rho/m) A + (1/m) curl(rho s)
    with rho s = (hbar/2) phi^dag sigma phi, so no division by rho occurs.
    """
    k = constants
    phi, grad = jet.value, jet.d1[..., 1:, :]
    rho = np.einsum("...a,...a->...", np.conj(phi), phi).real
    conv = np.einsum("...a,...ia->...i", np.conj(phi), grad)
    conv = (k.hbar / k.m) * conv.imag  # (hbar/2mi)(z - z*) = (hbar/m) Im z
    # d_i (rho s)_a = hbar Re(phi^dag sigma_a d_i phi)
    d_rho_s = k.hbar * np.einsum("...b,abc,...ic->...ia", np.conj(phi), PAULI, grad).real
    curl = np.einsum("ijk,...jk->...i", _EPS, d_rho_s)
    A = np.asarray(A, dtype=float)
    j = conv - (k.e / k.m) * rho[..., None] * A + curl / k.m
    return rho, j


def schrodinger_current(jet: FieldJet, constants: PhysicalConstants = _DEFAULT, spin=None):
    """(rho, j) with the optional spin term (1/m) grad(rho) x s for a constant spin vector s."""
    k = constants
    psi, d1, _ = jet.scalar
    grad = d1[..., 1:]
    rho = (np.conj(psi) * psi).real
    j = (k.hbar / k.m) * (np.conj(psi)[..., None] * grad).imag
    if spin is not None:
        grad_rho = 2 * (np.conj(psi)[..., None] * grad).real
        j = j + np.cross(grad_rho, np.asarray(spin, dtype=float)) / k.m
    return rho, j


def as_four_vector(rho_j) -> np.ndarray:
    """Stack a (rho, j) pair into (..., 4) so it can be fed to divergence checks."""
    rho, j = rho_j
    return np.concatenate([np.asarray(rho)[..., None], j], axis=-1)
