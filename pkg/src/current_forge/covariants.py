"""Bilinear covariants of a Dirac spinor and the quartic identities among them."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .gamma_algebra import METRIC, GammaRep, build_standard_rep

_REP = build_standard_rep()


@dataclass(frozen=True)
class BilinearSet:
    alpha: float
    beta: float
    chi: float
    delta: float
    V: np.ndarray
    S: np.ndarray
    B: np.ndarray


def _real(z, scale, name: str):
    z = np.asarray(z)
    if np.any(np.abs(z.imag) > 1e-12 * np.maximum(1.0, scale)):
        raise ArithmeticError(f"{name} has imaginary part {np.max(np.abs(z.imag)):.3e}")
    return z.real


def compute_bilinears(psi, rep: GammaRep = _REP) -> BilinearSet:
    """beta, V, S, B, chi in psi-bar form plus the rotational scalars alpha, delta.

    ``psi`` may be a single spinor (4,) or a batch (..., 4); fields then
    carry the batch shape in front (V: (..., 4), B: (..., 4, 4)).
    """
    psi = np.asarray(psi, dtype=complex)
    single = psi.ndim == 1
    g = rep.gammas
    g0, g5 = rep.g0, rep.g5
    pbar = np.conj(psi) @ g0
    scale = np.einsum("...a,...a->...", np.conj(psi), psi).real

    def bar(m):
        return np.einsum("...a,ab,...b->...", pbar, m, psi)

    beta = _real(bar(np.eye(4)), scale, "beta")
    V = _real(np.einsum("...a,mab,...b->...m", pbar, g, psi), scale[..., None], "V")
    S = _real(np.einsum("...a,mab,...b->...m", pbar, g @ g5, psi), scale[..., None], "S")
    chi = _real(1j * bar(g5), scale, "chi")
    Bt = _real(1j * np.einsum("...a,mnab,...b->...mn", pbar, rep.sigmas, psi), scale[..., None, None], "B")
    alpha = scale
    delta = _real(np.einsum("...a,ab,...b->...", np.conj(psi), g5, psi), scale, "delta")
    if single:
        return BilinearSet(alpha=float(alpha), beta=float(beta), chi=float(chi), delta=float(delta), V=V, S=S, B=Bt)
    return BilinearSet(alpha=alpha, beta=beta, chi=chi, delta=delta, V=V, S=S, B=Bt)


def fierz_residuals(psi, rep: GammaRep = _REP) -> np.ndarray:
    """Residuals of the four scalar identity groups among V, S, alpha, beta, chi, delta.

    Groups: V.V = -S.S = beta^2 + chi^2; V^0 S^0 = -V^i S_i = alpha delta;
    |V_vec|^2 = alpha^2 - beta^2 - chi^2; |S_vec|^2 = delta^2 + beta^2 + chi^2.
    Each group reports its worst member, normalized by max(1, alpha^2).
    Shape (4,) for one spinor, (..., 4) for a batch.
    """
    b = compute_bilinears(psi, rep)
    V, S = np.asarray(b.V), np.asarray(b.S)
    vv = np.einsum("...m,mn,...n->...", V, METRIC, V)
    ss = np.einsum("...m,mn,...n->...", S, METRIC, S)
    bc = b.beta**2 + b.chi**2
    ad = b.alpha * b.delta
    vs_spatial = np.einsum("...i,...i->...", V[..., 1:], S[..., 1:])  # = -V^i S_i
    r = np.stack([
        np.maximum(abs(vv - bc), abs(ss + bc)),
        np.maximum(abs(V[..., 0] * S[..., 0] - ad), abs(-vs_spatial + ad)),
        abs(np.einsum("...i,...i->...", V[..., 1:], V[..., 1:]) - b.alpha**2 + bc),
        abs(np.einsum("...i,...i->...", S[..., 1:], S[..., 1:]) - b.delta**2 - bc),
    ], axis=-1)
    return r / np.maximum(1.0, b.alpha**2)[..., None]


def scalar_jacobian(psi, rep: GammaRep = _REP) -> np.ndarray:
    """4x8 Jacobian of (alpha, beta, chi, delta) w.r.t. (Re psi, Im psi)."""
    psi = np.asarray(psi, dtype=complex)
    forms = [np.eye(4), rep.g0, 1j * rep.g0 @ rep.g5, rep.g5]
    rows = []
    for h in forms:
        hp = h @ psi
        # d(psi^dag H psi)/d Re psi_a = 2 Re (H psi)_a, /d Im psi_a = 2 Im (H psi)_a
        rows.append(np.concatenate([2 * hp.real, 2 * hp.imag]))
    return np.array(rows)


def scalar_rank(psi, rep: GammaRep = _REP, rel_tol: float = 1e-8) -> int:
    s = np.linalg.svd(scalar_jacobian(psi, rep), compute_uv=False)
    return int(np.sum(s > rel_tol * s[0]))
