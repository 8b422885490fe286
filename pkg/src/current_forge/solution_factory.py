"""Exact plane-wave solutions of the Dirac, Klein-Gordon, Pauli and Schrodinger equations.

Every field is a finite superposition of plane waves, each written as
``amplitude * exp(-i kappa_mu x^mu)`` with a lower-index wave covector
``kappa``. Derivatives are then exact: ``d_mu psi = -i kappa_mu psi``.

Coordinates:

* relativistic fields (Dirac, Klein-Gordon): ``x = (ct, x, y, z)`` and
  ``kappa_mu = p_mu / hbar`` with ``p`` the canonical four-momentum;
* non-relativistic fields (Pauli, Schrodinger): ``x = (t, x, y, z)`` and
  ``kappa = (omega, -k)``, i.e. ``exp(i(k.x - omega t))``.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .gamma_algebra import METRIC, PAULI, GammaRep, build_standard_rep

DIRAC = "dirac"
KLEIN_GORDON = "klein_gordon"
PAULI_EQ = "pauli"
SCHRODINGER = "schrodinger"
EQUATIONS = (DIRAC, KLEIN_GORDON, PAULI_EQ, SCHRODINGER)

RELATIVISTIC = (DIRAC, KLEIN_GORDON)

_REP = build_standard_rep()


@dataclass(frozen=True)
class PhysicalConstants:
    hbar: float = 1.0
    c: float = 1.0
    m: float = 1.0
    e: float = 0.0
    kappa: float = 0.0

    def __post_init__(self):
        for name in ("hbar", "c", "m"):
            v = getattr(self, name)
            if not (np.isfinite(v) and v > 0):
                raise ValueError(f"{name} must be a positive finite number, got {v!r}")
        for name in ("e", "kappa"):
            if not np.isfinite(getattr(self, name)):
                raise ValueError(f"{name} must be finite")

    @property
    def compton_wavenumber(self) -> float:
        """mc/hbar, the mass term of the Klein-Gordon equation."""
        return self.m * self.c / self.hbar


def _vec(a, n: int, name: str, dtype=float) -> np.ndarray:
    out = np.asarray(a, dtype=dtype).reshape(-1)
    if out.shape != (n,):
        raise ValueError(f"{name} must have {n} components, got shape {np.shape(a)}")
    if not np.all(np.isfinite(out)):
        raise ValueError(f"{name} must be finite")
    return out


@dataclass(frozen=True)
class DiracMode:
    """One Dirac plane wave ``coeff * w * exp(-i p_mu x^mu / hbar)``; ``p`` and ``A_const`` are contravariant."""

    p: np.ndarray
    w: np.ndarray
    coeff: complex = 1.0
    A_const: np.ndarray = field(default_factory=lambda: np.zeros(4))

    def kinetic_momentum(self, constants: PhysicalConstants) -> np.ndarray:
        return self.p - constants.e * self.A_const

    def constraint_residual(self, constants: PhysicalConstants, rep: GammaRep = _REP) -> float:
        """|| (gamma^mu (p_mu - e A_mu) - mc) w || / ||w||."""
        q_lower = METRIC @ self.kinetic_momentum(constants)
        op = np.einsum("m,mab->ab", q_lower, rep.gammas) - constants.m * constants.c * np.eye(4)
        return float(np.linalg.norm(op @ self.w) / np.linalg.norm(self.w))


@dataclass(frozen=True)
class ScalarMode:
    """One Klein-Gordon plane wave ``coeff * exp(-i p_mu x^mu / hbar)``."""

    p: np.ndarray
    coeff: complex = 1.0

    def mass_shell_residual(self, constants: PhysicalConstants) -> float:
        return float(abs(self.p @ METRIC @ self.p - (constants.m * constants.c) ** 2))


@dataclass(frozen=True)
class PauliMode:
    """Spatial plane wave ``exp(i k.x)`` times the evolved two-spinor ``exp(-iHt/hbar) seed``.

    ``branches`` holds the evolution split into eigen-frequencies of the
    constant spin Hamiltonian: pairs ``(omega, two_spinor)``.
    """

    k: np.ndarray
    seed: np.ndarray
    coeff: complex
    branches: tuple


@dataclass(frozen=True)
class SchrodingerMode:
    k: np.ndarray
    omega: float
    coeff: complex = 1.0


@dataclass(frozen=True)
class WaveField:
    equation: str
    modes: tuple
    constants: PhysicalConstants = PhysicalConstants()
    A_const: np.ndarray = field(default_factory=lambda: np.zeros(4))
    B: np.ndarray = field(default_factory=lambda: np.zeros(3))
    chi: np.ndarray | None = None
    on_shell: bool = True
    box_length: float | None = None

    def __post_init__(self):
        if self.equation not in EQUATIONS:
            raise ValueError(f"unknown equation {self.equation!r}")
        if self.chi is not None:
            chi = np.asarray(self.chi, dtype=complex)
            if abs(np.vdot(chi, chi) - 1.0) > 1e-12:
                raise ValueError("spin eigenstate chi must satisfy chi^dagger chi = 1")

    @property
    def n_components(self) -> int:
        return {DIRAC: 4, KLEIN_GORDON: 1, PAULI_EQ: 2, SCHRODINGER: 1}[self.equation]

    def plane_waves(self) -> tuple[np.ndarray, np.ndarray]:
        """Wave covectors ``(M, 4)`` and complex amplitudes ``(M, n_components)``."""
        hbar = self.constants.hbar
        kap, amp = [], []
        for mode in self.modes:
            if isinstance(mode, DiracMode):
                kap.append(METRIC @ mode.p / hbar)
                amp.append(mode.coeff * mode.w)
            elif isinstance(mode, ScalarMode):
                kap.append(METRIC @ mode.p / hbar)
                amp.append([mode.coeff])
            elif isinstance(mode, PauliMode):
                for omega, spinor in mode.branches:
                    kap.append(np.concatenate([[omega], -mode.k]))
                    amp.append(mode.coeff * spinor)
            elif isinstance(mode, SchrodingerMode):
                kap.append(np.concatenate([[mode.omega], -mode.k]))
                amp.append([mode.coeff])
            else:
                raise TypeError(f"unsupported mode {type(mode).__name__}")
        nc = self.n_components
        if not kap:
            return np.zeros((0, 4)), np.zeros((0, nc), dtype=complex)
        return np.array(kap, dtype=float), np.array(amp, dtype=complex).reshape(len(kap), nc)

    def max_lattice_index(self) -> int:
        """Largest |spatial wave number| in units of 2 pi / L."""
        if self.box_length is None:
            raise ValueError("field is not on a periodic lattice")
        kap, _ = self.plane_waves()
        if len(kap) == 0:
            return 0
        n = np.abs(kap[:, 1:]) * self.box_length / (2 * np.pi)
        return int(np.max(np.rint(n)))

    def scaled(self, factor: complex) -> "WaveField":
        """Same field with every mode coefficient multiplied by ``factor``."""
        modes = tuple(dataclasses.replace(m, coeff=m.coeff * factor) for m in self.modes)
        return dataclasses.replace(self, modes=modes)

    def amplitude_norm(self) -> float:
        return float(np.sqrt(sum(abs(m.coeff) ** 2 for m in self.modes)))


@dataclass(frozen=True)
class FieldJet:
    """Value and first/second derivatives (lower indices) of a field.

    Shapes, for a batch of points ``x`` of shape ``(..., 4)``:
    ``value (..., nc)``, ``d1 (..., 4, nc)``, ``d2 (..., 4, 4, nc)``.
    """

    x: np.ndarray
    value: np.ndarray
    d1: np.ndarray
    d2: np.ndarray

    @property
    def scalar(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """(psi, d_mu psi, d_mu d_nu psi) for one-component fields."""
        return self.value[..., 0], self.d1[..., 0], self.d2[..., 0]


# ---------------------------------------------------------------------------
# Mode constructors


def _check_lattice(p_spatial: np.ndarray, hbar: float, box_length: float | None) -> None:
    if box_length is None:
        return
    n = p_spatial * box_length / (2 * np.pi * hbar)
    if np.max(np.abs(n - np.rint(n))) > 1e-9:
        raise ValueError(f"momentum {p_spatial.tolist()} is not on the 2*pi*hbar/L lattice")


def dirac_plane_wave(
    p_spatial: Sequence[float],
    energy_sign: int = 1,
    spin_index: int = 1,
    constants: PhysicalConstants = PhysicalConstants(),
    A_const: Sequence[float] = (0.0, 0.0, 0.0, 0.0),
    coeff: complex = 1.0,
    box_length: float | None = None,
    rep: GammaRep = _REP,
) -> DiracMode:
    """Plane-wave Dirac mode with canonical spatial momentum ``p_spatial``.

    The spinor amplitude is the projector ``gamma^mu q_mu + mc`` (q the
    kinetic momentum) applied to a rest-frame seed, then normalized.
    """
    if energy_sign not in (1, -1):
        raise ValueError("energy_sign must be +1 or -1")
    if spin_index not in (1, 2):
        raise ValueError("spin_index must be 1 or 2")
    p_sp = _vec(p_spatial, 3, "p_spatial")
    A = _vec(A_const, 4, "A_const")
    _check_lattice(p_sp, constants.hbar, box_length)
    mc = constants.m * constants.c
    q_sp = p_sp - constants.e * A[1:]
    q0 = energy_sign * np.sqrt(q_sp @ q_sp + mc**2)
    q = np.concatenate([[q0], q_sp])
    p = q + constants.e * A

    seed = np.zeros(4, dtype=complex)
    seed[(spin_index - 1) + (0 if energy_sign > 0 else 2)] = 1.0
    proj = np.einsum("m,mab->ab", METRIC @ q, rep.gammas) + mc * np.eye(4)
    w = proj @ seed
    norm = np.linalg.norm(w)
    if norm < 1e-10:
        raise ValueError("projector annihilates seed spinor")
    return DiracMode(p=p, w=w / norm, coeff=complex(coeff), A_const=A)


def kg_plane_wave(
    p_spatial: Sequence[float],
    energy_sign: int = 1,
    constants: PhysicalConstants = PhysicalConstants(),
    coeff: complex = 1.0,
    box_length: float | None = None,
) -> ScalarMode:
    if energy_sign not in (1, -1):
        raise ValueError("energy_sign must be +1 or -1")
    p_sp = _vec(p_spatial, 3, "p_spatial")
    _check_lattice(p_sp, constants.hbar, box_length)
    p0 = energy_sign * np.sqrt(p_sp @ p_sp + (constants.m * constants.c) ** 2)
    return ScalarMode(p=np.concatenate([[p0], p_sp]), coeff=complex(coeff))


def pauli_mode(
    k: Sequence[float],
    spinor_seed: Sequence[complex],
    constants: PhysicalConstants = PhysicalConstants(),
    B_uniform: Sequence[float] = (0.0, 0.0, 0.0),
    A_const: Sequence[float] = (0.0, 0.0, 0.0),
    coeff: complex = 1.0,
    box_length: float | None = None,
) -> PauliMode:
    """Exact Pauli mode for a uniform B with e = 0, or a constant A with B = 0.

    ``A_const`` here is the spatial vector potential.
    """
    kv = _vec(k, 3, "k")
    seed = _vec(spinor_seed, 2, "spinor_seed", dtype=complex)
    B = _vec(B_uniform, 3, "B_uniform")
    A = _vec(A_const, 3, "A_const")
    if constants.e != 0 and np.any(B != 0):
        raise ValueError("no closed-form mode for this configuration")
    _check_lattice(kv, 1.0, box_length)
    hb, m = constants.hbar, constants.m
    kin = hb * kv - constants.e * A
    energy = kin @ kin / (2 * m)
    bnorm = np.linalg.norm(B)
    if constants.kappa == 0 or bnorm == 0:
        branches = ((energy / hb, seed),)
    else:
        bs = np.einsum("i,iab->ab", B / bnorm, PAULI)
        branches = tuple(
            ((energy + s * constants.kappa * bnorm) / hb, 0.5 * (np.eye(2) + s * bs) @ seed)
            for s in (1, -1)
        )
    return PauliMode(k=kv, seed=seed, coeff=complex(coeff), branches=branches)


def schrodinger_mode(
    k: Sequence[float],
    constants: PhysicalConstants = PhysicalConstants(),
    coeff: complex = 1.0,
    box_length: float | None = None,
) -> SchrodingerMode:
    kv = _vec(k, 3, "k")
    _check_lattice(kv, 1.0, box_length)
    omega = constants.hbar * (kv @ kv) / (2 * constants.m)
    return SchrodingerMode(k=kv, omega=float(omega), coeff=complex(coeff))


def spin_vector(chi: Sequence[complex], hbar: float = 1.0) -> np.ndarray:
    """s = (hbar/2) chi^dagger sigma chi."""
    chi = np.asarray(chi, dtype=complex)
    return 0.5 * hbar * np.einsum("a,iab,b->i", chi.conj(), PAULI, chi).real


# ---------------------------------------------------------------------------
# Jets and field-equation residuals


def eval_jet(field: WaveField, x) -> FieldJet:
    """Analytic jet of ``field`` at points ``x`` (shape ``(..., 4)``)."""
    x = np.asarray(x, dtype=float)
    kap, amp = field.plane_waves()
    phase = np.exp(-1j * (x @ kap.T))
    value = phase @ amp
    d1 = np.einsum("...m,mu,mc->...uc", phase, -1j * kap, amp)
    kk = -np.einsum("mu,mv->muv", kap, kap)
    d2 = np.einsum("...m,muv,mc->...uvc", phase, kk, amp)
    d2 = 0.5 * (d2 + np.swapaxes(d2, -2, -3))
    return FieldJet(x=x, value=value, d1=d1, d2=d2)


def equation_residual(field: WaveField, x, rep: GammaRep = _REP) -> np.ndarray:
    """Pointwise residual of the field's own wave equation, shape ``(..., nc)``."""
    jet = eval_jet(field, x)
    k = field.constants
    if field.equation == DIRAC:
        A_lower = METRIC @ np.asarray(field.A_const, dtype=float)
        dpsi = 1j * k.hbar * jet.d1 - k.e * A_lower[:, None] * jet.value[..., None, :]
        return np.einsum("mab,...mb->...a", rep.gammas, dpsi) - k.m * k.c * jet.value
    if field.equation == KLEIN_GORDON:
        psi, _, d2 = jet.scalar
        box = np.einsum("mm,...mm->...", METRIC, d2)
        return (box + k.compton_wavenumber**2 * psi)[..., None]
    lap = np.einsum("...iic->...c", jet.d2[..., 1:, 1:, :])
    if field.equation == SCHRODINGER:
        return 1j * k.hbar * jet.d1[..., 0, :] + k.hbar**2 / (2 * k.m) * lap
    A = np.asarray(field.A_const, dtype=float)
    A = A[1:] if A.shape == (4,) else A
    grad = jet.d1[..., 1:, :]
    kinetic = (
        -(k.hbar**2) * lap
        + 2j * k.hbar * k.e * np.einsum("i,...ic->...c", A, grad)
        + (k.e**2) * (A @ A) * jet.value
    ) / (2 * k.m)
    spin = k.kappa * np.einsum("i,iab,...b->...a", np.asarray(field.B, dtype=float), PAULI, jet.value)
    return 1j * k.hbar * jet.d1[..., 0, :] - kinetic - spin


# ---------------------------------------------------------------------------
# Random fields


def _random_coeffs(rng: np.random.Generator, n: int) -> np.ndarray:
    c = rng.normal(size=n) + 1j * rng.normal(size=n)
    return c / np.linalg.norm(c)


def _momenta(rng, n_modes, momentum_range, box_length, hbar, max_index):
    if box_length is None:
        return rng.uniform(-momentum_range, momentum_range, size=(n_modes, 3))
    idx = rng.integers(-max_index, max_index + 1, size=(n_modes, 3))
    return idx * (2 * np.pi * hbar / box_length)


def random_dirac_field(
    rng: np.random.Generator,
    n_modes: int = 4,
    constants: PhysicalConstants = PhysicalConstants(),
    A_const: Sequence[float] = (0.0, 0.0, 0.0, 0.0),
    momentum_range: float = 2.0,
    mix_signs: bool = True,
    box_length: float | None = None,
    max_index: int = 4,
) -> WaveField:
    A = _vec(A_const, 4, "A_const")
    ps = _momenta(rng, n_modes, momentum_range, box_length, constants.hbar, max_index)
    signs = rng.choice([1, -1], size=n_modes) if mix_signs else np.ones(n_modes, dtype=int)
    spins = rng.integers(1, 3, size=n_modes)
    coeffs = _random_coeffs(rng, n_modes)
    modes = tuple(
        dirac_plane_wave(p, int(s), int(sp), constants, A, coeff=c, box_length=box_length)
        for p, s, sp, c in zip(ps, signs, spins, coeffs)
    )
    return WaveField(DIRAC, modes, constants, A_const=A, box_length=box_length)


def random_kg_field(
    rng: np.random.Generator,
    n_modes: int = 4,
    constants: PhysicalConstants = PhysicalConstants(),
    momentum_range: float = 2.0,
    mix_signs: bool = True,
    box_length: float | None = None,
    max_index: int = 4,
) -> WaveField:
    ps = _momenta(rng, n_modes, momentum_range, box_length, constants.hbar, max_index)
    signs = rng.choice([1, -1], size=n_modes) if mix_signs else np.ones(n_modes, dtype=int)
    coeffs = _random_coeffs(rng, n_modes)
    modes = tuple(
        kg_plane_wave(p, int(s), constants, coeff=c, box_length=box_length)
        for p, s, c in zip(ps, signs, coeffs)
    )
    return WaveField(KLEIN_GORDON, modes, constants, box_length=box_length)


def random_pauli_field(
    rng: np.random.Generator,
    n_modes: int = 4,
    constants: PhysicalConstants = PhysicalConstants(kappa=0.7),
    B_uniform: Sequence[float] = (0.0, 0.0, 0.0),
    A_const: Sequence[float] = (0.0, 0.0, 0.0),
    momentum_range: float = 2.0,
    box_length: float | None = None,
    max_index: int = 4,
) -> WaveField:
    ks = _momenta(rng, n_modes, momentum_range, box_length, 1.0, max_index)
    coeffs = _random_coeffs(rng, n_modes)
    modes = []
    for kv, c in zip(ks, coeffs):
        seed = rng.normal(size=2) + 1j * rng.normal(size=2)
        seed /= np.linalg.norm(seed)
        modes.append(pauli_mode(kv, seed, constants, B_uniform, A_const, coeff=c, box_length=box_length))
    A = _vec(A_const, 3, "A_const")
    return WaveField(
        PAULI_EQ, tuple(modes), constants,
        A_const=np.concatenate([[0.0], A]), B=_vec(B_uniform, 3, "B_uniform"),
        box_length=box_length,
    )


def random_schrodinger_field(
    rng: np.random.Generator,
    n_modes: int = 4,
    constants: PhysicalConstants = PhysicalConstants(),
    chi: Sequence[complex] | None = None,
    momentum_range: float = 2.0,
    box_length: float | None = None,
    max_index: int = 4,
) -> WaveField:
    ks = _momenta(rng, n_modes, momentum_range, box_length, 1.0, max_index)
    coeffs = _random_coeffs(rng, n_modes)
    modes = tuple(schrodinger_mode(kv, constants, c, box_length) for kv, c in zip(ks, coeffs))
    chi_arr = None if chi is None else np.asarray(chi, dtype=complex)
    return WaveField(SCHRODINGER, modes, constants, chi=chi_arr, box_length=box_length)


def offshell_variant(field: WaveField, seed: int) -> WaveField:
    """Copy of ``field`` with every mode frequency shifted by a random O(1) amount.

    Shifts have magnitude in [0.5, 1.5] (in units of p^0 or omega) and random
    sign, so no mode satisfies its dispersion relation.
    """
    rng = np.random.default_rng(seed)
    modes = []
    for mode in field.modes:
        shift = rng.choice([-1.0, 1.0]) * rng.uniform(0.5, 1.5)
        if isinstance(mode, (DiracMode, ScalarMode)):
            p = np.array(mode.p, dtype=float)
            p[0] += shift
            modes.append(dataclasses.replace(mode, p=p))
        elif isinstance(mode, PauliMode):
            branches = tuple((om + shift, sp) for om, sp in mode.branches)
            modes.append(dataclasses.replace(mode, branches=branches))
        else:
            modes.append(dataclasses.replace(mode, omega=mode.omega + shift))
    return dataclasses.replace(field, modes=tuple(modes), on_shell=False)


# ---------------------------------------------------------------------------
# JSON round trip


def _c2l(z: complex) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


def _l2c(v) -> complex:
    if isinstance(v, (int, float)):
        return complex(v)
    return complex(v[0], v[1])


def field_to_dict(field: WaveField) -> dict:
    """Explicit (fully specified) JSON-compatible description of a field."""
    k = field.constants
    out = {
        "equation": field.equation,
        "constants": {"hbar": k.hbar, "c": k.c, "m": k.m, "e": k.e, "kappa": k.kappa},
        "A_const": [float(a) for a in field.A_const],
        "B": [float(b) for b in field.B],
        "on_shell": field.on_shell,
        "lattice": field.box_length,
        "modes": [],
    }
    if field.chi is not None:
        out["chi"] = [_c2l(z) for z in field.chi]
    for mode in field.modes:
        if isinstance(mode, DiracMode):
            d = {"p": [float(v) for v in mode.p], "w": [_c2l(z) for z in mode.w]}
        elif isinstance(mode, ScalarMode):
            d = {"p": [float(v) for v in mode.p]}
        elif isinstance(mode, PauliMode):
            d = {
                "k": [float(v) for v in mode.k],
                "seed": [_c2l(z) for z in mode.seed],
                "branches": [[float(om), [_c2l(z) for z in sp]] for om, sp in mode.branches],
            }
        else:
            d = {"k": [float(v) for v in mode.k], "omega": float(mode.omega)}
        d["coeff"] = _c2l(mode.coeff)
        out["modes"].append(d)
    return out


def field_from_dict(spec: dict) -> WaveField:
    """Build a field from its JSON description.

    Modes may be fully specified (as written by :func:`field_to_dict`) or in
    short form: Dirac ``{"p": [3], "sign", "spin"}``, Klein-Gordon
    ``{"p": [3], "sign"}``, Pauli ``{"k", "seed"}``, Schrodinger ``{"k"}``.
    Short-form modes are constructed on shell; ``"on_shell": false`` then
    applies :func:`offshell_variant` with ``"offshell_seed"``.
    """
    eq = spec["equation"]
    if eq not in EQUATIONS:
        raise ValueError(f"unknown equation {eq!r}")
    constants = PhysicalConstants(**spec.get("constants", {}))
    L = spec.get("lattice")
    A_in = list(spec.get("A_const", [0.0, 0.0, 0.0, 0.0]))
    if eq == PAULI_EQ and len(A_in) == 3:
        A_in = [0.0] + A_in
    A = _vec(A_in, 4, "A_const")
    B = _vec(spec.get("B", [0.0, 0.0, 0.0]), 3, "B")
    chi = spec.get("chi")
    chi = None if chi is None else np.array([_l2c(z) for z in chi])
    modes = []
    short = False
    for m in spec["modes"]:
        coeff = _l2c(m.get("coeff", 1.0))
        if eq == DIRAC:
            if "w" in m:
                modes.append(DiracMode(_vec(m["p"], 4, "p"), np.array([_l2c(z) for z in m["w"]]), coeff, A))
            else:
                short = True
                modes.append(dirac_plane_wave(m["p"], m.get("sign", 1), m.get("spin", 1), constants, A, coeff, L))
        elif eq == KLEIN_GORDON:
            p = list(m["p"])
            if len(p) == 4:
                modes.append(ScalarMode(_vec(p, 4, "p"), coeff))
            else:
                short = True
                modes.append(kg_plane_wave(p, m.get("sign", 1), constants, coeff, L))
        elif eq == PAULI_EQ:
            seed = [_l2c(z) for z in m["seed"]]
            if "branches" in m:
                br = tuple((float(om), np.array([_l2c(z) for z in sp])) for om, sp in m["branches"])
                modes.append(PauliMode(_vec(m["k"], 3, "k"), np.array(seed), coeff, br))
            else:
                short = True
                modes.append(pauli_mode(m["k"], seed, constants, B, A[1:], coeff, L))
        else:
            if "omega" in m:
                modes.append(SchrodingerMode(_vec(m["k"], 3, "k"), float(m["omega"]), coeff))
            else:
                short = True
                modes.append(schrodinger_mode(m["k"], constants, coeff, L))
    field = WaveField(eq, tuple(modes), constants, A_const=A, B=B, chi=chi, box_length=L)
    on_shell = bool(spec.get("on_shell", True))
    if short and not on_shell:
        return offshell_variant(field, int(spec.get("offshell_seed", 0)))
    return dataclasses.replace(field, on_shell=on_shell)
