"""Numerical checks of conservation laws on exact plane-wave fields.

Divergences are taken by finite differences of the current itself, so the
same machinery covers every current (including ansatz terms) without any
per-current chain rule.
"""

from __future__ import annotations

from dataclasses import asdict, dataclass
from functools import partial
from itertools import combinations
from typing import Callable, Mapping

import numpy as np

from . import currents as cur
from .solution_factory import (
    DIRAC,
    KLEIN_GORDON,
    PAULI_EQ,
    RELATIVISTIC,
    FieldJet,
    WaveField,
    eval_jet,
    offshell_variant,
    spin_vector,
)

FD_STEP = 1e-3
SWEEP_HALF_WIDTH = 5.0
BOX_LENGTH = 2 * np.pi
DEFAULT_GRID = 16
DEFAULT_TOL = 1e-9

Current = Callable[[FieldJet], np.ndarray]


class VerificationError(RuntimeError):
    """A numerical check could not be carried out as configured."""


def _stencil_offsets(step: float) -> np.ndarray:
    # (level, direction, offset) -> displacement; offsets are -2, -1, +1, +2 steps
    out = np.zeros((2, 4, 4, 4))
    for lev, h in enumerate((step, step / 2)):
        for mu in range(4):
            for j, s in enumerate((-2, -1, 1, 2)):
                out[lev, mu, j, mu] = s * h
    return out.reshape(-1, 4)


def divergence_at(current: Current, field: WaveField, x, step: float = FD_STEP) -> np.ndarray:
    """d_mu j^mu at ``x`` (shape ``(4,)`` or ``(N, 4)``).

    Fourth-order central differences at steps h and h/2 along each
    coordinate, combined by one Richardson level (error O(h^6)). ``current``
    may return extra axes before the final component axis; they are kept.
    """
    x = np.asarray(x, dtype=float)
    single = x.ndim == 1
    x = np.atleast_2d(x)
    n = x.shape[0]
    pts = x[:, None, :] + _stencil_offsets(step)[None]
    vals = np.asarray(current(eval_jet(field, pts)))
    if not np.all(np.isfinite(vals)):
        raise VerificationError("stencil evaluation failed")
    extra = vals.shape[2:-1]
    vals = vals.reshape(n, 2, 4, 4, *extra, 4)
    # keep component mu for displacements along mu -> (n, 2, 4off, *extra, 4dir)
    vals = np.diagonal(vals, axis1=2, axis2=-1)
    m2, m1, p1, p2 = (vals[:, :, j] for j in range(4))
    # grouped so that a constant current gives exactly zero
    d = (8.0 * (p1 - m1) - (p2 - m2)) / 12.0
    d0 = d[:, 0] / step
    d1 = d[:, 1] / (step / 2)
    div = ((16.0 * d1 - d0) / 15.0).sum(axis=-1)
    return div[0] if single else div


@dataclass(frozen=True)
class SweepReport:
    current: str
    field: str
    n_points: int
    max_residual: float
    scale: float
    tolerance: float

    @property
    def passed(self) -> bool:
        return self.max_residual <= self.tolerance * max(self.scale, 1.0)

    @property
    def relative_residual(self) -> float:
        return self.max_residual / max(self.scale, 1.0)

    def to_dict(self) -> dict:
        d = asdict(self)
        d["pass"] = self.passed
        return d


def describe(field: WaveField) -> str:
    shell = "on-shell" if field.on_shell else "off-shell"
    return f"{field.equation}[{len(field.modes)} modes, {shell}]"


def sample_points(n_points: int, seed: int, half_width: float = SWEEP_HALF_WIDTH) -> np.ndarray:
    rng = np.random.default_rng(seed)
    return rng.uniform(-half_width, half_width, size=(n_points, 4))


def conservation_sweep(
    current: Current,
    field: WaveField,
    n_points: int = 200,
    seed: int = 0,
    tolerance: float = DEFAULT_TOL,
    name: str | None = None,
) -> SweepReport:
    if n_points < 1:
        raise ValueError("n_points must be >= 1")
    x = sample_points(n_points, seed)
    res = np.abs(divergence_at(current, field, x))
    j = np.asarray(current(eval_jet(field, x)))
    scale = float(np.max(np.linalg.norm(j, axis=-1)))
    return SweepReport(
        current=name or getattr(current, "__name__", "current"),
        field=describe(field),
        n_points=n_points,
        max_residual=float(np.max(res)),
        scale=scale,
        tolerance=tolerance,
    )


# ---------------------------------------------------------------------------
# Global charges on the periodic box


def box_grid(field: WaveField, t: float, grid_n: int) -> np.ndarray:
    """Spatial grid of the periodic box at time ``t`` as points (grid_n**3, 4)."""
    L = field.box_length
    g = np.arange(grid_n) * (L / grid_n)
    X, Y, Z = np.meshgrid(g, g, g, indexing="ij")
    x0 = t * field.constants.c if field.equation in RELATIVISTIC else t
    T = np.full(X.size, x0)
    return np.column_stack([T, X.ravel(), Y.ravel(), Z.ravel()])


def global_charge(current: Current, field: WaveField, t: float = 0.0, grid_n: int = DEFAULT_GRID) -> complex:
    """Integral of j^0 over the periodic box by the rectangle rule.

    Exact to roundoff for the band-limited (quadratic in plane waves)
    integrands produced here, provided ``grid_n >= 2 * max_index + 2``.
    Returned as a complex number; physical charges have negligible imaginary part.
    """
    if field.box_length is None:
        raise VerificationError("global charge needs a lattice field")
    if grid_n < 2 * field.max_lattice_index() + 2:
        raise VerificationError("aliased quadrature")
    pts = box_grid(field, t, grid_n)
    j0 = np.asarray(current(eval_jet(field, pts)))[..., 0]
    cell = (field.box_length / grid_n) ** 3
    return complex(np.sum(j0) * cell)


def global_charges(currents: Mapping[str, Current], field: WaveField, t: float = 0.0,
                   grid_n: int = DEFAULT_GRID) -> dict[str, complex]:
    return {name: global_charge(c, field, t, grid_n) for name, c in currents.items()}


def charge_equality(currents: Mapping[str, Current], field: WaveField, t: float = 0.0,
                    grid_n: int = DEFAULT_GRID) -> float:
    """Largest pairwise |P_a - P_b| among the given currents."""
    p = list(global_charges(currents, field, t, grid_n).values())
    return max((abs(a - b) for a, b in combinations(p, 2)), default=0.0)


# ---------------------------------------------------------------------------
# Current registries


def charge_set(field: WaveField) -> dict[str, Current]:
    """Currents whose global charges must agree for ``field``."""
    k = field.constants
    if field.equation == DIRAC:
        A = field.A_const
        return {
            "dirac_current": partial(cur.dirac_current, g=k.c),
            "convective": lambda jet: cur.gordon_decomposition(jet, k, A)[0],
            "dirac_second_order": partial(cur.dirac_second_order, constants=k),
        }
    if field.equation == KLEIN_GORDON:
        return {
            "kg_current": partial(cur.kg_current, constants=k),
            "kg_second_order": partial(cur.kg_second_order, constants=k),
        }
    raise ValueError(f"no charge set for {field.equation}")


def registered_currents(field: WaveField) -> dict[str, Current]:
    """Every current defined for the field's equation, bound to its constants."""
    k = field.constants
    eq = field.equation
    if eq == DIRAC:
        A = field.A_const
        out = {
            "dirac_current": partial(cur.dirac_current, g=k.c),
            "convective": lambda jet: cur.gordon_decomposition(jet, k, A)[0],
            "bivector_current": partial(cur.bivector_current, k=1j),
        }
        if not np.any(np.asarray(A) != 0) or k.e == 0:
            out["dirac_second_order"] = partial(cur.dirac_second_order, constants=k)
        return out
    if eq == KLEIN_GORDON:
        return {
            "kg_current": partial(cur.kg_current, constants=k),
            "kg_bivector_current": partial(cur.kg_bivector_current, k=1.0),
            "kg_second_order": partial(cur.kg_second_order, constants=k),
            "kg_stress_current": partial(cur.kg_stress_current, k=(1.0, 0.0, 0.0, 0.0), constants=k),
        }
    if eq == PAULI_EQ:
        A = np.asarray(field.A_const, dtype=float)[1:]
        return {"pauli_current": lambda jet: cur.as_four_vector(cur.pauli_current(jet, k, A))}
    spin = None if field.chi is None else spin_vector(field.chi, k.hbar)
    return {"schrodinger_current": lambda jet: cur.as_four_vector(cur.schrodinger_current(jet, k, spin))}


IDENTICALLY_CONSERVED = ("bivector_current", "kg_bivector_current")


@dataclass(frozen=True)
class DiscriminationRow:
    current: str
    on_shell: SweepReport
    off_shell: SweepReport

    @property
    def identically_conserved(self) -> bool:
        return self.on_shell.passed and self.off_shell.passed


def offshell_discrimination(
    field: WaveField,
    seed: int,
    currents: Mapping[str, Current] | None = None,
    n_points: int = 200,
    tolerance: float = DEFAULT_TOL,
) -> list[DiscriminationRow]:
    """Sweep each current on ``field`` and on its off-shell variant.

    Identically conserved currents pass both sweeps; currents conserved only
    by virtue of the wave equation pass on shell and fail off shell.
    """
    if currents is None:
        currents = registered_currents(field)
    off = offshell_variant(field, seed)
    rows = []
    for name, c in currents.items():
        on_rep = conservation_sweep(c, field, n_points, seed, tolerance, name)
        off_rep = conservation_sweep(c, off, n_points, seed, tolerance, name)
        rows.append(DiscriminationRow(name, on_rep, off_rep))
    return rows
