"""Verification suites: each returns an ordered list of pass/fail cases.

A case compares one real metric with a tolerance. ``bound="upper"`` passes
when metric <= tolerance, ``bound="lower"`` when metric >= tolerance.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import partial
from typing import Callable

import numpy as np

from . import currents as cur
from . import uniqueness as uq
from .covariants import compute_bilinears, fierz_residuals
from .gamma_algebra import (
    METRIC,
    anticommutator_residuals,
    build_standard_rep,
    commutant_in_basis,
    gamma5_residual,
)
from .solution_factory import (
    DIRAC,
    KLEIN_GORDON,
    PhysicalConstants,
    WaveField,
    eval_jet,
    field_from_dict,
    offshell_variant,
    random_dirac_field,
    random_kg_field,
    random_pauli_field,
    random_schrodinger_field,
)
from .verify import (
    BOX_LENGTH,
    DEFAULT_GRID,
    DEFAULT_TOL,
    IDENTICALLY_CONSERVED,
    charge_equality,
    charge_set,
    conservation_sweep,
    describe,
    global_charge,
    registered_currents,
    sample_points,
)

SUITES = (
    "clifford", "fierz", "conserve", "gordon", "charge", "stress",
    "pauli", "schrodinger", "uniqueness-dirac", "uniqueness-kg",
)

_PAIRS = [(mu, nu) for mu in range(4) for nu in range(mu, 4)]


@dataclass
class Case:
    name: str
    metric: float
    tolerance: float
    bound: str = "upper"

    @property
    def passed(self) -> bool:
        if not np.isfinite(self.metric):
            return False
        if self.bound == "upper":
            return self.metric <= self.tolerance
        return self.metric >= self.tolerance

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "metric": float(self.metric),
            "tolerance": float(self.tolerance),
            "bound": self.bound,
            "pass": self.passed,
        }


@dataclass
class SuiteContext:
    seed: int = 0
    constants: PhysicalConstants = field(default_factory=PhysicalConstants)
    fields: list = field(default_factory=list)
    grid_n: int = DEFAULT_GRID
    modes: int | None = None
    points: int = 200
    tol: float | None = None
    tolerances: dict = field(default_factory=dict)

    def rng(self, salt: int) -> np.random.Generator:
        return np.random.default_rng([self.seed, salt])

    def n_modes(self, rng: np.random.Generator) -> int:
        return self.modes if self.modes is not None else int(rng.integers(4, 9))


@dataclass
class SuiteResult:
    cases: list = field(default_factory=list)
    details: dict = field(default_factory=dict)

    def add(self, ctx: SuiteContext, name: str, metric: float, tolerance: float, bound: str = "upper"):
        if name in ctx.tolerances:
            tolerance = ctx.tolerances[name]
        elif ctx.tol is not None and bound == "upper":
            tolerance = ctx.tol
        self.cases.append(Case(name, float(metric), float(tolerance), bound))


def _rel(a, b, scale=None) -> float:
    a, b = np.asarray(a), np.asarray(b)
    s = np.max(np.abs(a)) if scale is None else scale
    return float(np.max(np.abs(a - b)) / max(s, 1.0))


# ---------------------------------------------------------------------------


def suite_clifford(ctx: SuiteContext) -> SuiteResult:
    out = SuiteResult()
    rep = build_standard_rep()
    for (mu, nu), r in zip(_PAIRS, anticommutator_residuals(rep)):
        out.add(ctx, f"anticommutator[{mu}{nu}]", r, 1e-14)
    out.add(ctx, "gamma5_construction", gamma5_residual(rep), 1e-14)
    comm = commutant_in_basis(rep, [rep.g0 @ rep.gammas[i] for i in (1, 2, 3)])
    out.add(ctx, "commutant_of_g0gi_is_I_g5", 0.0 if comm == [0, 15] else 1.0, 0.0)
    out.details["commutant"] = comm
    return out


def random_spinors(rng: np.random.Generator, n: int) -> np.ndarray:
    return rng.normal(size=(n, 4)) + 1j * rng.normal(size=(n, 4))


def suite_fierz(ctx: SuiteContext, n_spinors: int = 10_000) -> SuiteResult:
    out = SuiteResult()
    rep = build_standard_rep()
    psis = random_spinors(ctx.rng(1), n_spinors)
    worst = np.max(fierz_residuals(psis, rep), axis=0)
    b = compute_bilinears(psis, rep)
    vv_min = np.min(np.einsum("nm,mk,nk->n", b.V, METRIC, b.V) / b.alpha**2)
    v0_min = np.min(b.V[:, 0])
    names = ("VV=-SS=beta2+chi2", "V0S0=-ViSi=alpha_delta", "Vvec2=alpha2-beta2-chi2", "Svec2=delta2+beta2+chi2")
    for n, r in zip(names, worst):
        out.add(ctx, f"fierz[{n}]", r, 1e-12)
    out.add(ctx, "causal[min VV/alpha2]", vv_min, 0.0, "lower")
    out.add(ctx, "future[min V0]", v0_min, 0.0, "lower")
    return out


def _sweep_cases(out: SuiteResult, ctx: SuiteContext, f: WaveField, label: str, tol: float = DEFAULT_TOL):
    for name, c in registered_currents(f).items():
        rep = conservation_sweep(c, f, ctx.points, ctx.seed, tol, name)
        out.add(ctx, f"{label}:{name}", rep.relative_residual, tol)


def conserve_fields(ctx: SuiteContext) -> list[tuple[str, WaveField]]:
    if ctx.fields:
        return [(f"config[{i}]", field_from_dict(spec)) for i, spec in enumerate(ctx.fields)]
    k = ctx.constants
    ke = replace(k, e=0.7)
    r = [ctx.rng(10 + i) for i in range(4)]
    return [
        ("dirac_free", random_dirac_field(r[0], ctx.n_modes(r[0]), k)),
        ("dirac_constA", random_dirac_field(r[1], ctx.n_modes(r[1]), ke, A_const=(0.3, -0.2, 0.5, 0.1))),
        ("kg", random_kg_field(r[2], ctx.n_modes(r[2]), k)),
    ] + pauli_fields(ctx) + schrodinger_fields(ctx)


def pauli_fields(ctx: SuiteContext) -> list[tuple[str, WaveField]]:
    k = replace(ctx.constants, kappa=0.7)
    r1, r2 = ctx.rng(20), ctx.rng(21)
    return [
        ("pauli_uniformB", random_pauli_field(r1, ctx.n_modes(r1), replace(k, e=0.0), B_uniform=(0.4, -0.3, 0.8))),
        ("pauli_constA", random_pauli_field(r2, ctx.n_modes(r2), replace(k, e=0.7), A_const=(0.3, -0.2, 0.5))),
    ]


def schrodinger_fields(ctx: SuiteContext) -> list[tuple[str, WaveField]]:
    r1, r2 = ctx.rng(30), ctx.rng(31)
    chi = np.array([0.6, 0.8j])
    return [
        ("schrodinger", random_schrodinger_field(r1, ctx.n_modes(r1), ctx.constants)),
        ("schrodinger_spin", random_schrodinger_field(r2, ctx.n_modes(r2), ctx.constants, chi=chi)),
    ]


def suite_conserve(ctx: SuiteContext) -> SuiteResult:
    out = SuiteResult()
    fields = conserve_fields(ctx)
    for label, f in fields:
        out.details[label] = describe(f)
        _sweep_cases(out, ctx, f, label)
    # identically conserved vs equation-conserved
    for label, f in [x for x in fields if x[1].equation in (DIRAC, KLEIN_GORDON)]:
        off = offshell_variant(f, ctx.seed)
        for name, c in registered_currents(off).items():
            rep = conservation_sweep(c, off, ctx.points, ctx.seed, DEFAULT_TOL, name)
            if name in IDENTICALLY_CONSERVED:
                out.add(ctx, f"{label}:offshell:{name}", rep.relative_residual, DEFAULT_TOL)
            elif name in ("dirac_current", "kg_current"):
                out.add(ctx, f"{label}:offshell:{name}", rep.relative_residual, 1e-2, "lower")
    return out


def suite_gordon(ctx: SuiteContext) -> SuiteResult:
    out = SuiteResult()
    k = ctx.constants
    rng = ctx.rng(40)
    x = sample_points(ctx.points, ctx.seed)
    for label, kk, A in (("free", k, (0.0, 0.0, 0.0, 0.0)), ("constA", replace(k, e=0.7), (0.3, -0.2, 0.5, 0.1))):
        f = random_dirac_field(rng, ctx.n_modes(rng), kk, A_const=A)
        jet = eval_jet(f, x)
        J = cur.dirac_current(jet, g=kk.c)
        G, internal = cur.gordon_decomposition(jet, kk, A)
        out.add(ctx, f"{label}:J=G+internal", _rel(J, G + internal), 1e-10)
        off = offshell_variant(f, ctx.seed)
        jo = eval_jet(off, x)
        Go, io = cur.gordon_decomposition(jo, kk, A)
        out.add(ctx, f"{label}:offshell:J=G+internal", _rel(cur.dirac_current(jo, g=kk.c), Go + io), 1e-2, "lower")
    f = random_dirac_field(rng, ctx.n_modes(rng), k)
    lhs, rhs = cur.g0_reduction(eval_jet(f, x), k)
    out.add(ctx, "G0_reduction", _rel(lhs, rhs), 1e-10)
    lat = random_dirac_field(rng, ctx.n_modes(rng), k, box_length=BOX_LENGTH)
    P = global_charge(partial(cur.dirac_current, g=k.c), lat, 0.0, ctx.grid_n)
    Pi = global_charge(lambda jet: cur.gordon_decomposition(jet, k)[1], lat, 0.0, ctx.grid_n)
    out.add(ctx, "box_integral_internal0", abs(Pi) / abs(P), 1e-10)
    return out


def charge_fields(ctx: SuiteContext) -> list[tuple[str, WaveField]]:
    if ctx.fields:
        fs = [(f"config[{i}]", field_from_dict(s)) for i, s in enumerate(ctx.fields)]
        return [(n, f) for n, f in fs if f.equation in (DIRAC, KLEIN_GORDON) and f.box_length is not None]
    r1, r2 = ctx.rng(50), ctx.rng(51)
    return [
        ("dirac", random_dirac_field(r1, ctx.n_modes(r1), ctx.constants, box_length=BOX_LENGTH)),
        ("kg", random_kg_field(r2, ctx.n_modes(r2), ctx.constants, box_length=BOX_LENGTH)),
    ]


def suite_charge(ctx: SuiteContext, times=(0.0, 0.5, 1.0, 2.0, 3.0)) -> SuiteResult:
    out = SuiteResult()
    for label, f in charge_fields(ctx):
        cs = charge_set(f)
        first = next(iter(cs.values()))
        P = np.array([global_charge(first, f, t, ctx.grid_n) for t in times])
        scale = abs(P[0])
        out.details[label] = {"P": [float(P[0].real), float(P[0].imag)]}
        out.add(ctx, f"{label}:dP/dt", np.max(np.abs(P - P[0])) / scale, 1e-10)
        out.add(ctx, f"{label}:imag(P)", abs(P[0].imag) / scale, 1e-12)
        worst = max(charge_equality(cs, f, t, ctx.grid_n) for t in times)
        out.add(ctx, f"{label}:charge_equality", worst / scale, 1e-9)
    return out


def suite_stress(ctx: SuiteContext, n_samples: int = 500) -> SuiteResult:
    out = SuiteResult()
    k = ctx.constants
    rng = ctx.rng(60)
    x = sample_points(ctx.points, ctx.seed)
    f = random_dirac_field(rng, ctx.n_modes(rng), k)
    lhs, rhs = cur.t00_rewrite(eval_jet(f, x), k)
    out.add(ctx, "t00_rewrite", _rel(lhs, rhs), 1e-10)
    lo, ro = cur.t00_rewrite(eval_jet(offshell_variant(f, ctx.seed), x), k)
    out.add(ctx, "offshell:t00_rewrite", _rel(lo, ro), 1e-2, "lower")

    g = random_kg_field(rng, ctx.n_modes(rng), k)
    worst = 0.0
    l0_min, ll_min = np.inf, np.inf
    for i in range(5):
        # future-timelike k: |k_spatial| < k0
        kv = rng.normal(size=3)
        kv *= rng.uniform(0, 0.95) / np.linalg.norm(kv)
        kvec = np.concatenate([[1.0], kv]) * rng.uniform(0.5, 2.0)
        c = partial(cur.kg_stress_current, k=kvec, constants=k)
        rep = conservation_sweep(c, g, ctx.points, ctx.seed + i, DEFAULT_TOL, "kg_stress_current")
        worst = max(worst, rep.relative_residual)
        xs = sample_points(n_samples // 5, ctx.seed + 100 + i)
        l = c(eval_jet(g, xs))
        scale = np.max(np.abs(l))
        l0_min = min(l0_min, float(np.min(l[..., 0].real)) / scale)
        ll = np.einsum("...m,m,...m->...", l, np.diag(METRIC), l).real
        ll_min = min(ll_min, float(np.min(ll)) / scale**2)
    out.add(ctx, "kg_stress_current:conserved", worst, DEFAULT_TOL)
    out.add(ctx, "kg_stress_current:min l0", l0_min, 0.0, "lower")
    out.add(ctx, "kg_stress_current:min l.l", ll_min, 0.0, "lower")
    return out


def suite_pauli(ctx: SuiteContext) -> SuiteResult:
    out = SuiteResult()
    for label, f in pauli_fields(ctx):
        _sweep_cases(out, ctx, f, label)
    return out


def suite_schrodinger(ctx: SuiteContext) -> SuiteResult:
    out = SuiteResult()
    for label, f in schrodinger_fields(ctx):
        _sweep_cases(out, ctx, f, label)
    return out


def _certificate_cases(out: SuiteResult, ctx: SuiteContext, label: str, report: uq.NullspaceReport,
                       expected: int):
    out.add(ctx, f"{label}:dimension_error", abs(report.dimension - expected), 0.0)
    out.add(ctx, f"{label}:gap", report.gap, 1e3, "lower")
    out.add(ctx, f"{label}:misalignment", 1.0 - report.alignment, 1e-8)
    out.details[label] = report.to_dict()


def suite_uniqueness_dirac(ctx: SuiteContext) -> SuiteResult:
    out = SuiteResult()
    _, m, report = uq.dirac_certificate(seed=ctx.seed, constants=ctx.constants)
    _certificate_cases(out, ctx, "dirac", report, 5)
    out.add(ctx, "dirac:axial_residual_ratio", uq.residual_ratio(m, uq.dirac_reference(axial=True)), 0.1, "lower")
    cands = uq.builtin_candidates()
    r1, r2 = uq.constraint_residuals(cands["alpha"], seed=ctx.seed)
    out.add(ctx, "constraint[alpha]:r1", r1, 1e-12)
    out.add(ctx, "constraint[alpha]:r2", r2, 1e-12)
    r1, _ = uq.constraint_residuals(cands["delta"], seed=ctx.seed)
    out.add(ctx, "constraint[delta]:r1", r1, 0.1, "lower")
    _, r2 = uq.constraint_residuals(cands["beta_alpha"], seed=ctx.seed)
    out.add(ctx, "constraint[beta_alpha]:r2", r2, 0.1, "lower")
    return out


def suite_uniqueness_kg(ctx: SuiteContext) -> SuiteResult:
    out = SuiteResult()
    for inv in (False, True):
        _, _, report = uq.kg_certificate(inv, seed=ctx.seed, constants=ctx.constants)
        _certificate_cases(out, ctx, "kg_invariants" if inv else "kg", report, 10)
    return out


RUNNERS: dict[str, Callable[[SuiteContext], SuiteResult]] = {
    "clifford": suite_clifford,
    "fierz": suite_fierz,
    "conserve": suite_conserve,
    "gordon": suite_gordon,
    "charge": suite_charge,
    "stress": suite_stress,
    "pauli": suite_pauli,
    "schrodinger": suite_schrodinger,
    "uniqueness-dirac": suite_uniqueness_dirac,
    "uniqueness-kg": suite_uniqueness_kg,
}


def run(suite: str, ctx: SuiteContext) -> SuiteResult:
    if suite == "all":
        res = SuiteResult()
        for name in SUITES:
            r = RUNNERS[name](ctx)
            res.cases += [replace(c, name=f"{name}/{c.name}") for c in r.cases]
            if r.details:
                res.details[name] = r.details
        return res
    if suite not in RUNNERS:
        raise ValueError(f"unknown suite {suite!r}")
    return RUNNERS[suite](ctx)
