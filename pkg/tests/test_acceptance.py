"""Acceptance criteria, one test per criterion.

Each criterion prints a single PASS/FAIL line with its worst metric and
runtime. Run directly (``python3 tests/test_acceptance.py``) or through
pytest (``pytest tests/test_acceptance.py -s``).
"""

import sys
import time
from functools import partial

import numpy as np
import pytest

from current_forge import currents as cur
from current_forge import uniqueness as uq
from current_forge.cli import main as cli_main
from current_forge.covariants import compute_bilinears, fierz_residuals
from current_forge.gamma_algebra import (
    METRIC,
    anticommutator_residuals,
    build_standard_rep,
    commutant_in_basis,
    gamma5_residual,
    hermitian_basis,
)
from current_forge.solution_factory import (
    DIRAC,
    PhysicalConstants,
    eval_jet,
    offshell_variant,
    random_dirac_field,
    random_kg_field,
    random_pauli_field,
    random_schrodinger_field,
    spin_vector,
)
from current_forge.verify import (
    BOX_LENGTH,
    charge_equality,
    charge_set,
    conservation_sweep,
    global_charge,
    sample_points,
)

K = PhysicalConstants()
KE = PhysicalConstants(e=0.7)
A4 = (0.3, -0.2, 0.5, 0.1)
N_POINTS = 200

# collected for the terminal summary (see conftest.py)
LINES: list = []


def _modes(rng):
    return int(rng.integers(4, 9))


def _report(number, title, ok, detail, elapsed, limit):
    ok = ok and elapsed < limit
    line = f"[{'PASS' if ok else 'FAIL'}] criterion {number:>2} {title}: {detail}; {elapsed:.2f} s (limit {limit:g} s)"
    print(line)
    LINES.append(line)
    return ok, line


def _timed(fn):
    t = time.perf_counter()
    out = fn()
    return out, time.perf_counter() - t


# ---------------------------------------------------------------------------


def criterion_1():
    def run():
        rep = build_standard_rep()
        worst = max(np.max(anticommutator_residuals(rep)), gamma5_residual(rep))
        comm = commutant_in_basis(rep, [rep.g0 @ rep.gammas[i] for i in (1, 2, 3)])
        return worst, comm

    (worst, comm), dt = _timed(run)
    ok = worst <= 1e-14 and comm == [0, 15]
    return _report(1, "clifford", ok, f"max residual {worst:.1e} (<= 1e-14), commutant {comm}", dt, 1)


def criterion_2():
    def run():
        rng = np.random.default_rng(2)
        psis = rng.normal(size=(10_000, 4)) + 1j * rng.normal(size=(10_000, 4))
        worst = np.max(fierz_residuals(psis))
        b = compute_bilinears(psis)
        vv = np.einsum("nm,mk,nk->n", b.V, METRIC, b.V)
        causal = bool(np.all(vv >= 0) and np.all(b.V[:, 0] >= 0))
        return worst, causal

    (worst, causal), dt = _timed(run)
    ok = worst <= 1e-12 and causal
    return _report(2, "fierz", ok, f"10^4 spinors, max residual {worst:.1e} (<= 1e-12), causal {causal}", dt, 5)


def _conservation_cases():
    r = [np.random.default_rng(300 + i) for i in range(8)]
    dirac = random_dirac_field(r[0], _modes(r[0]), K)
    dirac_a = random_dirac_field(r[1], _modes(r[1]), KE, A_const=A4)
    kg = random_kg_field(r[2], _modes(r[2]), K)
    pauli_b = random_pauli_field(r[3], _modes(r[3]), PhysicalConstants(kappa=0.7), B_uniform=(0.4, -0.3, 0.8))
    pauli_a = random_pauli_field(r[4], _modes(r[4]), PhysicalConstants(kappa=0.7, e=0.7), A_const=A4[1:])
    sch = random_schrodinger_field(r[5], _modes(r[5]), K)
    sch_s = random_schrodinger_field(r[6], _modes(r[6]), K, chi=[0.6, 0.8j])
    s_spin = spin_vector(sch_s.chi)

    def four(pair):
        return cur.as_four_vector(pair)

    return [
        ("dirac_current", cur.dirac_current, dirac),
        ("dirac_current[A]", cur.dirac_current, dirac_a),
        ("kg_current", cur.kg_current, kg),
        ("pauli_current[B]", lambda j: four(cur.pauli_current(j, pauli_b.constants)), pauli_b),
        ("pauli_current[A]", lambda j: four(cur.pauli_current(j, pauli_a.constants, A4[1:])), pauli_a),
        ("schrodinger_current", lambda j: four(cur.schrodinger_current(j)), sch),
        ("schrodinger_current[spin]", lambda j: four(cur.schrodinger_current(j, spin=s_spin)), sch_s),
        ("convective", lambda j: cur.gordon_decomposition(j)[0], dirac),
        ("convective[A]", lambda j: cur.gordon_decomposition(j, KE, A4)[0], dirac_a),
        ("dirac_second_order", cur.dirac_second_order, dirac),
        ("kg_second_order", cur.kg_second_order, kg),
    ]


def criterion_3():
    def run():
        return {name: conservation_sweep(c, f, N_POINTS, 3, 1e-9, name) for name, c, f in _conservation_cases()}

    reports, dt = _timed(run)
    worst = max(reports.values(), key=lambda r: r.relative_residual)
    ok = all(r.passed for r in reports.values())
    return _report(3, "conservation", ok,
                   f"{len(reports)} currents, worst {worst.current} {worst.relative_residual:.1e} (<= 1e-9)", dt, 20)


def criterion_4():
    def run():
        rd, rk = np.random.default_rng(41), np.random.default_rng(42)
        d = offshell_variant(random_dirac_field(rd, _modes(rd), K), 4)
        k = offshell_variant(random_kg_field(rk, _modes(rk), K), 4)
        ident = [
            conservation_sweep(partial(cur.bivector_current, k=1j), d, N_POINTS, 4),
            conservation_sweep(cur.kg_bivector_current, k, N_POINTS, 4),
        ]
        broken = [
            conservation_sweep(cur.dirac_current, d, N_POINTS, 4),
            conservation_sweep(cur.kg_current, k, N_POINTS, 4),
        ]
        return ident, broken

    (ident, broken), dt = _timed(run)
    hi = max(r.relative_residual for r in ident)
    lo = min(r.relative_residual for r in broken)
    ok = hi <= 1e-9 and lo >= 1e-2
    return _report(4, "off-shell discrimination", ok,
                   f"bivectors {hi:.1e} (<= 1e-9), J and KG current {lo:.2f} (>= 1e-2)", dt, 10)


def criterion_5():
    def run():
        rng = np.random.default_rng(5)
        x = sample_points(N_POINTS, 5)
        worst_pt = 0.0
        for k, A in ((K, (0, 0, 0, 0)), (KE, A4)):
            jet = eval_jet(random_dirac_field(rng, _modes(rng), k, A_const=A), x)
            J = cur.dirac_current(jet, g=k.c)
            G, internal = cur.gordon_decomposition(jet, k, A)
            worst_pt = max(worst_pt, np.max(np.abs(J - G - internal)) / np.max(np.abs(J)))
        g0, rhs = cur.g0_reduction(eval_jet(random_dirac_field(rng, _modes(rng), K), x), K)
        red = np.max(np.abs(g0 - rhs)) / max(np.max(np.abs(g0)), 1)
        lat = random_dirac_field(rng, _modes(rng), K, box_length=BOX_LENGTH)
        P = global_charge(cur.dirac_current, lat)
        Pi = global_charge(lambda j: cur.gordon_decomposition(j)[1], lat)
        return worst_pt, red, abs(Pi) / abs(P)

    (pt, red, box), dt = _timed(run)
    ok = pt <= 1e-10 and red <= 1e-10 and box <= 1e-10
    return _report(5, "gordon", ok, f"pointwise {pt:.1e}, G0 reduction {red:.1e}, box internal {box:.1e} (<= 1e-10)",
                   dt, 10)


def criterion_6():
    def run():
        rd, rk = np.random.default_rng(61), np.random.default_rng(62)
        times = (0.0, 0.7, 1.5, 2.2, 3.0)
        drift = equal = 0.0
        for f in (random_dirac_field(rd, _modes(rd), K, box_length=BOX_LENGTH),
                  random_kg_field(rk, _modes(rk), K, box_length=BOX_LENGTH)):
            cs = charge_set(f)
            first = next(iter(cs.values()))
            P = np.array([global_charge(first, f, t) for t in times])
            drift = max(drift, np.max(np.abs(P - P[0])) / abs(P[0]))
            equal = max(equal, max(charge_equality(cs, f, t) for t in times) / abs(P[0]))
        return drift, equal

    (drift, equal), dt = _timed(run)
    ok = drift <= 1e-10 and equal <= 1e-9
    return _report(6, "global charge", ok, f"dP/dt {drift:.1e} (<= 1e-10), equality {equal:.1e} (<= 1e-9)", dt, 15)


def _dirac_oracle_rank(seed):
    # analytic divergence d_mu(psi^dag H psi) = 2 Re(psi^dag H d_mu psi), 4x samples
    H = hermitian_basis(build_standard_rep())
    rows = []
    for i, f in enumerate(uq.uniqueness_fields(DIRAC, 6, seed)):
        jet = eval_jet(f.scaled(1 / f.amplitude_norm()), sample_points(240, seed + i))
        d = 2 * np.einsum("na,qab,nmb->nmq", jet.value.conj(), H, jet.d1).real
        rows.append(np.concatenate([d, np.zeros((len(d), 4, 1))], axis=2).reshape(len(d), 68))
    s = np.linalg.svd(np.vstack(rows), compute_uv=False)
    return int(np.sum(s > 1e-8 * s[0]))


def criterion_7():
    def run():
        _, m, r = uq.dirac_certificate(seed=7)
        axial = uq.residual_ratio(m, uq.dirac_reference(axial=True))
        return r, axial, 68 - _dirac_oracle_rank(77)

    (r, axial, oracle_dim), dt = _timed(run)
    ok = r.dimension == 5 and oracle_dim == 5 and r.gap >= 1e3 and r.alignment >= 1 - 1e-8 and axial >= 0.1
    return _report(7, "uniqueness dirac", ok,
                   f"dim {r.dimension} (oracle {oracle_dim}), gap {r.gap:.1e}, 1-align {1 - r.alignment:.1e}, "
                   f"axial {axial:.2f}", dt, 20)


def criterion_8():
    def run():
        return [uq.kg_certificate(inv, seed=8)[2] for inv in (False, True)]

    reps, dt = _timed(run)
    ok = all(r.dimension == 10 and r.alignment >= 1 - 1e-8 for r in reps)
    dims = [r.dimension for r in reps]
    mis = max(1 - r.alignment for r in reps)
    return _report(8, "uniqueness klein-gordon", ok, f"dims {dims} (plain, invariants), 1-align {mis:.1e}", dt, 20)


def criterion_9():
    def run():
        c = uq.builtin_candidates()
        conv = uq.constraint_residuals(c["alpha"], n_spinors=500, seed=9)
        delta = uq.constraint_residuals(c["delta"], n_spinors=500, seed=9)
        ba = uq.constraint_residuals(c["beta_alpha"], n_spinors=500, seed=9)
        return conv, delta, ba

    (conv, delta, ba), dt = _timed(run)
    ok = max(conv) <= 1e-12 and max(delta) >= 0.1 and max(ba) >= 0.1
    return _report(9, "constraint relations", ok,
                   f"psi^dag psi {max(conv):.1e} (<= 1e-12), delta {max(delta):.2f}, beta*alpha {max(ba):.2f} (>= 0.1)",
                   dt, 5)


def criterion_10():
    def run():
        rng = np.random.default_rng(10)
        x = sample_points(N_POINTS, 10)
        f = random_dirac_field(rng, _modes(rng), K)
        lhs, rhs = cur.t00_rewrite(eval_jet(f, x))
        on = np.max(np.abs(lhs - rhs)) / max(np.max(np.abs(lhs)), 1)
        lo, ro = cur.t00_rewrite(eval_jet(offshell_variant(f, 10), x))
        off = np.max(np.abs(lo - ro)) / max(np.max(np.abs(lo)), 1)
        g = random_kg_field(rng, _modes(rng), K)
        cons, l0_ok, ll_ok = 0.0, True, True
        for i in range(5):
            v = rng.normal(size=3)
            v *= rng.uniform(0.0, 0.95) / np.linalg.norm(v)
            kvec = rng.uniform(0.5, 2.0) * np.concatenate([[1.0], v])
            c = partial(cur.kg_stress_current, k=kvec)
            cons = max(cons, conservation_sweep(c, g, N_POINTS, 10 + i).relative_residual)
            lv = c(eval_jet(g, sample_points(100, 20 + i))).real
            l0_ok &= bool(np.all(lv[:, 0] >= 0))
            ll_ok &= bool(np.all(np.einsum("nm,m,nm->n", lv, np.diag(METRIC), lv) >= 0))
        return on, off, cons, l0_ok and ll_ok

    (on, off, cons, causal), dt = _timed(run)
    ok = on <= 1e-10 and off >= 0.1 and cons <= 1e-9 and causal
    return _report(10, "stress", ok,
                   f"rewrite {on:.1e} (<= 1e-10), off-shell {off:.2f}, k.T divergence {cons:.1e}, "
                   f"future-causal over 500 samples {causal}", dt, 10)


def criterion_11(tmp_dir):
    def run():
        paths = [f"{tmp_dir}/a.json", f"{tmp_dir}/b.json"]
        codes = [cli_main(["--suite", "all", "--seed", "11", "--json", p, "--format", "json"]) for p in paths]
        with open(paths[0], "rb") as fa, open(paths[1], "rb") as fb:
            return codes, fa.read() == fb.read()

    (codes, same), dt = _timed(run)
    ok = same and codes == [0, 0]
    return _report(11, "determinism", ok, f"byte-identical JSON {same}, exit codes {codes}", dt, 120)


CRITERIA = [criterion_1, criterion_2, criterion_3, criterion_4, criterion_5, criterion_6,
            criterion_7, criterion_8, criterion_9, criterion_10]


@pytest.mark.parametrize("criterion", CRITERIA, ids=[f"criterion_{i + 1}" for i in range(len(CRITERIA))])
def test_criterion(criterion):
    ok, line = criterion()
    assert ok, line


def test_criterion_11_determinism(tmp_path):
    ok, line = criterion_11(tmp_path)
    assert ok, line


if __name__ == "__main__":
    import contextlib
    import io
    import tempfile

    results = [c()[0] for c in CRITERIA]
    with tempfile.TemporaryDirectory() as d, contextlib.redirect_stdout(io.StringIO()) as buf:
        ok11, line11 = criterion_11(d)
    print(line11)
    results.append(ok11)
    print(f"{sum(results)}/{len(results)} criteria passed")
    sys.exit(0 if all(results) else 1)
