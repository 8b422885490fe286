from functools import partial

import numpy as np
import pytest

from current_forge import currents as cur
from current_forge.solution_factory import (
    DIRAC,
    KLEIN_GORDON,
    PhysicalConstants,
    WaveField,
    dirac_plane_wave,
    kg_plane_wave,
    offshell_variant,
    random_dirac_field,
    random_kg_field,
)
from current_forge.verify import (
    BOX_LENGTH,
    SweepReport,
    VerificationError,
    charge_equality,
    charge_set,
    conservation_sweep,
    divergence_at,
    global_charge,
    offshell_discrimination,
    registered_currents,
    sample_points,
)

L3 = BOX_LENGTH**3


def test_divergence_of_polynomial_current(rng):
    f = random_dirac_field(rng, 2)
    x = sample_points(10, 0)
    np.testing.assert_allclose(divergence_at(lambda jet: jet.x**2, f, x), 2 * x.sum(axis=1), atol=1e-10)
    const = divergence_at(lambda jet: np.ones(jet.x.shape), f, x)
    np.testing.assert_array_equal(const, 0.0)


def test_divergence_keeps_extra_axes(rng):
    f = random_dirac_field(rng, 2)
    d = divergence_at(lambda jet: np.stack([jet.x, 2 * jet.x], axis=-2), f, sample_points(3, 1))
    assert d.shape == (3, 2)
    np.testing.assert_allclose(d, [[4, 8]] * 3, rtol=1e-12)


def test_stencil_failure(rng):
    f = random_dirac_field(rng, 2)
    with pytest.raises(VerificationError, match="stencil evaluation failed"):
        divergence_at(lambda jet: np.full(jet.x.shape, np.nan), f, np.zeros(4))


def test_sweep_on_and_off_shell(rng):
    f = random_dirac_field(rng, 4)
    on = conservation_sweep(cur.dirac_current, f, 200, 42)
    assert on.passed and on.n_points == 200
    assert on.max_residual <= 1e-9 * max(on.scale, 1)
    off = conservation_sweep(cur.dirac_current, offshell_variant(f, 42), 200, 42)
    assert not off.passed
    assert off.relative_residual >= 1e-2


def test_sweep_with_constant_h(rng):
    f = random_dirac_field(rng, 4)
    rep = conservation_sweep(partial(cur.dirac_current, h=(1, 2, 3, 4)), f, 50, 42)
    assert rep.passed


def test_sweep_rejects_empty():
    with pytest.raises(ValueError):
        conservation_sweep(cur.dirac_current, WaveField(DIRAC, ()), 0, 0)


def test_sweep_report_pass_rule():
    r = SweepReport("j", "f", 1, max_residual=5e-10, scale=0.1, tolerance=1e-9)
    assert r.passed  # scale floored at 1
    r = SweepReport("j", "f", 1, max_residual=5e-9, scale=2.0, tolerance=1e-9)
    assert not r.passed
    assert r.to_dict()["pass"] is False


def test_sweep_deterministic(rng):
    f = random_kg_field(rng, 5)
    assert conservation_sweep(cur.kg_current, f, 30, 9) == conservation_sweep(cur.kg_current, f, 30, 9)


def test_rest_mode_charges():
    f = WaveField(DIRAC, (dirac_plane_wave([0, 0, 0], box_length=BOX_LENGTH),), box_length=BOX_LENGTH)
    np.testing.assert_allclose(global_charge(cur.dirac_current, f), L3, rtol=1e-14)
    g = WaveField(KLEIN_GORDON, (kg_plane_wave([0, 0, 0], box_length=BOX_LENGTH),), box_length=BOX_LENGTH)
    np.testing.assert_allclose(global_charge(partial(cur.kg_current, g=0.5j), g), L3, rtol=1e-14)


def test_charge_conservation_and_equality(rng):
    f = random_dirac_field(rng, 6, box_length=BOX_LENGTH)
    P = [global_charge(cur.dirac_current, f, t) for t in (0.0, 1.0, 3.0)]
    assert abs(P[0].imag) <= 1e-12 * abs(P[0])
    np.testing.assert_allclose(P, P[0], rtol=1e-10)
    cs = charge_set(f)
    assert charge_equality(cs, f, 1.0) <= 1e-9 * abs(P[0])
    # a bivector term rides along with J without changing its charge
    cs["J+bivector"] = lambda jet: cur.dirac_current(jet) + cur.bivector_current(jet, k=3.0 - 2j)
    assert charge_equality(cs, f, 1.0) <= 1e-9 * abs(P[0])


def test_kg_charge_equality(rng):
    f = random_kg_field(rng, 6, PhysicalConstants(m=0.9), box_length=BOX_LENGTH)
    P = global_charge(partial(cur.kg_current, constants=f.constants), f)
    assert charge_equality(charge_set(f), f, 2.0) <= 1e-9 * abs(P)


def test_quadrature_exact_above_band_limit(rng):
    f = random_dirac_field(rng, 5, box_length=BOX_LENGTH, max_index=3)
    a = global_charge(cur.dirac_current, f, 0.5, 8)
    b = global_charge(cur.dirac_current, f, 0.5, 16)
    assert abs(a - b) <= 1e-12 * abs(b)


def test_aliased_quadrature(rng):
    f = random_dirac_field(rng, 5, box_length=BOX_LENGTH, max_index=4)
    n = 2 * f.max_lattice_index() + 1
    with pytest.raises(VerificationError, match="aliased quadrature"):
        global_charge(cur.dirac_current, f, 0.0, n)
    with pytest.raises(VerificationError):
        global_charge(cur.dirac_current, random_dirac_field(rng, 2))


def test_offshell_discrimination(rng):
    rows = {r.current: r for r in offshell_discrimination(random_dirac_field(rng, 5), seed=3, n_points=60)}
    assert rows["bivector_current"].identically_conserved
    for name in ("dirac_current", "convective", "dirac_second_order"):
        assert rows[name].on_shell.passed and not rows[name].off_shell.passed
    rows = {r.current: r for r in offshell_discrimination(random_kg_field(rng, 5), seed=3, n_points=60)}
    assert rows["kg_bivector_current"].identically_conserved
    assert rows["kg_current"].on_shell.passed and not rows["kg_current"].off_shell.passed
    assert offshell_discrimination(random_kg_field(rng, 2), 0, currents={}) == []


def test_registered_currents_cover_equations(rng):
    f = random_dirac_field(rng, 2, PhysicalConstants(e=0.5), A_const=(0, 0, 0, 1))
    assert "dirac_second_order" not in registered_currents(f)
    assert set(registered_currents(random_kg_field(rng, 2))) == {
        "kg_current", "kg_bivector_current", "kg_second_order", "kg_stress_current"
    }
