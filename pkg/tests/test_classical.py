"""Symplectic integrator and Poincare-section tests."""

import math

import numpy as np
import pytest

from drivenlattice import classical

WELL = classical.WELL_CENTRE


def test_dt_must_divide_two_pi():
    with pytest.raises(ValueError):
        classical.ClassicalParams(kappa=2.0, dt=0.01)
    classical.ClassicalParams(kappa=2.0, dt=2 * math.pi / 1000)


def test_equilibrium_is_fixed_point():
    params = classical.ClassicalParams(kappa=2.0, lam=0.0)
    traj = classical.integrate((WELL, 0.0), params, 5)
    assert np.max(np.abs(traj[:, 1] - WELL) + np.abs(traj[:, 2])) < 1e-12


def test_energy_no_secular_drift():
    # symplectic property: the fitted energy trend over 1e4 drive periods is
    # flat; the bounded O(dt^2) oscillation is not drift
    params = classical.ClassicalParams(kappa=2.0, lam=0.0)
    traj = classical.integrate((WELL + 0.5, 0.0), params, 10_000, record_stride=100)
    e = classical.energy(traj[:, 1], traj[:, 2], 2.0)
    slope = np.polyfit(traj[:, 0], e, 1)[0]
    drift = abs(slope) * (traj[-1, 0] - traj[0, 0]) / 1.0  # scale: well depth
    assert drift < 1e-8


def test_energy_conservation_small_dt():
    # instantaneous conservation at the acceptance-grade step; errors are
    # measured against the well-depth scale kappa/2 (orbit energies cross 0)
    params = classical.ClassicalParams(kappa=2.0, lam=0.0, dt=2 * math.pi / 65536)
    traj = classical.integrate((WELL + 0.7, 0.3), params, 20, record_stride=64)
    e0 = classical.energy(WELL + 0.7, 0.3, 2.0)
    e = classical.energy(traj[:, 1], traj[:, 2], 2.0)
    assert np.max(np.abs(e - e0)) / max(abs(e0), 1.0) < 1e-8


def test_reversibility():
    params = classical.ClassicalParams(kappa=2.0, lam=0.7)
    n_steps = 3 * params.steps_per_period
    traj = classical.integrate((WELL + 0.4, 0.1), params, 3, record_stride=n_steps)
    zb, pb = classical.integrate_back((traj[-1, 1], traj[-1, 2]), traj[-1, 0],
                                      params, n_steps)
    assert abs(zb - (WELL + 0.4)) < 1e-10
    assert abs(pb - 0.1) < 1e-10


def test_poincare_structure_and_folding():
    params = classical.ClassicalParams(kappa=2.0, lam=0.0)
    seeds = [(WELL + 0.3, 0.0), (WELL, 0.8)]
    sec = classical.poincare(seeds, params, 50)
    assert len(sec.z) == len(seeds) * 50
    assert np.all(sec.z >= -math.pi / 2) and np.all(sec.z < math.pi / 2)
    # folding preserves p and the energy of each sample (default-step accuracy)
    for sid, (z0, p0) in enumerate(seeds):
        m = sec.seed_ids == sid
        e = classical.energy(sec.z[m], sec.p[m], 2.0)
        assert np.max(np.abs(e - classical.energy(z0, p0, 2.0))) < 1e-4


def test_sections_on_energy_contours_undriven():
    params = classical.ClassicalParams(kappa=2.0, lam=0.0, dt=2 * math.pi / 65536)
    seeds = [(WELL + 0.2, 0.0), (WELL + 0.9, 0.0), (WELL, 1.2)]
    sec = classical.poincare(seeds, params, 30)
    for sid, (z0, p0) in enumerate(seeds):
        m = sec.seed_ids == sid
        e = classical.energy(sec.z[m], sec.p[m], 2.0)
        assert np.max(np.abs(e - classical.energy(z0, p0, 2.0))) < 1e-8


def test_orbit_frequency_small_amplitude():
    params = classical.ClassicalParams(kappa=2.0, lam=0.0)
    w = classical.orbit_frequency((WELL + 0.01, 0.0), params)
    assert w == pytest.approx(math.sqrt(4.0), rel=0.01)


def test_orbit_frequency_jitter():
    params = classical.ClassicalParams(kappa=2.0, lam=0.0)
    w1 = classical.orbit_frequency((WELL + 0.6, 0.0), params, min_crossings=30)
    w2 = classical.orbit_frequency((WELL + 0.6, 0.0), params, min_crossings=80)
    assert abs(w1 - w2) / w1 < 1e-4


def test_orbit_frequency_rejects_rotation():
    params = classical.ClassicalParams(kappa=2.0, lam=0.0)
    with pytest.raises(classical.NonLibratingError):
        classical.orbit_frequency((WELL, 2.5), params)


def test_separatrix_slowdown():
    params = classical.ClassicalParams(kappa=2.0, lam=0.0)
    w_mid = classical.orbit_frequency((WELL + 1.0, 0.0), params, min_crossings=10)
    w_near = classical.orbit_frequency((WELL + 1.53, 0.0), params, min_crossings=6)
    assert w_near < w_mid < 2.0


def test_resonance_energy_bisection():
    e_res = classical.resonance_energy(2.0, omega_target=1.0)
    assert -1.0 < e_res < 1.0
    # the orbit at that energy indeed librates at the drive frequency;
    # turning point: (kappa/2) cos 2(WELL + d) = e  =>  cos 2d = -e
    delta = 0.5 * math.acos(min(1.0, max(-1.0, -e_res)))
    params = classical.ClassicalParams(kappa=2.0, lam=0.0)
    w = classical.orbit_frequency((WELL + delta, 0.0), params, min_crossings=10)
    assert w == pytest.approx(1.0, abs=5e-3)


def test_period1_fixed_point_driven():
    params = classical.ClassicalParams(kappa=2.0, lam=0.5)
    fp, res = classical.find_period1_point((WELL, -0.15), params)
    assert res < 1e-6
    # genuinely period-1: mapping once returns the point
    img = classical.strobe_map(fp, params)
    assert np.hypot(*(img - fp)) < 1e-6


def test_stochastic_layer_grows_with_drive():
    seeds = [(WELL + a, 0.0) for a in np.linspace(0.1, 1.4, 8)]
    seeds += [(WELL, p) for p in np.linspace(0.2, 1.8, 8)]
    f_weak = classical.libration_fraction(
        seeds, classical.ClassicalParams(2.0, 0.5, dt=2 * math.pi / 1000), 150)
    f_strong = classical.libration_fraction(
        seeds, classical.ClassicalParams(2.0, 1.5, dt=2 * math.pi / 1000), 150)
    assert f_strong < f_weak
