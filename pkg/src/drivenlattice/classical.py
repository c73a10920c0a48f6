"""Classical driven-pendulum dynamics and stroboscopic Poincare sections.

Hamiltonian (scaled units, drive period 2 pi):

    H = p^2/2 + (kappa/2) cos 2z + lambda z sin tau

kappa is a direct input: kappa = V' reproduces the published phase-space
panels, kappa = V' kbar^2 / 2 is the classical limit matching the quantum
module's tau-time scaling.  Integration is second-order symplectic
kick-drift-kick with the time-dependent force evaluated at the half-step
time, so stroboscopic samples at integer drive periods never drift.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

try:
    from numba import njit
except ImportError:  # pragma: no cover - numba is a hard dependency in practice
    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f

__all__ = [
    "ClassicalParams",
    "PoincareSection",
    "NonLibratingError",
    "integrate",
    "poincare",
    "orbit_frequency",
    "strobe_map",
    "find_period1_point",
    "libration_fraction",
    "resonance_energy",
    "fold",
]


class NonLibratingError(ValueError):
    """Orbit is rotating or on the separatrix; no libration frequency exists."""


WELL_CENTRE = math.pi / 2  # minimum of (kappa/2) cos 2z


@dataclass(frozen=True)
class ClassicalParams:
    kappa: float
    lam: float = 0.0
    dt: float = 2.0 * math.pi / 1000.0

    def __post_init__(self):
        if self.dt <= 0:
            raise ValueError("dt must be positive")
        n = 2.0 * math.pi / self.dt
        if abs(n - round(n)) > 1e-9:
            raise ValueError("dt must divide 2 pi exactly (stroboscopic alignment)")

    @property
    def steps_per_period(self) -> int:
        return int(round(2.0 * math.pi / self.dt))


@dataclass
class PoincareSection:
    seed_ids: np.ndarray
    period_indices: np.ndarray
    z: np.ndarray
    p: np.ndarray
    kappa: float
    lam: float
    tags: list[str] = field(default_factory=list)


def fold(z: np.ndarray | float) -> np.ndarray | float:
    """Fold z mod pi into [-pi/2, pi/2); H is pi-periodic in z."""
    return (np.asarray(z) + math.pi / 2) % math.pi - math.pi / 2


@njit(cache=True)
def _step_chunk(z, p, t, dt, nsteps, kappa, lam):
    for _ in range(nsteps):
        smid = math.sin(t + 0.5 * dt)
        p += 0.5 * dt * (kappa * math.sin(2.0 * z) - lam * smid)
        z += dt * p
        p += 0.5 * dt * (kappa * math.sin(2.0 * z) - lam * smid)
        t += dt
    return z, p, t


@njit(cache=True)
def _trajectory(z0, p0, dt, nsteps, kappa, lam, stride):
    nrec = nsteps // stride
    out = np.empty((nrec, 3))
    z, p, t = z0, p0, 0.0
    for i in range(nrec):
        z, p, t = _step_chunk(z, p, t, dt, stride, kappa, lam)
        out[i, 0] = t
        out[i, 1] = z
        out[i, 2] = p
    return out


def integrate(initial: tuple[float, float], params: ClassicalParams,
              n_periods: int, record_stride: int | None = None) -> np.ndarray:
    """Integrate one trajectory for n_periods; rows are (tau, z, p).

    record_stride is in integrator steps (default: one record per period).
    """
    spp = params.steps_per_period
    stride = spp if record_stride is None else record_stride
    nsteps = spp * n_periods
    return _trajectory(float(initial[0]), float(initial[1]), params.dt,
                       nsteps, params.kappa, params.lam, stride)


def integrate_back(state: tuple[float, float], t_start: float,
                   params: ClassicalParams, n_steps: int) -> tuple[float, float]:
    """Step backwards in time (reversibility checks)."""
    z, p, t = float(state[0]), float(state[1]), float(t_start)
    dt = -params.dt
    for _ in range(n_steps):
        smid = math.sin(t + 0.5 * dt)
        p += 0.5 * dt * (params.kappa * math.sin(2.0 * z) - params.lam * smid)
        z += dt * p
        p += 0.5 * dt * (params.kappa * math.sin(2.0 * z) - params.lam * smid)
        t += dt
    return z, p


def energy(z, p, kappa) -> float:
    return p**2 / 2.0 + (kappa / 2.0) * np.cos(2.0 * np.asarray(z))


def poincare(seeds, params: ClassicalParams, n_periods: int,
             threads: int = 1) -> PoincareSection:
    """Stroboscopic section: (z folded, p) at tau = 2 pi m, m = 1..n_periods.

    Seeds are integrated independently (optionally across threads); output
    ordering always follows seed index, never completion order.
    """
    seeds = np.atleast_2d(np.asarray(seeds, dtype=float))
    nseeds = len(seeds)
    seed_ids = np.repeat(np.arange(nseeds), n_periods)
    period_idx = np.tile(np.arange(1, n_periods + 1), nseeds)
    zs = np.empty(nseeds * n_periods)
    ps = np.empty(nseeds * n_periods)

    def run_one(i):
        z0, p0 = seeds[i]
        return integrate((z0, p0), params, n_periods)

    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=threads) as ex:
            trajs = list(ex.map(run_one, range(nseeds)))
    else:
        trajs = [run_one(i) for i in range(nseeds)]
    for i, traj in enumerate(trajs):
        zs[i * n_periods:(i + 1) * n_periods] = traj[:, 1]
        ps[i * n_periods:(i + 1) * n_periods] = traj[:, 2]
    return PoincareSection(seed_ids, period_idx, np.asarray(fold(zs)), ps,
                           params.kappa, params.lam)


def orbit_frequency(initial: tuple[float, float], params: ClassicalParams,
                    min_crossings: int = 50) -> float:
    """Libration frequency of an undriven orbit from well-centre crossings.

    Requires lambda = 0 and energy below the separatrix; the frequency is the
    mean upward-crossing interval of z through the well centre, interpolated
    between steps.  Integration extends in chunks until min_crossings
    intervals have been collected (near-separatrix orbits are slow).
    """
    if params.lam != 0.0:
        raise ValueError("orbit_frequency is defined for the undriven system")
    e = energy(initial[0], initial[1], params.kappa)
    if e >= params.kappa / 2.0:
        raise NonLibratingError("energy at or above the separatrix")
    centre = WELL_CENTRE + math.pi * round((initial[0] - WELL_CENTRE) / math.pi)
    t_bottom = 2.0 * math.pi / math.sqrt(2.0 * params.kappa)
    chunk = max(4, int(math.ceil((min_crossings + 2) * t_bottom / (2.0 * math.pi))))
    t_cross: list[float] = []
    z, p, t = float(initial[0]), float(initial[1]), 0.0
    for _ in range(64):
        traj = _trajectory(z, p, params.dt, chunk * params.steps_per_period,
                           params.kappa, params.lam, 1)
        x = traj[:, 1] - centre
        if np.any(np.abs(x) > math.pi / 2):
            raise NonLibratingError("trajectory left the well")
        up = np.where((x[:-1] < 0) & (x[1:] >= 0))[0]
        frac = x[up] / (x[up] - x[up + 1])
        t_cross.extend(t + traj[up, 0] + frac * params.dt)
        z, p, t = traj[-1, 1], traj[-1, 2], t + traj[-1, 0]
        if len(t_cross) >= min_crossings + 1:
            break
    if len(t_cross) < 2:
        raise NonLibratingError("too few well-centre crossings")
    intervals = np.diff(np.asarray(t_cross))
    return 2.0 * math.pi / float(np.mean(intervals))


def strobe_map(state: tuple[float, float], params: ClassicalParams,
               phase: float = 0.0) -> np.ndarray:
    """One-period stroboscopic map starting at drive phase tau = phase."""
    z, p, t = float(state[0]), float(state[1]), float(phase)
    z, p, _ = _step_chunk(z, p, t, params.dt, params.steps_per_period,
                          params.kappa, params.lam)
    return np.array([z, p])


def find_period1_point(guess: tuple[float, float], params: ClassicalParams,
                       tol: float = 1e-10, max_iter: int = 60) -> tuple[np.ndarray, float]:
    """Newton iteration for a period-1 fixed point of the stroboscopic map.

    Returns (point, residual).  The 1:1 resonance centre is the stable such
    point away from the unperturbed equilibria.
    """
    x = np.asarray(guess, dtype=float)
    res = math.inf
    for _ in range(max_iter):
        fx = strobe_map(x, params) - x
        res = float(np.hypot(*fx))
        if res < tol:
            break
        eps = 1e-7
        jac = np.empty((2, 2))
        for j in range(2):
            dx = np.zeros(2)
            dx[j] = eps
            jac[:, j] = (strobe_map(x + dx, params) - (x + dx) - fx) / eps
        try:
            x = x - np.linalg.solve(jac, fx)
        except np.linalg.LinAlgError:
            break
    return x, res


def libration_fraction(seeds, params: ClassicalParams, n_periods: int) -> float:
    """Fraction of seeds whose orbit stays librating inside its starting well.

    Cheap island-size diagnostic: growth of the stochastic layer converts
    librating seeds into wandering ones.
    """
    seeds = np.atleast_2d(np.asarray(seeds, dtype=float))
    bound = 0
    for z0, p0 in seeds:
        traj = integrate((z0, p0), params, n_periods,
                         record_stride=max(1, params.steps_per_period // 16))
        centre = WELL_CENTRE + math.pi * round((z0 - WELL_CENTRE) / math.pi)
        if np.all(np.abs(traj[:, 1] - centre) <= math.pi / 2):
            bound += 1
    return bound / len(seeds)


def resonance_energy(kappa: float, omega_target: float = 1.0,
                     tol: float = 1e-6) -> float:
    """Energy at which the undriven libration frequency equals omega_target.

    Bisection over the turning-point amplitude; the pendulum frequency falls
    monotonically from sqrt(2 kappa) at the bottom to zero at the separatrix.
    """
    omega0 = math.sqrt(2.0 * kappa)
    if not 0.0 < omega_target < omega0:
        raise ValueError("target frequency outside (0, sqrt(2 kappa))")
    params = ClassicalParams(kappa=kappa, lam=0.0, dt=2.0 * math.pi / 2000)

    def freq_at_amplitude(amp):
        return orbit_frequency((WELL_CENTRE + amp, 0.0), params, min_crossings=8)

    lo, hi = 1e-3, math.pi / 2 - 1e-3
    for _ in range(60):
        mid = 0.5 * (lo + hi)
        if freq_at_amplitude(mid) > omega_target:
            lo = mid
        else:
            hi = mid
        if math.fabs(energy(WELL_CENTRE + hi, 0.0, kappa) -
                     energy(WELL_CENTRE + lo, 0.0, kappa)) < tol:
            break
    amp = 0.5 * (lo + hi)
    return float(energy(WELL_CENTRE + amp, 0.0, kappa))
