"""Split-operator propagation of the driven-lattice wavefunction.

The tau-time equation integrated here is

    i kbar d_tau psi = [ -(kbar^2/2) d2/dz2 + q0 kbar^2 cos 2z
                         + lambda z sin tau  (+ 4 G kbar^2 rho) ] psi,

with rho the density normalised to unit spatial average.  The lattice
amplitude q0 kbar^2 is the unique choice under which the undriven stationary
problem is the Mathieu equation with parameter q0 = V'/4 in recoil units.
The interaction coefficient 4 G kbar^2 makes the linear-response screening of
the lattice by the mean field reproduce V' = V0/(1 + 4G) exactly.

The linear drive term lambda z sin tau is incompatible with periodic
boundaries; it is implemented in the vector-potential gauge

    A(tau) = lambda (cos tau - 1),     psi = exp(+i A z / kbar) phi,

which keeps the Hamiltonian spatially periodic: the kinetic factor becomes
(kbar k + A)^2 / (2 kbar) and A vanishes at stroboscopic times.  (The sign
pairing is fixed by the +lambda z sin tau drive; flipping A's sign instead
would propagate the opposite drive phase.)  Snapshots
and overlaps are gauge-restored before storage.  A direct-term integrator on
a large box is retained as a test oracle only.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .units import ScaledParams

__all__ = [
    "Grid",
    "Wavefunction",
    "EvolutionRecord",
    "GridTooSmallError",
    "StepTooLargeError",
    "NormDriftError",
    "init_gaussian",
    "evolve",
    "evolve_direct",
    "relax_ground_state",
    "autocorrelation",
    "density_map",
]

NORM_TOL = 1e-9


class GridTooSmallError(ValueError):
    pass


class StepTooLargeError(ValueError):
    pass


class NormDriftError(RuntimeError):
    pass


@dataclass(frozen=True)
class Grid:
    length: float = 32.0 * math.pi
    points: int = 2048

    def __post_init__(self):
        n = self.length / math.pi
        if abs(n - round(n)) > 1e-9:
            raise ValueError("grid length must be an integer multiple of pi")
        if self.points < 2 or self.points & (self.points - 1):
            raise ValueError("grid points must be a power of two")

    @property
    def dz(self) -> float:
        return self.length / self.points

    @property
    def z(self) -> np.ndarray:
        return np.arange(self.points) * self.dz - self.length / 2.0

    @property
    def wavenumbers(self) -> np.ndarray:
        return 2.0 * np.pi * np.fft.fftfreq(self.points, d=self.dz)


@dataclass
class Wavefunction:
    grid: Grid
    amplitudes: np.ndarray
    time: float = 0.0
    gauge_momentum: float = 0.0
    kbar: float = 1.0

    def norm_sq(self) -> float:
        return float(np.sum(np.abs(self.amplitudes) ** 2) * self.grid.dz)


@dataclass
class EvolutionRecord:
    grid: Grid
    snapshot_times: np.ndarray
    densities: np.ndarray          # (n_snapshots, points)
    overlap_times: np.ndarray
    overlaps: np.ndarray           # complex <psi(0)|psi(tau)>, gauge-restored
    metadata: dict = field(default_factory=dict)
    final_state: Wavefunction | None = None


def init_gaussian(grid: Grid, z0: float, p0: float, delta_p: float,
                  kbar: float) -> Wavefunction:
    """Minimum-uncertainty Gaussian: momentum width delta_p, Delta z = kbar/(2 delta_p)."""
    if delta_p <= 0:
        raise ValueError("delta_p must be positive")
    dz_width = kbar / (2.0 * delta_p)
    if dz_width > grid.length / 8.0:
        raise GridTooSmallError(
            f"packet width {dz_width:g} exceeds L/8 = {grid.length / 8.0:g}")
    z = grid.z
    psi = np.exp(-((z - z0) ** 2) / (4.0 * dz_width**2)
                 + 1j * p0 * (z - z0) / kbar)
    psi /= math.sqrt(float(np.sum(np.abs(psi) ** 2) * grid.dz))
    return Wavefunction(grid=grid, amplitudes=psi.astype(complex), time=0.0,
                        gauge_momentum=0.0, kbar=kbar)


def _check_step(dt: float, vmax: float, kbar: float) -> None:
    if dt > 2.0 * math.pi / 200.0 + 1e-15:
        raise StepTooLargeError("dt must satisfy dt <= 2 pi / 200")
    if dt * vmax / kbar > math.pi:
        raise StepTooLargeError(
            f"dt * max|V| / kbar = {dt * vmax / kbar:g} > pi; reduce dt")


def evolve(psi: Wavefunction, scaled: ScaledParams, tau_end: float,
           dt: float = 2.0 * math.pi / 256.0, snapshot_stride: int = 16,
           with_interaction: bool = False) -> EvolutionRecord:
    """Strang-split propagation in the vector-potential gauge.

    snapshot_stride is in integrator steps.  Overlaps with the initial state
    are recorded every step; snapshots (densities) every stride, both
    gauge-restored so they live in the lab-scaled frame.
    """
    grid = psi.grid
    kbar = psi.kbar
    lam = scaled.lambda_drive
    # interacting runs carry the bare lattice plus the explicit mean-field
    # term; the screening V' = V0/(1+4G) then emerges instead of being input
    q0 = scaled.lattice_depth_recoil / 4.0 if with_interaction else scaled.q0
    G = scaled.interaction_G if with_interaction else 0.0
    z = grid.z
    dzg = grid.dz
    k = grid.wavenumbers
    vlat = q0 * kbar**2 * np.cos(2.0 * z)
    vmax = float(np.max(np.abs(vlat)))
    if with_interaction:
        vmax += 4.0 * G * kbar**2 * grid.length * float(np.max(np.abs(psi.amplitudes) ** 2))
    _check_step(dt, vmax, kbar)

    steps = int(round(tau_end / dt))
    phi = psi.amplitudes.copy()
    psi0_conj = psi.amplitudes.conj()
    norm0 = float(np.sum(np.abs(phi) ** 2) * dzg)

    exp_lat = np.exp(-0.5j * dt * vlat / kbar)
    overlaps = np.empty(steps + 1, dtype=complex)
    overlaps[0] = np.sum(psi0_conj * phi) * dzg
    overlap_times = np.arange(steps + 1) * dt
    snap_idx = list(range(0, steps + 1, snapshot_stride))
    densities = np.empty((len(snap_idx), grid.points))
    snap_times = np.empty(len(snap_idx))
    densities[0] = np.abs(phi) ** 2
    snap_times[0] = 0.0
    isnap = 1

    def half_potential(phi):
        if with_interaction:
            rho_unit = grid.length * np.abs(phi) ** 2
            return phi * exp_lat * np.exp(-0.5j * dt * 4.0 * G * kbar**2 * rho_unit / kbar)
        return phi * exp_lat

    for s in range(steps):
        tau_mid = (s + 0.5) * dt
        a_mid = lam * (math.cos(tau_mid) - 1.0)
        phi = half_potential(phi)
        phik = np.fft.fft(phi)
        phik *= np.exp(-1j * dt * (kbar * k + a_mid) ** 2 / (2.0 * kbar))
        phi = np.fft.ifft(phik)
        phi = half_potential(phi)
        tau = (s + 1) * dt
        a_now = lam * (math.cos(tau) - 1.0)
        restore = np.exp(1j * a_now * z / kbar)
        overlaps[s + 1] = np.sum(psi0_conj * restore * phi) * dzg
        if isnap < len(snap_idx) and s + 1 == snap_idx[isnap]:
            densities[isnap] = np.abs(phi) ** 2
            snap_times[isnap] = tau
            isnap += 1
    norm = float(np.sum(np.abs(phi) ** 2) * dzg)
    if abs(norm - norm0) > NORM_TOL:
        raise NormDriftError(f"norm drifted by {abs(norm - norm0):g}")

    a_end = lam * (math.cos(steps * dt) - 1.0)
    final = Wavefunction(grid=grid, amplitudes=np.exp(1j * a_end * z / kbar) * phi,
                         time=steps * dt, gauge_momentum=a_end, kbar=kbar)
    meta = {
        "kbar": kbar, "q0": q0, "lambda": lam, "G": G,
        "with_interaction": with_interaction, "dt": dt, "tau_end": steps * dt,
        "grid_length": grid.length, "grid_points": grid.points,
        "snapshot_stride": snapshot_stride,
    }
    return EvolutionRecord(grid=grid, snapshot_times=snap_times, densities=densities,
                           overlap_times=overlap_times, overlaps=overlaps,
                           metadata=meta, final_state=final)


def evolve_direct(psi: Wavefunction, scaled: ScaledParams, tau_end: float,
                  dt: float = 2.0 * math.pi / 256.0) -> Wavefunction:
    """Direct lambda*z*sin(tau) potential-term integrator.

    Test oracle only: breaks spatial periodicity at the box edge, so it is
    valid while the packet stays far from the boundary (use a box several
    times larger than the gauge run).
    """
    grid = psi.grid
    kbar = psi.kbar
    z = grid.z
    k = grid.wavenumbers
    vlat = scaled.q0 * kbar**2 * np.cos(2.0 * z)
    steps = int(round(tau_end / dt))
    phi = psi.amplitudes.copy()
    exp_kin = np.exp(-1j * dt * kbar * k**2 / 2.0)
    for s in range(steps):
        tau_mid = (s + 0.5) * dt
        v = vlat + scaled.lambda_drive * z * math.sin(tau_mid)
        phi = phi * np.exp(-0.5j * dt * v / kbar)
        phi = np.fft.ifft(exp_kin * np.fft.fft(phi))
        phi = phi * np.exp(-0.5j * dt * v / kbar)
    return Wavefunction(grid=grid, amplitudes=phi, time=steps * dt,
                        gauge_momentum=0.0, kbar=kbar)


def relax_ground_state(grid: Grid, scaled: ScaledParams, kbar: float,
                       with_interaction: bool = False, dtau: float = 0.01,
                       steps: int = 4000, seed_state: np.ndarray | None = None
                       ) -> Wavefunction:
    """Imaginary-time relaxation to the lattice ground state (renormalised)."""
    z = grid.z
    k = grid.wavenumbers
    q0 = scaled.lattice_depth_recoil / 4.0 if with_interaction else scaled.q0
    vlat = q0 * kbar**2 * np.cos(2.0 * z)
    G = scaled.interaction_G if with_interaction else 0.0
    phi = (np.ones(grid.points, complex) if seed_state is None
           else seed_state.astype(complex))
    phi /= math.sqrt(float(np.sum(np.abs(phi) ** 2) * grid.dz))
    exp_kin = np.exp(-dtau * kbar * k**2 / 2.0)
    for _ in range(steps):
        v = vlat + (4.0 * G * kbar**2 * grid.length * np.abs(phi) ** 2
                    if with_interaction else 0.0)
        phi = phi * np.exp(-0.5 * dtau * v / kbar)
        phi = np.fft.ifft(exp_kin * np.fft.fft(phi))
        phi = phi * np.exp(-0.5 * dtau * v / kbar)
        phi /= math.sqrt(float(np.sum(np.abs(phi) ** 2) * grid.dz))
    return Wavefunction(grid=grid, amplitudes=phi, time=0.0,
                        gauge_momentum=0.0, kbar=kbar)


def autocorrelation(record: EvolutionRecord):
    """|<psi(0)|psi(tau)>|^2 series from a recorded evolution."""
    from .analysis import AutocorrelationSeries

    mag = np.abs(record.overlaps) ** 2
    if np.any(mag > 1.0 + 1e-10):
        raise NormDriftError("overlap magnitude exceeded 1 beyond rounding")
    return AutocorrelationSeries(times=record.overlap_times.copy(), values=mag,
                                 metadata=dict(record.metadata))


def density_map(record: EvolutionRecord) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """(times, z, density matrix) for spatio-temporal heatmaps."""
    return record.snapshot_times, record.grid.z, record.densities
