"""Laboratory to dimensionless parameter conversions for the driven lattice.

Scalings, with k_L = 2 pi / lattice_wavelength and d_L = lattice_wavelength / 2:

    recoil frequency   omega_r = hbar k_L^2 / (2 M)
    recoil energy      E_r     = hbar omega_r = hbar^2 pi^2 / (2 M d_L^2)
    rescaled Planck    kbar    = 2 omega_r / omega_m
    drive amplitude    lambda  = k_L * DeltaL
    effective depth    Vprime  = V0 / (1 + 4 G)      (depths in E_r)
    crystal parameter  q0      = Vprime / 4          (Mathieu parameter)

The interaction strength G is a direct input knob; optionally it derives from
a transverse-trap record via g_1D = hbar k_L omega_perp a_s and
G = g_1D n0 kbar / (hbar omega_m).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.constants import hbar

__all__ = [
    "InteractionSpec",
    "PhysicalSetup",
    "ScaledParams",
    "ValidityReport",
    "scale_setup",
    "effective_potential_validity",
    "drive_force",
    "recoil_frequency",
]


class InvalidInputError(ValueError):
    """Non-physical laboratory parameter."""


@dataclass(frozen=True)
class InteractionSpec:
    """Optional sub-record to derive G from trap and scattering parameters."""

    omega_perp: float  # radial trap angular frequency, rad/s
    a_s: float         # s-wave scattering length, m
    n0: float          # mean 1D density, 1/m


@dataclass(frozen=True)
class PhysicalSetup:
    atom_mass: float           # kg
    lattice_wavelength: float  # m
    lattice_depth: float       # units of E_r
    drive_frequency: float     # Hz, omega_m / 2 pi
    drive_amplitude: float     # m, DeltaL
    interaction_G: float = 0.0
    interaction: InteractionSpec | None = None

    def __post_init__(self):
        if self.atom_mass <= 0 or self.lattice_wavelength <= 0:
            raise InvalidInputError("mass and wavelength must be positive")
        if self.drive_frequency <= 0:
            raise InvalidInputError("drive frequency must be positive")
        if self.lattice_depth < 0 or self.drive_amplitude < 0:
            raise InvalidInputError("depth and drive amplitude must be >= 0")
        if self.interaction_G < 0:
            raise InvalidInputError("G must be >= 0")

    @property
    def lattice_spacing(self) -> float:
        return self.lattice_wavelength / 2.0

    @property
    def k_L(self) -> float:
        return 2.0 * np.pi / self.lattice_wavelength

    @property
    def recoil_energy(self) -> float:
        return hbar**2 * self.k_L**2 / (2.0 * self.atom_mass)


@dataclass(frozen=True)
class ScaledParams:
    kbar: float
    lattice_depth_recoil: float
    interaction_G: float
    lambda_drive: float
    warnings: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        if self.kbar <= 0:
            raise InvalidInputError("kbar must be positive")
        if self.lattice_depth_recoil < 0 or self.lambda_drive < 0:
            raise InvalidInputError("depth and lambda must be >= 0")
        if self.interaction_G < 0:
            raise InvalidInputError("G must be >= 0")

    @property
    def effective_depth(self) -> float:
        return self.lattice_depth_recoil / (1.0 + 4.0 * self.interaction_G)

    @property
    def q0(self) -> float:
        return self.effective_depth / 4.0

    def as_dict(self) -> dict:
        return {
            "kbar": self.kbar,
            "lattice_depth_recoil": self.lattice_depth_recoil,
            "interaction_G": self.interaction_G,
            "effective_depth": self.effective_depth,
            "q0": self.q0,
            "lambda": self.lambda_drive,
        }


def recoil_frequency(setup: PhysicalSetup) -> float:
    """omega_r = hbar k_L^2 / (2M) in rad/s."""
    return hbar * setup.k_L**2 / (2.0 * setup.atom_mass)


def interaction_from_trap(setup: PhysicalSetup) -> float:
    """G = g_1D n0 kbar / (hbar omega_m) with g_1D = hbar k_L omega_perp a_s."""
    spec = setup.interaction
    if spec is None:
        raise InvalidInputError("no interaction sub-record supplied")
    omega_m = 2.0 * np.pi * setup.drive_frequency
    kbar = 2.0 * recoil_frequency(setup) / omega_m
    g1d = hbar * setup.k_L * spec.omega_perp * spec.a_s
    return g1d * spec.n0 * kbar / (hbar * omega_m)


def scale_setup(setup: PhysicalSetup) -> ScaledParams:
    """Convert a laboratory setup into the dimensionless parameter set."""
    omega_m = 2.0 * np.pi * setup.drive_frequency
    kbar = 2.0 * recoil_frequency(setup) / omega_m
    lam = setup.k_L * setup.drive_amplitude
    G = setup.interaction_G
    if setup.interaction is not None:
        G = interaction_from_trap(setup)
    return ScaledParams(
        kbar=kbar,
        lattice_depth_recoil=setup.lattice_depth,
        interaction_G=G,
        lambda_drive=lam,
    )


def drive_force(setup: PhysicalSetup) -> float:
    """Inertial force amplitude F = M DeltaL omega_m^2 in the co-moving frame, N."""
    omega_m = 2.0 * np.pi * setup.drive_frequency
    return setup.atom_mass * setup.drive_amplitude * omega_m**2


def drive_amplitude_from_force(setup: PhysicalSetup, force: float) -> float:
    """Invert drive_force back to DeltaL; round-trip check for the scaling."""
    omega_m = 2.0 * np.pi * setup.drive_frequency
    return force / (setup.atom_mass * omega_m**2)


@dataclass(frozen=True)
class ValidityReport:
    effective_depth: float
    status: str
    message: str


def effective_potential_validity(params: ScaledParams,
                                 valid_below: float = 1.0,
                                 marginal_below: float = 5.0) -> ValidityReport:
    """Check the screening condition Vprime << 1 behind V' = V0/(1+4G).

    The substitution is a perturbative result valid for nearly uniform
    condensate density; linear (G = 0) dynamics are unaffected by this check.
    """
    vp = params.effective_depth
    if vp < valid_below:
        return ValidityReport(vp, "valid", "effective potential well inside the screening regime")
    if vp < marginal_below:
        return ValidityReport(vp, "marginal", "screening condition V' << 1 only marginally met")
    return ValidityReport(
        vp, "invalid",
        "V' too large for interacting runs; linear runs unaffected",
    )
