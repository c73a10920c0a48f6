"""Per-resonance context and analytic recurrence time scales.

All closed-form expressions below are transcribed literally from the driven
optical lattice recurrence theory, in scaled tau units (drive period 2 pi):

undriven, shallow (q0 <~ 1, nbar >= 2):
    omega = 2 nbar {1 - q0^2 / (2 (nbar^2-1)^2)}
    zeta  = 2 + (q0^2/2)(3 nbar^2 + 1)/(nbar^2-1)^3
    T_cl  = {1 + q0^2/(2(nbar^2-1)^2)} pi/nbar
    T_rev = 2 pi {1 - (q0^2/2)(3 nbar^2+1)/(nbar^2-1)^3}
    T_spr = pi (nbar^2-1)^4 / (q0^2 nbar (nbar^2+1))

undriven, deep (q0 >> 1, s = 2 nbar + 1):
    omega = 4 (sqrt(q0) - s/8)
    zeta  = |-1 - 3 s / (16 sqrt(q0))|
    T_cl  = pi/(2 sqrt(q0)) {1 + s/(8 sqrt(q0)) + 3(s^2+1)/(256 q0)}
    T_rev = 4 pi (1 - 3 s/(16 q0))
    T_spr = 32 pi sqrt(q0)

driven, delicate (q <~ 1, N = 1): weak-drive corrections times Delta on T_cl.
driven, robust (q >> 1, N = 1): pendulum ladder of the 1:1 resonance island.
harmonic-limit robust: q approximated by 4 sqrt(nbar+1) lambda/(q0^{1/4} kbar^2 zeta).

The resonance mistuning beta = (N omega_drive_ratio - 1)/(N^2 zeta kbar) uses
the classical frequency expressed relative to the drive, omega_drive_ratio =
kbar * omega / 2, since the N:1 resonance condition is level spacing = kbar/N
in the tau-time Schroedinger equation.  The Delta factor of the delicate
classical period uses the printed omega directly, matching the source
formulas.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import mathieu
from .units import ScaledParams

__all__ = [
    "FormulaError",
    "SingularFormulaError",
    "SeparatrixDivergenceError",
    "DeltaDivergenceError",
    "UndefinedTimeScaleError",
    "NegativePeriodError",
    "RegimeError",
    "ResonanceContext",
    "TimeScales",
    "QuasiEnergy",
    "classical_frequency",
    "nonlinearity",
    "matrix_element",
    "build_context",
    "undriven_times",
    "delicate_times",
    "robust_times",
    "robust_times_harmonic",
    "quasienergy_spectrum",
    "harmonic_effective_modulation",
]

SHALLOW_Q0 = 1.0
DEEP_Q0 = 5.0


class FormulaError(ValueError):
    pass


class SingularFormulaError(FormulaError):
    pass


class SeparatrixDivergenceError(FormulaError):
    pass


class DeltaDivergenceError(FormulaError):
    pass


class UndefinedTimeScaleError(FormulaError):
    pass


class NegativePeriodError(FormulaError):
    pass


class RegimeError(FormulaError):
    pass


@dataclass
class TimeScales:
    t_classical: float
    t_revival: float
    t_super_revival: float
    regime_tag: str
    validity_warnings: list[str] = field(default_factory=list)

    def __post_init__(self):
        if not (self.t_classical < self.t_revival < self.t_super_revival):
            self.validity_warnings.append(
                "time-scale ordering t_cl < t_rev < t_spr violated; regime misuse likely")


@dataclass(frozen=True)
class ResonanceContext:
    N: int
    nbar: int
    regime: str
    omega: float
    zeta: float
    kbar: float
    beta0: float
    beta: float
    q: float
    l: int = 0
    matrix_element_V: float = 0.0
    q0: float = 0.0
    lambda_drive: float = 0.0
    warnings: tuple[str, ...] = field(default=(), compare=False)

    def __post_init__(self):
        if self.N < 1:
            raise FormulaError("resonance number N must be >= 1")
        if self.zeta <= 0:
            raise FormulaError("nonlinearity zeta must be positive")
        if self.q < 0:
            raise FormulaError("effective modulation q must be >= 0")
        if self.regime == "shallow" and self.nbar == 1:
            raise SingularFormulaError("shallow formulas are singular at nbar = 1")


@dataclass(frozen=True)
class QuasiEnergy:
    j: int
    nu_branch: float
    energy: float


def _check_regime(nbar: int, q0: float, regime: str) -> list[str]:
    warns = []
    if regime == "shallow":
        if nbar <= 1:
            raise SingularFormulaError(
                "shallow-regime formulas diverge for nbar <= 1 (nbar^2 = 1 pole)")
        if q0 > SHALLOW_Q0:
            warns.append(f"shallow formulas used at q0={q0:g} > {SHALLOW_Q0:g}")
    elif regime == "deep":
        if q0 < DEEP_Q0:
            warns.append(f"deep formulas used at q0={q0:g} < {DEEP_Q0:g}")
    else:
        raise RegimeError(f"unknown regime {regime!r}")
    return warns


def classical_frequency(nbar: int, q0: float, regime: str) -> float:
    """Undriven orbit frequency at mean level nbar (recoil-scale units)."""
    _check_regime(nbar, q0, regime)
    if regime == "shallow":
        return 2.0 * nbar * (1.0 - q0**2 / (2.0 * (nbar**2 - 1.0) ** 2))
    s = 2 * nbar + 1
    return 4.0 * (math.sqrt(q0) - s / 8.0)


def nonlinearity(nbar: int, q0: float, regime: str) -> float:
    """Level-spacing change rate zeta at nbar; sets revival scales."""
    _check_regime(nbar, q0, regime)
    if regime == "shallow":
        return 2.0 + (q0**2 / 2.0) * (3.0 * nbar**2 + 1.0) / (nbar**2 - 1.0) ** 3
    s = 2 * nbar + 1
    return abs(-1.0 - 3.0 * s / (16.0 * math.sqrt(q0)))


def matrix_element(nbar: int, q0: float, kbar: float, method: str = "harmonic") -> float:
    """Dipole matrix element V = <n|z|n+-1> between adjacent well levels.

    'harmonic' uses the deep-well oscillator value sqrt(nbar+1)/q0^{1/4}, the
    normalisation under which q = lambda/beta0 reduces to the harmonic-limit
    effective modulation.  'numeric' evaluates the dipole integral between
    localised Mathieu well eigenfunctions, restricted to one well, in the same
    normalisation (twice the bare single-well integral).
    """
    if method == "harmonic":
        if q0 <= 0:
            raise FormulaError("harmonic matrix element requires q0 > 0")
        return math.sqrt(nbar + 1.0) / q0**0.25
    if method != "numeric":
        raise ValueError(f"unknown matrix-element method {method!r}")
    x = np.linspace(-np.pi / 2, 3 * np.pi / 2, 4096, endpoint=False)
    funcs = mathieu.well_eigenfunctions(nbar + 2, q0, x)
    well = np.abs(x - np.pi / 2) <= np.pi / 2
    dx = x[1] - x[0]
    dip = np.sum(funcs[nbar][well] * (x[well] - np.pi / 2) * funcs[nbar + 1][well]) * dx
    return 2.0 * abs(dip)


def build_context(params: ScaledParams, N: int = 1, nbar: int | None = None,
                  l: int = 0, method: str = "harmonic",
                  beta: float | None = None) -> ResonanceContext:
    """Assemble the per-resonance quantities feeding every time-scale formula.

    The regime is chosen from q0 (<= 1 shallow, >= 5 deep, deep with a warning
    in between).  beta may be pinned explicitly, e.g. beta = 0 for a packet
    idealised at the centre of the resonance.
    """
    q0 = params.q0
    warns: list[str] = []
    if q0 <= SHALLOW_Q0:
        regime = "shallow"
    elif q0 >= DEEP_Q0:
        regime = "deep"
    else:
        regime = "deep"
        warns.append(f"q0={q0:g} between regimes; deep formulas used")
    if nbar is None:
        nbar = 2 if regime == "shallow" else 0
    warns += _check_regime(nbar, q0, regime)
    omega = classical_frequency(nbar, q0, regime)
    zeta = nonlinearity(nbar, q0, regime)
    V = matrix_element(nbar, q0, params.kbar, method)
    beta0 = N**2 * params.kbar**2 * zeta / (4.0 * V)
    if beta is None:
        omega_ratio = params.kbar * omega / 2.0
        beta = (N * omega_ratio - 1.0) / (N**2 * zeta * params.kbar)
    q = params.lambda_drive / beta0
    return ResonanceContext(
        N=N, nbar=nbar, regime=regime, omega=omega, zeta=zeta, kbar=params.kbar,
        beta0=beta0, beta=beta, q=q, l=l, matrix_element_V=V, q0=q0,
        lambda_drive=params.lambda_drive, warnings=tuple(warns),
    )


def undriven_times(nbar: int, q0: float, regime: str) -> TimeScales:
    """Classical period, revival and super-revival of the undriven lattice."""
    warns = _check_regime(nbar, q0, regime)
    if regime == "shallow":
        d = (nbar**2 - 1.0)
        t_cl = (1.0 + q0**2 / (2.0 * d**2)) * math.pi / nbar
        t_rev = 2.0 * math.pi * (1.0 - (q0**2 / 2.0) * (3.0 * nbar**2 + 1.0) / d**3)
        if q0 == 0.0:
            t_spr = math.inf
            warns.append("super-revival unbounded at q0 = 0 (free rotor)")
        else:
            t_spr = math.pi * d**4 / (q0**2 * nbar * (nbar**2 + 1.0))
    else:
        s = 2 * nbar + 1
        rq = math.sqrt(q0)
        t_cl = math.pi / (2.0 * rq) * (1.0 + s / (8.0 * rq) + 3.0 * (s**2 + 1.0) / (256.0 * q0))
        t_rev = 4.0 * math.pi * (1.0 - 3.0 * s / (16.0 * q0))
        t_spr = 32.0 * math.pi * rq
    return TimeScales(t_cl, t_rev, t_spr, "undriven", warns)


def delicate_times(ctx: ResonanceContext, t0: TimeScales) -> TimeScales:
    """Weak-drive (q <~ 1) recurrence times built on the undriven scales."""
    warns = list(ctx.warnings)
    if ctx.q > 1.0:
        warns.append(f"delicate formulas used at q={ctx.q:g} > 1")
    lb = ctx.l + ctx.beta
    disc = 4.0 * lb**2 - 1.0
    if abs(disc) < 1e-6:
        raise SeparatrixDivergenceError("4(l+beta)^2 = 1: delicate formulas diverge")
    if ctx.N * ctx.omega == 1.0:
        raise DeltaDivergenceError("N omega = 1 makes the Delta factor diverge")
    delta = 1.0 / (1.0 - 1.0 / (ctx.N * ctx.omega))
    t_cl = t0.t_classical * (1.0 + (ctx.q**2 / 2.0) / disc**2) * delta
    t_rev = t0.t_revival * (1.0 - (ctx.q**2 / 2.0) * (12.0 * lb**2 + 1.0) / disc**3)
    if lb == 0.0:
        raise UndefinedTimeScaleError("super-revival undefined at l + beta = 0")
    if ctx.q == 0.0:
        t_spr = math.inf
        warns.append("super-revival unbounded at q = 0")
    else:
        t_spr = math.pi * disc**4 / (
            2.0 * ctx.zeta * ctx.kbar * ctx.q**2 * lb * (4.0 * lb**2 + 1.0))
    return TimeScales(t_cl, t_rev, t_spr, "delicate", warns)


def robust_times(ctx: ResonanceContext) -> TimeScales:
    """Strong-drive (q >> 1) recurrence times of the resonance pendulum ladder."""
    warns = list(ctx.warnings)
    if ctx.q < 5.0:
        warns.append(f"robust formulas used at q={ctx.q:g} < 5")
    lb = ctx.l + ctx.beta
    rq = math.sqrt(ctx.q)
    edge = rq - (4.0 * lb + 1.0) / 8.0
    if edge <= 0.0:
        raise NegativePeriodError("sqrt(q) <= (4(l+beta)+1)/8: classical period undefined")
    kz = ctx.kbar * ctx.zeta
    t_cl = 2.0 * math.pi / (kz * edge)
    t_rev = (8.0 * math.pi / kz) * (1.0 - 3.0 * (4.0 * lb + 1.0) / (16.0 * rq))
    t_spr = 32.0 * math.pi * rq / kz
    return TimeScales(t_cl, t_rev, t_spr, "robust", warns)


def harmonic_effective_modulation(nbar: int, q0: float, kbar: float,
                                  zeta: float, lam: float) -> float:
    """q ~ 4 sqrt(nbar+1) lambda / (q0^{1/4} kbar^2 zeta), harmonic-limit matrix elements."""
    return 4.0 * math.sqrt(nbar + 1.0) * lam / (q0**0.25 * kbar**2 * zeta)


def robust_times_harmonic(ctx: ResonanceContext, q0: float, lam: float) -> TimeScales:
    """Robust times with the effective modulation in the harmonic approximation."""
    warns = list(ctx.warnings)
    if ctx.regime != "deep":
        warns.append("harmonic approximation outside the deep regime")
    if lam <= 0.0:
        raise FormulaError("harmonic-limit times require lambda > 0")
    lb = ctx.l + ctx.beta
    sz = math.sqrt(ctx.zeta)
    rl = math.sqrt(lam)
    np4 = (ctx.nbar + 1.0) ** 0.25
    denom = 16.0 * np4 * rl - (4.0 * lb + 1.0) * q0**0.125 * ctx.kbar * sz
    if denom <= 0.0:
        raise RegimeError("harmonic-limit classical period denominator <= 0")
    t_cl = 16.0 * math.pi * q0**0.125 / sz / denom
    t_rev = (8.0 * math.pi / (ctx.kbar * ctx.zeta)) * (
        1.0 - 3.0 * (4.0 * lb + 1.0) * q0**0.125 * ctx.kbar * sz / (32.0 * np4 * rl))
    t_spr = 64.0 * math.pi * np4 * rl / (ctx.kbar**2 * ctx.zeta**1.5 * q0**0.125)
    return TimeScales(t_cl, t_rev, t_spr, "robust_harmonic", warns)


def quasienergy_spectrum(ctx: ResonanceContext, j_values=None, nu_values=None,
                         alpha_winding: float = 0.0) -> list[QuasiEnergy]:
    """Floquet quasi-energies of the nonlinear resonance, reduced mod kbar.

    E_{mu,nu} = (N^2 kbar^2 zeta / 8) a_nu(q) + kbar alpha_winding j, mod kbar
    (scaled drive frequency 1).  Branch j shifts the characteristic exponent
    by mu(j) = 2j/N; for N = 1 only the j = 0 branch exists.  nu defaults to
    the even ladder 2(l + beta) for l around the resonance centre.
    """
    if j_values is None:
        j_values = range(ctx.N)
    if nu_values is None:
        nu_values = [2.0 * (l + ctx.beta) for l in range(-2, 3)]
    out = []
    for j in j_values:
        if not 0 <= j <= ctx.N - 1:
            raise FormulaError("branch index j must lie in [0, N-1]")
        mu = 2.0 * j / ctx.N
        for nu in nu_values:
            a = mathieu.char_value(abs(mu + nu), ctx.q)
            e = (ctx.N**2 * ctx.kbar**2 * ctx.zeta / 8.0) * a + ctx.kbar * alpha_winding * j
            out.append(QuasiEnergy(j=j, nu_branch=nu, energy=e % ctx.kbar))
    return out
