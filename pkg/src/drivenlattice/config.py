"""Run-configuration loading, validation and derivation of scaled parameters.

Configs are JSON objects with blocks:

    physical   laboratory SI quantities (takes precedence, generates scaled)
    scaled     {kbar, Vprime | V0 [+ G], lambda}
    grid       {length_pi, points}
    run        {tau_end, steps_per_period | dt, snapshot_stride, with_interaction}
    initial    {z0, p0, delta_p}
    resonance  {N, nbar, l, method, beta}
    analysis   {n_peaks, prominence, t_cl_hint, t_rev_hint}
    poincare   {kappa, lambda, steps_per_period | dt, periods, seeds}

Validation errors carry a JSON-pointer-style path to the offending field.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

from .classical import ClassicalParams
from .quantum import Grid
from .units import PhysicalSetup, ScaledParams, scale_setup

__all__ = ["ConfigError", "RunConfig", "load_config", "parse_config"]


class ConfigError(ValueError):
    def __init__(self, pointer: str, message: str):
        self.pointer = pointer
        super().__init__(f"{pointer}: {message}")


def _need(block: dict, key: str, pointer: str, types=(int, float)):
    if key not in block:
        raise ConfigError(f"{pointer}/{key}", "missing required field")
    val = block[key]
    if not isinstance(val, types) or isinstance(val, bool):
        raise ConfigError(f"{pointer}/{key}", f"expected number, got {type(val).__name__}")
    return val


def _opt(block: dict, key: str, default, pointer: str, types=(int, float)):
    if key not in block:
        return default
    val = block[key]
    if types is not None and (not isinstance(val, types) or isinstance(val, bool)):
        raise ConfigError(f"{pointer}/{key}", f"bad type {type(val).__name__}")
    return val


@dataclass
class RunConfig:
    scaled: ScaledParams
    grid: Grid
    tau_end: float = 20.0 * math.pi
    dt: float = 2.0 * math.pi / 256.0
    snapshot_stride: int = 16
    with_interaction: bool = False
    z0: float = math.pi / 2.0
    p0: float = 0.0
    delta_p: float = 0.5
    N: int = 1
    nbar: int | None = None
    l: int = 0
    method: str = "harmonic"
    beta: float | None = None
    n_peaks: int = 5
    prominence: float = 0.1
    t_cl_hint: float | None = None
    t_rev_hint: float | None = None
    poincare: ClassicalParams | None = None
    poincare_periods: int = 200
    poincare_seeds: list = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)
    raw: dict = field(default_factory=dict)


def parse_config(doc: dict) -> RunConfig:
    warnings: list[str] = []
    has_phys = "physical" in doc
    has_scaled = "scaled" in doc
    if not has_phys and not has_scaled:
        raise ConfigError("/", "one of 'physical' or 'scaled' blocks is required")
    if has_phys and has_scaled:
        warnings.append("both physical and scaled blocks given; scaled ignored")
    if has_phys:
        blk = doc["physical"]
        try:
            setup = PhysicalSetup(
                atom_mass=_need(blk, "atom_mass", "/physical"),
                lattice_wavelength=_need(blk, "lattice_wavelength", "/physical"),
                lattice_depth=_need(blk, "lattice_depth", "/physical"),
                drive_frequency=_need(blk, "drive_frequency", "/physical"),
                drive_amplitude=_need(blk, "drive_amplitude", "/physical"),
                interaction_G=_opt(blk, "interaction_G", 0.0, "/physical"),
            )
        except ConfigError:
            raise
        except ValueError as exc:
            raise ConfigError("/physical", str(exc)) from exc
        scaled = scale_setup(setup)
    else:
        blk = doc["scaled"]
        kbar = _need(blk, "kbar", "/scaled")
        lam = _opt(blk, "lambda", 0.0, "/scaled")
        if "Vprime" in blk and "V0" in blk:
            raise ConfigError("/scaled", "give either Vprime or V0, not both")
        if "Vprime" in blk:
            depth = _need(blk, "Vprime", "/scaled")
            G = 0.0
            if _opt(blk, "G", 0.0, "/scaled") != 0.0:
                raise ConfigError("/scaled/G", "G with Vprime is ambiguous; give V0 + G")
        else:
            depth = _need(blk, "V0", "/scaled")
            G = _opt(blk, "G", 0.0, "/scaled")
        try:
            scaled = ScaledParams(kbar=kbar, lattice_depth_recoil=depth,
                                  interaction_G=G, lambda_drive=lam)
        except ValueError as exc:
            raise ConfigError("/scaled", str(exc)) from exc

    gblk = doc.get("grid", {})
    try:
        grid = Grid(length=_opt(gblk, "length_pi", 32, "/grid") * math.pi,
                    points=int(_opt(gblk, "points", 2048, "/grid")))
    except ValueError as exc:
        raise ConfigError("/grid", str(exc)) from exc

    cfg = RunConfig(scaled=scaled, grid=grid, warnings=warnings, raw=doc)

    rblk = doc.get("run", {})
    cfg.tau_end = float(_opt(rblk, "tau_end", cfg.tau_end, "/run"))
    if "dt" in rblk and "steps_per_period" in rblk:
        raise ConfigError("/run", "give dt or steps_per_period, not both")
    if "steps_per_period" in rblk:
        cfg.dt = 2.0 * math.pi / int(_need(rblk, "steps_per_period", "/run"))
    elif "dt" in rblk:
        cfg.dt = float(_need(rblk, "dt", "/run"))
    if cfg.dt > 2.0 * math.pi / 200.0 + 1e-15:
        raise ConfigError("/run/dt", "dt must satisfy dt <= 2 pi / 200")
    cfg.snapshot_stride = int(_opt(rblk, "snapshot_stride", cfg.snapshot_stride, "/run"))
    cfg.with_interaction = bool(_opt(rblk, "with_interaction", False, "/run", types=(bool,)))
    if cfg.with_interaction and scaled.interaction_G == 0.0:
        warnings.append("with_interaction set but G = 0; run is effectively linear")

    iblk = doc.get("initial", {})
    cfg.z0 = float(_opt(iblk, "z0", cfg.z0, "/initial"))
    cfg.p0 = float(_opt(iblk, "p0", cfg.p0, "/initial"))
    cfg.delta_p = float(_opt(iblk, "delta_p", cfg.delta_p, "/initial"))
    if cfg.delta_p <= 0:
        raise ConfigError("/initial/delta_p", "must be positive")

    resblk = doc.get("resonance", {})
    cfg.N = int(_opt(resblk, "N", 1, "/resonance"))
    nbar = _opt(resblk, "nbar", None, "/resonance")
    cfg.nbar = None if nbar is None else int(nbar)
    cfg.l = int(_opt(resblk, "l", 0, "/resonance"))
    cfg.method = _opt(resblk, "method", "harmonic", "/resonance", types=(str,))
    beta = _opt(resblk, "beta", None, "/resonance")
    cfg.beta = None if beta is None else float(beta)

    ablk = doc.get("analysis", {})
    cfg.n_peaks = int(_opt(ablk, "n_peaks", 5, "/analysis"))
    cfg.prominence = float(_opt(ablk, "prominence", 0.1, "/analysis"))
    tcl = _opt(ablk, "t_cl_hint", None, "/analysis")
    cfg.t_cl_hint = None if tcl is None else float(tcl)
    trev = _opt(ablk, "t_rev_hint", None, "/analysis")
    cfg.t_rev_hint = None if trev is None else float(trev)

    if "poincare" in doc:
        pblk = doc["poincare"]
        if "dt" in pblk:
            dtp = float(_need(pblk, "dt", "/poincare"))
        else:
            dtp = 2.0 * math.pi / int(_opt(pblk, "steps_per_period", 1000, "/poincare"))
        try:
            cfg.poincare = ClassicalParams(
                kappa=_need(pblk, "kappa", "/poincare"),
                lam=_opt(pblk, "lambda", 0.0, "/poincare"),
                dt=dtp)
        except ValueError as exc:
            raise ConfigError("/poincare/dt", str(exc)) from exc
        cfg.poincare_periods = int(_opt(pblk, "periods", 200, "/poincare"))
        cfg.poincare_seeds = pblk.get("seeds", [])
    return cfg


def load_config(path: str | Path) -> RunConfig:
    """Load and validate a JSON run configuration."""
    text = Path(path).read_text()
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError("/", f"malformed JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ConfigError("/", "top-level JSON value must be an object")
    return parse_config(doc)
