"""Recurrence-time extraction from autocorrelation traces and parameter sweeps.

Extraction is deliberately simple and auditable: classical periods come from
the spacing of prominent |A|^2 maxima; revivals and super-revivals from a
moving-average envelope at the next-slower hierarchy level (collapse below
half the initial envelope, then the first prominent envelope maximum).  All
thresholds are relative to the series maximum, so extraction is invariant
under uniform rescaling of |A|^2 and equivariant under time rescaling.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.signal import find_peaks

from . import resonance
from .units import ScaledParams

__all__ = [
    "AutocorrelationSeries",
    "RecurrenceReport",
    "ExtractionFailedError",
    "NoRevivalStructureError",
    "SpanError",
    "extract_classical_period",
    "extract_revival_time",
    "extract_super_revival",
    "sweep",
]


class ExtractionFailedError(RuntimeError):
    pass


class NoRevivalStructureError(ExtractionFailedError):
    pass


class SpanError(ExtractionFailedError):
    pass


@dataclass
class AutocorrelationSeries:
    times: np.ndarray
    values: np.ndarray
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.times.ndim != 1 or self.times.shape != self.values.shape:
            raise ValueError("times and values must be 1-d arrays of equal length")
        if np.any(np.diff(self.times) <= 0):
            raise ValueError("times must be strictly ascending")
        if np.any(self.values < 0):
            raise ValueError("|A|^2 values must be non-negative")

    @property
    def dt(self) -> float:
        return float(np.median(np.diff(self.times)))

    @property
    def span(self) -> float:
        return float(self.times[-1] - self.times[0])

    def rescaled(self, time_factor: float = 1.0, value_factor: float = 1.0):
        return AutocorrelationSeries(self.times * time_factor,
                                     self.values * value_factor,
                                     dict(self.metadata))


@dataclass
class RecurrenceReport:
    extracted: dict
    analytic: resonance.TimeScales | None
    relative_errors: dict
    diagnostics: dict


def extract_classical_period(series: AutocorrelationSeries, n_peaks: int = 5,
                             prominence: float = 0.1,
                             diagnostics: dict | None = None) -> float:
    """Spacing of the first n_peaks prominent |A|^2 maxima.

    prominence is relative to the series maximum.  The median spacing is
    used: slow-envelope zeros can suppress individual maxima below the
    prominence threshold, and the median ignores the resulting skipped
    intervals.  Uncertainty is half the sample spacing (recorded in
    diagnostics when supplied).
    """
    vmax = float(series.values.max())
    if vmax <= 0:
        raise ExtractionFailedError("series has no positive values")
    peaks, props = find_peaks(series.values, prominence=prominence * vmax)
    if len(peaks) < 3:
        raise ExtractionFailedError(
            f"only {len(peaks)} qualifying maxima; need at least 3")
    sel = peaks[:n_peaks]
    spacings = np.diff(series.times[sel])
    value = float(np.median(spacings))
    if diagnostics is not None:
        diagnostics.update(peak_indices=sel.tolist(),
                           peak_times=series.times[sel].tolist(),
                           spacings=spacings.tolist(),
                           uncertainty=series.dt / 2.0)
    return value


def _envelope(series: AutocorrelationSeries, window_time: float) -> np.ndarray:
    win = max(3, int(round(window_time / series.dt)))
    win = min(win, len(series.values))
    kernel = np.ones(win) / win
    return np.convolve(series.values, kernel, mode="same"), win


def _first_envelope_max_after_collapse(series, window_time, rel_prominence,
                                       diagnostics=None):
    env, win = _envelope(series, window_time)
    start = min(win, len(env) - 1)
    env_initial = float(env[start])
    below = np.where(env[start:] < 0.5 * env_initial)[0]
    if len(below) == 0:
        raise NoRevivalStructureError(
            "envelope never collapses below half its initial value")
    i0 = int(below[0]) + start
    tail = env[i0:]
    peaks, _ = find_peaks(tail, prominence=rel_prominence * float(env.max()))
    if len(peaks) == 0:
        raise NoRevivalStructureError("no envelope maximum after the collapse")
    t_peak = float(series.times[i0 + peaks[0]])
    if diagnostics is not None:
        diagnostics.update(collapse_time=float(series.times[i0]),
                           envelope_window=window_time,
                           envelope_initial=env_initial,
                           envelope_peak_times=series.times[i0 + peaks].tolist())
    return t_peak


def extract_revival_time(series: AutocorrelationSeries, t_cl_hint: float,
                         rel_prominence: float = 0.05,
                         diagnostics: dict | None = None) -> float:
    """First envelope maximum after the initial collapse.

    The envelope is a moving average of window 3 * t_cl_hint, which averages
    out the classical-period oscillation while leaving the revival structure.
    """
    if series.span < 1.5 * t_cl_hint:
        raise SpanError("series shorter than 1.5 classical periods")
    return _first_envelope_max_after_collapse(series, 3.0 * t_cl_hint,
                                              rel_prominence, diagnostics)


def extract_super_revival(series: AutocorrelationSeries, t_rev_hint: float,
                          rel_prominence: float = 0.05,
                          diagnostics: dict | None = None) -> float:
    """Envelope method at the next hierarchy level (window 3 * t_rev_hint)."""
    if series.span < 1.2 * t_rev_hint:
        raise SpanError("series span below 1.2 revival times")
    return _first_envelope_max_after_collapse(series, 3.0 * t_rev_hint,
                                              rel_prominence, diagnostics)


def sweep(lambda_grid, scaled0: ScaledParams, N: int = 1, nbar: int | None = None,
          l: int = 0, method: str = "harmonic", beta: float | None = None,
          regimes: tuple[str, ...] = ("delicate", "robust"),
          simulate=None) -> list[dict]:
    """Analytic time scales over a drive-amplitude grid; one row per (lambda, regime).

    simulate, when given, is a callable lambda_value -> dict of extracted
    times merged into the row; per-point failures are recorded, not fatal.
    """
    rows: list[dict] = []
    for lam in np.atleast_1d(np.asarray(lambda_grid, dtype=float)):
        scaled = ScaledParams(kbar=scaled0.kbar,
                              lattice_depth_recoil=scaled0.lattice_depth_recoil,
                              interaction_G=scaled0.interaction_G,
                              lambda_drive=float(lam))
        try:
            ctx = resonance.build_context(scaled, N=N, nbar=nbar, l=l,
                                          method=method, beta=beta)
        except resonance.FormulaError as exc:
            rows.append({"lambda": float(lam), "error": str(exc)})
            continue
        t0 = resonance.undriven_times(ctx.nbar, ctx.q0, ctx.regime)
        for regime in regimes:
            row = {"lambda": float(lam), "q": ctx.q, "regime": regime,
                   "warnings": "", "error": ""}
            try:
                if regime == "undriven":
                    ts = t0
                elif regime == "delicate":
                    ts = resonance.delicate_times(ctx, t0)
                elif regime == "robust":
                    ts = resonance.robust_times(ctx)
                elif regime == "robust_harmonic":
                    ts = resonance.robust_times_harmonic(ctx, ctx.q0, float(lam))
                else:
                    raise ValueError(f"unknown regime {regime!r}")
                row.update(t_cl=ts.t_classical, t_rev=ts.t_revival,
                           t_spr=ts.t_super_revival,
                           warnings="; ".join(ts.validity_warnings))
            except (resonance.FormulaError, ValueError) as exc:
                row.update(t_cl=math.nan, t_rev=math.nan, t_spr=math.nan,
                           error=str(exc))
            if simulate is not None and not row["error"]:
                try:
                    row.update(simulate(float(lam)))
                except Exception as exc:  # per-point failures stay per-row
                    row["error"] = f"simulation: {exc}"
            rows.append(row)
    return rows
