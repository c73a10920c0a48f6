"""Render drivenlattice CSV outputs into figure panels.

Strictly a downstream consumer: every plotted value comes from the CSV/JSON
files emitted by the simulation package; nothing physical is computed here.
Output is deterministic (fixed SVG hash salt, no embedded timestamps), so
re-rendering a job yields byte-identical files.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

__all__ = ["PlotJob", "SchemaError", "render"]

KINDS = ("poincare", "heatmap", "autocorr", "sweep")

SCHEMAS = {
    "poincare": ["seed_id", "period_index", "z", "p"],
    "heatmap": ["tau", "z", "rho"],
    "autocorr": ["tau", "A2"],
    "sweep": ["lambda", "regime", "t_cl", "t_rev", "t_spr"],
}


class SchemaError(ValueError):
    pass


@dataclass
class PlotJob:
    kind: str
    inputs: list[str]
    output: str
    meta: str | None = None
    log_y: bool = False
    zoom: tuple[float, float] | None = None
    title: str | None = None
    options: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise SchemaError(f"unknown plot kind {self.kind!r}; one of {KINDS}")
        if not self.inputs:
            raise SchemaError("at least one input CSV is required")
        suffix = Path(self.output).suffix.lower()
        if suffix not in (".svg", ".png"):
            raise SchemaError("output format must be SVG or PNG")


def _read_csv(path: str, kind: str) -> dict[str, np.ndarray]:
    lines = Path(path).read_text().strip().split("\n")
    if len(lines) < 2:
        raise SchemaError(f"{path}: empty CSV (no data rows)")
    header = lines[0].split(",")
    for col in SCHEMAS[kind]:
        if col not in header:
            raise SchemaError(f"{path}: missing column {col!r} for kind {kind!r}")
    raw = [ln.split(",") for ln in lines[1:]]
    cols: dict[str, np.ndarray] = {}
    for j, name in enumerate(header):
        vals = [row[j] if j < len(row) else "" for row in raw]
        try:
            cols[name] = np.array([float(v) for v in vals])
        except ValueError:
            cols[name] = np.array(vals)
    return cols


def _marker_times(meta_path: str | None) -> dict[str, float]:
    if meta_path is None:
        return {}
    doc = json.loads(Path(meta_path).read_text())
    block = doc.get("analytic", doc)
    out = {}
    for key in ("t_cl", "t_rev", "t_spr"):
        val = block.get(key)
        if isinstance(val, (int, float)) and np.isfinite(val):
            out[key] = float(val)
    return out


def _fig(npanels: int):
    ncol = min(3, npanels)
    nrow = (npanels + ncol - 1) // ncol
    fig, axes = plt.subplots(nrow, ncol, figsize=(4.2 * ncol, 3.4 * nrow),
                             squeeze=False)
    return fig, [ax for row in axes for ax in row]


def _render_poincare(job: PlotJob, fig, axes):
    for ax, path in zip(axes, job.inputs):
        cols = _read_csv(path, "poincare")
        for sid in np.unique(cols["seed_id"]):
            m = cols["seed_id"] == sid
            ax.plot(cols["z"][m], cols["p"][m], ".", ms=1.2, rasterized=False)
        ax.set_xlabel("z (folded)")
        ax.set_ylabel("p")
        ax.set_title(Path(path).stem, fontsize=9)


def _render_heatmap(job: PlotJob, fig, axes):
    for ax, path in zip(axes, job.inputs):
        cols = _read_csv(path, "heatmap")
        taus = np.unique(cols["tau"])
        zs = np.unique(cols["z"])
        grid = np.full((len(taus), len(zs)), np.nan)
        ti = np.searchsorted(taus, cols["tau"])
        zi = np.searchsorted(zs, cols["z"])
        grid[ti, zi] = cols["rho"]
        im = ax.imshow(grid, origin="lower", aspect="auto",
                       extent=[zs[0], zs[-1], taus[0], taus[-1]],
                       cmap="magma")
        fig.colorbar(im, ax=ax, label="density")
        ax.set_xlabel("z")
        ax.set_ylabel("tau")
        ax.set_title(Path(path).stem, fontsize=9)


def _render_autocorr(job: PlotJob, fig, axes):
    markers = _marker_times(job.meta)
    colors = {"t_cl": "tab:green", "t_rev": "tab:orange", "t_spr": "tab:red"}
    for ax, path in zip(axes, job.inputs):
        cols = _read_csv(path, "autocorr")
        ax.plot(cols["tau"], cols["A2"], lw=0.6)
        for name, t in markers.items():
            if t <= cols["tau"].max():
                ax.axvline(t, color=colors[name], ls="--", lw=1.0, label=name)
        if markers:
            ax.legend(fontsize=8)
        if job.zoom:
            ax.set_xlim(*job.zoom)
        ax.set_xlabel("tau")
        ax.set_ylabel("|A|^2")
        ax.set_title(Path(path).stem, fontsize=9)


def _render_sweep(job: PlotJob, fig, axes):
    for ax, path in zip(axes, job.inputs):
        cols = _read_csv(path, "sweep")
        regimes = np.unique(cols["regime"])
        for reg in regimes:
            m = cols["regime"] == reg
            lam = cols["lambda"][m]
            for key, style in (("t_cl", "-"), ("t_rev", "--"), ("t_spr", ":")):
                vals = cols[key][m]
                good = np.isfinite(vals)
                if good.any():
                    ax.plot(lam[good], vals[good], style, label=f"{reg} {key}")
        if job.log_y:
            ax.set_yscale("log")
        ax.set_xlabel("drive amplitude")
        ax.set_ylabel("time scale")
        ax.legend(fontsize=7)
        ax.set_title(Path(path).stem, fontsize=9)


def render(job: PlotJob) -> Path:
    """Render a job to its output image; returns the written path."""
    plt.rcParams["svg.hashsalt"] = "latticeplot"
    fig, axes = _fig(len(job.inputs))
    {"poincare": _render_poincare, "heatmap": _render_heatmap,
     "autocorr": _render_autocorr, "sweep": _render_sweep}[job.kind](job, fig, axes)
    for ax in axes[len(job.inputs):]:
        ax.set_visible(False)
    if job.title:
        fig.suptitle(job.title)
    fig.tight_layout()
    out = Path(job.output)
    out.parent.mkdir(parents=True, exist_ok=True)
    fig.savefig(out, metadata={"Date": None} if out.suffix == ".svg" else None)
    plt.close(fig)
    return out
