"""Command-line interface: parameter scaling, tables, simulations, recipes.

Exit codes: 0 success, 2 validation error, 3 numerical failure, 4 assertion
failure.  All numeric output files are CSV with shortest round-trip float
formatting plus a JSON metadata sidecar, so identical configurations yield
byte-identical CSVs.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__, analysis, classical, mathieu, quantum, recipes, resonance
from ._io import read_csv_columns, write_csv, write_json
from .config import ConfigError, load_config
from .units import ScaledParams

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_NUMERICAL = 3
EXIT_ASSERTION = 4


def _grid_spec(text: str) -> np.ndarray:
    """Parse start:stop:steps into an inclusive linear grid."""
    try:
        start, stop, steps = text.split(":")
        return np.linspace(float(start), float(stop), int(steps))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"bad grid spec {text!r}") from exc


def _meta_sidecar(path: Path, args: argparse.Namespace, extra: dict | None = None):
    doc = {"command": " ".join(sys.argv[1:]), "version": __version__,
           "wall_time_s": round(time.time() - args._t0, 3)}
    if extra:
        doc.update(extra)
    write_json(path, doc)


def _cmd_units(args) -> int:
    cfg = load_config(args.config)
    doc = {"scaled": cfg.scaled.as_dict(), "warnings": cfg.warnings}
    from .units import effective_potential_validity
    rep = effective_potential_validity(cfg.scaled)
    doc["effective_potential"] = {"status": rep.status, "message": rep.message}
    out = json.dumps(doc, indent=2, sort_keys=True)
    if args.out_dir:
        write_json(Path(args.out_dir) / "scaled.json", doc)
    print(out)
    return EXIT_OK


def _cmd_mathieu(args) -> int:
    rows = []
    for nu in args.nu:
        for q in args.q:
            rows.append((nu, q, mathieu.char_value(nu, q)))
    out = Path(args.out_dir) / "mathieu.csv" if args.out_dir else None
    if out:
        write_csv(out, ["nu", "q", "a"], rows)
        _meta_sidecar(out.with_suffix(".meta.json"), args)
    else:
        print("nu,q,a")
        for r in rows:
            print(",".join(repr(float(v)) for v in r))
    return EXIT_OK


def _cmd_bands(args) -> int:
    kappas = np.linspace(0.0, 1.0, args.kpoints)
    rows = []
    for n in range(args.bands):
        for k in kappas:
            rows.append((n, k, mathieu.band_energy(n, float(k), args.q0)))
    out = Path(args.out_dir) / "bands.csv" if args.out_dir else None
    if out:
        write_csv(out, ["n", "kappa", "energy_Er"], rows)
        _meta_sidecar(out.with_suffix(".meta.json"), args,
                      {"q0": args.q0, "edge_gap": mathieu.band_edge_gap(args.q0),
                       "mean_separation": mathieu.mean_band_separation(args.q0)})
    else:
        print("n,kappa,energy_Er")
        for r in rows:
            print(f"{int(r[0])},{r[1]!r},{r[2]!r}")
    return EXIT_OK


def _cmd_times(args) -> int:
    cfg = load_config(args.config) if args.config else None
    if cfg is not None:
        scaled0 = cfg.scaled
        nbar, l, method, beta = cfg.nbar, cfg.l, cfg.method, cfg.beta
    else:
        scaled0 = ScaledParams(kbar=args.kbar, lattice_depth_recoil=args.vprime,
                               interaction_G=0.0, lambda_drive=0.0)
        nbar, l, method, beta = args.nbar, 0, "harmonic", args.beta
    if args.regime == "auto":
        regimes = ("undriven", "delicate", "robust", "robust_harmonic")
    else:
        regimes = (args.regime.replace("-", "_"),)
    rows = analysis.sweep(args.lambda_grid, scaled0, nbar=nbar, l=l,
                          method=method, beta=beta, regimes=regimes)
    header = ["lambda", "q", "regime", "t_cl", "t_rev", "t_spr", "warnings", "error"]
    out = Path(args.out_dir) / "times.csv" if args.out_dir else None
    if out:
        write_csv(out, header, ([r.get(h, "") for h in header] for r in rows))
        _meta_sidecar(out.with_suffix(".meta.json"), args)
    else:
        print(",".join(header))
        for r in rows:
            print(",".join(str(r.get(h, "")) for h in header))
    return EXIT_OK


def _parse_seeds(spec: str) -> list[tuple[float, float]]:
    if Path(spec).exists():
        cols = read_csv_columns(spec)
        return list(zip(cols["z"], cols["p"]))
    if spec.startswith("grid:"):
        _, zpart, ppart = spec.split(":")
        z = _grid_spec(zpart.replace(";", ":"))
        p = _grid_spec(ppart.replace(";", ":"))
        return [(float(zz), float(pp)) for zz in z for pp in p]
    raise argparse.ArgumentTypeError(
        "seeds must be a CSV path with z,p columns or grid:start;stop;n:start;stop;n")


def _cmd_poincare(args) -> int:
    try:
        params = classical.ClassicalParams(kappa=args.kappa, lam=args.lam,
                                           dt=2.0 * math.pi / args.steps_per_period)
    except ValueError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    seeds = _parse_seeds(args.seeds)
    sec = classical.poincare(seeds, params, args.periods, threads=args.threads)
    out = Path(args.out_dir) / "poincare.csv"
    write_csv(out, ["seed_id", "period_index", "z", "p"],
              zip(sec.seed_ids, sec.period_indices, sec.z, sec.p))
    _meta_sidecar(out.with_suffix(".meta.json"), args,
                  {"kappa": args.kappa, "lambda": args.lam, "periods": args.periods,
                   "seeds": len(seeds)})
    print(out)
    return EXIT_OK


def _cmd_evolve(args) -> int:
    cfg = load_config(args.config)
    grid = cfg.grid
    psi = quantum.init_gaussian(grid, z0=cfg.z0, p0=cfg.p0, delta_p=cfg.delta_p,
                                kbar=cfg.scaled.kbar)
    try:
        rec = quantum.evolve(psi, cfg.scaled, cfg.tau_end, dt=cfg.dt,
                             snapshot_stride=cfg.snapshot_stride,
                             with_interaction=cfg.with_interaction)
    except (quantum.NormDriftError, quantum.StepTooLargeError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    out = Path(args.out_dir)
    series = quantum.autocorrelation(rec)
    write_csv(out / "autocorr.csv", ["tau", "A2"], zip(series.times, series.values))
    times, z, dens = quantum.density_map(rec)
    rows = []
    for i in range(len(times)):
        for j in range(len(z)):
            rows.append((times[i], z[j], dens[i, j]))
    write_csv(out / "density.csv", ["tau", "z", "rho"], rows)
    meta = dict(rec.metadata)
    meta.update(version=__version__, wall_time_s=round(time.time() - args._t0, 3),
                config_echo=cfg.raw, scaled=cfg.scaled.as_dict())
    write_json(out / "meta.json", meta)
    print(out / "autocorr.csv")
    return EXIT_OK


def _cmd_analyze(args) -> int:
    cols = read_csv_columns(args.csv)
    tname = "tau" if "tau" in cols else list(cols)[0]
    vname = "A2" if "A2" in cols else list(cols)[1]
    series = analysis.AutocorrelationSeries(np.asarray(cols[tname]),
                                            np.asarray(cols[vname]))
    report: dict = {"extracted": {}, "errors": {}}
    diag: dict = {}
    try:
        tcl = analysis.extract_classical_period(series, prominence=args.prominence,
                                                diagnostics=diag)
        report["extracted"]["t_cl"] = tcl
    except analysis.ExtractionFailedError as exc:
        report["errors"]["t_cl"] = str(exc)
        tcl = args.t_cl_hint
    hint = args.t_cl_hint or report["extracted"].get("t_cl")
    if hint:
        try:
            report["extracted"]["t_rev"] = analysis.extract_revival_time(
                series, hint, diagnostics=diag)
        except analysis.ExtractionFailedError as exc:
            report["errors"]["t_rev"] = str(exc)
    rev_hint = args.t_rev_hint or report["extracted"].get("t_rev")
    if rev_hint:
        try:
            report["extracted"]["t_spr"] = analysis.extract_super_revival(
                series, rev_hint, diagnostics=diag)
        except analysis.ExtractionFailedError as exc:
            report["errors"]["t_spr"] = str(exc)
    report["diagnostics"] = diag
    if args.out_dir:
        write_json(Path(args.out_dir) / "analysis.json", report)
        write_csv(Path(args.out_dir) / "analysis.csv",
                  ["quantity", "value"],
                  [(k, v) for k, v in report["extracted"].items()])
    print(json.dumps(report, indent=2, sort_keys=True))
    return EXIT_OK if not report["errors"] else EXIT_ASSERTION


def _cmd_sweep(args) -> int:
    cfg = load_config(args.config)
    rows = analysis.sweep(args.lambda_grid, cfg.scaled, N=cfg.N, nbar=cfg.nbar,
                          l=cfg.l, method=cfg.method, beta=cfg.beta,
                          regimes=tuple(args.regimes.split(",")))
    header = ["lambda", "q", "regime", "t_cl", "t_rev", "t_spr", "warnings", "error"]
    out = Path(args.out_dir) / "sweep.csv"
    write_csv(out, header, ([r.get(h, "") for h in header] for r in rows))
    _meta_sidecar(out.with_suffix(".meta.json"), args,
                  {"config_echo": cfg.raw, "scaled": cfg.scaled.as_dict()})
    print(out)
    return EXIT_OK


def _cmd_recipe(args) -> int:
    try:
        ok = recipes.run_recipe(args.name, Path(args.out_dir) / args.name,
                                full=args.full, threads=args.threads)
    except KeyError as exc:
        print(exc.args[0], file=sys.stderr)
        return EXIT_VALIDATION
    return EXIT_OK if ok else EXIT_ASSERTION


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="drivenlattice",
        description="Recurrence time scales and wavepacket dynamics in driven optical lattices")
    ap.add_argument("--out-dir", default=None, help="directory for output files")
    ap.add_argument("--threads", type=int, default=1)
    ap.add_argument("--full", action="store_true",
                    help="full-fidelity recipe variants (longer runtimes)")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("units", help="convert a physical config to scaled parameters")
    p.add_argument("--config", required=True)
    p.set_defaults(fn=_cmd_units)

    p = sub.add_parser("mathieu", help="characteristic values a_nu(q)")
    p.add_argument("--nu", type=float, nargs="+", required=True)
    p.add_argument("--q", type=float, nargs="+", required=True)
    p.set_defaults(fn=_cmd_mathieu)

    p = sub.add_parser("bands", help="cosine-lattice band structure")
    p.add_argument("--q0", type=float, required=True)
    p.add_argument("--bands", type=int, default=2)
    p.add_argument("--kpoints", type=int, default=33)
    p.set_defaults(fn=_cmd_bands)

    p = sub.add_parser("times", help="analytic recurrence time scales over a drive grid")
    p.add_argument("--config", default=None)
    p.add_argument("--kbar", type=float, default=0.5)
    p.add_argument("--vprime", type=float, default=16.0)
    p.add_argument("--nbar", type=int, default=None)
    p.add_argument("--beta", type=float, default=None)
    p.add_argument("--regime", default="auto",
                   choices=["auto", "undriven", "delicate", "robust", "robust-harmonic"])
    p.add_argument("--lambda-grid", type=_grid_spec, required=True)
    p.set_defaults(fn=_cmd_times)

    p = sub.add_parser("poincare", help="stroboscopic Poincare section")
    p.add_argument("--kappa", type=float, required=True)
    p.add_argument("--lam", "--lambda", type=float, default=0.0, dest="lam")
    p.add_argument("--seeds", required=True,
                   help="CSV with z,p columns or grid:z0;z1;n:p0;p1;n")
    p.add_argument("--periods", type=int, default=200)
    p.add_argument("--steps-per-period", type=int, default=1000)
    p.set_defaults(fn=_cmd_poincare)

    p = sub.add_parser("evolve", help="split-operator evolution from a config file")
    p.add_argument("--config", required=True)
    p.set_defaults(fn=_cmd_evolve)

    p = sub.add_parser("analyze", help="extract recurrence times from an autocorrelation CSV")
    p.add_argument("kind", choices=["autocorr"])
    p.add_argument("csv")
    p.add_argument("--t-cl-hint", type=float, default=None)
    p.add_argument("--t-rev-hint", type=float, default=None)
    p.add_argument("--prominence", type=float, default=0.1,
                   help="peak prominence relative to the series maximum")
    p.set_defaults(fn=_cmd_analyze)

    p = sub.add_parser("sweep", help="time-scale sweep from a config file")
    p.add_argument("--config", required=True)
    p.add_argument("--lambda-grid", type=_grid_spec, required=True)
    p.add_argument("--regimes", default="delicate,robust")
    p.set_defaults(fn=_cmd_sweep)

    p = sub.add_parser("recipe", help="run a bundled figure-reproduction recipe")
    p.add_argument("name")
    p.set_defaults(fn=_cmd_recipe)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    args._t0 = time.time()
    if args.out_dir is None and args.command in ("poincare", "evolve", "sweep", "recipe"):
        ap.error("--out-dir is required for commands that write files")
    try:
        return args.fn(args)
    except ConfigError as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (quantum.GridTooSmallError, resonance.FormulaError, ValueError) as exc:
        print(f"validation error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (quantum.NormDriftError, mathieu.MathieuConvergenceError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
