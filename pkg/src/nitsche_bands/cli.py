"""Command-line entry point: ``phononic-bands {bands,converge,dump}``.

Exit codes: 0 success, 2 configuration error, 3 numerical failure.
"""
from __future__ import annotations

import argparse
import csv
import json
import logging
import os
import sys
from pathlib import Path

import numpy as np

from .assembly import coercivity_ratios, dump_coo, hermitian_defect
from .band import compute_bands, convergence_study, detect_gaps
from .config import RunConfig, load_config, parse_scalar
from .exceptions import (ConfigurationError, ConvergenceError, DegenerateInterfaceError,
                         NitscheBandsError)
from .svg import write_band_svg

logger = logging.getLogger("nitsche_bands")

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC = 0, 2, 3


def fmt(x) -> str:
    return format(float(x), ".17g")


def _writer(fh):
    return csv.writer(fh, lineterminator="\n")


def _resolve_threads(arg) -> int:
    if arg is not None:
        n = arg
    else:
        env = os.environ.get("PHONONIC_THREADS")
        try:
            n = int(env) if env else (os.cpu_count() or 1)
        except ValueError:
            raise ConfigurationError(f"PHONONIC_THREADS must be an integer, got {env!r}") from None
    if n < 1:
        raise ConfigurationError(f"thread count must be >= 1, got {n}")
    return n


def _resolve_out(arg, cfg: RunConfig) -> Path:
    out = Path(arg or os.environ.get("PHONONIC_OUT") or cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    return out


def write_bands_csv(path, bands) -> None:
    with open(path, "w", newline="") as fh:
        w = _writer(fh)
        w.writerow(["arc_param", "kx", "ky", "band", "omega2", "normalized_freq"])
        for s in bands.samples:
            for j, (w2, f) in enumerate(zip(s.omega2, s.freq)):
                w.writerow([fmt(s.arc), fmt(s.kpoint.kx), fmt(s.kpoint.ky), j + 1, fmt(w2), fmt(f)])


def write_gaps(path, gaps) -> None:
    with open(path, "w", newline="") as fh:
        w = _writer(fh)
        w.writerow(["band_low", "bottom", "top", "width"])
        for g in gaps:
            w.writerow([g.band_low, fmt(g.bottom), fmt(g.top), fmt(g.width)])


def write_convergence_csv(path, report) -> None:
    n_levels, m = report.eigenvalues.shape
    with open(path, "w", newline="") as fh:
        w = _writer(fh)
        w.writerow(["level", "N", "h", "eig_index", "omega2", "rel_err", "rate"])
        for j in range(n_levels):
            for i in range(m):
                err = fmt(report.rel_errors[j, i]) if j < n_levels - 1 else ""
                rate = fmt(report.rates[j, i]) if j < n_levels - 2 else ""
                w.writerow([j, report.levels[j], fmt(report.h[j]), i + 1,
                            fmt(report.eigenvalues[j, i]), err, rate])


def cmd_bands(cfg: RunConfig, out: Path, threads: int, svg: bool) -> int:
    disc = cfg.discretize()
    logger.info("N=%d, %d dofs, %d k-points", cfg.N, disc.n_dofs, cfg.path.n_samples)
    bands = compute_bands(disc, cfg.path, cfg.m, cfg.tol, threads=threads, method=cfg.method)
    gaps = detect_gaps(bands) if cfg.m >= 2 else ()
    write_bands_csv(out / "bands.csv", bands)
    write_gaps(out / "gaps.csv", gaps)
    if svg:
        write_band_svg(out / "bands.svg", bands, gaps if cfg.m >= 2 else None)
    for g in gaps:
        print(f"gap above band {g.band_low}: [{g.bottom:.6g}, {g.top:.6g}] width {g.width:.6g}")
    if not len(gaps):
        print("no complete band gap")
    return EXIT_OK


def cmd_converge(cfg: RunConfig, out: Path) -> int:
    report = convergence_study(cfg.crystal, cfg.conv_k, cfg.levels, cfg.conv_m, eps_cut=cfg.eps_cut,
                               gamma_hat=cfg.gamma_hat, diagonal=cfg.diagonal, tol=cfg.tol)
    write_convergence_csv(out / "converge.csv", report)
    for j, r in enumerate(report.rates):
        print(f"rates N={report.levels[j]}..{report.levels[j + 2]}: "
              + " ".join(f"{v:.3f}" for v in r))
    return EXIT_OK


def cmd_dump(cfg: RunConfig, out: Path, k=None) -> int:
    kvec = np.asarray(k, dtype=float) if k is not None else cfg.dump_k.k
    disc = cfg.discretize()
    parts = disc.parts(kvec)
    mats = parts.system()
    with open(out / "A.txt", "w", newline="\n") as fh:
        dump_coo(mats.A, fh)
    with open(out / "B.txt", "w", newline="\n") as fh:
        dump_coo(mats.B, fh)
    m = min(cfg.m, mats.n_dofs)
    res = disc.solve(kvec, m, cfg.tol, method=cfg.method)
    summary = {
        "k": [float(v) for v in kvec],
        "n_dofs": int(mats.n_dofs),
        "nnz_A": int(mats.A.nnz),
        "nnz_B": int(mats.B.nnz),
        "hermitian_defect_A": hermitian_defect(mats.A),
        "hermitian_defect_B": hermitian_defect(mats.B),
        "coercivity_min_ratio": float(coercivity_ratios(parts, 100, rng=0).min()),
        "smallest_omega2": [float(v) for v in res.eigenvalues],
    }
    with open(out / "summary.json", "w", newline="\n") as fh:
        json.dump(summary, fh, indent=2)
        fh.write("\n")
    print(json.dumps(summary, indent=2))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="phononic-bands",
                                description="Phononic crystal band structures with unfitted Nitsche FEM.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)
    for name, helptext in (("bands", "band structure along the configured k-path"),
                           ("converge", "mesh convergence study at one k-point"),
                           ("dump", "write the system matrices and a diagnostic summary")):
        sp = sub.add_parser(name, help=helptext)
        sp.add_argument("--config", required=True, help="YAML configuration file")
        sp.add_argument("--out", help="output directory (overrides PHONONIC_OUT and the config)")
        if name == "bands":
            sp.add_argument("--threads", type=int, help="worker threads (PHONONIC_THREADS)")
            sp.add_argument("--svg", action="store_true", help="also write bands.svg")
        if name == "dump":
            sp.add_argument("--k", nargs=2, metavar=("KX", "KY"),
                            help="quasi-momentum, numbers or multiples of pi")
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        cfg = load_config(args.config)
        out = _resolve_out(args.out, cfg)
        if args.command == "bands":
            return cmd_bands(cfg, out, _resolve_threads(args.threads), args.svg or cfg.svg)
        if args.command == "converge":
            return cmd_converge(cfg, out)
        k = None
        if args.k is not None:
            k = [parse_scalar(v, "--k") for v in args.k]
        return cmd_dump(cfg, out, k)
    except (ConfigurationError, DegenerateInterfaceError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except ConvergenceError as exc:
        msg = f"numerical failure: {exc}"
        if exc.residuals is not None:
            msg += "\nresiduals: " + " ".join(f"{r:.3e}" for r in np.atleast_1d(exc.residuals))
        print(msg, file=sys.stderr)
        return EXIT_NUMERIC
    except NitscheBandsError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
