"""Experiment runner.

``warpconv run [STUDY]`` executes one study (or the whole default suite),
writing per-study JSON reports, headline CSVs and rendered figures into the
output directory.  Exit codes: 0 all contracts pass, 2 configuration error,
3 a numerical contract failed, 4 an engine error (non-convergence,
unresolved quadrature, degenerate samples).
"""

from __future__ import annotations

import json
import os
import sys
import time
from pathlib import Path

import click

from . import __version__
from .errors import (ConfigError, DegenerateSamplesError, ExtrapolationError,
                     InfeasibleBoundError, QuadratureRangeError)
from .reports import (plot_residual_bars, plot_series, write_headline_csv,
                      write_report, write_series_csv)
from .studies import STUDIES, run_study

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_CONTRACT = 3
EXIT_ENGINE = 4

_ENGINE_ERRORS = (ExtrapolationError, QuadratureRangeError,
                  DegenerateSamplesError, InfeasibleBoundError)


def _default_out() -> str:
    return os.environ.get("WARPCONV_OUT", "warpconv-reports")


def _load_config(path: str | None) -> dict:
    if path is None:
        return {}
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except FileNotFoundError as exc:
        raise ConfigError(f"config file not found: {path}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(
            f"malformed config {path}: line {exc.lineno}, column {exc.colno}: "
            f"{exc.msg}") from exc
    if not isinstance(doc, dict):
        raise ConfigError("config must be a JSON object")
    known = {"study", "seed", "out_dir", "params"}
    unknown = set(doc) - known
    if unknown:
        raise ConfigError(f"unknown config fields: {sorted(unknown)} "
                          f"(expected a subset of {sorted(known)})")
    return doc


def _parse_overrides(pairs) -> dict:
    out = {}
    for pair in pairs:
        if "=" not in pair:
            raise ConfigError(f"override must look like key=value: {pair!r}")
        key, _, raw = pair.partition("=")
        try:
            out[key.strip()] = json.loads(raw)
        except json.JSONDecodeError:
            out[key.strip()] = raw
    return out


@click.group()
@click.version_option(__version__)
def main():
    """Warped-convolution experiments: deformation engines and diagnostics."""


@main.command("list-studies")
def list_studies():
    """Enumerate the available studies."""
    for name in sorted(STUDIES):
        click.echo(f"{name:16s} {STUDIES[name][1]}")


@main.command("run")
@click.argument("study", required=False)
@click.option("--config", "config_path", type=str, default=None,
              help="JSON config file (fields: study, seed, out_dir, params).")
@click.option("--out", "out_dir", type=str, default=None,
              help="Output directory (default $WARPCONV_OUT or "
                   "./warpconv-reports).")
@click.option("--seed", type=int, default=None, help="Random seed.")
@click.option("--B", "b_vector", type=float, nargs=3, default=None,
              help="Axial deformation field (three components).")
@click.option("--n", "exponent_n", type=float, default=None,
              help="Generator exponent in x/|x|^n.")
@click.option("--theta-spatial", type=float, default=None,
              help="Purely spatial deformation entry for the Fock studies.")
@click.option("--set", "overrides", multiple=True,
              help="Parameter override key=value (JSON-typed), repeatable.")
@click.option("--parallel", is_flag=True, default=False,
              help="Run independent studies in worker processes.")
def run(study, config_path, out_dir, seed, b_vector, exponent_n,
        theta_spatial, overrides, parallel):
    """Run STUDY, or the full default suite when no study is named."""
    try:
        cfg = _load_config(config_path)
        cfg_params = cfg.get("params", {})
        if not isinstance(cfg_params, dict):
            raise ConfigError("config field 'params' must be an object")
        params = {**cfg_params, **_parse_overrides(overrides)}
        if b_vector is not None:
            params["B"] = list(b_vector)
        if exponent_n is not None:
            params["n"] = exponent_n
        if theta_spatial is not None:
            params["theta_spatial"] = theta_spatial
        study = study or cfg.get("study")
        seed = seed if seed is not None else cfg.get("seed", 20260808)
        out_dir = Path(out_dir or cfg.get("out_dir") or _default_out())
        names = [study] if study else sorted(STUDIES)
        for name in names:
            if name not in STUDIES:
                raise ConfigError(f"unknown study {name!r}; choose from "
                                  f"{sorted(STUDIES)}")
    except ConfigError as exc:
        click.echo(f"config error: {exc}", err=True)
        sys.exit(EXIT_CONFIG)

    all_passed = True
    try:
        if parallel and len(names) > 1:
            payloads = _run_parallel(names, params if study else {}, seed)
        else:
            payloads = ((name, *_timed_study(name, params if study else {},
                                             seed)) for name in names)
        for name, payload, wall in payloads:
            payload["schema"] = 1
            payload["version"] = __version__
            report_path = write_report(out_dir, name, payload, wall)
            write_headline_csv(out_dir, name, payload["contracts"])
            _render_figures(out_dir, name, payload)
            for row in payload["contracts"]:
                mark = "PASS" if row["passed"] else "FAIL"
                click.echo(f"[{mark}] {name}: {row['check']}: "
                           f"{row['value']:.3e} "
                           f"{row['comparator']} {row['tolerance']:.3e}")
                if not row["passed"]:
                    all_passed = False
            click.echo(f"{name}: report {report_path} ({wall:.1f}s)")
    except _ENGINE_ERRORS as exc:
        click.echo(f"engine error: {exc}", err=True)
        sys.exit(EXIT_ENGINE)
    except ConfigError as exc:
        click.echo(f"config error: {exc}", err=True)
        sys.exit(EXIT_CONFIG)
    sys.exit(EXIT_OK if all_passed else EXIT_CONTRACT)


def _timed_study(name, params, seed):
    t0 = time.perf_counter()
    payload = run_study(name, params, seed)
    return payload, time.perf_counter() - t0


def _run_parallel(names, params, seed):
    import concurrent.futures as cf
    results = []
    with cf.ProcessPoolExecutor(max_workers=min(len(names),
                                                os.cpu_count() or 1)) as pool:
        futures = {pool.submit(_timed_study, name, params, seed): name
                   for name in names}
        done = {}
        for fut in cf.as_completed(futures):
            done[futures[fut]] = fut.result()
    for name in names:   # keep deterministic reporting order
        payload, wall = done[name]
        results.append((name, payload, wall))
    return results


def _render_figures(out_dir: Path, name: str, payload: dict) -> None:
    fig_dir = Path(out_dir) / "figures"
    series = payload.get("series", {})
    refinement = {k: v["points"] for k, v in series.items()
                  if k.startswith("refinement")}
    if refinement:
        plot_series(fig_dir, f"{name}-refinement", refinement,
                    "quadrature points per axis", "relative difference",
                    f"{name}: oracle gap vs quadrature refinement")
    decay = {k: v["points"] for k, v in series.items()
             if k.startswith("decay")}
    if decay:
        plot_series(fig_dir, f"{name}-decay", decay, "|x|",
                    "conjugated-state norm", f"{name}: sampled decay orders")
    envel = {k: v["points"] for k, v in series.items()
             if k.startswith("envelope")}
    if envel:
        plot_series(fig_dir, f"{name}-envelope", envel, "b", "a(b)",
                    f"{name}: relative-bound envelopes", loglog=False)
    contracts = payload.get("contracts", [])
    if contracts:
        plot_residual_bars(
            fig_dir, f"{name}-contracts",
            [row["check"] for row in contracts],
            [max(row["value"], 1e-18) for row in contracts],
            min(row["tolerance"] for row in contracts),
            f"{name}: contract values")


@main.command("emit-plot-data")
@click.argument("report", type=str)
@click.option("--series", "series_name", default=None,
              help="Series name to export (default: all).")
@click.option("--out", "out_dir", type=str, default=None,
              help="Output directory for the CSV files.")
def emit_plot_data(report, series_name, out_dir):
    """Convert a report's convergence series into two-column CSV files."""
    try:
        with open(report) as fh:
            doc = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        click.echo(f"config error: cannot read report: {exc}", err=True)
        sys.exit(EXIT_CONFIG)
    payload = doc.get("payload", doc)
    series = payload.get("series")
    if series is None:
        click.echo("config error: unknown report schema (no 'series' block)",
                   err=True)
        sys.exit(EXIT_CONFIG)
    out_dir = Path(out_dir or Path(report).parent)
    names = [series_name] if series_name else sorted(series)
    for name in names:
        if name not in series:
            click.echo(f"config error: no series named {name!r}", err=True)
            sys.exit(EXIT_CONFIG)
        block = series[name]
        safe = "".join(c if c.isalnum() or c in "-_." else "_" for c in name)
        path = out_dir / f"{Path(report).stem}-{safe}.csv"
        write_series_csv(path, block.get("xlabel", "x"),
                         block.get("ylabel", "y"), block["points"])
        click.echo(str(path))
    sys.exit(EXIT_OK)


if __name__ == "__main__":
    main()
