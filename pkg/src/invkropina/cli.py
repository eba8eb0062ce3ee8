"""Command-line interface.

Usage:
    invkropina models list
    invkropina models export u2_central_kropina -o u2.json
    invkropina validate u2.json
    invkropina flag u2_central_kropina --y 1,0,1,0 --u 0,1,0,0
    invkropina scan u2.json --samples 100 --seed 7 -o scan.csv
    invkropina compare u2.json --printed-tolerance 1e-12

MODEL arguments accept either a model file path or a built-in model name.

Exit codes: 0 success, 2 usage, 3 parse/input, 4 validation, 5 degenerate
direction or flag, 6 tolerance failure, 7 output I/O.
"""
from __future__ import annotations

import csv
import io
import json
import sys
import warnings
from pathlib import Path

import click
import numpy as np

from . import kernels
from .algebra import DEFAULT_TOL
from .errors import DegenerateDirection, DegenerateFlag, KropinaError, ModelFileError, ValidationError
from .kropina import DEGENERACY_RTOL, Flag, scan
from .modelfile import dumps_model, load_model
from .models import builtin, catalog
from .oracles import compare_model

EXIT_OK = 0
EXIT_PARSE = 3
EXIT_VALIDATION = 4
EXIT_DEGENERATE = 5
EXIT_TOLERANCE = 6
EXIT_IO = 7


def _fail(message: str, code: int):
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _resolve(model: str, validate: bool = True):
    path = Path(model)
    try:
        if path.exists():
            return load_model(path, validate=validate)
        try:
            return builtin(model, validate=validate)
        except KeyError:
            _fail(f"{model!r} is neither a readable file nor a built-in model", EXIT_PARSE)
    except ModelFileError as exc:
        _fail(str(exc), EXIT_PARSE)
    except ValidationError as exc:
        click.echo(exc.report.format() if exc.report else "", err=True)
        _fail(str(exc), EXIT_VALIDATION)


def _coords(text: str, name: str) -> np.ndarray:
    try:
        return np.array([float(t) for t in text.replace(" ", "").split(",") if t], dtype=float)
    except ValueError:
        _fail(f"--{name} must be comma-separated numbers, got {text!r}", EXIT_PARSE)


def _fmt_vec(v) -> str:
    return "[" + ", ".join(f"{x: .10g}" for x in v) + "]"


@click.group()
@click.version_option(package_name="artifact")
def cli():
    """Flag curvature of invariant Kropina metrics, with oracle cross-checks."""


# -- models ------------------------------------------------------------------

@cli.group()
def models():
    """Built-in model catalog."""


@models.command("list")
def models_list():
    """List built-in models."""
    for name in catalog():
        spec = builtin(name)
        click.echo(f"{name:<22s} dim={spec.dim:<3d} {spec.notes}")
    click.echo(f"{'abelian_<n>':<22s} dim=n   R^n for any 1 <= n <= 16")


@models.command("export")
@click.argument("name")
@click.option("--output", "-o", type=click.Path(dir_okay=False), default="-", help="Destination (default stdout).")
def models_export(name, output):
    """Write a built-in model as a model file."""
    spec = _resolve(name)
    text = dumps_model(spec)
    if output == "-":
        click.echo(text, nl=False)
        return
    try:
        Path(output).write_text(text, encoding="utf-8")
    except OSError as exc:
        _fail(f"cannot write {output}: {exc.strerror}", EXIT_IO)


# -- validate ----------------------------------------------------------------

@cli.command()
@click.argument("model")
@click.option("--tolerance", type=float, default=DEFAULT_TOL, show_default=True, help="Structural tolerance.")
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text", show_default=True)
def validate(model, tolerance, fmt):
    """Run every structural and hypothesis check on MODEL."""
    spec = _resolve(model, validate=False)
    report = spec.validate(tolerance)
    if fmt == "json":
        click.echo(json.dumps({"model": spec.name, **report.to_dict()}, indent=2))
    else:
        click.echo(f"model: {spec.name or model}")
        click.echo(report.format())
        click.echo("result: " + ("ok" if report.ok else "FAILED"))
    sys.exit(EXIT_OK if report.ok else EXIT_VALIDATION)


# -- flag --------------------------------------------------------------------

@cli.command()
@click.argument("model")
@click.option("--y", "y_text", required=True, help="Flagpole coordinates, comma-separated.")
@click.option("--u", "u_text", required=True, help="Second flag vector, comma-separated.")
@click.option("--step", type=float, default=None, help="Finite-difference step override.")
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text", show_default=True)
def flag(model, y_text, u_text, step, fmt):
    """Flag curvature of span{Y, U} with flagpole Y, by every route."""
    spec = _resolve(model)
    if spec.x_field is None:
        _fail(f"model {spec.name!r} has no invariant vector x", EXIT_VALIDATION)
    y, u = _coords(y_text, "y"), _coords(u_text, "u")
    try:
        ks = spec.kropina()
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            result = ks.flag_curvature_theorem(Flag(y, u))
            k_fd = ks.flag_curvature_direct(result.flag, result.diagnostics["r_vec"], method="fd", step=step)
            bi = (ks.flag_curvature_bi_invariant(result.flag) if ks.ctx.is_bi_invariant_group() else None)
    except DegenerateDirection as exc:
        _fail(f"{exc} (relative threshold {DEGENERACY_RTOL:g})", EXIT_DEGENERATE)
    except DegenerateFlag as exc:
        _fail(str(exc), EXIT_DEGENERATE)
    except KropinaError as exc:
        _fail(str(exc), EXIT_PARSE)

    doc = {"model": spec.name, **result.to_dict(), "k_direct_fd": k_fd}
    doc["diagnostics"].pop("r_vec", None)
    doc["r_vec"] = result.diagnostics["r_vec"].tolist()
    if bi is not None:
        doc["bi_invariant"] = {"k_theorem_consistent": bi.k_theorem_consistent,
                               "k_theorem_printed": bi.k_theorem_printed}
    if fmt == "json":
        click.echo(json.dumps(doc, indent=2))
        return
    rows = [
        ("model", spec.name),
        ("Y (orthonormalized)", _fmt_vec(result.flag.y)),
        ("U (orthonormalized)", _fmt_vec(result.flag.u)),
        ("<Y,X>", f"{result.beta_y:.12g}"),
        ("<U,X>", f"{result.u_x:.12g}"),
        ("R(U,Y)Y", _fmt_vec(doc["r_vec"])),
        ("k_direct", f"{result.k_direct:.12g}"),
        ("k_direct_fd", f"{k_fd:.12g}"),
        ("k_theorem_consistent", f"{result.k_theorem_consistent:.12g}"),
        ("k_theorem_printed", f"{result.k_theorem_printed:.12g}"),
        ("residual_consistent", f"{result.residual_consistent_vs_direct:.3e}"),
        ("residual_printed", f"{result.residual_printed_vs_direct:.3e}"),
    ]
    if bi is not None:
        rows.append(("bi_invariant_consistent", f"{bi.k_theorem_consistent:.12g}"))
        rows.append(("bi_invariant_printed", f"{bi.k_theorem_printed:.12g}"))
    for key, val in rows:
        click.echo(f"{key:<24s} {val}")
    if result.beta_negative:
        click.echo("warning: <Y,X> < 0, so F(Y) < 0; Y lies outside the cone where F is a Finsler norm")


# -- scan --------------------------------------------------------------------

def scan_header(dim: int) -> list[str]:
    return (["seed", "index"] + [f"y{i}" for i in range(dim)] + [f"u{i}" for i in range(dim)]
            + ["beta_y", "k_direct", "k_theorem_consistent", "k_theorem_printed",
               "residual_consistent_vs_direct", "residual_printed_vs_direct"])


def scan_records(rows, dim: int) -> list[list]:
    return [[r.seed, r.index, *map(float, r.y), *map(float, r.u), r.beta_y, r.k_direct,
             r.k_theorem_consistent, r.k_theorem_printed, r.residual_consistent_vs_direct,
             r.residual_printed_vs_direct] for r in rows]


@cli.command("scan")
@click.argument("model")
@click.option("--samples", type=click.IntRange(min=0), default=100, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--output", "-o", type=click.Path(dir_okay=False), default="-", help="Destination (default stdout).")
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text", show_default=True,
              help="text writes CSV.")
@click.option("--min-cos", type=float, default=DEGENERACY_RTOL, show_default=True,
              help="Reject flagpoles with |<Y,X>| below this fraction of |Y||X|.")
def scan_cmd(model, samples, seed, output, fmt, min_cos):
    """Evaluate random orthonormal admissible flags."""
    spec = _resolve(model)
    if spec.x_field is None:
        _fail(f"model {spec.name!r} has no invariant vector x", EXIT_VALIDATION)
    ks = spec.kropina()
    rows = scan(ks, samples, seed, min_cos=min_cos)
    header = scan_header(spec.dim)
    records = scan_records(rows, spec.dim)
    if fmt == "json":
        text = json.dumps({"model": spec.name, "backend": kernels.BACKEND, "columns": header,
                           "rows": records}, indent=1) + "\n"
    else:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(header)
        writer.writerows([[repr(v) if isinstance(v, float) else v for v in rec] for rec in records])
        text = buf.getvalue()

    max_cons = max((r.residual_consistent_vs_direct for r in rows), default=0.0)
    max_print = max((r.residual_printed_vs_direct for r in rows), default=0.0)
    summary = (f"rows={len(rows)} max_residual_consistent_vs_direct={max_cons:.3e} "
               f"max_residual_printed_vs_direct={max_print:.3e}")
    if output == "-":
        click.echo(text, nl=False)
        click.echo(summary, err=True)
        return
    try:
        Path(output).write_text(text, encoding="utf-8")
    except OSError as exc:
        _fail(f"cannot write {output}: {exc.strerror}", EXIT_IO)
    click.echo(summary)


# -- compare -----------------------------------------------------------------

@cli.command()
@click.argument("model")
@click.option("--samples", type=click.IntRange(min=1), default=50, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--tolerance", type=float, default=None,
              help="One tolerance for every pairing (default: per-pairing values).")
@click.option("--printed-tolerance", type=float, default=None,
              help="Also gate the printed closed form against the direct route.")
@click.option("--step", type=float, default=None, help="Finite-difference step override.")
@click.option("--format", "fmt", type=click.Choice(["text", "json"]), default="text", show_default=True)
def compare(model, samples, seed, tolerance, printed_tolerance, step, fmt):
    """Run every applicable oracle pairing on MODEL."""
    spec = _resolve(model)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore")
        report = compare_model(spec, samples=samples, seed=seed, tolerance=tolerance,
                               printed_tolerance=printed_tolerance, step=step)
    worst = report.worst()
    if fmt == "json":
        click.echo(json.dumps({"model": spec.name, **report.to_dict(),
                               "worst": worst.name if worst else None}, indent=2))
    else:
        click.echo(f"model: {spec.name or model}")
        click.echo(report.format())
        click.echo("result: ok" if report.ok else f"result: FAILED (worst pairing: {worst.name})")
    sys.exit(EXIT_OK if report.ok else EXIT_TOLERANCE)


def main():  # pragma: no cover
    cli()


if __name__ == "__main__":  # pragma: no cover
    main()
