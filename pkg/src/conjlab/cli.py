"""Command-line front-end.

One-shot verbs over JSON inputs: spectra, classification, Takagi
factorization, eigenframes, measurability verdicts, metrology sweeps, the
reference table/landscape artifacts, and the invariant suite.  Identical
inputs and seeds produce byte-identical outputs.

Exit codes: 0 success; 1 validation error; 2 Indeterminate measurability
verdict; 3 invariant-suite failure.
"""
from __future__ import annotations

import os
import sys

import click

from . import io
from .errors import ConjlabError
from .service import handlers

_SEED_ENV = "CONJLAB_SEED"


def _resolve_seed(seed: int | None) -> int | None:
    if seed is not None:
        return seed
    env = os.environ.get(_SEED_ENV)
    if env is None:
        return None
    try:
        return int(env)
    except ValueError as exc:
        raise ConjlabError(f"{_SEED_ENV} must be an integer, got {env!r}") from exc


def _read_payload(path: str) -> dict:
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, "r", encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise ConjlabError(f"cannot read {path}: {exc}") from exc
    obj = io.loads(text, path)
    if not isinstance(obj, dict):
        raise ConjlabError(f"{path}: top-level JSON must be an object")
    return obj


def _emit(text: str, out: str | None) -> None:
    if out is None or out == "-":
        click.echo(text, nl=False)
        return
    try:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    except OSError as exc:
        raise ConjlabError(f"cannot write {out}: {exc}") from exc


def _fail(message: str, code: int = 1) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


def _tol_options(fn):
    fn = click.option("--tol", type=float, default=None,
                      help="Equality tolerance (default 1e-9).")(fn)
    fn = click.option("--deg-tol", type=float, default=None,
                      help="Degeneracy clustering tolerance (default 1e-7).")(fn)
    fn = click.option("--fisher-tol", type=float, default=None,
                      help="Fisher-matrix tolerance (default 1e-6).")(fn)
    return fn


def _out_options(fn):
    fn = click.option("--out", type=str, default=None,
                      help="Output path (default stdout).")(fn)
    fn = click.option("--format", "fmt", type=click.Choice(["json", "csv"]),
                      default=None, help="Output format.")(fn)
    return fn


@click.group()
def main() -> None:
    """Conjugation-symmetry toolkit: spectra, measurability, eigenframes,
    and QCRB-saturating measurements."""


@main.command()
@click.argument("input_path")
@_tol_options
@_out_options
def spectrum(input_path, tol, deg_tol, fisher_tol, out, fmt) -> None:
    """Magic-basis spectrum of a two-qubit conjugation JSON."""
    del tol, fisher_tol
    if fmt == "csv":
        _fail("spectrum output is JSON-only")
    try:
        payload = {"conjugation": _read_payload(input_path),
                   "degeneracy_tol": deg_tol}
        _emit(io.dumps(handlers.spectrum_handler(payload)), out)
    except ConjlabError as exc:
        _fail(str(exc))


@main.command()
@click.argument("input_path")
@_tol_options
@_out_options
def classify(input_path, tol, deg_tol, fisher_tol, out, fmt) -> None:
    """Measurability class, spectrum and witness of a two-qubit conjugation."""
    del fisher_tol
    if fmt == "csv":
        _fail("classify output is JSON-only")
    try:
        payload = {"conjugation": _read_payload(input_path),
                   "tol": tol, "degeneracy_tol": deg_tol}
        _emit(io.dumps(handlers.classify_handler(payload)), out)
    except ConjlabError as exc:
        _fail(str(exc))


@main.command()
@click.argument("input_path")
@_tol_options
@_out_options
def takagi(input_path, tol, deg_tol, fisher_tol, out, fmt) -> None:
    """Takagi factorization V diag(λ) Vᵀ of a complex symmetric matrix JSON."""
    del fisher_tol
    if fmt == "csv":
        _fail("takagi output is JSON-only")
    try:
        payload = {"matrix": _read_payload(input_path),
                   "tol": tol, "degeneracy_tol": deg_tol}
        _emit(io.dumps(handlers.takagi_handler(payload)), out)
    except ConjlabError as exc:
        _fail(str(exc))


@main.command()
@click.argument("input_path")
@click.option("--stiefel", type=str, default=None,
              help="JSON file with a real n×4 Stiefel matrix (default: Hadamard frame).")
@_tol_options
@_out_options
def eigenframe(input_path, stiefel, tol, deg_tol, fisher_tol, out, fmt) -> None:
    """Minimum-entanglement eigenframe of a two-qubit conjugation."""
    del tol, fisher_tol
    if fmt == "csv":
        _fail("eigenframe output is JSON-only")
    try:
        payload = {"conjugation": _read_payload(input_path),
                   "degeneracy_tol": deg_tol}
        if stiefel is not None:
            obj = _read_payload(stiefel)
            if "re" in obj:
                payload["stiefel"] = obj["re"]
            else:
                raise ConjlabError(f"{stiefel}: expected a matrix object with 're'")
        _emit(io.dumps(handlers.eigenframe_handler(payload)), out)
    except ConjlabError as exc:
        _fail(str(exc))


@main.command()
@click.argument("input_path")
@click.option("--budget", type=int, default=256,
              help="Random congruence attempts for degenerate cases.")
@click.option("--seed", type=int, default=None,
              help=f"RNG seed (fallback: ${_SEED_ENV}, then 0).")
@_tol_options
@_out_options
def measurability(input_path, budget, seed, tol, deg_tol, fisher_tol, out, fmt) -> None:
    """Prod-measurability verdict for a multipartite conjugation.

    Exits 2 when the verdict is Indeterminate."""
    del fisher_tol
    if fmt == "csv":
        _fail("measurability output is JSON-only")
    try:
        resolved = _resolve_seed(seed)
        payload = {"conjugation": _read_payload(input_path), "budget": budget,
                   "seed": resolved if resolved is not None else 0,
                   "tol": tol, "degeneracy_tol": deg_tol}
        report = handlers.measurability_handler(payload)
        _emit(io.dumps(report), out)
        if report["verdict"] == "Indeterminate":
            sys.exit(2)
    except ConjlabError as exc:
        _fail(str(exc))


@main.command()
@click.argument("config_path")
@_tol_options
@_out_options
def magnetometry(config_path, tol, deg_tol, fisher_tol, out, fmt) -> None:
    """Field-sensing sweep: Fisher matrices of the protected measurement."""
    del tol, deg_tol
    try:
        payload = _read_payload(config_path)
        if fisher_tol is not None:
            payload["fisher_tol"] = fisher_tol
        result = handlers.magnetometry_handler(payload)
        if fmt == "csv":
            _emit(io.magnetometry_sweep_csv(result["points"]), out)
        else:
            _emit(io.dumps(result), out)
    except ConjlabError as exc:
        _fail(str(exc))


@main.command()
@click.argument("config_path")
@_tol_options
@_out_options
def antiparallel(config_path, tol, deg_tol, fisher_tol, out, fmt) -> None:
    """Antiparallel-encoding sweep: Fisher doubling and saturation."""
    del tol, deg_tol
    try:
        payload = _read_payload(config_path)
        payload.setdefault("experiment", "antiparallel")
        if fisher_tol is not None:
            payload["fisher_tol"] = fisher_tol
        result = handlers.antiparallel_handler(payload)
        if fmt == "csv":
            _emit(io.magnetometry_sweep_csv(result["points"]), out)
        else:
            _emit(io.dumps(result), out)
    except ConjlabError as exc:
        _fail(str(exc))


@main.command()
@_out_options
def table1(out, fmt) -> None:
    """Spectra and measurability tags of the reference conjugations."""
    try:
        rows = handlers.table1_handler()
        if fmt == "csv":
            _emit(io.table1_csv(rows["rows"]), out)
        else:
            _emit(io.dumps(rows), out)
    except ConjlabError as exc:
        _fail(str(exc))


@main.command()
@click.option("--grid", type=int, default=64, show_default=True,
              help="Grid resolution per axis (phases 2πk/grid).")
@_out_options
def figure2(grid, out, fmt) -> None:
    """Minimum-average-concurrence landscape over the (φ₂, φ₃) triangle."""
    try:
        if fmt == "json":
            _emit(io.dumps(handlers.figure2_handler(grid)), out)
        else:
            _emit(io.figure2_csv(io.figure2_rows(grid)), out)
    except ConjlabError as exc:
        _fail(str(exc))


@main.command()
@click.option("--seed", type=int, default=None,
              help=f"RNG seed (fallback: ${_SEED_ENV}, then 0).")
@click.option("--checks", type=str, default=None,
              help="Comma-separated subset of check names (default: all).")
@_out_options
def verify(seed, checks, out, fmt) -> None:
    """Run the cross-module invariant suite; exits 3 on any violation."""
    if fmt == "csv":
        _fail("verify output is JSON-only")
    try:
        resolved = _resolve_seed(seed)
        payload = {"seed": resolved if resolved is not None else 0}
        if checks:
            payload["checks"] = [c.strip() for c in checks.split(",") if c.strip()]
        result = handlers.verify_handler(payload)
        for rec in result["results"]:
            status = "PASS" if rec["ok"] else "FAIL"
            line = f"{status}  {rec['name']}"
            if not rec["ok"]:
                line += f"  ({rec['detail']})"
            click.echo(line, err=True)
        if out is not None:
            _emit(io.dumps(result), out)
        if not result["passed"]:
            sys.exit(3)
    except ConjlabError as exc:
        _fail(str(exc))


if __name__ == "__main__":
    main()
