from __future__ import annotations

import json
import logging
from collections.abc import Iterator
from contextlib import contextmanager
from dataclasses import replace
from fractions import Fraction
from pathlib import Path
from typing import Any, Literal

import numpy as np
import typer

from .config import Config, OutputFormat
from .errors import FormatError, PreconditionError, QuadratureNotConvergedError, StfError
from .exact import Exact, GaussianRational
from .formats import (
    detect_kind,
    expansion_from_json,
    expansion_to_json,
    polynomial_from_json,
    read_json,
    scalar_to_json,
    sph_from_json,
    sph_to_json,
    tensor_from_json,
    tensor_to_json,
    write_json,
)
from .harmonics import Basis, sph_to_stf, stf_to_sph
from .maxwell import (
    UnitVec,
    expand,
    integrate_product,
    maxwell_eval,
    parseval_product,
    quadrupole_fourier_demo,
    reconstruct,
)
from .sym_tensor import detrace, detrace_general, trace
from .verify import Suite, run_suite

logger = logging.getLogger(__name__)

app = typer.Typer(add_completion=False, help="Maxwell multipoles and symmetric trace-free tensors.")

Target = Literal["stf", "sph"]

EXIT_VERIFY_FAILED = 1
EXIT_PARSE = 2
EXIT_ARGUMENT = 3
EXIT_PRECONDITION = 4

RECONSTRUCTION_SAMPLES = 20


def _fail(exc: Exception, code: int) -> None:
    logger.error(f"{type(exc).__name__}: {exc}")
    typer.echo(f"error: {exc}", err=True)
    raise typer.Exit(code=code)


@contextmanager
def _exit_codes() -> Iterator[None]:
    """Translate library errors into the documented exit codes."""
    try:
        yield
    except FormatError as exc:
        _fail(exc, EXIT_PARSE)
    except (PreconditionError, QuadratureNotConvergedError) as exc:
        _fail(exc, EXIT_PRECONDITION)
    except StfError as exc:
        _fail(exc, EXIT_ARGUMENT)


def _config(ctx: typer.Context) -> Config:
    return ctx.obj if isinstance(ctx.obj, Config) else Config()


def _plain(value: Any) -> str:
    if isinstance(value, complex):
        return f"{value.real:.16g}{value.imag:+.16g}j"
    if isinstance(value, float):
        return f"{value:.16g}"
    if isinstance(value, (list, tuple)):
        return ", ".join(_plain(v) for v in value)
    return str(value)


def _jsonable(value: Any) -> Any:
    if isinstance(value, (Exact, GaussianRational, Fraction, complex)):
        return scalar_to_json(value)
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def _report(ctx: typer.Context, data: dict[str, Any]) -> None:
    if _config(ctx).output_format == "json":
        typer.echo(json.dumps(_jsonable(data), indent=2, ensure_ascii=False))
        return
    for key, value in data.items():
        typer.echo(f"{key}: {_plain(value)}")


def _sample_directions(count: int, seed: int = 0) -> list[UnitVec]:
    rng = np.random.default_rng(seed)
    return [UnitVec.from_vector(v) for v in rng.normal(size=(count, 3))]


@app.callback()
def main(
    ctx: typer.Context,
    tolerance: float = typer.Option(1e-10, help="Tolerance for quadrature comparisons"),
    output_format: OutputFormat = typer.Option("text", "--format", help="Report format on stdout"),
    lmax: int = typer.Option(8, help="Default maximum multipole order"),
    quadrature_degree: int | None = typer.Option(None, help="Override the sphere quadrature degree"),
    verbose: bool = typer.Option(False, "--verbose", "-v", help="Debug logging"),
) -> None:
    logging.basicConfig(level=logging.DEBUG if verbose else logging.WARNING)
    with _exit_codes():
        ctx.obj = Config(
            tolerance=tolerance, output_format=output_format, lmax=lmax, quadrature_degree=quadrature_degree
        )


@app.command("detrace")
def detrace_command(
    ctx: typer.Context,
    in_file: Path = typer.Argument(help="Tensor JSON"),
    out_file: Path = typer.Argument(help="Where to write the trace-free part"),
) -> None:
    """Write the symmetric trace-free part of a tensor file."""
    with _exit_codes():
        tensor = tensor_from_json(read_json(in_file))
        result = detrace(tensor) if tensor.dim == 3 else detrace_general(tensor)
        write_json(out_file, tensor_to_json(result))
        residual = trace(result) if result.rank >= 2 else None
        _report(
            ctx,
            {
                "rank": result.rank,
                "dim": result.dim,
                "max_residual_trace": 0.0 if residual is None else residual.max_abs(),
                "exact_zero_trace": residual is None or residual.is_zero(),
            },
        )


@app.command("expand")
def expand_command(
    ctx: typer.Context,
    in_file: Path = typer.Argument(help="Angular polynomial JSON"),
    out_file: Path = typer.Argument(help="Where to write the multipole expansion"),
    lmax: int | None = typer.Option(None, help="Highest order to keep (defaults to the global --lmax)"),
) -> None:
    """Expand a polynomial on the sphere into Maxwell multipoles."""
    with _exit_codes():
        config = _config(ctx) if lmax is None else replace(_config(ctx), lmax=lmax)
        polynomial = polynomial_from_json(read_json(in_file))
        expansion = expand(polynomial)
        if polynomial.max_rank > config.lmax:
            message = f"polynomial has rank {polynomial.max_rank} but lmax is {config.lmax}; expansion truncated"
            logger.warning(message)
            typer.echo(f"warning: {message}", err=True)
            expansion = expansion.truncated(config.lmax)
        write_json(out_file, expansion_to_json(expansion))
        residual = max(
            abs(complex(reconstruct(expansion, n)) - complex(polynomial(n)))
            for n in _sample_directions(RECONSTRUCTION_SAMPLES)
        )
        _report(
            ctx,
            {
                "orders": expansion.orders(),
                "parseval_direct": integrate_product(polynomial, polynomial),
                "parseval_expansion": parseval_product(expansion, expansion),
                "reconstruction_residual": residual,
            },
        )


@app.command("convert")
def convert_command(
    ctx: typer.Context,
    in_file: Path = typer.Argument(help="Expansion or coefficient JSON"),
    out_file: Path = typer.Argument(help="Converted file"),
    to: Target = typer.Option(..., "--to", help="stf or sph"),
    basis: Basis | None = typer.Option(None, help="complex or real (sph side)"),
) -> None:
    """Convert between STF multipole coefficients and spherical-harmonic coefficients."""
    with _exit_codes():
        data = read_json(in_file)
        kind = detect_kind(data)
        if to == "sph":
            if kind != "expansion":
                raise FormatError(f"--to sph needs a multipole expansion file, got a {kind} file")
            coefficients = stf_to_sph(expansion_from_json(data), basis or "complex")
            write_json(out_file, sph_to_json(coefficients))
            _report(ctx, {"basis": coefficients.basis, "coefficients": len(coefficients.coefficients)})
        else:
            if kind != "sph":
                raise FormatError(f"--to stf needs a spherical-harmonic coefficient file, got a {kind} file")
            expansion = sph_to_stf(sph_from_json(data), basis)
            write_json(out_file, expansion_to_json(expansion))
            _report(ctx, {"orders": expansion.orders()})


@app.command("eval")
def eval_command(
    ctx: typer.Context,
    theta: float = typer.Option(..., help="Polar angle"),
    phi: float = typer.Option(..., help="Azimuth"),
    ell: int | None = typer.Option(None, "--ell", "-l", help="Evaluate P^(ℓ) itself"),
    file: Path | None = typer.Option(None, "--file", help="Polynomial or expansion to evaluate"),
) -> None:
    """Evaluate P^(ℓ), a polynomial file or an expansion file at (θ, φ)."""
    with _exit_codes():
        n = UnitVec.from_angles(theta, phi)
        if file is not None:
            data = read_json(file)
            kind = detect_kind(data)
            if kind == "polynomial":
                value = polynomial_from_json(data)(n)
            elif kind == "expansion":
                value = reconstruct(expansion_from_json(data), n)
            else:
                raise FormatError(f"cannot evaluate a {kind} file")
            _report(ctx, {"value": value})
        elif ell is not None:
            _report(ctx, {"ell": ell, "tensor": tensor_to_json(maxwell_eval(ell, n))})
        else:
            raise StfError("pass either --ell or --file")


@app.command("integrate")
def integrate_command(
    ctx: typer.Context,
    in_file: Path = typer.Argument(help="Angular polynomial JSON"),
    with_file: Path | None = typer.Option(None, "--with", help="Second polynomial; defaults to 1"),
) -> None:
    """Exact ∫ f g dΩ of polynomial files."""
    with _exit_codes():
        f = polynomial_from_json(read_json(in_file))
        g = polynomial_from_json(read_json(with_file)) if with_file is not None else None
        value = integrate_product(f, g) if g is not None else f.integral()
        _report(ctx, {"integral": value})


@app.command("demo-quadrupole")
def demo_quadrupole_command(
    ctx: typer.Context,
    q_file: Path = typer.Option(..., "--q", "--Q", help="Traceless symmetric rank-2 tensor JSON"),
    k: tuple[float, float, float] = typer.Option(..., "--k", help="Wave vector"),
    rmin: float = typer.Option(1e-4, help="Inner radial cutoff"),
    rmax: float = typer.Option(1e4, help="Outer radial cutoff"),
) -> None:
    """Fourier transform of a quadrupole potential against its closed form."""
    with _exit_codes():
        Q = tensor_from_json(read_json(q_file))
        if Q.rank != 2 or Q.dim != 3:
            raise StfError(f"Q must be a rank-2 tensor over 3 axes, got rank {Q.rank} over {Q.dim}")
        result = quadrupole_fourier_demo(Q, k, r_min=rmin, r_max=rmax)
        _report(
            ctx,
            {
                "numeric": result.numeric,
                "closed_form": result.closed_form,
                "relative_error": result.relative_error,
                "extrapolated": result.extrapolated,
                "history": [list(entry) for entry in result.history],
            },
        )


@app.command("verify")
def verify_command(
    ctx: typer.Context,
    suite: Suite = typer.Option(..., help="Invariant family to run"),
    lmax: int | None = typer.Option(None, help="Highest order (defaults to the global --lmax)"),
) -> None:
    """Run an invariant suite and print per-order residuals."""
    with _exit_codes():
        config = _config(ctx) if lmax is None else replace(_config(ctx), lmax=lmax)
        report = run_suite(suite, config.lmax, config)
        if config.output_format == "json":
            typer.echo(
                json.dumps(
                    {
                        "suite": report.suite,
                        "passed": report.passed,
                        "orders": [
                            {"ell": r.order, "residual": r.residual, "passed": r.passed, "detail": r.detail}
                            for r in report.results
                        ],
                    },
                    indent=2,
                )
            )
        else:
            for r in report.results:
                status = "ok" if r.passed else "FAIL"
                typer.echo(f"ℓ={r.order} residual={r.residual:.3e} {status} {r.detail}".rstrip())
            typer.echo(f"{report.suite}: {'passed' if report.passed else 'failed'}")
    if not report.passed:
        raise typer.Exit(code=EXIT_VERIFY_FAILED)
