from __future__ import annotations

import argparse
import asyncio
import itertools
import logging
import time
from pathlib import Path
from typing import Dict, List, Sequence

from rich.console import Console
from rich.table import Table

from ..config import Settings
from ..services import (
    Algebra,
    ProjComplex,
    ReportService,
    aea_cokernel_check,
    complete,
    complex_length,
    complex_to_text,
    corner,
    end_algebra,
    ext_vanishing_check,
    is_partial_tilting,
    load_algebra,
    load_complex,
    make_field,
    minimize,
    pipeline,
    quotient_compare,
    symmetrizing_form,
    tilting_criterion_symmetric,
    verify_tilting,
)
from ..services.complexes import HomComplex, homotopy_hom
from .routing import CommandResult, CommandRouter, UsageError

logger = logging.getLogger(__name__)

router = CommandRouter()

CORNER_SUBSET_LIMIT = 6


# -- shared helpers -------------------------------------------------------------


def _algebra(args: argparse.Namespace, settings: Settings) -> Algebra:
    field = make_field(args.field) if args.field else None
    return load_algebra(args.algebra, field=field, default_field=settings.default_field)


def _known(A: Algebra, path: str) -> Dict[str, Algebra]:
    return {A.name: A, Path(path).stem: A}


def _complex(A: Algebra, args: argparse.Namespace, path: str) -> ProjComplex:
    return load_complex(path, _known(A, args.algebra))


def _subset(A: Algebra, text: str) -> List[int]:
    names = [t for t in text.replace(",", " ").split() if t]
    if not names:
        raise UsageError("idempotent subset is empty")
    out = []
    for name in names:
        if name not in A.vertex_names:
            raise UsageError(f"unknown vertex {name!r} in subset; vertices are {', '.join(A.vertex_names)}")
        out.append(A.vertex_names.index(name))
    return sorted(set(out))


def _stage_count(n: int, settings: Settings) -> int:
    if n < 0:
        raise UsageError("number of stages must be non-negative")
    if n > settings.max_stage:
        raise UsageError(f"{n} stages exceed the configured maximum {settings.max_stage}")
    return n


def _table(title: str, columns: Sequence[str], rows: Sequence[Sequence[object]]) -> Table:
    table = Table(title=title)
    for column in columns:
        table.add_column(column, justify="right")
    for row in rows:
        table.add_row(*(str(v) for v in row))
    return table


def _with_timing(payload: Dict, started: float, settings: Settings) -> Dict:
    if settings.record_timings:
        payload["timings"] = {"seconds": round(time.perf_counter() - started, 3)}
    return payload


# -- verbs ----------------------------------------------------------------------


def _configure_check(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("algebra", help="algebra spec file")
    parser.add_argument("complex", help="complex spec file")


@router.command("check", "certify a complex as partial tilting", _configure_check)
async def check(args: argparse.Namespace, settings: Settings, console: Console) -> CommandResult:
    started = time.perf_counter()
    A = _algebra(args, settings)
    X = _complex(A, args, args.complex)
    cert, length = await asyncio.gather(
        asyncio.to_thread(is_partial_tilting, X),
        asyncio.to_thread(complex_length, X),
    )
    console.print(
        _table(
            f"dim Hom(X, X[n]) over {A.name}",
            ["n", "dim"],
            [(n, dim) for n, dim in sorted(cert.table.items())],
        )
    )
    console.print(f"partial tilting: [bold]{'yes' if cert.verdict else 'no'}[/bold]")
    payload = {
        "complex": ReportService.complex_summary(X),
        "length": length,
        **ReportService.certificate(cert),
    }
    return CommandResult(cert.verdict, _with_timing(payload, started, settings))


def _configure_complete(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("algebra", help="algebra spec file")
    parser.add_argument("complex", help="partial tilting complex spec file")
    parser.add_argument("stages", type=int, help="number of completion stages")
    parser.add_argument("--base", help="complex spec file to start from instead of the algebra")
    parser.add_argument("--criterion", action="store_true", help="also run the symmetric-algebra criterion")
    parser.add_argument("--theta-out", help="write the completed complex as a spec file")


@router.command("complete", "run the completion and verify the result", _configure_complete)
async def complete_command(args: argparse.Namespace, settings: Settings, console: Console) -> CommandResult:
    started = time.perf_counter()
    n = _stage_count(args.stages, settings)
    A = _algebra(args, settings)
    P = _complex(A, args, args.complex)
    base = _complex(A, args, args.base) if args.base else None
    cert = await asyncio.to_thread(is_partial_tilting, P)
    if not cert.verdict:
        raise ValueError(f"input is not partial tilting: Hom(P, P[n]) != 0 for n in {cert.nonvanishing}")

    trace, theta = await asyncio.to_thread(complete, P, n, base, settings.search)
    trace_check = await asyncio.to_thread(trace.verify)
    report = await asyncio.to_thread(verify_tilting, theta, trace if base is None else None, False, settings.search)
    text = complex_to_text(theta, A.name)
    if args.theta_out:
        Path(args.theta_out).write_text(text, encoding="utf-8")
        logger.info("completed complex written to %s", args.theta_out)

    console.print(
        _table(
            f"completion of {Path(args.complex).name} over {A.name}",
            ["stage", "shift", "V dim", "cover"],
            [(s.index, s.degree, s.module.dim, " ".join(f"T{k + 1}" for k in s.cover_summands) or "-") for s in trace.stages],
        )
    )
    console.print(f"tilting: [bold]{'yes' if report.verdict else 'no'}[/bold] (generation {report.generation_mode.value})")
    payload = {
        "stages": n,
        "trace": ReportService.trace(trace),
        "trace_check": ReportService.trace_check(trace_check),
        "tilting": ReportService.tilting(report),
        "theta": text,
    }
    if args.criterion:
        criterion = await asyncio.to_thread(tilting_criterion_symmetric, P, settings.search)
        payload["criterion"] = {"holds": criterion.holds, "r": criterion.r, "positive_cohomology": ReportService.table(criterion.positive_cohomology)}
    return CommandResult(report.verdict and trace_check.ok, _with_timing(payload, started, settings))


def _configure_pipeline(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("algebra", help="algebra spec file")
    parser.add_argument("subset", help="comma-separated vertices of the idempotent")
    parser.add_argument("corner_complex", help="tilting complex over the corner (spec file with a 'corner' line)")
    parser.add_argument("stages", type=int, help="number of completion stages")


@router.command("pipeline", "glue a corner tilting complex and compare quotients", _configure_pipeline)
async def pipeline_command(args: argparse.Namespace, settings: Settings, console: Console) -> CommandResult:
    started = time.perf_counter()
    n = _stage_count(args.stages, settings)
    A = _algebra(args, settings)
    subset = _subset(A, args.subset)
    Q = _complex(A, args, args.corner_complex)
    result = await asyncio.to_thread(pipeline, A, subset, Q, n, settings.search)
    comparison = result.comparison
    console.print(
        _table(
            "quotient comparison",
            ["", "A/AeA", "B/BfB"],
            [
                ("dim", comparison.dims[0], comparison.dims[1]),
                ("center", comparison.fingerprints[0].center, comparison.fingerprints[1].center),
            ],
        )
    )
    console.print(f"verdict: [bold]{comparison.level.value}[/bold]")
    return CommandResult(result.verdict, _with_timing(ReportService.pipeline(result), started, settings))


def _configure_symcheck(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("algebra", help="algebra spec file")
    parser.add_argument("--corners", action="store_true", help="also check every corner algebra")


@router.command("symcheck", "look for a symmetrizing form", _configure_symcheck)
async def symcheck(args: argparse.Namespace, settings: Settings, console: Console) -> CommandResult:
    started = time.perf_counter()
    A = _algebra(args, settings)
    form = await asyncio.to_thread(symmetrizing_form, A, settings.search)
    payload = ReportService.symmetry(A, form)
    console.print(f"{A.name}: {'symmetric' if form is not None else 'not symmetric'}")
    if args.corners:
        if A.n_idempotents > CORNER_SUBSET_LIMIT:
            raise UsageError(f"corner check limited to {CORNER_SUBSET_LIMIT} vertices")
        subsets = [
            list(s)
            for k in range(1, A.n_idempotents)
            for s in itertools.combinations(range(A.n_idempotents), k)
        ]
        corners = [corner(A, s) for s in subsets]
        forms = await asyncio.gather(*(asyncio.to_thread(symmetrizing_form, C, settings.search) for C in corners))
        payload["corners"] = {
            ",".join(A.vertex_names[v] for v in s): f is not None for s, f in zip(subsets, forms)
        }
        console.print(_table("corners", ["subset", "symmetric"], sorted(payload["corners"].items())))
    return CommandResult(form is not None, _with_timing(payload, started, settings))


def _configure_homtable(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("algebra", help="algebra spec file")
    parser.add_argument("source", help="complex spec file X")
    parser.add_argument("target", nargs="?", help="complex spec file Y (defaults to X)")


async def _hom_dims(X: ProjComplex, Y: ProjComplex) -> Dict[int, int]:
    hom = HomComplex(X, Y)
    degrees = list(hom.window())
    spaces = await asyncio.gather(*(asyncio.to_thread(homotopy_hom, X, Y, n, hom) for n in degrees))
    return {n: space.dim for n, space in zip(degrees, spaces)}


@router.command("homtable", "dimensions of Hom(X, Y[n])", _configure_homtable)
async def homtable(args: argparse.Namespace, settings: Settings, console: Console) -> CommandResult:
    started = time.perf_counter()
    A = _algebra(args, settings)
    X = minimize(_complex(A, args, args.source)).complex
    Y = minimize(_complex(A, args, args.target)).complex if args.target else X
    forward = await _hom_dims(X, Y)
    payload: Dict = {"hom": ReportService.table(forward)}
    rows = [(n, dim) for n, dim in sorted(forward.items())]
    columns = ["n", "Hom(X, Y[n])"]
    symmetric = await asyncio.to_thread(symmetrizing_form, A, settings.search)
    if symmetric is not None:
        # Over a symmetric algebra D Hom(X, Y[n]) = Hom(Y, X[-n]).
        backward = await _hom_dims(Y, X)
        dual = {n: backward.get(-n, 0) for n in forward}
        payload["dual"] = ReportService.table(dual)
        payload["duality_holds"] = all(forward[n] == dual[n] for n in forward)
        rows = [(n, dim, dual[n]) for n, dim in sorted(forward.items())]
        columns.append("Hom(Y, X[-n])")
    console.print(_table(f"Hom table over {A.name}", columns, rows))
    return CommandResult(None, _with_timing(payload, started, settings))


def _configure_quotcompare(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("algebra", help="algebra spec file")
    parser.add_argument("subset", help="comma-separated vertices of the idempotent")
    parser.add_argument("theta", help="complex spec file")


@router.command("quotcompare", "compare A/AeA with B/BfB for B = End(theta)", _configure_quotcompare)
async def quotcompare(args: argparse.Namespace, settings: Settings, console: Console) -> CommandResult:
    started = time.perf_counter()
    A = _algebra(args, settings)
    subset = _subset(A, args.subset)
    theta = _complex(A, args, args.theta)
    end = await asyncio.to_thread(end_algebra, minimize(theta).complex, None, True, settings.search)
    f = [k for k, Z in enumerate(end.summands) if Z.support() <= set(subset)]
    comparison = await asyncio.to_thread(quotient_compare, A, subset, end.algebra, f, settings.search)
    console.print(f"A/AeA dim {comparison.dims[0]}, B/BfB dim {comparison.dims[1]}: [bold]{comparison.level.value}[/bold]")
    payload = {"end_dim": end.algebra.dim, "f_summands": f, "comparison": ReportService.comparison(comparison)}
    return CommandResult(comparison.dimensions_match, _with_timing(payload, started, settings))


def _configure_extcheck(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("algebra", help="algebra spec file")
    parser.add_argument("subset", help="comma-separated vertices of the idempotent")
    parser.add_argument("degrees", type=int, help="number of Ext degrees")
    parser.add_argument("--with-completion", type=int, default=0, metavar="K", help="also test the first K completions of eA")


@router.command("extcheck", "Ext(A/AeA, eA) beside the completions of eA", _configure_extcheck)
async def extcheck(args: argparse.Namespace, settings: Settings, console: Console) -> CommandResult:
    started = time.perf_counter()
    if args.degrees < 1:
        raise UsageError("need at least one Ext degree")
    k = _stage_count(args.with_completion, settings)
    A = _algebra(args, settings)
    subset = _subset(A, args.subset)
    aea, ext = await asyncio.gather(
        asyncio.to_thread(aea_cokernel_check, A, subset),
        asyncio.to_thread(ext_vanishing_check, A, subset, args.degrees, k, settings.search),
    )
    rows = [(i, dim, ext.completion.get(i + 1, "")) for i, dim in sorted(ext.table.items())]
    console.print(_table(f"Ext(A/AeA, eA) over {A.name}", ["i", "dim", "Theta_(i+1) tilting"], rows))
    payload = {"aea": ReportService.aea(aea), **ReportService.ext(ext)}
    return CommandResult(None, _with_timing(payload, started, settings))

