"""
Command-line interface for pellforms
"""
import json
import logging
import time
from contextlib import contextmanager
from typing import Any, Dict, List, Optional

import typer
from pydantic import ValidationError

from pellforms.bigmath import decimal_render, format_rational, parse_rational
from pellforms.config import get_settings
from pellforms.errors import NonConvergenceError, PellformsError
from pellforms.families import load_families
from pellforms.forms import (
    conjugate,
    eval_decimal,
    format_form,
    inverse,
    min_poly_coeffs,
    multiply,
    norm,
    parse_form,
)
from pellforms.paraperm import DDET, PPER, TriMatrix, parafunction
from pellforms.pell import (
    branch_moduli,
    degree9_readings,
    f1_conjugate,
    f1_solution,
    family,
    find_cubic_unit,
    free_term_relations,
    gig_example_verify,
    triangle_row,
    verify,
)
from pellforms.recfrac import MonicRecurrencePoly, describe_polynomial, dominant_root
from pellforms.reports import records_frame, save_report, summary
from pellforms.workflow import VerificationWorkflow
from pellforms.workflow_log import WorkflowLogger

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2
DEFINITIONAL_CHECK_LIMIT = 12

app = typer.Typer(
    help="Recurrent fractions, (n,m)-forms and generalized Pell equations in exact arithmetic",
    add_completion=False,
    no_args_is_help=True,
)
form_app = typer.Typer(help="Arithmetic on (n,m)-forms written as (n, m, [s0, s1, ...])", no_args_is_help=True)
pell_app = typer.Typer(help="Printed unit families of the generalized Pell equation", no_args_is_help=True)
app.add_typer(form_app, name="form")
app.add_typer(pell_app, name="pell")

JSON_OPTION = typer.Option(False, "--json", help="Emit one JSON object instead of text")


class CommandRun:
    """Collects the outcome of one command and renders it as text or JSON"""

    def __init__(self, command: str, as_json: bool):
        self.command = command
        self.as_json = as_json
        self.started = time.perf_counter()

    def _elapsed_ms(self) -> int:
        return int((time.perf_counter() - self.started) * 1000)

    def finish(self, result: Dict[str, Any], lines: List[str], exit_code: int = EXIT_OK):
        if self.as_json:
            payload = {"command": self.command, "exit_code": exit_code, "result": result,
                       "elapsed_ms": self._elapsed_ms()}
            typer.echo(json.dumps(payload, indent=2))
        else:
            for line in lines:
                typer.echo(line)
        raise typer.Exit(code=exit_code)

    def fail(self, message: str, exit_code: int, details: Optional[Dict[str, Any]] = None):
        if self.as_json:
            payload = {"command": self.command, "exit_code": exit_code, "error": message,
                       "result": details or {}, "elapsed_ms": self._elapsed_ms()}
            typer.echo(json.dumps(payload, indent=2))
        else:
            typer.echo(f"error: {message}", err=True)
            for line in (details or {}).get("evidence", []):
                typer.echo(f"  {line}", err=True)
        raise typer.Exit(code=exit_code)

    @contextmanager
    def guard(self):
        try:
            yield
        except NonConvergenceError as e:
            self.fail(str(e), EXIT_FAILED, {"reason": e.reason, "evidence": e.evidence})
        except (PellformsError, ValidationError) as e:
            self.fail(str(e), EXIT_USAGE)


@app.callback()
def main(ctx: typer.Context):
    """Configure logging once per invocation"""
    settings = get_settings()
    ctx.obj = {"settings": settings, "run_logger": WorkflowLogger(settings.log_dir, settings.log_level)}


def _settings(ctx: typer.Context):
    return ctx.obj["settings"] if ctx.obj else get_settings()


@app.command("approx-root", context_settings={"ignore_unknown_options": True})
def approx_root(
    ctx: typer.Context,
    coefficients: List[str] = typer.Argument(..., help="a1 ... an of x^n = a1 x^(n-1) + ... + an"),
    digits: Optional[int] = typer.Option(None, "--digits", help="Decimal digits to agree on"),
    max_iter: Optional[int] = typer.Option(None, "--max-iter", help="Truncation budget"),
    trace: bool = typer.Option(False, "--trace", help="Print every truncation"),
    as_json: bool = JSON_OPTION,
):
    """Approximate the dominant real root by truncations of the 1-periodic recurrent fraction"""
    settings = _settings(ctx)
    digits = digits or settings.digits
    max_iter = max_iter or settings.max_iter
    run = CommandRun("approx-root", as_json)
    with run.guard():
        poly = MonicRecurrencePoly.of([parse_rational(c) for c in coefficients])
        approximation = dominant_root(poly, digits, max_iter, keep_trace=trace)

    lines = []
    rows = []
    for t in approximation.trace:
        if t.value is None:
            lines.append(f"m={t.index}: undefined (Q_m = 0)")
        else:
            lines.append(f"m={t.index}: {format_rational(t.value)} ~ {decimal_render(t.value, digits)}")
        rows.append(t.model_dump(mode="json"))
    value = approximation.approximation
    lines += [
        f"polynomial: {poly.describe()}",
        f"root: {decimal_render(value, digits)}",
        f"fraction: {format_rational(value)}",
        f"iterations: {approximation.iterations_used}",
        f"certified digits: {approximation.certified_digits}",
    ]
    run.finish({
        "polynomial": poly.describe(),
        "approximation": format_rational(value),
        "decimal": decimal_render(value, digits),
        "iterations": approximation.iterations_used,
        "certified_digits": approximation.certified_digits,
        "trace": rows,
    }, lines)


@form_app.command("mul")
def form_mul(left: str, right: str, as_json: bool = JSON_OPTION):
    """Product of two forms over the same field"""
    run = CommandRun("form mul", as_json)
    with run.guard():
        product = multiply(parse_form(left), parse_form(right))
    run.finish({"form": format_form(product)}, [format_form(product)])


@form_app.command("norm")
def form_norm(literal: str, as_json: bool = JSON_OPTION):
    """Determinant of the circulant embedding"""
    run = CommandRun("form norm", as_json)
    with run.guard():
        value = norm(parse_form(literal))
    run.finish({"norm": format_rational(value)}, [format_rational(value)])


@form_app.command("minpoly")
def form_minpoly(literal: str, as_json: bool = JSON_OPTION):
    """Characteristic polynomial from principal minors"""
    run = CommandRun("form minpoly", as_json)
    with run.guard():
        coefficients = min_poly_coeffs(parse_form(literal))
    text = describe_polynomial(coefficients)
    run.finish({"coefficients": [format_rational(a) for a in coefficients], "polynomial": text}, [text])


@form_app.command("conj")
def form_conj(literal: str, as_json: bool = JSON_OPTION):
    """Conjugate form (adjugate of the embedding)"""
    run = CommandRun("form conj", as_json)
    with run.guard():
        value = conjugate(parse_form(literal))
    run.finish({"form": format_form(value)}, [format_form(value)])


@form_app.command("inv")
def form_inv(literal: str, as_json: bool = JSON_OPTION):
    """Inverse form"""
    run = CommandRun("form inv", as_json)
    with run.guard():
        value = inverse(parse_form(literal))
    run.finish({"form": format_form(value)}, [format_form(value)])


@form_app.command("eval")
def form_eval(ctx: typer.Context, literal: str,
              digits: Optional[int] = typer.Option(None, "--digits", help="Certified truncated digits"),
              as_json: bool = JSON_OPTION):
    """Certified decimal value of the form"""
    digits = digits or _settings(ctx).digits
    run = CommandRun("form eval", as_json)
    with run.guard():
        text = eval_decimal(parse_form(literal), digits)
    run.finish({"decimal": text, "digits": digits}, [text])


def _solution_lines(sol) -> List[str]:
    lines = [f"degree {sol.degree} branch {sol.branch} ({sol.reading})"]
    if sol.k is not None:
        lines.append(f"k={sol.k} r={sol.r}")
    lines.append(f"m = {format_rational(sol.m)}")
    lines += [f"s{i} = {format_rational(s)}" for i, s in enumerate(sol.coords)]
    return lines


@pell_app.command("family")
def pell_family(
    degree: int = typer.Option(..., "--degree"),
    branch: str = typer.Option(..., "--branch"),
    k: int = typer.Option(1, "--k"),
    r: int = typer.Option(1, "--r"),
    reading: str = typer.Option("printed", "--reading", help="printed, r or inverse"),
    as_json: bool = JSON_OPTION,
):
    """Instantiate a printed family without verifying it"""
    run = CommandRun("pell family", as_json)
    with run.guard():
        sol = family(degree, branch, k, r, reading=reading)
    run.finish(sol.model_dump(mode="json", exclude_none=True), _solution_lines(sol))


@pell_app.command("verify")
def pell_verify(
    degree: int = typer.Option(..., "--degree"),
    branch: str = typer.Option(..., "--branch"),
    k: int = typer.Option(1, "--k"),
    r: int = typer.Option(1, "--r"),
    reading: str = typer.Option("printed", "--reading", help="printed, r or inverse"),
    strict: bool = typer.Option(False, "--strict", help="Fail on branches with a recorded erratum too"),
    as_json: bool = JSON_OPTION,
):
    """Verify one family instance by its exact norm"""
    run = CommandRun("pell verify", as_json)
    with run.guard():
        sol = family(degree, branch, k, r, reading=reading)
        verdict = verify(sol)
        readings = degree9_readings(branch, k, r) if degree == 9 and branch in ("2", "4") else {}
        erratum = load_families().get(degree, branch).erratum if branch in load_families().branches(degree) else None

    lines = _solution_lines(sol) + [f"norm = {format_rational(verdict.norm)}", f"verdict: {verdict.status}"]
    for name, item in readings.items():
        lines.append(f"reading {name}: {item.status} (norm {format_rational(item.norm)})")
    exit_code = EXIT_OK
    if not verdict.ok:
        if erratum and reading == "printed" and not strict:
            lines.append(f"warning: {erratum}")
        else:
            exit_code = EXIT_FAILED
    result = {
        "solution": sol.model_dump(mode="json", exclude_none=True),
        "verdict": verdict.model_dump(mode="json"),
        "readings": {name: item.model_dump(mode="json") for name, item in readings.items()},
    }
    run.finish(result, lines, exit_code)


@pell_app.command("grid")
def pell_grid(
    ctx: typer.Context,
    degrees: Optional[List[int]] = typer.Option(None, "--degree", help="Repeat for several degrees (default: all)"),
    branches: Optional[List[str]] = typer.Option(None, "--branch", help="Restrict to these branches"),
    kmax: Optional[int] = typer.Option(None, "--kmax"),
    rmax: Optional[int] = typer.Option(None, "--rmax"),
    workers: Optional[int] = typer.Option(None, "--workers"),
    suggest: bool = typer.Option(False, "--suggest-fix", help="Attach inverse-of-partner forms to failures"),
    coords: bool = typer.Option(False, "--coords", help="Include coordinates in records"),
    save: bool = typer.Option(False, "--save", help="Write JSONL and CSV reports to the report directory"),
    as_json: bool = JSON_OPTION,
):
    """Verify families over a (k, r) grid"""
    settings = _settings(ctx)
    run = CommandRun("pell grid", as_json)
    with run.guard():
        workflow = VerificationWorkflow(
            workers=workers or settings.workers,
            include_coords=coords,
            suggest_fixes=suggest,
            run_logger=ctx.obj["run_logger"] if ctx.obj else None,
        )
        points = workflow.plan(degrees or load_families().degrees(), branches or None,
                               kmax or settings.grid_kmax, rmax or settings.grid_rmax)
        records = workflow.run(points)

    frame = records_frame(records)
    table = summary(frame)
    saved = save_report(records, settings.report_dir) if save else {}
    blocking = [r for r in records if r.is_blocking_failure]
    exit_code = EXIT_FAILED if blocking else EXIT_OK

    lines = [table.to_string(index=False)]
    for record in records:
        if record.verdict == "failed":
            tag = "erratum" if record.known_erratum else "FAILED"
            lines.append(f"{tag}: degree {record.degree} branch {record.branch} ({record.reading}) "
                         f"k={record.k} r={record.r} "
                         + (record.error if record.norm is None else f"norm={format_rational(record.norm)}"))
            if record.suggested_fix:
                lines.append(f"  suggested: {record.suggested_fix}")
    lines += [f"saved: {path}" for path in saved.values()]
    run.finish({
        "records": [r.model_dump(mode="json", exclude_none=True) for r in records],
        "summary": json.loads(table.to_json(orient="records")),
        "saved": saved,
    }, lines, exit_code)


@pell_app.command("search")
def pell_search(
    m: int = typer.Option(..., "--m", help="Radicand"),
    kbound: int = typer.Option(10, "--kbound"),
    as_json: bool = JSON_OPTION,
):
    """Search a cubic unit with the consecutive-m formulas"""
    run = CommandRun("pell search", as_json)
    with run.guard():
        result = find_cubic_unit(m, kbound)
    lines = []
    if result.degenerate:
        lines.append(f"warning: {m} is a perfect cube")
    if result.solution is None:
        lines.append(f"no unit found for k <= {kbound}")
    else:
        lines += _solution_lines(result.solution) + [f"verdict: {result.solution.verdict.status}"]
    run.finish(result.model_dump(mode="json", exclude_none=True), lines)


@pell_app.command("gig")
def pell_gig(
    ctx: typer.Context,
    fixture: Optional[str] = typer.Option(None, "--fixture", help="Path to the digit-block fixture"),
    as_json: bool = JSON_OPTION,
):
    """Recompute the 900-digit worked example and compare digits"""
    path = fixture or _settings(ctx).gig_fixture
    run = CommandRun("pell gig", as_json)
    with run.guard():
        report = gig_example_verify(path)
    lines = []
    for label, ok in report.matches.items():
        status = "match" if ok else f"mismatch at digit {report.first_mismatch[label]}"
        lines.append(f"{label}: {report.digit_counts[label]} digits, {status}")
    lines.append(f"norm = {format_rational(report.norm)}")
    run.finish(report.model_dump(mode="json"), lines, EXIT_OK if report.ok else EXIT_FAILED)


@pell_app.command("triangle")
def pell_triangle(
    degrees: Optional[List[int]] = typer.Option(None, "--degree"),
    as_json: bool = JSON_OPTION,
):
    """Compare branch-1 coefficient moduli with the number triangle"""
    run = CommandRun("pell triangle", as_json)
    results, lines = [], []
    with run.guard():
        for degree in degrees or [3, 5, 7, 9, 11]:
            row = triangle_row(degree)
            moduli = branch_moduli(degree)
            matches = moduli == row + tuple(reversed(row))
            results.append({"degree": degree, "row": list(row), "moduli": list(moduli), "matches": matches})
            lines.append(f"degree {degree}: row {list(row)} moduli {list(moduli)} -> {'ok' if matches else 'mismatch'}")
    ok = all(item["matches"] for item in results)
    run.finish({"rows": results}, lines, EXIT_OK if ok else EXIT_FAILED)


@pell_app.command("freeterms")
def pell_freeterms(as_json: bool = JSON_OPTION):
    """Binomial-difference relations of the degree-11 free terms"""
    run = CommandRun("pell freeterms", as_json)
    with run.guard():
        relations = free_term_relations()
    lines = [f"order {rel.order}: {rel.lhs} = {rel.expected} {'ok' if rel.holds else 'FAILED'}" for rel in relations]
    ok = all(rel.holds for rel in relations)
    run.finish({"relations": [rel.model_dump() for rel in relations]}, lines, EXIT_OK if ok else EXIT_FAILED)


@pell_app.command("f1")
def pell_f1(
    n: int = typer.Option(..., "--n", help="Degree"),
    m: int = typer.Option(..., "--m", help="Base of the radicand m^n -+ 1"),
    variant: str = typer.Option(..., "--variant", help="minus, plus_odd or plus_even"),
    as_json: bool = JSON_OPTION,
):
    """Geometric-coordinate solution of the F = +-1 theorem"""
    run = CommandRun("pell f1", as_json)
    with run.guard():
        sol = f1_solution(n, m, variant)
        conj = f1_conjugate(n, m, variant)
        verdict = verify(sol)
        product = multiply(sol.form(), conj.form())
    lines = _solution_lines(sol) + [
        f"norm = {format_rational(verdict.norm)} (expected {sol.expected_norm})",
        f"verdict: {verdict.status}",
        f"conjugate: {format_form(conj.form())}",
        f"product: {format_form(product)}",
    ]
    run.finish({
        "solution": sol.model_dump(mode="json", exclude_none=True),
        "verdict": verdict.model_dump(mode="json"),
        "conjugate": format_form(conj.form()),
        "product": format_form(product),
    }, lines, EXIT_OK if verdict.ok else EXIT_FAILED)


@app.command("pper")
def pper_command(
    rows: Optional[List[str]] = typer.Argument(None, help="Rows such as '1' '2,3' (row i holds i entries)"),
    matrix_file: Optional[str] = typer.Option(None, "--file", help="Matrix text file, one row per line"),
    mode: str = typer.Option(PPER, "--mode", help="pper or ddet"),
    check: bool = typer.Option(False, "--check", help="Cross-run the definitional evaluator"),
    as_json: bool = JSON_OPTION,
):
    """Parapermanent or paradeterminant of a triangular matrix"""
    run = CommandRun("pper", as_json)
    with run.guard():
        if matrix_file:
            with open(matrix_file, 'r') as f:
                matrix = TriMatrix.parse(f.read())
        else:
            matrix = TriMatrix.parse("\n".join(rows or []))
        if mode not in (PPER, DDET):
            raise PellformsError(f"--mode must be {PPER} or {DDET}")
        value = parafunction(matrix, mode)
        oracle = None
        if check and matrix.order <= DEFINITIONAL_CHECK_LIMIT:
            oracle = parafunction(matrix, mode, definitional=True)

    lines = [format_rational(value)]
    result = {"mode": mode, "order": matrix.order, "value": format_rational(value)}
    exit_code = EXIT_OK
    if check:
        if oracle is None:
            lines.append(f"check skipped: order {matrix.order} > {DEFINITIONAL_CHECK_LIMIT}")
        else:
            agrees = oracle == value
            result["definitional"] = format_rational(oracle)
            result["agrees"] = agrees
            lines.append(f"definitional: {format_rational(oracle)} ({'agrees' if agrees else 'DIFFERS'})")
            exit_code = EXIT_OK if agrees else EXIT_FAILED
    run.finish(result, lines, exit_code)


if __name__ == "__main__":
    app()
