"""Command-line interface.

Exit codes: 0 success, 2 input error, 3 precondition violation (asymmetry,
size caps), 4 internal numerical failure.
"""

from __future__ import annotations

import json
import math
import os
import sys
from functools import wraps

import click

from .diversity import DEFAULT_ORDERS, check_order, diversity, diversity_profile
from .errors import InputError, NumericalError, PreconditionError
from .graphs import (
    IrreflexiveGraph,
    ReflexiveGraph,
    clique_capacity,
    epsilon_entropy_bounds,
    independence_number,
)
from .io import parse_abundances, parse_community, parse_graph, parse_matrix, parse_metric
from .linalg import (
    find_positive_weighting,
    is_positive_definite,
    is_positive_semidefinite,
    is_strictly_diagonally_dominant,
    is_ultrametric,
    solve_weighting_space,
)
from .maximize import SUBSET_CAP, full_support_diagnostics, maximize, maximize_exhaustive, maximize_fast_path

EXIT_INPUT = 2
EXIT_PRECONDITION = 3
EXIT_NUMERICAL = 4


def _guarded(fn):
    @wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except InputError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_INPUT)
        except PreconditionError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_PRECONDITION)
        except NumericalError as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_NUMERICAL)

    return wrapper


def _read(path: str) -> str:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        click.echo(f"error: cannot read {path}: {exc}", err=True)
        sys.exit(EXIT_INPUT)


def _parse_order(text: str) -> float:
    s = text.strip().lower()
    if s in ("inf", "infinity", "oo"):
        return math.inf
    try:
        return check_order(float(s))
    except ValueError:
        raise InputError(f"bad order {text!r}: expected a nonnegative number or 'inf'") from None


def _order_str(q: float) -> str:
    return "inf" if math.isinf(q) else repr(q) if q != int(q) else str(int(q))


def _fmt(ctx, v: float) -> str:
    return f"{v:.{ctx.obj['precision']}g}"


def _support_str(indices) -> str:
    return "{" + ",".join(str(i + 1) for i in indices) + "}"


@click.group()
@click.option("--precision", type=int, default=None, help="Significant digits for display (env MAXDIV_PRECISION, default 6).")
@click.pass_context
def main(ctx, precision):
    """Similarity-sensitive diversity: evaluate it, profile it, maximize it."""
    if precision is None:
        precision = int(os.environ.get("MAXDIV_PRECISION", "6"))
    ctx.obj = {"precision": max(1, precision)}


@main.command("diversity")
@click.option("--matrix", "matrix_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--abundances", "abundance_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("-q", "orders", multiple=True, required=True, help="Order q (repeatable); 'inf' allowed.")
@click.option("--normalize", is_flag=True, help="Rescale abundances to sum to one before validating.")
@click.pass_context
@_guarded
def diversity_cmd(ctx, matrix_path, abundance_path, orders, normalize):
    """Print the diversity of order q of a community."""
    z, p = parse_community(_read(matrix_path), _read(abundance_path), normalize=normalize)
    for text in orders:
        q = _parse_order(text)
        click.echo(f"D_{_order_str(q)} = {_fmt(ctx, diversity(z, p, q))}")


@main.command("profile")
@click.option("--matrix", "matrix_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--abundances", "abundance_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--orders", "orders_text", default=None, help="Comma-separated ascending orders (default grid otherwise).")
@click.option("-o", "--output", type=click.Path(dir_okay=False), default=None, help="Write CSV here instead of stdout.")
@click.option("--normalize", is_flag=True)
@_guarded
def profile_cmd(matrix_path, abundance_path, orders_text, output, normalize):
    """Write the diversity profile as CSV rows q,value."""
    z, p = parse_community(_read(matrix_path), _read(abundance_path), normalize=normalize)
    orders = DEFAULT_ORDERS if orders_text is None else tuple(_parse_order(t) for t in orders_text.split(","))
    prof = diversity_profile(z, p, orders)
    lines = ["q,value"] + [f"{_order_str(q)},{v!r}" for q, v in prof.items()]
    text = "\n".join(lines) + "\n"
    if output is None:
        click.echo(text, nl=False)
    else:
        with open(output, "w", encoding="utf-8") as fh:
            fh.write(text)


def _maximization_json(result):
    return {
        "dmax": result.dmax,
        "method": result.method,
        "unique": result.unique,
        "sample_maximizer": list(result.sample_maximizer.probs),
        "full_support_exists": result.full_support_exists,
        "all_maximizers_full_support": result.all_maximizers_full_support,
        "winners": [
            {
                "support": [i + 1 for i in fs.indices],
                "magnitude": fs.magnitude,
                "nonnegative_weighting": list(fs.weighting_space.nonnegative),
                "particular": list(fs.weighting_space.particular),
                "kernel_basis": [list(v) for v in fs.weighting_space.nullspace],
            }
            for fs in result.winners
        ],
    }


@main.command("maximize")
@click.option("--matrix", "matrix_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--method", type=click.Choice(["auto", "exhaustive", "fast"]), default="auto")
@click.option("--families", is_flag=True, help="Describe the full weighting space of every winner.")
@click.option("--cap", type=int, default=SUBSET_CAP, help="Size cap for the exhaustive sweep.")
@click.option("--json", "as_json", is_flag=True, help="Machine-readable output at full precision.")
@click.pass_context
@_guarded
def maximize_cmd(ctx, matrix_path, method, families, cap, as_json):
    """Maximum diversity, winning subsets, and a maximizing distribution."""
    z = parse_matrix(_read(matrix_path))
    if method == "exhaustive":
        result = maximize_exhaustive(z, cap=cap)
    elif method == "fast":
        result = maximize_fast_path(z)
        if result is None:
            raise PreconditionError(
                "no fast path applies (matrix is not ultrametric, diagonally "
                "dominant with unit diagonal, or positive semidefinite with a "
                "nonnegative weighting)"
            )
    else:
        result = maximize(z, cap=cap)
    if as_json:
        click.echo(json.dumps(_maximization_json(result), indent=2))
        return
    click.echo(f"dmax: {_fmt(ctx, result.dmax)}")
    click.echo(f"method: {result.method}")
    uniq = {True: "yes", False: "no", None: "not certified"}[result.unique]
    click.echo(f"unique maximizer: {uniq}")
    click.echo(f"winners: {len(result.winners)}")
    for fs in result.winners:
        click.echo(f"  support {_support_str(fs.indices)}  magnitude {_fmt(ctx, fs.magnitude)}")
        if families:
            ws = fs.weighting_space
            click.echo("    representative weighting: " + ", ".join(_fmt(ctx, v) for v in ws.nonnegative))
            if ws.nullspace.shape[0] == 0:
                click.echo("    kernel: trivial (unique weighting)")
            for vec in ws.nullspace:
                click.echo("    kernel direction: " + ", ".join(_fmt(ctx, v) for v in vec))
    click.echo("sample maximizer: " + ", ".join(_fmt(ctx, v) for v in result.sample_maximizer.probs))
    click.echo(f"full-support maximizer exists: {'yes' if result.full_support_exists else 'no'}")
    click.echo(f"all maximizers full support: {'yes' if result.all_maximizers_full_support else 'no'}")


@main.command("diagnose")
@click.option("--matrix", "matrix_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--json", "as_json", is_flag=True)
@click.pass_context
@_guarded
def diagnose_cmd(ctx, matrix_path, as_json):
    """Matrix-class predicates and species-preservation findings."""
    z = parse_matrix(_read(matrix_path))
    diag = full_support_diagnostics(z)
    ws = solve_weighting_space(z)
    info = {
        "symmetric": z.symmetric,
        "positive_semidefinite": is_positive_semidefinite(z),
        "positive_definite": is_positive_definite(z),
        "ultrametric": is_ultrametric(z),
        "strictly_diagonally_dominant": is_strictly_diagonally_dominant(z),
        "min_eigenvalue": diag.min_eigenvalue,
        "eigenvalue_floor": diag.eigenvalue_floor,
        "magnitude": ws.magnitude,
        "positive_weighting": None if diag.positive_weighting is None else list(diag.positive_weighting),
        "full_support_maximizer_exists": diag.exists_full_support_maximizer,
        "all_maximizers_full_support": diag.all_maximizers_full_support,
    }
    if as_json:
        click.echo(json.dumps(info, indent=2))
        return
    yn = lambda b: "yes" if b else "no"
    click.echo(f"symmetric: {yn(info['symmetric'])}")
    click.echo(f"positive semidefinite: {yn(info['positive_semidefinite'])}"
               f" (min eigenvalue {_fmt(ctx, info['min_eigenvalue'])}, floor {_fmt(ctx, info['eigenvalue_floor'])})")
    click.echo(f"positive definite: {yn(info['positive_definite'])}")
    click.echo(f"ultrametric: {yn(info['ultrametric'])}")
    click.echo(f"strictly diagonally dominant: {yn(info['strictly_diagonally_dominant'])}")
    if info["magnitude"] is None:
        click.echo("magnitude: undefined (no weighting)")
    else:
        click.echo(f"magnitude: {_fmt(ctx, info['magnitude'])}")
    if info["positive_weighting"] is None:
        click.echo("positive weighting: none")
    else:
        click.echo("positive weighting: " + ", ".join(_fmt(ctx, v) for v in info["positive_weighting"]))
    click.echo(f"full-support maximizer exists: {yn(info['full_support_maximizer_exists'])}")
    click.echo(f"all maximizers full support: {yn(info['all_maximizers_full_support'])}")


@main.group("graph")
def graph_group():
    """Graph and finite-metric applications."""


@graph_group.command("alpha")
@click.option("--graph", "graph_path", required=True, type=click.Path(exists=True, dir_okay=False))
@_guarded
def alpha_cmd(graph_path):
    """Independence number of a reflexive graph (= its maximum diversity)."""
    n, edges = parse_graph(_read(graph_path))
    click.echo(str(independence_number(ReflexiveGraph(n, edges))))


@graph_group.command("capacity")
@click.option("--graph", "graph_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--json", "as_json", is_flag=True)
@click.pass_context
@_guarded
def capacity_cmd(ctx, graph_path, as_json):
    """Clique capacity of a loop-free graph, with a witness distribution."""
    n, edges = parse_graph(_read(graph_path))
    res = clique_capacity(IrreflexiveGraph(n, edges))
    if as_json:
        click.echo(json.dumps({
            "capacity": res.value,
            "clique": [i + 1 for i in res.clique],
            "witness": list(res.witness.probs),
        }, indent=2))
        return
    click.echo(f"capacity: {_fmt(ctx, res.value)}")
    click.echo(f"maximum clique: {_support_str(res.clique)}")
    click.echo("witness: " + ", ".join(_fmt(ctx, v) for v in res.witness.probs))


@graph_group.command("entropy")
@click.option("--metric", "metric_path", required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--epsilon", type=float, required=True)
@click.option("--json", "as_json", is_flag=True)
@click.pass_context
@_guarded
def entropy_cmd(ctx, metric_path, epsilon, as_json):
    """Covering numbers sandwiching the thresholded maximum diversity."""
    metric = parse_metric(_read(metric_path))
    res = epsilon_entropy_bounds(metric, epsilon)
    if as_json:
        click.echo(json.dumps({
            "epsilon": epsilon,
            "covering_number": res.covering_number,
            "covering_number_half": res.covering_number_half,
            "dmax_of_threshold": res.dmax_of_threshold,
        }, indent=2))
        return
    click.echo(f"N(d, eps)   = {res.covering_number}")
    click.echo(f"Dmax(Z^eps) = {_fmt(ctx, res.dmax_of_threshold)}")
    click.echo(f"N(d, eps/2) = {res.covering_number_half}")


if __name__ == "__main__":
    main()
