"""Command-line surface for scripts and CI.

Example:
-------
    ```bash
    aligned-graphs align tests/data/graphs/banana_xy.json      # exit 3
    aligned-graphs component-group --weights x=1 --kind quotient banana_23.json
    aligned-graphs torsion-bound --g 1 --N 1                   # bound 35
    ```

Notes:
-----
Reports go to standard output as compact canonical JSON (``--pretty`` for YAML);
logs go to standard error. Exit codes: 0 success, 1 usage, input or guard
error, 2 invalid graph, 3 ``align`` found the graph not aligned.

"""

import logging
import sys
from pathlib import Path

import click
from pydantic import ValidationError

from aligned_graphs.alignment import is_aligned, is_aligned_bruteforce, neron_model_exists
from aligned_graphs.configuration import Limits
from aligned_graphs.graph import (
    LabelledGraph,
    betti1,
    classify,
    jacobian_dimension,
    require_valid,
    specialize,
    validate,
)
from aligned_graphs.nmodel import (
    DegreeBoundScope,
    TraitWeights,
    critical_group,
    degree_bound,
    pull_back,
    quotient_component_group,
    small_representatives,
    stratified_degree_bounds,
    stratum_thickness_bounds,
    subdivide,
)
from aligned_graphs.report import Report
from aligned_graphs.torsion import BoundQuery, auxiliary_primes, graph_torsion_bound, torsion_order_bound
from aligned_graphs.validation import GraphValidationError, to_canonical_text

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INVALID = 2
EXIT_NOT_ALIGNED = 3


graph_file = click.argument(
    "graph_path",
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
)
weights_option = click.option(
    "--weights",
    "-w",
    default="",
    help="Trait weights, e.g. x=1,y=2 (unlisted parameters get 1)",
)
scope_option = click.option(
    "--scope",
    type=click.Choice([s.value for s in DegreeBoundScope]),
    default=DegreeBoundScope.ORIGINAL.value,
    show_default=True,
    help="Components the partial degrees are taken on",
)


def _emit(ctx: click.Context, obj: dict) -> None:
    click.echo(to_canonical_text(obj, pretty=ctx.obj["pretty"]), nl=False)


def _load(graph_path: Path) -> LabelledGraph:
    return require_valid(LabelledGraph.from_file(graph_path))


@click.group()
@click.option("--pretty", is_flag=True, default=False, help="Human-readable YAML output")
@click.option("--verbose", "-v", is_flag=True, default=False, help="Log progress to stderr")
@click.option(
    "--unsafe-limits",
    is_flag=True,
    default=False,
    help="Disable every guard on exhaustive searches",
)
@click.pass_context
def cli(ctx: click.Context, pretty: bool, verbose: bool, unsafe_limits: bool) -> None:
    """Néron model combinatorics of labelled dual graphs."""
    log = logging.getLogger(__name__)

    logging.basicConfig(
        level=logging.INFO if verbose else logging.WARNING,
        stream=sys.stderr,
    )

    limits = Limits.unlimited() if unsafe_limits else Limits.from_env()
    if unsafe_limits:
        log.warning("Guards disabled by --unsafe-limits")

    ctx.obj = {"pretty": pretty, "limits": limits}


@cli.command("validate")
@graph_file
@click.pass_context
def validate_command(ctx: click.Context, graph_path: Path) -> int:
    """Check a graph file against every structural invariant."""
    g = LabelledGraph.from_file(graph_path)
    violations = validate(g)
    _emit(ctx, {"valid": not violations, "violations": violations})
    return EXIT_INVALID if violations else EXIT_OK


@cli.command("classify")
@graph_file
@click.pass_context
def classify_command(ctx: click.Context, graph_path: Path) -> int:
    """Classify a graph as Tree, Treelike, AlignedNotTreelike or NotAligned."""
    g = _load(graph_path)
    _emit(
        ctx,
        {
            "classification": str(classify(g)),
            "betti1": betti1(g),
            "jacobian_dimension": jacobian_dimension(g),
        },
    )
    return EXIT_OK


@cli.command("align")
@graph_file
@click.option("--strata", is_flag=True, default=False, help="Also check every stratum")
@click.option(
    "--bruteforce",
    is_flag=True,
    default=False,
    help="Check every pair on every circuit instead of block by block",
)
@click.pass_context
def align_command(ctx: click.Context, graph_path: Path, strata: bool, bruteforce: bool) -> int:
    """Decide alignment; exit 3 with a witness when the graph is not aligned."""
    limits = ctx.obj["limits"]
    g = _load(graph_path)

    verdict = is_aligned_bruteforce(g, limit=limits.circuit_edges) if bruteforce else is_aligned(g)
    result = verdict.to_dict()
    if strata:
        result["neron_model"] = neron_model_exists(g, limit=limits.strata_parameters).to_dict()

    _emit(ctx, result)
    return EXIT_OK if verdict.aligned else EXIT_NOT_ALIGNED


@cli.command("specialize")
@graph_file
@click.option("--keep", "-k", default="", help="Parameters that stay non-invertible, e.g. x,y")
@click.pass_context
def specialize_command(ctx: click.Context, graph_path: Path, keep: str) -> int:
    """Print the graph of the stratum where only the kept parameters vanish."""
    g = _load(graph_path)
    _emit(ctx, specialize(g, [k.strip() for k in keep.split(",") if k.strip()]).to_dict())
    return EXIT_OK


@cli.command("pullback")
@graph_file
@weights_option
@click.option("--subdivide", "resolve", is_flag=True, default=False, help="Subdivide thick edges")
@click.option("--all-strata", is_flag=True, default=False, help="Largest thickness at every stratum")
@click.pass_context
def pullback_command(  # noqa: PLR0913
    ctx: click.Context,
    graph_path: Path,
    weights: str,
    resolve: bool,
    all_strata: bool,
) -> int:
    """Print the weighted graph over a trait."""
    limits = ctx.obj["limits"]
    g = _load(graph_path)
    w = TraitWeights.parse(weights, g.parameters)
    wg = pull_back(g, w)

    result = (subdivide(wg) if resolve else wg).to_dict()
    if all_strata:
        bounds = stratum_thickness_bounds(g, w, limit=limits.strata_parameters)
        result["strata"] = [{"keep": list(keep), "thickness": m} for keep, m in bounds.items()]

    _emit(ctx, result)
    return EXIT_OK


@cli.command("component-group")
@graph_file
@weights_option
@click.option(
    "--kind",
    type=click.Choice(["critical", "quotient", "both"]),
    default="both",
    show_default=True,
)
@click.pass_context
def component_group_command(ctx: click.Context, graph_path: Path, weights: str, kind: str) -> int:
    """Print the component groups of the fibre over a trait."""
    g = _load(graph_path)
    wg = pull_back(g, TraitWeights.parse(weights, g.parameters))

    result = {}
    if kind in ("critical", "both"):
        result["critical"] = critical_group(wg).to_dict()
    if kind in ("quotient", "both"):
        result["quotient"] = quotient_component_group(wg).to_dict()

    _emit(ctx, result)
    return EXIT_OK


@cli.command("degree-bound")
@graph_file
@weights_option
@scope_option
@click.option("--all-strata", is_flag=True, default=False, help="Bound every stratum")
@click.option(
    "--representatives",
    is_flag=True,
    default=False,
    help="List a smallest multidegree per component",
)
@click.pass_context
def degree_bound_command(  # noqa: PLR0913
    ctx: click.Context,
    graph_path: Path,
    weights: str,
    scope: str,
    all_strata: bool,
    representatives: bool,
) -> int:
    """Print the least sup-norm reaching every component."""
    limits = ctx.obj["limits"]
    g = _load(graph_path)
    w = TraitWeights.parse(weights, g.parameters)
    wg = pull_back(g, w)
    scope = DegreeBoundScope(scope)

    result = {
        "scope": scope.value,
        "bound": degree_bound(wg, scope, limit=limits.coset_order, ball_limit=limits.degree_ball),
    }
    if representatives:
        result["representatives"] = [
            m.to_dict()
            for m in small_representatives(wg, scope, limit=limits.coset_order, ball_limit=limits.degree_ball)
        ]
    if all_strata:
        bounds = stratified_degree_bounds(g, w, scope, limits=limits)
        result["strata"] = [{"keep": list(keep), "bound": n} for keep, n in bounds.items()]

    _emit(ctx, result)
    return EXIT_OK


@cli.command("torsion-bound")
@click.option("--g", "dimension", type=click.IntRange(min=0), help="Group dimension")
@click.option("--N", "level", type=click.IntRange(min=1), required=True, help="Bad-reduction level")
@click.option("--d", "degree", type=click.IntRange(min=1), default=1, show_default=True)
@click.option(
    "--graph",
    "graph_path",
    type=click.Path(exists=True, dir_okay=False, path_type=Path),
    help="Take the dimension from the jacobian of this graph's fibre",
)
@click.pass_context
def torsion_bound_command(
    ctx: click.Context,
    dimension: int | None,
    level: int,
    degree: int,
    graph_path: Path | None,
) -> int:
    """Print a bound on orders of torsion sections."""
    if graph_path is not None:
        g = _load(graph_path)
        result = graph_torsion_bound(g, level, degree, limit=ctx.obj["limits"].strata_parameters).to_dict()
    elif dimension is not None:
        query = BoundQuery(g=dimension, N=level, d=degree)
        result = {
            "g": dimension,
            "N": level,
            "d": degree,
            "primes": list(auxiliary_primes(level)),
            "bound": torsion_order_bound(query),
        }
    else:
        msg = "Give either --g or --graph"
        raise click.UsageError(msg)

    _emit(ctx, result)
    return EXIT_OK


@cli.command("report")
@graph_file
@weights_option
@scope_option
@click.option("--N", "level", type=click.IntRange(min=1), help="Also bound torsion at this level")
@click.option("--d", "degree", type=click.IntRange(min=1), default=1, show_default=True)
@click.option("--timings", is_flag=True, default=False, help="Record stage durations")
@click.pass_context
def report_command(  # noqa: PLR0913
    ctx: click.Context,
    graph_path: Path,
    weights: str,
    scope: str,
    level: int | None,
    degree: int,
    timings: bool,
) -> int:
    """Run the whole pipeline and print one consolidated report."""
    run_report = Report(
        graph_path=graph_path,
        weights=weights,
        scope=DegreeBoundScope(scope),
        limits=ctx.obj["limits"],
        level=level,
        degree=degree,
        timings=timings,
    ).run()

    _emit(ctx, run_report.to_dict())

    if run_report.error is None:
        return EXIT_OK
    if isinstance(run_report.error.exception, GraphValidationError):
        return EXIT_INVALID
    return EXIT_ERROR


def run(argv: list[str] | None = None) -> int:
    """Run the CLI and return its exit code instead of exiting.

    Parameters
    ----------
    argv : list[str] | None, optional
        Arguments without the program name, by default ``sys.argv[1:]``

    Returns
    -------
    int
        0 on success, 1 on usage, input or guard errors, 2 on an invalid graph,
        3 when ``align`` finds the graph not aligned
    """
    try:
        code = cli.main(
            args=argv,
            prog_name="aligned-graphs",
            standalone_mode=False,
            auto_envvar_prefix="ALIGNED_GRAPHS",
        )
    except click.exceptions.Exit as e:
        return e.exit_code
    except click.exceptions.Abort:
        click.echo("Aborted!", err=True)
        return EXIT_ERROR
    except click.ClickException as e:
        e.show()
        return EXIT_ERROR
    except GraphValidationError as e:
        click.echo(f"Error: {e}", err=True)
        return EXIT_INVALID
    except (ValidationError, ValueError, KeyError, RuntimeError) as e:
        click.echo(f"Error: {e}", err=True)
        return EXIT_ERROR

    return code if isinstance(code, int) else EXIT_OK


def main() -> None:
    """Console script entry point."""
    sys.exit(run(sys.argv[1:]))


if __name__ == "__main__":
    main()
