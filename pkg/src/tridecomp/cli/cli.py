"""Command line utilities for decomposing graphs and exploring the program chain."""

import functools
import json
from pathlib import Path
import sys

import click

from tridecomp.analyze_report import write_report_csv
from tridecomp.constants import DEFAULT_GRID_RESOLUTION, DEFAULT_TOLERANCE
from tridecomp.decompose import decompose, verify_edge_sums
from tridecomp.exceptions import DelegationUndefined, TriDecompError, UncoverableEdge
from tridecomp.generators import (
    BlowupMode,
    gen_blowup,
    gen_complete,
    gen_cycle,
    gen_gnp_min_degree,
    gen_join_regular,
)
from tridecomp.graph import Graph, dump_edge_list, read_edge_list
from tridecomp.interfaces import OutputFormat, RunConfig
from tridecomp.program_search import certify, grid_search, random_clamp_test, solve_threshold
from tridecomp.programs import LEVEL_VARIABLES, ProgramPoint, check_domain, eval_objective
from tridecomp.scalar import NumericMode, format_scalar, parse_scalar
from tridecomp.util import configure_logging
from tridecomp.verify import verify_graph

EXIT_ERROR = 1
EXIT_NEGATIVE_WEIGHT = 2
EXIT_NO_DECOMPOSITION = 3
EXIT_CHECK_FAILED = 4


def exit_codes(f):
    """Map package errors to exit codes, printing the message on stderr."""

    @functools.wraps(f)
    def wrapped(*args, **kwargs):
        try:
            return f(*args, **kwargs)
        except (DelegationUndefined, UncoverableEdge) as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_NO_DECOMPOSITION)
        except (TriDecompError, OSError, ValueError) as exc:
            click.echo(f"error: {exc}", err=True)
            sys.exit(EXIT_ERROR)

    return wrapped


def _emit(text: str, output_path: Path | None) -> None:
    if output_path is None:
        click.echo(text, nl=not text.endswith("\n"))
    else:
        Path(output_path).write_text(text, encoding="utf-8")


def _mode(exact: bool) -> NumericMode:
    return NumericMode.EXACT if exact else NumericMode.FLOAT


def _load(cfg: RunConfig) -> Graph:
    graph = read_edge_list(cfg.input_path)
    cfg.check_graph_size(graph.n)
    return graph


input_option = click.option(
    "-i",
    "--input",
    "input_path",
    required=True,
    type=click.Path(path_type=Path),
    help="Path to edge-list file.",
)
output_option = click.option(
    "-o",
    "--output",
    "output_path",
    default=None,
    type=click.Path(path_type=Path),
    help="Output file, stdout when omitted.",
)
exact_option = click.option(
    "-e",
    "--exact",
    is_flag=True,
    default=False,
    help="Use exact rational arithmetic (n <= 40).",
)
tolerance_option = click.option(
    "-t",
    "--tolerance",
    default=DEFAULT_TOLERANCE,
    show_default=True,
    help="Float tolerance for edge sums and non-negativity.",
)
threads_option = click.option(
    "-j",
    "--threads",
    default=1,
    show_default=True,
    help="Worker threads.",
)
seed_option = click.option(
    "-s",
    "--seed",
    default=0,
    show_default=True,
    help="64-bit random seed.",
)


@click.command(name="decompose")
@input_option
@output_option
@exact_option
@tolerance_option
@threads_option
@click.option(
    "-f",
    "--format",
    "output_format",
    type=click.Choice([fmt.value for fmt in OutputFormat]),
    default=OutputFormat.JSON.value,
    show_default=True,
    help="Report format; csv writes <stem>.triangles.csv and <stem>.edges.csv.",
)
@exit_codes
def decompose_command(input_path, output_path, exact, tolerance, threads, output_format):
    """Compute the triangle weighting of a graph and write its report."""
    cfg = RunConfig(
        command="decompose",
        input_path=input_path,
        output_path=output_path,
        mode=_mode(exact),
        tolerance=tolerance,
        threads=threads,
        output_format=output_format,
    )
    if cfg.output_format == OutputFormat.CSV and cfg.output_path is None:
        msg = "csv output needs --output"
        raise ValueError(msg)
    graph = _load(cfg)
    report = decompose(graph, cfg.mode, cfg.threads)
    if cfg.output_format == OutputFormat.CSV:
        write_report_csv(report, cfg.output_path)
    else:
        _emit(report.model_dump_json(indent=2) + "\n", cfg.output_path)

    verdict = verify_edge_sums(report, cfg.tolerance)
    if not verdict.passed:
        click.echo(
            f"edge sums off by {verdict.worst_error:.3g} at {verdict.worst_edge}", err=True
        )
        sys.exit(EXIT_CHECK_FAILED)
    if report.min_weight is not None and report.min_weight < -cfg.tolerance:
        click.echo(
            f"negative weight {format_scalar(report.min_weight)} at {report.min_witness}",
            err=True,
        )
        sys.exit(EXIT_NEGATIVE_WEIGHT)


@click.command(name="verify")
@input_option
@output_option
@exact_option
@tolerance_option
@threads_option
@seed_option
@exit_codes
def verify_command(input_path, output_path, exact, tolerance, threads, seed):
    """Run the invariant suite applicable at the size of the input graph."""
    cfg = RunConfig(
        command="verify",
        input_path=input_path,
        output_path=output_path,
        mode=_mode(exact),
        tolerance=tolerance,
        threads=threads,
        seed=seed,
    )
    graph = _load(cfg)
    _, summary = verify_graph(
        graph, cfg.mode, cfg.tolerance, seed=cfg.seed, threads=cfg.threads
    )
    for check in summary.checks:
        status = "skipped" if check.skipped else ("ok" if check.passed else "FAILED")
        click.echo(f"{check.name}: {status} ({check.detail})")
    if cfg.output_path is not None:
        _emit(summary.model_dump_json(indent=2) + "\n", cfg.output_path)

    failed = summary.failed()
    if any(name != "non-negativity" for name in failed):
        sys.exit(EXIT_CHECK_FAILED)
    if failed:
        click.echo(f"min_witness {summary.min_witness}", err=True)
        sys.exit(EXIT_NEGATIVE_WEIGHT)


@click.group(name="gen")
def gen():
    """Generate edge lists of test graphs."""


@gen.command(name="complete")
@click.option("-n", "--n", "n", required=True, type=int, help="Number of vertices.")
@output_option
@exit_codes
def gen_complete_command(n, output_path):
    """Complete graph K_n."""
    cfg = RunConfig(command="gen complete", n=n, output_path=output_path)
    _emit(dump_edge_list(gen_complete(cfg.n)), cfg.output_path)


@gen.command(name="gnp")
@click.option("-n", "--n", "n", required=True, type=int, help="Number of vertices.")
@click.option("-p", "--p", "p", required=True, type=float, help="Edge probability.")
@click.option(
    "-m", "--delta-min", default=0, show_default=True, help="Required minimum degree."
)
@seed_option
@output_option
@exit_codes
def gen_gnp_command(n, p, delta_min, seed, output_path):
    """G(n, p) conditioned on a minimum degree."""
    cfg = RunConfig(
        command="gen gnp", n=n, p=p, delta_min=delta_min, seed=seed, output_path=output_path
    )
    graph = gen_gnp_min_degree(cfg.n, cfg.p, cfg.delta_min, cfg.seed)
    _emit(dump_edge_list(graph), cfg.output_path)


@gen.command(name="join")
@click.option("-k", "--k", "k", required=True, type=int, help="Construction size.")
@output_option
@exit_codes
def gen_join_command(k, output_path):
    """Complete join of two regular circulants, minimum degree 3n/4 - 1."""
    cfg = RunConfig(command="gen join", k=k, output_path=output_path)
    _emit(dump_edge_list(gen_join_regular(cfg.k)), cfg.output_path)


BASE_GRAPHS = {"c4": lambda: gen_cycle(4), "k4": lambda: gen_complete(4)}


@gen.command(name="blowup")
@click.option(
    "-b",
    "--base",
    type=click.Choice(sorted(BASE_GRAPHS)),
    default="c4",
    show_default=True,
    help="Base graph.",
)
@click.option("-t", "--part", "part_size", required=True, type=int, help="Part size.")
@click.option(
    "-m",
    "--mode",
    "blowup_mode",
    type=click.Choice([mode.value for mode in BlowupMode]),
    default=BlowupMode.CLIQUE.value,
    show_default=True,
    help="Edges inside a part (clique) or none (independent).",
)
@output_option
@exit_codes
def gen_blowup_command(base, part_size, blowup_mode, output_path):
    """Blow-up of a small base graph."""
    cfg = RunConfig(
        command="gen blowup",
        base=base,
        part_size=part_size,
        blowup_mode=blowup_mode,
        output_path=output_path,
    )
    graph = gen_blowup(BASE_GRAPHS[cfg.base](), cfg.part_size, BlowupMode(cfg.blowup_mode))
    _emit(dump_edge_list(graph), cfg.output_path)


@click.group(name="program")
def program():
    """Evaluate, search and certify the program chain."""


@program.command(name="threshold")
def threshold_command():
    """Print the degree gap threshold (7 - sqrt(21)) / 14."""
    click.echo(f"{solve_threshold():.15f}")


@program.command(name="certify")
@click.option("-d", "--d", "d", required=True, help="Degree gap, read exactly.")
@output_option
@exit_codes
def certify_command(d, output_path):
    """Decide exactly whether the closed-form optimum at d is at most one."""
    cfg = RunConfig(command="program certify", d=d, output_path=output_path)
    certificate = certify(parse_scalar(cfg.d, NumericMode.EXACT))
    _emit(certificate.model_dump_json(indent=2) + "\n", cfg.output_path)


@program.command(name="search")
@click.option("-l", "--level", required=True, type=click.IntRange(9, 10), help="Level 9 or 10.")
@click.option("-d", "--d", "d", required=True, help="Degree gap.")
@click.option(
    "-g",
    "--grid",
    "resolution",
    default=DEFAULT_GRID_RESOLUTION,
    show_default=True,
    help="Grid points per axis.",
)
@threads_option
@output_option
@exit_codes
def search_command(level, d, resolution, threads, output_path):
    """Grid search of the level 9 or 10 objective over [0, d]."""
    cfg = RunConfig(
        command="program search",
        level=level,
        d=d,
        resolution=resolution,
        threads=threads,
        output_path=output_path,
    )
    result = grid_search(cfg.level, parse_scalar(cfg.d, NumericMode.FLOAT), cfg.resolution,
                         cfg.threads)
    _emit(result.model_dump_json(indent=2) + "\n", cfg.output_path)


@program.command(name="clamp-test")
@click.option("-l", "--level", required=True, type=click.IntRange(3, 10), help="Level 3..10.")
@click.option("-d", "--d", "d", default="0.17", show_default=True, help="Degree gap.")
@click.option("-n", "--trials", default=100_000, show_default=True, help="Sampled points.")
@seed_option
@output_option
@exit_codes
def clamp_test_command(level, d, trials, seed, output_path):
    """Check on sampled points that clamping never lowers the objective."""
    cfg = RunConfig(
        command="program clamp-test",
        level=level,
        d=d,
        trials=trials,
        seed=seed,
        output_path=output_path,
    )
    result = random_clamp_test(
        cfg.level, parse_scalar(cfg.d, NumericMode.FLOAT), cfg.trials, cfg.seed
    )
    _emit(result.model_dump_json(indent=2) + "\n", cfg.output_path)
    click.echo("pass" if result.passed else "fail", err=True)
    if not result.passed:
        sys.exit(EXIT_CHECK_FAILED)


def _assignments(values: tuple[str, ...], mode: NumericMode) -> dict:
    assigned = {}
    for item in values:
        name, sep, text = item.partition("=")
        if not sep:
            msg = f"expected name=value, got {item!r}"
            raise ValueError(msg)
        assigned[name.strip()] = parse_scalar(text, mode)
    return assigned


@program.command(name="eval")
@click.option("-l", "--level", required=True, type=click.IntRange(3, 10), help="Level 3..10.")
@click.option("-d", "--d", "d", required=True, help="Degree gap.")
@click.option(
    "-x",
    "--set",
    "values",
    multiple=True,
    help="Variable assignment name=value, repeatable.",
)
@exact_option
@output_option
@exit_codes
def eval_command(level, d, values, exact, output_path):
    """Evaluate the objective of one point, e.g. --level 10 --d 0.17 --set b=0."""
    cfg = RunConfig(
        command="program eval", level=level, d=d, mode=_mode(exact), output_path=output_path
    )
    assigned = _assignments(values, cfg.mode)
    unknown = sorted(set(assigned) - set(LEVEL_VARIABLES[cfg.level]))
    if unknown:
        msg = f"level {cfg.level} has no variable {unknown[0]!r}"
        raise ValueError(msg)
    pt = ProgramPoint(cfg.level, parse_scalar(cfg.d, cfg.mode), **assigned)
    domain = check_domain(pt)
    payload = {
        "level": cfg.level,
        "point": {name: format_scalar(value) for name, value in pt.variables().items()
                  if value is not None},
        "in_domain": domain.passed,
        "violated": domain.detail or None,
        "value": format_scalar(eval_objective(pt)) if domain.passed else None,
    }
    _emit(json.dumps(payload, indent=2) + "\n", cfg.output_path)
    if not domain.passed:
        click.echo(f"error: point violates constraint {domain.detail!r}", err=True)
        sys.exit(EXIT_ERROR)


@click.group()
@click.option("-v", "--verbose", count=True, help="Repeat for more log output.")
def cli(verbose):
    """Entry point"""
    configure_logging(verbose)


cli.add_command(decompose_command)
cli.add_command(verify_command)
cli.add_command(gen)
cli.add_command(program)
