"""Command-line driver.

Exit codes: 0 when every report holds, 1 when any report fails, 2 on usage, parse or
other input errors, 3 when ``--strict-premises`` is set and some report has unmet
premises (and none fails).
"""

import logging
import sys
from dataclasses import dataclass
from typing import List, Optional, Sequence

import click

from . import __version__
from .bounds import bound_f, bound_g, bound_kos, BoundValue
from .catalog import CatalogEntry, group_summary, resolve_group, shared_catalog
from .cayley_io import ReportDocument, emit_report
from .config import config
from .errors import BoundOverflow, GroupError
from .group_core import GroupTable
from .morphisms import AutSubgroup, automorphism_group, count_automorphisms, inner_automorphism_group
from .series import a_center_series
from .sweeps import SWEEPS, run_checks
from .theorems import CheckReport, Verdict, verify_example

logger = logging.getLogger(__name__)

EXIT_OK, EXIT_FAILS, EXIT_USAGE, EXIT_UNMET = 0, 1, 2, 3


@dataclass
class CliState:
    max_order: int
    json_path: Optional[str]
    csv_path: Optional[str]
    strict_premises: bool


def setup_logging(verbose: bool) -> None:
    logging.basicConfig(
        level=logging.DEBUG if verbose else config.log_level,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=[logging.StreamHandler()],
        force=True,
    )


def exit_code_for(reports: Sequence[CheckReport], strict_premises: bool) -> int:
    verdicts = {r.verdict for r in reports}
    if Verdict.FAILS in verdicts:
        return EXIT_FAILS
    if strict_premises and Verdict.PREMISES_UNMET in verdicts:
        return EXIT_UNMET
    return EXIT_OK


def _finish(state: CliState, reports: List[CheckReport]) -> int:
    doc = ReportDocument(reports)
    summary = doc.summary
    click.echo(f"{len(reports)} reports: holds={summary['holds']} fails={summary['fails']} "
               f"premises_unmet={summary['premises_unmet']}")
    for report in reports:
        if report.verdict == Verdict.FAILS:
            click.echo(f"FAIL {report.check_name} {report.group_name} {report.quantities}")
    if state.json_path:
        emit_report(doc, "json", state.json_path)
    if state.csv_path:
        emit_report(doc, "csv", state.csv_path)
    return exit_code_for(reports, state.strict_premises)


def group_options(fn):
    fn = click.option('--perm-file', type=click.Path(dir_okay=False), default=None,
                      help='Permutation generator file')(fn)
    fn = click.option('--file', 'cayley_file', type=click.Path(dir_okay=False), default=None,
                      help='Cayley table file')(fn)
    fn = click.option('--group', 'group_name', default=None, help='Catalog name, e.g. S3 or S3xC2')(fn)
    return fn


def _selected_entry(group_name: Optional[str], cayley_file: Optional[str],
                    perm_file: Optional[str]) -> CatalogEntry:
    if group_name is not None and cayley_file is None and perm_file is None:
        return shared_catalog().get(group_name)
    G = resolve_group(group_name, cayley_file, perm_file)
    return CatalogEntry(G.name, "table", (), G.order, cached=G)


def _selected_group(group_name, cayley_file, perm_file) -> GroupTable:
    return _selected_entry(group_name, cayley_file, perm_file).build()


@click.group()
@click.version_option(__version__, prog_name="hypercenter-harness")
@click.option('--max-order', default=64, type=click.IntRange(1, None), help='Largest catalog order swept')
@click.option('--json', 'json_path', default=None, help='Write the report document as JSON ("-" for stdout)')
@click.option('--csv', 'csv_path', default=None, help='Write the reports as CSV ("-" for stdout)')
@click.option('--strict-premises', is_flag=True, help='Exit 3 when premises are unmet')
@click.option('--verbose', '-v', is_flag=True, help='Debug logging')
@click.pass_context
def cli(ctx, max_order, json_path, csv_path, strict_premises, verbose):
    """Finite-group hypercenter harness."""
    setup_logging(verbose)
    ctx.obj = CliState(max_order, json_path, csv_path, strict_premises)


@cli.command()
@group_options
def info(group_name, cayley_file, perm_file):
    """Order, center, nilpotency class and |Aut| of one group."""
    summary = group_summary(_selected_group(group_name, cayley_file, perm_file))
    for key in ("name", "order", "abelian", "center_order", "nilpotency_class",
                "hypercenter_order", "inn_order", "aut_order"):
        value = summary[key]
        if key == "nilpotency_class" and value is None:
            value = "absent"
        if key == "aut_order" and value is not None and not summary["aut_exact"]:
            value = f">= {value}"
        click.echo(f"{key}: {value}")
    return EXIT_OK


def _action_for(entry: CatalogEntry, G: GroupTable, action: str) -> AutSubgroup:
    if action == "inner":
        return inner_automorphism_group(G)
    if action == "aut":
        return automorphism_group(G)
    if action == "trivial":
        return AutSubgroup.trivial(G)
    stored = entry.action()
    if stored is None or stored.group is not G:
        raise click.UsageError(f"{entry.name} has no stored action on itself")
    return stored


@cli.command()
@group_options
@click.option('--action', type=click.Choice(['inner', 'aut', 'trivial', 'stored']), default='inner',
              help='Acting group: Inn(G), Aut(G), trivial, or the catalog\'s stored action')
def series(group_name, cayley_file, perm_file, action):
    """The A-center series (upper central series by default)."""
    entry = _selected_entry(group_name, cayley_file, perm_file)
    G = entry.build()
    A = _action_for(entry, G, action)
    result = a_center_series(G, A)
    click.echo(f"{G.name} under {A.name} (order {A.order})")
    for i, term in enumerate(result.terms):
        click.echo(f"  Z_{i}: order {term.order}")
    click.echo(f"hypercentral: {result.is_hypercentral}")
    return EXIT_OK


@cli.command()
@group_options
@click.option('--limit', type=int, default=None, help='Stop counting here')
def aut(group_name, cayley_file, perm_file, limit):
    """|Aut(G)| and |Inn(G)|."""
    G = _selected_group(group_name, cayley_file, perm_file)
    count, exact = count_automorphisms(G, limit=limit)
    click.echo(f"aut_order: {count if exact else f'>= {count}'}")
    click.echo(f"inn_order: {inner_automorphism_group(G).order}")
    return EXIT_OK


@cli.command()
@click.argument('check', type=click.Choice(sorted(SWEEPS) + ['all']))
@click.option('--catalog', 'use_catalog', is_flag=True, help='Sweep the catalog up to --max-order')
@group_options
@click.pass_obj
def verify(state: CliState, check, use_catalog, group_name, cayley_file, perm_file):
    """Run one check (or all) over the catalog or over one group."""
    if use_catalog:
        entries = shared_catalog().entries(max_order=state.max_order)
    elif group_name or cayley_file or perm_file:
        entries = [_selected_entry(group_name, cayley_file, perm_file)]
    elif check == "example":
        entries = []
    else:
        raise click.UsageError("give --catalog or one of --group/--file/--perm-file")
    logger.info(f"Running {check} over {len(entries)} groups with {config.max_workers} workers")
    reports = run_checks(check, entries)
    if not reports and not use_catalog and entries:
        logger.warning(f"{check} produced no reports for {entries[0].name}")
        click.echo(f"warning: {check} does not apply to {entries[0].name}", err=True)
    return _finish(state, reports)


@cli.command()
@click.option('--p', 'p', type=int, required=True, help='Odd prime')
@click.option('--n', 'n', type=int, required=True, help='Rank of Z')
@click.pass_obj
def example(state: CliState, p, n):
    """Check the truncated counterexample for (p, n)."""
    report = verify_example(p, n)
    for key, value in sorted(report.quantities.items()):
        click.echo(f"{key}: {value}")
    return _finish(state, [report])


def _format_bound(value: BoundValue) -> str:
    if value.ceil is not None and value.ceil < 10 ** 30:
        return str(value.ceil)
    return f"2^{value.log2:.6g}" + ("" if value.exact else " (lower bound)")


@cli.command()
@click.option('--t', 't', type=click.IntRange(1, None), required=True)
def bounds(t):
    """g(t), kos(t) and f(t)."""
    click.echo(f"g({t}) = {_format_bound(bound_g(t))}")
    click.echo(f"kos({t}) = {_format_bound(bound_kos(t))}")
    try:
        click.echo(f"f({t}) = {_format_bound(bound_f(t))}")
    except BoundOverflow as e:
        click.echo(f"f({t}) = beyond cap ({e})")
    return EXIT_OK


@cli.command(name='catalog')
@click.pass_obj
def list_catalog(state: CliState):
    """List catalog groups up to --max-order."""
    for entry in shared_catalog().entries(max_order=state.max_order):
        click.echo(f"{entry.name}\t{entry.order}\t{entry.kind}")
    return EXIT_OK


@cli.command()
@click.option('--transport', type=click.Choice(['stdio', 'sse', 'streamable-http']), default='stdio',
              help='Transport type')
@click.option('--port', default=8000, help='Port for SSE/HTTP transport')
def serve(transport, port):
    """Run the MCP tool server."""
    from .server import serve as run_server
    return run_server(transport, port)


def run_cli(args: Sequence[str]) -> int:
    try:
        rv = cli.main(args=list(args), prog_name="hypercenter-harness", standalone_mode=False)
    except click.ClickException as e:
        e.show()
        return EXIT_USAGE
    except click.exceptions.Abort:
        return EXIT_USAGE
    except GroupError as e:
        logger.error(f"{type(e).__name__}: {e}")
        click.echo(f"error: {e}", err=True)
        return EXIT_USAGE
    return rv if isinstance(rv, int) else EXIT_OK


def main() -> None:
    sys.exit(run_cli(sys.argv[1:]))
