"""``fuzzfta`` command line.

Exit codes: 0 success, 2 parse/validation, 3 method incompatibility
(including DAGs given to a tree-only method), 4 resource bound exceeded.
"""

from __future__ import annotations

import functools
import json
import sys
from pathlib import Path

import click

from fuzzfta import analysis, bench, crisp
from fuzzfta.errors import FuzzFTAError, ValidationError
from fuzzfta.fuzzy import MERGE_TOL
from fuzzfta.tree import MAX_ENUMERATED_EVENTS, cut_sets


def _fail(category, message, code):
    click.echo(f"error[{category}]: {message}", err=True)
    sys.exit(code)


def reports_errors(func):
    @functools.wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except FuzzFTAError as exc:
            _fail(exc.category, exc, exc.exit_code)
        except FileNotFoundError as exc:
            _fail("parse", exc, 2)
        except ValueError as exc:
            _fail("validation", exc, 2)

    return wrapper


def _load(model):
    return bench.load_model(model)


def _order(value):
    if value is None:
        return None
    return [v.strip() for v in value.split(",") if v.strip()]


MODEL = click.argument("model", metavar="FILE")


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
def main() -> None:
    """Crisp and fuzzy unreliability of static fault trees.

    FILE is a path to a .ft model or the name of a bundled one
    (roadtrip, CSD, LSTF).
    """


@main.command("validate")
@MODEL
@reports_errors
def validate_cmd(model):
    """Parse and validate a model."""
    tree, attribution = _load(model)
    kinds = {type(attribution[b]).__name__ for b in tree.basic_events}
    click.echo(
        f"valid: {tree.name} with {len(tree.basic_events)} basic events, {len(tree.gates)} gates, "
        f"tree-structured: {'yes' if tree.is_tree_structured() else 'no'}, "
        f"attribution: {', '.join(sorted(kinds))}"
    )


@main.command("cutsets")
@MODEL
@click.option("--max-events", type=click.IntRange(1, 30), default=MAX_ENUMERATED_EVENTS, show_default=True)
@reports_errors
def cutsets_cmd(model, max_events):
    """List every cut set as a bit string over the basic events."""
    tree, _ = _load(model)
    click.echo("# " + " ".join(tree.basic_events))
    for bits in sorted(cut_sets(tree, max_events), reverse=True):
        click.echo(bits)


@main.command("crisp")
@MODEL
@click.option("--method", type=click.Choice(crisp.METHODS), default="bdd", show_default=True)
@click.option("--order", default=None, help="Comma-separated BDD variable order.")
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), default=None)
@click.option("--format", "out_format", type=click.Choice(["csv", "json"]), default=None)
@reports_errors
def crisp_cmd(model, method, order, out, out_format):
    """Crisp unreliability."""
    tree, attribution = _load(model)
    options = {"order": _order(order)} if method == "bdd" else {}
    result = bench.run_analysis(tree, attribution, method, out=out, out_format=out_format, **options)
    click.echo(result.summary())


def _scheme(tree, scheme, mix_map):
    if scheme is None:
        if mix_map is not None:
            raise ValidationError("--mix-map only applies with --scheme mix")
        return None
    mapping = None
    if scheme == "mix":
        mapping = bench.load_mix_map(mix_map) if mix_map else bench.default_mix_map(tree)
        if mapping is None:
            raise ValidationError(f"model {tree.name!r} has no bundled mix mapping; pass --mix-map")
    return bench.FuzzificationScheme(scheme, mapping)


@main.command("fuzzy")
@MODEL
@click.option("--scheme", type=click.Choice(bench.SCHEMES), default=None,
              help="Fuzzify crisp probabilities first.")
@click.option("--mix-map", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--ncuts", type=click.IntRange(min=1), default=analysis.DEFAULT_N_CUTS, show_default=True)
@click.option("--exact", is_flag=True, help="Exhaustive enumeration (discrete attributions).")
@click.option("--max-combinations", type=click.IntRange(min=1),
              default=analysis.DEFAULT_MAX_COMBINATIONS, show_default=True)
@click.option("--merge-tol", type=click.FloatRange(min=0.0), default=MERGE_TOL, show_default=True)
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), default=None)
@click.option("--format", "out_format", type=click.Choice(["csv", "json"]), default=None)
@reports_errors
def fuzzy_cmd(model, scheme, mix_map, ncuts, exact, max_combinations, merge_tol, out, out_format):
    """Fuzzy unreliability (alpha-cut propagation, or exact for discrete input)."""
    tree, attribution = _load(model)
    result = bench.run_fuzzy(
        tree, attribution, _scheme(tree, scheme, mix_map), ncuts, exact, max_combinations, merge_tol
    )
    if out is not None:
        result.write(out, out_format)
    elif out_format is not None:
        click.echo(result.to_json() if out_format == "json" else result.to_csv(), nl=False)
        return
    click.echo(result.summary())


@main.command("counterexample")
@click.option("--json", "as_json", is_flag=True)
@reports_errors
def counterexample_cmd(as_json):
    """Show that lifting the BDD recurrence to fuzzy numbers is wrong."""
    report = analysis.fuzzy_bdd_counterexample()
    if as_json:
        click.echo(json.dumps({
            "authoritative": False,
            "order": list(report.order),
            "naive": [{"value": v, "membership": m} for v, m in report.naive.items()],
            "exact": [{"value": v, "membership": m} for v, m in report.exact.items()],
            "differ": report.differ,
        }, indent=2))
        return
    for line in report.lines():
        click.echo(line)


@main.command("export")
@MODEL
@click.option("--format", "out_format", type=click.Choice(["csv", "json"]), default="csv", show_default=True)
@click.option("--out", type=click.Path(dir_okay=False, path_type=Path), required=True)
@click.option("--ncuts", type=click.IntRange(min=1), default=analysis.DEFAULT_N_CUTS, show_default=True)
@click.option("--mix-map", type=click.Path(exists=True, dir_okay=False), default=None)
@click.option("--schemes", default=",".join(bench.SCHEMES), show_default=True)
@reports_errors
def export_cmd(model, out_format, out, ncuts, mix_map, schemes):
    """Plot-ready membership polylines: crisp marker plus one series per scheme."""
    tree, attribution = _load(model)
    kinds = [s.strip() for s in schemes.split(",") if s.strip()]
    unknown = [k for k in kinds if k not in bench.SCHEMES]
    if unknown:
        raise ValidationError(f"unknown schemes {unknown}")
    mix = bench.load_mix_map(mix_map) if mix_map else None
    results = bench.figure_results(tree, attribution, ncuts, mix, kinds)
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(bench.emit_figure_data(results, out_format))
    click.echo(f"wrote {len(results)} series to {out}")


if __name__ == "__main__":  # pragma: no cover
    main()
