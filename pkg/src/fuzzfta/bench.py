"""Fuzzification schemes, bundled benchmark models and result serialisation."""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Mapping, Optional, Sequence, Union

from fuzzfta import analysis, crisp
from fuzzfta.alpha import AlphaCutSeries, to_membership_samples
from fuzzfta.errors import MethodError, ValidationError
from fuzzfta.fuzzy import DiscreteFuzzy, FuzzyNumber, GaussianFuzzy, TrapezoidalFuzzy, TriangularFuzzy
from fuzzfta.tree import FaultTree, load

SHAPES = ("tri", "trap", "gauss")
SCHEMES = SHAPES + ("mix",)
BENCHMARKS = ("roadtrip", "CSD", "LSTF")


def fuzzify_value(p: float, shape: str) -> FuzzyNumber:
    """Spread a crisp probability into a fuzzy number centred on it."""
    p = float(p)
    if shape == "tri":
        return TriangularFuzzy(0.2 * p, p, 1.8 * p)
    if shape == "trap":
        return TrapezoidalFuzzy(0.2 * p, 0.9 * p, 1.1 * p, 1.8 * p)
    if shape == "gauss":
        if p == 0.0:
            raise ValueError("gaussian fuzzification of p = 0 has zero spread")
        return GaussianFuzzy(p, 0.4 * p)
    raise ValueError(f"unknown shape {shape!r}; expected one of {SHAPES}")


@dataclass(frozen=True)
class FuzzificationScheme:
    kind: str
    mix: Optional[Mapping[str, str]] = None

    def __post_init__(self):
        if self.kind not in SCHEMES:
            raise ValueError(f"unknown scheme {self.kind!r}; expected one of {SCHEMES}")
        if self.kind == "mix" and self.mix is None:
            raise ValueError("the mix scheme needs a basic event -> shape mapping")
        if self.mix is not None:
            bad = {b: s for b, s in self.mix.items() if s not in SHAPES}
            if bad:
                raise ValueError(f"mix mapping uses unknown shapes: {bad}")

    def shape_for(self, be):
        return self.mix[be] if self.kind == "mix" else self.kind

    def check_covers(self, tree: FaultTree):
        if self.kind != "mix":
            return
        missing = sorted(set(tree.basic_events) - set(self.mix))
        extra = sorted(set(self.mix) - set(tree.basic_events))
        if missing or extra:
            raise ValidationError(
                "mix mapping must cover every basic event exactly once"
                + (f"; missing {missing}" if missing else "")
                + (f"; unknown {extra}" if extra else "")
            )


def fuzzify(attribution: Mapping[str, float], scheme: FuzzificationScheme, tree: Optional[FaultTree] = None):
    if tree is not None:
        scheme.check_covers(tree)
        keys = tree.basic_events
    else:
        keys = list(attribution)
    out = {}
    for be in keys:
        p = attribution[be]
        if isinstance(p, (FuzzyNumber, DiscreteFuzzy)):
            raise MethodError(f"basic event {be!r} is already fuzzy")
        if not 0.0 <= float(p) <= 1.0:
            raise ValueError(f"probability of {be!r} is {p!r}, outside [0, 1]")
        if scheme.kind == "mix" and be not in scheme.mix:
            raise ValidationError(f"mix mapping has no entry for basic event {be!r}")
        out[be] = fuzzify_value(p, scheme.shape_for(be))
    return out


def load_mix_map(path: Union[str, Path]) -> dict[str, str]:
    data = json.loads(Path(path).read_text())
    if not isinstance(data, dict):
        raise ValidationError(f"{path}: mix mapping must be a JSON object")
    return {str(k): str(v) for k, v in data.items()}


def _data_file(name):
    return resources.files("fuzzfta") / "data" / name


def resolve_model(ref: Union[str, Path]) -> Path:
    """A path on disk, or the name of a bundled model (``CSD``, ``CSD.ft`` ...)."""
    path = Path(ref)
    if path.exists():
        return path
    stem = path.name[:-3] if path.name.endswith(".ft") else path.name
    if stem in BENCHMARKS and path.parent == Path("."):
        return Path(str(_data_file(f"{stem}.ft")))
    raise FileNotFoundError(f"no such model file {str(ref)!r}")


def load_model(ref):
    return load(resolve_model(ref))


def default_mix_map(tree: FaultTree) -> Optional[dict[str, str]]:
    """The bundled mix mapping of a benchmark model, when it has one."""
    candidate = _data_file(f"{tree.name}.mix.json")
    if tree.name and candidate.is_file():
        return load_mix_map(Path(str(candidate)))
    return None


# --------------------------------------------------------------------- results


def fmt(x: float) -> str:
    """17 significant digits: enough to round-trip any double."""
    return format(float(x), ".17g")


@dataclass(frozen=True)
class AnalysisResult:
    model: str
    method: str
    value: Optional[float] = None
    fuzzy: Optional[analysis.FuzzyResult] = None
    scheme: Optional[str] = None
    meta: dict = field(default_factory=dict)

    @property
    def label(self):
        if self.fuzzy is None:
            return "crisp"
        return f"u_{self.scheme}" if self.scheme else f"u_{self.method}"

    def to_json_dict(self):
        out = {"model": self.model, "method": self.method}
        if self.scheme:
            out["scheme"] = self.scheme
        if self.fuzzy is None:
            out["value"] = float(fmt(self.value))
            return out
        if not self.fuzzy.authoritative:
            out["authoritative"] = False
        if self.fuzzy.series is not None:
            series = self.fuzzy.series
            out["n_cuts"] = series.n_cuts
            out["levels"] = [
                {"alpha": float(fmt(a)), "lower": float(fmt(lo)), "upper": float(fmt(hi))}
                for a, lo, hi in series.rows()
            ]
        else:
            out["support"] = [
                {"value": float(fmt(v)), "membership": float(fmt(m))} for v, m in self.fuzzy.exact.items()
            ]
        return out

    def to_json(self):
        return json.dumps(self.to_json_dict(), indent=2) + "\n"

    def to_csv(self):
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        if self.fuzzy is None:
            writer.writerow(["value"])
            writer.writerow([fmt(self.value)])
        elif self.fuzzy.series is not None:
            writer.writerow(["alpha", "lower", "upper"])
            for a, lo, hi in self.fuzzy.series.rows():
                writer.writerow([fmt(a), fmt(lo), fmt(hi)])
        else:
            writer.writerow(["value", "membership"])
            for v, m in self.fuzzy.exact.items():
                writer.writerow([fmt(v), fmt(m)])
        return buf.getvalue()

    def summary(self):
        if self.fuzzy is None:
            return f"{self.value:.15g}"
        head = f"{self.model} {self.method}"
        if self.scheme:
            head += f" scheme={self.scheme}"
        if self.fuzzy.series is not None:
            s = self.fuzzy.series
            top, bottom = s.cut(s.n_cuts - 1), s.cut(0)
            return (
                f"{head} n_cuts={s.n_cuts}: alpha=1 [{top.lo:.15g}, {top.hi:.15g}], "
                f"alpha={1 / s.n_cuts:.4g} [{bottom.lo:.15g}, {bottom.hi:.15g}]"
            )
        x = self.fuzzy.exact
        peak = [v for v, m in x.items() if m == x.height()]
        return (
            f"{head}: {len(x)} support points in [{x.values[0]:.15g}, {x.values[-1]:.15g}], "
            f"peak at {', '.join(f'{v:.15g}' for v in peak)}"
        )

    def write(self, path: Union[str, Path], fmt_name: Optional[str] = None):
        path = Path(path)
        fmt_name = fmt_name or ("json" if path.suffix.lower() == ".json" else "csv")
        text = self.to_json() if fmt_name == "json" else self.to_csv()
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text)
        return path


def run_crisp(tree, attribution, method="bdd", order=None, **options) -> AnalysisResult:
    value = crisp.unreliability(tree, attribution, method=method, order=order, **options)
    return AnalysisResult(tree.name, method, value=value)


def _has_convex(tree, attribution):
    return any(isinstance(attribution.get(b), FuzzyNumber) for b in tree.basic_events)


def _has_discrete(tree, attribution):
    return any(isinstance(attribution.get(b), DiscreteFuzzy) for b in tree.basic_events)


def run_fuzzy(
    tree: FaultTree,
    attribution: Mapping,
    scheme: Optional[FuzzificationScheme] = None,
    n_cuts: int = analysis.DEFAULT_N_CUTS,
    exact: bool = False,
    max_combinations: int = analysis.DEFAULT_MAX_COMBINATIONS,
    merge_tol: float = analysis.MERGE_TOL,
) -> AnalysisResult:
    """Fuzzy unreliability with the route implied by the attribution kind.

    Discrete attributions (crisp numbers count as singletons) go through the
    exact enumerator (``exact=True``) or discrete propagation; anything with a
    tri/trap/gauss number goes through alpha-cut propagation.
    """
    if scheme is not None:
        attribution = fuzzify(attribution, scheme, tree)
    convex = _has_convex(tree, attribution)
    discrete = not convex and _has_discrete(tree, attribution)
    if exact:
        if convex:
            raise MethodError("--exact needs discrete or crisp attributions for every basic event")
        value = analysis.fuzzy_unreliability_exact(tree, attribution, max_combinations, merge_tol)
        result = analysis.FuzzyResult("exact", tree.name, exact=value)
    elif discrete:
        value = analysis.fuzzy_unreliability_bu_discrete(tree, attribution, merge_tol)
        result = analysis.FuzzyResult("bu-discrete", tree.name, exact=value)
    else:
        series = analysis.fuzzy_unreliability_bu_alpha(tree, attribution, n_cuts)
        result = analysis.FuzzyResult("bu-alpha", tree.name, series=series, n_cuts=n_cuts)
    return AnalysisResult(tree.name, result.method, fuzzy=result, scheme=scheme.kind if scheme else None)


def run_analysis(
    tree: FaultTree,
    attribution: Mapping,
    method: str = "bu-alpha",
    scheme: Optional[FuzzificationScheme] = None,
    n_cuts: int = analysis.DEFAULT_N_CUTS,
    out: Optional[Union[str, Path]] = None,
    out_format: Optional[str] = None,
    **options,
) -> AnalysisResult:
    """Run one analysis and optionally write it to ``out`` (CSV or JSON)."""
    if method in crisp.METHODS:
        result = run_crisp(tree, attribution, method, **options)
    elif method in ("bu-alpha", "bu-discrete", "exact"):
        result = run_fuzzy(tree, attribution, scheme, n_cuts, exact=method == "exact", **options)
        if method == "bu-discrete" and result.method != method:
            raise MethodError(f"method {method!r} needs discrete attributions")
        if method == "bu-alpha" and result.method != method:
            raise MethodError(f"method {method!r} needs interval-valued attributions")
    else:
        raise ValueError(f"unknown method {method!r}")
    if out is not None:
        result.write(out, out_format)
    return result


def figure_series(results: Sequence[AnalysisResult]) -> list[dict]:
    """Plot-ready polylines: one per fuzzy result, a spike for each crisp one."""
    series = []
    for r in results:
        if r.fuzzy is None:
            points = [(r.value, 0.0), (r.value, 1.0), (r.value, 0.0)]
        elif r.fuzzy.series is not None:
            points = to_membership_samples(r.fuzzy.series)
        else:
            points = r.fuzzy.exact.items()
        series.append({"label": r.label, "points": [(float(v), float(m)) for v, m in points]})
    return series


def emit_figure_data(results: Sequence[AnalysisResult], fmt_name="csv") -> str:
    models = {r.model for r in results}
    if len(models) > 1:
        raise ValueError(f"figure data mixes models: {sorted(models)}")
    series = figure_series(results)
    if fmt_name == "json":
        bundle = {
            "model": models.pop() if models else None,
            "series": [
                {
                    "label": s["label"],
                    "points": [{"value": float(fmt(v)), "membership": float(fmt(m))} for v, m in s["points"]],
                }
                for s in series
            ],
        }
        return json.dumps(bundle, indent=2) + "\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["series", "value", "membership"])
    for s in series:
        for v, m in s["points"]:
            writer.writerow([s["label"], fmt(v), fmt(m)])
    return buf.getvalue()


def figure_results(tree, attribution, n_cuts=analysis.DEFAULT_N_CUTS, mix=None, schemes=SCHEMES):
    """Crisp marker plus one alpha-cut result per scheme, for a crisp-attributed model."""
    results = [run_crisp(tree, attribution, "bu" if tree.is_tree_structured() else "bdd")]
    for kind in schemes:
        mapping = None
        if kind == "mix":
            mapping = mix if mix is not None else default_mix_map(tree)
            if mapping is None:
                raise ValidationError(f"model {tree.name!r} has no bundled mix mapping; pass one")
        results.append(run_fuzzy(tree, attribution, FuzzificationScheme(kind, mapping), n_cuts))
    return results
