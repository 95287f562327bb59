"""Command-line front end.

``cascade-bn learn`` runs the whole pipeline (load, augment, balance,
discretize, structure search, CPT fit) from a JSON config and writes the
model artifacts. ``query`` and ``cascade`` answer questions against a
written model. ``export`` regenerates the DOT/CSV views from a model
file, and ``serve`` publishes it over HTTP for the what-if UI.

Exit codes: 0 success, 1 pipeline failure, 2 usage error, 3 inference
error (e.g. conditioning on impossible evidence).
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import dataset, inference, params, search
from .cascade import DEFAULT_MAX_HOPS, CascadeScenario, cascade_lift
from .errors import (
    CascadeBnError,
    InferenceError,
    TargetIsEvidence,
    UnknownNode,
)
from .graph import Dag
from .scoring import Objective

# Fill colors per domain tag for DOT export; unknown tags render white.
DOMAIN_COLORS = {
    "Air": "#a6cee3",
    "Water": "#80b1d3",
    "Electricity": "#fdb462",
    "Agriculture": "#b3de69",
    "Weather": "#bebada",
    "Climate": "#8dd3c7",
    "Health": "#fb8072",
    "Infrastructure": "#d9d9d9",
}
DEFAULT_COLOR = "#ffffff"


class ConfigError(Exception):
    """Pipeline config rejected; message names the offending field."""


class StageError(Exception):
    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"stage '{stage}': {cause}")
        self.stage = stage
        self.cause = cause


def _fail(code: int, message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(code)


# ---------------------------------------------------------------------------
# pipeline config

def _expect(doc: dict, field: str, kind, where: str):
    if field not in doc:
        raise ConfigError(f"missing field '{where}{field}'")
    value = doc[field]
    if kind is float and isinstance(value, int):
        value = float(value)
    if not isinstance(value, kind) or isinstance(value, bool):
        raise ConfigError(
            f"field '{where}{field}' must be {kind.__name__}, got {type(value).__name__}"
        )
    return value


def _optional(doc: dict, field: str, kind, default, where: str):
    if field not in doc or doc[field] is None:
        return default
    return _expect(doc, field, kind, where)


def _edge_set(doc: dict, field: str, where: str) -> frozenset[tuple[str, str]]:
    raw = doc.get(field)
    if raw is None:
        return frozenset()
    if not isinstance(raw, list):
        raise ConfigError(f"field '{where}{field}' must be a list of [parent, child] pairs")
    edges = set()
    for item in raw:
        if (
            not isinstance(item, list)
            or len(item) != 2
            or not all(isinstance(x, str) for x in item)
        ):
            raise ConfigError(f"field '{where}{field}' entries must be [parent, child] string pairs")
        edges.add((item[0], item[1]))
    return frozenset(edges)


class PipelineConfig:
    """Validated form of the learn config JSON."""

    def __init__(self, doc: dict, base_dir: Path):
        if not isinstance(doc, dict):
            raise ConfigError("config root must be a JSON object")
        self.schema_path = base_dir / _expect(doc, "schema", str, "")
        self.data_path = base_dir / _expect(doc, "data", str, "")
        out_dir = _optional(doc, "out_dir", str, None, "")
        self.out_dir = None if out_dir is None else base_dir / out_dir
        self.alpha = _optional(doc, "alpha", float, 1.0, "")
        if self.alpha < 0:
            raise ConfigError("field 'alpha' must be >= 0")

        boot = doc.get("bootstrap")
        if boot is None:
            self.bootstrap = None
        elif isinstance(boot, dict):
            self.bootstrap = {
                "n_extra": _optional(boot, "n_extra", int, 0, "bootstrap."),
                "noise_scale": _optional(boot, "noise_scale", float, 0.05, "bootstrap."),
                "seed": _optional(boot, "seed", int, 0, "bootstrap."),
            }
            if self.bootstrap["n_extra"] < 0:
                raise ConfigError("field 'bootstrap.n_extra' must be >= 0")
        else:
            raise ConfigError("field 'bootstrap' must be an object")

        sm = doc.get("smote")
        if sm is None:
            self.smote = None
        elif isinstance(sm, dict):
            try:
                self.smote = dataset.SmoteConfig(
                    k_neighbors=_optional(sm, "k_neighbors", int, 5, "smote."),
                    target_ratio=_optional(sm, "target_ratio", float, 1.0, "smote."),
                    class_column=_expect(sm, "class_column", str, "smote."),
                    seed=_optional(sm, "seed", int, 0, "smote."),
                )
            except ValueError as exc:
                raise ConfigError(f"smote: {exc}") from None
        else:
            raise ConfigError("field 'smote' must be an object")

        sdoc = doc.get("search", {})
        if not isinstance(sdoc, dict):
            raise ConfigError("field 'search' must be an object")
        try:
            objective = Objective.parse(_optional(sdoc, "objective", str, "bic", "search."))
        except ValueError as exc:
            raise ConfigError(f"field 'search.objective': {exc}") from None
        max_parents = _optional(sdoc, "max_parents", int, 3, "search.")
        try:
            self.search = search.SearchConfig(
                objective=objective,
                max_parents=None if max_parents < 0 else max_parents,
                max_iterations=_optional(sdoc, "max_iterations", int, 100, "search."),
                restarts=_optional(sdoc, "restarts", int, 0, "search."),
                seed=_optional(sdoc, "seed", int, 0, "search."),
                forbidden_edges=_edge_set(sdoc, "forbidden_edges", "search."),
                required_edges=_edge_set(sdoc, "required_edges", "search."),
            )
        except ValueError as exc:
            raise ConfigError(f"search: {exc}") from None


def load_pipeline_config(path: str | Path) -> PipelineConfig:
    p = Path(path)
    try:
        doc = json.loads(p.read_text(encoding="utf-8"))
    except OSError as exc:
        raise ConfigError(f"cannot read config {p}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {p} is not valid JSON: {exc}") from None
    # Relative data/schema paths resolve against the config's directory so
    # configs stay relocatable.
    return PipelineConfig(doc, base_dir=p.parent)


# ---------------------------------------------------------------------------
# artifact writers

def _dot_escape(s: str) -> str:
    return s.replace("\\", "\\\\").replace('"', '\\"')


def write_dot(g: Dag, path: Path) -> None:
    lines = ["digraph cascade_bn {", "  rankdir=LR;",
             '  node [shape=box, style="rounded,filled", fontname="Helvetica"];']
    for n in g.nodes:
        color = DOMAIN_COLORS.get(g.domains[n], DEFAULT_COLOR)
        label = _dot_escape(n)
        if g.domains[n]:
            label += f"\\n({_dot_escape(g.domains[n])})"
        lines.append(f'  "{_dot_escape(n)}" [fillcolor="{color}", label="{label}"];')
    for u, v in sorted(g.edges):
        lines.append(f'  "{_dot_escape(u)}" -> "{_dot_escape(v)}";')
    lines.append("}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")


def _safe_filename(name: str, used: set[str]) -> str:
    base = "".join(c if c.isalnum() or c in "-_." else "_" for c in name) or "node"
    candidate = base
    k = 2
    while candidate.lower() in used:
        candidate = f"{base}_{k}"
        k += 1
    used.add(candidate.lower())
    return candidate


def write_cpt_csvs(net: params.BayesNet, out_dir: Path) -> list[Path]:
    """One CSV per node: a column per parent, then p0 and p1.

    Rows follow parent-configuration order (first parent is the most
    significant bit).
    """
    cpt_dir = out_dir / "cpts"
    cpt_dir.mkdir(parents=True, exist_ok=True)
    used: set[str] = set()
    written = []
    for node in net.dag.nodes:
        cpt = net.cpts[node]
        path = cpt_dir / f"{_safe_filename(node, used)}.csv"
        lines = [",".join([*cpt.parent_list, "p0", "p1"])]
        m = len(cpt.parent_list)
        for j in range(2 ** m):
            bits = [str((j >> (m - 1 - i)) & 1) for i in range(m)]
            row = bits + [repr(float(cpt.table[j, 0])), repr(float(cpt.table[j, 1]))]
            lines.append(",".join(row))
        path.write_text("\n".join(lines) + "\n", encoding="utf-8")
        written.append(path)
    return written


# ---------------------------------------------------------------------------
# evidence parsing

def parse_evidence(pairs: tuple[str, ...]) -> dict[str, int]:
    ev: dict[str, int] = {}
    for item in pairs:
        name, sep, value = item.partition("=")
        if not sep or not name:
            raise click.UsageError(
                f"evidence must look like NODE=0 or NODE=1, got {item!r}"
            )
        if value not in ("0", "1"):
            raise click.UsageError(
                f"evidence value for {name!r} must be 0 or 1, got {value!r}"
            )
        if name in ev:
            raise click.UsageError(f"evidence for {name!r} given twice")
        ev[name] = int(value)
    return ev


def _load_model(path: str) -> params.BayesNet:
    try:
        return params.load(path)
    except FileNotFoundError:
        _fail(1, f"model file not found: {path}")
    except (json.JSONDecodeError, KeyError, TypeError, ValueError, CascadeBnError) as exc:
        _fail(1, f"cannot load model {path}: {exc}")
    raise AssertionError("unreachable")


# ---------------------------------------------------------------------------
# commands

@click.group()
@click.version_option(package_name="cascade-bn")
def main():
    """Learn, query and serve cascading-risk Bayesian networks."""


@main.command()
@click.option("--config", "config_path", required=True,
              type=click.Path(exists=True, dir_okay=False),
              help="Pipeline config JSON.")
@click.option("--out-dir", "out_dir_flag", type=click.Path(file_okay=False),
              default=None, help="Artifact directory (overrides config out_dir).")
@click.option("--auto-threshold", is_flag=True,
              help="Fill missing numeric thresholds with the column median.")
@click.option("--trace-out", type=click.Path(dir_okay=False), default=None,
              help="Write the search trace here instead of OUT_DIR/trace.json.")
def learn(config_path: str, out_dir_flag: str | None, auto_threshold: bool,
          trace_out: str | None):
    """Run the full pipeline and write model artifacts."""
    try:
        cfg = load_pipeline_config(config_path)
    except ConfigError as exc:
        _fail(1, f"stage 'config': {exc}")

    out_dir = out_dir_flag or cfg.out_dir
    if out_dir is None:
        raise click.UsageError("no output directory: set out_dir in the config or pass --out-dir")
    out = Path(out_dir)

    try:
        net, trace = run_pipeline(cfg, auto_threshold)
    except StageError as exc:
        _fail(1, str(exc))

    try:
        out.mkdir(parents=True, exist_ok=True)
        params.save(net, out / "model.json")
        trace_path = Path(trace_out) if trace_out else out / "trace.json"
        trace_path.write_text(
            json.dumps(trace.to_json(), indent=2) + "\n", encoding="utf-8"
        )
        write_dot(net.dag, out / "graph.dot")
        write_cpt_csvs(net, out)
    except OSError as exc:
        _fail(1, f"stage 'write': {exc}")

    click.echo(
        f"learned {len(net.dag.nodes)} nodes, {len(net.dag.edges)} edges "
        f"({trace.objective.value} score {trace.final_score:.6f}) -> {out}"
    )


def run_pipeline(cfg: PipelineConfig, auto_threshold: bool = False
                 ) -> tuple[params.BayesNet, search.SearchTrace]:
    """load -> augment -> balance -> discretize -> search -> fit."""

    def stage(name: str, fn, *args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except (CascadeBnError, OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
            raise StageError(name, exc) from exc

    schema = stage("schema", dataset.load_schema, cfg.schema_path)
    table = stage("load", dataset.load_csv, cfg.data_path, schema)
    loaded_rows = table.row_count

    if cfg.bootstrap is not None:
        table = stage(
            "augment",
            dataset.augment_bootstrap,
            table,
            cfg.bootstrap["n_extra"],
            cfg.bootstrap["noise_scale"],
            cfg.bootstrap["seed"],
        )
    boot_rows = table.row_count - loaded_rows

    if cfg.smote is not None:
        table = stage("balance", dataset.smote_balance, table, cfg.smote)
    smote_rows = table.row_count - loaded_rows - boot_rows

    if auto_threshold:
        table = stage("discretize", dataset.fill_thresholds, table)
    table = stage("discretize", dataset.discretize, table)

    dag, trace = stage("search", search.hill_climb, table, cfg.search)

    meta = {
        "objective": cfg.search.objective.value,
        "score": trace.final_score,
        "provenance": dataset.provenance(loaded_rows, boot_rows, smote_rows),
    }
    net = stage("fit", params.fit_cpts, dag, table, cfg.alpha, meta)
    return net, trace


@main.command()
@click.option("--model", "model_path", required=True, type=click.Path(dir_okay=False))
@click.option("--target", required=True, help="Node whose posterior to compute.")
@click.option("--evidence", "evidence_pairs", multiple=True, metavar="NODE=V",
              help="Observed value, repeatable.")
@click.option("--order", type=click.Choice(["min_fill", "declaration"]),
              default="min_fill", show_default=True,
              help="Variable elimination order.")
def query(model_path: str, target: str, evidence_pairs: tuple[str, ...], order: str):
    """Posterior P(target | evidence) from a model file."""
    ev = parse_evidence(evidence_pairs)
    net = _load_model(model_path)
    try:
        posterior = inference.query(net, target, ev, elimination=order)
    except (UnknownNode, TargetIsEvidence) as exc:
        _fail(2, str(exc))
    except InferenceError as exc:
        _fail(3, str(exc))
    except CascadeBnError as exc:
        _fail(1, str(exc))
    click.echo(json.dumps(posterior.to_json(), indent=2))


@main.command()
@click.option("--model", "model_path", required=True, type=click.Path(dir_okay=False))
@click.option("--target", required=True)
@click.option("--evidence", "evidence_pairs", multiple=True, metavar="NODE=V",
              help="Source evidence, repeatable.")
@click.option("--max-hops", default=DEFAULT_MAX_HOPS, show_default=True,
              help="Longest evidence-to-target path to list.")
def cascade(model_path: str, target: str, evidence_pairs: tuple[str, ...],
            max_hops: int):
    """Risk lift at the target plus the dependency paths that carry it."""
    ev = parse_evidence(evidence_pairs)
    if max_hops < 1:
        raise click.UsageError("--max-hops must be >= 1")
    net = _load_model(model_path)
    try:
        scenario = CascadeScenario(source_evidence=ev, target=target, max_hops=max_hops)
        report = cascade_lift(net, scenario)
    except (UnknownNode, TargetIsEvidence) as exc:
        _fail(2, str(exc))
    except InferenceError as exc:
        _fail(3, str(exc))
    except CascadeBnError as exc:
        _fail(1, str(exc))
    click.echo(json.dumps(report.to_json(), indent=2))


@main.command()
@click.option("--model", "model_path", required=True, type=click.Path(dir_okay=False))
@click.option("--out-dir", required=True, type=click.Path(file_okay=False))
def export(model_path: str, out_dir: str):
    """Regenerate graph.dot and cpts/*.csv from a model file."""
    net = _load_model(model_path)
    out = Path(out_dir)
    try:
        out.mkdir(parents=True, exist_ok=True)
        write_dot(net.dag, out / "graph.dot")
        written = write_cpt_csvs(net, out)
    except OSError as exc:
        _fail(1, f"stage 'write': {exc}")
    click.echo(f"wrote {out / 'graph.dot'} and {len(written)} CPT files")


@main.command()
@click.option("--model", "model_path", required=True, type=click.Path(dir_okay=False))
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True)
@click.option("--ui-dir", type=click.Path(file_okay=False), default=None,
              help="Static UI assets to mount at /ui.")
def serve(model_path: str, host: str, port: int, ui_dir: str | None):
    """Publish the model over HTTP for the what-if UI."""
    import uvicorn

    from .service import create_app

    try:
        app = create_app(model_path, ui_dir=ui_dir)
    except FileNotFoundError:
        _fail(1, f"model file not found: {model_path}")
    except (json.JSONDecodeError, KeyError, TypeError, ValueError, CascadeBnError) as exc:
        _fail(1, f"cannot load model {model_path}: {exc}")
    uvicorn.run(app, host=host, port=port, log_level="info")


if __name__ == "__main__":
    main()
