"""Greedy structure search over DAG space.

Hill climbing starts from the required-edges graph (restart 0) or a
random acyclic perturbation of it, and repeatedly applies the single
best strictly-improving add/delete/reverse edit until no edit improves
the objective. Score deltas are computed from the one or two affected
families only, which decomposability guarantees to equal full
recomputation.

``exhaustive_best`` brute-forces every DAG on at most five nodes and is
the search's test oracle.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Iterator

from .dataset import TabularDataset
from .errors import ConstraintConflict, EmptyData, NonBinaryColumn, TooManyNodes
from .graph import Dag, EdgeEdit, EditKind, apply_edit
from .scoring import Objective, ScoreCache, family_score

# deltas closer than this are treated as "no improvement" / exact ties
IMPROVEMENT_EPS = 1e-9
TIE_EPS = 1e-12

# deterministic tie-breaking: sparser-biased edit kind, then edge order
_KIND_RANK = {EditKind.DELETE: 0, EditKind.REVERSE: 1, EditKind.ADD: 2}


@dataclass(frozen=True)
class SearchConfig:
    objective: Objective = Objective.BIC
    max_parents: int | None = 3
    max_iterations: int = 100
    restarts: int = 0
    seed: int = 0
    forbidden_edges: frozenset[tuple[str, str]] = frozenset()
    required_edges: frozenset[tuple[str, str]] = frozenset()

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.restarts < 0:
            raise ValueError("restarts must be >= 0")
        if self.max_parents is not None and self.max_parents < 1:
            raise ValueError("max_parents must be >= 1 when set")


@dataclass
class IterationRecord:
    edit: EdgeEdit
    score_before: float
    score_after: float


@dataclass
class RestartTrace:
    restart: int
    records: list[IterationRecord] = field(default_factory=list)
    final_score: float = 0.0
    iterations: int = 0
    converged: bool = False


@dataclass
class SearchTrace:
    """Audit log of a hill-climbing run."""

    objective: Objective
    restarts: list[RestartTrace] = field(default_factory=list)
    best_restart: int = 0
    final_score: float = 0.0

    @property
    def iterations_used(self) -> int:
        return sum(r.iterations for r in self.restarts)

    def to_json(self) -> dict:
        return {
            "objective": self.objective.value,
            "final_score": self.final_score,
            "best_restart": self.best_restart,
            "iterations_used": self.iterations_used,
            "restarts": [
                {
                    "restart": r.restart,
                    "final_score": r.final_score,
                    "iterations": r.iterations,
                    "converged": r.converged,
                    "steps": [
                        {
                            "edit": {
                                "kind": rec.edit.kind.value,
                                "parent": rec.edit.parent,
                                "child": rec.edit.child,
                            },
                            "score_before": rec.score_before,
                            "score_after": rec.score_after,
                        }
                        for rec in r.records
                    ],
                }
                for r in self.restarts
            ],
        }


class _FamilyScorer:
    """Signed family goodness (higher is always better) with shared cache."""

    def __init__(self, data: TabularDataset, objective: Objective):
        self.data = data
        self.objective = objective
        self.cache = ScoreCache()
        self.sign = 1.0 if objective.maximize else -1.0

    def goodness(self, child: str, parent_set: frozenset[str]) -> float:
        value = family_score(
            self.data, child, sorted(parent_set), self.objective, self.cache
        )
        return self.sign * value

    def total_goodness(self, g: Dag) -> float:
        return sum(self.goodness(n, g.parents(n)) for n in g.nodes)


def _legal_edits(g: Dag, cfg: SearchConfig) -> Iterator[EdgeEdit]:
    """Edits respecting acyclicity, required/forbidden sets and max_parents.

    Yields in the deterministic tie-break order: deletes, then reverses,
    then adds, each sorted by (parent, child).
    """
    max_p = cfg.max_parents
    present = sorted(g.edges)

    for u, v in present:
        if (u, v) not in cfg.required_edges:
            yield EdgeEdit(EditKind.DELETE, u, v)

    for u, v in present:
        if (u, v) in cfg.required_edges or (v, u) in cfg.forbidden_edges:
            continue
        if max_p is not None and len(g.parents(u)) >= max_p:
            continue
        try:
            apply_edit(g, EdgeEdit(EditKind.REVERSE, u, v))
        except Exception:
            continue
        yield EdgeEdit(EditKind.REVERSE, u, v)

    for u, v in sorted(itertools.permutations(g.nodes, 2)):
        if (u, v) in g.edges or (u, v) in cfg.forbidden_edges:
            continue
        if max_p is not None and len(g.parents(v)) >= max_p:
            continue
        try:
            apply_edit(g, EdgeEdit(EditKind.ADD, u, v))
        except Exception:
            continue
        yield EdgeEdit(EditKind.ADD, u, v)


def _edit_delta(g: Dag, edit: EdgeEdit, scorer: _FamilyScorer) -> float:
    """Goodness change from applying edit, via the affected families only."""
    u, v = edit.parent, edit.child
    pv = g.parents(v)
    if edit.kind is EditKind.ADD:
        return scorer.goodness(v, pv | {u}) - scorer.goodness(v, pv)
    if edit.kind is EditKind.DELETE:
        return scorer.goodness(v, pv - {u}) - scorer.goodness(v, pv)
    pu = g.parents(u)
    return (
        scorer.goodness(v, pv - {u})
        - scorer.goodness(v, pv)
        + scorer.goodness(u, pu | {v})
        - scorer.goodness(u, pu)
    )


def _perturb(base: Dag, cfg: SearchConfig, rng: random.Random) -> Dag:
    """Random restart start point: up to |V| random legal edge additions."""
    g = base
    pairs = sorted(itertools.permutations(g.nodes, 2))
    for _ in range(len(g.nodes)):
        u, v = pairs[rng.randrange(len(pairs))]
        if (u, v) in g.edges or (u, v) in cfg.forbidden_edges:
            continue
        if cfg.max_parents is not None and len(g.parents(v)) >= cfg.max_parents:
            continue
        try:
            g = apply_edit(g, EdgeEdit(EditKind.ADD, u, v))
        except Exception:
            continue
    return g


def _validate_constraints(nodes: tuple[str, ...], cfg: SearchConfig) -> Dag:
    overlap = cfg.required_edges & cfg.forbidden_edges
    if overlap:
        raise ConstraintConflict(f"edges both required and forbidden: {sorted(overlap)}")
    try:
        base = Dag(nodes=nodes, edges=cfg.required_edges)
    except Exception as exc:
        raise ConstraintConflict(f"required edges are not a DAG: {exc}") from exc
    if cfg.max_parents is not None:
        for n in nodes:
            if len(base.parents(n)) > cfg.max_parents:
                raise ConstraintConflict(
                    f"required edges give {n!r} more than {cfg.max_parents} parents"
                )
    return base


def hill_climb(data: TabularDataset, cfg: SearchConfig) -> tuple[Dag, SearchTrace]:
    """Learn a DAG by greedy local search; deterministic given cfg.seed.

    Returns the best-scoring graph over restart 0 (required edges only)
    plus cfg.restarts randomly perturbed restarts, together with the full
    search trace. Trace scores are in the objective's own convention
    (BIC decreasing, K2 log increasing).
    """
    if data.row_count < 1:
        raise EmptyData("structure learning needs at least one row")
    if not data.is_all_binary():
        nonbin = [c.name for c in data.columns if c.kind != "binary"][0]
        raise NonBinaryColumn(nonbin)

    nodes = data.column_names
    domains = {c.name: c.domain for c in data.columns}
    base = _validate_constraints(nodes, cfg)
    base = Dag(nodes=nodes, edges=base.edges, domains=domains)

    scorer = _FamilyScorer(data, cfg.objective)
    rng = random.Random(cfg.seed)
    trace = SearchTrace(objective=cfg.objective)

    best_g: Dag | None = None
    best_goodness = float("-inf")

    for restart in range(cfg.restarts + 1):
        g = base if restart == 0 else _perturb(base, cfg, rng)
        goodness = scorer.total_goodness(g)
        rtrace = RestartTrace(restart=restart)

        for _ in range(cfg.max_iterations):
            chosen: EdgeEdit | None = None
            chosen_delta = IMPROVEMENT_EPS
            chosen_key: tuple = ()
            for edit in _legal_edits(g, cfg):
                delta = _edit_delta(g, edit, scorer)
                if delta <= IMPROVEMENT_EPS:
                    continue
                key = (_KIND_RANK[edit.kind], edit.parent, edit.child)
                if (
                    chosen is None
                    or delta > chosen_delta + TIE_EPS
                    or (abs(delta - chosen_delta) <= TIE_EPS and key < chosen_key)
                ):
                    chosen = edit
                    chosen_delta = delta
                    chosen_key = key
            if chosen is None:
                rtrace.converged = True
                break
            g = apply_edit(g, chosen)
            new_goodness = goodness + chosen_delta
            rtrace.records.append(
                IterationRecord(
                    edit=chosen,
                    score_before=scorer.sign * goodness,
                    score_after=scorer.sign * new_goodness,
                )
            )
            rtrace.iterations += 1
            goodness = new_goodness

        rtrace.final_score = scorer.sign * goodness
        trace.restarts.append(rtrace)

        if goodness > best_goodness + TIE_EPS:
            best_goodness = goodness
            best_g = g
            trace.best_restart = restart

    assert best_g is not None
    trace.final_score = scorer.sign * best_goodness
    return best_g, trace


def all_dags(nodes: tuple[str, ...]) -> Iterator[frozenset[tuple[str, str]]]:
    """Every DAG edge set on the given labeled nodes, each exactly once.

    Enumerates topological orders crossed with order-compatible edge
    subsets, deduplicating; far fewer candidates than all 2^(n(n-1))
    directed edge subsets.
    """
    seen: set[frozenset[tuple[str, str]]] = set()
    for order in itertools.permutations(nodes):
        pairs = [
            (order[i], order[j])
            for i in range(len(order))
            for j in range(i + 1, len(order))
        ]
        for mask in range(1 << len(pairs)):
            edges = frozenset(p for b, p in enumerate(pairs) if mask >> b & 1)
            if edges not in seen:
                seen.add(edges)
                yield edges


def exhaustive_best(data: TabularDataset, objective: Objective) -> Dag:
    """Globally optimal DAG by brute-force enumeration (max five nodes).

    Ties within 1e-9 are broken by fewest edges, then lexicographic edge
    list.
    """
    nodes = data.column_names
    if len(nodes) > 5:
        raise TooManyNodes(have=len(nodes), limit=5)
    if data.row_count < 1:
        raise EmptyData("scoring needs at least one row")

    domains = {c.name: c.domain for c in data.columns}
    scorer = _FamilyScorer(data, objective)

    candidates = sorted(all_dags(nodes), key=lambda e: (len(e), sorted(e)))
    best_edges = candidates[0]
    best_goodness = float("-inf")
    for edges in candidates:
        parent_sets: dict[str, frozenset[str]] = {n: frozenset() for n in nodes}
        for u, v in edges:
            parent_sets[v] = parent_sets[v] | {u}
        goodness = sum(scorer.goodness(n, parent_sets[n]) for n in nodes)
        if goodness > best_goodness + IMPROVEMENT_EPS:
            best_goodness = goodness
            best_edges = edges
    return Dag(nodes=nodes, edges=best_edges, domains=domains)
