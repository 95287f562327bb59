"""Cross-domain cascading-risk analysis.

A cascade scenario fixes evidence at source indicators and asks how much
the posterior of a target risk node shifts. The shift ("observational
lift") is P(target=1 | evidence) - P(target=1): evidence conditioning,
not an intervention, so common causes contribute to lift even though
only directed paths are listed.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import TargetIsEvidence
from .graph import enumerate_paths
from .inference import Evidence, query
from .params import BayesNet

DEFAULT_MAX_HOPS = 4


@dataclass(frozen=True)
class CascadeScenario:
    source_evidence: dict[str, int]
    target: str
    max_hops: int = DEFAULT_MAX_HOPS

    def __post_init__(self):
        if self.target in self.source_evidence:
            raise TargetIsEvidence(self.target)
        if self.max_hops < 1:
            raise ValueError("max_hops must be >= 1")


@dataclass(frozen=True)
class CascadePath:
    nodes: tuple[str, ...]
    domains: tuple[str, ...]

    def to_json(self) -> dict:
        return {"nodes": list(self.nodes), "domains": list(self.domains)}


@dataclass(frozen=True)
class CascadeReport:
    target: str
    evidence: dict[str, int]
    baseline: float
    conditioned: float
    lift: float
    paths: tuple[CascadePath, ...] = field(default_factory=tuple)

    def to_json(self) -> dict:
        return {
            "target": self.target,
            "evidence": dict(self.evidence),
            "baseline": self.baseline,
            "conditioned": self.conditioned,
            "lift": self.lift,
            "paths": [p.to_json() for p in self.paths],
        }


def cascade_lift(net: BayesNet, s: CascadeScenario) -> CascadeReport:
    """Baseline vs conditioned posterior at the target, plus the directed
    evidence-to-target paths that carry the cascade.

    Paths are sorted by length, then lexicographically. Empty evidence
    yields lift exactly 0.
    """
    baseline = query(net, s.target, {}).p1
    if s.source_evidence:
        conditioned = query(net, s.target, s.source_evidence).p1
    else:
        conditioned = baseline

    raw_paths = enumerate_paths(
        net.dag,
        sources=set(s.source_evidence),
        targets={s.target},
        max_hops=s.max_hops,
    )
    raw_paths.sort(key=lambda p: (len(p), p))
    paths = tuple(
        CascadePath(
            nodes=tuple(p), domains=tuple(net.dag.domains[n] for n in p)
        )
        for p in raw_paths
    )
    return CascadeReport(
        target=s.target,
        evidence=dict(s.source_evidence),
        baseline=baseline,
        conditioned=conditioned,
        lift=conditioned - baseline,
        paths=paths,
    )


def rank_scenarios(
    net: BayesNet,
    sources: list[Evidence],
    target: str,
    max_hops: int = DEFAULT_MAX_HOPS,
) -> list[CascadeReport]:
    """Evaluate each evidence set against the target and sort by
    descending lift; input order is kept for equal lifts."""
    reports = [
        cascade_lift(
            net,
            CascadeScenario(
                source_evidence=dict(ev), target=target, max_hops=max_hops
            ),
        )
        for ev in sources
    ]
    reports.sort(key=lambda r: -r.lift)
    return reports
