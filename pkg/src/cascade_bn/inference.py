"""Exact posterior queries by factor-based variable elimination.

``query`` reduces every CPT factor by the evidence, sums out the
remaining non-target variables in min-fill order, and normalizes the
product. ``joint_enumeration`` answers the same contract by summing the
full joint distribution and serves as the independent oracle.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

import numpy as np

from .errors import (
    NodeNotInScope,
    TargetIsEvidence,
    TooManyNodes,
    UnknownNode,
    ZeroProbabilityEvidence,
)
from .params import BayesNet

ZERO_EVIDENCE_FLOOR = 1e-300

Evidence = Mapping[str, int]


@dataclass(frozen=True)
class Factor:
    """Nonnegative table over an ordered scope of binary variables.

    ``values`` has shape (2,) * len(scope); flattened in C order the
    first scope variable is the most significant index bit.
    """

    scope: tuple[str, ...]
    values: np.ndarray

    def __post_init__(self):
        values = np.asarray(self.values, dtype=np.float64)
        scope = tuple(self.scope)
        if len(set(scope)) != len(scope):
            raise ValueError("duplicate variables in factor scope")
        expected = (2,) * len(scope)
        if values.size != 2 ** len(scope):
            raise ValueError(
                f"factor over {len(scope)} variables needs {2 ** len(scope)} values"
            )
        values = values.reshape(expected)
        if not np.all(np.isfinite(values)) or np.any(values < 0):
            raise ValueError("factor values must be finite and nonnegative")
        values = values.copy()
        values.flags.writeable = False
        object.__setattr__(self, "scope", scope)
        object.__setattr__(self, "values", values)

    @property
    def flat(self) -> np.ndarray:
        return self.values.reshape(-1)


@dataclass(frozen=True)
class Posterior:
    target: str
    p0: float
    p1: float

    def to_json(self) -> dict:
        return {"target": self.target, "p0": self.p0, "p1": self.p1}


def _align(f: Factor, scope: tuple[str, ...]) -> np.ndarray:
    """View of f.values transposed/reshaped to broadcast over scope."""
    positions = [f.scope.index(n) for n in scope if n in f.scope]
    v = np.transpose(f.values, positions) if positions else f.values
    shape = tuple(2 if n in f.scope else 1 for n in scope)
    return v.reshape(shape)


def factor_product(a: Factor, b: Factor) -> Factor:
    """Pointwise product over the union scope (a's order, then b's novel vars)."""
    scope = a.scope + tuple(n for n in b.scope if n not in a.scope)
    return Factor(scope=scope, values=_align(a, scope) * _align(b, scope))


def marginalize(f: Factor, v: str) -> Factor:
    """Sum v out of the factor."""
    if v not in f.scope:
        raise NodeNotInScope(v)
    axis = f.scope.index(v)
    scope = tuple(n for n in f.scope if n != v)
    return Factor(scope=scope, values=f.values.sum(axis=axis))


def reduce(f: Factor, v: str, value: int) -> Factor:
    """Select the slice consistent with v = value; no renormalization."""
    if v not in f.scope:
        raise NodeNotInScope(v)
    if value not in (0, 1):
        raise ValueError(f"evidence value for {v!r} must be 0 or 1")
    axis = f.scope.index(v)
    scope = tuple(n for n in f.scope if n != v)
    return Factor(scope=scope, values=np.take(f.values, value, axis=axis))


def cpt_factor(net: BayesNet, node: str) -> Factor:
    """The node's CPT as a factor over (parents..., node)."""
    cpt = net.cpts[node]
    scope = cpt.parent_list + (node,)
    return Factor(scope=scope, values=cpt.table.reshape((2,) * len(scope)))


def _check_query_args(net: BayesNet, target: str, ev: Evidence) -> None:
    known = set(net.dag.nodes)
    if target not in known:
        raise UnknownNode(target)
    for node, value in ev.items():
        if node not in known:
            raise UnknownNode(node)
        if int(value) not in (0, 1):
            raise ValueError(f"evidence value for {node!r} must be 0 or 1")
    if target in ev:
        raise TargetIsEvidence(target)


def _min_fill_order(
    net: BayesNet, to_eliminate: set[str], scopes: list[tuple[str, ...]]
) -> list[str]:
    """Min-fill elimination order, ties broken by node declaration order."""
    decl = {n: i for i, n in enumerate(net.dag.nodes)}
    adj: dict[str, set[str]] = {}
    for scope in scopes:
        for n in scope:
            adj.setdefault(n, set())
            for m in scope:
                if m != n:
                    adj[n].add(m)
    remaining = set(to_eliminate)
    order: list[str] = []
    while remaining:
        best = None
        best_fill = None
        for v in sorted(remaining, key=decl.__getitem__):
            neigh = [m for m in adj.get(v, ()) if m != v]
            fill = 0
            for i in range(len(neigh)):
                for j in range(i + 1, len(neigh)):
                    if neigh[j] not in adj.get(neigh[i], ()):
                        fill += 1
            if best_fill is None or fill < best_fill:
                best, best_fill = v, fill
        assert best is not None
        order.append(best)
        neigh = [m for m in adj.get(best, ()) if m != best]
        for i in range(len(neigh)):
            for j in range(i + 1, len(neigh)):
                adj[neigh[i]].add(neigh[j])
                adj[neigh[j]].add(neigh[i])
        for m in neigh:
            adj[m].discard(best)
        adj.pop(best, None)
        remaining.discard(best)
    return order


def query(
    net: BayesNet,
    target: str,
    ev: Evidence | None = None,
    elimination: str = "min_fill",
) -> Posterior:
    """Exact P(target | evidence) by variable elimination.

    ``elimination`` selects the ordering heuristic: "min_fill" (default)
    or "declaration". Both give identical posteriors; the option exists
    so order-independence stays testable.
    """
    ev = dict(ev or {})
    _check_query_args(net, target, ev)

    factors = [cpt_factor(net, n) for n in net.dag.nodes]
    reduced = []
    for f in factors:
        for node, value in ev.items():
            if node in f.scope:
                f = reduce(f, node, int(value))
        reduced.append(f)
    factors = reduced

    to_eliminate = set(net.dag.nodes) - {target} - set(ev)
    if elimination == "min_fill":
        order = _min_fill_order(net, to_eliminate, [f.scope for f in factors])
    elif elimination == "declaration":
        order = [n for n in net.dag.nodes if n in to_eliminate]
    else:
        raise ValueError(f"unknown elimination heuristic {elimination!r}")

    for v in order:
        touching = [f for f in factors if v in f.scope]
        if not touching:
            continue
        product = touching[0]
        for f in touching[1:]:
            product = factor_product(product, f)
        factors = [f for f in factors if v not in f.scope]
        factors.append(marginalize(product, v))

    result = factors[0]
    for f in factors[1:]:
        result = factor_product(result, f)
    if result.scope != (target,):
        # only constants besides the target factor can remain
        raise AssertionError(f"unexpected final scope {result.scope}")

    total = float(result.values.sum())
    if total < ZERO_EVIDENCE_FLOOR:
        raise ZeroProbabilityEvidence(
            f"evidence {ev} has probability below {ZERO_EVIDENCE_FLOOR}"
        )
    p0 = float(result.values[0]) / total
    p1 = float(result.values[1]) / total
    return Posterior(target=target, p0=p0, p1=p1)


def joint_enumeration(net: BayesNet, target: str, ev: Evidence | None = None) -> Posterior:
    """Posterior by summing the full joint; oracle for ``query``.

    Enumerates every assignment of the free variables, so networks are
    capped at 20 nodes.
    """
    ev = dict(ev or {})
    _check_query_args(net, target, ev)
    nodes = net.dag.nodes
    if len(nodes) > 20:
        raise TooManyNodes(have=len(nodes), limit=20)

    free = [n for n in nodes if n not in ev]
    m = len(free)
    n_assign = 1 << m

    # column of values per node across all joint assignments
    columns: dict[str, np.ndarray] = {}
    for bit, node in enumerate(free):
        shift = m - 1 - bit
        columns[node] = (np.arange(n_assign) >> shift) & 1
    for node, value in ev.items():
        columns[node] = np.full(n_assign, int(value), dtype=np.int64)

    joint = np.ones(n_assign, dtype=np.float64)
    for node in nodes:
        cpt = net.cpts[node]
        j = np.zeros(n_assign, dtype=np.int64)
        for bit, parent in enumerate(cpt.parent_list):
            shift = len(cpt.parent_list) - 1 - bit
            j |= columns[parent] << shift
        joint *= cpt.table[j, columns[node]]

    tvals = columns[target]
    p = np.array(
        [float(joint[tvals == 0].sum()), float(joint[tvals == 1].sum())]
    )
    total = p.sum()
    if total < ZERO_EVIDENCE_FLOOR:
        raise ZeroProbabilityEvidence(
            f"evidence {ev} has probability below {ZERO_EVIDENCE_FLOOR}"
        )
    return Posterior(target=target, p0=p[0] / total, p1=p[1] / total)
