"""Conditional probability tables and the assembled network model.

CPT cells are Laplace-smoothed relative frequencies::

    table[j][k] = (N_ijk + alpha) / (N_ij + r * alpha)

with the same parent-configuration indexing as the scoring counts
(first parent most significant). With alpha = 0 an unseen parent
configuration falls back to the uniform row rather than 0/0.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Mapping

import numpy as np

from .dataset import TabularDataset
from .errors import ColumnMissing, UnknownNode
from .graph import Dag
from .scoring import family_counts

ROW_SUM_TOL = 1e-12


@dataclass(frozen=True)
class Cpt:
    """One node's distribution given each configuration of its parents."""

    child: str
    parent_list: tuple[str, ...]
    table: np.ndarray
    alpha: float = 1.0

    def __post_init__(self):
        table = np.asarray(self.table, dtype=np.float64)
        q = 1 << len(self.parent_list)
        if table.shape != (q, 2):
            raise ValueError(
                f"CPT for {self.child!r} must have shape ({q}, 2), got {table.shape}"
            )
        if np.any(table < 0.0) or np.any(table > 1.0):
            raise ValueError(f"CPT for {self.child!r} has entries outside [0, 1]")
        sums = table.sum(axis=1)
        if np.any(np.abs(sums - 1.0) > ROW_SUM_TOL):
            raise ValueError(f"CPT rows for {self.child!r} do not sum to 1")
        if self.alpha < 0:
            raise ValueError("alpha must be >= 0")
        table = table.copy()
        table.flags.writeable = False
        object.__setattr__(self, "table", table)
        object.__setattr__(self, "parent_list", tuple(self.parent_list))

    def row_index(self, parent_values: Mapping[str, int]) -> int:
        j = 0
        for bit, parent in enumerate(self.parent_list):
            shift = len(self.parent_list) - 1 - bit
            j |= (int(parent_values[parent]) & 1) << shift
        return j


@dataclass(frozen=True)
class BayesNet:
    """Learned DAG plus one CPT per node; immutable after construction."""

    dag: Dag
    cpts: Mapping[str, Cpt]
    metadata: Mapping[str, object] = field(default_factory=dict)

    def __post_init__(self):
        cpts = dict(self.cpts)
        if set(cpts) != set(self.dag.nodes):
            raise ValueError("cpts must be keyed exactly by the DAG's nodes")
        for child, cpt in cpts.items():
            if cpt.child != child:
                raise ValueError(f"CPT keyed {child!r} describes {cpt.child!r}")
            if frozenset(cpt.parent_list) != self.dag.parents(child):
                raise ValueError(
                    f"CPT parents for {child!r} do not match the DAG"
                )
        object.__setattr__(self, "cpts", cpts)
        object.__setattr__(self, "metadata", dict(self.metadata))

    @property
    def nodes(self) -> tuple[str, ...]:
        return self.dag.nodes


def fit_cpts(
    g: Dag,
    data: TabularDataset,
    alpha: float = 1.0,
    metadata: Mapping[str, object] | None = None,
) -> BayesNet:
    """Fit one smoothed CPT per node from all-binary data."""
    if alpha < 0:
        raise ValueError("alpha must be >= 0")
    names = set(data.column_names)
    for node in g.nodes:
        if node not in names:
            raise ColumnMissing(node)

    cpts = {}
    for node in g.nodes:
        parent_list = tuple(sorted(g.parents(node), key=g.nodes.index))
        counts = family_counts(data, node, parent_list)
        n_ijk = counts.n_ijk.astype(np.float64)
        n_ij = counts.n_ij.astype(np.float64)
        table = np.empty_like(n_ijk)
        for j in range(counts.q):
            denom = n_ij[j] + 2.0 * alpha
            if denom == 0.0:
                table[j] = (0.5, 0.5)
            else:
                table[j] = (n_ijk[j] + alpha) / denom
        cpts[node] = Cpt(child=node, parent_list=parent_list, table=table, alpha=alpha)

    meta: dict[str, object] = {"alpha": alpha, "rows": data.row_count}
    if metadata:
        meta.update(metadata)
    return BayesNet(dag=g, cpts=cpts, metadata=meta)


def cpt_report(net: BayesNet, child: str) -> str:
    """Plain-text rendering of one CPT, child states as rows.

    Parent configurations label the columns; a parentless node renders a
    single marginal column.
    """
    if child not in net.cpts:
        raise UnknownNode(child)
    cpt = net.cpts[child]
    q = cpt.table.shape[0]
    if cpt.parent_list:
        headers = []
        for j in range(q):
            bits = [(j >> (len(cpt.parent_list) - 1 - b)) & 1 for b in range(len(cpt.parent_list))]
            headers.append(",".join(f"{p}={v}" for p, v in zip(cpt.parent_list, bits)))
    else:
        headers = ["marginal"]

    label_w = max(len(f"{child}=0"), len(f"{child}=1"))
    col_w = [max(len(h), 8) for h in headers]
    lines = [
        " " * label_w
        + "  "
        + "  ".join(h.rjust(w) for h, w in zip(headers, col_w))
    ]
    for k in (0, 1):
        cells = [f"{cpt.table[j, k]:.6f}".rjust(w) for j, w in zip(range(q), col_w)]
        lines.append(f"{child}={k}".ljust(label_w) + "  " + "  ".join(cells))
    return "\n".join(lines)


def to_json_dict(net: BayesNet) -> dict:
    """Canonical JSON-ready form; the contract between CLI, service and UI."""
    return {
        "nodes": [
            {"name": n, "domain": net.dag.domains[n]} for n in net.dag.nodes
        ],
        "edges": [[u, v] for u, v in sorted(net.dag.edges)],
        "cpts": {
            n: {
                "parents": list(net.cpts[n].parent_list),
                "alpha": net.cpts[n].alpha,
                "table": [[float(p) for p in row] for row in net.cpts[n].table],
            }
            for n in net.dag.nodes
        },
        "metadata": dict(net.metadata),
    }


def to_json(net: BayesNet) -> str:
    return json.dumps(to_json_dict(net), indent=2)


def from_json_dict(doc: dict) -> BayesNet:
    dag = Dag.from_json(doc)
    cpts = {}
    for child, entry in doc["cpts"].items():
        cpts[child] = Cpt(
            child=child,
            parent_list=tuple(entry["parents"]),
            table=np.array(entry["table"], dtype=np.float64),
            alpha=float(entry["alpha"]),
        )
    return BayesNet(dag=dag, cpts=cpts, metadata=doc.get("metadata", {}))


def from_json(text: str) -> BayesNet:
    return from_json_dict(json.loads(text))


def save(net: BayesNet, path: str | Path) -> None:
    Path(path).write_text(to_json(net) + "\n", encoding="utf-8")


def load(path: str | Path) -> BayesNet:
    return from_json(Path(path).read_text(encoding="utf-8"))
