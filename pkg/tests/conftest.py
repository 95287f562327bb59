"""Shared builders for the test suite."""

from __future__ import annotations

import numpy as np

from cascade_bn.dataset import BINARY, NUMERIC, ColumnSpec, TabularDataset
from cascade_bn.graph import Dag
from cascade_bn.params import BayesNet, Cpt

# domain tags cycle so multi-node helpers stay valid against the schema
_TAGS = ("Air", "Water", "Electricity", "Health")


def binary_dataset(columns: dict[str, list[int]]) -> TabularDataset:
    """Build an all-binary dataset from name -> value lists."""
    names = list(columns)
    specs = tuple(
        ColumnSpec(name=n, domain=_TAGS[i % len(_TAGS)], kind=BINARY)
        for i, n in enumerate(names)
    )
    rows = np.array([columns[n] for n in names], dtype=np.float64).T
    return TabularDataset(columns=specs, rows=rows.reshape(len(rows), len(names)))


def numeric_dataset(columns: dict[str, list[float]], **spec_kw) -> TabularDataset:
    names = list(columns)
    specs = tuple(
        ColumnSpec(name=n, domain=_TAGS[i % len(_TAGS)], kind=NUMERIC, **spec_kw)
        for i, n in enumerate(names)
    )
    rows = np.array([columns[n] for n in names], dtype=np.float64).T
    return TabularDataset(columns=specs, rows=rows.reshape(len(rows), len(names)))


def random_binary_dataset(rng: np.random.Generator, n_nodes: int, n_rows: int) -> TabularDataset:
    """Rows sampled from a random chain-ish generative process so columns
    are correlated enough for structure search to have signal."""
    cols = {}
    prev = rng.integers(0, 2, n_rows).astype(np.float64)
    cols["n0"] = prev.tolist()
    for i in range(1, n_nodes):
        flip = rng.random(n_rows) < rng.uniform(0.05, 0.45)
        cur = np.where(flip, 1.0 - prev, prev)
        cols[f"n{i}"] = cur.tolist()
        prev = cur
    return binary_dataset(cols)


def random_network(rng: np.random.Generator, n_nodes: int, edge_p: float = 0.35) -> BayesNet:
    """Random DAG (declaration order is topological) with random CPTs.

    Probabilities are kept in [0.02, 0.98] so no full assignment has
    vanishing mass.
    """
    names = tuple(f"v{i}" for i in range(n_nodes))
    edges = set()
    for j in range(1, n_nodes):
        for i in range(j):
            if rng.random() < edge_p:
                edges.add((names[i], names[j]))
    dag = Dag(nodes=names, edges=frozenset(edges),
              domains={n: "" for n in names})

    cpts = {}
    for node in names:
        parent_list = tuple(sorted(dag.parents(node), key=names.index))
        q = 2 ** len(parent_list)
        p1 = rng.uniform(0.02, 0.98, size=q)
        table = np.column_stack([1.0 - p1, p1])
        cpts[node] = Cpt(child=node, parent_list=parent_list, table=table)
    return BayesNet(dag=dag, cpts=cpts, metadata={})
