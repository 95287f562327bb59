"""Decomposable structure scores over binary data.

Two objectives are supported:

* BIC, in the penalized-deviance convention ``-2*ln(L) + k*ln(n)`` where
  lower is better. Per family this is
  ``-2 * sum_jk N_ijk * ln(N_ijk / N_ij) + q * (r - 1) * ln(n)``
  with the conventions ``0 * ln(0/x) = 0`` and empty parent
  configurations contributing zero log-likelihood.

* K2, the Cooper-Herskovits marginal likelihood, evaluated in log-gamma
  space so factorials never overflow. Per family:
  ``sum_j [ lnG(r) - lnG(N_ij + r) + sum_k lnG(N_ijk + 1) ]``
  where higher is better.

Both scores decompose over (child, parent set) families and are
invariant under parent reordering, so a per-family cache keyed on the
parent *set* is exact.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from enum import Enum
from typing import Sequence

import numpy as np

from .dataset import TabularDataset
from .errors import NonBinaryColumn, UnknownColumn
from .graph import Dag


class Objective(Enum):
    BIC = "bic"
    K2 = "k2"

    @staticmethod
    def parse(name: str) -> "Objective":
        try:
            return Objective(name.lower())
        except ValueError:
            raise ValueError(f"unknown objective {name!r}; expected 'bic' or 'k2'") from None

    @property
    def maximize(self) -> bool:
        return self is Objective.K2


@dataclass(frozen=True)
class FamilyCounts:
    """Contingency counts for one child given an ordered parent list.

    Parent configuration j encodes the parent values as a binary number
    in parent_list order, first parent most significant. ``n_ijk`` has
    shape (q, r) with q = 2**len(parent_list) and r = 2.
    """

    child: str
    parent_list: tuple[str, ...]
    n_ijk: np.ndarray

    @property
    def n_ij(self) -> np.ndarray:
        return self.n_ijk.sum(axis=1)

    @property
    def r(self) -> int:
        return self.n_ijk.shape[1]

    @property
    def q(self) -> int:
        return self.n_ijk.shape[0]


def family_counts(
    data: TabularDataset, child: str, parent_list: Sequence[str]
) -> FamilyCounts:
    """Exact (parent configuration, child value) contingency counts."""
    parent_list = tuple(parent_list)
    if child in parent_list:
        raise ValueError(f"child {child!r} cannot be its own parent")
    for name in (child, *parent_list):
        try:
            idx = data.column_index(name)
        except KeyError:
            raise UnknownColumn(name) from None
        if data.columns[idx].kind != "binary":
            raise NonBinaryColumn(name)

    child_vals = data.column_values(child).astype(np.int64)
    q = 1 << len(parent_list)
    j = np.zeros(data.row_count, dtype=np.int64)
    for bit, parent in enumerate(parent_list):
        shift = len(parent_list) - 1 - bit
        j |= data.column_values(parent).astype(np.int64) << shift
    flat = np.bincount(j * 2 + child_vals, minlength=q * 2)
    n_ijk = flat.reshape(q, 2)
    n_ijk.flags.writeable = False
    return FamilyCounts(child=child, parent_list=parent_list, n_ijk=n_ijk)


def bic_family(counts: FamilyCounts, n: int) -> float:
    """Family BIC; lower is better."""
    if n <= 0:
        raise ValueError("sample count must be positive")
    n_ijk = counts.n_ijk
    n_ij = counts.n_ij
    ll = 0.0
    for j in range(counts.q):
        total = n_ij[j]
        if total == 0:
            continue
        for k in range(counts.r):
            c = n_ijk[j, k]
            if c > 0:
                ll += c * math.log(c / total)
    penalty = counts.q * (counts.r - 1) * math.log(n)
    return -2.0 * ll + penalty


def k2_family_log(counts: FamilyCounts) -> float:
    """Log of the family's exact K2 marginal likelihood; higher is better."""
    r = counts.r
    lg_r = math.lgamma(r)
    score = 0.0
    for j in range(counts.q):
        score += lg_r - math.lgamma(counts.n_ij[j] + r)
        for k in range(r):
            score += math.lgamma(counts.n_ijk[j, k] + 1)
    return score


class ScoreCache:
    """Per-family score memo keyed on (child, parent set).

    Valid only for the single (dataset, objective) pair it is filled
    from. Reads and writes are serialized by an internal lock so
    concurrent family scoring is safe.
    """

    def __init__(self):
        self._values: dict[tuple[str, frozenset[str]], float] = {}
        self._lock = threading.Lock()
        self.hits = 0
        self.misses = 0

    def get(self, child: str, parent_set: frozenset[str]) -> float | None:
        with self._lock:
            value = self._values.get((child, parent_set))
            if value is None:
                self.misses += 1
            else:
                self.hits += 1
            return value

    def put(self, child: str, parent_set: frozenset[str], value: float) -> None:
        with self._lock:
            self._values[(child, parent_set)] = value

    def __len__(self) -> int:
        return len(self._values)


def family_score(
    data: TabularDataset,
    child: str,
    parent_list: Sequence[str],
    objective: Objective,
    cache: ScoreCache | None = None,
) -> float:
    """Score one family, consulting and populating the cache."""
    key = frozenset(parent_list)
    if cache is not None:
        cached = cache.get(child, key)
        if cached is not None:
            return cached
    counts = family_counts(data, child, parent_list)
    if objective is Objective.BIC:
        value = bic_family(counts, data.row_count)
    else:
        value = k2_family_log(counts)
    if cache is not None:
        cache.put(child, key, value)
    return value


def total_score(
    g: Dag,
    data: TabularDataset,
    objective: Objective,
    cache: ScoreCache | None = None,
) -> float:
    """Sum of family scores over all graph nodes.

    BIC totals are minimized, K2 log-totals maximized; the search layer
    handles direction.
    """
    names = set(data.column_names)
    for node in g.nodes:
        if node not in names:
            raise UnknownColumn(node)
    total = 0.0
    for node in g.nodes:
        ps = sorted(g.parents(node), key=g.nodes.index)
        total += family_score(data, node, ps, objective, cache)
    return total
