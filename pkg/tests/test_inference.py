"""Exact inference: factor algebra against nested-loop oracles and
variable elimination against joint enumeration."""

from __future__ import annotations

import itertools

import numpy as np
import pytest

from conftest import random_network
from cascade_bn.errors import (
    TargetIsEvidence,
    TooManyNodes,
    UnknownNode,
    ZeroProbabilityEvidence,
)
from cascade_bn.graph import Dag
from cascade_bn.inference import (
    Factor,
    cpt_factor,
    factor_product,
    joint_enumeration,
    marginalize,
    query,
    reduce,
)
from cascade_bn.params import BayesNet, Cpt


def factor_lookup(f: Factor, assignment: dict[str, int]) -> float:
    idx = tuple(assignment[v] for v in f.scope)
    return float(f.values[idx])


def two_node_net():
    # P(A=1)=0.3, P(B=1|A=0)=0.2, P(B=1|A=1)=0.9
    dag = Dag(nodes=("A", "B"), edges=frozenset({("A", "B")}))
    cpts = {
        "A": Cpt(child="A", parent_list=(), table=np.array([[0.7, 0.3]])),
        "B": Cpt(child="B", parent_list=("A",),
                 table=np.array([[0.8, 0.2], [0.1, 0.9]])),
    }
    return BayesNet(dag=dag, cpts=cpts, metadata={})


class TestFactorOps:
    def test_product_matches_pointwise_oracle(self):
        rng = np.random.default_rng(5)
        a = Factor(scope=("x", "y"), values=rng.random((2, 2)))
        b = Factor(scope=("y", "z"), values=rng.random((2, 2)))
        prod = factor_product(a, b)
        assert set(prod.scope) == {"x", "y", "z"}
        for x, y, z in itertools.product((0, 1), repeat=3):
            asg = {"x": x, "y": y, "z": z}
            expect = factor_lookup(a, asg) * factor_lookup(b, asg)
            assert factor_lookup(prod, asg) == pytest.approx(expect, abs=1e-15)

    def test_product_with_disjoint_scopes(self):
        a = Factor(scope=("x",), values=np.array([2.0, 3.0]))
        b = Factor(scope=("y",), values=np.array([5.0, 7.0]))
        prod = factor_product(a, b)
        assert factor_lookup(prod, {"x": 1, "y": 0}) == pytest.approx(15.0)

    def test_marginalize_matches_sum_oracle(self):
        rng = np.random.default_rng(6)
        f = Factor(scope=("x", "y", "z"), values=rng.random((2, 2, 2)))
        m = marginalize(f, "y")
        assert m.scope == ("x", "z")
        for x, z in itertools.product((0, 1), repeat=2):
            expect = sum(factor_lookup(f, {"x": x, "y": y, "z": z}) for y in (0, 1))
            assert factor_lookup(m, {"x": x, "z": z}) == pytest.approx(expect, abs=1e-15)

    def test_marginalize_conserves_total_mass(self):
        rng = np.random.default_rng(8)
        f = Factor(scope=("a", "b", "c"), values=rng.random((2, 2, 2)))
        total = float(f.values.sum())
        for v in ("a", "b", "c"):
            assert float(marginalize(f, v).values.sum()) == pytest.approx(total, rel=1e-12)

    def test_reduce_slices_without_renormalizing(self):
        f = Factor(scope=("x", "y"), values=np.array([[0.1, 0.2], [0.3, 0.4]]))
        r = reduce(f, "x", 1)
        assert r.scope == ("y",)
        assert r.values.tolist() == [0.3, 0.4]

    def test_scope_errors(self):
        f = Factor(scope=("x",), values=np.array([0.5, 0.5]))
        from cascade_bn.errors import NodeNotInScope
        with pytest.raises(NodeNotInScope):
            marginalize(f, "zz")
        with pytest.raises(NodeNotInScope):
            reduce(f, "zz", 0)

    def test_negative_values_rejected(self):
        with pytest.raises(ValueError):
            Factor(scope=("x",), values=np.array([-0.1, 1.1]))


class TestQueryHandCases:
    def test_prior_marginal(self):
        net = two_node_net()
        post = query(net, "B", {})
        assert post.p1 == pytest.approx(0.41, abs=1e-12)

    def test_diagnostic_posterior(self):
        # Bayes by hand: P(A=1|B=1) = 27/41, P(A=1|B=0) = 3/59
        net = two_node_net()
        assert query(net, "A", {"B": 1}).p1 == pytest.approx(27 / 41, abs=1e-12)
        assert query(net, "A", {"B": 0}).p1 == pytest.approx(3 / 59, abs=1e-12)

    def test_evidence_on_target_rejected(self):
        with pytest.raises(TargetIsEvidence):
            query(two_node_net(), "B", {"B": 1})

    def test_unknown_nodes_rejected(self):
        net = two_node_net()
        with pytest.raises(UnknownNode):
            query(net, "zz", {})
        with pytest.raises(UnknownNode):
            query(net, "B", {"zz": 0})

    def test_bad_evidence_value_rejected(self):
        with pytest.raises(ValueError):
            query(two_node_net(), "B", {"A": 2})

    def test_impossible_evidence(self):
        dag = Dag(nodes=("A", "B"), edges=frozenset({("A", "B")}))
        cpts = {
            "A": Cpt(child="A", parent_list=(), table=np.array([[1.0, 0.0]])),
            "B": Cpt(child="B", parent_list=("A",),
                     table=np.array([[1.0, 0.0], [0.0, 1.0]])),
        }
        net = BayesNet(dag=dag, cpts=cpts, metadata={})
        with pytest.raises(ZeroProbabilityEvidence):
            query(net, "A", {"B": 1})

    def test_posterior_json_shape(self):
        post = query(two_node_net(), "B", {"A": 1})
        assert post.to_json() == {"target": "B", "p0": post.p0, "p1": post.p1}


class TestEliminationOrders:
    def test_min_fill_and_declaration_agree(self):
        rng = np.random.default_rng(17)
        for _ in range(50):
            net = random_network(rng, int(rng.integers(3, 8)))
            target = net.dag.nodes[int(rng.integers(len(net.dag.nodes)))]
            ev_nodes = [n for n in net.dag.nodes if n != target][:2]
            ev = {n: int(rng.integers(2)) for n in ev_nodes}
            a = query(net, target, ev, elimination="min_fill")
            b = query(net, target, ev, elimination="declaration")
            assert a.p1 == pytest.approx(b.p1, abs=1e-12)

    def test_unknown_order_rejected(self):
        with pytest.raises(ValueError):
            query(two_node_net(), "B", {}, elimination="random")


class TestAgainstEnumeration:
    def test_sweep_random_networks(self):
        rng = np.random.default_rng(23)
        for _ in range(150):
            n = int(rng.integers(3, 9))
            net = random_network(rng, n)
            nodes = net.dag.nodes
            target = nodes[int(rng.integers(n))]
            k = int(rng.integers(0, min(3, n)))
            pool = [x for x in nodes if x != target]
            ev = {x: int(rng.integers(2)) for x in list(pool)[:k]}
            got = query(net, target, ev)
            want = joint_enumeration(net, target, ev)
            assert got.p1 == pytest.approx(want.p1, abs=1e-9)
            assert got.p0 + got.p1 == pytest.approx(1.0, abs=1e-12)

    def test_deterministic_chain_propagates(self):
        # B copies A, C copies B; evidence A=1 forces C=1
        dag = Dag(nodes=("A", "B", "C"),
                  edges=frozenset({("A", "B"), ("B", "C")}))
        copy = np.array([[1.0, 0.0], [0.0, 1.0]])
        cpts = {
            "A": Cpt(child="A", parent_list=(), table=np.array([[0.5, 0.5]])),
            "B": Cpt(child="B", parent_list=("A",), table=copy),
            "C": Cpt(child="C", parent_list=("B",), table=copy),
        }
        net = BayesNet(dag=dag, cpts=cpts, metadata={})
        assert query(net, "C", {"A": 1}).p1 == pytest.approx(1.0, abs=1e-15)
        assert query(net, "A", {"C": 0}).p0 == pytest.approx(1.0, abs=1e-15)

    def test_enumeration_node_cap(self):
        rng = np.random.default_rng(2)
        net = random_network(rng, 21, edge_p=0.1)
        with pytest.raises(TooManyNodes):
            joint_enumeration(net, "v0", {})
