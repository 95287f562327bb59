"""Regenerate demo/chain_model.json.

A small handcrafted network for walkthroughs and UI demos: an air
contaminant drives the water quality index down, which drives both the
water risk flag and the health risk flag. ``wqi`` is value-coded
(0 = low index = degraded water); the risk flags are 1 = at risk.
``grid_stress`` is deliberately disconnected so independence is easy to
demonstrate.

    python3 demo/make_chain_model.py
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from cascade_bn.graph import Dag
from cascade_bn.params import BayesNet, Cpt, save

HERE = Path(__file__).parent


def main() -> None:
    dag = Dag(
        nodes=("voc", "wqi", "water_risk", "health_risk", "grid_stress"),
        edges=frozenset(
            {("voc", "wqi"), ("wqi", "water_risk"), ("wqi", "health_risk")}
        ),
        domains={
            "voc": "Air",
            "wqi": "Water",
            "water_risk": "Water",
            "health_risk": "Health",
            "grid_stress": "Electricity",
        },
    )

    def cpt(child, parents, rows):
        table = np.array([[1.0 - p1, p1] for p1 in rows], dtype=np.float64)
        return Cpt(child=child, parent_list=parents, table=table, alpha=0.0)

    cpts = {
        "voc": cpt("voc", (), [0.3]),
        # high contaminant load usually collapses the index
        "wqi": cpt("wqi", ("voc",), [0.9, 0.05]),
        "water_risk": cpt("water_risk", ("wqi",), [0.9435, 0.2778]),
        "health_risk": cpt("health_risk", ("wqi",), [0.9, 0.08]),
        "grid_stress": cpt("grid_stress", (), [0.2]),
    }

    net = BayesNet(
        dag=dag,
        cpts=cpts,
        metadata={"alpha": 0.0, "rows": 0, "source": "handcrafted demo"},
    )
    out = HERE / "chain_model.json"
    save(net, out)
    print(f"wrote {out}")


if __name__ == "__main__":
    main()
