"""Regenerate demo/urban_indicators.csv.

Synthetic multi-domain indicator readings with planted cross-domain
dependencies (air quality degrades water quality, which drives health
risk; heat stresses the grid, which stresses infrastructure). Fully
seeded so the committed CSV is reproducible:

    python3 demo/make_demo_data.py
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

HERE = Path(__file__).parent
N = 240
SEED = 20240901


def main() -> None:
    rng = np.random.default_rng(SEED)

    voc = rng.gamma(shape=2.2, scale=28.0, size=N)            # ppb
    pm25 = 8.0 + 0.25 * voc + rng.normal(0, 6.0, N)           # ug/m3
    pm25 = np.clip(pm25, 0.5, None)

    # poor air drags the water quality index down
    wqi = 82.0 - 0.30 * voc - 0.4 * pm25 + rng.normal(0, 7.0, N)
    wqi = np.clip(wqi, 5.0, 100.0)
    bod = 14.0 - 0.11 * wqi + rng.normal(0, 1.2, N)           # mg/L
    bod = np.clip(bod, 0.5, None)

    heat = rng.normal(31.0, 4.5, N)                            # degC daily max
    rain = rng.gamma(shape=1.6, scale=22.0, size=N)            # mm/week

    load = 55.0 + 2.1 * np.maximum(heat - 28.0, 0.0) + rng.normal(0, 5.0, N)
    outage = (
        (load > 66.0).astype(float)
        * (rng.random(N) < 0.72)
        + (load <= 66.0) * (rng.random(N) < 0.06)
    ).astype(float)

    crop_stress = (
        0.5 * np.maximum(heat - 33.0, 0.0)
        + 0.04 * np.maximum(18.0 - rain, 0.0)
        + rng.normal(0, 0.6, N)
    )
    hospital_visits = (
        38.0
        + 0.85 * bod
        + 0.35 * pm25
        + 6.0 * outage
        + rng.normal(0, 4.0, N)
    )
    bridge_alerts = rng.poisson(
        0.6 + 1.4 * outage + 0.02 * np.maximum(rain - 45.0, 0.0)
    ).astype(float)

    health_risk = (hospital_visits > 62.0).astype(float)

    cols = {
        "voc": voc,
        "pm25": pm25,
        "wqi": wqi,
        "bod": bod,
        "heat_index": heat,
        "rainfall": rain,
        "grid_load": load,
        "outage": outage,
        "crop_stress": crop_stress,
        "hospital_visits": hospital_visits,
        "bridge_alerts": bridge_alerts,
        "health_risk": health_risk,
    }

    out = HERE / "urban_indicators.csv"
    with open(out, "w", encoding="utf-8") as fh:
        fh.write(",".join(cols) + "\n")
        for i in range(N):
            cells = []
            for name, arr in cols.items():
                v = arr[i]
                cells.append(str(int(v)) if name in ("outage", "health_risk") else f"{v:.4f}")
            fh.write(",".join(cells) + "\n")
    print(f"wrote {out} ({N} rows)")


if __name__ == "__main__":
    main()
