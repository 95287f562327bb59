"""Ingestion, binarization, SMOTE and bootstrap augmentation."""

from __future__ import annotations

import json
import math

import numpy as np
import pytest

from cascade_bn.dataset import (
    BINARY,
    NUMERIC,
    ColumnSpec,
    SmoteConfig,
    TabularDataset,
    augment_bootstrap,
    discretize,
    fill_thresholds,
    load_csv,
    load_schema,
    provenance,
    save_csv,
    schema_to_json,
    smote_balance,
)
from cascade_bn.errors import (
    EmptyDataset,
    EmptyFile,
    MissingColumn,
    MissingThreshold,
    ParseError,
    SingleClass,
    TooFewMinority,
)

SCHEMA = (
    ColumnSpec("load", "Electricity", NUMERIC, threshold=50.0),
    ColumnSpec("risk", "Health", BINARY),
)


def write(tmp_path, text, name="data.csv"):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return p


def imbalanced(rng, n_major=40, n_minor=12, n_feat=3):
    spread = rng.uniform(1.0, 5.0, n_feat)
    major = rng.normal(0.0, 1.0, (n_major, n_feat)) * spread
    minor = rng.normal(4.0, 1.0, (n_minor, n_feat)) * spread
    feats = np.vstack([major, minor])
    labels = np.array([0.0] * n_major + [1.0] * n_minor)
    specs = tuple(
        ColumnSpec(f"f{i}", "Weather", NUMERIC) for i in range(n_feat)
    ) + (ColumnSpec("risk", "Health", BINARY),)
    return TabularDataset(columns=specs, rows=np.column_stack([feats, labels]))


class TestColumnSpec:
    def test_binary_with_threshold_rejected(self):
        with pytest.raises(ValueError):
            ColumnSpec("x", "Air", BINARY, threshold=1.0)

    def test_unknown_domain_rejected(self):
        with pytest.raises(ValueError):
            ColumnSpec("x", "Atlantis", NUMERIC)

    def test_numeric_may_defer_threshold(self):
        spec = ColumnSpec("x", "Air", NUMERIC)
        assert spec.threshold is None


class TestLoadCsv:
    def test_round_trip(self, tmp_path):
        path = write(tmp_path, "load,risk\n61.5,1\n40.25,0\n")
        data = load_csv(path, SCHEMA)
        assert data.row_count == 2
        assert data.column_values("load").tolist() == [61.5, 40.25]
        out = tmp_path / "echo.csv"
        save_csv(data, out)
        assert np.array_equal(load_csv(out, SCHEMA).rows, data.rows)

    def test_header_order_free(self, tmp_path):
        path = write(tmp_path, "risk,load\n1,61.5\n")
        data = load_csv(path, SCHEMA)
        assert data.column_names == ("load", "risk")  # schema order wins
        assert data.rows[0].tolist() == [61.5, 1.0]

    def test_missing_column(self, tmp_path):
        path = write(tmp_path, "load\n61.5\n")
        with pytest.raises(MissingColumn):
            load_csv(path, SCHEMA)

    def test_undeclared_column(self, tmp_path):
        path = write(tmp_path, "load,risk,extra\n1,0,9\n")
        with pytest.raises(ParseError) as err:
            load_csv(path, SCHEMA)
        assert err.value.row == 0

    def test_bad_cell_reports_row_and_column(self, tmp_path):
        path = write(tmp_path, "load,risk\n61.5,1\noops,0\n")
        with pytest.raises(ParseError) as err:
            load_csv(path, SCHEMA)
        assert err.value.row == 2 and err.value.column == "load"

    def test_non_finite_rejected(self, tmp_path):
        path = write(tmp_path, "load,risk\nnan,1\n")
        with pytest.raises(ParseError):
            load_csv(path, SCHEMA)

    def test_binary_cell_must_be_01(self, tmp_path):
        path = write(tmp_path, "load,risk\n61.5,2\n")
        with pytest.raises(ParseError) as err:
            load_csv(path, SCHEMA)
        assert err.value.column == "risk"

    def test_ragged_row_rejected(self, tmp_path):
        path = write(tmp_path, "load,risk\n61.5\n")
        with pytest.raises(ParseError):
            load_csv(path, SCHEMA)

    def test_empty_file(self, tmp_path):
        path = write(tmp_path, "")
        with pytest.raises(EmptyFile):
            load_csv(path, SCHEMA)

    def test_header_only_is_zero_rows(self, tmp_path):
        path = write(tmp_path, "load,risk\n")
        assert load_csv(path, SCHEMA).row_count == 0


class TestSchemaJson:
    def test_round_trip(self, tmp_path):
        doc = schema_to_json(SCHEMA)
        p = tmp_path / "schema.json"
        p.write_text(json.dumps(doc), encoding="utf-8")
        back = load_schema(p)
        assert tuple(back) == SCHEMA


class TestDiscretize:
    def test_high_is_risky_cut(self):
        data = TabularDataset(
            columns=(ColumnSpec("x", "Air", NUMERIC, threshold=10.0),),
            rows=np.array([[9.0], [10.0], [11.0]]),
        )
        out = discretize(data)
        assert out.column_values("x").tolist() == [0.0, 0.0, 1.0]  # tie -> 0
        assert out.columns[0].kind == BINARY

    def test_low_is_risky_cut(self):
        data = TabularDataset(
            columns=(ColumnSpec("wqi", "Water", NUMERIC, threshold=50.0,
                                high_is_risky=False),),
            rows=np.array([[49.0], [50.0], [51.0]]),
        )
        assert discretize(data).column_values("wqi").tolist() == [1.0, 0.0, 0.0]

    def test_idempotent(self):
        data = TabularDataset(
            columns=(ColumnSpec("x", "Air", NUMERIC, threshold=0.5),),
            rows=np.array([[0.1], [0.9]]),
        )
        once = discretize(data)
        twice = discretize(once)
        assert np.array_equal(once.rows, twice.rows)
        assert once.columns == twice.columns

    def test_missing_threshold_raises(self):
        data = TabularDataset(
            columns=(ColumnSpec("x", "Air", NUMERIC),),
            rows=np.array([[1.0]]),
        )
        with pytest.raises(MissingThreshold):
            discretize(data)

    def test_fill_thresholds_uses_median(self):
        data = TabularDataset(
            columns=(ColumnSpec("x", "Air", NUMERIC),
                     ColumnSpec("y", "Air", NUMERIC, threshold=7.0)),
            rows=np.array([[1.0, 0.0], [5.0, 0.0], [9.0, 0.0]]),
        )
        filled = fill_thresholds(data)
        assert filled.columns[0].threshold == 5.0
        assert filled.columns[1].threshold == 7.0  # explicit value kept


class TestSmote:
    def test_reaches_target_ratio_and_keeps_prefix(self):
        rng = np.random.default_rng(1)
        data = imbalanced(rng)
        out = smote_balance(data, SmoteConfig(class_column="risk", seed=5))
        labels = out.column_values("risk")
        n1 = int(labels.sum())
        n0 = out.row_count - n1
        assert min(n0, n1) / max(n0, n1) >= 1.0
        assert np.array_equal(out.rows[: data.row_count], data.rows)

    def test_synthetic_rows_are_convex_combinations(self):
        rng = np.random.default_rng(2)
        data = imbalanced(rng, n_major=30, n_minor=10)
        cfg = SmoteConfig(class_column="risk", seed=9, k_neighbors=3)
        out = smote_balance(data, cfg)
        feat = [i for i, c in enumerate(data.columns) if c.kind == NUMERIC]
        minority = data.rows[data.column_values("risk") == 1.0]
        for s in out.rows[data.row_count:]:
            assert s[-1] == 1.0  # class cell carries the minority label
            assert _is_segment_point(s[feat], minority[:, feat])

    def test_deterministic_for_seed(self):
        rng = np.random.default_rng(3)
        data = imbalanced(rng)
        a = smote_balance(data, SmoteConfig(class_column="risk", seed=4))
        b = smote_balance(data, SmoteConfig(class_column="risk", seed=4))
        c = smote_balance(data, SmoteConfig(class_column="risk", seed=40))
        assert np.array_equal(a.rows, b.rows)
        assert not np.array_equal(a.rows, c.rows)

    def test_partial_target_ratio(self):
        rng = np.random.default_rng(6)
        data = imbalanced(rng, n_major=50, n_minor=10)
        out = smote_balance(
            data, SmoteConfig(class_column="risk", target_ratio=0.5, seed=1)
        )
        n1 = int(out.column_values("risk").sum())
        assert n1 == math.ceil(0.5 * 50)

    def test_already_balanced_is_identity(self):
        rng = np.random.default_rng(7)
        data = imbalanced(rng, n_major=20, n_minor=20)
        out = smote_balance(data, SmoteConfig(class_column="risk", seed=0, k_neighbors=3))
        assert out.row_count == data.row_count

    def test_single_class_rejected(self):
        specs = (ColumnSpec("f0", "Air", NUMERIC), ColumnSpec("risk", "Health", BINARY))
        rows = np.column_stack([np.arange(10.0), np.ones(10)])
        data = TabularDataset(columns=specs, rows=rows)
        with pytest.raises(SingleClass):
            smote_balance(data, SmoteConfig(class_column="risk"))

    def test_too_few_minority_rows(self):
        rng = np.random.default_rng(8)
        data = imbalanced(rng, n_major=30, n_minor=4)
        with pytest.raises(TooFewMinority):
            smote_balance(data, SmoteConfig(class_column="risk", k_neighbors=5))

    def test_binary_feature_cells_copied_from_base(self):
        # one binary feature column: synthetic rows must copy it verbatim
        rng = np.random.default_rng(9)
        base = imbalanced(rng, n_major=25, n_minor=8)
        flag = (rng.random(base.row_count) < 0.5).astype(np.float64)
        specs = base.columns + (ColumnSpec("flag", "Infrastructure", BINARY),)
        data = TabularDataset(columns=specs, rows=np.column_stack([base.rows, flag]))
        out = smote_balance(data, SmoteConfig(class_column="risk", seed=2, k_neighbors=3))
        for s in out.rows[data.row_count:]:
            assert s[-1] in (0.0, 1.0)


class TestBootstrap:
    def test_zero_extra_is_identity(self):
        rng = np.random.default_rng(10)
        data = imbalanced(rng)
        assert augment_bootstrap(data, 0, 0.1, seed=3) is data

    def test_appends_requested_rows(self):
        rng = np.random.default_rng(11)
        data = imbalanced(rng)
        out = augment_bootstrap(data, 25, 0.05, seed=3)
        assert out.row_count == data.row_count + 25
        assert np.array_equal(out.rows[: data.row_count], data.rows)

    def test_binary_cells_stay_binary(self):
        rng = np.random.default_rng(12)
        data = imbalanced(rng)
        out = augment_bootstrap(data, 40, 0.5, seed=1)
        assert set(np.unique(out.column_values("risk"))) <= {0.0, 1.0}

    def test_zero_noise_copies_rows_exactly(self):
        rng = np.random.default_rng(13)
        data = imbalanced(rng, n_major=6, n_minor=6)
        out = augment_bootstrap(data, 12, 0.0, seed=2)
        originals = {tuple(r) for r in data.rows}
        for row in out.rows[data.row_count:]:
            assert tuple(row) in originals

    def test_empty_dataset_rejected(self):
        data = TabularDataset(
            columns=(ColumnSpec("x", "Air", NUMERIC),),
            rows=np.empty((0, 1)),
        )
        with pytest.raises(EmptyDataset):
            augment_bootstrap(data, 5, 0.1, seed=0)


class TestProvenance:
    def test_totals(self):
        doc = provenance(100, 20, 30)
        assert doc["total_rows"] == 150
        assert doc["smote_rows"] == 30


def _is_segment_point(s, minority_pts, tol=1e-9):
    """True when s = x + u(y - x) for some minority pair and u in [0,1]."""
    for x in minority_pts:
        if np.allclose(s, x, atol=tol):
            return True  # u == 0 or coincident neighbor
        for y in minority_pts:
            d = y - x
            live = np.abs(d) > tol
            if not live.any():
                continue
            u = (s[live] - x[live]) / d[live]
            if u.max() - u.min() > tol:
                continue
            u0 = float(u[0])
            if not (-tol <= u0 <= 1 + tol):
                continue
            if np.allclose(s, x + u0 * d, atol=tol):
                return True
    return False
