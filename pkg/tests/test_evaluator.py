# tests/test_evaluator.py

from dataclasses import replace

import numpy as np
import pytest

from src.data_loader import MODALITIES, Modality, split
from src.evaluator import AblationRow, MAPEvaluator, run_variant, win_counts, write_ablation_csv
from src.network import init_model
from src.retrieval import Metric
from src.utils.errors import DimensionMismatch, IncompatibleMetric


@pytest.fixture
def test_ids(small_dataset):
    partition = split(small_dataset, seed=0)
    return {m: partition.test[m] for m in MODALITIES}


class TestMAPEvaluator:

    def test_report_covers_requested_pairs(self, small_run_config, small_dataset, test_ids):
        params = init_model(6, 8, 16, 3, seed=0)
        config = replace(small_run_config, metric="all")
        report = MAPEvaluator(config).evaluate(params, small_dataset, test_ids)
        assert [(r["direction"], r["metric"]) for r in report.rows()] == [
            (d, m) for d in ("i2t", "t2i") for m in ("kl", "euclidean", "cosine", "nc")
        ]
        avg = report.average_map(Metric.COSINE)
        assert avg == pytest.approx((report.get("i2t", "cosine").map + report.get("t2i", "cosine").map) / 2)

    def test_query_labels_restrict_queries_only(self, small_run_config, small_dataset, test_ids):
        params = init_model(6, 8, 16, 3, seed=0)
        evaluator = MAPEvaluator(small_run_config)
        full = evaluator.evaluate(params, small_dataset, test_ids)
        held = evaluator.evaluate(params, small_dataset, test_ids, query_labels=[1])
        n_image_label1 = sum(1 for sid in test_ids[Modality.IMAGE] if small_dataset.get(Modality.IMAGE, sid).label == 1)
        assert held.get("i2t", "cosine").num_queries == n_image_label1
        assert held.get("i2t", "cosine").num_queries < full.get("i2t", "cosine").num_queries

    def test_kl_on_logits_rejected(self, small_run_config, small_dataset, test_ids):
        config = replace(small_run_config, embedding_kind="logit", metric="kl")
        with pytest.raises(IncompatibleMetric):
            MAPEvaluator(config).evaluate(init_model(6, 8, 16, 3, seed=0), small_dataset, test_ids)

    def test_model_width_mismatch(self, small_run_config, small_dataset, test_ids):
        with pytest.raises(DimensionMismatch):
            MAPEvaluator(small_run_config).evaluate(init_model(7, 8, 16, 3, seed=0), small_dataset, test_ids)

    def test_more_labels_than_model(self, small_run_config, small_dataset, test_ids):
        with pytest.raises(DimensionMismatch):
            MAPEvaluator(small_run_config).evaluate(init_model(6, 8, 16, 2, seed=0), small_dataset, test_ids)


class TestAblation:

    def _row(self, seed, alignment, fc2, map_avg):
        return AblationRow(seed=seed, alignment=alignment, final_coral_fc2=fc2, map_i2t=map_avg, map_t2i=map_avg)

    def test_win_counts(self):
        rows = [
            self._row(0, "none", 1.0, 0.8), self._row(0, "coral", 0.4, 0.9),
            self._row(1, "none", 1.0, 0.8), self._row(1, "coral", 0.6, 0.7),
            self._row(2, "mmd", 0.1, 0.9),
        ]
        assert win_counts(rows) == {"seeds": 2, "fc2": 1, "map": 1}

    def test_run_variant(self, small_run_config):
        row = run_variant(small_run_config, "coral", seed=1)
        assert row.alignment == "coral" and row.seed == 1
        assert np.isfinite(row.final_coral_fc2)
        assert 0.0 < row.map_avg <= 1.0

    def test_csv(self, tmp_path):
        path = write_ablation_csv([self._row(3, "none", 0.25, 0.5)], str(tmp_path / "ablation.csv"))
        assert open(path).read().splitlines() == [
            "seed,alignment,final_coral_fc2,map_i2t,map_t2i,map_avg", "3,none,0.25,0.5,0.5,0.5",
        ]
