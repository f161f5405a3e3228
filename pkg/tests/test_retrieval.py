# tests/test_retrieval.py

import numpy as np
import pytest

from src.data_loader import Modality
from src.network import softmax
from src.retrieval import (
    METRIC_ORDER, EmbeddingIndex, EmbeddingKind, Metric, RankingList, average_precision, distance,
    distances_to, mean_ap, parse_metric, rank, write_map_report, write_per_query,
)
from src.utils.errors import (
    ConfigError, DegenerateVector, IncompatibleMetric, NoEvaluableQueries, NoRelevantItems, ShapeError,
)


def _index(embeddings, labels, kind=EmbeddingKind.LOGIT, prefix="t", modality=Modality.TEXT):
    embeddings = np.asarray(embeddings, dtype=np.float64)
    return EmbeddingIndex(
        modality=modality, ids=tuple(f"{prefix}{i:03d}" for i in range(len(embeddings))),
        labels=np.asarray(labels), embeddings=embeddings, kind=kind,
    )


def _ranking(relevant):
    relevant = np.asarray(relevant, dtype=bool)
    n = relevant.size
    return RankingList(query_id="q", ids=tuple(str(i) for i in range(n)), scores=-np.arange(n, dtype=float),
                       labels=relevant.astype(int), relevant=relevant)


def _naive_ap(query, query_label, index, metric):
    pairs = []
    for i, cand in enumerate(index.embeddings):
        pairs.append((distance(metric, query, cand), index.ids[i], index.labels[i] == query_label))
    pairs.sort(key=lambda p: (p[0], p[1]))
    hits, total = 0, 0.0
    for k, (_, _, rel) in enumerate(pairs, start=1):
        if rel:
            hits += 1
            total += hits / k
    return total / hits if hits else None


class TestMetrics:

    def test_euclidean_value(self):
        assert distance(Metric.EUCLIDEAN, [0, 0], [3, 4]) == pytest.approx(5.0)

    @pytest.mark.parametrize("metric", list(METRIC_ORDER))
    def test_self_distance_is_zero(self, metric, rng):
        v = softmax(rng.normal(size=(1, 6)))[0]
        assert abs(distance(metric, v, v)) <= 1e-9

    def test_cosine_range(self, rng):
        a, b = rng.normal(size=5), rng.normal(size=5)
        assert 0.0 <= distance(Metric.COSINE, a, b) <= 2.0
        assert distance(Metric.COSINE, a, -a) == pytest.approx(2.0)

    def test_nc_constant_vector(self):
        with pytest.raises(DegenerateVector):
            distance(Metric.NC, [2.0, 2.0, 2.0], [1.0, 2.0, 3.0])

    def test_cosine_zero_vector(self):
        with pytest.raises(DegenerateVector):
            distance(Metric.COSINE, [0.0, 0.0], [1.0, 2.0])

    def test_kl_is_asymmetric_and_smoothed(self):
        p = np.array([0.5, 0.5, 0.0])
        q = np.array([0.1, 0.1, 0.8])
        assert distance(Metric.KL, p, q) != pytest.approx(distance(Metric.KL, q, p))
        # zero entries are smoothed, so the divergence stays finite
        assert np.isfinite(distance(Metric.KL, q, p))

    def test_kl_rejects_negative(self):
        with pytest.raises(IncompatibleMetric):
            distance(Metric.KL, [-1.0, 2.0], [0.5, 0.5])

    def test_shape_mismatch(self):
        with pytest.raises(ShapeError):
            distance(Metric.EUCLIDEAN, [1.0, 2.0], [1.0, 2.0, 3.0])
        with pytest.raises(ShapeError):
            distances_to(Metric.EUCLIDEAN, np.zeros(3), np.zeros((2, 2)))

    def test_parse_metric(self):
        assert parse_metric("NC") is Metric.NC
        with pytest.raises(ConfigError):
            parse_metric("manhattan")


class TestRank:

    def test_kl_on_logits(self):
        index = _index([[1.0, 2.0]], [0])
        with pytest.raises(IncompatibleMetric):
            rank(np.array([0.5, 0.5]), index, Metric.KL)

    def test_ties_break_by_id(self):
        index = EmbeddingIndex(Modality.TEXT, ("b", "c", "a"), np.array([0, 1, 0]),
                               np.array([[1.0, 0.0], [1.0, 0.0], [1.0, 0.0]]), EmbeddingKind.LOGIT)
        ranking = rank(np.array([0.0, 0.0]), index, Metric.EUCLIDEAN, query_label=0)
        assert ranking.ids == ("a", "b", "c")
        assert ranking.relevant.tolist() == [True, True, False]

    @pytest.mark.parametrize("metric", [Metric.EUCLIDEAN, Metric.COSINE, Metric.NC])
    def test_matches_naive_sort(self, metric, rng):
        index = _index(rng.normal(size=(30, 4)), rng.integers(0, 3, 30))
        query = rng.normal(size=4)
        ranking = rank(query, index, metric)
        naive = sorted(index.ids, key=lambda sid: (distance(metric, query, index.embeddings[index.position(sid)]), sid))
        assert list(ranking.ids) == naive
        assert np.all(np.diff(ranking.scores) <= 0)

    def test_cosine_ignores_scale(self, rng):
        index = _index(rng.normal(size=(20, 5)), rng.integers(0, 2, 20))
        query = rng.normal(size=5)
        assert rank(query, index, Metric.COSINE).ids == rank(7.5 * query, index, Metric.COSINE).ids

    def test_degenerate_candidates_are_skipped(self):
        index = _index([[1.0, 0.0], [0.0, 0.0], [0.0, 1.0]], [0, 0, 1])
        ranking = rank(np.array([1.0, 0.1]), index, Metric.COSINE, query_label=0)
        assert ranking.skipped == ("t001",)
        assert ranking.ids == ("t000", "t002")

    def test_degenerate_query(self):
        index = _index([[1.0, 2.0, 3.0]], [0])
        with pytest.raises(DegenerateVector):
            rank(np.array([1.0, 1.0, 1.0]), index, Metric.NC)

    def test_probability_index_validated(self):
        with pytest.raises(ValueError):
            _index([[0.7, 0.7]], [0], kind=EmbeddingKind.PROBABILITY)

    def test_first_relevant_rank(self):
        assert _ranking([0, 0, 1]).first_relevant_rank == 3
        assert _ranking([0, 0]).first_relevant_rank is None


class TestAveragePrecision:

    def test_hand_computed(self):
        assert average_precision(_ranking([1, 0, 1])) == pytest.approx(5 / 6)
        assert average_precision(_ranking([0, 1])) == pytest.approx(0.5)
        assert average_precision(_ranking([1, 1, 1, 1])) == 1.0

    def test_no_relevant(self):
        with pytest.raises(NoRelevantItems):
            average_precision(_ranking([0, 0, 0]))

    def test_depth_keeps_full_normalizer(self):
        # depth 1 keeps only the first hit, still divided by R = 2
        assert average_precision(_ranking([1, 0, 1]), depth=1) == pytest.approx(0.5)
        assert average_precision(_ranking([1, 0, 1]), depth=10) == pytest.approx(5 / 6)

    def test_bounds(self, rng):
        for _ in range(20):
            rel = rng.integers(0, 2, 15)
            if not rel.any():
                rel[0] = 1
            ap = average_precision(_ranking(rel))
            assert 0.0 < ap <= 1.0


class TestMeanAP:

    @pytest.mark.parametrize("metric", list(METRIC_ORDER))
    def test_matches_brute_force(self, metric):
        kind = EmbeddingKind.PROBABILITY if metric is Metric.KL else EmbeddingKind.LOGIT
        for instance in range(25):
            rng = np.random.default_rng(1000 + instance)
            q = rng.normal(size=(6, 4))
            c = rng.normal(size=(12, 4))
            if kind is EmbeddingKind.PROBABILITY:
                q, c = softmax(q), softmax(c)
            queries = _index(q, rng.integers(0, 3, 6), kind=kind, prefix="i", modality=Modality.IMAGE)
            index = _index(c, rng.integers(0, 3, 12), kind=kind)
            expected = [ap for ap in (_naive_ap(queries.embeddings[r], queries.labels[r], index, metric)
                                      for r in range(len(queries))) if ap is not None]
            if not expected:
                continue
            result = mean_ap(queries, index, metric)
            assert abs(result.map - float(np.mean(expected))) <= 1e-12
            assert result.num_queries + result.num_skipped == len(queries)

    def test_perfect_separation(self):
        queries = _index([[1.0, 0.0], [0.0, 1.0]], [0, 1], prefix="i", modality=Modality.IMAGE)
        index = _index([[2.0, 0.1], [0.1, 2.0], [3.0, 0.0]], [0, 1, 0])
        assert mean_ap(queries, index, Metric.COSINE).map == 1.0

    def test_queries_without_relevant_items_skipped(self):
        queries = _index([[1.0, 0.0], [0.0, 1.0]], [0, 2], prefix="i", modality=Modality.IMAGE)
        index = _index([[1.0, 0.0], [0.0, 1.0]], [0, 1])
        result = mean_ap(queries, index, Metric.EUCLIDEAN)
        assert (result.num_queries, result.num_skipped, result.skipped_ids) == (1, 1, ("i001",))

    def test_nothing_scorable(self):
        queries = _index([[1.0, 0.0]], [5], prefix="i", modality=Modality.IMAGE)
        index = _index([[1.0, 0.0]], [0])
        with pytest.raises(NoEvaluableQueries):
            mean_ap(queries, index, Metric.EUCLIDEAN)

    def test_workers_do_not_change_result(self, rng):
        queries = _index(rng.normal(size=(40, 5)), rng.integers(0, 4, 40), prefix="i", modality=Modality.IMAGE)
        index = _index(rng.normal(size=(50, 5)), rng.integers(0, 4, 50))
        serial = mean_ap(queries, index, Metric.NC)
        threaded = mean_ap(queries, index, Metric.NC, max_workers=4)
        assert serial.map == threaded.map
        assert [q.query_id for q in serial.per_query] == [q.query_id for q in threaded.per_query]

    def test_report_files(self, tmp_path):
        queries = _index([[1.0, 0.0], [0.0, 1.0]], [0, 1], prefix="i", modality=Modality.IMAGE)
        index = _index([[2.0, 0.1], [0.1, 2.0]], [0, 1])
        result = mean_ap(queries, index, Metric.COSINE)
        report = write_map_report([result.to_row("i2t", Metric.COSINE)], str(tmp_path / "map_report.csv"))
        assert open(report).read().splitlines() == ["direction,metric,map,num_queries,num_skipped",
                                                    "i2t,cosine,1,2,0"]
        per_query = write_per_query(result, str(tmp_path / "per_query.csv"))
        assert open(per_query).read().splitlines()[1:] == ["i000,1,1", "i001,1,1"]
