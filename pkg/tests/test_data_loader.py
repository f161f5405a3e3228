# tests/test_data_loader.py

import warnings

import numpy as np
import pytest

from src.data_loader import (
    MODALITIES, Modality, SampleRecord, build_dataset, load_manifest, new_event_holdout, split, write_manifest,
)
from src.utils.errors import (
    ConfigError, DanglingReference, DimensionMismatch, EmptyTraining, LabelCountWarning, LabelError, LabelGapWarning,
    ParseError, SparseLabelWarning,
)


def _records(modality, labels, dim=3, prefix=None, seed=0):
    rng = np.random.default_rng(seed)
    prefix = prefix or str(modality)[0]
    return [SampleRecord(f"{prefix}{i:03d}", modality, int(label), rng.normal(size=dim))
            for i, label in enumerate(labels)]


def _dataset(img_labels, txt_labels, num_labels=None):
    return build_dataset(_records(Modality.IMAGE, img_labels), _records(Modality.TEXT, txt_labels, dim=4, seed=1),
                         num_labels)


class TestDataset:

    def test_select_keeps_dataset_order(self):
        ds = _dataset([0, 1, 0], [1, 1])
        view = ds.select(Modality.IMAGE, ids=["i002", "i000"])
        assert view.ids == ("i000", "i002")
        assert view.features.shape == (2, 3)
        assert view.labels.tolist() == [0, 0]

    def test_duplicate_ids(self):
        recs = _records(Modality.IMAGE, [0, 1])
        with pytest.raises(ParseError):
            build_dataset(recs + recs[:1], [])

    def test_label_out_of_range(self):
        with pytest.raises(LabelError):
            _dataset([0, 3], [0], num_labels=2)

    def test_mixed_widths(self):
        recs = _records(Modality.IMAGE, [0]) + _records(Modality.IMAGE, [1], dim=4, prefix="x")
        with pytest.raises(DimensionMismatch):
            build_dataset(recs, [])


class TestSplit:

    def test_paper_proportions(self):
        ds = _dataset([0] * 100, [0] * 8)
        part = split(ds, (0.6, 0.15, 0.25), seed=3)
        sizes = part.sizes()
        assert (sizes["train"]["image"], sizes["validation"]["image"], sizes["test"]["image"]) == (60, 15, 25)

    def test_everything_in_train(self):
        ds = _dataset([0, 1] * 5, [0, 1] * 4)
        part = split(ds, (1.0, 0.0, 0.0), seed=0)
        for m in MODALITIES:
            assert part.ids("train", m) == frozenset(ds.ids(m))
            assert not part.ids("validation", m) and not part.ids("test", m)

    def test_deterministic(self):
        ds = _dataset([0, 1, 2] * 20, [0, 1, 2] * 15)
        assert split(ds, seed=9) == split(ds, seed=9)
        assert split(ds, seed=9) != split(ds, seed=10)

    def test_disjoint_and_covering(self):
        ds = _dataset([0, 1, 2] * 20 + [1], [0, 1, 2] * 15)
        part = split(ds, seed=1)
        for m in MODALITIES:
            train, val, test = (part.ids(name, m) for name in ("train", "validation", "test"))
            assert not (train & val) and not (train & test) and not (val & test)
            assert train | val | test == frozenset(ds.ids(m))

    def test_stratified(self):
        labels = [0] * 40 + [1] * 21 + [2] * 13
        ds = _dataset(labels, [0, 1, 2] * 5)
        part = split(ds, seed=4)
        train = part.ids("train", Modality.IMAGE)
        for label in (0, 1, 2):
            n = labels.count(label)
            got = sum(1 for sid in train if ds.get(Modality.IMAGE, sid).label == label)
            assert abs(got - 0.6 * n) <= 1

    def test_sparse_label_goes_to_train(self):
        ds = _dataset([0] * 20 + [1, 1], [0] * 10)
        with pytest.warns(SparseLabelWarning):
            part = split(ds, seed=0)
        assert {"i020", "i021"} <= part.ids("train", Modality.IMAGE)

    @pytest.mark.parametrize("fractions", [(0.5, 0.5), (0.6, 0.6, -0.2), (0.5, 0.2, 0.2)])
    def test_bad_fractions(self, fractions):
        with pytest.raises(ConfigError):
            split(_dataset([0] * 10, [0] * 10), fractions)


class TestHoldout:

    @pytest.fixture
    def setup(self):
        ds = _dataset([0, 1, 2] * 20, [0, 1, 2] * 20)
        return ds, split(ds, seed=2)

    def test_nothing_held(self, setup):
        ds, part = setup
        assert new_event_holdout(ds, [], part) is part

    def test_one_label(self, setup):
        ds, part = setup
        held = new_event_holdout(ds, [1], part)
        for m in MODALITIES:
            for name in ("train", "validation"):
                assert all(ds.get(m, sid).label != 1 for sid in held.ids(name, m))
            assert held.ids("test", m) == part.ids("test", m)
            assert any(ds.get(m, sid).label == 1 for sid in held.ids("test", m))

    def test_all_labels(self, setup):
        ds, part = setup
        with pytest.raises(EmptyTraining):
            new_event_holdout(ds, [0, 1, 2], part)

    def test_out_of_range(self, setup):
        ds, part = setup
        with pytest.raises(LabelError):
            new_event_holdout(ds, [7], part)


class TestManifest:

    def test_round_trip(self, tmp_path):
        ds = _dataset([0, 1, 2, 1], [2, 0, 1])
        loaded = load_manifest(write_manifest(ds, str(tmp_path / "data")))
        assert loaded.num_labels == ds.num_labels
        for m in MODALITIES:
            assert loaded.ids(m) == ds.ids(m)
            for a, b in zip(loaded.records(m), ds.records(m)):
                assert a.label == b.label and np.array_equal(a.features, b.features)

    def test_missing_manifest(self, tmp_path):
        with pytest.raises(DanglingReference):
            load_manifest(str(tmp_path / "nope.tsv"))

    def test_dangling_feature_file(self, tmp_path):
        manifest = tmp_path / "manifest.tsv"
        manifest.write_text("image\tmissing.tsv\n", encoding="utf-8")
        with pytest.raises(DanglingReference):
            load_manifest(str(manifest))

    def test_manifest_not_utf8(self, tmp_path):
        path = tmp_path / "manifest.tsv"
        path.write_bytes(b"# comment\nimage\tfeat\xe9.tsv\n")
        with pytest.raises(ParseError) as info:
            load_manifest(str(path))
        assert (info.value.path, info.value.line_no) == (str(path), 2)

    def test_unknown_modality(self, tmp_path):
        (tmp_path / "f.tsv").write_text("a\t0\t1,2\n", encoding="utf-8")
        manifest = tmp_path / "manifest.tsv"
        manifest.write_text("audio\tf.tsv\n", encoding="utf-8")
        with pytest.raises(ParseError):
            load_manifest(str(manifest))

    def test_label_count_disagreement(self, tmp_path):
        path = write_manifest(_dataset([0, 1, 2], [0, 1]), str(tmp_path))
        with pytest.warns(LabelCountWarning):
            ds = load_manifest(path)
        assert ds.num_labels == 3

    def test_label_gap(self, tmp_path):
        path = write_manifest(_dataset([0, 2], [2, 0]), str(tmp_path))
        with pytest.warns(LabelGapWarning):
            ds = load_manifest(path)
        assert ds.labels_present() == [0, 2]

    def test_contiguous_labels_do_not_warn(self, tmp_path):
        path = write_manifest(_dataset([0, 1], [1, 0]), str(tmp_path))
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            load_manifest(path)
