# src/data_loader/manifest_loader.py

import os
import warnings
from typing import Dict, List

from src.features import FeatureRecord, iter_text_lines, read_feature_file, write_feature_file
from src.utils.errors import DanglingReference, LabelCountWarning, LabelGapWarning, ParseError
from .base_loader import BaseDataLoader
from .records import MODALITIES, Dataset, Modality, SampleRecord, build_dataset

MANIFEST_NAME = "manifest.tsv"
FEATURE_FILE_NAMES = {Modality.IMAGE: "image_features.tsv", Modality.TEXT: "text_features.tsv"}


def _read_manifest_entries(path: str) -> List[tuple]:
    entries = []
    base_dir = os.path.dirname(os.path.abspath(path))
    for line_no, line in iter_text_lines(path):
        if not line.strip() or line.startswith('#'):
            continue
        parts = line.split('\t')
        if len(parts) != 2:
            raise ParseError(f"expected 'modality<TAB>feature_file_path', got {len(parts)} fields",
                             path=path, line_no=line_no)
        modality_str, feature_path = parts
        try:
            modality = Modality(modality_str.strip().lower())
        except ValueError:
            raise ParseError(f"unknown modality '{modality_str}'", path=path, line_no=line_no)
        if not os.path.isabs(feature_path):
            feature_path = os.path.join(base_dir, feature_path)
        if not os.path.isfile(feature_path):
            raise DanglingReference(f"{path}:{line_no}: feature file not found: {feature_path}")
        entries.append((modality, feature_path))
    return entries


def load_manifest(path: str) -> Dataset:
    """
    Loads every feature file the manifest references. K = max label + 1 over both modalities;
    label gaps and per-modality K disagreement are reported as warnings.
    """
    if not os.path.isfile(path):
        raise DanglingReference(f"manifest not found: {path}")

    by_modality: Dict[Modality, List[SampleRecord]] = {m: [] for m in MODALITIES}
    for modality, feature_path in _read_manifest_entries(path):
        records: List[FeatureRecord] = read_feature_file(feature_path)
        by_modality[modality].extend(
            SampleRecord(sample_id=r.sample_id, modality=modality, label=r.label, features=r.vector)
            for r in records
        )

    per_modality_k = {
        m: max(rec.label for rec in recs) + 1 for m, recs in by_modality.items() if recs
    }
    if len(set(per_modality_k.values())) > 1:
        warnings.warn(
            f"modalities disagree on label count {({str(m): k for m, k in per_modality_k.items()})}; using the max",
            LabelCountWarning,
        )

    dataset = build_dataset(by_modality[Modality.IMAGE], by_modality[Modality.TEXT])
    missing = sorted(set(range(dataset.num_labels)) - set(dataset.labels_present()))
    if missing:
        warnings.warn(f"labels {missing} have no samples in {path}", LabelGapWarning)
    return dataset


def write_manifest(dataset: Dataset, out_dir: str) -> str:
    """Writes one feature file per modality plus the manifest; returns the manifest path."""
    os.makedirs(out_dir, exist_ok=True)
    manifest_path = os.path.join(out_dir, MANIFEST_NAME)
    with open(manifest_path, 'w', encoding='utf-8', newline='\n') as f:
        for modality in MODALITIES:
            file_name = FEATURE_FILE_NAMES[modality]
            write_feature_file(
                os.path.join(out_dir, file_name),
                (FeatureRecord(sample_id=r.sample_id, label=r.label, vector=r.features)
                 for r in dataset.records(modality)),
            )
            f.write(f"{modality}\t{file_name}\n")
    return manifest_path


class ManifestLoader(BaseDataLoader):
    source_name = "manifest"

    def load_data(self) -> Dataset:
        manifest = self.config.manifest
        if not manifest:
            raise DanglingReference("data_source 'manifest' needs a 'manifest' path")
        dataset = load_manifest(manifest)
        print(f"✅ Loaded {len(dataset.image)} image / {len(dataset.text)} text records "
              f"(K={dataset.num_labels}) from {manifest}")
        return dataset
