# src/data_loader/__init__.py
from .records import MODALITIES, Dataset, Modality, ModalityData, SampleRecord, build_dataset
from .base_loader import BaseDataLoader
from .partition import DEFAULT_FRACTIONS, PART_NAMES, Partition, new_event_holdout, split
from .manifest_loader import (
    FEATURE_FILE_NAMES, MANIFEST_NAME, ManifestLoader, load_manifest, write_manifest,
)
