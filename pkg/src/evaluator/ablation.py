# src/evaluator/ablation.py
"""
Alignment ablation on the synthetic dataset: every alignment kind trained on the same data
and seed, compared by final fc2 CORAL distance and cosine test MAP.
"""

import csv
import os
from dataclasses import dataclass, replace
from typing import Dict, Iterable, List, Sequence

from src.data_loader import MODALITIES, Modality, split
from src.datagen import SyntheticLoader
from src.retrieval import Metric
from src.trainer import train
from .map_evaluator import MAPEvaluator

ABLATION_HEADER = ["seed", "alignment", "final_coral_fc2", "map_i2t", "map_t2i", "map_avg"]


@dataclass(frozen=True)
class AblationRow:
    seed: int
    alignment: str
    final_coral_fc2: float
    map_i2t: float
    map_t2i: float

    @property
    def map_avg(self) -> float:
        return (self.map_i2t + self.map_t2i) / 2.0


def run_variant(config, alignment: str, seed: int) -> AblationRow:
    """Train one alignment kind on the synthetic dataset of ``seed`` and score its test partition."""
    config = replace(config, alignment=alignment, seed=seed, data_source="synthetic",
                     monitor_validation=False, show_progress=False)
    dataset = SyntheticLoader(config).load_data()
    partition = split(dataset, config.split_fractions, seed)
    params, log = train(
        dataset.select(Modality.IMAGE, partition.train[Modality.IMAGE]),
        dataset.select(Modality.TEXT, partition.train[Modality.TEXT]),
        dataset.num_labels, config.train_config(),
    )
    report = MAPEvaluator(config).evaluate(params, dataset, {m: partition.test[m] for m in MODALITIES},
                                           metrics=[Metric.COSINE], directions=["i2t", "t2i"])
    final_fc2 = log.records[-1].coral_fc2 if len(log) else float("nan")
    return AblationRow(
        seed=seed, alignment=alignment, final_coral_fc2=final_fc2,
        map_i2t=report.get("i2t", Metric.COSINE).map, map_t2i=report.get("t2i", Metric.COSINE).map,
    )


def run_ablation(config, seeds: Iterable[int], alignments: Sequence[str]) -> List[AblationRow]:
    rows = []
    for seed in seeds:
        for alignment in alignments:
            row = run_variant(config, alignment, seed)
            print(f"  seed={seed:<4} {alignment:<8} coral_fc2={row.final_coral_fc2:.3e} map={row.map_avg:.4f}")
            rows.append(row)
    return rows


def win_counts(rows: Sequence[AblationRow], fc2_ratio: float = 0.5) -> Dict[str, int]:
    """
    Per seed, CORAL against no alignment:
      - ``fc2``: CORAL's final fc2 distance <= ``fc2_ratio`` x the unaligned one
      - ``map``: CORAL's average MAP >= the unaligned one
    """
    by_seed: Dict[int, Dict[str, AblationRow]] = {}
    for row in rows:
        by_seed.setdefault(row.seed, {})[row.alignment] = row
    counts = {"seeds": 0, "fc2": 0, "map": 0}
    for variants in by_seed.values():
        if "coral" not in variants or "none" not in variants:
            continue
        coral, none = variants["coral"], variants["none"]
        counts["seeds"] += 1
        counts["fc2"] += int(coral.final_coral_fc2 <= fc2_ratio * none.final_coral_fc2)
        counts["map"] += int(coral.map_avg >= none.map_avg)
    return counts


def write_ablation_csv(rows: Sequence[AblationRow], path: str) -> str:
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(ABLATION_HEADER)
        for r in rows:
            writer.writerow([r.seed, r.alignment, f"{r.final_coral_fc2:.12g}",
                             f"{r.map_i2t:.12g}", f"{r.map_t2i:.12g}", f"{r.map_avg:.12g}"])
    return path
