# scripts/run_ablation.py
"""
Alignment ablation: none / coral / mmd / triplet on the synthetic dataset over several seeds.
Writes ablation.csv and prints how often CORAL beats no alignment.

Usage: python scripts/run_ablation.py --config configs/synth_coral.yaml --seeds 0 1 2 3 4 5 6 7 8 9
"""

import argparse
import os
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent.parent))

from dotenv import load_dotenv
load_dotenv()

from rich.console import Console
from rich.table import Table

from src.alignment import ALIGNMENT_NAMES
from src.evaluator import run_ablation, win_counts, write_ablation_csv
from src.utils.config import load_run_config
from src.utils.errors import S3CAError


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description="Alignment ablation on synthetic data")
    parser.add_argument("--config", default=None, help="Base configuration (synthetic spec + training).")
    parser.add_argument("--seeds", type=int, nargs="+", default=list(range(10)))
    parser.add_argument("--alignments", nargs="+", default=list(ALIGNMENT_NAMES), choices=ALIGNMENT_NAMES)
    parser.add_argument("--epochs", type=int, default=None)
    parser.add_argument("--out", default=None, help="Output directory (default: <output_dir>/ablation).")
    args = parser.parse_args(argv)

    try:
        config = load_run_config(args.config, {"epochs": args.epochs, "experiment_name": "ablation",
                                               "output_dir": args.out})
        print(f"🚀 Ablation: alignments={args.alignments}, seeds={args.seeds}")
        rows = run_ablation(config, args.seeds, args.alignments)
    except S3CAError as e:
        print(f"🚨 {type(e).__name__}: {e}", file=sys.stderr)
        return 1

    path = write_ablation_csv(rows, os.path.join(config.run_dir(), "ablation.csv"))
    table = Table(title="Alignment ablation (cosine MAP, test partition)")
    for col in ("alignment", "mean fc2 CORAL", "mean MAP i2t", "mean MAP t2i", "mean MAP"):
        table.add_column(col)
    for alignment in args.alignments:
        sub = [r for r in rows if r.alignment == alignment]
        n = len(sub)
        table.add_row(alignment,
                      f"{sum(r.final_coral_fc2 for r in sub) / n:.3e}",
                      f"{sum(r.map_i2t for r in sub) / n:.4f}",
                      f"{sum(r.map_t2i for r in sub) / n:.4f}",
                      f"{sum(r.map_avg for r in sub) / n:.4f}")
    Console().print(table)

    counts = win_counts(rows)
    if counts["seeds"]:
        print(f"CORAL fc2 distance <= 0.5 x none : {counts['fc2']}/{counts['seeds']} seeds")
        print(f"CORAL MAP >= none               : {counts['map']}/{counts['seeds']} seeds")
    print(f"✅ Ablation results saved to: {path}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
