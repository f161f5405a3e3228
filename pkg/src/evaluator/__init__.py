# src/evaluator/__init__.py

from .base_evaluator import BaseEvaluator
from .map_evaluator import DIRECTION_TITLES, DIRECTIONS, EvaluationReport, MAPEvaluator, check_compatible
from .ablation import ABLATION_HEADER, AblationRow, run_ablation, run_variant, win_counts, write_ablation_csv
