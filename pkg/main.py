# main.py

import os
import sys
import argparse
from dataclasses import replace

import yaml
from dotenv import load_dotenv
load_dotenv()

from rich.console import Console
from rich.table import Table

from src.data_loader import MODALITIES, Modality, ManifestLoader, new_event_holdout, split
from src.datagen import SyntheticLoader, write_synthetic
from src.evaluator import DIRECTION_TITLES, DIRECTIONS, MAPEvaluator
from src.features import Vocabulary, featurize_corpus, read_corpus, tfidf_fit, write_feature_file
from src.network import load_params, save_params
from src.retrieval import EmbeddingIndex, EmbeddingKind, rank, write_map_report, write_per_query
from src.trainer import train, write_train_log_csv, write_val_curve_csv
from src.utils.config import load_run_config, require_path
from src.utils.errors import ConfigError, S3CAError, UnknownQueryId
from src.utils.logger import TxtLogger

DATA_LOADERS = {
    "synthetic": SyntheticLoader,
    "manifest": ManifestLoader,
}
EVALUATORS = {"map": MAPEvaluator}

console = Console()


def load_dataset(config):
    if config.data_source == "manifest":
        require_path(config, "manifest")
    return DATA_LOADERS[config.data_source](config).load_data()


def prepare_run_dir(config) -> str:
    run_dir = config.run_dir()
    os.makedirs(run_dir, exist_ok=True)
    print(f"Outputs will be saved in: {run_dir}")
    return run_dir


def model_path(config, run_dir: str) -> str:
    return config.model or os.path.join(run_dir, "model.npz")


# 모델 옆에 학습 때의 split (seed, fractions) 기록
def split_record_path(model_file: str) -> str:
    return os.path.splitext(model_file)[0] + ".split.yaml"


def write_split_record(config, model_file: str) -> str:
    path = split_record_path(model_file)
    with open(path, 'w', encoding='utf-8') as f:
        yaml.safe_dump({"seed": config.seed, "split_fractions": list(config.split_fractions)}, f)
    return path


def use_training_split(config, model_file: str):
    """
    Returns ``config`` with the seed and split fractions the model was trained with, so eval and
    retrieve score the same test partition. Models without a split record are used as-is.
    """
    path = split_record_path(model_file)
    if not os.path.isfile(path):
        return config
    with open(path, 'r', encoding='utf-8') as f:
        recorded = yaml.safe_load(f) or {}
    try:
        trained = {"seed": int(recorded["seed"]),
                   "split_fractions": [float(v) for v in recorded["split_fractions"]]}
    except (KeyError, TypeError, ValueError):
        raise ConfigError(f"{path}: expected 'seed' and 'split_fractions'")
    changed = {k: v for k, v in trained.items() if getattr(config, k) != v}
    if changed:
        current = {k: getattr(config, k) for k in changed}
        print(f"⚠️ Model was trained with {changed}, not {current}; using the training split")
        config = replace(config, **changed)
    return config


def print_map_table(title: str, rows):
    table = Table(title=title)
    for col in ("direction", "metric", "map", "num_queries", "num_skipped"):
        table.add_column(col, justify="right" if col not in ("direction", "metric") else "left")
    for row in rows:
        table.add_row(DIRECTION_TITLES.get(row["direction"], row["direction"]), row["metric"],
                      f"{float(row['map']):.4f}", str(row["num_queries"]), str(row["num_skipped"]))
    console.print(table)


# ---------------------------------------------------------------- commands

def cmd_featurize_text(config, args) -> int:
    docs = read_corpus(args.corpus)
    if args.vocab:
        vocab = Vocabulary.load(args.vocab)
        print(f"✅ Using fixed vocabulary from {args.vocab}")
    else:
        vocab = tfidf_fit([d.text for d in docs], top_k=args.top_k)

    out_path = args.output or os.path.join(prepare_run_dir(config), "text_features.tsv")
    os.makedirs(os.path.dirname(os.path.abspath(out_path)), exist_ok=True)
    write_feature_file(out_path, featurize_corpus(docs, vocab))
    vocab_path = os.path.join(os.path.dirname(os.path.abspath(out_path)), "vocab.tsv")
    if not args.vocab:
        vocab.save(vocab_path)
    print(f"✅ Vocabulary size: {len(vocab)}, N={vocab.n_docs}")
    print(f"✅ Text features saved to: {out_path}")
    return 0


def cmd_gen_synth(config, args) -> int:
    out_dir = args.output or os.path.join(prepare_run_dir(config), "data")
    manifest = write_synthetic(config.synth_spec(), out_dir)
    print(f"✅ Synthetic manifest saved to: {manifest}")
    return 0


def _train_and_save(config, dataset, partition, run_dir: str):
    train_cfg = config.train_config()
    logger = TxtLogger(os.path.join(run_dir, "run_log.txt"), train_cfg.epochs, header=config.to_dict())
    validation = None
    if config.monitor_validation:
        validation = tuple(dataset.select(m, partition.validation[m]) for m in MODALITIES)

    print(f"🚀 Training: alignment={train_cfg.alignment.kind}, epochs={train_cfg.epochs}, seed={train_cfg.seed}")
    params, log = train(
        dataset.select(Modality.IMAGE, partition.train[Modality.IMAGE]),
        dataset.select(Modality.TEXT, partition.train[Modality.TEXT]),
        dataset.num_labels, train_cfg,
        validation=validation, logger=logger, show_progress=config.show_progress,
    )

    path = model_path(config, run_dir)
    save_params(params, path)
    write_split_record(config, path)
    csv_path = write_train_log_csv(log, os.path.join(run_dir, "train_log.csv"))
    if config.monitor_validation:
        write_val_curve_csv(log, os.path.join(run_dir, "val_curve.csv"))
    print(f"✅ Model saved to: {path}")
    print(f"✅ Training log saved to: {csv_path}")
    return params, logger


def cmd_train(config, args) -> int:
    run_dir = prepare_run_dir(config)
    dataset = load_dataset(config)
    partition = split(dataset, config.split_fractions, config.seed)
    _train_and_save(config, dataset, partition, run_dir)
    return 0


def _write_report(report, run_dir: str, name: str, per_query: bool):
    rows = report.rows()
    path = write_map_report(rows, os.path.join(run_dir, f"{name}.csv"))
    if per_query:
        for (direction, metric), result in report.results.items():
            write_per_query(result, os.path.join(run_dir, f"{name}_{direction}_{metric}_per_query.csv"))
    return rows, path


def cmd_eval(config, args) -> int:
    run_dir = prepare_run_dir(config)
    model_file = require_path(config, "model") if config.model else model_path(config, run_dir)
    params = load_params(model_file)
    config = use_training_split(config, model_file)
    dataset = load_dataset(config)
    partition = split(dataset, config.split_fractions, config.seed)

    evaluator = EVALUATORS["map"](config)
    report = evaluator.evaluate(params, dataset, partition.test)
    rows, path = _write_report(report, run_dir, "map_report", config.per_query)
    print_map_table("MAP (test partition)", rows)
    TxtLogger(os.path.join(run_dir, "eval_log.txt"), 0).log_report("MAP REPORT", rows)
    print(f"✅ MAP report saved to: {path}")
    return 0


def cmd_retrieve(config, args) -> int:
    run_dir = prepare_run_dir(config)
    model_file = require_path(config, "model") if config.model else model_path(config, run_dir)
    params = load_params(model_file)
    config = use_training_split(config, model_file)
    dataset = load_dataset(config)
    partition = split(dataset, config.split_fractions, config.seed)

    query_modality = next((m for m in MODALITIES if args.query_id in partition.test[m]), None)
    if query_modality is None:
        raise UnknownQueryId(f"'{args.query_id}' is not in the test partition of either modality")
    candidate_modality = query_modality.other
    metric = config.metrics()[0]
    kind = EmbeddingKind(config.embedding_kind)

    query = EmbeddingIndex.from_data(params.branch(query_modality),
                                     dataset.select(query_modality, [args.query_id]), kind)
    index = EmbeddingIndex.from_data(params.branch(candidate_modality),
                                     dataset.select(candidate_modality, partition.test[candidate_modality]), kind)
    ranking = rank(query.embeddings[0], index, metric, query_id=args.query_id, query_label=int(query.labels[0]))

    k = min(config.top_k, len(ranking))
    table = Table(title=f"Top-{k} {candidate_modality} for {query_modality} '{args.query_id}' "
                        f"(label {int(query.labels[0])}, {metric})")
    for col in ("rank", "id", "label", "score", "relevant"):
        table.add_column(col)
    for i in range(k):
        table.add_row(str(i + 1), ranking.ids[i], str(int(ranking.labels[i])),
                      f"{ranking.scores[i]:.6f}", "✅" if ranking.relevant[i] else "")
    console.print(table)
    if ranking.skipped:
        print(f"⚠️ {len(ranking.skipped)} candidates skipped (degenerate under {metric})")
    return 0


def cmd_holdout_eval(config, args) -> int:
    run_dir = prepare_run_dir(config)
    dataset = load_dataset(config)
    held = sorted(set(config.held_labels))
    base = split(dataset, config.split_fractions, config.seed)
    partition = new_event_holdout(dataset, held, base)
    print(f"🚀 New-event holdout: held labels {held}")

    params, logger = _train_and_save(config, dataset, partition, run_dir)
    evaluator = EVALUATORS["map"](config)
    indices = evaluator.build_indices(params, dataset, partition.test)

    if not held:
        report = evaluator.evaluate(params, dataset, partition.test, indices=indices)
        rows, path = _write_report(report, run_dir, "map_report", config.per_query)
        print_map_table("MAP (no held labels)", rows)
        logger.log_report("MAP REPORT", rows)
        print(f"✅ MAP report saved to: {path}")
        return 0

    seen = [l for l in range(dataset.num_labels) if l not in held]
    logger.log_message(f"New-event holdout: held labels {held}, seen labels {seen}")
    for name, labels in (("held", held), ("seen", seen)):
        report = evaluator.evaluate(params, dataset, partition.test, query_labels=labels, indices=indices)
        rows, path = _write_report(report, run_dir, f"map_report_{name}", config.per_query)
        print_map_table(f"MAP ({name}-label queries)", rows)
        logger.log_report(f"MAP REPORT ({name.upper()} LABELS {labels})", rows)
        print(f"✅ {name} report saved to: {path}")
    return 0


COMMANDS = {
    "featurize-text": cmd_featurize_text,
    "gen-synth": cmd_gen_synth,
    "train": cmd_train,
    "eval": cmd_eval,
    "retrieve": cmd_retrieve,
    "holdout-eval": cmd_holdout_eval,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(description="Shared semantic space training and cross-modal retrieval")
    parser.add_argument("--config", default=None, help="Path to a flat YAML configuration file.")
    parser.add_argument("--seed", type=int, default=None, help="Overrides the config seed.")
    parser.add_argument("--out", default=None, help="Overrides the output directory.")
    parser.add_argument("--max_workers", type=int, default=None, help="Threads used for query evaluation.")
    parser.add_argument("--no_progress", action="store_true", help="Disable progress bars.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("featurize-text", help="TF-IDF features for an id<TAB>label<TAB>text corpus.")
    p.add_argument("corpus", help="Corpus file, one document per line.")
    p.add_argument("--output", default=None, help="Feature file to write.")
    p.add_argument("--top_k", type=int, default=None, help="Keep the k most frequent tokens (by df).")
    p.add_argument("--vocab", default=None, help="Transform against an existing vocab.tsv instead of fitting.")

    p = sub.add_parser("gen-synth", help="Write the synthetic dataset as manifest + feature files.")
    p.add_argument("--output", default=None, help="Directory to write into.")

    p = sub.add_parser("train", help="Train both branches and write the model and per-epoch log.")
    p.add_argument("--alignment", default=None, help="none | coral | mmd | triplet")
    p.add_argument("--epochs", type=int, default=None)
    p.add_argument("--monitor_validation", action="store_true", default=None,
                   help="Record validation MAP after every epoch (val_curve.csv).")

    p = sub.add_parser("eval", help="MAP on the test partition.")
    p.add_argument("--model", default=None)
    p.add_argument("--metric", default=None, help="kl | euclidean | cosine | nc | all")
    p.add_argument("--direction", default=None, help="i2t | t2i | both")
    p.add_argument("--per_query", action="store_true", default=None, help="Also dump per-query AP.")

    p = sub.add_parser("retrieve", help="Top-k cross-modal results for one test query.")
    p.add_argument("query_id")
    p.add_argument("--model", default=None)
    p.add_argument("--metric", default=None)
    p.add_argument("--k", dest="top_k", type=int, default=None)

    p = sub.add_parser("holdout-eval", help="Train without some events, then score held vs. seen queries.")
    p.add_argument("--held", dest="held_labels", type=int, nargs="*", default=None)
    p.add_argument("--alignment", default=None)
    p.add_argument("--epochs", type=int, default=None)
    p.add_argument("--metric", default=None)
    return parser


_OVERRIDE_KEYS = ("alignment", "epochs", "monitor_validation", "model", "metric", "direction",
                  "per_query", "top_k", "held_labels", "max_workers")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    overrides = {key: getattr(args, key, None) for key in _OVERRIDE_KEYS}
    overrides.update(seed=args.seed, output_dir=args.out)
    if args.no_progress:
        overrides["show_progress"] = False

    try:
        config = load_run_config(args.config, overrides)
        return COMMANDS[args.command](config, args)
    except S3CAError as e:
        print(f"🚨 {type(e).__name__}: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
