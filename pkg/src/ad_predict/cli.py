"""Command-line interface: one subcommand per pipeline stage.

    ad-predict ingest      validate and summarize a corpus
    ad-predict lexicon expand
                           seed list + synonym graph -> expanded lexicon file
    ad-predict featurize   corpus -> feature file
    ad-predict train       feature file + labels -> model file
    ad-predict predict     model file + feature file -> predictions file
    ad-predict evaluate    feature file + labels -> report
    ad-predict synth       synthetic dataset (and raw corpus with --raw)

Exit status is 0 on success, 1 when a stage fails on its input and 2 on
usage errors.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
import time
import uuid
from collections.abc import Callable, Sequence
from datetime import datetime
from functools import wraps
from pathlib import Path
from typing import Any

from ad_predict import __version__
from ad_predict.config import RunConfig, ensure_directories, load_config, require_paths
from ad_predict.corpus import corpus_anchor, load_corpus_file, load_labels, summarize
from ad_predict.errors import ADPredictError, ConfigError
from ad_predict.evaluation.harness import Protocol, evaluate
from ad_predict.evaluation.report import render_report, write_reports
from ad_predict.evaluation.synth import build_vocabulary, corpus_lines, synth_corpus, synth_generate
from ad_predict.features import featurize_corpus, join_labels, read_feature_file, write_feature_file
from ad_predict.learners import load_model, predict_codes, save_model, train_ensemble
from ad_predict.learners.ensemble import MEMBERS, EnsembleModel
from ad_predict.lexicons import (
    expand_lexicon,
    load_polarity,
    load_seed,
    load_synonyms,
    read_lexicon,
    write_lexicon,
)
from ad_predict.logging_config import StructuredLogger, configure_logging, correlation_id_var
from ad_predict.models import (
    AnxietyLexicon,
    Dataset,
    FeatureVector,
    ObservationWindow,
    PolarityLexicon,
    PrepResources,
)
from ad_predict.textprep import load_resources

logger = StructuredLogger(__name__)

MODEL_FILE = "ensemble.json"

Command = Callable[[RunConfig, argparse.Namespace], int]


def stage_handler(operation: str) -> Callable[[Command], Command]:
    """Decorator for stage commands with correlation ids and structured logging.

    Args:
        operation: Canonical operation name (e.g., "ad.featurize")
    """
    def decorator(func: Command) -> Command:
        @wraps(func)
        def wrapper(config: RunConfig, args: argparse.Namespace) -> int:
            correlation_id_var.set(str(uuid.uuid4()))
            start_time = time.time()
            logger.info(f"Starting {operation}", operation=operation, seed=config.seed)
            try:
                status = func(config, args)
                logger.info(
                    f"Completed {operation}",
                    operation=operation,
                    duration_ms=int((time.time() - start_time) * 1000),
                    success=True,
                )
                return status
            except Exception as e:
                logger.error(
                    f"Failed {operation}: {e}",
                    operation=operation,
                    duration_ms=int((time.time() - start_time) * 1000),
                    error=str(e),
                    error_type=type(e).__name__,
                    exc_info=not isinstance(e, ADPredictError),
                )
                raise
            finally:
                correlation_id_var.set(None)

        return wrapper
    return decorator


# --- Shared loading ---

def _prep_resources(config: RunConfig) -> PrepResources:
    return load_resources(
        config.paths.stopwords,
        config.paths.slang_map,
        config.paths.emoji_map,
        keep_hashtag_words=config.textprep.keep_hashtag_words,
    )


def _anxiety_lexicon(config: RunConfig) -> AnxietyLexicon:
    if config.paths.lexicon is not None:
        return read_lexicon(config.paths.lexicon)
    return expand_lexicon(load_seed(config.paths.anxiety_seed), load_synonyms(config.paths.synonyms))


def _lexicons(config: RunConfig) -> tuple[PrepResources, AnxietyLexicon, PolarityLexicon]:
    return _prep_resources(config), _anxiety_lexicon(config), load_polarity(config.paths.polarity)


def _required(value: Path | None, key: str) -> Path:
    if value is None:
        raise ConfigError(f"{key} is required for this command", key=key)
    return value


# --- Commands ---

@stage_handler("ad.ingest")
def cmd_ingest(config: RunConfig, args: argparse.Namespace) -> int:
    require_paths(config, "corpus")
    load = load_corpus_file(_required(config.paths.corpus, "paths.corpus"))
    summary = summarize(load)
    if load.skipped:
        summary["first_skipped"] = {"line": load.skipped[0].line_no, "reason": load.skipped[0].reason}
    print(json.dumps(summary, indent=2))
    return 0


@stage_handler("ad.lexicon.expand")
def cmd_lexicon_expand(config: RunConfig, args: argparse.Namespace) -> int:
    require_paths(config, "anxiety_seed", "synonyms")
    output = _required(args.output or config.paths.lexicon, "paths.lexicon")
    lexicon = expand_lexicon(load_seed(config.paths.anxiety_seed), load_synonyms(config.paths.synonyms))
    write_lexicon(lexicon, output)
    print(f"{len(lexicon)} stems written to {output}")
    return 0


@stage_handler("ad.featurize")
def cmd_featurize(config: RunConfig, args: argparse.Namespace) -> int:
    require_paths(config, "corpus", "stopwords", "slang_map", "emoji_map", "polarity")
    output = _required(config.paths.features, "paths.features")
    resources, anxiety, polarity = _lexicons(config)
    load = load_corpus_file(_required(config.paths.corpus, "paths.corpus"))

    anchor = config.window.anchor_utc()
    if anchor is None:
        anchor = corpus_anchor(load.timelines)
    vectors: dict[str, FeatureVector] = {}
    if anchor is not None:
        window = ObservationWindow(anchor_utc=anchor, span_days=config.window.span_days)
        vectors = featurize_corpus(load.timelines, window, resources, anxiety, polarity, config.features)
    write_feature_file(vectors, output)
    print(f"{len(vectors)} feature vectors written to {output}")
    return 0


def _labeled_dataset(config: RunConfig) -> Dataset:
    require_paths(config, "features", "labels")
    vectors = read_feature_file(_required(config.paths.features, "paths.features"))
    labels = load_labels(_required(config.paths.labels, "paths.labels"))
    return join_labels(vectors, labels)


@stage_handler("ad.train")
def cmd_train(config: RunConfig, args: argparse.Namespace) -> int:
    data = _labeled_dataset(config)
    model = train_ensemble(data, config.learners, config.seed)
    ensure_directories(config)
    path = config.paths.model_dir / MODEL_FILE
    save_model(model, path)
    print(f"model trained on {len(data)} users written to {path}")
    return 0


@stage_handler("ad.predict")
def cmd_predict(config: RunConfig, args: argparse.Namespace) -> int:
    require_paths(config, "features")
    model_path: Path = args.model or config.paths.model_dir / MODEL_FILE
    output = _required(config.paths.predictions, "paths.predictions")
    model = load_model(model_path)
    if not isinstance(model, EnsembleModel):
        raise ConfigError(f"expected an ensemble model, found '{model.kind}'", path=str(model_path))

    vectors = read_feature_file(_required(config.paths.features, "paths.features"))
    users = sorted(vectors)
    codes = [vectors[u].code for u in users]
    member_labels = {name: predict_codes(getattr(model, name), codes)[0] for name in MEMBERS}
    ensemble_labels, ensemble_scores = predict_codes(model, codes)

    output.parent.mkdir(parents=True, exist_ok=True)
    with open(output, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(("user_id", *MEMBERS, "ensemble", "ensemble_score"))
        for i, user_id in enumerate(users):
            writer.writerow((
                user_id,
                *(int(member_labels[name][i]) for name in MEMBERS),
                int(ensemble_labels[i]),
                f"{ensemble_scores[i]:.4f}",
            ))
    print(f"{len(users)} predictions written to {output}")
    return 0


@stage_handler("ad.evaluate")
def cmd_evaluate(config: RunConfig, args: argparse.Namespace) -> int:
    data = _labeled_dataset(config)
    protocol = Protocol.from_config(config.evaluation)
    report = evaluate(
        data,
        protocol,
        config.seed,
        config.learners,
        max_concurrent=config.evaluation.max_concurrent_folds,
    )
    ensure_directories(config)
    write_reports(report, config.paths.report_dir)
    sys.stdout.write(render_report(report))
    return 0


@stage_handler("ad.synth")
def cmd_synth(config: RunConfig, args: argparse.Namespace) -> int:
    out_dir: Path = args.out_dir
    dataset = synth_generate(args.users, args.rule, args.noise, config.seed)

    out_dir.mkdir(parents=True, exist_ok=True)
    write_feature_file({row.user_id: row.features for row in dataset.rows}, out_dir / "features.csv")
    with open(out_dir / "labels.csv", "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(("user_id", "label"))
        writer.writerows((row.user_id, row.label) for row in dataset.rows)

    if args.raw:
        resources, anxiety, polarity = _lexicons(config)
        vocabulary = build_vocabulary(resources, anxiety, polarity)
        tweets = synth_corpus(dataset, vocabulary, config.features)
        (out_dir / "corpus.jsonl").write_text("\n".join(corpus_lines(tweets)) + "\n", encoding="utf-8")

    print(f"{len(dataset)} synthetic users written to {out_dir}")
    return 0


# --- Argument parsing ---

def _rfc3339(value: str) -> datetime:
    try:
        return datetime.fromisoformat(value)
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"not an RFC 3339 timestamp: {value!r}") from e


def _fraction(value: str) -> float:
    number = float(value)
    if not 0.0 < number < 1.0:
        raise argparse.ArgumentTypeError(f"must be between 0 and 1, got {value}")
    return number


def _non_negative(value: str) -> int:
    number = int(value)
    if number < 0:
        raise argparse.ArgumentTypeError(f"must be non-negative, got {value}")
    return number


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", type=Path, help="YAML run configuration")
    common.add_argument("--seed", type=_non_negative, help="random seed (overrides config)")
    common.add_argument("--log-level", choices=("DEBUG", "INFO", "WARNING", "ERROR"))

    window = argparse.ArgumentParser(add_help=False)
    window.add_argument("--window-days", type=int, help="observation window length in days")
    window.add_argument("--anchor", type=_rfc3339, help="window end (RFC 3339); default: latest tweet")

    protocol = argparse.ArgumentParser(add_help=False)
    protocol.add_argument("--protocol", choices=("holdout", "kfold"))
    protocol.add_argument("--train-fraction", type=_fraction)
    protocol.add_argument("--k", type=int)

    parser = argparse.ArgumentParser(prog="ad-predict", description="Anxious depression prediction pipeline")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("ingest", parents=[common], help="validate and summarize a corpus")
    p.add_argument("--corpus", type=Path)
    p.set_defaults(handler=cmd_ingest, input_key="corpus")

    p = sub.add_parser("lexicon", help="anxiety lexicon tools")
    lexicon_sub = p.add_subparsers(dest="lexicon_command", required=True)
    p = lexicon_sub.add_parser("expand", parents=[common], help="expand the seed list by one synonym hop")
    p.add_argument("--seed-words", type=Path, dest="anxiety_seed")
    p.add_argument("--synonyms", type=Path)
    p.add_argument("--output", type=Path)
    p.set_defaults(handler=cmd_lexicon_expand, input_key="anxiety_seed")

    p = sub.add_parser("featurize", parents=[common, window], help="corpus -> feature file")
    p.add_argument("--corpus", type=Path)
    p.add_argument("--lexicon", type=Path)
    p.add_argument("--output", type=Path, dest="features")
    p.set_defaults(handler=cmd_featurize, input_key="corpus")

    p = sub.add_parser("train", parents=[common], help="feature file + labels -> model")
    p.add_argument("--features", type=Path)
    p.add_argument("--labels", type=Path)
    p.add_argument("--model-dir", type=Path)
    p.set_defaults(handler=cmd_train, input_key="features")

    p = sub.add_parser("predict", parents=[common], help="model + feature file -> predictions")
    p.add_argument("--model", type=Path)
    p.add_argument("--features", type=Path)
    p.add_argument("--output", type=Path, dest="predictions")
    p.set_defaults(handler=cmd_predict, input_key="features")

    p = sub.add_parser("evaluate", parents=[common, protocol], help="cross-validate all classifiers")
    p.add_argument("--features", type=Path)
    p.add_argument("--labels", type=Path)
    p.add_argument("--report-dir", type=Path)
    p.set_defaults(handler=cmd_evaluate, input_key="features")

    p = sub.add_parser("synth", parents=[common], help="generate a synthetic dataset")
    p.add_argument("--users", type=int, default=200)
    p.add_argument("--rule", default="w or (t and s)")
    p.add_argument("--noise", type=float, default=0.0)
    p.add_argument("--raw", action="store_true", help="also write a raw tweet corpus")
    p.add_argument("--out-dir", type=Path, required=True)
    p.set_defaults(handler=cmd_synth, input_key="out_dir")

    return parser


_PATH_FLAGS = (
    "corpus", "labels", "features", "predictions", "anxiety_seed", "synonyms", "lexicon",
    "model_dir", "report_dir",
)


def apply_overrides(config: RunConfig, args: argparse.Namespace) -> RunConfig:
    """Command-line flags win over config file values."""
    paths = {name: getattr(args, name) for name in _PATH_FLAGS if getattr(args, name, None) is not None}
    window: dict[str, Any] = {}
    if getattr(args, "window_days", None) is not None:
        window["span_days"] = args.window_days
    if getattr(args, "anchor", None) is not None:
        window["anchor"] = args.anchor
    evaluation: dict[str, Any] = {}
    for flag, key in (("protocol", "protocol"), ("train_fraction", "train_fraction"), ("k", "k")):
        if getattr(args, flag, None) is not None:
            evaluation[key] = getattr(args, flag)

    data = config.model_dump()
    data["paths"].update(paths)
    data["window"].update(window)
    data["evaluation"].update(evaluation)
    if args.seed is not None:
        data["seed"] = args.seed
    if args.log_level is not None:
        data["log_level"] = args.log_level
    try:
        return RunConfig(**data)
    except ValueError as e:
        raise ConfigError(f"invalid command-line value: {e}") from e


def _input_name(config: RunConfig, args: argparse.Namespace) -> str:
    key = args.input_key
    value = getattr(args, key, None) or getattr(config.paths, key, None)
    return str(value) if value is not None else "<unset>"


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)

    stage = args.command if args.command != "lexicon" else f"lexicon {args.lexicon_command}"
    config: RunConfig | None = None
    try:
        config = apply_overrides(load_config(args.config), args)
        configure_logging(
            log_level=config.log_level,
            structured=config.structured_logging,
            log_file=config.log_file,
        )
        return int(args.handler(config, args))
    except (ADPredictError, OSError) as e:
        where = _input_name(config, args) if config is not None else str(args.config)
        print(f"error: {stage} failed on {where}: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
