"""Splits, metrics, the evaluation harness and synthetic data."""

from ad_predict.evaluation.harness import CLASSIFIERS, EvalReport, Protocol, evaluate, evaluate_async
from ad_predict.evaluation.metrics import FoldAverage, Metrics, compute_metrics
from ad_predict.evaluation.splits import kfold, split
from ad_predict.evaluation.synth import build_vocabulary, parse_rule, synth_corpus, synth_generate

__all__ = [
    "CLASSIFIERS",
    "EvalReport",
    "FoldAverage",
    "Metrics",
    "Protocol",
    "build_vocabulary",
    "compute_metrics",
    "evaluate",
    "evaluate_async",
    "kfold",
    "parse_rule",
    "split",
    "synth_corpus",
    "synth_generate",
]
