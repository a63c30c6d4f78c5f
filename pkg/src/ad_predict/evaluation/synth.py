"""Synthetic labeled datasets with a planted rule, and raw corpora that featurize back to them.

The raw corpus is laid out in each user's local time starting from a base date
(day d = base date + d days):

- w: day 6 at 09:00, an anxiety word with no polarity (a filler word otherwise)
- t: `min_odd_posts` filler tweets at odd hours, one per (day, hour) bucket
- f: `min_hourly_posts` filler tweets within day 4, 14:00
- s/c: polar events at 12:00, spaced more than one contrast window apart
    - s=0 c=1: one positive tweet
    - s=1 c=1: enough lone negative tweets to reach the negative share
    - s=1 c=0: pairs of a positive and a negative tweet with one timestamp
- two filler tweets on days 27 and 28 at 19:00 and 20:00

Users cycle through the UTC offsets in OFFSETS_MINUTES.
"""

from __future__ import annotations

import ast
import json
import math
from collections.abc import Callable, Sequence
from dataclasses import dataclass
from datetime import UTC, date, datetime, timedelta, timezone

import numpy as np

from ad_predict.config import FeatureConfig
from ad_predict.errors import ContractError, SynthError
from ad_predict.learners.base import make_rng
from ad_predict.lexicons import contains_anxiety_stem, word_polarity
from ad_predict.logging_config import StructuredLogger
from ad_predict.models import (
    FEATURE_NAMES,
    N_FEATURES,
    AnxietyLexicon,
    Dataset,
    DatasetRow,
    FeatureVector,
    PolarityLexicon,
    PrepResources,
    Tweet,
)
from ad_predict.textprep import preprocess

logger = StructuredLogger(__name__)

Rule = Callable[[FeatureVector], bool]

OFFSETS_MINUTES = (0, 330, -300, 60)
BASE_DATE = date(2019, 1, 1)
LAST_DAY = 28

ANXIETY_CANDIDATES = ("insomnia", "restless", "panic", "afraid", "worthless", "tired", "sleepless")
POSITIVE_CANDIDATES = ("happy", "wonderful", "great", "joy", "glad", "cheerful", "excellent", "love")
NEGATIVE_CANDIDATES = ("gloomy", "terrible", "miserable", "dreadful", "horrible", "angry")
FILLER_CANDIDATES = (
    "coffee", "garden", "pizza", "guitar", "weather", "museum", "bicycle", "library", "river",
)


# --- Rules ---

_ALLOWED_NODES = (ast.Expression, ast.BoolOp, ast.And, ast.Or, ast.UnaryOp, ast.Not, ast.Name,
                  ast.Load, ast.Constant)


def parse_rule(expression: str) -> Rule:
    """Compile a boolean rule over w, t, f, s, c, e.g. "w or (t and s)".

    Raises:
        ContractError: anything other than the five names, 0/1/True/False,
            and/or/not and parentheses
    """
    try:
        tree = ast.parse(expression.strip(), mode="eval")
    except SyntaxError as e:
        raise ContractError(f"rule {expression!r} is not a boolean expression") from e

    for node in ast.walk(tree):
        if not isinstance(node, _ALLOWED_NODES):
            raise ContractError(f"rule {expression!r} uses unsupported syntax {type(node).__name__}")
        if isinstance(node, ast.Name) and node.id not in FEATURE_NAMES:
            raise ContractError(f"rule {expression!r} names unknown feature {node.id!r}")
        if isinstance(node, ast.Constant) and node.value not in (0, 1):
            raise ContractError(f"rule {expression!r} uses constant {node.value!r}")

    def evaluate(node: ast.expr, fv: FeatureVector) -> bool:
        if isinstance(node, ast.BoolOp):
            values = (evaluate(v, fv) for v in node.values)
            return all(values) if isinstance(node.op, ast.And) else any(values)
        if isinstance(node, ast.UnaryOp):
            return not evaluate(node.operand, fv)
        if isinstance(node, ast.Name):
            return bool(getattr(fv, node.id))
        assert isinstance(node, ast.Constant)
        return bool(node.value)

    body = tree.body
    return lambda fv: evaluate(body, fv)


# --- Feature-level datasets ---

def synth_generate(
    n_users: int,
    rule: Rule | str,
    noise_rate: float = 0.0,
    seed: int = 0,
    bit_probabilities: Sequence[float] | None = None,
) -> Dataset:
    """Draw feature vectors and label them by the rule, flipping labels at noise_rate.

    Bits are uniform unless per-bit probabilities are given. Users are named
    u00000, u00001, ...
    """
    if n_users < 1:
        raise ContractError(f"n_users must be positive, got {n_users}")
    if not 0.0 <= noise_rate < 0.5:
        raise ContractError(f"noise_rate must be in [0, 0.5), got {noise_rate}")
    probabilities = np.full(N_FEATURES, 0.5) if bit_probabilities is None else np.asarray(
        bit_probabilities, dtype=np.float64
    )
    if probabilities.shape != (N_FEATURES,) or np.any((probabilities < 0) | (probabilities > 1)):
        raise ContractError("bit_probabilities must be five values in [0, 1]")

    planted = parse_rule(rule) if isinstance(rule, str) else rule
    rng = make_rng(seed)
    bits = (rng.random((n_users, N_FEATURES)) < probabilities).astype(int)
    flips = rng.random(n_users) < noise_rate

    rows = []
    for i in range(n_users):
        fv = FeatureVector.from_bits(bits[i].tolist())
        label = int(planted(fv)) ^ int(flips[i])
        rows.append(DatasetRow(user_id=f"u{i:05d}", features=fv, label=label))
    return Dataset(rows=rows)


# --- Raw corpora ---

@dataclass(frozen=True)
class SynthVocabulary:
    """Single words checked to behave as intended in the real pipeline."""
    anxiety: tuple[str, ...]
    positive: tuple[str, ...]
    negative: tuple[str, ...]
    filler: tuple[str, ...]


def build_vocabulary(
    resources: PrepResources,
    anxiety: AnxietyLexicon,
    polarity: PolarityLexicon,
    anxiety_candidates: Sequence[str] = ANXIETY_CANDIDATES,
    positive_candidates: Sequence[str] = POSITIVE_CANDIDATES,
    negative_candidates: Sequence[str] = NEGATIVE_CANDIDATES,
    filler_candidates: Sequence[str] = FILLER_CANDIDATES,
) -> SynthVocabulary:
    """Keep the candidates that preprocess to exactly one stem of the right kind.

    Raises:
        SynthError: a category has no usable word
    """
    def single_stem(word: str) -> str | None:
        sample = Tweet(tweet_id="sample", user_id="sample", created_at_utc=1, text=word)
        stems = preprocess(sample, resources).stems
        return stems[0] if len(stems) == 1 else None

    def keep(candidates: Sequence[str], in_lexicon: bool, sign: int | None) -> tuple[str, ...]:
        kept = []
        for word in candidates:
            s = single_stem(word)
            if s is None or contains_anxiety_stem(anxiety, s) != in_lexicon:
                continue
            if sign is None and polarity.get(s) is not None:
                continue
            if sign is not None and word_polarity(s, polarity) != sign:
                continue
            kept.append(word)
        return tuple(kept)

    vocabulary = SynthVocabulary(
        anxiety=keep(anxiety_candidates, True, None),
        positive=keep(positive_candidates, False, 1),
        negative=keep(negative_candidates, False, -1),
        filler=keep(filler_candidates, False, None),
    )
    for category in ("anxiety", "positive", "negative", "filler"):
        if not getattr(vocabulary, category):
            raise SynthError(f"no usable {category} word among the candidates")
    logger.debug(
        "Synthetic vocabulary built",
        stage="synth",
        **{category: len(getattr(vocabulary, category))
           for category in ("anxiety", "positive", "negative", "filler")},
    )
    return vocabulary


def _check_config(config: FeatureConfig) -> None:
    fixed_hours = (9, 12, 14, 19, 20)
    clashes = [h for h in fixed_hours if config.odd_hour_lo <= h < config.odd_hour_hi]
    if clashes:
        raise SynthError(f"odd hours [{config.odd_hour_lo}, {config.odd_hour_hi}) cover hour {clashes[0]}")
    if config.min_hourly_posts < 3:
        raise SynthError("min_hourly_posts below 3 cannot keep paired events out of a burst")
    if config.min_hourly_posts > 60:
        raise SynthError("min_hourly_posts above 60 does not fit in one hour at minute spacing")
    if config.require_mixed_sign_window:
        raise SynthError("lone polar tweets cannot set c when windows must hold both signs")
    if config.neg_share_threshold >= 0.5:
        raise SynthError("balanced polar pairs cannot reach a negative share of 0.5 or more")


def _lone_negatives(neutral: int, threshold: float) -> int:
    """Fewest negative tweets k with k / (neutral + k) >= threshold."""
    k = max(1, math.ceil(threshold * neutral / (1.0 - threshold)))
    while k / (neutral + k) < threshold:
        k += 1
    return k


def _balanced_pairs(neutral: int, threshold: float) -> int:
    """Fewest pairs k with k / (neutral + 2k) >= threshold."""
    k = max(1, math.ceil(threshold * neutral / (1.0 - 2.0 * threshold)))
    while k / (neutral + 2 * k) < threshold:
        k += 1
    return k


def synth_corpus(
    dataset: Dataset,
    vocabulary: SynthVocabulary,
    config: FeatureConfig | None = None,
    base_date: date = BASE_DATE,
) -> list[Tweet]:
    """Tweets whose featurization under `config` reproduces the dataset's vectors.

    The whole corpus spans less than 30 days, so a 30-day window anchored at
    the latest tweet keeps every tweet.

    Raises:
        SynthError: the configuration leaves no room for the layout
    """
    config = config or FeatureConfig()
    _check_config(config)

    odd_hours = config.odd_hour_hi - config.odd_hour_lo
    gap_days = config.contrast_window_hours // 24 + 1
    first_polar_day = 8

    tweets: list[Tweet] = []
    for index, row in enumerate(dataset.rows):
        fv = row.features
        offset = OFFSETS_MINUTES[index % len(OFFSETS_MINUTES)]
        tz = timezone(timedelta(minutes=offset))
        filler = vocabulary.filler[index % len(vocabulary.filler)]
        events: list[tuple[int, int, int, str]] = []  # (day, hour, minute, text)

        if fv.w:
            events.append((6, 9, 0, f"{vocabulary.anxiety[index % len(vocabulary.anxiety)]} {filler}"))
        else:
            events.append((6, 9, 0, filler))

        if fv.t:
            for j in range(config.min_odd_posts):
                events.append((1 + j // odd_hours, config.odd_hour_lo + j % odd_hours, 0, filler))

        if fv.f:
            spacing = 60 // config.min_hourly_posts
            for j in range(config.min_hourly_posts):
                events.append((4, 14, j * spacing, filler))

        events.append((LAST_DAY - 1, 19, 0, filler))
        events.append((LAST_DAY, 20, 0, filler))

        neutral = len(events)
        positive = vocabulary.positive[index % len(vocabulary.positive)]
        negative = vocabulary.negative[index % len(vocabulary.negative)]
        polar: list[list[str]] = []
        if fv.s and fv.c:
            polar = [[negative]] * _lone_negatives(neutral, config.neg_share_threshold)
        elif fv.s:
            polar = [[positive, negative]] * _balanced_pairs(neutral, config.neg_share_threshold)
        elif fv.c:
            polar = [[positive]]

        for k, texts in enumerate(polar):
            day = first_polar_day + k * gap_days
            if day > LAST_DAY - 2:
                raise SynthError(
                    "polar events do not fit in the window",
                    user_id=row.user_id,
                    events=len(polar),
                )
            events.extend((day, 12, 0, text) for text in texts)

        last_odd_day = 1 + (config.min_odd_posts - 1) // odd_hours
        if last_odd_day >= first_polar_day - 2:
            raise SynthError("odd-hour tweets do not fit before the polar events")

        events.sort(key=lambda e: (e[0], e[1], e[2]))
        for i, (day, hour, minute, text) in enumerate(events):
            local = datetime.combine(base_date + timedelta(days=day), datetime.min.time(), tz)
            local = local.replace(hour=hour, minute=minute)
            tweets.append(
                Tweet(
                    tweet_id=f"{row.user_id}-{i:03d}",
                    user_id=row.user_id,
                    created_at_utc=int(local.timestamp()),
                    utc_offset_minutes=offset,
                    text=text,
                )
            )

    logger.info("Synthetic corpus generated", stage="synth", users=len(dataset), tweets=len(tweets))
    return tweets


def corpus_lines(tweets: Sequence[Tweet]) -> list[str]:
    """Ingest-format JSON lines, timestamps written in each tweet's local offset."""
    lines = []
    for tweet in tweets:
        offset = tweet.utc_offset_minutes
        tz = UTC if offset is None else timezone(timedelta(minutes=offset))
        created_at = datetime.fromtimestamp(tweet.created_at_utc, tz=tz).isoformat()
        record = {
            "tweet_id": tweet.tweet_id,
            "user_id": tweet.user_id,
            "created_at": created_at,
            "text": tweet.text,
            "retweet_count": tweet.retweet_count,
            "hashtags": tweet.hashtags,
            "mentions": tweet.mentions,
        }
        lines.append(json.dumps(record, ensure_ascii=False))
    return lines
