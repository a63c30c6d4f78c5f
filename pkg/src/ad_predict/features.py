"""Per-user 5-bit feature vector <w,t,f,s,c>.

- w: a stem of some tweet is in the anxiety lexicon
- t: enough tweets posted during the odd hours (local time)
- f: some calendar hour holds a burst of tweets
- s: share of negative-verdict tweets reaches the threshold
- c: polarity contrast within a sliding window reaches the threshold

Feature file format: a `user_id,w,t,f,s,c` header, then one line per user.
"""

from __future__ import annotations

import csv
from collections import Counter
from collections.abc import Iterable, Mapping, Sequence
from pathlib import Path

import numpy as np

from ad_predict.config import FeatureConfig
from ad_predict.corpus import apply_window, local_civil_time
from ad_predict.errors import CorpusIOError, ResourceFileError
from ad_predict.lexicons import contains_anxiety_stem, count_polar_words, score_tweet
from ad_predict.logging_config import StructuredLogger
from ad_predict.models import (
    FEATURE_NAMES,
    AnnotatedTweet,
    AnxietyLexicon,
    ContrastInputs,
    Dataset,
    DatasetRow,
    FeatureVector,
    ObservationWindow,
    PolarityLexicon,
    PrepResources,
    Tweet,
    UserTimeline,
    Verdict,
)
from ad_predict.textprep import preprocess

logger = StructuredLogger(__name__)

SECONDS_PER_HOUR = 3600
FEATURE_FILE_HEADER = ("user_id", *FEATURE_NAMES)


def annotate(tweet: Tweet, resources: PrepResources, polarity: PolarityLexicon) -> AnnotatedTweet:
    """Preprocess one tweet and attach its verdict and polar word counts."""
    processed = preprocess(tweet, resources)
    positive, negative = count_polar_words(processed.stems, polarity)
    return AnnotatedTweet(
        tweet=tweet,
        stems=tuple(processed.stems),
        polarity=score_tweet(processed.stems, polarity),
        positive_words=positive,
        negative_words=negative,
    )


def feat_word(timeline: Sequence[AnnotatedTweet], lexicon: AnxietyLexicon) -> int:
    return int(any(contains_anxiety_stem(lexicon, s) for a in timeline for s in a.stems))


def feat_timing(timeline: Sequence[AnnotatedTweet], config: FeatureConfig) -> int:
    """1 iff at least min_odd_posts tweets fall in [odd_hour_lo, odd_hour_hi) local time."""
    odd = 0
    for annotated in timeline:
        _, hour, _ = local_civil_time(annotated.tweet)
        if config.odd_hour_lo <= hour < config.odd_hour_hi:
            odd += 1
    return int(odd >= config.min_odd_posts)


def feat_frequency(timeline: Sequence[AnnotatedTweet], config: FeatureConfig) -> int:
    """1 iff some (local date, hour) bucket holds at least min_hourly_posts tweets."""
    buckets: Counter[tuple[object, int]] = Counter()
    for annotated in timeline:
        day, hour, _ = local_civil_time(annotated.tweet)
        buckets[(day, hour)] += 1
    return int(any(n >= config.min_hourly_posts for n in buckets.values()))


def feat_sentiment(timeline: Sequence[AnnotatedTweet], config: FeatureConfig) -> int:
    """1 iff the share of negative-verdict tweets (over all tweets) reaches the threshold."""
    if not timeline:
        return 0
    negative = sum(1 for a in timeline if a.polarity.verdict is Verdict.NEGATIVE)
    return int(negative / len(timeline) >= config.neg_share_threshold)


def contrast_score(inputs: ContrastInputs) -> float:
    """Normalized difference of weighted positive and negative evidence, in [-1, 1].

    Zero when there is no evidence at all.
    """
    positive = inputs.delta * inputs.positive_posts + inputs.positive_words
    negative = inputs.delta * inputs.negative_posts + inputs.negative_words
    total = positive + negative
    if total == 0:
        return 0.0
    return (positive - negative) / total


def feat_contrast(timeline: Sequence[AnnotatedTweet], config: FeatureConfig) -> int:
    """1 iff some window (ts - H hours, ts] ending at a tweet reaches the contrast threshold.

    Tweets sharing the closing timestamp all belong to that window.
    """
    if not timeline:
        return 0

    ordered = sorted(timeline, key=lambda a: a.tweet.sort_key())
    ts = np.array([a.tweet.created_at_utc for a in ordered], dtype=np.int64)

    def prefix(values: Iterable[int]) -> np.ndarray:
        return np.concatenate(([0], np.cumsum(np.fromiter(values, dtype=np.int64))))

    pp = prefix(int(a.polarity.verdict is Verdict.POSITIVE) for a in ordered)
    np_ = prefix(int(a.polarity.verdict is Verdict.NEGATIVE) for a in ordered)
    pw = prefix(a.positive_words for a in ordered)
    nw = prefix(a.negative_words for a in ordered)

    span = config.contrast_window_hours * SECONDS_PER_HOUR
    lo = np.searchsorted(ts, ts - span, side="right")
    hi = np.searchsorted(ts, ts, side="right")

    for start, end in zip(lo.tolist(), hi.tolist(), strict=True):
        inputs = ContrastInputs(
            positive_words=int(pw[end] - pw[start]),
            negative_words=int(nw[end] - nw[start]),
            positive_posts=int(pp[end] - pp[start]),
            negative_posts=int(np_[end] - np_[start]),
            delta=config.post_coefficient,
        )
        if config.require_mixed_sign_window and (
            inputs.positive_posts == 0 or inputs.negative_posts == 0
        ):
            continue
        if abs(contrast_score(inputs)) >= config.contrast_threshold:
            return 1
    return 0


def extract(
    timeline: Sequence[AnnotatedTweet],
    lexicon: AnxietyLexicon,
    config: FeatureConfig,
) -> FeatureVector:
    """Assemble <w,t,f,s,c> for an already windowed, annotated timeline."""
    return FeatureVector(
        w=feat_word(timeline, lexicon),
        t=feat_timing(timeline, config),
        f=feat_frequency(timeline, config),
        s=feat_sentiment(timeline, config),
        c=feat_contrast(timeline, config),
    )


def featurize_timeline(
    timeline: UserTimeline,
    window: ObservationWindow,
    resources: PrepResources,
    anxiety: AnxietyLexicon,
    polarity: PolarityLexicon,
    config: FeatureConfig,
) -> FeatureVector:
    """Window, annotate and extract one user's timeline."""
    windowed = apply_window(timeline, window)
    annotated = [annotate(t, resources, polarity) for t in windowed.tweets]
    return extract(annotated, anxiety, config)


def featurize_corpus(
    timelines: Mapping[str, UserTimeline],
    window: ObservationWindow,
    resources: PrepResources,
    anxiety: AnxietyLexicon,
    polarity: PolarityLexicon,
    config: FeatureConfig,
) -> dict[str, FeatureVector]:
    """Feature vectors for every user, in user_id order."""
    vectors = {
        user_id: featurize_timeline(timelines[user_id], window, resources, anxiety, polarity, config)
        for user_id in sorted(timelines)
    }
    logger.info(
        "Corpus featurized",
        stage="features",
        users=len(vectors),
        bits_set={name: sum(getattr(v, name) for v in vectors.values()) for name in FEATURE_NAMES},
    )
    return vectors


def join_labels(vectors: Mapping[str, FeatureVector], labels: Mapping[str, int]) -> Dataset:
    """Dataset of the users present in both maps, in user_id order."""
    unlabeled = sorted(set(vectors) - set(labels))
    if unlabeled:
        logger.warning(
            f"{len(unlabeled)} users have no label and are left out",
            stage="features",
            first=unlabeled[0],
        )
    missing = sorted(set(labels) - set(vectors))
    if missing:
        logger.warning(
            f"{len(missing)} labeled users have no features",
            stage="features",
            first=missing[0],
        )
    return Dataset(
        rows=[
            DatasetRow(user_id=u, features=vectors[u], label=labels[u])
            for u in sorted(set(vectors) & set(labels))
        ]
    )


def write_feature_file(vectors: Mapping[str, FeatureVector], path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="", encoding="utf-8") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(FEATURE_FILE_HEADER)
        for user_id in sorted(vectors):
            writer.writerow((user_id, *vectors[user_id].as_tuple()))


def read_feature_file(path: Path) -> dict[str, FeatureVector]:
    """Read `user_id,w,t,f,s,c` lines; the header line is optional.

    Raises:
        CorpusIOError: unreadable file
        ResourceFileError: wrong column count, non-bit value or repeated user
    """
    vectors: dict[str, FeatureVector] = {}
    try:
        with open(path, newline="", encoding="utf-8") as f:
            for line_no, row in enumerate(csv.reader(f), start=1):
                if not row or not "".join(row).strip():
                    continue
                if line_no == 1 and tuple(c.strip() for c in row) == FEATURE_FILE_HEADER:
                    continue
                if len(row) != len(FEATURE_FILE_HEADER):
                    raise ResourceFileError(str(path), line_no, "expected 'user_id,w,t,f,s,c'")
                user_id, *bits = (c.strip() for c in row)
                if any(b not in ("0", "1") for b in bits):
                    raise ResourceFileError(str(path), line_no, "feature values must be 0 or 1")
                if user_id in vectors:
                    raise ResourceFileError(str(path), line_no, f"user '{user_id}' repeated")
                vectors[user_id] = FeatureVector.from_bits([int(b) for b in bits])
    except (OSError, UnicodeDecodeError) as e:
        raise CorpusIOError(str(path), str(e)) from e
    return vectors
