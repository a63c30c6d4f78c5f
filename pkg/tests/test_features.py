"""Tests for the five feature extractors and the feature file."""

import random
from collections import Counter
from datetime import datetime
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from ad_predict.config import FeatureConfig
from ad_predict.corpus import local_civil_time
from ad_predict.errors import CorpusIOError, ResourceFileError
from ad_predict.features import (
    annotate,
    contrast_score,
    extract,
    feat_contrast,
    feat_frequency,
    feat_sentiment,
    feat_timing,
    feat_word,
    featurize_corpus,
    featurize_timeline,
    join_labels,
    read_feature_file,
    write_feature_file,
)
from ad_predict.models import (
    AnnotatedTweet,
    ContrastInputs,
    FeatureVector,
    ObservationWindow,
    Tweet,
    TweetPolarity,
    UserTimeline,
    Verdict,
)

HOUR = 3600


def _annotated(tweet: Tweet, verdict: Verdict = Verdict.NEUTRAL, pw: int = 0, nw: int = 0,
               stems: tuple[str, ...] = ()) -> AnnotatedTweet:
    return AnnotatedTweet(
        tweet=tweet,
        stems=stems,
        polarity=TweetPolarity(pos_sum=float(pw), neg_sum=float(nw), verdict=verdict),
        positive_words=pw,
        negative_words=nw,
    )


def _at(make_tweet, times: list[str]) -> list[AnnotatedTweet]:
    return [_annotated(make_tweet(at=t)) for t in times]


# --- w ---

def test_feat_word(make_tweet, resources, polarity, anxiety):
    """Test that one lexicon stem anywhere sets w."""
    hit = [annotate(make_tweet("coffee"), resources, polarity),
           annotate(make_tweet("cannot sleep, insomnia again"), resources, polarity)]
    miss = [annotate(make_tweet("lovely garden today"), resources, polarity)]

    assert feat_word(hit, anxiety) == 1
    assert feat_word(miss, anxiety) == 0
    assert feat_word([], anxiety) == 0


# --- t ---

def test_feat_timing_two_odd_hour_tweets(make_tweet, feature_config):
    """Test that tweets at local 01:00 and 03:30 set t."""
    timeline = _at(make_tweet, ["2019-01-10T01:00:00+05:30", "2019-01-11T03:30:00+05:30"])

    assert feat_timing(timeline, feature_config) == 1


def test_feat_timing_single_tweet(make_tweet, feature_config):
    """Test that one odd-hour tweet is below the threshold."""
    assert feat_timing(_at(make_tweet, ["2019-01-10T02:00:00"]), feature_config) == 0


def test_feat_timing_upper_bound_exclusive(make_tweet, feature_config):
    """Test that 23:59 and 06:00 fall outside [0, 6)."""
    timeline = _at(make_tweet, ["2019-01-10T23:59:00-05:00", "2019-01-11T06:00:00-05:00"])

    assert feat_timing(timeline, feature_config) == 0


def test_feat_timing_uses_local_time(make_tweet, feature_config):
    """Test that hours are read in the poster's offset, not UTC."""
    # 20:30 and 21:00 UTC are 02:00 and 02:30 at +05:30
    timeline = _at(make_tweet, ["2019-01-10T02:00:00+05:30", "2019-01-10T02:30:00+05:30"])
    utc_only = _at(make_tweet, ["2019-01-09T20:30:00", "2019-01-09T21:00:00"])

    assert feat_timing(timeline, feature_config) == 1
    assert feat_timing(utc_only, feature_config) == 0


# --- f ---

def test_feat_frequency_three_in_one_hour(make_tweet, feature_config):
    """Test that three tweets within 14:00-14:59 set f."""
    timeline = _at(make_tweet, [
        "2019-01-10T14:00:00", "2019-01-10T14:31:00", "2019-01-10T14:59:59",
    ])

    assert feat_frequency(timeline, feature_config) == 1


def test_feat_frequency_buckets_are_calendar_hours(make_tweet, feature_config):
    """Test that 14:59 and two at 15:00 make buckets of sizes 1 and 2."""
    timeline = _at(make_tweet, [
        "2019-01-10T14:59:00", "2019-01-10T15:00:00", "2019-01-10T15:00:00",
    ])

    assert feat_frequency(timeline, feature_config) == 0


def test_feat_frequency_same_hour_other_day(make_tweet, feature_config):
    """Test that the same hour on different dates is a different bucket."""
    timeline = _at(make_tweet, [
        "2019-01-10T14:00:00", "2019-01-10T14:10:00", "2019-01-11T14:20:00",
        "2019-01-11T15:00:00",
    ])

    assert feat_frequency(timeline, feature_config) == 0


# --- s ---

def _verdicts(make_tweet, negative: int, total: int) -> list[AnnotatedTweet]:
    return [
        _annotated(make_tweet(at=f"2019-01-10T{i % 24:02d}:00:00"),
                   Verdict.NEGATIVE if i < negative else Verdict.NEUTRAL)
        for i in range(total)
    ]


@pytest.mark.parametrize(
    ("negative", "total", "expected"),
    [(5, 20, 1), (8, 30, 1), (0, 12, 0), (1, 5, 0), (0, 0, 0)],
)
def test_feat_sentiment_share(make_tweet, feature_config, negative, total, expected):
    """Test the inclusive negative-share threshold over all tweets."""
    assert feat_sentiment(_verdicts(make_tweet, negative, total), feature_config) == expected


def test_feat_sentiment_positive_tweets_count_in_denominator(make_tweet, feature_config):
    """Test that positive and neutral tweets both dilute the negative share."""
    timeline = [
        _annotated(make_tweet(at="2019-01-10T10:00:00"), Verdict.NEGATIVE),
        _annotated(make_tweet(at="2019-01-10T11:00:00"), Verdict.POSITIVE),
        _annotated(make_tweet(at="2019-01-10T12:00:00"), Verdict.POSITIVE),
        _annotated(make_tweet(at="2019-01-10T13:00:00"), Verdict.POSITIVE),
        _annotated(make_tweet(at="2019-01-10T14:00:00"), Verdict.NEUTRAL),
    ]

    assert feat_sentiment(timeline, feature_config) == 0


# --- contrast_score ---

def test_contrast_score_all_positive():
    """Test that purely positive evidence gives 1."""
    inputs = ContrastInputs(positive_words=5, negative_words=0, positive_posts=2, negative_posts=0)

    assert contrast_score(inputs) == 1.0


def test_contrast_score_balanced():
    """Test that symmetric evidence gives 0."""
    inputs = ContrastInputs(positive_words=4, negative_words=4, positive_posts=2, negative_posts=2)

    assert contrast_score(inputs) == 0.0


def test_contrast_score_mixed():
    """Test the weighted difference on mixed evidence."""
    inputs = ContrastInputs(positive_words=5, negative_words=3, positive_posts=2, negative_posts=1)

    assert contrast_score(inputs) == pytest.approx(5 / 17)


def test_contrast_score_no_evidence():
    """Test that an empty window gives 0."""
    assert contrast_score(ContrastInputs()) == 0.0


def test_contrast_score_seeded_inputs_match_exact_arithmetic():
    """Test 10,000 seeded inputs against exact rational evaluation."""
    rng = random.Random(1234)
    for _ in range(10_000):
        pw, nw, pp, npo = (rng.randint(0, 12) for _ in range(4))
        delta = rng.choice([1, 2, 3, 5])
        positive = Fraction(delta * pp + pw)
        negative = Fraction(delta * npo + nw)
        expected = 0 if positive + negative == 0 else (positive - negative) / (positive + negative)

        inputs = ContrastInputs(positive_words=pw, negative_words=nw,
                                positive_posts=pp, negative_posts=npo, delta=delta)
        c = contrast_score(inputs)

        assert c == pytest.approx(float(expected), abs=1e-12)
        assert -1.0 <= c <= 1.0


_counts = st.integers(min_value=0, max_value=1000)


@given(_counts, _counts, _counts, _counts, st.floats(min_value=0.1, max_value=10))
@settings(max_examples=200, deadline=None)
def test_contrast_score_range_and_antisymmetry(pw, nw, pp, npo, delta):
    """Test that c stays in [-1, 1] and swapping the sides negates it."""
    forward = contrast_score(ContrastInputs(positive_words=pw, negative_words=nw,
                                            positive_posts=pp, negative_posts=npo, delta=delta))
    swapped = contrast_score(ContrastInputs(positive_words=nw, negative_words=pw,
                                            positive_posts=npo, negative_posts=pp, delta=delta))

    assert -1.0 <= forward <= 1.0
    assert forward == pytest.approx(-swapped, abs=1e-12)
    if npo == 0 and nw == 0 and (pw or pp):
        assert forward == 1.0


@given(_counts, _counts, _counts, _counts, st.integers(min_value=1, max_value=50))
@settings(max_examples=200, deadline=None)
def test_contrast_score_ratio_invariance(pw, nw, pp, npo, k):
    """Test that scaling all four counts by k leaves c unchanged."""
    base = contrast_score(ContrastInputs(positive_words=pw, negative_words=nw,
                                         positive_posts=pp, negative_posts=npo))
    scaled = contrast_score(ContrastInputs(positive_words=k * pw, negative_words=k * nw,
                                           positive_posts=k * pp, negative_posts=k * npo))

    assert scaled == pytest.approx(base, abs=1e-12)


# --- c ---

def test_feat_contrast_no_polarity(make_tweet, feature_config):
    """Test that a timeline without polar words never reaches the threshold."""
    assert feat_contrast(_at(make_tweet, ["2019-01-10T10:00:00", "2019-01-10T11:00:00"]),
                         feature_config) == 0
    assert feat_contrast([], feature_config) == 0


def test_feat_contrast_single_positive_post(make_tweet, feature_config):
    """Test that one positive post gives c = 1 in its window."""
    timeline = [_annotated(make_tweet(at="2019-01-10T10:00:00"), Verdict.POSITIVE, pw=1)]

    assert feat_contrast(timeline, feature_config) == 1


def _mixed_timeline(make_tweet) -> list[AnnotatedTweet]:
    # Window at the last tweet holds PP=2, pw=5, NP=1, nw=3: c = 5/17
    return [
        _annotated(make_tweet(at="2019-01-10T10:00:00"), Verdict.POSITIVE, pw=3),
        _annotated(make_tweet(at="2019-01-10T12:00:00"), Verdict.NEGATIVE, nw=3),
        _annotated(make_tweet(at="2019-01-10T20:00:00"), Verdict.POSITIVE, pw=2),
    ]


def test_feat_contrast_mixed_sign_window(make_tweet):
    """Test the mixed-sign filter against the 5/17 window."""
    timeline = _mixed_timeline(make_tweet)

    assert feat_contrast(timeline, FeatureConfig(require_mixed_sign_window=True)) == 1
    assert feat_contrast(
        timeline, FeatureConfig(require_mixed_sign_window=True, contrast_threshold=0.30)
    ) == 0
    assert feat_contrast(timeline, FeatureConfig(contrast_threshold=0.30)) == 1


def test_feat_contrast_window_lower_bound_exclusive(make_tweet):
    """Test that a tweet exactly one window length earlier is outside the window."""
    config = FeatureConfig(require_mixed_sign_window=True)
    inside = [
        _annotated(make_tweet(at="2019-01-10T10:00:00"), Verdict.POSITIVE, pw=3),
        _annotated(make_tweet(at="2019-01-11T09:59:59"), Verdict.NEGATIVE),
    ]
    boundary = [
        _annotated(make_tweet(at="2019-01-10T10:00:00"), Verdict.POSITIVE, pw=3),
        _annotated(make_tweet(at="2019-01-11T10:00:00"), Verdict.NEGATIVE),
    ]

    assert feat_contrast(inside, config) == 1
    assert feat_contrast(boundary, config) == 0


def test_feat_contrast_shared_timestamp_in_one_window(make_tweet):
    """Test that tweets sharing the closing timestamp are all in that window."""
    config = FeatureConfig(require_mixed_sign_window=True)
    timeline = [
        _annotated(make_tweet(at="2019-01-10T10:00:00", tweet_id="b"), Verdict.POSITIVE, pw=3),
        _annotated(make_tweet(at="2019-01-10T10:00:00", tweet_id="a"), Verdict.NEGATIVE),
    ]

    assert feat_contrast(timeline, config) == 1


# --- extract ---

def test_extract_empty_timeline(anxiety, feature_config):
    """Test that an empty timeline gives the zero vector."""
    assert extract([], anxiety, feature_config) == FeatureVector()


def test_extract_is_order_insensitive(make_tweet, anxiety, feature_config):
    """Test that permuting tweets leaves the vector unchanged."""
    timeline = _mixed_timeline(make_tweet) + _at(make_tweet, [
        "2019-01-10T01:00:00", "2019-01-10T02:00:00", "2019-01-10T02:30:00",
    ])
    reference = extract(timeline, anxiety, feature_config)

    rng = random.Random(7)
    for _ in range(20):
        shuffled = timeline[:]
        rng.shuffle(shuffled)
        assert extract(shuffled, anxiety, feature_config) == reference


# --- Oracle over random timelines ---

_WORDS = ["happy", "sad", "insomnia", "coffee", "awful", "great", "fine", "restless",
          "garden", "lonely", "tired", "pizza"]
_HOURS = [0, 1, 2, 3, 5, 6, 13, 14, 23]
_OFFSETS = [None, 0, 330, -300]
_BASE = int(datetime.fromisoformat("2019-03-01T00:00:00+00:00").timestamp())


def _oracle(timeline: list[AnnotatedTweet], lexicon, config: FeatureConfig) -> tuple[int, ...]:
    w = int(any(s in lexicon.stems for a in timeline for s in a.stems))

    odd = 0
    buckets: Counter = Counter()
    for a in timeline:
        day, hour, _ = local_civil_time(a.tweet)
        if config.odd_hour_lo <= hour < config.odd_hour_hi:
            odd += 1
        buckets[(day, hour)] += 1
    t = int(odd >= config.min_odd_posts)
    f = int(bool(buckets) and max(buckets.values()) >= config.min_hourly_posts)

    negative = sum(a.polarity.verdict is Verdict.NEGATIVE for a in timeline)
    s = int(bool(timeline) and Fraction(negative, len(timeline)) >= Fraction(
        config.neg_share_threshold).limit_denominator(1000))

    c = 0
    span = config.contrast_window_hours * HOUR
    for closing in timeline:
        end = closing.tweet.created_at_utc
        inside = [a for a in timeline if end - span < a.tweet.created_at_utc <= end]
        pp = sum(a.polarity.verdict is Verdict.POSITIVE for a in inside)
        npo = sum(a.polarity.verdict is Verdict.NEGATIVE for a in inside)
        pw = sum(a.positive_words for a in inside)
        nw = sum(a.negative_words for a in inside)
        if config.require_mixed_sign_window and (pp == 0 or npo == 0):
            continue
        positive = config.post_coefficient * pp + pw
        negative_ev = config.post_coefficient * npo + nw
        total = positive + negative_ev
        if total and abs(positive - negative_ev) / total >= config.contrast_threshold:
            c = 1
    return (w, t, f, s, c)


@pytest.mark.parametrize(
    "config",
    [
        FeatureConfig(),
        FeatureConfig(min_odd_posts=3, min_hourly_posts=2, contrast_window_hours=6),
        FeatureConfig(require_mixed_sign_window=True, contrast_threshold=0.2,
                      neg_share_threshold=0.4),
    ],
)
def test_extract_matches_naive_oracle(config, resources, polarity, anxiety):
    """Test extract against a direct re-implementation on 500 seeded timelines."""
    rng = np.random.Generator(np.random.PCG64(2019))
    for user in range(500):
        offset = _OFFSETS[user % len(_OFFSETS)]
        tweets = []
        for i in range(int(rng.integers(0, 16))):
            ts = (_BASE + int(rng.integers(0, 3)) * 86_400
                  + int(rng.choice(_HOURS)) * HOUR + int(rng.integers(0, 60)) * 60)
            words = rng.choice(_WORDS, size=int(rng.integers(1, 4))).tolist()
            tweets.append(Tweet(tweet_id=f"{user}-{i}", user_id=f"u{user}", created_at_utc=ts,
                                utc_offset_minutes=offset, text=" ".join(words)))
        timeline = [annotate(t, resources, polarity) for t in tweets]

        expected = _oracle(timeline, anxiety, config)

        assert extract(timeline, anxiety, config).as_tuple() == expected, user


def test_timing_is_monotone_in_odd_hour_tweets(make_tweet, feature_config):
    """Test that adding an odd-hour tweet never clears t."""
    timeline = _at(make_tweet, ["2019-01-10T01:00:00", "2019-01-10T02:00:00"])

    assert feat_timing(timeline, feature_config) == 1
    assert feat_timing(timeline + _at(make_tweet, ["2019-01-10T03:00:00"]), feature_config) == 1


# --- Timelines and corpora ---

def _fixture_timeline(make_tweet) -> UserTimeline:
    tweets = [
        make_tweet("insomnia again", "2019-01-10T01:00:00+00:00"),
        make_tweet("coffee", "2019-01-10T02:30:00+00:00"),
        make_tweet("garden", "2019-01-11T14:00:00+00:00"),
        make_tweet("garden", "2019-01-11T14:20:00+00:00"),
        make_tweet("garden", "2019-01-11T14:59:00+00:00"),
        make_tweet("so sad and lonely", "2019-01-12T12:00:00+00:00"),
    ]
    return UserTimeline(user_id="u1", tweets=tweets)


def test_featurize_timeline_sets_each_rule(make_tweet, resources, anxiety, polarity,
                                           feature_config):
    """Test a crafted timeline that exercises every rule but s."""
    timeline = _fixture_timeline(make_tweet)
    window = ObservationWindow(anchor_utc=timeline.tweets[-1].created_at_utc)

    fv = featurize_timeline(timeline, window, resources, anxiety, polarity, feature_config)

    assert fv.as_tuple() == (1, 1, 1, 0, 1)


def test_featurize_timeline_respects_window(make_tweet, resources, anxiety, polarity,
                                            feature_config):
    """Test that tweets outside the window do not contribute."""
    timeline = _fixture_timeline(make_tweet)
    anchor = int(datetime.fromisoformat("2019-01-11T15:00:00+00:00").timestamp())
    window = ObservationWindow(anchor_utc=anchor, span_days=1)

    fv = featurize_timeline(timeline, window, resources, anxiety, polarity, feature_config)

    assert fv.as_tuple() == (0, 0, 1, 0, 0)


def test_featurize_corpus_and_join_labels(make_tweet, resources, anxiety, polarity,
                                          feature_config):
    """Test corpus featurization and the label join."""
    timelines = {
        "u1": _fixture_timeline(make_tweet),
        "u2": UserTimeline(user_id="u2", tweets=[make_tweet("coffee", user_id="u2")]),
    }
    window = ObservationWindow(anchor_utc=timelines["u1"].tweets[-1].created_at_utc)

    vectors = featurize_corpus(timelines, window, resources, anxiety, polarity, feature_config)
    dataset = join_labels(vectors, {"u1": 1, "u3": 0})

    assert list(vectors) == ["u1", "u2"]
    assert str(vectors["u2"]) == "00000"
    assert [row.user_id for row in dataset.rows] == ["u1"]
    assert dataset.rows[0].label == 1


# --- Feature file ---

def test_feature_file_round_trip(tmp_path):
    """Test that a written feature file reads back in user order."""
    vectors = {"b": FeatureVector.from_code(19), "a": FeatureVector.from_code(0)}
    path = tmp_path / "features.csv"

    write_feature_file(vectors, path)

    assert path.read_text().splitlines() == ["user_id,w,t,f,s,c", "a,0,0,0,0,0", "b,1,0,0,1,1"]
    assert read_feature_file(path) == vectors


def test_feature_file_without_header(tmp_path):
    """Test that the header line is optional."""
    path = tmp_path / "features.csv"
    path.write_text("u1,1,0,1,0,1\n")

    assert read_feature_file(path) == {"u1": FeatureVector(w=1, f=1, c=1)}


@pytest.mark.parametrize("content", ["u1,1,0,1\n", "u1,1,0,2,0,1\n", "u1,0,0,0,0,0\nu1,1,1,1,1,1\n"])
def test_feature_file_malformed(tmp_path, content):
    """Test that short rows, non-bits and repeated users are rejected."""
    path = tmp_path / "features.csv"
    path.write_text(content)

    with pytest.raises(ResourceFileError):
        read_feature_file(path)


def test_read_feature_file_not_utf8(tmp_path):
    """Test that a binary feature file is an I/O error."""
    path = tmp_path / "features.csv"
    path.write_bytes(b"\x89PNG\r\n\x1a\n\xff\xff")

    with pytest.raises(CorpusIOError):
        read_feature_file(path)
