"""Tests for planted-rule datasets and raw corpora that featurize back to them."""

import json

import pytest

from ad_predict.config import FeatureConfig
from ad_predict.corpus import corpus_anchor, load_corpus
from ad_predict.errors import ContractError, SynthError
from ad_predict.evaluation.synth import (
    build_vocabulary,
    corpus_lines,
    parse_rule,
    synth_corpus,
    synth_generate,
)
from ad_predict.features import featurize_corpus
from ad_predict.models import Dataset, FeatureVector, ObservationWindow, all_feature_vectors


@pytest.fixture(scope="module")
def vocabulary(resources, anxiety, polarity):
    return build_vocabulary(resources, anxiety, polarity)


def _featurize(tweets, resources, anxiety, polarity, config):
    load = load_corpus(corpus_lines(tweets))
    assert load.skipped_count == 0
    window = ObservationWindow(anchor_utc=corpus_anchor(load.timelines), span_days=30)
    return featurize_corpus(load.timelines, window, resources, anxiety, polarity, config)


# --- Rules ---

@pytest.mark.parametrize(
    "expression",
    ["w", "w or (t and s)", "not c", "(w and not f) or (s and c)", "1", "w and 0"],
)
def test_parse_rule_matches_python_semantics(expression):
    """Test compiled rules against direct evaluation on all 32 vectors."""
    rule = parse_rule(expression)

    for fv in all_feature_vectors():
        expected = bool(eval(expression, {}, dict(zip("wtfsc", fv.as_tuple()))))
        assert rule(fv) is expected


@pytest.mark.parametrize(
    "expression",
    ["x", "w + t", "__import__('os')", "w and 2", "w or", "w if t else s", "W"],
)
def test_parse_rule_rejects_other_syntax(expression):
    """Test that only the five names, 0/1 and boolean operators are accepted."""
    with pytest.raises(ContractError):
        parse_rule(expression)


# --- Feature-level datasets ---

def test_noiseless_labels_follow_rule():
    """Test that noise 0 labels every user by the rule."""
    rule = parse_rule("w or (t and s)")

    data = synth_generate(500, rule, seed=3)

    assert all(row.label == int(rule(row.features)) for row in data.rows)
    assert data.rows[0].user_id == "u00000"
    assert data.rows[-1].user_id == "u00499"


def test_same_seed_same_dataset():
    """Test that generation is deterministic per seed."""
    first = synth_generate(300, "w", noise_rate=0.1, seed=9)
    second = synth_generate(300, "w", noise_rate=0.1, seed=9)
    other = synth_generate(300, "w", noise_rate=0.1, seed=10)

    assert first == second
    assert first != other


def test_noise_rate_flips_about_that_share():
    """Test the empirical flip rate at noise 0.1."""
    rule = parse_rule("w or (t and s)")

    data = synth_generate(2000, rule, noise_rate=0.1, seed=42)

    flipped = sum(row.label != int(rule(row.features)) for row in data.rows)
    assert 0.08 <= flipped / 2000 <= 0.12


def test_bit_probabilities():
    """Test that degenerate per-bit probabilities pin the bits."""
    data = synth_generate(50, "w", bit_probabilities=[1, 0, 1, 0, 1], seed=1)

    assert {row.features.code for row in data.rows} == {0b10101}


@pytest.mark.parametrize(
    "kwargs",
    [
        {"n_users": 0},
        {"noise_rate": 0.5},
        {"noise_rate": -0.1},
        {"bit_probabilities": [0.5, 0.5]},
        {"bit_probabilities": [0.5, 0.5, 0.5, 0.5, 1.5]},
    ],
)
def test_synth_generate_contract(kwargs):
    """Test rejected generator arguments."""
    arguments = {"n_users": 10, "rule": "w", **kwargs}

    with pytest.raises(ContractError):
        synth_generate(**arguments)


# --- Raw corpora ---

def test_vocabulary_words_behave(vocabulary, anxiety):
    """Test that the checked vocabulary keeps the expected words."""
    assert "insomnia" in vocabulary.anxiety
    assert "happy" in vocabulary.positive
    assert "coffee" in vocabulary.filler
    assert vocabulary.negative


def test_vocabulary_without_usable_word(resources, anxiety, polarity):
    """Test that a category with no usable candidate is a synth error."""
    with pytest.raises(SynthError, match="positive"):
        build_vocabulary(resources, anxiety, polarity, positive_candidates=("coffee", "sad"))


@pytest.mark.slow
def test_raw_corpus_reproduces_planted_vectors(vocabulary, resources, anxiety, polarity):
    """Test that featurizing the raw corpus of 256 users gives back every planted vector."""
    data = synth_generate(256, "w or (t and s)", noise_rate=0.1, seed=2019)
    config = FeatureConfig()

    vectors = _featurize(synth_corpus(data, vocabulary, config), resources, anxiety, polarity, config)

    assert vectors == {row.user_id: row.features for row in data.rows}


def test_raw_corpus_covers_every_vector_under_custom_thresholds(
    vocabulary, resources, anxiety, polarity
):
    """Test the round trip for all 32 vectors with non-default feature thresholds."""
    config = FeatureConfig(
        odd_hour_lo=1,
        odd_hour_hi=5,
        min_odd_posts=5,
        min_hourly_posts=4,
        neg_share_threshold=0.3,
    )
    # two users per vector so every vector meets more than one UTC offset
    data = Dataset.from_rows(
        (f"u{i:03d}", FeatureVector.from_code(i // 2), 0) for i in range(64)
    )

    vectors = _featurize(synth_corpus(data, vocabulary, config), resources, anxiety, polarity, config)

    assert vectors == {row.user_id: row.features for row in data.rows}


def test_raw_corpus_is_deterministic(vocabulary):
    """Test that the same dataset gives the same corpus lines."""
    data = synth_generate(40, "w", seed=8)

    assert corpus_lines(synth_corpus(data, vocabulary)) == corpus_lines(synth_corpus(data, vocabulary))


def test_corpus_lines_keep_local_offsets(vocabulary):
    """Test that timestamps are written in each user's own offset."""
    data = Dataset.from_rows((f"u{i}", FeatureVector(), 0) for i in range(4))

    records = [json.loads(line) for line in corpus_lines(synth_corpus(data, vocabulary))]

    offsets = {r["user_id"]: r["created_at"][-6:] for r in records}
    assert offsets == {"u0": "+00:00", "u1": "+05:30", "u2": "-05:00", "u3": "+01:00"}


@pytest.mark.parametrize(
    "config",
    [
        FeatureConfig(odd_hour_lo=8, odd_hour_hi=10),
        FeatureConfig(min_hourly_posts=2),
        FeatureConfig(min_hourly_posts=61),
        FeatureConfig(require_mixed_sign_window=True),
        FeatureConfig(neg_share_threshold=0.5),
    ],
)
def test_configurations_without_a_layout(vocabulary, config):
    """Test feature settings the corpus layout cannot satisfy."""
    data = Dataset.from_rows([("u0", FeatureVector(), 0)])

    with pytest.raises(SynthError):
        synth_corpus(data, vocabulary, config)


def test_polar_events_overflow_window(vocabulary):
    """Test that wide contrast windows leave no room for balanced pairs."""
    data = Dataset.from_rows([("u0", FeatureVector.from_bits([1, 1, 1, 1, 0]), 1)])

    with pytest.raises(SynthError, match="do not fit"):
        synth_corpus(data, vocabulary, FeatureConfig(contrast_window_hours=144))
