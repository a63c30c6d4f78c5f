"""Tests for tweet text normalization."""

import pytest

from ad_predict.config import DATA_DIR
from ad_predict.errors import ResourceFileError
from ad_predict.models import PrepResources, Tweet
from ad_predict.textprep import (
    clean,
    drop_stopwords,
    expand,
    load_emoji_map,
    load_slang_map,
    preprocess,
    stem,
    tokenize,
)


def _tweet(text: str) -> Tweet:
    return Tweet(tweet_id="1", user_id="u1", created_at_utc=1_546_300_800, text=text)


# --- clean ---

def test_clean_removes_urls_mentions_hashtags_numbers():
    """Test that URLs, mentions, hashtags and bare numbers are removed."""
    assert clean("I feel restless https://t.co/abc @doc #help 123") == "I feel restless"


def test_clean_keeps_hashtag_word_when_asked():
    """Test that keep_hashtag_words drops only the hash sign."""
    assert clean("#anxious day", keep_hashtag_words=True) == "anxious day"
    assert clean("#anxious day") == "day"


def test_clean_punctuation_only_is_empty():
    """Test that a punctuation-only tweet cleans to the empty string."""
    assert clean("!!! ... ???") == ""


def test_clean_keeps_contractions_and_emoji():
    """Test that in-word apostrophes and emoji survive cleaning."""
    assert clean("can't sleep 😢") == "can't sleep 😢"


def test_clean_drops_non_ascii_letters():
    """Test that non-ASCII characters other than emoji are removed."""
    assert clean("café au lait") == "caf au lait"


def test_clean_keeps_words_with_digits():
    """Test that only standalone numbers are removed."""
    assert clean("gr8 day 2day 42") == "gr8 day 2day"


# --- expand ---

def test_expand_slang(resources):
    """Test that slang tokens are replaced case-insensitively."""
    assert expand("idk anymore", resources) == "i do not know anymore"
    assert expand("IDK anymore", resources) == "i do not know anymore"


def test_expand_known_emoji(resources):
    """Test that a known emoji becomes its phrase."""
    assert expand("so tired 😢", resources) == "so tired crying face"


def test_expand_emoji_with_variation_selector(resources):
    """Test that a multi-codepoint emoji sequence is looked up as a whole."""
    assert expand("☹️", resources) == "frowning face"


def test_expand_drops_unknown_emoji(resources):
    """Test that emoji missing from the map are dropped."""
    assert expand("hello 🦄", resources) == "hello"


def test_expand_is_single_pass():
    """Test that replacement phrases are not expanded again."""
    resources = PrepResources(slang_map={"a1": "u rock", "u": "you"})

    assert expand("a1", resources) == "u rock"
    assert expand("u", resources) == "you"


# --- tokenize / stopwords ---

@pytest.mark.parametrize(
    ("text", "tokens"),
    [
        ("I feel restless", ["i", "feel", "restless"]),
        ("can't sleep.", ["can", "not", "sleep"]),
        ("I'm so tired", ["i", "am", "so", "tired"]),
        ("won't stop", ["will", "not", "stop"]),
        ("", []),
    ],
)
def test_tokenize(text, tokens):
    """Test that tokens are lowercased and contractions split into words."""
    assert tokenize(text) == tokens


def test_drop_stopwords_preserves_order():
    """Test that stoplist members are removed and order is kept."""
    assert drop_stopwords(["i", "feel", "so", "restless"], {"i", "so"}) == ["feel", "restless"]


def test_bundled_stoplist_size(resources):
    """Test that the bundled stoplist holds the full English list."""
    assert len(resources.stopwords) == 318
    assert {"the", "i", "am", "so"} <= resources.stopwords


# --- stem ---

@pytest.mark.parametrize(
    ("token", "expected"),
    [
        ("a", "a"),
        ("crying", "cry"),
        ("tired", "tire"),
        ("restless", "restless"),
        ("happy", "happi"),
        ("relational", "relat"),
    ],
)
def test_stem_examples(token, expected):
    """Test individual stems."""
    assert stem(token) == expected


# --- preprocess ---

def test_preprocess_pipeline(resources):
    """Test that the full pipeline leaves only content stems."""
    processed = preprocess(_tweet("I'm so restless https://t.co/x"), resources)

    assert processed.stems == ["restless"]
    assert processed.raw_token_count == 4
    assert processed.tweet_id == "1"


def test_preprocess_numbers_only(resources):
    """Test that a numbers-only tweet has no stems."""
    assert preprocess(_tweet("42"), resources).stems == []


def test_preprocess_emoji_only(resources):
    """Test that an emoji-only tweet yields the stems of its phrase."""
    assert preprocess(_tweet("😢"), resources).stems == ["cry", "face"]


def test_preprocess_keeps_hashtag_words():
    """Test that hashtag words reach the stemmer when configured."""
    resources = PrepResources(keep_hashtag_words=True)

    assert preprocess(_tweet("#restless"), resources).stems == ["restless"]


# --- Resource files ---

def test_bundled_resource_files_load():
    """Test that the bundled slang and emoji maps load."""
    assert load_slang_map(DATA_DIR / "slang.tsv")["gr8"] == "great"
    assert load_emoji_map(DATA_DIR / "emoji.tsv")[(0x1F622,)] == "crying face"


def test_slang_map_bad_line(tmp_path):
    """Test that a slang line without a tab is rejected with its line number."""
    path = tmp_path / "slang.tsv"
    path.write_text("# comment\nidk\n")

    with pytest.raises(ResourceFileError) as exc_info:
        load_slang_map(path)

    assert "line=2" in str(exc_info.value)


def test_emoji_map_bad_codepoint(tmp_path):
    """Test that a non-hex codepoint is rejected."""
    path = tmp_path / "emoji.tsv"
    path.write_text("ZZZZ\tnothing\n")

    with pytest.raises(ResourceFileError):
        load_emoji_map(path)
