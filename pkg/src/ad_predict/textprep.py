"""Tweet text normalization: clean -> expand -> tokenize -> drop_stopwords -> stem.

Resource file formats:
- stopwords: one lowercase word per line
- slang map: `key<TAB>replacement phrase`
- emoji map: `hex codepoint sequence<TAB>descriptive phrase`, codepoints separated
  by spaces, dashes or underscores (e.g. `2639 FE0F<TAB>frowning face`)

Blank lines and lines starting with `#` are ignored in all three.
"""

from __future__ import annotations

import re
import string
from collections.abc import Callable, Iterator
from functools import lru_cache
from pathlib import Path

import emoji
from nltk.stem.porter import PorterStemmer
from nltk.tokenize import TreebankWordTokenizer

from ad_predict.errors import CorpusIOError, ResourceFileError
from ad_predict.logging_config import StructuredLogger
from ad_predict.models import PrepResources, ProcessedTweet, Tweet

logger = StructuredLogger(__name__)

VARIATION_SELECTOR = 0xFE0F

_URL_RE = re.compile(r"(?:https?://|www\.)\S+|\bt\.co/\S+", re.IGNORECASE)
_MENTION_RE = re.compile(r"(?<!\w)@\w+")
_HASHTAG_RE = re.compile(r"(?<!\w)#(\w+)")
# Apostrophes survive only between word characters (contractions)
_PUNCT_RE = re.compile(
    "(?:" + "|".join(
        re.escape(ch) for ch in string.punctuation if ch != "'"
    ) + r"|(?<!\w)'|'(?!\w))"
)
_NUMERIC_TOKEN_RE = re.compile(r"(?<!\S)\d+(?!\S)")
_SPACE_RE = re.compile(r"\s+")

_CLITICS = {
    "n't": "not",
    "'m": "am",
    "'re": "are",
    "'ve": "have",
    "'ll": "will",
    "'d": "would",
    "'s": "is",
}
_NEGATED_BASES = {"ca": "can", "wo": "will", "sha": "shall"}

_tokenizer = TreebankWordTokenizer()
_stemmer = PorterStemmer(mode=PorterStemmer.MARTIN_EXTENSIONS)


def _strip_non_ascii(segment: str) -> str:
    return segment.encode("ascii", errors="ignore").decode("ascii")


def _map_outside_emoji(text: str, func: Callable[[str], str]) -> str:
    """Apply `func` to the text between emoji, leaving emoji untouched."""
    parts: list[str] = []
    cursor = 0
    for match in emoji.emoji_list(text):
        parts.append(func(text[cursor:match["match_start"]]))
        parts.append(match["emoji"])
        cursor = match["match_end"]
    parts.append(func(text[cursor:]))
    return "".join(parts)


def clean(text: str, keep_hashtag_words: bool = False) -> str:
    """Remove URLs, mentions, hashtags, numbers, punctuation and non-ASCII text.

    Emoji are kept for `expand`. With keep_hashtag_words the `#` is dropped but
    the word stays.
    """
    text = _URL_RE.sub(" ", text)
    text = _MENTION_RE.sub(" ", text)
    text = _HASHTAG_RE.sub(r" \1" if keep_hashtag_words else " ", text)

    def scrub(segment: str) -> str:
        segment = _strip_non_ascii(segment)
        segment = _PUNCT_RE.sub(" ", segment)
        return _NUMERIC_TOKEN_RE.sub(" ", segment)

    text = _map_outside_emoji(text, scrub)
    return _SPACE_RE.sub(" ", text).strip()


def _emoji_key(chars: str) -> tuple[int, ...]:
    return tuple(ord(ch) for ch in chars)


def _lookup_emoji(chars: str, emoji_map: dict[tuple[int, ...], str]) -> str | None:
    key = _emoji_key(chars)
    if key in emoji_map:
        return emoji_map[key]
    bare = tuple(cp for cp in key if cp != VARIATION_SELECTOR)
    return emoji_map.get(bare)


def _expand_slang(segment: str, slang_map: dict[str, str]) -> str:
    if not slang_map:
        return segment
    return re.sub(r"\S+", lambda m: slang_map.get(m.group(0).lower(), m.group(0)), segment)


def expand(text: str, resources: PrepResources) -> str:
    """Replace known emoji and slang tokens by their phrases, in a single pass.

    Unknown emoji are dropped, as is any other non-ASCII residue. Replacement
    phrases are never expanded again.
    """
    parts: list[str] = []
    cursor = 0
    for match in emoji.emoji_list(text):
        parts.append(_expand_slang(text[cursor:match["match_start"]], resources.slang_map))
        phrase = _lookup_emoji(match["emoji"], resources.emoji_map)
        parts.append(f" {phrase} " if phrase else " ")
        cursor = match["match_end"]
    parts.append(_expand_slang(text[cursor:], resources.slang_map))

    expanded = _strip_non_ascii("".join(parts))
    return _SPACE_RE.sub(" ", expanded).strip()


def tokenize(text: str) -> list[str]:
    """Treebank tokenization with contractions split into word + clitic, lowercased."""
    raw = _tokenizer.tokenize(text)
    tokens: list[str] = []
    for i, token in enumerate(raw):
        lowered = token.lower()
        if lowered in _CLITICS:
            tokens.append(_CLITICS[lowered])
            continue
        nxt = raw[i + 1].lower() if i + 1 < len(raw) else ""
        if nxt == "n't" and lowered in _NEGATED_BASES:
            tokens.append(_NEGATED_BASES[lowered])
            continue
        lowered = lowered.strip(string.punctuation + "`")
        if lowered and any(ch.isalnum() for ch in lowered):
            tokens.append(lowered)
    return tokens


def drop_stopwords(tokens: list[str], stopword_list: frozenset[str] | set[str]) -> list[str]:
    """Remove stoplist members, preserving order."""
    return [t for t in tokens if t not in stopword_list]


@lru_cache(maxsize=65_536)
def stem(token: str) -> str:
    """Porter stem of a lowercase token (the reference-vocabulary variant)."""
    return _stemmer.stem(token, to_lowercase=False)


def preprocess(tweet: Tweet, resources: PrepResources) -> ProcessedTweet:
    """Run the whole normalization pipeline on one tweet."""
    text = clean(tweet.text, keep_hashtag_words=resources.keep_hashtag_words)
    text = expand(text, resources)
    tokens = tokenize(text)
    kept = drop_stopwords(tokens, resources.stopwords)
    return ProcessedTweet(
        tweet_id=tweet.tweet_id,
        stems=[stem(t) for t in kept],
        raw_token_count=len(tokens),
    )


# --- Resource loading ---

def _resource_lines(path: Path) -> Iterator[tuple[int, str]]:
    try:
        with open(path, encoding="utf-8") as f:
            for line_no, line in enumerate(f, start=1):
                stripped = line.rstrip("\n").rstrip("\r")
                if not stripped.strip() or stripped.lstrip().startswith("#"):
                    continue
                yield line_no, stripped
    except (OSError, UnicodeDecodeError) as e:
        raise CorpusIOError(str(path), str(e)) from e


def load_stopwords(path: Path) -> frozenset[str]:
    return frozenset(line.strip().lower() for _, line in _resource_lines(path))


def load_slang_map(path: Path) -> dict[str, str]:
    slang: dict[str, str] = {}
    for line_no, line in _resource_lines(path):
        key, sep, phrase = line.partition("\t")
        if not sep or not key.strip() or not phrase.strip():
            raise ResourceFileError(str(path), line_no, "expected 'key<TAB>replacement'")
        slang[key.strip().lower()] = phrase.strip()
    return slang


def load_emoji_map(path: Path) -> dict[tuple[int, ...], str]:
    emoji_map: dict[tuple[int, ...], str] = {}
    for line_no, line in _resource_lines(path):
        key, sep, phrase = line.partition("\t")
        if not sep or not phrase.strip():
            raise ResourceFileError(str(path), line_no, "expected 'codepoints<TAB>phrase'")
        try:
            codepoints = tuple(int(part, 16) for part in re.split(r"[\s\-_]+", key.strip()))
        except ValueError as e:
            raise ResourceFileError(str(path), line_no, f"bad hex codepoint in {key!r}") from e
        emoji_map[codepoints] = phrase.strip().lower()
        # Presentation selector is optional in tweets
        bare = tuple(cp for cp in codepoints if cp != VARIATION_SELECTOR)
        if bare:
            emoji_map.setdefault(bare, phrase.strip().lower())
    return emoji_map


def load_resources(
    stopwords_path: Path,
    slang_path: Path,
    emoji_path: Path,
    keep_hashtag_words: bool = False,
) -> PrepResources:
    """Load the three preprocessing resources."""
    resources = PrepResources(
        stopwords=load_stopwords(stopwords_path),
        slang_map=load_slang_map(slang_path),
        emoji_map=load_emoji_map(emoji_path),
        keep_hashtag_words=keep_hashtag_words,
    )
    logger.debug(
        "Preprocessing resources loaded",
        stage="textprep",
        stopwords=len(resources.stopwords),
        slang=len(resources.slang_map),
        emoji=len(resources.emoji_map),
    )
    return resources
