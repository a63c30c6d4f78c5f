"""Core data models for ad-predict.

Identifier semantics:
- tweet_id: corpus-wide unique post identifier
- user_id: timeline key; one UserTimeline and one FeatureVector per user
- feature code: the integer 0..31 whose bits, most significant first, are <w,t,f,s,c>
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from enum import Enum
from typing import Annotated, Any

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator

SECONDS_PER_DAY = 86_400
FEATURE_NAMES: tuple[str, ...] = ("w", "t", "f", "s", "c")
N_FEATURES = len(FEATURE_NAMES)
N_PATTERNS = 2 ** N_FEATURES

Bit = Annotated[int, Field(ge=0, le=1)]
Label = Annotated[int, Field(ge=0, le=1)]


# --- Corpus ---

class Tweet(BaseModel):
    """A single post with the fields the pipeline reads.

    Unknown record keys (profile name, verification status...) are carried in
    `extra` and never used.
    """
    model_config = ConfigDict(frozen=True)

    tweet_id: str = Field(min_length=1)
    user_id: str = Field(min_length=1)
    created_at_utc: int = Field(gt=0)
    utc_offset_minutes: int | None = Field(default=None, ge=-840, le=840)
    text: str
    retweet_count: int = Field(default=0, ge=0)
    hashtags: list[str] = Field(default_factory=list)
    mentions: list[str] = Field(default_factory=list)
    extra: dict[str, Any] = Field(default_factory=dict)

    def sort_key(self) -> tuple[int, str]:
        """Total order used for timelines."""
        return (self.created_at_utc, self.tweet_id)


class UserTimeline(BaseModel):
    """All tweets of one user, ascending by (created_at_utc, tweet_id)."""
    model_config = ConfigDict(frozen=True)

    user_id: str
    tweets: list[Tweet] = Field(default_factory=list)

    @model_validator(mode="after")
    def _check_invariants(self) -> UserTimeline:
        for tweet in self.tweets:
            if tweet.user_id != self.user_id:
                raise ValueError(
                    f"tweet {tweet.tweet_id} belongs to {tweet.user_id}, not {self.user_id}"
                )
        keys = [t.sort_key() for t in self.tweets]
        if keys != sorted(keys):
            raise ValueError(f"timeline of {self.user_id} is not sorted")
        return self

    def __len__(self) -> int:
        return len(self.tweets)


class ObservationWindow(BaseModel):
    """Span of `span_days` ending (inclusive) at `anchor_utc`."""
    model_config = ConfigDict(frozen=True)

    anchor_utc: int
    span_days: int = Field(default=30, ge=1)

    @property
    def lower_utc(self) -> int:
        """Exclusive lower bound."""
        return self.anchor_utc - self.span_days * SECONDS_PER_DAY

    def contains(self, created_at_utc: int) -> bool:
        return self.lower_utc < created_at_utc <= self.anchor_utc


class SkipRecord(BaseModel):
    """One rejected input line."""
    line_no: int
    reason: str


class CorpusLoad(BaseModel):
    """Result of load_corpus: timelines plus the skip report."""
    timelines: dict[str, UserTimeline]
    counts: dict[str, int]
    skipped: list[SkipRecord] = Field(default_factory=list)
    duplicates: int = 0

    @property
    def skipped_count(self) -> int:
        return len(self.skipped)


# --- Text preprocessing ---

class ProcessedTweet(BaseModel):
    """Stemmed residue of one tweet."""
    model_config = ConfigDict(frozen=True)

    tweet_id: str
    stems: list[str] = Field(default_factory=list)
    raw_token_count: int = Field(default=0, ge=0)


@dataclass(frozen=True)
class PrepResources:
    """Stoplist, slang map and emoji map used by textprep.

    emoji_map keys are codepoint tuples; slang_map keys are lowercase.
    """
    stopwords: frozenset[str] = frozenset()
    slang_map: dict[str, str] = field(default_factory=dict)
    emoji_map: dict[tuple[int, ...], str] = field(default_factory=dict)
    keep_hashtag_words: bool = False


# --- Lexicons ---

class Provenance(str, Enum):
    """Where an anxiety lexicon entry came from."""
    SEED = "seed"
    EXPANDED = "expanded"


@dataclass(frozen=True)
class AnxietyLexicon:
    """Stem-normalized anxiety word set."""
    stems: frozenset[str]
    provenance: dict[str, Provenance]

    def __len__(self) -> int:
        return len(self.stems)

    def __contains__(self, stem: object) -> bool:
        return stem in self.stems


@dataclass(frozen=True)
class SynonymGraph:
    """Word -> synonyms, all lowercase."""
    edges: dict[str, list[str]] = field(default_factory=dict)

    def synonyms(self, word: str) -> list[str]:
        return self.edges.get(word, [])


@dataclass(frozen=True)
class PolarityLexicon:
    """Stem -> (pos_score, neg_score), each within [0, 1]."""
    scores: dict[str, tuple[float, float]]

    def __len__(self) -> int:
        return len(self.scores)

    def get(self, stem: str) -> tuple[float, float] | None:
        return self.scores.get(stem)


class Verdict(str, Enum):
    """Per-tweet polarity verdict."""
    POSITIVE = "positive"
    NEGATIVE = "negative"
    NEUTRAL = "neutral"


@dataclass(frozen=True)
class TweetPolarity:
    """Summed word polarity of one tweet."""
    pos_sum: float
    neg_sum: float
    verdict: Verdict


@dataclass(frozen=True)
class AnnotatedTweet:
    """A tweet with everything the feature extractors read."""
    tweet: Tweet
    stems: tuple[str, ...]
    polarity: TweetPolarity
    positive_words: int
    negative_words: int


# --- Features ---

class FeatureVector(BaseModel):
    """The 5-bit vector <w,t,f,s,c>."""
    model_config = ConfigDict(frozen=True)

    w: Bit = 0
    t: Bit = 0
    f: Bit = 0
    s: Bit = 0
    c: Bit = 0

    def as_tuple(self) -> tuple[int, int, int, int, int]:
        return (self.w, self.t, self.f, self.s, self.c)

    @property
    def code(self) -> int:
        """Pattern index 0..31, w is the most significant bit."""
        value = 0
        for bit in self.as_tuple():
            value = (value << 1) | bit
        return value

    @classmethod
    def from_bits(cls, bits: Sequence[int]) -> FeatureVector:
        if len(bits) != N_FEATURES:
            raise ValueError(f"expected {N_FEATURES} bits, got {len(bits)}")
        return cls(**dict(zip(FEATURE_NAMES, (int(b) for b in bits), strict=True)))

    @classmethod
    def from_code(cls, code: int) -> FeatureVector:
        if not 0 <= code < N_PATTERNS:
            raise ValueError(f"feature code {code} outside 0..{N_PATTERNS - 1}")
        return cls.from_bits([(code >> (N_FEATURES - 1 - i)) & 1 for i in range(N_FEATURES)])

    def __str__(self) -> str:
        return "".join(str(b) for b in self.as_tuple())


def all_feature_vectors() -> list[FeatureVector]:
    """Every point of the feature space, in code order."""
    return [FeatureVector.from_code(code) for code in range(N_PATTERNS)]


def pattern_matrix() -> np.ndarray:
    """(32, 5) uint8 matrix; row i holds the bits of code i."""
    return np.array([fv.as_tuple() for fv in all_feature_vectors()], dtype=np.uint8)


class ContrastInputs(BaseModel):
    """Evidence accumulated over one contrast window."""
    model_config = ConfigDict(frozen=True)

    positive_words: int = Field(default=0, ge=0)
    negative_words: int = Field(default=0, ge=0)
    positive_posts: int = Field(default=0, ge=0)
    negative_posts: int = Field(default=0, ge=0)
    delta: float = Field(default=3.0, gt=0)


# --- Datasets ---

class DatasetRow(BaseModel):
    """One labeled user."""
    model_config = ConfigDict(frozen=True)

    user_id: str
    features: FeatureVector
    label: Label


class Dataset(BaseModel):
    """Labeled feature vectors; user ids are unique."""
    model_config = ConfigDict(frozen=True)

    rows: list[DatasetRow] = Field(default_factory=list)

    @model_validator(mode="after")
    def _unique_users(self) -> Dataset:
        seen: set[str] = set()
        for row in self.rows:
            if row.user_id in seen:
                raise ValueError(f"duplicate user_id '{row.user_id}' in dataset")
            seen.add(row.user_id)
        return self

    @classmethod
    def from_rows(cls, rows: Iterable[tuple[str, FeatureVector, int]]) -> Dataset:
        return cls(rows=[DatasetRow(user_id=u, features=fv, label=y) for u, fv, y in rows])

    def __len__(self) -> int:
        return len(self.rows)

    def matrix(self) -> np.ndarray:
        """(n, 5) uint8 feature matrix."""
        if not self.rows:
            return np.zeros((0, N_FEATURES), dtype=np.uint8)
        return np.array([r.features.as_tuple() for r in self.rows], dtype=np.uint8)

    def labels(self) -> np.ndarray:
        return np.array([r.label for r in self.rows], dtype=np.int64)

    def codes(self) -> np.ndarray:
        return np.array([r.features.code for r in self.rows], dtype=np.int64)

    def class_counts(self) -> tuple[int, int]:
        ones = sum(r.label for r in self.rows)
        return len(self.rows) - ones, ones

    def subset(self, indices: Sequence[int] | np.ndarray) -> Dataset:
        return Dataset.model_construct(rows=[self.rows[int(i)] for i in indices])
