"""Test fixtures for ad-predict."""

from __future__ import annotations

from collections.abc import Callable
from datetime import UTC, datetime

import pytest

from ad_predict.config import DATA_DIR, FeatureConfig
from ad_predict.lexicons import expand_lexicon, load_polarity, load_seed, load_synonyms
from ad_predict.models import AnxietyLexicon, PolarityLexicon, PrepResources, Tweet
from ad_predict.textprep import load_resources


@pytest.fixture(scope="session")
def resources() -> PrepResources:
    """Bundled stoplist, slang map and emoji map."""
    return load_resources(
        DATA_DIR / "stopwords.txt",
        DATA_DIR / "slang.tsv",
        DATA_DIR / "emoji.tsv",
    )


@pytest.fixture(scope="session")
def anxiety() -> AnxietyLexicon:
    """Bundled seed list grown by the bundled synonym graph."""
    return expand_lexicon(
        load_seed(DATA_DIR / "anxiety_seed.txt"),
        load_synonyms(DATA_DIR / "synonyms.tsv"),
    )


@pytest.fixture(scope="session")
def polarity() -> PolarityLexicon:
    return load_polarity(DATA_DIR / "polarity.tsv")


@pytest.fixture
def feature_config() -> FeatureConfig:
    return FeatureConfig()


@pytest.fixture
def make_tweet() -> Callable[..., Tweet]:
    """Factory for tweets; `at` is an ISO timestamp, naive means UTC."""
    counter = iter(range(1_000_000))

    def factory(
        text: str = "coffee",
        at: str = "2019-01-10T12:00:00+00:00",
        user_id: str = "u1",
        tweet_id: str | None = None,
    ) -> Tweet:
        moment = datetime.fromisoformat(at)
        offset = None
        if moment.tzinfo is None:
            moment = moment.replace(tzinfo=UTC)
        else:
            delta = moment.utcoffset()
            assert delta is not None
            offset = int(delta.total_seconds() // 60)
        return Tweet(
            tweet_id=tweet_id or f"t{next(counter):06d}",
            user_id=user_id,
            created_at_utc=int(moment.timestamp()),
            utc_offset_minutes=offset,
            text=text,
        )

    return factory
