"""Tweet ingestion: record parsing, per-user timelines, observation window.

Ingest format is one JSON object per line:

    {"tweet_id": "...", "user_id": "...", "created_at": "2019-01-05T02:14:00+05:30",
     "text": "...", "retweet_count": 0, "hashtags": [], "mentions": []}

`retweet_count`, `hashtags` and `mentions` are optional; any other keys are
kept verbatim in `Tweet.extra`.
"""

from __future__ import annotations

import csv
from collections import defaultdict
from collections.abc import Iterable
from datetime import UTC, date, datetime, timedelta, timezone
from pathlib import Path
from typing import Any

from pydantic import BaseModel, ConfigDict, Field, ValidationError

from ad_predict.errors import (
    CorpusIOError,
    RecordParseError,
    RecordValidationError,
    ResourceFileError,
)
from ad_predict.logging_config import StructuredLogger
from ad_predict.models import (
    CorpusLoad,
    ObservationWindow,
    SkipRecord,
    Tweet,
    UserTimeline,
)

logger = StructuredLogger(__name__)

REQUIRED_FIELDS = ("tweet_id", "user_id", "created_at", "text")


class TweetRecord(BaseModel):
    """Wire shape of one ingest line."""
    model_config = ConfigDict(extra="allow", strict=True)

    tweet_id: str
    user_id: str
    created_at: str
    text: str
    retweet_count: int = Field(default=0, ge=0)
    hashtags: list[str] = Field(default_factory=list)
    mentions: list[str] = Field(default_factory=list)


def parse_timestamp(value: str, line_no: int | None = None) -> tuple[int, int | None]:
    """Parse an RFC 3339 timestamp into (epoch seconds, offset minutes or None)."""
    try:
        parsed = datetime.fromisoformat(value.strip())
    except ValueError as e:
        raise RecordParseError("created_at", f"is not an RFC 3339 timestamp: {value!r}",
                               line_no) from e

    offset_minutes: int | None = None
    if parsed.tzinfo is None:
        parsed = parsed.replace(tzinfo=UTC)
    else:
        delta = parsed.utcoffset()
        assert delta is not None
        offset_minutes = int(delta.total_seconds() // 60)
    return int(parsed.timestamp() // 1), offset_minutes


def parse_tweet_record(line: str, line_no: int | None = None) -> Tweet:
    """Parse one ingest line into a Tweet.

    Raises:
        RecordParseError: the line is not a JSON object or a field has the wrong type
        RecordValidationError: a required field is missing or empty, or a value
            violates a Tweet invariant
    """
    try:
        record = TweetRecord.model_validate_json(line)
    except ValidationError as e:
        raise _record_error(e, line_no) from e

    for name in REQUIRED_FIELDS:
        if not getattr(record, name).strip():
            raise RecordValidationError(name, "is empty", line_no)

    created_at_utc, offset = parse_timestamp(record.created_at, line_no)

    try:
        return Tweet(
            tweet_id=record.tweet_id,
            user_id=record.user_id,
            created_at_utc=created_at_utc,
            utc_offset_minutes=offset,
            text=record.text,
            retweet_count=record.retweet_count,
            hashtags=record.hashtags,
            mentions=record.mentions,
            extra=dict(record.model_extra or {}),
        )
    except ValidationError as e:
        first = e.errors()[0]
        field = str(first["loc"][0]) if first["loc"] else "record"
        raise RecordValidationError(field, first["msg"].lower(), line_no) from e


def _record_error(error: ValidationError, line_no: int | None) -> RecordParseError | RecordValidationError:
    first = error.errors()[0]
    loc = first["loc"]
    field = str(loc[0]) if loc else "record"
    kind = first["type"]
    if kind == "missing":
        return RecordValidationError(field, "is required", line_no)
    if kind in ("json_invalid", "model_type", "model_attributes_type"):
        return RecordParseError("record", "is not a JSON object", line_no)
    if kind.startswith("greater_than"):
        return RecordValidationError(field, first["msg"].lower(), line_no)
    return RecordParseError(field, first["msg"].lower(), line_no)


def load_corpus(lines: Iterable[str]) -> CorpusLoad:
    """Group a record stream into sorted, deduplicated per-user timelines.

    Blank lines are ignored; unparseable records are counted in the skip report.
    Records are canonicalized by sorting on (created_at_utc, tweet_id, text)
    before deduplication, so the first occurrence of a tweet_id in that order
    wins and input order never matters.
    """
    parsed: list[Tweet] = []
    skipped: list[SkipRecord] = []

    for line_no, line in enumerate(lines, start=1):
        if not line.strip():
            continue
        try:
            parsed.append(parse_tweet_record(line, line_no))
        except (RecordParseError, RecordValidationError) as e:
            skipped.append(SkipRecord(line_no=line_no, reason=e.message))

    parsed.sort(key=lambda t: (t.created_at_utc, t.tweet_id, t.text))

    seen: set[str] = set()
    by_user: dict[str, list[Tweet]] = defaultdict(list)
    duplicates = 0
    for tweet in parsed:
        if tweet.tweet_id in seen:
            duplicates += 1
            continue
        seen.add(tweet.tweet_id)
        by_user[tweet.user_id].append(tweet)

    timelines = {
        user_id: UserTimeline(user_id=user_id, tweets=tweets)
        for user_id, tweets in sorted(by_user.items())
    }

    if skipped:
        logger.warning(
            f"Skipped {len(skipped)} invalid records",
            stage="corpus",
            first_line=skipped[0].line_no,
            first_reason=skipped[0].reason,
        )
    if duplicates:
        logger.info(f"Dropped {duplicates} duplicate tweet ids", stage="corpus")

    logger.info(
        "Corpus loaded",
        stage="corpus",
        users=len(timelines),
        tweets=len(seen),
    )

    return CorpusLoad(
        timelines=timelines,
        counts={user_id: len(t.tweets) for user_id, t in timelines.items()},
        skipped=skipped,
        duplicates=duplicates,
    )


def load_corpus_file(path: Path) -> CorpusLoad:
    """Load a line-delimited corpus file.

    Raises:
        CorpusIOError: the file cannot be opened or decoded
    """
    try:
        with open(path, encoding="utf-8") as f:
            return load_corpus(f)
    except (OSError, UnicodeDecodeError) as e:
        raise CorpusIOError(str(path), str(e)) from e


def corpus_anchor(timelines: dict[str, UserTimeline]) -> int | None:
    """Corpus-wide latest created_at_utc, or None for an empty corpus."""
    latest = [t.tweets[-1].created_at_utc for t in timelines.values() if t.tweets]
    return max(latest) if latest else None


def apply_window(timeline: UserTimeline, window: ObservationWindow) -> UserTimeline:
    """Keep tweets with anchor - span < created_at_utc <= anchor, preserving order."""
    kept = [t for t in timeline.tweets if window.contains(t.created_at_utc)]
    if len(kept) == len(timeline.tweets):
        return timeline
    return UserTimeline.model_construct(user_id=timeline.user_id, tweets=kept)


def local_civil_time(tweet: Tweet) -> tuple[date, int, int]:
    """(date, hour, minute) in the poster's local time, UTC when no offset is known."""
    tz = UTC if tweet.utc_offset_minutes is None else timezone(
        timedelta(minutes=tweet.utc_offset_minutes)
    )
    moment = datetime.fromtimestamp(tweet.created_at_utc, tz=tz)
    return moment.date(), moment.hour, moment.minute


def summarize(load: CorpusLoad) -> dict[str, Any]:
    """Corpus statistics reported by `ad-predict ingest`."""
    tweets = [t for tl in load.timelines.values() for t in tl.tweets]
    summary: dict[str, Any] = {
        "users": len(load.timelines),
        "tweets": len(tweets),
        "skipped": load.skipped_count,
        "duplicates": load.duplicates,
    }
    if tweets:
        first = min(t.created_at_utc for t in tweets)
        last = max(t.created_at_utc for t in tweets)
        summary["first_utc"] = datetime.fromtimestamp(first, tz=UTC).isoformat()
        summary["last_utc"] = datetime.fromtimestamp(last, tz=UTC).isoformat()
        summary["max_tweets_per_user"] = max(load.counts.values())
    return summary


def load_labels(path: Path) -> dict[str, int]:
    """Read `user_id,label` lines (label 0 or 1); an optional header is skipped.

    Raises:
        CorpusIOError: unreadable file
        ResourceFileError: malformed line
    """
    labels: dict[str, int] = {}
    try:
        with open(path, newline="", encoding="utf-8") as f:
            for line_no, row in enumerate(csv.reader(f), start=1):
                if not row or not "".join(row).strip():
                    continue
                if line_no == 1 and row[0].strip().lower() == "user_id":
                    continue
                if len(row) != 2:
                    raise ResourceFileError(str(path), line_no, "expected 'user_id,label'")
                user_id, label = row[0].strip(), row[1].strip()
                if not user_id or label not in ("0", "1"):
                    raise ResourceFileError(str(path), line_no, f"label must be 0 or 1, got {label!r}")
                if user_id in labels:
                    logger.warning(f"Label for {user_id} repeated; last one wins",
                                   stage="corpus", line=line_no)
                labels[user_id] = int(label)
    except (OSError, UnicodeDecodeError) as e:
        raise CorpusIOError(str(path), str(e)) from e
    return labels
