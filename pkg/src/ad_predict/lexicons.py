"""Anxiety lexicon (seed words + one-hop synonym growth) and word polarity scoring.

File formats:
- seed list: one word per line
- synonym graph: `word<TAB>syn1,syn2,...`
- polarity lexicon: `word<TAB>pos<TAB>neg`, scores in [0, 1]
- expanded lexicon (written by `ad-predict lexicon expand`): `stem<TAB>seed|expanded`
"""

from __future__ import annotations

from collections import defaultdict
from collections.abc import Iterable, Iterator
from pathlib import Path

from ad_predict.errors import CorpusIOError, LexiconValidationError, ResourceFileError
from ad_predict.logging_config import StructuredLogger
from ad_predict.models import (
    AnxietyLexicon,
    PolarityLexicon,
    Provenance,
    SynonymGraph,
    TweetPolarity,
    Verdict,
)
from ad_predict.textprep import stem

logger = StructuredLogger(__name__)


def _lines(path: Path) -> Iterator[tuple[int, str]]:
    try:
        with open(path, encoding="utf-8") as f:
            for line_no, line in enumerate(f, start=1):
                stripped = line.strip()
                if stripped and not stripped.startswith("#"):
                    yield line_no, line.rstrip("\r\n")
    except (OSError, UnicodeDecodeError) as e:
        raise CorpusIOError(str(path), str(e)) from e


def load_seed(path: Path) -> set[str]:
    """Read the seed word list, lowercased and deduplicated.

    Raises:
        LexiconValidationError: the file holds no words
    """
    words = {line.strip().lower() for _, line in _lines(path)}
    if not words:
        raise LexiconValidationError("seed list is empty", path=str(path))
    logger.info("Seed lexicon loaded", stage="lexicons", distinct_words=len(words))
    return words


def load_synonyms(path: Path) -> SynonymGraph:
    """Read `word<TAB>syn1,syn2,...` lines; repeated keys accumulate."""
    edges: dict[str, list[str]] = defaultdict(list)
    for line_no, line in _lines(path):
        word, sep, rest = line.partition("\t")
        word = word.strip().lower()
        if not sep or not word:
            raise ResourceFileError(str(path), line_no, "expected 'word<TAB>syn1,syn2,...'")
        for synonym in rest.split(","):
            synonym = synonym.strip().lower()
            if synonym and synonym not in edges[word]:
                edges[word].append(synonym)
    return SynonymGraph(edges=dict(edges))


def expand_lexicon(seed: Iterable[str], graph: SynonymGraph) -> AnxietyLexicon:
    """Grow the seed by one synonym hop, then stem and deduplicate.

    Seed stems are always kept and keep `seed` provenance even when a synonym
    stems to the same entry.
    """
    seed_words = sorted({w.strip().lower() for w in seed if w.strip()})
    provenance: dict[str, Provenance] = {}

    for word in seed_words:
        provenance[stem(word)] = Provenance.SEED

    for word in seed_words:
        for synonym in graph.synonyms(word):
            # Multi-word synonyms never match a single stem
            if any(ch.isspace() or ch == "_" for ch in synonym):
                continue
            provenance.setdefault(stem(synonym), Provenance.EXPANDED)

    lexicon = AnxietyLexicon(stems=frozenset(provenance), provenance=provenance)
    logger.info(
        "Anxiety lexicon expanded",
        stage="lexicons",
        seed_stems=sum(1 for p in provenance.values() if p is Provenance.SEED),
        total_stems=len(lexicon),
    )
    return lexicon


def contains_anxiety_stem(lexicon: AnxietyLexicon, stem_: str) -> bool:
    """Exact membership of a stemmer output."""
    return bool(stem_) and stem_ in lexicon.stems


def write_lexicon(lexicon: AnxietyLexicon, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8") as f:
        for entry in sorted(lexicon.stems):
            f.write(f"{entry}\t{lexicon.provenance[entry].value}\n")


def read_lexicon(path: Path) -> AnxietyLexicon:
    """Read a lexicon written by write_lexicon."""
    provenance: dict[str, Provenance] = {}
    for line_no, line in _lines(path):
        entry, sep, origin = line.partition("\t")
        try:
            provenance[entry.strip()] = Provenance(origin.strip()) if sep else Provenance.SEED
        except ValueError as e:
            raise ResourceFileError(str(path), line_no, f"unknown provenance {origin!r}") from e
    if not provenance:
        raise LexiconValidationError("lexicon file is empty", path=str(path))
    return AnxietyLexicon(stems=frozenset(provenance), provenance=provenance)


def load_polarity(path: Path) -> PolarityLexicon:
    """Read `word<TAB>pos<TAB>neg`, stemming words and averaging lines per stem.

    Raises:
        ResourceFileError: wrong column count or non-numeric score
        LexiconValidationError: a score outside [0, 1], with its line number
    """
    sums: dict[str, list[float]] = {}
    for line_no, line in _lines(path):
        columns = [c.strip() for c in line.split("\t")]
        if len(columns) != 3 or not columns[0]:
            raise ResourceFileError(str(path), line_no, "expected 'word<TAB>pos<TAB>neg'")
        try:
            pos, neg = float(columns[1]), float(columns[2])
        except ValueError as e:
            raise ResourceFileError(str(path), line_no, "scores must be numbers") from e
        for name, value in (("pos", pos), ("neg", neg)):
            if not 0.0 <= value <= 1.0:
                raise LexiconValidationError(
                    f"{name} score {value} outside [0, 1]", path=str(path), line_no=line_no
                )
        acc = sums.setdefault(stem(columns[0].lower()), [0.0, 0.0, 0.0])
        acc[0] += pos
        acc[1] += neg
        acc[2] += 1

    scores = {key: (acc[0] / acc[2], acc[1] / acc[2]) for key, acc in sums.items()}
    logger.info("Polarity lexicon loaded", stage="lexicons", stems=len(scores))
    return PolarityLexicon(scores=scores)


def score_tweet(stems: Iterable[str], lexicon: PolarityLexicon) -> TweetPolarity:
    """Sum word scores over the stems found in the lexicon (with multiplicity)."""
    pos_sum = 0.0
    neg_sum = 0.0
    for s in stems:
        entry = lexicon.get(s)
        if entry is not None:
            pos_sum += entry[0]
            neg_sum += entry[1]

    if neg_sum - pos_sum > 0:
        verdict = Verdict.NEGATIVE
    elif pos_sum - neg_sum > 0:
        verdict = Verdict.POSITIVE
    else:
        verdict = Verdict.NEUTRAL
    return TweetPolarity(pos_sum=pos_sum, neg_sum=neg_sum, verdict=verdict)


def word_polarity(stem_: str, lexicon: PolarityLexicon) -> int:
    """+1 for a positive word, -1 for a negative word, 0 on tie or absence."""
    entry = lexicon.get(stem_)
    if entry is None or entry[0] == entry[1]:
        return 0
    return 1 if entry[0] > entry[1] else -1


def count_polar_words(stems: Iterable[str], lexicon: PolarityLexicon) -> tuple[int, int]:
    """(positive word count, negative word count)."""
    positive = negative = 0
    for s in stems:
        sign = word_polarity(s, lexicon)
        if sign > 0:
            positive += 1
        elif sign < 0:
            negative += 1
    return positive, negative
