"""Figurative span detection.

Lexicon detection runs an Aho-Corasick automaton over the case-folded
utterance and keeps only hits that start and end on a word boundary, a
position where ``str.isalnum`` flips (or the text edge). Among the
surviving hits the scan is leftmost-longest: take the earliest start,
the longest pattern there, then continue after it.

Metaphor detection is utterance-level only: an external classifier
probability strictly above the threshold puts the utterance in the set.
"""

from __future__ import annotations

import enum
import logging
import math
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import TYPE_CHECKING, Iterable, Mapping, Sequence

import ahocorasick

from figlit import tsv
from figlit.errors import EmptyDictionaryError, ScoresFormatError
from figlit.lexicon import ReplacementDictionary

if TYPE_CHECKING:
    from figlit.corpus import Corpus

log = logging.getLogger(__name__)

DEFAULT_THRESHOLD = 0.9

# [^\W_] is exactly str.isalnum() per character; [\W_] is its complement.
_RUNS = re.compile(r"[^\W_]+|[\W_]+")


class Source(enum.Enum):
    IDIOM_LEXICON = "idiom_lexicon"
    METAPHOR_SCORE = "metaphor_score"


def fold(text: str) -> str:
    """Lowercase without changing length, so offsets stay valid."""
    low = text.lower()
    if len(low) == len(text):
        return low
    return "".join(c if len(c.lower()) != 1 else c.lower() for c in text)


def split_runs(text: str) -> list[str]:
    return _RUNS.findall(text)


@dataclass(frozen=True)
class FigurativeSpan:
    utterance_id: str
    char_start: int
    char_end: int
    matched_surface: str
    entry_ref: str | None
    source: Source = Source.IDIOM_LEXICON

    def __post_init__(self) -> None:
        if not 0 <= self.char_start < self.char_end:
            raise ValueError(f"bad span offsets {self.char_start}:{self.char_end}")


class Matcher:
    """Immutable multi-pattern matcher over a fixed set of surfaces."""

    __slots__ = ("_automaton", "_surfaces", "_refs")

    def __init__(self, surfaces: Sequence[str], entry_refs: Sequence[str | None] | None = None):
        if not surfaces:
            raise EmptyDictionaryError("cannot build a matcher from zero patterns")
        refs = list(entry_refs) if entry_refs is not None else [None] * len(surfaces)
        if len(refs) != len(surfaces):
            raise ValueError("entry_refs and surfaces differ in length")
        automaton = ahocorasick.Automaton()
        kept_surfaces: list[str] = []
        kept_refs: list[str | None] = []
        for surface, ref in zip(surfaces, refs):
            key = fold(surface)
            if not key:
                raise ValueError("empty pattern surface")
            if key not in automaton:
                automaton.add_word(key, (len(kept_surfaces), len(key)))
                kept_surfaces.append(key)
                kept_refs.append(ref)
        automaton.make_automaton()
        self._automaton = automaton
        self._surfaces = tuple(kept_surfaces)
        self._refs = tuple(kept_refs)

    @property
    def pattern_count(self) -> int:
        return len(self._surfaces)

    def surface(self, index: int) -> str:
        return self._surfaces[index]

    def entry_ref(self, index: int) -> str | None:
        return self._refs[index]

    def find(self, text: str) -> list[tuple[int, int, int]]:
        """Non-overlapping ``(start, end, pattern_index)`` matches, leftmost-longest."""
        folded = fold(text)
        size = len(folded)
        hits = []
        for last, (k, n) in self._automaton.iter(folded):
            end = last + 1
            start = end - n
            if (start == 0 or folded[start - 1].isalnum() != folded[start].isalnum()) and (
                end == size or folded[last].isalnum() != folded[end].isalnum()
            ):
                hits.append((start, -n, k))
        if not hits:
            return hits
        hits.sort()
        out = []
        pos = 0
        for start, neg, k in hits:
            if start >= pos:
                pos = start - neg
                out.append((start, pos, k))
        return out


def build_matcher(dictionary: ReplacementDictionary) -> Matcher:
    if len(dictionary) == 0:
        raise EmptyDictionaryError("dictionary has no patterns")
    return Matcher([p.surface for p in dictionary.patterns], [p.entry_ref for p in dictionary.patterns])


def detect_idioms(utterance: str, matcher: Matcher, utterance_id: str = "") -> list[FigurativeSpan]:
    return [
        FigurativeSpan(utterance_id, start, end, matcher.surface(k), matcher.entry_ref(k), Source.IDIOM_LEXICON)
        for start, end, k in matcher.find(utterance)
    ]


# ---------------------------------------------------------------------------
# metaphor scores


def validate_probability(value: float, what: str = "probability") -> float:
    if not (isinstance(value, (int, float)) and not math.isnan(value) and 0.0 <= value <= 1.0):
        raise ScoresFormatError(f"{what} {value!r} outside [0, 1]")
    return float(value)


def parse_scores(lines: Iterable[str]) -> dict[str, float]:
    """Read ``utterance_id<TAB>probability`` lines."""
    scores: dict[str, float] = {}
    for lineno, fields in tsv.iter_records(lines):
        if len(fields) != 2:
            raise ScoresFormatError(f"line {lineno}: expected 2 fields, got {len(fields)}")
        uid = fields[0].strip()
        try:
            p = float(fields[1])
        except ValueError:
            raise ScoresFormatError(f"line {lineno}: not a number: {fields[1]!r}") from None
        validate_probability(p, f"line {lineno}: score")
        if uid in scores:
            raise ScoresFormatError(f"line {lineno}: duplicate utterance id {uid!r}")
        scores[uid] = p
    return scores


def load_scores(path: str | Path) -> dict[str, float]:
    return parse_scores(tsv.read_lines(path))


def detect_metaphors(scores: Mapping[str, float], threshold: float = DEFAULT_THRESHOLD) -> set[str]:
    """Ids whose score is strictly greater than ``threshold``."""
    validate_probability(threshold, "threshold")
    return {uid for uid, p in scores.items() if p > threshold}


# ---------------------------------------------------------------------------
# corpus-level


@dataclass
class DetectionResult:
    idiom_utterances: set[str] = field(default_factory=set)
    metaphor_utterances: set[str] = field(default_factory=set)
    spans: list[FigurativeSpan] = field(default_factory=list)
    total_utterances: int = 0

    @property
    def figurative_utterances(self) -> set[str]:
        return self.idiom_utterances | self.metaphor_utterances

    def spans_by_utterance(self) -> dict[str, list[FigurativeSpan]]:
        grouped: dict[str, list[FigurativeSpan]] = {}
        for span in self.spans:
            grouped.setdefault(span.utterance_id, []).append(span)
        return grouped

    def summary(self) -> dict:
        fig = len(self.figurative_utterances)
        return {
            "utterances": self.total_utterances,
            "idiom_utterances": len(self.idiom_utterances),
            "metaphor_utterances": len(self.metaphor_utterances),
            "figurative_utterances": fig,
            "figurative_fraction": fig / self.total_utterances if self.total_utterances else None,
            "idiom_spans": len(self.spans),
        }


def detect_all(
    corpus: Corpus,
    matcher: Matcher,
    scores: Mapping[str, float] | None = None,
    threshold: float = DEFAULT_THRESHOLD,
) -> DetectionResult:
    """Run lexicon detection over ``corpus`` and merge thresholded scores."""
    result = DetectionResult(total_utterances=corpus.num_utterances)
    known = set()
    for utt in corpus.utterances():
        uid = utt.id
        known.add(uid)
        spans = detect_idioms(utt.text, matcher, uid)
        if spans:
            result.idiom_utterances.add(uid)
            result.spans.extend(spans)
    if scores:
        flagged = detect_metaphors(scores, threshold)
        unknown = sorted(set(scores) - known)
        if unknown:
            log.warning("%d scored utterance ids not in corpus (ignored), e.g. %s", len(unknown), unknown[:3])
        result.metaphor_utterances = flagged & known
    return result


def detection_records(result: DetectionResult, corpus: Corpus) -> list[tuple]:
    """Rows ``(utterance_id, start, end, surface, source, entry_ref)`` in corpus order.

    Metaphor-only memberships are written with ``-`` offsets.
    """
    order = {uid: i for i, uid in enumerate(u.id for u in corpus.utterances())}
    rows: list[tuple[int, int, tuple]] = []
    for s in result.spans:
        rows.append((order[s.utterance_id], s.char_start, (s.utterance_id, s.char_start, s.char_end, s.matched_surface, s.source.value, s.entry_ref or "-")))
    for uid in result.metaphor_utterances:
        rows.append((order[uid], -1, (uid, "-", "-", "-", Source.METAPHOR_SCORE.value, "-")))
    rows.sort(key=lambda r: (r[0], r[1]))
    return [r[2] for r in rows]


def save_detections(result: DetectionResult, corpus: Corpus, path: str | Path) -> None:
    tsv.write_records(path, detection_records(result, corpus))


def parse_detections(lines: Iterable[str]) -> DetectionResult:
    """Inverse of :func:`save_detections` (``total_utterances`` is left at 0)."""
    result = DetectionResult()
    for lineno, fields in tsv.iter_records(lines):
        if len(fields) != 6:
            raise ScoresFormatError(f"detections line {lineno}: expected 6 fields, got {len(fields)}")
        uid, start, end, surface, source, ref = (tsv.unescape(f) for f in fields)
        try:
            src = Source(source)
        except ValueError:
            raise ScoresFormatError(f"detections line {lineno}: unknown source {source!r}") from None
        if src is Source.METAPHOR_SCORE:
            result.metaphor_utterances.add(uid)
            continue
        try:
            span = FigurativeSpan(uid, int(start), int(end), surface, None if ref == "-" else ref, src)
        except ValueError as exc:
            raise ScoresFormatError(f"detections line {lineno}: {exc}") from None
        result.idiom_utterances.add(uid)
        result.spans.append(span)
    return result


def load_detections(path: str | Path) -> DetectionResult:
    return parse_detections(tsv.read_lines(path))


def gloss_collisions(dictionary: ReplacementDictionary, matcher: Matcher | None = None) -> list[tuple[str, str]]:
    """``(source_id, surface)`` pairs where an entry's gloss contains a dictionary surface.

    Such glosses would be rewritten again by a second literalization pass.
    """
    matcher = matcher or build_matcher(dictionary)
    hits = []
    for entry in dictionary.entries:
        for _, _, k in matcher.find(entry.gloss_clean):
            hits.append((entry.source_id, matcher.surface(k)))
    return hits
