"""Replace detected figurative spans with their dictionary glosses."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from figlit import tsv
from figlit.corpus import Corpus, Dialog
from figlit.detector import DetectionResult, FigurativeSpan, Source
from figlit.errors import LiteralizationError
from figlit.lexicon import ReplacementDictionary


class ContextMode(enum.Enum):
    LAST_UTTERANCE = "last-utterance"
    ANYWHERE = "anywhere"


@dataclass(frozen=True)
class Replacement:
    span: FigurativeSpan
    gloss: str
    # Inflection of the matched verb; the gloss is inserted uninflected.
    verb_form: str | None = None


@dataclass
class RewriteRecord:
    utterance_id: str
    original: str
    literalized: str
    replacements: list[Replacement] = field(default_factory=list)


def match_case(gloss: str, replaced: str) -> str:
    """Give ``gloss`` the case of the first character of ``replaced``."""
    if not gloss or not replaced:
        return gloss
    head = replaced[0]
    if head.isupper():
        return gloss[0].upper() + gloss[1:]
    if head.islower():
        return gloss[0].lower() + gloss[1:]
    return gloss


def literalize_utterance(
    utterance: str,
    spans: Sequence[FigurativeSpan],
    dictionary: ReplacementDictionary,
    utterance_id: str = "",
) -> RewriteRecord:
    """Rewrite ``utterance`` right-to-left, one gloss per lexicon span.

    Spans from metaphor scores carry no characters and are ignored.
    """
    spans = [s for s in spans if s.source is Source.IDIOM_LEXICON]
    prev_end = 0
    for s in spans:
        if s.char_start < prev_end:
            raise LiteralizationError(f"{utterance_id}: spans overlap or are unsorted at {s.char_start}")
        if s.char_end > len(utterance):
            raise LiteralizationError(f"{utterance_id}: span {s.char_start}:{s.char_end} out of bounds")
        prev_end = s.char_end

    replacements = []
    for s in spans:
        entry = dictionary.entry(s.entry_ref) if s.entry_ref is not None else None
        if entry is None:
            raise LiteralizationError(f"{utterance_id}: entry {s.entry_ref!r} for {s.matched_surface!r} not in dictionary")
        pattern = dictionary.pattern(s.matched_surface)
        verb_form = pattern.verb_form if pattern is not None else None
        gloss = match_case(entry.gloss_clean, utterance[s.char_start : s.char_end])
        replacements.append(Replacement(s, gloss, verb_form))

    text = utterance
    for r in reversed(replacements):
        text = text[: r.span.char_start] + r.gloss + text[r.span.char_end :]
    return RewriteRecord(utterance_id, utterance, text, replacements)


def literalize_dialog(
    dialog: Dialog,
    detection: DetectionResult,
    dictionary: ReplacementDictionary,
    mode: ContextMode = ContextMode.ANYWHERE,
    eligible: set[str] | None = None,
) -> list[RewriteRecord]:
    """One record per utterance of ``dialog``.

    ``LAST_UTTERANCE`` touches only the dialog's final utterance. If
    ``eligible`` is given, utterances outside it are left as they are.
    """
    if not dialog.utterances:
        raise LiteralizationError(f"dialog {dialog.dialog_id!r} is empty")
    by_utt = detection.spans_by_utterance()
    last = len(dialog.utterances) - 1
    records = []
    for i, utt in enumerate(dialog.utterances):
        active = mode is ContextMode.ANYWHERE or i == last
        if eligible is not None and utt.id not in eligible:
            active = False
        spans = sorted(by_utt.get(utt.id, ()), key=lambda s: s.char_start) if active else []
        records.append(literalize_utterance(utt.text, spans, dictionary, utt.id))
    return records


def literalize_corpus(
    corpus: Corpus,
    detection: DetectionResult,
    dictionary: ReplacementDictionary,
    mode: ContextMode = ContextMode.ANYWHERE,
    eligible: set[str] | None = None,
) -> list[RewriteRecord]:
    out = []
    for dialog in corpus.dialogs:
        out.extend(literalize_dialog(dialog, detection, dictionary, mode, eligible))
    return out


def rewrite_rows(records: Iterable[RewriteRecord]) -> list[tuple]:
    return [(r.utterance_id, r.original, r.literalized, len(r.replacements)) for r in records]


def audit_rows(records: Iterable[RewriteRecord]) -> list[tuple]:
    rows = []
    for r in records:
        for rep in r.replacements:
            rows.append((r.utterance_id, rep.span.matched_surface, rep.gloss, rep.verb_form or "-"))
    return rows


def save_rewrites(records: Sequence[RewriteRecord], path: str | Path, audit_path: str | Path) -> None:
    tsv.write_records(path, rewrite_rows(records))
    tsv.write_records(audit_path, audit_rows(records))
