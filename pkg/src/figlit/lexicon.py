"""Idiom lexicon parsing, gloss cleaning, template expansion.

A lexicon file holds one ``surface<TAB>gloss[<TAB>type[<TAB>source_id]]``
record per line. Templated surfaces ("behind someone's back", "bite the
dust") are expanded into every concrete realization, and the result is
collapsed into a :class:`ReplacementDictionary` keyed by surface.
"""

from __future__ import annotations

import enum
import itertools
import logging
import re
from collections import Counter
from dataclasses import dataclass, field, replace
from pathlib import Path
from types import MappingProxyType
from typing import Iterable, Mapping

from figlit import tsv
from figlit.errors import EmptyDictionaryError, GlossEmptyAfterCleaning, LexiconFormatError
from figlit.inflection import SLOT_KINDS, InflectionTables, default_tables, verb_inflections

log = logging.getLogger(__name__)


class ConstructType(enum.Enum):
    IDIOM = "idiom"
    EUPHEMISM = "euphemism"
    SIMILE = "simile"
    METAPHOR = "metaphor"
    UNKNOWN = "unknown"


@dataclass(frozen=True)
class LexiconEntry:
    surface_template: str
    gloss_raw: str
    gloss_clean: str = ""
    construct_type: ConstructType = ConstructType.UNKNOWN
    source_id: str = ""

    def __post_init__(self) -> None:
        if not normalize_surface(self.surface_template):
            raise ValueError("surface_template is empty")


@dataclass(frozen=True)
class ExpandedPattern:
    surface: str
    entry_ref: str
    slot_bindings: tuple[tuple[str, str], ...] = ()

    @property
    def verb_form(self) -> str | None:
        """Inflection applied to the leading verb, if any (``"past"`` etc.)."""
        for marker, _ in self.slot_bindings:
            if marker.startswith("verb:"):
                return marker[5:]
        return None


# ---------------------------------------------------------------------------
# parsing

_APOSTROPHES = str.maketrans({"’": "'", "‘": "'", "ʼ": "'"})


def normalize_surface(text: str) -> str:
    """Lowercase, straighten apostrophes, collapse whitespace."""
    return " ".join(text.translate(_APOSTROPHES).lower().split())


def parse_lexicon(lines: Iterable[str], id_prefix: str = "L") -> list[LexiconEntry]:
    """Parse lexicon records.

    Source ids default to ``<id_prefix><zero-padded line number>`` so that
    lexicographic order equals file order.
    """
    entries = []
    seen_ids: set[str] = set()
    for lineno, fields in tsv.iter_records(lines):
        if not 2 <= len(fields) <= 4:
            raise LexiconFormatError(lineno, f"expected 2-4 TAB-separated fields, got {len(fields)}")
        surface, gloss = fields[0].strip(), fields[1].strip()
        if not normalize_surface(surface):
            raise LexiconFormatError(lineno, "empty surface")
        if not gloss:
            raise LexiconFormatError(lineno, "empty gloss")
        ctype = ConstructType.UNKNOWN
        if len(fields) >= 3 and fields[2].strip():
            try:
                ctype = ConstructType(fields[2].strip().lower())
            except ValueError:
                raise LexiconFormatError(lineno, f"unknown construct type {fields[2].strip()!r}") from None
        source_id = fields[3].strip() if len(fields) == 4 and fields[3].strip() else f"{id_prefix}{lineno:06d}"
        if source_id in seen_ids:
            raise LexiconFormatError(lineno, f"duplicate source id {source_id!r}")
        seen_ids.add(source_id)
        entries.append(
            LexiconEntry(surface_template=surface, gloss_raw=gloss, construct_type=ctype, source_id=source_id)
        )
    return entries


def load_lexicon(path: str | Path) -> list[LexiconEntry]:
    return parse_lexicon(tsv.read_lines(path), id_prefix="L")


# ---------------------------------------------------------------------------
# gloss cleaning

_LEADING_LABELS = re.compile(r"^(?:(?:\([^()\[\]]*\)|\[[^()\[\]]*\])\s*)+")


def clean_gloss(gloss_raw: str) -> str:
    """Strip leading ``(label)``/``[label]`` groups and trailing periods.

    Interior parentheses are kept. Raises :class:`GlossEmptyAfterCleaning`
    when nothing but labels and punctuation remain.
    """
    text = " ".join(gloss_raw.split())
    while True:
        # "(US): (informal) x" exposes a second label after the colon goes
        stripped = _LEADING_LABELS.sub("", text).lstrip(" :;,")
        if stripped == text:
            break
        text = stripped
    text = text.rstrip(". ")
    if not text:
        raise GlossEmptyAfterCleaning(f"gloss {gloss_raw!r} is empty after removing labels")
    return text


# ---------------------------------------------------------------------------
# expansion

# After a leading "to", these tokens mean the phrase is prepositional ("to a fault").
_FUNCTION_WORDS = frozenset(
    "a an the this that these those my your his her its our their me you him it us them "
    "and or but of in on at by for from with into onto upon over under about no not all "
    "some any each every one two three".split()
)


def _leading_verb(tokens: list[str], tables: InflectionTables) -> tuple[list[str], bool]:
    """Return ``(tokens, has_verb)``; strips an explicit ``to`` marker."""
    if tokens[0] == "to" and len(tokens) > 1:
        head = tokens[1]
        if tables.is_verb(head):
            return tokens[1:], True
        # "to hightail it" marks an unknown verb; "to boot" / "to a fault" do not.
        if len(tokens) > 2 and head.isalpha() and head not in _FUNCTION_WORDS and head not in SLOT_KINDS:
            return tokens[1:], True
        return tokens, False
    return tokens, tables.is_verb(tokens[0])


def expand_entry(entry: LexiconEntry, tables: InflectionTables | None = None) -> list[ExpandedPattern]:
    """Every concrete surface for ``entry``.

    Slots (``someone``, ``someone's``, ``one``, ``one's``) range over their
    seven-pronoun paradigm; a leading verb ranges over its distinct
    inflections. The result is the cross product, verb outermost.
    """
    tables = tables or default_tables()
    tokens, has_verb = _leading_verb(normalize_surface(entry.surface_template).split(" "), tables)

    axes: list[list[tuple[str, str]]] = []
    positions: list[int] = []
    for i, tok in enumerate(tokens):
        if i == 0 and has_verb:
            axes.append([(f"verb:{form.value}", s) for form, s in verb_inflections(tok, tables)])
        elif tok in SLOT_KINDS:
            axes.append([(tok, p) for p in tables.pronoun_paradigms[tok]])
        else:
            continue
        positions.append(i)

    out = []
    seen: set[str] = set()
    for combo in itertools.product(*axes):
        realized = list(tokens)
        for pos, (_, value) in zip(positions, combo):
            realized[pos] = value
        surface = " ".join(realized)
        if surface not in seen:
            seen.add(surface)
            out.append(ExpandedPattern(surface=surface, entry_ref=entry.source_id, slot_bindings=tuple(combo)))
    return out


# ---------------------------------------------------------------------------
# dictionary


@dataclass(frozen=True)
class ReplacementDictionary:
    """Surface -> gloss mapping built from expanded lexicon entries.

    Immutable; patterns are sorted by surface and unique.
    """

    patterns: tuple[ExpandedPattern, ...]
    entries: tuple[LexiconEntry, ...]
    type_histogram: Mapping[ConstructType, int]
    warnings: tuple[str, ...] = ()
    _by_surface: Mapping[str, ExpandedPattern] = field(init=False, repr=False, compare=False)
    _by_id: Mapping[str, LexiconEntry] = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "type_histogram", MappingProxyType(dict(self.type_histogram)))
        object.__setattr__(self, "_by_surface", MappingProxyType({p.surface: p for p in self.patterns}))
        object.__setattr__(self, "_by_id", MappingProxyType({e.source_id: e for e in self.entries}))
        if len(self._by_surface) != len(self.patterns):
            raise ValueError("duplicate pattern surfaces")

    def __len__(self) -> int:
        return len(self.patterns)

    def surfaces(self) -> list[str]:
        return [p.surface for p in self.patterns]

    def pattern(self, surface: str) -> ExpandedPattern | None:
        return self._by_surface.get(surface)

    def entry(self, source_id: str) -> LexiconEntry | None:
        return self._by_id.get(source_id)

    def gloss(self, surface: str) -> str | None:
        pattern = self._by_surface.get(surface)
        if pattern is None:
            return None
        return self._by_id[pattern.entry_ref].gloss_clean

    def type_proportions(self) -> dict[str, float]:
        """Percent of entries per construct type."""
        total = sum(self.type_histogram.values())
        return {t.value: 100.0 * n / total for t, n in sorted(self.type_histogram.items(), key=lambda kv: kv[0].value)}


def build_dictionary(entries: Iterable[LexiconEntry], tables: InflectionTables | None = None) -> ReplacementDictionary:
    """Clean, expand and collapse ``entries``.

    Entries whose gloss cleans to nothing are skipped with a warning. When
    two entries produce the same surface, the one with the smaller
    source_id keeps it; a warning is recorded if their glosses differ.
    """
    tables = tables or default_tables()
    warnings: list[str] = []
    survivors: list[LexiconEntry] = []
    ids: set[str] = set()
    for entry in entries:
        if entry.source_id in ids:
            raise ValueError(f"duplicate source_id {entry.source_id!r}")
        ids.add(entry.source_id)
        if not entry.gloss_clean:
            try:
                entry = replace(entry, gloss_clean=clean_gloss(entry.gloss_raw))
            except GlossEmptyAfterCleaning as exc:
                msg = f"skipping {entry.source_id} ({entry.surface_template!r}): {exc}"
                log.warning(msg)
                warnings.append(msg)
                continue
        survivors.append(entry)
    if not survivors:
        raise EmptyDictionaryError("no lexicon entries survived cleaning")

    survivors.sort(key=lambda e: e.source_id)
    by_id = {e.source_id: e for e in survivors}
    chosen: dict[str, ExpandedPattern] = {}
    for entry in survivors:
        for pattern in expand_entry(entry, tables):
            held = chosen.get(pattern.surface)
            if held is None:
                chosen[pattern.surface] = pattern
            elif by_id[held.entry_ref].gloss_clean != entry.gloss_clean:
                msg = (
                    f"surface {pattern.surface!r} claimed by {held.entry_ref} and {entry.source_id}; "
                    f"keeping gloss of {held.entry_ref}"
                )
                log.warning(msg)
                warnings.append(msg)

    histogram = Counter(e.construct_type for e in survivors)
    return ReplacementDictionary(
        patterns=tuple(chosen[s] for s in sorted(chosen)),
        entries=tuple(survivors),
        type_histogram=dict(histogram),
        warnings=tuple(warnings),
    )


# ---------------------------------------------------------------------------
# compiled dictionary file: surface, gloss_clean, construct_type, source_id, bindings


def _format_bindings(bindings: tuple[tuple[str, str], ...]) -> str:
    return ";".join(f"{k}={v}" for k, v in bindings) or "-"


def _parse_bindings(text: str) -> tuple[tuple[str, str], ...]:
    if text in ("", "-"):
        return ()
    return tuple(tuple(item.split("=", 1)) for item in text.split(";"))  # type: ignore[misc]


def dictionary_records(dictionary: ReplacementDictionary) -> list[tuple[str, str, str, str, str]]:
    rows = []
    for p in dictionary.patterns:
        entry = dictionary.entry(p.entry_ref)
        rows.append((p.surface, entry.gloss_clean, entry.construct_type.value, p.entry_ref, _format_bindings(p.slot_bindings)))
    return rows


def save_dictionary(dictionary: ReplacementDictionary, path: str | Path) -> None:
    tsv.write_records(path, dictionary_records(dictionary))


def parse_dictionary(lines: Iterable[str]) -> ReplacementDictionary:
    """Rebuild a dictionary from its compiled form.

    Templates are not stored, so each reconstructed entry uses its
    alphabetically first surface as ``surface_template``.
    """
    patterns = []
    entries: dict[str, LexiconEntry] = {}
    for lineno, fields in tsv.iter_records(lines):
        if len(fields) not in (4, 5):
            raise LexiconFormatError(lineno, f"expected 4 or 5 fields in compiled dictionary, got {len(fields)}")
        surface, gloss, ctype, source_id = (tsv.unescape(f) for f in fields[:4])
        try:
            construct = ConstructType(ctype)
        except ValueError:
            raise LexiconFormatError(lineno, f"unknown construct type {ctype!r}") from None
        bindings = _parse_bindings(fields[4]) if len(fields) == 5 else ()
        patterns.append(ExpandedPattern(surface=surface, entry_ref=source_id, slot_bindings=bindings))
        if source_id not in entries:
            entries[source_id] = LexiconEntry(surface, gloss, gloss, construct, source_id)
        elif entries[source_id].gloss_clean != gloss:
            raise LexiconFormatError(lineno, f"source id {source_id!r} has conflicting glosses")
    if not patterns:
        raise EmptyDictionaryError("compiled dictionary is empty")
    patterns.sort(key=lambda p: p.surface)
    ordered = tuple(sorted(entries.values(), key=lambda e: e.source_id))
    return ReplacementDictionary(
        patterns=tuple(patterns),
        entries=ordered,
        type_histogram=dict(Counter(e.construct_type for e in ordered)),
    )


def load_dictionary(path: str | Path) -> ReplacementDictionary:
    return parse_dictionary(tsv.read_lines(path))
