"""Minimal English morphology for template expansion.

Only two things are needed to expand idiom templates: the closed-class
pronoun paradigms that fill ``someone``/``one's`` slots, and the five
inflected forms of a leading verb. Irregular (and rule-defeating) verbs
come from a bundled table; everything else goes through suffix rules.
"""

from __future__ import annotations

import enum
import functools
import re
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from types import MappingProxyType
from typing import Mapping


class VerbForm(enum.Enum):
    BASE = "base"
    THIRD_SINGULAR = "third_singular"
    PAST = "past"
    PAST_PARTICIPLE = "past_participle"
    PRESENT_PARTICIPLE = "present_participle"


class SlotKind(enum.Enum):
    POSSESSIVE = "possessive"
    OBJECTIVE = "objective"


# Expansion order for a verb: base, -s, past, past participle, -ing.
VERB_FORMS: tuple[VerbForm, ...] = tuple(VerbForm)

POSSESSIVE_PRONOUNS = ("my", "your", "his", "her", "its", "our", "their")
OBJECTIVE_PRONOUNS = ("me", "you", "him", "her", "it", "us", "them")

# slot marker -> paradigm kind
SLOT_KINDS: Mapping[str, SlotKind] = MappingProxyType(
    {
        "someone's": SlotKind.POSSESSIVE,
        "one's": SlotKind.POSSESSIVE,
        "someone": SlotKind.OBJECTIVE,
        "one": SlotKind.OBJECTIVE,
    }
)

_VOWELS = "aeiou"
_VOWEL_GROUP = re.compile(r"[aeiou]+")


@dataclass(frozen=True)
class InflectionTables:
    """Immutable verb and pronoun tables.

    ``irregular_verbs`` maps a lemma to ``(past, past_participle,
    third_singular, present_participle)``. ``known_verbs`` is the set of
    lemmas that count as verbs when they open a template; it always
    includes every irregular lemma.
    """

    irregular_verbs: Mapping[str, tuple[str, str, str, str]]
    pronoun_paradigms: Mapping[str, tuple[str, ...]]
    known_verbs: frozenset[str] = field(default_factory=frozenset)

    def __post_init__(self) -> None:
        object.__setattr__(self, "irregular_verbs", MappingProxyType(dict(self.irregular_verbs)))
        object.__setattr__(self, "pronoun_paradigms", MappingProxyType(dict(self.pronoun_paradigms)))
        object.__setattr__(
            self, "known_verbs", frozenset(self.known_verbs) | frozenset(self.irregular_verbs)
        )

    def is_verb(self, token: str) -> bool:
        return token in self.known_verbs


def default_paradigms() -> dict[str, tuple[str, ...]]:
    return {
        slot: POSSESSIVE_PRONOUNS if kind is SlotKind.POSSESSIVE else OBJECTIVE_PRONOUNS
        for slot, kind in SLOT_KINDS.items()
    }


def parse_irregular_table(lines) -> dict[str, tuple[str, str, str, str]]:
    """Parse TAB-separated ``lemma past past_participle third_singular present_participle`` rows."""
    table: dict[str, tuple[str, str, str, str]] = {}
    for lineno, raw in enumerate(lines, start=1):
        line = raw.rstrip("\r\n")
        if not line.strip() or line.lstrip().startswith("#"):
            continue
        fields = [f.strip().lower() for f in line.split("\t")]
        if len(fields) != 5 or not all(fields):
            raise ValueError(f"irregular verb table line {lineno}: expected 5 non-empty TAB-separated fields")
        lemma, past, pp, third, prog = fields
        table[lemma] = (past, pp, third, prog)
    return table


def _parse_word_list(text: str) -> frozenset[str]:
    words = set()
    for line in text.splitlines():
        if line.lstrip().startswith("#"):
            continue
        words.update(w.lower() for w in line.split())
    return frozenset(words)


def load_tables(irregular_path: str | Path | None = None, verbs_path: str | Path | None = None) -> InflectionTables:
    """Load tables, using the bundled resources unless paths are given."""
    if irregular_path is None and verbs_path is None:
        return default_tables()
    return _load(irregular_path, verbs_path)


def _load(irregular_path, verbs_path) -> InflectionTables:
    data = resources.files("figlit") / "data"
    if irregular_path is None:
        irregular_text = (data / "irregular_verbs.tsv").read_text(encoding="utf-8")
    else:
        irregular_text = Path(irregular_path).read_text(encoding="utf-8")
    if verbs_path is None:
        verbs_text = (data / "regular_verbs.txt").read_text(encoding="utf-8")
    else:
        verbs_text = Path(verbs_path).read_text(encoding="utf-8")
    return InflectionTables(
        irregular_verbs=parse_irregular_table(irregular_text.splitlines()),
        pronoun_paradigms=default_paradigms(),
        known_verbs=_parse_word_list(verbs_text),
    )


@functools.lru_cache(maxsize=1)
def default_tables() -> InflectionTables:
    return _load(None, None)


def pronoun_forms(kind: SlotKind, tables: InflectionTables | None = None) -> list[str]:
    tables = tables or default_tables()
    slot = "someone's" if kind is SlotKind.POSSESSIVE else "someone"
    return list(tables.pronoun_paradigms[slot])


def _is_consonant(ch: str) -> bool:
    return ch.isalpha() and ch not in _VOWELS


def _doubles_final_consonant(lemma: str) -> bool:
    # Monosyllabic CVC of at most four letters: stop -> stopped, beg -> begging.
    if len(lemma) < 3 or len(lemma) > 4:
        return False
    if len(_VOWEL_GROUP.findall(lemma)) != 1:
        return False
    c1, v, c2 = lemma[-3:]
    return _is_consonant(c1) and v in _VOWELS and _is_consonant(c2) and c2 not in "wxy"


def _third_singular(lemma: str) -> str:
    if lemma.endswith(("s", "x", "z", "ch", "sh")):
        return lemma + "es"
    if lemma.endswith("y") and len(lemma) > 1 and _is_consonant(lemma[-2]):
        return lemma[:-1] + "ies"
    return lemma + "s"


def _past(lemma: str) -> str:
    if lemma.endswith("e"):
        return lemma + "d"
    if lemma.endswith("y") and len(lemma) > 1 and _is_consonant(lemma[-2]):
        return lemma[:-1] + "ied"
    if _doubles_final_consonant(lemma):
        return lemma + lemma[-1] + "ed"
    return lemma + "ed"


def _present_participle(lemma: str) -> str:
    if lemma.endswith("ie"):
        return lemma[:-2] + "ying"
    if lemma.endswith("e") and not lemma.endswith(("ee", "ye", "oe")) and len(lemma) > 2:
        return lemma[:-1] + "ing"
    if _doubles_final_consonant(lemma):
        return lemma + lemma[-1] + "ing"
    return lemma + "ing"


def inflect_verb(lemma: str, form: VerbForm, tables: InflectionTables | None = None) -> str:
    """Return ``lemma`` in ``form``; table hits win over the suffix rules."""
    if form is VerbForm.BASE:
        return lemma
    tables = tables or default_tables()
    row = tables.irregular_verbs.get(lemma)
    if row is not None:
        past, pp, third, prog = row
        return {
            VerbForm.PAST: past,
            VerbForm.PAST_PARTICIPLE: pp,
            VerbForm.THIRD_SINGULAR: third,
            VerbForm.PRESENT_PARTICIPLE: prog,
        }[form]
    if form is VerbForm.THIRD_SINGULAR:
        return _third_singular(lemma)
    if form is VerbForm.PRESENT_PARTICIPLE:
        return _present_participle(lemma)
    return _past(lemma)


def verb_inflections(lemma: str, tables: InflectionTables | None = None) -> list[tuple[VerbForm, str]]:
    """All distinct surface forms of ``lemma`` in expansion order.

    When two forms coincide (``walked``/``walked``) only the first is kept,
    so the list length is the number of distinct inflected surfaces.
    """
    seen: set[str] = set()
    out = []
    for form in VERB_FORMS:
        surface = inflect_verb(lemma, form, tables)
        if surface not in seen:
            seen.add(surface)
            out.append((form, surface))
    return out
