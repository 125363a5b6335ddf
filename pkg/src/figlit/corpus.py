"""Dialog corpus loading and figurative-prevalence statistics.

Corpus file: one utterance per line,
``dialog_id<TAB>turn_index<TAB>speaker<TAB>dialog_act|-<TAB>text``.
An utterance's id is ``<dialog_id>-<turn_index>``.
"""

from __future__ import annotations

import enum
from collections import Counter
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Iterable, Iterator

from figlit import tsv
from figlit.errors import CorpusFormatError


class DialogAct(enum.Enum):
    INFORM = "inform"
    QUESTION = "question"
    DIRECTIVE = "directive"
    COMMISSIVE = "commissive"


# Numeric act codes 1-4 as used by common dialog-act annotations.
_ACT_CODES = {"1": DialogAct.INFORM, "2": DialogAct.QUESTION, "3": DialogAct.DIRECTIVE, "4": DialogAct.COMMISSIVE}


class GoldConstruct(enum.Enum):
    METAPHOR = "metaphor"
    IDIOM = "idiom"
    RHETORICAL_QUESTION = "rhetorical_question"
    HYPERBOLE = "hyperbole"
    PERSONIFICATION = "personification"


def utterance_id(dialog_id: str, turn_index: int) -> str:
    return f"{dialog_id}-{turn_index}"


@dataclass(frozen=True)
class Utterance:
    dialog_id: str
    turn_index: int
    speaker: str
    text: str
    dialog_act: DialogAct | None = None
    gold_figurative: bool | None = None
    gold_literal_versions: tuple[str, ...] = ()
    gold_construct_types: frozenset[GoldConstruct] = frozenset()

    def __post_init__(self) -> None:
        if self.gold_literal_versions and not self.gold_figurative:
            raise ValueError(f"{self.id}: literal versions given for a non-figurative utterance")

    @property
    def id(self) -> str:
        return utterance_id(self.dialog_id, self.turn_index)


@dataclass(frozen=True)
class Dialog:
    dialog_id: str
    utterances: tuple[Utterance, ...]

    def __post_init__(self) -> None:
        if not self.utterances:
            raise ValueError(f"dialog {self.dialog_id!r} is empty")

    def __len__(self) -> int:
        return len(self.utterances)


@dataclass(frozen=True)
class Corpus:
    dialogs: tuple[Dialog, ...]
    name: str = ""

    def __post_init__(self) -> None:
        if not self.dialogs:
            raise CorpusFormatError("a corpus needs at least one dialog")
        index: dict[str, Utterance] = {}
        for utt in self.utterances():
            if utt.id in index:
                raise CorpusFormatError(f"duplicate utterance id {utt.id!r}")
            index[utt.id] = utt
        object.__setattr__(self, "_index", index)

    def utterances(self) -> Iterator[Utterance]:
        for dialog in self.dialogs:
            yield from dialog.utterances

    @property
    def num_utterances(self) -> int:
        return sum(len(d) for d in self.dialogs)

    def ids(self) -> list[str]:
        return list(self._index)

    def get(self, uid: str) -> Utterance:
        return self._index[uid]

    def __contains__(self, uid: str) -> bool:
        return uid in self._index


# ---------------------------------------------------------------------------
# io


def parse_act(text: str) -> DialogAct | None:
    text = text.strip().lower()
    if text in ("", "-"):
        return None
    if text in _ACT_CODES:
        return _ACT_CODES[text]
    return DialogAct(text)


def parse_corpus(lines: Iterable[str], name: str = "") -> Corpus:
    order: list[str] = []
    grouped: dict[str, list[Utterance]] = {}
    for lineno, fields in tsv.iter_records(lines, maxsplit=4):
        if len(fields) != 5:
            raise CorpusFormatError(f"line {lineno}: expected 5 TAB-separated fields, got {len(fields)}")
        dialog_id, turn, speaker, act, text = fields
        dialog_id = dialog_id.strip()
        if not dialog_id:
            raise CorpusFormatError(f"line {lineno}: empty dialog id")
        try:
            turn_index = int(turn)
        except ValueError:
            raise CorpusFormatError(f"line {lineno}: turn index {turn!r} is not an integer") from None
        if turn_index < 0:
            raise CorpusFormatError(f"line {lineno}: negative turn index")
        try:
            dialog_act = parse_act(act)
        except ValueError:
            raise CorpusFormatError(f"line {lineno}: unknown dialog act {act!r}") from None
        utt = Utterance(dialog_id, turn_index, speaker.strip(), text, dialog_act)
        turns = grouped.get(dialog_id)
        if turns is None:
            grouped[dialog_id] = turns = []
            order.append(dialog_id)
        if any(t.turn_index == turn_index for t in turns):
            raise CorpusFormatError(f"line {lineno}: duplicate utterance id {utt.id!r}")
        if turns and turn_index <= turns[-1].turn_index:
            raise CorpusFormatError(
                f"line {lineno}: turn index {turn_index} does not increase in dialog {dialog_id!r}"
            )
        turns.append(utt)
    if not order:
        raise CorpusFormatError("corpus file contains no utterances")
    return Corpus(tuple(Dialog(d, tuple(grouped[d])) for d in order), name=name)


def load_corpus(path: str | Path) -> Corpus:
    return parse_corpus(tsv.read_lines(path), name=Path(path).stem)


def corpus_lines(corpus: Corpus) -> list[str]:
    out = []
    for utt in corpus.utterances():
        act = utt.dialog_act.value if utt.dialog_act else "-"
        out.append(f"{utt.dialog_id}\t{utt.turn_index}\t{utt.speaker}\t{act}\t{utt.text}\n")
    return out


def save_corpus(corpus: Corpus, path: str | Path) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fp:
        fp.writelines(corpus_lines(corpus))


# ---------------------------------------------------------------------------
# gold annotations: utterance_id, types (comma-joined or -), literal_1, literal_2


@dataclass(frozen=True)
class GoldAnnotation:
    construct_types: frozenset[GoldConstruct]
    literal_versions: tuple[str, ...]


def parse_gold(lines: Iterable[str]) -> dict[str, GoldAnnotation]:
    gold: dict[str, GoldAnnotation] = {}
    for lineno, fields in tsv.iter_records(lines):
        if not 1 <= len(fields) <= 4:
            raise CorpusFormatError(f"gold line {lineno}: expected 1-4 fields, got {len(fields)}")
        uid = fields[0].strip()
        if uid in gold:
            raise CorpusFormatError(f"gold line {lineno}: duplicate id {uid!r}")
        types: set[GoldConstruct] = set()
        if len(fields) > 1 and fields[1].strip() not in ("", "-"):
            for name in fields[1].split(","):
                try:
                    types.add(GoldConstruct(name.strip().lower().replace(" ", "_")))
                except ValueError:
                    raise CorpusFormatError(f"gold line {lineno}: unknown construct {name.strip()!r}") from None
        literals = tuple(tsv.unescape(f) for f in fields[2:] if f.strip())
        gold[uid] = GoldAnnotation(frozenset(types), literals)
    return gold


def load_gold(path: str | Path) -> dict[str, GoldAnnotation]:
    return parse_gold(tsv.read_lines(path))


def apply_gold(corpus: Corpus, gold: dict[str, GoldAnnotation]) -> Corpus:
    """Mark gold ids figurative and every other utterance literal."""
    unknown = set(gold) - set(corpus.ids())
    if unknown:
        raise CorpusFormatError(f"gold ids not in corpus: {sorted(unknown)[:5]}")
    dialogs = []
    for dialog in corpus.dialogs:
        utts = []
        for u in dialog.utterances:
            ann = gold.get(u.id)
            if ann is None:
                utts.append(replace(u, gold_figurative=False, gold_literal_versions=(), gold_construct_types=frozenset()))
            else:
                utts.append(
                    replace(
                        u,
                        gold_figurative=True,
                        gold_literal_versions=ann.literal_versions,
                        gold_construct_types=ann.construct_types,
                    )
                )
        dialogs.append(Dialog(dialog.dialog_id, tuple(utts)))
    return Corpus(tuple(dialogs), name=corpus.name)


def gold_ids(corpus: Corpus) -> set[str]:
    return {u.id for u in corpus.utterances() if u.gold_figurative}


# ---------------------------------------------------------------------------
# statistics


@dataclass
class StatsReport:
    utterances: int
    dialogs: int
    figurative_utterances: int
    figurative_dialogs: int
    utterance_level_freq: float
    dialog_level_freq: float
    amplification: float | None
    construct_type_freqs: dict[str, float] = field(default_factory=dict)
    dialog_act_crosstab: dict[str, dict[str, float]] | None = None

    def to_dict(self) -> dict:
        return {
            "utterances": self.utterances,
            "dialogs": self.dialogs,
            "figurative_utterances": self.figurative_utterances,
            "figurative_dialogs": self.figurative_dialogs,
            "utterance_level_freq": self.utterance_level_freq,
            "dialog_level_freq": self.dialog_level_freq,
            "amplification": self.amplification,
            "construct_type_freqs": self.construct_type_freqs,
            "dialog_act_crosstab": self.dialog_act_crosstab,
        }


def _check_ids(corpus: Corpus, figurative_ids: Iterable[str]) -> set[str]:
    ids = set(figurative_ids)
    unknown = ids - set(corpus.ids())
    if unknown:
        raise CorpusFormatError(f"figurative ids not in corpus: {sorted(unknown)[:5]}")
    return ids


def act_crosstab(corpus: Corpus, figurative_ids: Iterable[str]) -> dict[DialogAct, tuple[float, float]]:
    """Per act: (fraction among figurative utterances, fraction among all).

    The figurative fraction is 0.0 for every act when the set is empty.
    """
    ids = _check_ids(corpus, figurative_ids)
    utts = list(corpus.utterances())
    if any(u.dialog_act is None for u in utts):
        raise CorpusFormatError("corpus lacks dialog-act labels on some utterances")
    overall = Counter(u.dialog_act for u in utts)
    fig = Counter(u.dialog_act for u in utts if u.id in ids)
    n_fig = sum(fig.values())
    return {
        act: (fig[act] / n_fig if n_fig else 0.0, overall[act] / len(utts))
        for act in DialogAct
    }


def figurative_stats(corpus: Corpus, figurative_ids: Iterable[str]) -> StatsReport:
    ids = _check_ids(corpus, figurative_ids)
    n_utts = corpus.num_utterances
    n_dialogs = len(corpus.dialogs)
    fig_dialogs = sum(1 for d in corpus.dialogs if any(u.id in ids for u in d.utterances))
    utt_freq = len(ids) / n_utts
    dlg_freq = fig_dialogs / n_dialogs

    type_counts: Counter[GoldConstruct] = Counter()
    for u in corpus.utterances():
        if u.id in ids:
            type_counts.update(u.gold_construct_types)
    type_freqs = {t.value: type_counts[t] / len(ids) for t in GoldConstruct if type_counts[t]} if ids else {}

    crosstab = None
    if all(u.dialog_act is not None for u in corpus.utterances()):
        crosstab = {
            act.value: {"figurative": f, "overall": o} for act, (f, o) in act_crosstab(corpus, ids).items()
        }
    return StatsReport(
        utterances=n_utts,
        dialogs=n_dialogs,
        figurative_utterances=len(ids),
        figurative_dialogs=fig_dialogs,
        utterance_level_freq=utt_freq,
        dialog_level_freq=dlg_freq,
        amplification=dlg_freq / utt_freq if utt_freq else None,
        construct_type_freqs=type_freqs,
        dialog_act_crosstab=crosstab,
    )


def history_conditions(corpus: Corpus, figurative_ids: Iterable[str]) -> dict[str, tuple[bool, bool]]:
    """For every utterance with a non-empty history: (last history turn figurative, any history turn figurative).

    The history of a response is every earlier utterance of its dialog.
    """
    ids = set(figurative_ids)
    out = {}
    for dialog in corpus.dialogs:
        seen_fig = False
        prev = None
        for utt in dialog.utterances:
            if prev is not None:
                out[utt.id] = (prev.id in ids, seen_fig)
            seen_fig = seen_fig or utt.id in ids
            prev = utt
    return out
