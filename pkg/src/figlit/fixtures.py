"""Seeded synthetic data: oracle-test cases, benchmark dictionaries, demo corpora.

Everything takes an explicit ``random.Random`` or seed so the CLI's
``gen-fixtures`` and the test suite produce identical data.
"""

from __future__ import annotations

import random
from pathlib import Path

from figlit import tsv
from figlit.inflection import default_tables
from figlit.lexicon import LexiconEntry, clean_gloss, expand_entry

# Short, prefix-sharing words so random patterns overlap, nest and
# straddle word boundaries ("music"/"musical", "a"/"ab").
ORACLE_WORDS = (
    "a", "ab", "abc", "b", "ba", "the", "kick", "get", "out", "of", "music",
    "musical", "face", "it", "its", "x1", "42", "é", "über",
)
ORACLE_SEPARATORS = (" ", " ", " ", "  ", ", ", ".", "-", "'", " . ", "_", "!")


def _random_case(rng: random.Random, word: str) -> str:
    roll = rng.random()
    if roll < 0.15:
        return word.upper()
    if roll < 0.3:
        return word.capitalize()
    return word


def oracle_case(rng: random.Random, n_utterances: int = 1000, n_patterns: int = 100) -> tuple[list[str], list[str]]:
    """Random ``(utterances, patterns)`` over a tiny vocabulary."""
    patterns: set[str] = set()
    while len(patterns) < n_patterns:
        k = rng.randint(1, 4)
        words = [rng.choice(ORACLE_WORDS) for _ in range(k)]
        seps = [rng.choice((" ", " ", " ", "-", "'")) for _ in range(k - 1)]
        pattern = words[0] + "".join(s + w for s, w in zip(seps, words[1:]))
        patterns.add(pattern)
    utterances = []
    for _ in range(n_utterances):
        k = rng.randint(0, 14)
        parts = []
        for i in range(k):
            if i:
                parts.append(rng.choice(ORACLE_SEPARATORS))
            parts.append(_random_case(rng, rng.choice(ORACLE_WORDS)))
        if rng.random() < 0.2:
            parts.append(rng.choice(ORACLE_SEPARATORS))
        utterances.append("".join(parts))
    return utterances, sorted(patterns)


# ---------------------------------------------------------------------------
# benchmark scale

_ONSETS = ("b", "c", "d", "f", "g", "h", "j", "k", "l", "m", "n", "p", "r", "s", "t", "v", "w", "br", "st", "tr", "ch", "sh")
_NUCLEI = ("a", "e", "i", "o", "u", "ai", "ea", "oo", "ou")


def pseudo_vocabulary(rng: random.Random, size: int) -> list[str]:
    words: set[str] = set()
    while len(words) < size:
        syllables = rng.randint(1, 3)
        words.add("".join(rng.choice(_ONSETS) + rng.choice(_NUCLEI) for _ in range(syllables)))
    return sorted(words)


def synthetic_patterns(rng: random.Random, n_patterns: int, vocabulary: list[str]) -> list[str]:
    patterns: set[str] = set()
    while len(patterns) < n_patterns:
        patterns.add(" ".join(rng.choice(vocabulary) for _ in range(rng.randint(2, 5))))
    return sorted(patterns)


def synthetic_utterances(
    rng: random.Random, n: int, vocabulary: list[str], patterns: list[str], plant_rate: float = 0.2
) -> list[str]:
    out = []
    for _ in range(n):
        words = [rng.choice(vocabulary) for _ in range(rng.randint(6, 18))]
        if patterns and rng.random() < plant_rate:
            pos = rng.randint(0, len(words))
            words[pos:pos] = [rng.choice(patterns)]
        sentence = " ".join(words)
        out.append(sentence[0].upper() + sentence[1:] + rng.choice((" .", " ?", " !", ".")))
    return out


# ---------------------------------------------------------------------------
# demo corpus

# (surface template, raw gloss, construct type)
DEMO_LEXICON: tuple[tuple[str, str, str], ...] = (
    ("a bridge too far", "(idiomatic) a step or action that is too ambitious", "idiom"),
    ("a life of its own", "an independent existence with some characteristics of life", "idiom"),
    ("as modern as next week", "thoroughly modern", "simile"),
    ("aurally challenged", "deaf or hard of hearing", "euphemism"),
    ("avoid like the plague", "evade or shun", "simile"),
    ("bear the brunt", "endure the worst part of something", "metaphor"),
    ("beat a dead horse", "persist or continue far beyond any specific purpose", "metaphor"),
    ("behind someone's back", "(US) without the person's knowledge", "idiom"),
    ("between jobs", "unemployed", "euphemism"),
    ("bite the dust", "(informal) die.", "euphemism"),
    ("break the ice", "start a conversation", "idiom"),
    ("built on sand", "unstable", "metaphor"),
    ("cede the field", "withdraw from any confrontational situation", "metaphor"),
    ("cost an arm and a leg", "be very expensive", "idiom"),
    ("drive someone up the wall", "annoy a person greatly", "idiom"),
    ("face the music", "bear the consequences of his actions", "idiom"),
    ("fill one's shoes", "take over a role", "idiom"),
    ("get a kick out of", "enjoy", "idiom"),
    ("get together", "start dating", "idiom"),
    ("hit the sack", "(slang) go to bed.", "idiom"),
    ("kick the bucket", "(informal, humorous) die", "euphemism"),
    ("on cloud nine", "very happy", "idiom"),
    ("once in a blue moon", "very rarely", "idiom"),
    ("pass away", "(euphemistic) die", "euphemism"),
    ("piece of cake", "something easy", "idiom"),
    ("slow as a snail", "very slow", "simile"),
    ("spill the beans", "reveal a secret", "idiom"),
    ("under the weather", "(informal) ill", "idiom"),
)

_FILLERS = (
    "what time does the shop open", "i have been working all week", "do you want some coffee",
    "the weather is nice today", "let us meet at the station", "how much is this jacket",
    "my brother lives in the city", "i am not sure about that", "we should leave soon",
    "that sounds like a good plan", "can you help me with this form", "i will call you tomorrow",
)
_FRAMES = ("i think {} .", "honestly , {} .", "{} , you know ?", "well , {} .", "do you {} ?")
_SPEAKERS = ("A", "B")
_ACTS = ("inform", "question", "directive", "commissive")


def demo_files(out_dir: str | Path, seed: int = 0, n_dialogs: int = 50, plant_rate: float = 0.15) -> dict[str, Path]:
    """Write a small, self-consistent set of input files and return their paths."""
    rng = random.Random(seed)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    tables = default_tables()
    entries = [LexiconEntry(s, g, source_id=f"D{i:03d}") for i, (s, g, _) in enumerate(DEMO_LEXICON)]
    realizations = [[p.surface for p in expand_entry(e, tables)] for e in entries]
    glosses = [g for _, g, _ in DEMO_LEXICON]

    corpus_rows, gold_rows, score_rows, ref_rows, before_rows, after_rows = [], [], [], [], [], []
    for d in range(n_dialogs):
        dialog_id = f"d{d:04d}"
        for turn in range(rng.randint(2, 7)):
            uid = f"{dialog_id}-{turn}"
            planted = rng.random() < plant_rate
            if planted:
                k = rng.randrange(len(entries))
                body = rng.choice(realizations[k])
                text = rng.choice(_FRAMES).format(body)
                literal = text.replace(body, clean_gloss(glosses[k]))
                gold_rows.append((uid, "idiom", literal, literal))
            else:
                text = rng.choice(_FILLERS) + rng.choice((" .", " ?", " !"))
            if turn == 0:
                text = text[0].upper() + text[1:]
            corpus_rows.append((dialog_id, turn, _SPEAKERS[turn % 2], rng.choice(_ACTS), text))
            score_rows.append((uid, f"{rng.betavariate(1.2, 6.0 if not planted else 1.5):.4f}"))
            if turn > 0:
                ref_rows.append((uid, text))
                ref_rows.append((uid, rng.choice(_FILLERS)))
                before_rows.append((uid, rng.choice(_FILLERS)))
                after_rows.append((uid, text if rng.random() < 0.3 else rng.choice(_FILLERS)))

    paths = {
        "lexicon": out / "lexicon.tsv",
        "corpus": out / "corpus.tsv",
        "gold": out / "gold.tsv",
        "scores": out / "scores.tsv",
        "references": out / "references.tsv",
        "responses_before": out / "responses_before.tsv",
        "responses_after": out / "responses_after.tsv",
    }
    tsv.write_records(paths["lexicon"], DEMO_LEXICON)
    with open(paths["corpus"], "w", encoding="utf-8", newline="\n") as fp:
        for row in corpus_rows:
            fp.write("\t".join(str(f) for f in row) + "\n")
    tsv.write_records(paths["gold"], gold_rows)
    tsv.write_records(paths["scores"], score_rows)
    tsv.write_records(paths["references"], ref_rows)
    tsv.write_records(paths["responses_before"], before_rows)
    tsv.write_records(paths["responses_after"], after_rows)
    return paths

