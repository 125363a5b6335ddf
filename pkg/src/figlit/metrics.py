"""Reference-overlap and detection metrics, and before/after comparison.

BLEU follows Papineni et al.: clipped n-gram precisions, uniform-weight
geometric mean, brevity penalty against the closest reference length.
ROUGE-L is the balanced LCS F-measure. METEOR is not computed; reports
carry it as unavailable.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Mapping, Sequence

from figlit.errors import EvaluationError

_TOKEN = re.compile(r"[^\W_]+|[^\w\s]|_")

UNAVAILABLE = "unavailable"
POS_INF = "+inf"


def tokenize(text: str) -> list[str]:
    """Lowercase, split punctuation off, split on whitespace."""
    return _TOKEN.findall(text.lower())


def _ngrams(tokens: Sequence[str], n: int) -> Counter:
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


def _closest_ref_len(cand_len: int, references: Sequence[Sequence[str]]) -> int:
    return min((abs(len(r) - cand_len), len(r)) for r in references)[1]


def _clipped(candidate: Sequence[str], references: Sequence[Sequence[str]], k: int) -> tuple[int, int]:
    cand = _ngrams(candidate, k)
    max_ref: Counter = Counter()
    for ref in references:
        max_ref |= _ngrams(ref, k)
    matched = sum(min(c, max_ref[g]) for g, c in cand.items())
    return matched, max(len(candidate) - k + 1, 0)


def _combine(matches: Sequence[int], totals: Sequence[int], cand_len: int, ref_len: int, smooth: bool) -> float:
    if cand_len == 0:
        return 0.0
    log_sum = 0.0
    for k, (m, t) in enumerate(zip(matches, totals), start=1):
        if smooth and k > 1:
            m, t = m + 1, t + 1
        if m == 0 or t == 0:
            return 0.0
        log_sum += math.log(m / t)
    bp = 1.0 if cand_len > ref_len else math.exp(1.0 - ref_len / cand_len)
    return bp * math.exp(log_sum / len(matches))


def bleu_n(candidate: Sequence[str], references: Sequence[Sequence[str]], n: int = 4, smooth: bool = False) -> float:
    """Sentence BLEU up to order ``n``.

    Unsmoothed by default, so any zero precision gives 0. ``smooth`` adds
    one to numerator and denominator of orders 2 and up.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if not references:
        raise ValueError("at least one reference is required")
    stats = [_clipped(candidate, references, k) for k in range(1, n + 1)]
    return _combine(
        [m for m, _ in stats], [t for _, t in stats], len(candidate), _closest_ref_len(len(candidate), references), smooth
    )


def corpus_bleu(
    candidates: Sequence[Sequence[str]],
    references: Sequence[Sequence[Sequence[str]]],
    n: int = 4,
    smooth: bool = False,
) -> float:
    """Corpus BLEU: n-gram statistics and lengths summed before combining."""
    if len(candidates) != len(references):
        raise ValueError("candidates and references differ in length")
    matches = [0] * n
    totals = [0] * n
    cand_len = ref_len = 0
    for cand, refs in zip(candidates, references):
        if not refs:
            raise ValueError("at least one reference is required per candidate")
        for k in range(1, n + 1):
            m, t = _clipped(cand, refs, k)
            matches[k - 1] += m
            totals[k - 1] += t
        cand_len += len(cand)
        ref_len += _closest_ref_len(len(cand), refs)
    return _combine(matches, totals, cand_len, ref_len, smooth)


def lcs_length(a: Sequence[str], b: Sequence[str]) -> int:
    """Bit-parallel LCS length: one big-int update per token of ``b``."""
    if len(a) < len(b):
        a, b = b, a
    masks: dict = {}
    for i, x in enumerate(a):
        masks[x] = masks.get(x, 0) | (1 << i)
    full = (1 << len(a)) - 1
    v = full
    for y in b:
        u = v & masks.get(y, 0)
        v = ((v + u) | (v - u)) & full
    return len(a) - bin(v).count("1")


def rouge_l(candidate: Sequence[str], reference: Sequence[str] | Sequence[Sequence[str]]) -> float:
    """LCS F1. ``reference`` may be one token list or a list of them (max is taken)."""
    if reference and not isinstance(reference[0], str):
        return max((rouge_l(candidate, r) for r in reference), default=0.0)
    if not candidate or not reference:
        return 0.0
    lcs = lcs_length(candidate, reference)
    if lcs == 0:
        return 0.0
    p = lcs / len(candidate)
    r = lcs / len(reference)
    return 2 * p * r / (p + r)


def detection_recall(detected: Iterable[str], gold: Iterable[str]) -> float:
    gold = set(gold)
    if not gold:
        raise EvaluationError("recall is undefined for an empty gold set")
    return len(gold & set(detected)) / len(gold)


def detection_precision(detected: Iterable[str], gold: Iterable[str]) -> float | None:
    detected = set(detected)
    if not detected:
        return None
    return len(detected & set(gold)) / len(detected)


# ---------------------------------------------------------------------------
# comparison


def percent_change(before: float, after: float) -> float | str | None:
    """Signed ``(after - before) / before * 100``.

    ``before == 0`` gives ``0.0`` if nothing changed, ``"+inf"`` for an
    increase; a decrease from zero cannot happen for these metrics.
    """
    if before == 0:
        if after == 0:
            return 0.0
        return POS_INF if after > 0 else None
    return (after - before) / before * 100.0


def ranks(scores: Mapping[str, float]) -> dict[str, int]:
    """1-based rank, higher score first; ties go to the alphabetically earlier system."""
    ordered = sorted(scores, key=lambda s: (-scores[s], s))
    return {s: i for i, s in enumerate(ordered, start=1)}


@dataclass
class MetricsReport:
    """Scores per system and condition, with % change and rank change.

    ``rank_change`` is ``rank_before - rank_after``: positive means the
    system moved up.
    """

    scores: dict[str, dict[str, dict[str, float]]] = field(default_factory=dict)
    percent_change: dict[str, dict[str, float | str | None]] = field(default_factory=dict)
    rank_change: dict[str, dict[str, int]] = field(default_factory=dict)
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "scores": self.scores,
            "percent_change": self.percent_change,
            "rank_change": self.rank_change,
            "meteor": UNAVAILABLE,
            "notes": self.notes,
        }


def compare_conditions(
    before: Mapping[str, Mapping[str, float]],
    after: Mapping[str, Mapping[str, float]],
) -> MetricsReport:
    """``before``/``after`` map system -> metric -> score."""
    if set(before) != set(after):
        raise EvaluationError(f"system sets differ: {sorted(set(before) ^ set(after))}")
    systems = sorted(before)
    metrics = sorted({m for s in systems for m in before[s]})
    for s in systems:
        if set(before[s]) != set(after[s]):
            raise EvaluationError(f"{s}: metric sets differ: {sorted(set(before[s]) ^ set(after[s]))}")

    report = MetricsReport()
    for s in systems:
        report.scores[s] = {"before": dict(sorted(before[s].items())), "after": dict(sorted(after[s].items()))}
        report.percent_change[s] = {m: percent_change(before[s][m], after[s][m]) for m in metrics}
        report.rank_change[s] = {}
    for m in metrics:
        rb = ranks({s: before[s][m] for s in systems})
        ra = ranks({s: after[s][m] for s in systems})
        for s in systems:
            report.rank_change[s][m] = rb[s] - ra[s]
        for cond, sc in (("before", before), ("after", after)):
            values = [sc[s][m] for s in systems]
            if len(set(values)) < len(values):
                report.notes.append(f"{m}/{cond}: tied scores ranked by system name")
    return report


def overlap_scores(
    responses: Mapping[str, str],
    references: Mapping[str, Sequence[str]],
    smooth: bool = False,
    max_order: int = 4,
) -> dict[str, float]:
    """Corpus BLEU-1..``max_order`` and mean ROUGE-L over shared ids."""
    ids = sorted(responses)
    missing = [i for i in ids if i not in references]
    if missing:
        raise EvaluationError(f"responses without references: {missing[:5]}")
    if not ids:
        raise EvaluationError("no responses to score")
    cands = [tokenize(responses[i]) for i in ids]
    refs = [[tokenize(r) for r in references[i]] for i in ids]
    out = {f"bleu-{k}": corpus_bleu(cands, refs, k, smooth) for k in range(1, max_order + 1)}
    out["rouge-l"] = sum(rouge_l(c, r) for c, r in zip(cands, refs)) / len(ids)
    return out
