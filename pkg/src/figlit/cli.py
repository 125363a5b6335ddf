"""Batch command line: build-lexicon, detect, literalize, stats, evaluate, gen-fixtures.

Exit codes: 0 success, 1 invalid input or arguments, 2 internal error.
Set ``FIGLIT_LOG`` (DEBUG, INFO, WARNING, ...) for log verbosity.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path

from figlit import corpus as corpus_mod
from figlit import detector, fixtures, lexicon, literalizer, metrics, tsv
from figlit.errors import FiglitError

log = logging.getLogger("figlit")

EXIT_OK, EXIT_INVALID, EXIT_INTERNAL = 0, 1, 2


class UsageError(FiglitError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


@dataclass
class RunConfig:
    subcommand: str
    corpus: Path | None = None
    lexicon: Path | None = None
    dictionary: Path | None = None
    scores: Path | None = None
    gold: Path | None = None
    detections: Path | None = None
    references: Path | None = None
    before: list[tuple[str, Path]] = field(default_factory=list)
    after: list[tuple[str, Path]] = field(default_factory=list)
    out: Path | None = None
    threshold: float = detector.DEFAULT_THRESHOLD
    mode: literalizer.ContextMode = literalizer.ContextMode.ANYWHERE
    smooth: bool = False
    seed: int = 0
    dialogs: int = 50
    evaluate_kind: str = "overlap"
    source: str = "all"
    condition: str | None = None

    def input_paths(self) -> list[Path]:
        paths = [self.corpus, self.lexicon, self.dictionary, self.scores, self.gold, self.detections, self.references]
        paths += [p for _, p in self.before + self.after]
        return [p for p in paths if p is not None]

    def validate(self) -> None:
        """Check every path and option before any work starts."""
        for path in self.input_paths():
            if not path.is_file():
                raise UsageError(f"input file not found: {path}")
        if not 0.0 <= self.threshold <= 1.0:
            raise UsageError(f"--threshold {self.threshold} outside [0, 1]")
        if self.out is not None:
            resolved = self.out.resolve()
            if any(resolved == p.resolve() for p in self.input_paths()):
                raise UsageError(f"--out {self.out} would overwrite an input file")
            if self.subcommand != "gen-fixtures" and not resolved.parent.is_dir():
                raise UsageError(f"output directory does not exist: {self.out.parent}")


def _system_path(text: str) -> tuple[str, Path]:
    name, sep, path = text.partition("=")
    if not sep:
        return "system", Path(text)
    return name, Path(path)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="figlit", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="subcommand", required=True, parser_class=_Parser)

    def dict_source(p):
        p.add_argument("--lexicon", type=Path, help="raw lexicon TSV (built on the fly)")
        p.add_argument("--dictionary", type=Path, help="compiled dictionary from build-lexicon")

    p = sub.add_parser("build-lexicon", help="expand and compile a lexicon")
    p.add_argument("--lexicon", type=Path, required=True)
    p.add_argument("--out", type=Path, required=True)

    p = sub.add_parser("detect", help="find figurative utterances and idiom spans")
    p.add_argument("--corpus", type=Path, required=True)
    dict_source(p)
    p.add_argument("--scores", type=Path, help="metaphor probabilities per utterance")
    p.add_argument("--threshold", type=float, default=detector.DEFAULT_THRESHOLD)
    p.add_argument("--out", type=Path, required=True)

    p = sub.add_parser("literalize", help="replace idiom spans with glosses")
    p.add_argument("--corpus", type=Path, required=True)
    dict_source(p)
    p.add_argument("--detections", type=Path, help="spans from detect; otherwise detection runs here")
    p.add_argument("--scores", type=Path)
    p.add_argument("--threshold", type=float, default=detector.DEFAULT_THRESHOLD)
    p.add_argument("--gold", type=Path, help="only rewrite utterances listed in this gold file")
    p.add_argument("--mode", choices=[m.value for m in literalizer.ContextMode], default="anywhere")
    p.add_argument("--out", type=Path, required=True, help="rewrites; audit goes to <out stem>.audit.tsv")

    p = sub.add_parser("stats", help="figurative prevalence statistics")
    p.add_argument("--corpus", type=Path, required=True)
    p.add_argument("--gold", type=Path)
    p.add_argument("--detections", type=Path)
    p.add_argument("--out", type=Path, required=True)

    p = sub.add_parser("evaluate", help="overlap metrics before/after, or detection recall")
    p.add_argument("kind", choices=["overlap", "recall"])
    p.add_argument("--references", type=Path)
    p.add_argument("--before", type=_system_path, action="append", default=[], metavar="[SYSTEM=]PATH")
    p.add_argument("--after", type=_system_path, action="append", default=[], metavar="[SYSTEM=]PATH")
    p.add_argument("--smooth", action="store_true", help="add-one smoothing for BLEU orders >= 2")
    p.add_argument("--corpus", type=Path)
    p.add_argument("--detections", type=Path)
    p.add_argument("--gold", type=Path)
    p.add_argument("--condition", choices=[m.value for m in literalizer.ContextMode],
                   help="overlap: score only responses whose history has a figurative turn (needs --corpus and --detections or --gold)")
    p.add_argument("--source", choices=["all", "idiom", "metaphor"], default="all",
                   help="recall: which detections count")
    p.add_argument("--out", type=Path, required=True)

    p = sub.add_parser("gen-fixtures", help="write a small synthetic demo dataset")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--dialogs", type=int, default=50)
    p.add_argument("--out", type=Path, required=True)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(subcommand=args.subcommand)
    for name in ("corpus", "lexicon", "dictionary", "scores", "gold", "detections", "references", "out",
                 "threshold", "smooth", "seed", "dialogs", "before", "after", "source", "condition"):
        if hasattr(args, name):
            setattr(cfg, name, getattr(args, name))
    if getattr(args, "mode", None):
        cfg.mode = literalizer.ContextMode(args.mode)
    if getattr(args, "kind", None):
        cfg.evaluate_kind = args.kind
    return cfg


# ---------------------------------------------------------------------------
# commands


def _write_json(path: Path, payload) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fp:
        json.dump(payload, fp, indent=2, ensure_ascii=False, allow_nan=False)
        fp.write("\n")


def _load_dictionary(cfg: RunConfig) -> lexicon.ReplacementDictionary:
    if (cfg.lexicon is None) == (cfg.dictionary is None):
        raise UsageError("give exactly one of --lexicon or --dictionary")
    if cfg.dictionary is not None:
        return lexicon.load_dictionary(cfg.dictionary)
    return lexicon.build_dictionary(lexicon.load_lexicon(cfg.lexicon))


def cmd_build_lexicon(cfg: RunConfig) -> dict:
    entries = lexicon.load_lexicon(cfg.lexicon)
    dictionary = lexicon.build_dictionary(entries)
    collisions = detector.gloss_collisions(dictionary)
    for source_id, surface in collisions:
        log.warning("gloss of %s contains dictionary surface %r", source_id, surface)
    lexicon.save_dictionary(dictionary, cfg.out)
    return {
        "entries_read": len(entries),
        "entries_kept": len(dictionary.entries),
        "patterns": len(dictionary),
        "type_histogram": {t.value: n for t, n in sorted(dictionary.type_histogram.items(), key=lambda kv: kv[0].value)},
        "type_percent": dictionary.type_proportions(),
        "warnings": list(dictionary.warnings),
        "gloss_surface_collisions": len(collisions),
    }


def _detect(cfg: RunConfig, corpus, dictionary) -> detector.DetectionResult:
    matcher = detector.build_matcher(dictionary)
    scores = detector.load_scores(cfg.scores) if cfg.scores else None
    return detector.detect_all(corpus, matcher, scores, cfg.threshold)


def cmd_detect(cfg: RunConfig) -> dict:
    corpus = corpus_mod.load_corpus(cfg.corpus)
    dictionary = _load_dictionary(cfg)
    result = _detect(cfg, corpus, dictionary)
    detector.save_detections(result, corpus, cfg.out)
    summary = result.summary()
    summary["threshold"] = cfg.threshold
    summary["scores_given"] = cfg.scores is not None
    return summary


def audit_path(out: Path) -> Path:
    return out.with_name(out.stem + ".audit.tsv")


def cmd_literalize(cfg: RunConfig) -> dict:
    corpus = corpus_mod.load_corpus(cfg.corpus)
    dictionary = _load_dictionary(cfg)
    if cfg.detections is not None:
        detection = detector.load_detections(cfg.detections)
        unknown = {s.utterance_id for s in detection.spans} - set(corpus.ids())
        if unknown:
            raise UsageError(f"detections reference utterances not in corpus: {sorted(unknown)[:5]}")
    else:
        detection = _detect(cfg, corpus, dictionary)
    eligible = set(corpus_mod.load_gold(cfg.gold)) if cfg.gold else None
    records = literalizer.literalize_corpus(corpus, detection, dictionary, cfg.mode, eligible)
    literalizer.save_rewrites(records, cfg.out, audit_path(cfg.out))
    return {
        "utterances": len(records),
        "rewritten_utterances": sum(1 for r in records if r.replacements),
        "replacements": sum(len(r.replacements) for r in records),
        "mode": cfg.mode.value,
        "restricted_to_gold": cfg.gold is not None,
        "audit": str(audit_path(cfg.out)),
    }


def _figurative_ids(cfg: RunConfig, corpus) -> tuple[set[str], object]:
    if (cfg.gold is None) == (cfg.detections is None):
        raise UsageError("give exactly one of --gold or --detections")
    if cfg.gold is not None:
        gold = corpus_mod.load_gold(cfg.gold)
        corpus = corpus_mod.apply_gold(corpus, gold)
        return set(gold), corpus
    return detector.load_detections(cfg.detections).figurative_utterances, corpus


def cmd_stats(cfg: RunConfig) -> dict:
    corpus = corpus_mod.load_corpus(cfg.corpus)
    ids, corpus = _figurative_ids(cfg, corpus)
    report = corpus_mod.figurative_stats(corpus, ids).to_dict()
    _write_json(cfg.out, report)
    return report


def _read_keyed(path: Path, multi: bool) -> dict:
    out: dict = {}
    for lineno, fields in tsv.iter_records(tsv.read_lines(path), maxsplit=1):
        if len(fields) != 2:
            raise UsageError(f"{path}:{lineno}: expected utterance_id<TAB>text")
        uid, text = fields[0].strip(), tsv.unescape(fields[1])
        if multi:
            out.setdefault(uid, []).append(text)
        elif uid in out:
            raise UsageError(f"{path}:{lineno}: duplicate utterance id {uid!r}")
        else:
            out[uid] = text
    return out


def _evaluate_overlap(cfg: RunConfig) -> dict:
    if cfg.references is None or not cfg.before or not cfg.after:
        raise UsageError("overlap needs --references, --before and --after")
    references = _read_keyed(cfg.references, multi=True)
    before = {name: _read_keyed(p, multi=False) for name, p in cfg.before}
    after = {name: _read_keyed(p, multi=False) for name, p in cfg.after}
    if len(before) != len(cfg.before) or len(after) != len(cfg.after):
        raise UsageError("system names must be unique")
    if set(before) != set(after):
        raise UsageError(f"systems differ between --before and --after: {sorted(set(before) ^ set(after))}")
    for name in before:
        diff = set(before[name]) ^ set(after[name])
        if diff:
            raise UsageError(f"{name}: utterance ids differ between runs: {sorted(diff)[:10]}")

    keep = None
    if cfg.condition:
        if cfg.corpus is None:
            raise UsageError("--condition needs --corpus")
        corpus = corpus_mod.load_corpus(cfg.corpus)
        ids, _ = _figurative_ids(cfg, corpus)
        conds = corpus_mod.history_conditions(corpus, ids)
        pos = 0 if cfg.condition == literalizer.ContextMode.LAST_UTTERANCE.value else 1
        keep = {uid for uid, flags in conds.items() if flags[pos]}

    def score(runs):
        out = {}
        for name, responses in sorted(runs.items()):
            if keep is not None:
                responses = {k: v for k, v in responses.items() if k in keep}
            out[name] = metrics.overlap_scores(responses, references, smooth=cfg.smooth)
        return out

    report = metrics.compare_conditions(score(before), score(after)).to_dict()
    report["smoothing"] = "add-one" if cfg.smooth else "none"
    if keep is not None:
        report["condition"] = cfg.condition
        report["responses_scored"] = {n: len(set(r) & keep) for n, r in sorted(before.items())}
    return report


def _evaluate_recall(cfg: RunConfig) -> dict:
    if cfg.detections is None or cfg.gold is None:
        raise UsageError("recall needs --detections and --gold")
    det = detector.load_detections(cfg.detections)
    detected = {
        "all": det.figurative_utterances,
        "idiom": det.idiom_utterances,
        "metaphor": det.metaphor_utterances,
    }[cfg.source]
    gold = set(corpus_mod.load_gold(cfg.gold))
    return {
        "source": cfg.source,
        "detected": len(detected),
        "gold": len(gold),
        "recall": metrics.detection_recall(detected, gold),
        "precision": metrics.detection_precision(detected, gold),
    }


def cmd_evaluate(cfg: RunConfig) -> dict:
    report = _evaluate_overlap(cfg) if cfg.evaluate_kind == "overlap" else _evaluate_recall(cfg)
    _write_json(cfg.out, report)
    return report


def cmd_gen_fixtures(cfg: RunConfig) -> dict:
    paths = fixtures.demo_files(cfg.out, seed=cfg.seed, n_dialogs=cfg.dialogs)
    return {name: str(path) for name, path in paths.items()}


COMMANDS = {
    "build-lexicon": cmd_build_lexicon,
    "detect": cmd_detect,
    "literalize": cmd_literalize,
    "stats": cmd_stats,
    "evaluate": cmd_evaluate,
    "gen-fixtures": cmd_gen_fixtures,
}


def _configure_logging() -> None:
    level = os.environ.get("FIGLIT_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), format="%(levelname)s %(name)s: %(message)s")


def main(argv: list[str] | None = None) -> int:
    _configure_logging()
    parser = build_parser()
    args = parser.parse_args(argv)
    cfg = config_from_args(args)
    try:
        cfg.validate()
        summary = COMMANDS[cfg.subcommand](cfg)
    except (FiglitError, OSError, UnicodeDecodeError) as exc:
        print(f"figlit {cfg.subcommand}: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except Exception:
        log.exception("internal error")
        return EXIT_INTERNAL
    json.dump(summary, sys.stdout, indent=2, ensure_ascii=False, allow_nan=False)
    sys.stdout.write("\n")
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
