"""Run the whole CLI pipeline on a seeded demo corpus and print each summary.

    python scripts/run_pipeline.py --out runs/demo --seed 0
"""

import argparse
import json
from pathlib import Path

from figlit.cli import main as figlit


def step(name: str, argv: list) -> None:
    print(f"$ figlit {' '.join(map(str, argv))}")
    code = figlit([str(a) for a in argv])
    if code != 0:
        raise SystemExit(f"{name} failed with exit code {code}")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", type=Path, default=Path("runs/demo"))
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--dialogs", type=int, default=200)
    parser.add_argument("--threshold", type=float, default=0.9)
    args = parser.parse_args()

    data = args.out / "inputs"
    out = args.out
    step("gen-fixtures", ["gen-fixtures", "--seed", args.seed, "--dialogs", args.dialogs, "--out", data])
    step("build-lexicon", ["build-lexicon", "--lexicon", data / "lexicon.tsv", "--out", out / "dictionary.tsv"])
    step("detect", ["detect", "--corpus", data / "corpus.tsv", "--dictionary", out / "dictionary.tsv",
                    "--scores", data / "scores.tsv", "--threshold", args.threshold, "--out", out / "detections.tsv"])
    for mode in ("last-utterance", "anywhere"):
        step("literalize", ["literalize", "--corpus", data / "corpus.tsv", "--dictionary", out / "dictionary.tsv",
                            "--detections", out / "detections.tsv", "--mode", mode, "--out", out / f"literal_{mode}.tsv"])
    step("stats (gold)", ["stats", "--corpus", data / "corpus.tsv", "--gold", data / "gold.tsv", "--out", out / "stats_gold.json"])
    step("stats (detected)", ["stats", "--corpus", data / "corpus.tsv", "--detections", out / "detections.tsv",
                              "--out", out / "stats_detected.json"])
    step("recall", ["evaluate", "recall", "--detections", out / "detections.tsv", "--gold", data / "gold.tsv",
                    "--out", out / "recall.json"])
    step("overlap", ["evaluate", "overlap", "--references", data / "references.tsv",
                     "--before", f"demo={data / 'responses_before.tsv'}", "--after", f"demo={data / 'responses_after.tsv'}",
                     "--out", out / "overlap.json"])
    recall = json.loads((out / "recall.json").read_text())
    print(f"recall against gold: {recall['recall']:.3f}")


if __name__ == "__main__":
    main()
