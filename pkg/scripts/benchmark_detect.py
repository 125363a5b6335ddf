"""Time lexicon detection on synthetic data.

    python scripts/benchmark_detect.py --utterances 100000 --patterns 18000
"""

import argparse
import random
import time

from figlit.corpus import Corpus, Dialog, Utterance
from figlit.detector import Matcher, detect_all
from figlit.fixtures import pseudo_vocabulary, synthetic_patterns, synthetic_utterances


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--utterances", type=int, default=100_000)
    parser.add_argument("--patterns", type=int, default=18_000)
    parser.add_argument("--vocab", type=int, default=5000)
    parser.add_argument("--plant-rate", type=float, default=0.2)
    parser.add_argument("--repeats", type=int, default=5)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    rng = random.Random(args.seed)
    vocab = pseudo_vocabulary(rng, args.vocab)
    patterns = synthetic_patterns(rng, args.patterns, vocab)
    texts = synthetic_utterances(rng, args.utterances, vocab, patterns, args.plant_rate)
    corpus = Corpus(tuple(Dialog(f"d{i}", (Utterance(f"d{i}", 0, "A", t),)) for i, t in enumerate(texts)))
    chars = sum(map(len, texts))

    build, scan = [], []
    for _ in range(args.repeats):
        t0 = time.perf_counter()
        matcher = Matcher(patterns)
        t1 = time.perf_counter()
        result = detect_all(corpus, matcher)
        t2 = time.perf_counter()
        build.append(t1 - t0)
        scan.append(t2 - t1)

    best = min(b + s for b, s in zip(build, scan))
    print(f"utterances     {args.utterances:>12,}")
    print(f"patterns       {matcher.pattern_count:>12,}")
    print(f"characters     {chars:>12,}")
    print(f"spans          {len(result.spans):>12,}")
    print(f"build (best)   {min(build):>12.3f} s")
    print(f"scan (best)    {min(scan):>12.3f} s")
    print(f"total (best)   {best:>12.3f} s")
    print(f"throughput     {args.utterances / best:>12,.0f} utterances/s")
    print(f"               {chars / best / 1e6:>12.1f} M chars/s")


if __name__ == "__main__":
    main()
