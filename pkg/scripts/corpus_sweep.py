"""Sweep a seeded corpus of random products: block dimensions against exact
null spaces, dim E against the brute-force joint kernel, and the joint kernel
span across weight sequences."""
from __future__ import annotations

import argparse
import random
import time
from dataclasses import dataclass

from dartree.cokernel import dim_E, joint_kernel_bruteforce, kernel_blocks
from dartree.corpus import CorpusConfig, random_product
from dartree.exact import span_equal
from dartree.multishift import WeightSequence, family_weights


@dataclass
class SweepConfig:
    seed: int = 0
    size: int = 100
    weights: tuple[str, ...] = ("c_a:1", "c_a:3", "table:2,1;eventual=1")
    corpus: CorpusConfig = CorpusConfig()


def sweep(cfg: SweepConfig) -> dict:
    rng = random.Random(cfg.seed)
    seqs = [WeightSequence.parse(s) for s in cfg.weights]
    stats = {"products": 0, "blocks": 0, "block_mismatch": 0, "dimE_mismatch": 0, "span_mismatch": 0}
    for _ in range(cfg.size):
        p = random_product(rng, cfg.corpus)
        stats["products"] += 1
        for b in kernel_blocks(p):
            stats["blocks"] += 1
            stats["block_mismatch"] += len(b.basis) != b.dim_closed
        bases = [joint_kernel_bruteforce(family_weights(p, c)) for c in seqs]
        stats["dimE_mismatch"] += dim_E(p) != len(bases[0])
        stats["span_mismatch"] += not all(span_equal(bases[0], b) for b in bases[1:])
    return stats


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--size", type=int, default=100)
    ap.add_argument("--max-d", type=int, default=3)
    ap.add_argument("--extra-depth", type=int, default=0)
    args = ap.parse_args()
    cfg = SweepConfig(seed=args.seed, size=args.size,
                      corpus=CorpusConfig(max_d=args.max_d, extra_depth=args.extra_depth))
    start = time.perf_counter()
    stats = sweep(cfg)
    for k, v in stats.items():
        print(f"{k:>16}: {v}")
    print(f"{'seconds':>16}: {time.perf_counter() - start:.2f}")


if __name__ == "__main__":
    main()
