"""Seeded random instances for sweeps and property tests."""
from __future__ import annotations

import random
from dataclasses import dataclass

from .product import ProductTree, build_product
from .trees import RootedTreePrefix, _from_child_counts, random_prefix, relabel


@dataclass(frozen=True)
class CorpusConfig:
    max_d: int = 3
    max_index: int = 2
    max_children: int = 4
    max_vertices: int = 400
    extra_depth: int = 0


def random_factors(rng: random.Random, cfg: CorpusConfig, d: int | None = None) -> list[RootedTreePrefix]:
    d = rng.randint(1, cfg.max_d) if d is None else d
    return [random_prefix(rng, rng.randint(0, cfg.max_index), cfg.max_children, name=f"t{j}")
            for j in range(d)]


def random_product(rng: random.Random, cfg: CorpusConfig = CorpusConfig()) -> ProductTree:
    """A product built to depth 1 + total branching bound (+ extra_depth),
    resampled until it has at most ``max_vertices`` vertices."""
    while True:
        fs = random_factors(rng, cfg)
        D = 1 + sum(t.branching_index for t in fs) + cfg.extra_depth
        fs = [t.extend(D) for t in fs]
        if _count_vertices(fs, D) <= cfg.max_vertices:
            return build_product(fs, D)


def _count_vertices(fs: list[RootedTreePrefix], D: int) -> int:
    # convolution of generation counts, without enumerating
    counts = [1] + [0] * D
    for t in fs:
        g = t.generations(D)
        counts = [sum(counts[i] * g[n - i] for i in range(n + 1)) for n in range(D + 1)]
    return sum(counts)


def same_generations(rng: random.Random, t: RootedTreePrefix, name: str = "") -> RootedTreePrefix:
    """A random tree with the generation counts of ``t`` (children of each
    generation redistributed, every vertex keeping at least one)."""
    g = t.generations(t.D)
    counts = []
    for n in range(t.branching_index):
        width, total = g[n], g[n + 1]
        cuts = sorted(rng.sample(range(1, total), width - 1)) if width > 1 else []
        bounds = [0] + cuts + [total]
        counts.append([bounds[i + 1] - bounds[i] for i in range(width)])
    return _from_child_counts(counts, t.D, name or t.name + "'")


def random_pair(rng: random.Random, cfg: CorpusConfig = CorpusConfig()):
    """Two factor tuples of equal length: unrelated, a reshuffle with the same
    generation counts, or a relabelling, with equal probability.
    Coordinates are never permuted: the module structure depends on their order."""
    d = rng.randint(1, cfg.max_d)
    T1 = random_factors(rng, cfg, d)
    mode = rng.choice(["random", "same_generations", "relabel"])
    if mode == "random":
        T2 = random_factors(rng, cfg, d)
    elif mode == "same_generations":
        T2 = [same_generations(rng, t) for t in T1]
    else:
        T2 = [relabel(t, rng) for t in T1]
    return T1, T2, mode
