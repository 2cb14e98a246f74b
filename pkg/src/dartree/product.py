"""Directed Cartesian products of rooted trees, enumerated up to a total depth.

Coordinates are 0-based throughout: a product vertex is a tuple of factor ids
and ``F`` is a set of coordinate indices in ``range(d)``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from math import prod
from typing import Iterable, Sequence

from .errors import DepthBoundExceedsFactor, InvalidParameter, RootHasNoParent, VertexNotInPhiF
from .trees import RootedTreePrefix

Vertex = tuple[int, ...]


def compositions(total: int, parts: int) -> Iterable[tuple[int, ...]]:
    """All multi-indices in N^parts with the given sum, lexicographically."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    if parts == 1:
        yield (total,)
        return
    for first in range(total, -1, -1):
        for rest in compositions(total - first, parts - 1):
            yield (first,) + rest


def multi_indices(d: int, max_total: int) -> list[tuple[int, ...]]:
    return [a for n in range(max_total + 1) for a in sorted(compositions(n, d))]


def as_coords(F: Iterable[int]) -> tuple[int, ...]:
    return tuple(sorted(set(F)))


@dataclass(frozen=True, eq=False)
class ProductTree:
    """``factors[0] x ... x factors[d-1]`` restricted to total depth ``Dtot``."""

    factors: tuple[RootedTreePrefix, ...]
    Dtot: int
    ext: tuple[RootedTreePrefix, ...] = field(repr=False, default=())
    vertices: tuple[Vertex, ...] = field(repr=False, default=())
    index: dict[Vertex, int] = field(repr=False, default_factory=dict)
    gens: tuple[tuple[Vertex, ...], ...] = field(repr=False, default=())

    @property
    def d(self) -> int:
        return len(self.factors)

    @property
    def root(self) -> Vertex:
        return tuple(t.root for t in self.factors)

    def __len__(self) -> int:
        return len(self.vertices)

    def __contains__(self, v) -> bool:
        return tuple(v) in self.index

    def depth(self, v: Vertex) -> tuple[int, ...]:
        return tuple(t.depth[x] for t, x in zip(self.ext, v))

    def total_depth(self, v: Vertex) -> int:
        return sum(t.depth[x] for t, x in zip(self.ext, v))

    def generation(self, t: int) -> tuple[Vertex, ...]:
        return self.gens[t] if 0 <= t <= self.Dtot else ()

    def generation_count(self, t: int) -> int:
        """card(G_t) of the infinite product, by convolution of factor counts."""
        return sum(prod(f.generation_count(b) for f, b in zip(self.factors, beta))
                   for beta in compositions(t, self.d))

    def branching_bound(self) -> int:
        return sum(t.branching_index for t in self.factors)

    # -------------------------------------------------------------- navigation

    def is_root_coord(self, v: Vertex, j: int) -> bool:
        return v[j] == self.ext[j].root

    def support(self, v: Vertex) -> tuple[int, ...]:
        """Coordinates where ``v`` is not the factor root."""
        return tuple(j for j in range(self.d) if v[j] != self.ext[j].root)

    def chi_j(self, v: Vertex, j: int) -> list[Vertex]:
        return [v[:j] + (c,) + v[j + 1:] for c in self.ext[j].children[v[j]]]

    def par_j(self, v: Vertex, j: int) -> Vertex:
        p = self.ext[j].parent[v[j]]
        if p is None:
            raise RootHasNoParent(f"coordinate {j} of {v} is the root")
        return v[:j] + (p,) + v[j + 1:]

    def sib_j(self, v: Vertex, j: int) -> list[Vertex]:
        return self.chi_j(self.par_j(v, j), j)

    def Chi(self, v: Vertex) -> list[Vertex]:
        return [w for j in range(self.d) for w in self.chi_j(v, j)]

    def Par(self, v: Vertex) -> list[Vertex]:
        return [self.par_j(v, j) for j in self.support(v)]

    def navigate(self, v: Vertex, rel: str, j: int | None = None) -> list[Vertex]:
        v = tuple(v)
        if rel == "chi_j":
            return self.chi_j(v, j)
        if rel == "par_j":
            return [self.par_j(v, j)]
        if rel == "sib_j":
            return self.sib_j(v, j)
        if rel == "Chi":
            return self.Chi(v)
        if rel == "Par":
            return self.Par(v)
        raise InvalidParameter(f"unknown relation {rel!r}")

    # --------------------------------------------------- partitions and orbits

    def phi_F(self, F: Iterable[int]) -> list[Vertex]:
        F = set(F)
        return [v for v in self.vertices if set(self.support(v)) == F]

    def sibling_reps(self, j: int, n: int) -> list[int]:
        """Minimum-id member of each sibling class of depth ``n`` in factor ``j``."""
        return [min(c) for c in self.ext[j].sibling_classes(n)]

    def omega_F(self, F: Iterable[int], max_total_depth: int | None = None) -> list[Vertex]:
        """Canonical representatives of the sib_F-orbits partitioning Phi_F."""
        F = as_coords(F)
        bound = self.Dtot if max_total_depth is None else max_total_depth
        if not F:
            return [self.root]
        out = []
        root = self.root
        for depths in itertools.product(range(1, bound + 1), repeat=len(F)):
            if sum(depths) > bound:
                continue
            choices = [self.sibling_reps(j, n) for j, n in zip(F, depths)]
            for reps in itertools.product(*choices):
                v = list(root)
                for j, x in zip(F, reps):
                    v[j] = x
                out.append(tuple(v))
        out.sort(key=lambda v: (self.total_depth(v), self.depth(v), v))
        return out

    def _check_phi(self, u: Vertex, F: tuple[int, ...]) -> None:
        if set(self.support(u)) != set(F):
            raise VertexNotInPhiF(f"{u} has non-root coordinates {self.support(u)}, expected {list(F)}")

    def sib_F(self, u: Vertex, F: Iterable[int]) -> list[Vertex]:
        F = as_coords(F)
        u = tuple(u)
        self._check_phi(u, F)
        per = [self.ext[j].sib(u[j]) for j in F]
        out = []
        for xs in itertools.product(*per):
            v = list(u)
            for j, x in zip(F, xs):
                v[j] = x
            out.append(tuple(v))
        return out

    def sib_FG(self, u: Vertex, F: Iterable[int], G: Iterable[int]) -> list[tuple[int, ...]]:
        """Projections ``v_G`` of ``sib_F(u)`` onto the coordinates in ``G``."""
        F, G = as_coords(F), as_coords(G)
        if not set(G) <= set(F):
            raise InvalidParameter(f"G={list(G)} is not a subset of F={list(F)}")
        u = tuple(u)
        self._check_phi(u, F)
        return list(itertools.product(*[self.ext[j].sib(u[j]) for j in G]))

    def M_uF(self, u: Vertex, F: Iterable[int]) -> int:
        return prod(len(self.ext[j].sib(u[j])) for j in as_coords(F))

    def N_uF(self, u: Vertex, F: Iterable[int]) -> int:
        F = as_coords(F)
        return sum(prod(len(self.ext[i].sib(u[i])) for i in F if i != j) for j in F)

    def subsets(self, nonempty: bool = True) -> list[tuple[int, ...]]:
        out = []
        for r in range(0 if not nonempty else 1, self.d + 1):
            out.extend(itertools.combinations(range(self.d), r))
        return out


def build_product(factors: Sequence[RootedTreePrefix], Dtot: int) -> ProductTree:
    factors = tuple(factors)
    if not factors:
        raise InvalidParameter("a product needs at least one factor")
    if Dtot < 0:
        raise InvalidParameter(f"Dtot must be nonnegative, got {Dtot}")
    for j, t in enumerate(factors):
        if Dtot > t.D:
            raise DepthBoundExceedsFactor(f"Dtot={Dtot} exceeds truncation depth {t.D} of factor {j}")
    # one level past Dtot so children of top-generation vertices are addressable
    ext = tuple(t.extend(Dtot + 1) for t in factors)
    d = len(factors)
    gens: list[list[Vertex]] = []
    for total in range(Dtot + 1):
        g: list[Vertex] = []
        for beta in compositions(total, d):
            g.extend(itertools.product(*[ext[j].levels[b] for j, b in enumerate(beta)]))
        g.sort()
        gens.append(g)
    vertices = tuple(v for g in gens for v in g)
    return ProductTree(
        factors=factors,
        Dtot=Dtot,
        ext=ext,
        vertices=vertices,
        index={v: i for i, v in enumerate(vertices)},
        gens=tuple(tuple(g) for g in gens),
    )
