"""Rooted directed trees of finite branching index, stored as finite prefixes.

A prefix lists every vertex down to a truncation depth ``D``; past ``D`` each
leaf of the prefix is understood to continue as a single infinite ray.  The
encoding is exact as long as all branching happens strictly above depth
``D - 1``, which :func:`validate_tree` enforces.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from typing import Iterable, Sequence

from .errors import (
    BranchingBeyondIndexBound,
    CycleDetected,
    DuplicateVertex,
    InvalidParameter,
    LeafBeforeTruncation,
    MultipleRoots,
    OrphanVertex,
    VertexBeyondTruncation,
)


@dataclass(frozen=True, eq=False)
class RootedTreePrefix:
    """Validated tree prefix.  Build with :func:`validate_tree`."""

    vertices: tuple[tuple[int, int | None], ...]
    truncation_depth: int
    name: str = ""
    # caches filled by validate_tree
    root: int = field(default=-1, repr=False)
    depth: dict[int, int] = field(default_factory=dict, repr=False)
    parent: dict[int, int | None] = field(default_factory=dict, repr=False)
    children: dict[int, tuple[int, ...]] = field(default_factory=dict, repr=False)
    levels: tuple[tuple[int, ...], ...] = field(default=(), repr=False)
    branching_index: int = 0

    @property
    def D(self) -> int:
        return self.truncation_depth

    @property
    def ids(self) -> list[int]:
        return [v for v, _ in self.vertices]

    def __len__(self) -> int:
        return len(self.vertices)

    def __contains__(self, v: int) -> bool:
        return v in self.depth

    def chi(self, v: int) -> tuple[int, ...]:
        return self.children[v]

    def par(self, v: int) -> int | None:
        return self.parent[v]

    def sib(self, v: int) -> tuple[int, ...]:
        """Children of the parent of ``v``; the root is its own sibling class."""
        p = self.parent[v]
        return (v,) if p is None else self.children[p]

    def level(self, n: int) -> tuple[int, ...]:
        return self.levels[n] if n <= self.D else ()

    def generation_count(self, n: int) -> int:
        if n < 0:
            raise ValueError("generation index must be nonnegative")
        return len(self.levels[min(n, self.D)])

    def generations(self, n_max: int) -> list[int]:
        return [self.generation_count(n) for n in range(n_max + 1)]

    def sibling_classes(self, n: int) -> list[tuple[int, ...]]:
        """Sibling classes at depth ``n >= 1`` within the prefix, ordered by
        their minimum id."""
        if n < 1 or n > self.D:
            return []
        seen: dict[int, tuple[int, ...]] = {}
        for v in self.levels[n]:
            p = self.parent[v]
            if p not in seen:
                seen[p] = self.children[p]
        return sorted(seen.values(), key=min)

    def canonical_form(self) -> str:
        return canonical_form(self)

    def truncate(self, D: int) -> "RootedTreePrefix":
        if D > self.D:
            raise InvalidParameter(f"cannot truncate depth {self.D} prefix to {D}")
        kept = [(v, p) for v, p in self.vertices if self.depth[v] <= D]
        return validate_tree(kept, D, self.name)

    def extend(self, D: int) -> "RootedTreePrefix":
        """Materialize the implied rays down to depth ``D`` (fresh ids)."""
        if D <= self.D:
            return self
        verts = list(self.vertices)
        nxt = max(self.ids) + 1
        frontier = list(self.levels[self.D])
        for _ in range(self.D, D):
            new = []
            for v in frontier:
                verts.append((nxt, v))
                new.append(nxt)
                nxt += 1
            frontier = new
        return validate_tree(verts, D, self.name)

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "truncation_depth": self.truncation_depth,
            "vertices": [{"id": v, "parent": p} for v, p in self.vertices],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"


def validate_tree(raw: Iterable[tuple[int, int | None]] | Sequence[dict], D: int,
                  name: str = "") -> RootedTreePrefix:
    """Check a vertex list against the prefix invariants and build caches."""
    if not isinstance(D, int) or D < 0:
        raise InvalidParameter(f"truncation depth must be a nonnegative integer, got {D!r}")
    verts: list[tuple[int, int | None]] = []
    for item in raw:
        if isinstance(item, dict):
            v, p = item["id"], item.get("parent")
        else:
            v, p = item
        if not isinstance(v, int) or (p is not None and not isinstance(p, int)):
            raise InvalidParameter(f"vertex ids must be integers: {item!r}")
        verts.append((v, p))

    parent: dict[int, int | None] = {}
    for v, p in verts:
        if v in parent:
            raise DuplicateVertex(f"vertex {v} listed twice")
        parent[v] = p
    roots = [v for v, p in verts if p is None]
    for v, p in verts:
        if p is not None and p not in parent:
            raise OrphanVertex(f"vertex {v} has unknown parent {p}")
    if len(roots) > 1:
        raise MultipleRoots(f"vertices {roots} have no parent")
    if not roots:
        if verts:
            raise CycleDetected("no parentless vertex: the parent relation has a cycle")
        raise MultipleRoots("empty vertex list has no root")

    # cycles among non-root vertices (unreachable from the root)
    state: dict[int, int] = {roots[0]: 2}
    for v, _ in verts:
        path = []
        w = v
        while state.get(w, 0) == 0:
            state[w] = 1
            path.append(w)
            w = parent[w]
        if state[w] == 1:
            raise CycleDetected(f"parent chain through vertex {w} loops")
        for x in path:
            state[x] = 2

    pos = {v: i for i, (v, _) in enumerate(verts)}
    depth: dict[int, int] = {}
    children: dict[int, list[int]] = {v: [] for v, _ in verts}
    for v, p in verts:
        if p is None:
            depth[v] = 0
            continue
        if pos[p] > pos[v]:
            raise OrphanVertex(f"vertex {v} appears before its parent {p}")
        depth[v] = depth[p] + 1
        children[p].append(v)
        if depth[v] > D:
            raise VertexBeyondTruncation(f"vertex {v} has depth {depth[v]} > D={D}")

    levels: list[list[int]] = [[] for _ in range(D + 1)]
    for v, _ in verts:
        levels[depth[v]].append(v)
    deepest = -1
    for v, _ in verts:
        k = len(children[v])
        if depth[v] < D and k == 0:
            raise LeafBeforeTruncation(f"vertex {v} at depth {depth[v]} < D={D} has no child")
        if k >= 2:
            if depth[v] >= D - 1:
                raise BranchingBeyondIndexBound(
                    f"vertex {v} at depth {depth[v]} has {k} children; branching must stop above depth D-1={D - 1}")
            deepest = max(deepest, depth[v])

    return RootedTreePrefix(
        vertices=tuple(verts),
        truncation_depth=D,
        name=name,
        root=roots[0],
        depth=depth,
        parent=parent,
        children={v: tuple(c) for v, c in children.items()},
        levels=tuple(tuple(lv) for lv in levels),
        branching_index=deepest + 1,
    )


def from_dict(doc: dict) -> RootedTreePrefix:
    try:
        return validate_tree(doc["vertices"], doc["truncation_depth"], doc.get("name", ""))
    except (KeyError, TypeError) as exc:
        raise InvalidParameter(f"malformed tree document: {exc}") from exc


def from_json(text: str) -> RootedTreePrefix:
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InvalidParameter(f"tree document is not JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise InvalidParameter("tree document must be a JSON object")
    return from_dict(doc)


def generation_count(t: RootedTreePrefix, n: int) -> int:
    return t.generation_count(n)


def branching_index(t: RootedTreePrefix) -> int:
    return t.branching_index


def canonical_form(t: RootedTreePrefix) -> str:
    """AHU code: each vertex is ``(`` + sorted child codes + ``)``."""
    code: dict[int, str] = {}
    for lv in reversed(t.levels):
        for v in lv:
            code[v] = "(" + "".join(sorted(code[c] for c in t.children[v])) + ")"
    return code[t.root]


def graph_isomorphic(t1: RootedTreePrefix, t2: RootedTreePrefix) -> bool:
    """Isomorphism of the infinite trees the prefixes encode."""
    if t1.branching_index != t2.branching_index:
        return False
    D = min(t1.D, t2.D)
    return canonical_form(t1.truncate(D)) == canonical_form(t2.truncate(D))


# ------------------------------------------------------------ standard trees

def _from_child_counts(counts: list[list[int]], D: int, name: str) -> RootedTreePrefix:
    """Build a BFS-numbered prefix; ``counts[n]`` gives the child counts of the
    depth-``n`` vertices in order.  Depths past ``len(counts)`` are rays."""
    verts: list[tuple[int, int | None]] = [(0, None)]
    frontier = [0]
    nxt = 1
    for n in range(D):
        row = counts[n] if n < len(counts) else [1] * len(frontier)
        if len(row) != len(frontier):
            raise InvalidParameter("child-count row does not match generation size")
        new = []
        for v, k in zip(frontier, row):
            for _ in range(k):
                verts.append((nxt, v))
                new.append(nxt)
                nxt += 1
        frontier = new
    return validate_tree(verts, D, name)


def _positive_int(x, what: str) -> int:
    if not isinstance(x, int) or x < 1:
        raise InvalidParameter(f"{what} must be a positive integer, got {x!r}")
    return x


def make_standard(kind: str, D: int | None = None, **params) -> RootedTreePrefix:
    """Standard trees: ``ray``, ``T_n0_0(n0)``, ``T_1j(k, j)``, ``binary(depth)``."""
    if kind == "ray":
        counts, name = [], "R"
    elif kind == "T_n0_0":
        n0 = _positive_int(params.get("n0"), "n0")
        counts, name = [[n0]], f"T_{n0},0"
    elif kind == "T_1j":
        k = _positive_int(params.get("k"), "k")
        j = _positive_int(params.get("j"), "j")
        if j > k:
            raise InvalidParameter(f"T_1j needs j <= k, got j={j}, k={k}")
        counts, name = [[2], [2 * k - j, j]], f"T_1{j}(k={k})"
    elif kind == "binary":
        depth = params.get("depth")
        if not isinstance(depth, int) or depth < 0:
            raise InvalidParameter(f"binary depth must be a nonnegative integer, got {depth!r}")
        counts, name = [[2] * (2 ** n) for n in range(depth)], f"B{depth}"
    else:
        raise InvalidParameter(f"unknown standard tree kind {kind!r}")
    k_index = 0
    for n, row in enumerate(counts):
        if any(c >= 2 for c in row):
            k_index = n + 1
    if D is None:
        D = k_index + 1
    if D < k_index + 1:
        raise InvalidParameter(f"{name} has branching index {k_index}; need D >= {k_index + 1}, got {D}")
    return _from_child_counts(counts, D, name)


def random_prefix(rng: random.Random, max_index: int = 2, max_children: int = 4,
                  D: int | None = None, max_width: int = 12, name: str = "") -> RootedTreePrefix:
    """Random prefix with branching index <= ``max_index``.

    Each vertex above depth ``max_index`` gets 1..max_children children; the
    generation size is capped at ``max_width`` to keep products small."""
    counts: list[list[int]] = []
    width = 1
    for _ in range(max_index):
        row = []
        budget = max_width
        for i in range(width):
            left = width - i - 1
            hi = max(1, min(max_children, budget - left))
            c = rng.randint(1, hi)
            row.append(c)
            budget -= c
        counts.append(row)
        width = sum(row)
    if D is None:
        D = max_index + 1
    return _from_child_counts(counts, D, name or "random")


def relabel(t: RootedTreePrefix, rng: random.Random, shuffle_children: bool = True) -> RootedTreePrefix:
    """Random parent-preserving relabelling (ids permuted, BFS order kept,
    sibling order optionally shuffled)."""
    ids = t.ids
    perm = ids[:]
    rng.shuffle(perm)
    new_id = dict(zip(ids, (p * 7 + 3 for p in perm)))
    order = [t.root]
    for n in range(t.D):
        nxt = []
        for v in t.levels[n]:
            kids = list(t.children[v])
            if shuffle_children:
                rng.shuffle(kids)
            nxt.extend(kids)
        order.extend(nxt)
    verts = [(new_id[v], None if t.parent[v] is None else new_id[t.parent[v]]) for v in order]
    return validate_tree(verts, t.D, t.name)
