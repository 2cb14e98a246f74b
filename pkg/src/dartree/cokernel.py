"""The joint cokernel E: sibling-sum systems, block bases and dimensions.

E splits as the span of e_root plus blocks L_{u,F}, one for every nonempty
coordinate set F and orbit representative u of Phi_F.  A block is the space of
functions on sib_F(u) whose sums along every coordinate-j sibling fibre vanish.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import prod

from .errors import DepthTooShallow, EmptyF, IrrationalWeightRatios
from .exact import Surd, nullspace
from .multishift import Multishift
from .product import ProductTree, Vertex, as_coords


@dataclass(frozen=True)
class KernelBlock:
    F: tuple[int, ...]
    u: Vertex
    depth: tuple[int, ...]
    columns: tuple[Vertex, ...]          # sib_F(u), the block's coordinates
    system: tuple[tuple[int, ...], ...]  # N x M sibling-sum matrix
    basis: tuple[tuple[Fraction, ...], ...]
    dim_closed: int

    @property
    def M(self) -> int:
        return len(self.columns)

    @property
    def N(self) -> int:
        return len(self.system)

    def as_vec2(self, vec) -> dict:
        return {v: x for v, x in zip(self.columns, vec) if x}


def _require_F(F) -> tuple[int, ...]:
    F = as_coords(F)
    if not F:
        raise EmptyF("F is empty: the block is span{e_u} and has no equations")
    return F


def sibling_sum_system(p: ProductTree, u: Vertex, F) -> tuple[list[list[int]], list[Vertex]]:
    """One all-ones row per coordinate-j sibling fibre of sib_F(u), j in F."""
    F = _require_F(F)
    cols = p.sib_F(u, F)
    rows: list[list[int]] = []
    for j in F:
        G = tuple(i for i in F if i != j)
        for vG in p.sib_FG(u, F, G):
            rows.append([1 if tuple(v[i] for i in G) == vG else 0 for v in cols])
    return rows, cols


def block_basis_bruteforce(system: list[list[int]], ncols: int | None = None) -> list[list[Fraction]]:
    if ncols is None:
        ncols = len(system[0]) if system else 0
    return nullspace(system, ncols)


def block_basis_tensor(p: ProductTree, u: Vertex, F) -> list[list[Fraction]]:
    """Elementary tensors of the difference vectors e_first - e_other in each
    coordinate, laid out over sib_F(u)."""
    F = _require_F(F)
    cols = p.sib_F(u, F)
    gens_per_j = []
    for j in F:
        sib = p.ext[j].sib(u[j])
        gens_per_j.append([{sib[0]: 1, s: -1} for s in sib[1:]])
    out = []
    for choice in itertools.product(*gens_per_j):
        out.append([Fraction(prod(g.get(v[j], 0) for j, g in zip(F, choice))) for v in cols])
    return out


def slices_in_kernel(p: ProductTree, F, cols, vec) -> bool:
    """Every coordinate-j slice of ``vec`` (others fixed) sums to zero."""
    F = as_coords(F)
    for j in F:
        sums: dict[tuple, Fraction] = {}
        for v, x in zip(cols, vec):
            key = tuple(v[i] for i in F if i != j)
            sums[key] = sums.get(key, 0) + x
        if any(sums.values()):
            return False
    return True


def dim_L(p: ProductTree, u: Vertex, F) -> int:
    F = as_coords(F)
    return prod(len(p.ext[j].sib(u[j])) - 1 for j in F)


def block_reps(p: ProductTree, F) -> list[Vertex]:
    """Representatives u of Omega~_F that can carry a nonzero block:
    d_{u_j} <= branching index of factor j for every j in F."""
    F = as_coords(F)
    ks = [p.factors[j].branching_index for j in F]
    out = []
    for u in p.omega_F(F, max_total_depth=sum(ks)):
        if all(p.ext[j].depth[u[j]] <= k for j, k in zip(F, ks)):
            out.append(u)
    return out


def dim_E(p: ProductTree) -> int:
    return 1 + sum(dim_L(p, u, F) for F in p.subsets() for u in block_reps(p, F))


def kernel_block(p: ProductTree, u: Vertex, F) -> KernelBlock:
    F = _require_F(F)
    system, cols = sibling_sum_system(p, u, F)
    basis = block_basis_bruteforce(system, len(cols))
    return KernelBlock(
        F=F, u=tuple(u), depth=p.depth(u), columns=tuple(cols),
        system=tuple(tuple(r) for r in system),
        basis=tuple(tuple(b) for b in basis),
        dim_closed=dim_L(p, u, F),
    )


def kernel_blocks(p: ProductTree, include_zero: bool = False) -> list[KernelBlock]:
    """All blocks L_{u,F}, F nonempty, in (F, depth, representative) order.

    Blocks must fit inside the enumeration; DepthTooShallow otherwise."""
    out = []
    for F in p.subsets():
        for u in block_reps(p, F):
            if not include_zero and dim_L(p, u, F) == 0:
                continue
            if p.total_depth(u) > p.Dtot:
                raise DepthTooShallow(
                    f"block at {u} (depth {p.total_depth(u)}) lies beyond Dtot={p.Dtot}")
            out.append(kernel_block(p, u, F))
    return out


def _ratio_sqrt(q: Fraction) -> Fraction:
    s = Surd.sqrt(q)
    if not s.is_rational():
        raise IrrationalWeightRatios(f"weight ratio sqrt({q}) is irrational")
    return s.to_fraction()


def joint_kernel_bruteforce(m: Multishift) -> list[list[Fraction]]:
    """Basis of the intersection of ker S_j^* over V_{<=Dtot}, each vector
    indexed like ``m.product.vertices``.

    The equation at (v, j) is divided by lambda_j of the first child, so only
    ratios of weights inside one chi_j(v) enter; they must be rational."""
    p = m.product
    need = 1 + p.branching_bound()
    if p.Dtot < need:
        raise DepthTooShallow(f"joint kernel needs Dtot >= {need}, got {p.Dtot}")
    rows = []
    for v in p.vertices:
        if p.total_depth(v) >= p.Dtot:
            continue
        for j in range(p.d):
            kids = p.chi_j(v, j)
            base = m.lam_sq(j, kids[0])
            rows.append({p.index[w]: _ratio_sqrt(m.lam_sq(j, w) / base) for w in kids})
    return nullspace(rows, len(p.vertices))
