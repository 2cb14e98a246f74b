"""Isomorphism of the Hilbert modules attached to two tree products.

Three equivalent invariants are computed: per-factor generation counts, sibling
surpluses per depth, and kernel-block dimension sums per (F, alpha).  The
generation counts decide; the other two are cross-checks.  For isomorphic pairs
an explicit intertwining unitary can be built on a truncation.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from math import prod
from typing import Sequence

import numpy as np

from .cokernel import block_basis_bruteforce, dim_L, kernel_blocks, sibling_sum_system
from .errors import FactorCountMismatch, InvalidParameter, NotIsomorphic, TruncationTooShallow
from .model import regime_sequence
from .multishift import Multishift, family_weights
from .product import ProductTree, build_product
from .trees import RootedTreePrefix, graph_isomorphic

ISO, NOT_ISO, UNDECIDED = "isomorphic", "not_isomorphic", "undecided_ad_eq_1"


@dataclass
class ConditionResult:
    holds: bool
    table: dict
    witness: object = None
    complete: bool = True


def _check_pair(T1: Sequence[RootedTreePrefix], T2: Sequence[RootedTreePrefix]) -> int:
    if len(T1) != len(T2):
        raise FactorCountMismatch(f"{len(T1)} factors versus {len(T2)}")
    if not T1:
        raise InvalidParameter("need at least one factor")
    return len(T1)


def stabilization_depth(*tree_sets: Sequence[RootedTreePrefix]) -> int:
    return max(t.branching_index for ts in tree_sets for t in ts)


def condition_iv(T1: Sequence[RootedTreePrefix], T2: Sequence[RootedTreePrefix],
                 n_max: int | None = None) -> ConditionResult:
    """Generation counts agree factor by factor for n <= n_max."""
    d = _check_pair(T1, T2)
    stab = stabilization_depth(T1, T2)
    n_max = stab if n_max is None else n_max
    table = {l: (T1[l].generations(n_max), T2[l].generations(n_max)) for l in range(d)}
    for l in range(d):
        g1, g2 = table[l]
        for n in range(n_max + 1):
            if g1[n] != g2[n]:
                return ConditionResult(False, table, (l, n), n_max >= stab)
    return ConditionResult(True, table, None, n_max >= stab)


def sibling_surplus(t: RootedTreePrefix, n: int) -> int:
    """Sum of card(sib(u)) - 1 over the depth-n sibling classes."""
    return sum(len(cl) - 1 for cl in t.sibling_classes(n))


def condition_iii(T1: Sequence[RootedTreePrefix], T2: Sequence[RootedTreePrefix],
                  n_max: int | None = None) -> ConditionResult:
    """Sibling surpluses agree for every coordinate l and depth 1 <= n <= n_max.

    Each surplus is also checked against the first difference of the
    generation counts; a mismatch there is a bug, not a decision."""
    d = _check_pair(T1, T2)
    stab = stabilization_depth(T1, T2)
    n_max = stab if n_max is None else n_max
    table = {}
    witness = None
    for l in range(d):
        rows = []
        for t in (T1[l], T2[l]):
            s = [sibling_surplus(t, n) for n in range(1, n_max + 1)]
            tele = [t.generation_count(n) - t.generation_count(n - 1) for n in range(1, n_max + 1)]
            if s != tele:
                raise AssertionError(f"surplus/telescoping mismatch on {t.name}: {s} vs {tele}")
            rows.append(s)
        table[l] = tuple(rows)
        if witness is None:
            for n, (x, y) in enumerate(zip(*rows), start=1):
                if x != y:
                    witness = (l, n)
                    break
    return ConditionResult(witness is None, table, witness, n_max >= stab)


def _alphas_on(F: tuple[int, ...], d: int, alpha_max: int):
    for parts in itertools.product(range(1, alpha_max + 1), repeat=len(F)):
        if sum(parts) <= alpha_max:
            a = [0] * d
            for j, x in zip(F, parts):
                a[j] = x
            yield tuple(a)


def dim_sum(p: ProductTree, F: tuple[int, ...], alpha: tuple[int, ...], use_rank: bool = True) -> int:
    """Sum of dim L_{u,F} over representatives u with d_u = alpha.

    With ``use_rank`` each dimension is the exact null-space dimension of the
    sibling-sum system; otherwise the product formula."""
    root = p.root
    classes = [p.ext[j].sibling_classes(alpha[j]) for j in F]
    total = 0
    for reps in itertools.product(*classes):
        u = list(root)
        for j, cl in zip(F, reps):
            u[j] = min(cl)
        u = tuple(u)
        if use_rank:
            system, cols = sibling_sum_system(p, u, F)
            total += len(block_basis_bruteforce(system, len(cols)))
        else:
            total += dim_L(p, u, F)
    return total


def condition_ii(P1: ProductTree, P2: ProductTree, alpha_max: int | None = None,
                 use_rank: bool = True) -> ConditionResult:
    """Kernel-dimension sums agree for every F and alpha with support F.

    Also checks that each mixed sum factors as the product of the
    single-coordinate sums."""
    d = _check_pair(P1.factors, P2.factors)
    bound = max(P1.branching_bound(), P2.branching_bound())
    alpha_max = bound if alpha_max is None else alpha_max
    per_coord = max(t.branching_index for t in P1.factors + P2.factors)
    table: dict = {((), (0,) * d): (1, 1)}
    witness = None
    for F in P1.subsets():
        for alpha in _alphas_on(F, d, alpha_max):
            pair = []
            for p in (P1, P2):
                s = dim_sum(p, F, alpha, use_rank)
                singles = prod(sibling_surplus(p.ext[j], alpha[j]) for j in F)
                if s != singles:
                    raise AssertionError(f"factorization of dimension sums fails at F={F}, alpha={alpha}")
                pair.append(s)
            table[(F, alpha)] = tuple(pair)
            if witness is None and pair[0] != pair[1]:
                witness = (F, alpha)
    return ConditionResult(witness is None, table, witness, alpha_max >= per_coord)


def products_graph_isomorphic(T1: Sequence[RootedTreePrefix], T2: Sequence[RootedTreePrefix]) -> bool:
    """Factors match up to a permutation of coordinates."""
    _check_pair(T1, T2)
    left = list(T2)
    for t in T1:
        for i, s in enumerate(left):
            if graph_isomorphic(t, s):
                del left[i]
                break
        else:
            return False
    return True


def classical_module_check(T: Sequence[RootedTreePrefix], a: int, d: int | None = None) -> bool:
    """Isomorphic to the classical module iff no factor ever branches."""
    d = len(T) if d is None else d
    if a * d == 1:
        raise InvalidParameter("the criterion does not apply when a*d = 1")
    return all(t.branching_index == 0 for t in T)


@dataclass
class ClassificationReport:
    d: int
    a: int
    decision: str
    condition_ii: ConditionResult
    condition_iii: ConditionResult
    condition_iv: ConditionResult
    graph_isomorphic: bool

    @property
    def consistent(self) -> bool:
        return self.condition_ii.holds == self.condition_iii.holds == self.condition_iv.holds


def _positive_int_a(a) -> int:
    if isinstance(a, Fraction) and a.denominator == 1:
        a = int(a)
    if not isinstance(a, int) or a < 1:
        raise InvalidParameter(f"a must be a positive integer, got {a!r}")
    return a


def modules_isomorphic(T1: Sequence[RootedTreePrefix], T2: Sequence[RootedTreePrefix],
                       a: int, d: int | None = None) -> str:
    d = _check_pair(T1, T2) if d is None else d
    a = _positive_int_a(a)
    if a * d == 1:
        return UNDECIDED
    return ISO if condition_iv(T1, T2).holds else NOT_ISO


def classify(T1: Sequence[RootedTreePrefix], T2: Sequence[RootedTreePrefix], a: int,
             use_rank: bool = True) -> ClassificationReport:
    d = _check_pair(T1, T2)
    a = _positive_int_a(a)
    iv = condition_iv(T1, T2)
    iii = condition_iii(T1, T2)
    ii = condition_ii(build_product(T1, 0), build_product(T2, 0), use_rank=use_rank)
    decision = modules_isomorphic(T1, T2, a, d)
    return ClassificationReport(d, a, decision, ii, iii, iv, products_graph_isomorphic(T1, T2))


# ----------------------------------------------------------------- intertwiner

@dataclass
class IntertwinerCertificate:
    Dtot: int
    groups: list[tuple[tuple[int, ...], tuple[int, ...], int]]  # (F, alpha, dim)
    U: np.ndarray = field(repr=False)
    unitarity_residual: float
    intertwining_residual: float
    spanned_dim: tuple[int, int]
    full_dim: tuple[int, int]
    tol: float

    @property
    def complete(self) -> bool:
        return self.spanned_dim == self.full_dim

    @property
    def certified(self) -> bool:
        return (self.complete and self.unitarity_residual < self.tol
                and self.intertwining_residual < self.tol)


def _shift_matrices(m: Multishift) -> list[np.ndarray]:
    p = m.product
    n = len(p.vertices)
    mats = []
    for j in range(p.d):
        S = np.zeros((n, n))
        for (jj, w), q in m.sq.items():
            if jj == j:
                S[p.index[w], p.index[p.par_j(w, j)]] = np.sqrt(float(q))
        mats.append(S)
    return mats


def _grouped_wandering(p: ProductTree) -> dict[tuple, list[np.ndarray]]:
    """Orthonormal bases of the blocks (root block included), grouped by
    (F, d_u) in (F, depth, representative) order."""
    n = len(p.vertices)
    groups: dict[tuple, list[np.ndarray]] = {((), (0,) * p.d): [np.eye(n)[p.index[p.root]]]}
    for b in kernel_blocks(p):
        B = np.zeros((n, len(b.basis)))
        for k, vec in enumerate(b.basis):
            for v, x in zip(b.columns, vec):
                B[p.index[v], k] = float(x)
        Q, _ = np.linalg.qr(B)
        groups.setdefault((b.F, b.depth), []).extend(Q.T)
    return groups


def build_intertwiner(T1: Sequence[RootedTreePrefix] | ProductTree,
                      T2: Sequence[RootedTreePrefix] | ProductTree,
                      a: int, Dtot: int, tol: float = 1e-9) -> IntertwinerCertificate:
    """U(S1^beta g) = S2^beta (U_{F,alpha} g) on each wandering block, extended
    linearly to the truncation V_{<=Dtot}."""
    T1 = T1.factors if isinstance(T1, ProductTree) else tuple(T1)
    T2 = T2.factors if isinstance(T2, ProductTree) else tuple(T2)
    d = _check_pair(T1, T2)
    if modules_isomorphic(T1, T2, a, d) != ISO:
        raise NotIsomorphic("the generation-count criterion fails or is undecided")
    need = max(sum(t.branching_index for t in T) for T in (T1, T2)) + 2
    if Dtot < need:
        raise TruncationTooShallow(f"intertwiner needs Dtot >= {need}, got {Dtot}")
    c = regime_sequence(a, d)
    # implied rays make the extension exact
    P1 = build_product([t.extend(Dtot) for t in T1], Dtot)
    P2 = build_product([t.extend(Dtot) for t in T2], Dtot)
    m1, m2 = family_weights(P1, c), family_weights(P2, c)
    S1, S2 = _shift_matrices(m1), _shift_matrices(m2)
    g1, g2 = _grouped_wandering(P1), _grouped_wandering(P2)
    if sorted((k, len(v)) for k, v in g1.items()) != sorted((k, len(v)) for k, v in g2.items()):
        raise NotIsomorphic("kernel-dimension sums differ")

    def power(S, beta, x):
        for j, k in enumerate(beta):
            for _ in range(k):
                x = S[j] @ x
        return x

    X, Y = [], []
    for key in sorted(g1):
        F, du = key
        top = Dtot - sum(du)
        for n in range(top + 1):
            for beta in itertools.product(range(n + 1), repeat=d):
                if sum(beta) != n:
                    continue
                for g, h in zip(g1[key], g2[key]):
                    x, y = power(S1, beta, g), power(S2, beta, h)
                    nx = np.linalg.norm(x)
                    X.append(x / nx)
                    Y.append(y / nx)
    X, Y = np.array(X).T, np.array(Y).T
    U = Y @ X.T
    n1, n2 = len(P1.vertices), len(P2.vertices)
    span1 = int(np.linalg.matrix_rank(X, tol=1e-8))
    span2 = int(np.linalg.matrix_rank(Y, tol=1e-8))
    if U.shape[0] == U.shape[1]:
        I = np.eye(U.shape[0])
        unit = max(np.abs(U.T @ U - I).max(), np.abs(U @ U.T - I).max())
    else:
        unit = float("inf")
    inner = [P1.index[v] for v in P1.vertices if P1.total_depth(v) <= Dtot - 1]
    resid = 0.0
    for j in range(d):
        R = U @ S1[j][:, inner] - S2[j] @ U[:, inner]
        resid = max(resid, float(np.linalg.norm(R, axis=0).max()) if inner else 0.0)
    groups = [(F, du, len(g1[(F, du)])) for F, du in sorted(g1)]
    return IntertwinerCertificate(Dtot, groups, U, float(unit), resid,
                                  (span1, span2), (n1, n2), tol)
