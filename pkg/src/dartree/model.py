"""Analytic model: kernel coefficients, sphere moments, Hausdorff moments and
the radial densities of the representing measures.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import factorial, prod
from typing import Sequence

import numpy as np

from .cokernel import KernelBlock, block_reps, dim_L
from .errors import InvalidParameter, PointOutsideDomain, WrongRegime
from .exact import Surd
from .multishift import (
    Multishift,
    WeightSequence,
    apply_S_alpha,
    apply_S_alpha_adjoint,
    family_weights,
    moment_closed,
    norm_sq,
)
from .product import ProductTree, Vertex, compositions


# --------------------------------------------------------- kernel coefficients

def kernel_coeff_from_depth(c: WeightSequence, du: Sequence[int], alpha: Sequence[int]) -> Fraction:
    """d_u!/(d_u+alpha)! * prod_{j<|alpha|} (|d_u|+d+j)/c(|d_u|+j)."""
    return 1 / moment_closed(c.bind(len(du)) if c.d is None else c, tuple(du), tuple(alpha))


def kernel_coeff_closed(p: ProductTree, c: WeightSequence, u: Vertex, F, alpha) -> Fraction:
    return kernel_coeff_from_depth(c.bind(p.d), p.depth(u), alpha)


def kernel_coeff_oracle(m: Multishift, block: KernelBlock, alpha) -> Fraction:
    """Apply S*^alpha S^alpha to every basis vector of the block, check it acts
    as one scalar s, and return 1/s."""
    scalar: Fraction | None = None
    for vec in block.basis:
        f = {v: Surd.rational(x) for v, x in block.as_vec2(vec).items()}
        g = apply_S_alpha_adjoint(m, alpha, apply_S_alpha(m, alpha, f))
        pivot = next(iter(f))
        s = (g.get(pivot, Surd()) * (1 / f[pivot].to_fraction())).to_fraction()
        for v in set(f) | set(g):
            if g.get(v, Surd()) != f.get(v, Surd()) * s:
                raise InvalidParameter(f"S*^a S^a is not scalar on the block at {block.u}")
        if scalar is not None and s != scalar:
            raise InvalidParameter(f"S*^a S^a takes two values on the block at {block.u}")
        scalar = s
    if scalar is None:
        raise InvalidParameter("empty block")
    return 1 / scalar


@dataclass
class KernelEval:
    labels: list[tuple[tuple[int, ...], Vertex, int]]  # (F, u, multiplicity)
    matrix: np.ndarray
    tail_bound: float
    radius: float


def _neg_binomial_tail(m: int, x: float, N: int) -> float:
    """sum_{n>N} C(m+n-1, n) x^n for 0 <= x < 1."""
    if x == 0:
        return 0.0
    n = N + 1
    term = math.comb(m + n - 1, n) * x ** n
    total = 0.0
    while term > 0:
        total += term
        nxt = term * (m + n) / (n + 1) * x
        n += 1
        if nxt < 1e-300 or (nxt < term and nxt < 1e-17 * total):
            break
        term = nxt
    return total


def kernel_eval(p: ProductTree, c: WeightSequence, z: Sequence[complex], w: Sequence[complex],
                max_order: int) -> KernelEval:
    """Partial sum (|alpha| <= max_order) of the E-valued kernel at (z, w),
    as a diagonal matrix in an orthonormal basis adapted to the blocks."""
    d = p.d
    c = c.bind(d)
    if len(z) != d or len(w) != d:
        raise InvalidParameter(f"points must have {d} coordinates")
    r = min(float(c.inf()), 1.0)
    nz = math.sqrt(sum(abs(x) ** 2 for x in z))
    nw = math.sqrt(sum(abs(x) ** 2 for x in w))
    if nz >= r or nw >= r:
        raise PointOutsideDomain(f"need |z|, |w| < r = {r}, got {nz}, {nw}")
    labels: list[tuple[tuple[int, ...], Vertex, int]] = [((), p.root, 1)]
    for F in p.subsets():
        for u in block_reps(p, F):
            k = dim_L(p, u, F)
            if k:
                labels.append((F, u, k))
    alphas = [a for n in range(max_order + 1) for a in compositions(n, d)]
    mono = {a: prod(complex(zi) ** ai * complex(wi).conjugate() ** ai
                    for zi, wi, ai in zip(z, w, a)) for a in alphas}
    diag: list[complex] = []
    tail = 0.0
    x = nz * nw / float(c.inf())
    for F, u, k in labels:
        du = p.depth(u)
        val = sum(float(kernel_coeff_from_depth(c, du, a)) * mono[a] for a in alphas)
        diag.extend([val] * k)
        tail = max(tail, _neg_binomial_tail(sum(du) + d, x, max_order))
    return KernelEval(labels=labels, matrix=np.diag(np.array(diag, dtype=complex)),
                      tail_bound=tail, radius=r)


# ------------------------------------------------------------ sphere moments

def spherical_Q(beta: Sequence[int], alpha: Sequence[int], d: int | None = None) -> Fraction:
    """(alpha+beta)!/beta! * prod_{j<|alpha|} 1/(|beta|+d+j)."""
    d = len(beta) if d is None else d
    out = Fraction(prod(factorial(a + b) // factorial(b) for a, b in zip(alpha, beta)))
    nb = sum(beta)
    for j in range(sum(alpha)):
        out /= nb + d + j
    return out


# ---------------------------------------------------------- Hausdorff moments

@dataclass(frozen=True)
class MomentSequence:
    c: WeightSequence
    values: tuple[Fraction, ...]
    bound: Fraction

    @property
    def N(self) -> int:
        return len(self.values) - 1


def moment_sequence(c: WeightSequence, N: int) -> MomentSequence:
    return MomentSequence(c, tuple(c.moments(N)), c.sup())


@dataclass(frozen=True)
class HausdorffResult:
    passed: bool
    order: int
    N: int
    k: int | None = None
    n: int | None = None
    value: Fraction | None = None


def hausdorff_check(seq: MomentSequence, K: int) -> HausdorffResult:
    """(-1)^k Delta^k of a_n / b^n is >= 0 for k <= K and n + k <= N."""
    N = seq.N
    tlen = len(seq.c.values) if seq.c.kind == "table" else 0
    if K > N - tlen:
        raise InvalidParameter(f"order K={K} needs N >= K + {tlen}, got N={N}")
    b = seq.bound
    row = [a / b ** n for n, a in enumerate(seq.values)]
    for k in range(K + 1):
        for n, x in enumerate(row):
            if (-1) ** k * x < 0:
                return HausdorffResult(False, K, N, k, n, (-1) ** k * x)
        row = [row[i + 1] - row[i] for i in range(len(row) - 1)]
    return HausdorffResult(True, K, N)


# ---------------------------------------------------------------- densities

@dataclass(frozen=True)
class DensityPolynomial:
    l: int
    a: int
    d: int
    kind: str                       # "w", "omega" or "delta_1"
    coefficients: tuple[Fraction, ...] = field(default=())  # coefficient of s^i at index i

    def __call__(self, s: float) -> float:
        return sum(float(q) * s ** i for i, q in enumerate(self.coefficients))

    def moment(self, n: int) -> Fraction:
        """Integral of s^n against the measure on [0, 1]."""
        if self.kind == "delta_1":
            return Fraction(1)
        return sum((q / (n + i + 1) for i, q in enumerate(self.coefficients) if q), Fraction(0))


def _density_coeffs(lo: int, hi: int, l: int) -> tuple[Fraction, ...]:
    """(l+lo)...(l+hi-1) * sum_{i=lo}^{hi-1} s^{i+l-1} / prod_{lo<=j!=i<=hi-1} (j-i)."""
    lead = prod(range(l + lo, l + hi))
    coeffs = [Fraction(0)] * (hi + l - 1)
    for i in range(lo, hi):
        den = prod(j - i for j in range(lo, hi) if j != i)
        coeffs[i + l - 1] += Fraction(lead, den)
    return tuple(coeffs)


def density(a: int, d: int, l: int, kind: str | None = None) -> DensityPolynomial:
    if not (isinstance(a, int) and isinstance(d, int) and a >= 1 and d >= 1):
        raise InvalidParameter(f"a and d must be positive integers, got a={a}, d={d}")
    if not isinstance(l, int) or l < 0:
        raise InvalidParameter(f"l must be a nonnegative integer, got {l}")
    natural = "w" if a > d else ("omega" if a < d else "delta_1")
    if kind is not None and kind != natural:
        raise WrongRegime(f"kind {kind!r} does not apply to a={a}, d={d}; use {natural!r}")
    if natural == "delta_1":
        return DensityPolynomial(l, a, d, "delta_1")
    lo, hi = (d, a) if natural == "w" else (a, d)
    return DensityPolynomial(l, a, d, natural, _density_coeffs(lo, hi, l))


def regime_sequence(a, d: int) -> WeightSequence:
    """c_a when a >= d, its reciprocal otherwise."""
    return (WeightSequence.c_a(a) if a >= d else WeightSequence.recip_c_a(a)).bind(d)


@dataclass
class MomentCheck:
    n: int
    lhs: Fraction
    rhs: Fraction

    @property
    def ok(self) -> bool:
        return self.lhs == self.rhs


def verify_density_moments(a: int, d: int, l: int, maxN: int) -> list[MomentCheck]:
    """Integral of s^n against the density versus a_{n+l}/a_l, 0 <= n <= maxN."""
    dens = density(a, d, l)
    an = regime_sequence(a, d).moments(maxN + l)
    return [MomentCheck(n, dens.moment(n), an[n + l] / an[l]) for n in range(maxN + 1)]


# ------------------------------------------------------ integral representation

@dataclass
class IntegralRepCheck:
    lhs: Fraction          # ||S^alpha f||^2 / ||f||^2 on the block
    a_ratio: Fraction
    rho_moment: Fraction
    nu_moment: Fraction

    @property
    def ok(self) -> bool:
        return self.lhs == self.a_ratio * self.nu_moment and self.a_ratio == self.rho_moment


def integral_representation_check(p: ProductTree, a: int, u: Vertex, F, alpha,
                                  m: Multishift | None = None,
                                  block: KernelBlock | None = None) -> IntegralRepCheck:
    d = p.d
    c = regime_sequence(a, d)
    if m is None:
        m = family_weights(p, c)
    if block is None:
        from .cokernel import kernel_block
        block = kernel_block(p, u, F) if F else None
    if block is None or not tuple(F):
        f = {tuple(u): Surd.rational(1)}
    else:
        f = {v: Surd.rational(x) for v, x in block.as_vec2(block.basis[0]).items()}
    lhs = (norm_sq(apply_S_alpha(m, alpha, f)).to_fraction() / norm_sq(f).to_fraction())
    du = p.depth(u)
    t, n = sum(du), sum(alpha)
    an = c.moments(t + n)
    return IntegralRepCheck(
        lhs=lhs,
        a_ratio=an[t + n] / an[t],
        rho_moment=density(a, d, t).moment(n),
        nu_moment=spherical_Q(du, alpha, d),
    )
