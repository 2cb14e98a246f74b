"""Weighted multishifts on a truncated product tree.

Weights are stored squared, as exact rationals, for every enumerated vertex
``w`` and every coordinate ``j`` with ``w_j`` not the factor root.  Operator
actions come in two modes: exact (coefficients are :class:`Surd`) and float.
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field, replace
from fractions import Fraction
from math import factorial, prod
from typing import Callable, Hashable, Mapping

from .errors import InvalidParameter, NotLeftInvertible, TruncationOverflow
from .exact import Surd, fmt_rational, parse_rational
from .product import ProductTree, Vertex, build_product

Vec2 = dict  # vertex tuple -> coefficient (Surd / Fraction in exact mode, float otherwise)


# ------------------------------------------------------------ weight sequences

@dataclass(frozen=True)
class WeightSequence:
    """A positive bounded sequence c : N -> (0, inf).

    ``c_a`` and ``recip_c_a`` depend on the dimension ``d``; call :meth:`bind`
    before evaluating them.
    """

    kind: str
    a: Fraction | None = None
    values: tuple[Fraction, ...] = ()
    eventual: Fraction | None = None
    d: int | None = None

    @classmethod
    def c_a(cls, a, d: int | None = None) -> "WeightSequence":
        return cls("c_a", a=_positive(a, "a"), d=d)

    @classmethod
    def recip_c_a(cls, a, d: int | None = None) -> "WeightSequence":
        return cls("recip_c_a", a=_positive(a, "a"), d=d)

    @classmethod
    def table(cls, values, eventual) -> "WeightSequence":
        return cls("table", values=tuple(_positive(v, "table value") for v in values),
                   eventual=_positive(eventual, "eventual value"))

    @classmethod
    def const(cls, value) -> "WeightSequence":
        return cls("const", eventual=_positive(value, "constant"))

    @classmethod
    def parse(cls, text: str, d: int | None = None) -> "WeightSequence":
        """``c_a:3``, ``recip_c_a:2``, ``table:2,1,1;eventual=1``, ``const:1``."""
        kind, _, arg = text.strip().partition(":")
        try:
            if kind == "c_a":
                return cls.c_a(parse_rational(arg), d)
            if kind == "recip_c_a":
                return cls.recip_c_a(parse_rational(arg), d)
            if kind == "const":
                return cls.const(parse_rational(arg))
            if kind == "table":
                body, _, ev = arg.partition(";")
                if not ev.startswith("eventual="):
                    raise InvalidParameter("table weights need ';eventual=q'")
                vals = [parse_rational(x) for x in body.split(",") if x.strip()]
                return cls.table(vals, parse_rational(ev[len("eventual="):]))
        except (ValueError, ZeroDivisionError) as exc:
            raise InvalidParameter(f"bad weight sequence {text!r}: {exc}") from exc
        raise InvalidParameter(f"unknown weight sequence kind {kind!r}")

    def spec(self) -> str:
        if self.kind in ("c_a", "recip_c_a"):
            return f"{self.kind}:{fmt_rational(self.a)}"
        if self.kind == "const":
            return f"const:{fmt_rational(self.eventual)}"
        return "table:" + ",".join(fmt_rational(v) for v in self.values) + \
            f";eventual={fmt_rational(self.eventual)}"

    def bind(self, d: int) -> "WeightSequence":
        return replace(self, d=d)

    def _need_d(self) -> int:
        if self.d is None:
            raise InvalidParameter(f"{self.kind} needs the dimension d; call bind(d)")
        return self.d

    def __call__(self, t: int) -> Fraction:
        if t < 0:
            raise ValueError("weight sequence index must be nonnegative")
        if self.kind == "c_a":
            d = self._need_d()
            return Fraction(t + d) / (t + self.a)
        if self.kind == "recip_c_a":
            d = self._need_d()
            return (t + self.a) / Fraction(t + d)
        if self.kind == "table":
            return self.values[t] if t < len(self.values) else self.eventual
        return self.eventual

    def sup(self) -> Fraction:
        if self.kind in ("c_a", "recip_c_a"):
            return max(self(0), Fraction(1))
        if self.kind == "table":
            return max(self.values + (self.eventual,))
        return self.eventual

    def inf(self) -> Fraction:
        """Infimum over all of N (limits included)."""
        if self.kind in ("c_a", "recip_c_a"):
            return min(self(0), Fraction(1))
        if self.kind == "table":
            return min(self.values + (self.eventual,))
        return self.eventual

    def reciprocal(self) -> "WeightSequence":
        if self.kind == "c_a":
            return replace(self, kind="recip_c_a")
        if self.kind == "recip_c_a":
            return replace(self, kind="c_a")
        if self.kind == "table":
            return replace(self, values=tuple(1 / v for v in self.values), eventual=1 / self.eventual)
        return replace(self, eventual=1 / self.eventual)

    def moments(self, N: int) -> list[Fraction]:
        """a_0..a_N with a_n = c(0) c(1) ... c(n-1)."""
        out = [Fraction(1)]
        for n in range(N):
            out.append(out[-1] * self(n))
        return out


def _positive(x, what: str) -> Fraction:
    try:
        q = Fraction(x)
    except (TypeError, ValueError) as exc:
        raise InvalidParameter(f"{what} must be rational, got {x!r}") from exc
    if q <= 0:
        raise InvalidParameter(f"{what} must be positive, got {x}")
    return q


# ------------------------------------------------------------------ multishift

@dataclass(frozen=True, eq=False)
class Multishift:
    product: ProductTree
    sq: dict[tuple[int, Vertex], Fraction] = field(repr=False)
    family: WeightSequence | None = None

    @property
    def d(self) -> int:
        return self.product.d

    def lam_sq(self, j: int, w: Vertex) -> Fraction:
        try:
            return self.sq[(j, w)]
        except KeyError:
            raise TruncationOverflow(f"no weight lambda_{j}({w}) inside the truncation") from None

    def lam(self, j: int, w: Vertex, exact: bool = True):
        q = self.lam_sq(j, w)
        return Surd.sqrt(q) if exact else math.sqrt(q)

    def same_weights(self, other: "Multishift") -> bool:
        return self.sq == other.sq


def family_weights(p: ProductTree, c: WeightSequence) -> Multishift:
    """Weights lambda_j(w)^2 = c(|d_v|)/card(chi_j(v)) * (d_{v_j}+1)/(|d_v|+d), v = par_j(w)."""
    d = p.d
    c = c.bind(d) if c.d is None else c
    sq: dict[tuple[int, Vertex], Fraction] = {}
    for v in p.vertices:
        t = p.total_depth(v)
        if t >= p.Dtot:
            continue
        dv = p.depth(v)
        ct = c(t)
        for j in range(d):
            kids = p.chi_j(v, j)
            val = ct / len(kids) * Fraction(dv[j] + 1, t + d)
            for w in kids:
                sq[(j, w)] = val
    return Multishift(p, sq, c)


def table_weights(p: ProductTree, table: Mapping[tuple[int, Vertex], Fraction]) -> Multishift:
    """Explicit squared weights; must cover every (j, w) with w_j non-root."""
    sq = {}
    for w in p.vertices:
        for j in p.support(w):
            try:
                q = Fraction(table[(j, w)])
            except KeyError:
                raise InvalidParameter(f"missing squared weight for coordinate {j} at {w}") from None
            if q <= 0:
                raise InvalidParameter(f"squared weight at ({j}, {w}) must be positive")
            sq[(j, w)] = q
    return Multishift(p, sq, None)


# -------------------------------------------------------------------- actions

def basis_vector(v: Vertex, exact: bool = True) -> Vec2:
    return {tuple(v): Surd.rational(1) if exact else 1.0}


def apply_Sj(m: Multishift, j: int, f: Vec2, exact: bool = True) -> Vec2:
    p = m.product
    out: Vec2 = {}
    for v, x in f.items():
        if not x:
            continue
        if p.total_depth(v) >= p.Dtot:
            raise TruncationOverflow(f"S_{j} e_{v} leaves the truncation Dtot={p.Dtot}")
        for w in p.chi_j(v, j):
            out[w] = out.get(w, 0) + x * m.lam(j, w, exact)
    return out


def apply_Sj_adjoint(m: Multishift, j: int, f: Vec2, exact: bool = True) -> Vec2:
    p = m.product
    out: Vec2 = {}
    for w, x in f.items():
        if not x or p.is_root_coord(w, j):
            continue
        v = p.par_j(w, j)
        out[v] = out.get(v, 0) + x * m.lam(j, w, exact)
    return out


def apply_S_alpha(m: Multishift, alpha, f: Vec2, exact: bool = True) -> Vec2:
    for j, k in enumerate(alpha):
        for _ in range(k):
            f = apply_Sj(m, j, f, exact)
    return f


def apply_S_alpha_adjoint(m: Multishift, alpha, f: Vec2, exact: bool = True) -> Vec2:
    for j, k in enumerate(alpha):
        for _ in range(k):
            f = apply_Sj_adjoint(m, j, f, exact)
    return f


def inner(f: Vec2, g: Vec2):
    return sum((x * g[v] for v, x in f.items() if v in g), 0)


def norm_sq(f: Vec2):
    return sum((x * x for x in f.values()), 0)


# ------------------------------------------------------------------ predicates

def check_commuting(m: Multishift) -> tuple[bool, dict | None]:
    """Squared form of S_i S_j = S_j S_i on every vertex of depth <= Dtot-2."""
    p = m.product
    for v in p.vertices:
        if p.total_depth(v) > p.Dtot - 2:
            continue
        for i in range(m.d):
            for j in range(i + 1, m.d):
                for x in p.chi_j(v, i):
                    for u in p.chi_j(x, j):
                        lhs = m.lam_sq(j, u) * m.lam_sq(i, p.par_j(u, j))
                        rhs = m.lam_sq(i, u) * m.lam_sq(j, p.par_j(u, i))
                        if lhs != rhs:
                            return False, {"v": v, "i": i, "j": j, "u": u,
                                           "lhs": lhs, "rhs": rhs}
    return True, None


def spherical_C(m: Multishift, v: Vertex) -> Fraction:
    p = m.product
    if p.total_depth(v) >= p.Dtot:
        raise TruncationOverflow(f"C({v}) needs children beyond Dtot={p.Dtot}")
    return sum((m.lam_sq(j, w) for j in range(m.d) for w in p.chi_j(v, j)), Fraction(0))


def check_balanced(m: Multishift) -> tuple[bool, dict | None]:
    p = m.product
    for t in range(p.Dtot):
        g = p.generation(t)
        c0 = spherical_C(m, g[0])
        for v in g[1:]:
            cv = spherical_C(m, v)
            if cv != c0:
                return False, {"generation": t, "u": g[0], "v": v, "C_u": c0, "C_v": cv}
    return True, None


def cauchy_dual(m: Multishift) -> Multishift:
    """Weights lambda_j(w)/C(par_j(w)), squared."""
    p = m.product
    C: dict[Vertex, Fraction] = {}
    sq = {}
    for (j, w), q in m.sq.items():
        v = p.par_j(w, j)
        if v not in C:
            C[v] = spherical_C(m, v)
            if C[v] <= 0:
                raise NotLeftInvertible(f"C({v}) = 0")
        sq[(j, w)] = q / (C[v] * C[v])
    fam = m.family.reciprocal() if m.family is not None else None
    return Multishift(p, sq, fam)


def _falling_ratio(du, alpha) -> int:
    """(d_u + alpha)! / d_u!"""
    return prod(factorial(x + a) // factorial(x) for x, a in zip(du, alpha))


def moment_norm_sq(m: Multishift, alpha, v: Vertex) -> Fraction:
    """Closed form of ||S^alpha e_v||^2 for family weights."""
    if m.family is None:
        raise InvalidParameter("moment_norm_sq needs family weights")
    return moment_closed(m.family.bind(m.d), m.product.depth(v), alpha)


def moment_closed(c: WeightSequence, du, alpha) -> Fraction:
    d = len(du)
    t, n = sum(du), sum(alpha)
    out = Fraction(_falling_ratio(du, alpha))
    for j in range(n):
        out *= c(t + j) / (t + d + j)
    return out


def moment_norm_sq_oracle(m: Multishift, alpha, v: Vertex) -> Fraction:
    """||S^alpha e_v||^2 by applying the operators in exact arithmetic."""
    return norm_sq(apply_S_alpha(m, alpha, basis_vector(v))).to_fraction()


# ------------------------------------- Par-constancy versus generation constancy

def _constant_on(Cfun: Mapping[Vertex, Hashable], S) -> bool:
    vals = {Cfun[v] for v in S}
    return len(vals) <= 1


def check_constant_on_parents(p: ProductTree, Cfun: Mapping) -> tuple[bool, Vertex | None]:
    for v in p.vertices[1:]:
        if not _constant_on(Cfun, p.Par(v)):
            return False, v
    return True, None


def check_constant_on_children(p: ProductTree, Cfun: Mapping) -> tuple[bool, Vertex | None]:
    """Chi(v) for depth(v) <= Dtot-2: deriving Chi-constancy from Par sets
    uses vertices two levels below v."""
    for v in p.vertices:
        if p.total_depth(v) <= p.Dtot - 2 and not _constant_on(Cfun, p.Chi(v)):
            return False, v
    return True, None


def check_constant_on_generations(p: ProductTree, Cfun: Mapping,
                                  max_t: int | None = None) -> tuple[bool, int | None]:
    top = p.Dtot if max_t is None else max_t
    for t in range(top + 1):
        if not _constant_on(Cfun, p.generation(t)):
            return False, t
    return True, None


def check_constant_on_slices(p: ProductTree, Cfun: Mapping, max_t: int) -> tuple[bool, tuple | None]:
    """Constant on each V_beta with the value of V_{|beta| e_1}, |beta| <= max_t."""
    for t in range(max_t + 1):
        slices: dict[tuple[int, ...], set] = {}
        for v in p.generation(t):
            slices.setdefault(p.depth(v), set()).add(Cfun[v])
        ref = slices.get((t,) + (0,) * (p.d - 1), set())
        for beta, vals in slices.items():
            if len(vals) > 1 or vals != ref:
                return False, beta
    return True, None


@dataclass
class TheoremAReport:
    d: int
    Dtot: int
    par_constant: bool
    chi_constant: bool
    slice_constant: bool
    generation_constant: bool
    equivalent: bool
    witness: dict


def theoremA_verify(p: ProductTree, Cfun: Mapping) -> TheoremAReport:
    """Compare Par-constancy with generation constancy on the truncation.

    Par sets only reach depth Dtot-1, so generations are compared for
    t <= Dtot-1; the top generation is unconstrained by Par data."""
    top = p.Dtot - 1
    par_ok, pw = check_constant_on_parents(p, Cfun)
    chi_ok, cw = check_constant_on_children(p, Cfun)
    sl_ok, sw = check_constant_on_slices(p, Cfun, top)
    gen_ok, gw = check_constant_on_generations(p, Cfun, top)
    return TheoremAReport(
        d=p.d, Dtot=p.Dtot,
        par_constant=par_ok, chi_constant=chi_ok,
        slice_constant=sl_ok, generation_constant=gen_ok,
        equivalent=(par_ok == gen_ok),
        witness={"par": pw, "chi": cw, "slice": sw, "generation": gw},
    )


def par_closure_function(p: ProductTree, rng: random.Random,
                         values: Callable[[random.Random], Hashable] | None = None) -> dict:
    """A function that is constant on every Par(v): merge each Par set with
    union-find, then give each class an independent random value."""
    parent = list(range(len(p.vertices)))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for v in p.vertices[1:]:
        ps = [p.index[u] for u in p.Par(v)]
        for a in ps[1:]:
            ra, rb = find(a), find(ps[0])
            if ra != rb:
                parent[ra] = rb
    draw = values or (lambda r: Fraction(r.randint(1, 10 ** 6), r.randint(1, 97)))
    val: dict[int, Hashable] = {}
    out = {}
    for i, v in enumerate(p.vertices):
        r = find(i)
        if r not in val:
            val[r] = draw(rng)
        out[v] = val[r]
    return out


def theoremA_d1_counterexample() -> tuple[ProductTree, dict]:
    """Single factor with two depth-1 vertices given different values.

    Every Par set is a singleton when d = 1, so the function is Par-constant
    while generation 1 carries two values."""
    from .trees import make_standard
    p = build_product([make_standard("T_n0_0", D=3, n0=2)], 3)
    u, v = p.chi_j(p.root, 0)
    C: dict = {w: 0 for w in p.vertices}
    C[u], C[v] = 1, 2
    return p, C
