from fractions import Fraction
from math import factorial, prod

import numpy as np
import pytest
import sympy
from hypothesis import given, strategies as st

from dartree.cokernel import kernel_blocks
from dartree.errors import PointOutsideDomain, WrongRegime
from dartree.model import (
    density,
    hausdorff_check,
    integral_representation_check,
    kernel_coeff_closed,
    kernel_coeff_from_depth,
    kernel_coeff_oracle,
    kernel_eval,
    moment_sequence,
    spherical_Q,
    verify_density_moments,
)
from dartree.multishift import WeightSequence, family_weights
from dartree.product import build_product, compositions, multi_indices

c1 = WeightSequence.c_a(1)


def simplex_moment(gamma):
    """Normalized sphere integral of |z^gamma|^2 via sympy on the simplex:
    (|z_1|^2, ..., |z_d|^2) is uniform on the simplex."""
    d = len(gamma)
    xs = sympy.symbols(f"x0:{d - 1}")
    last = 1 - sum(xs)
    f = prod(x ** g for x, g in zip(xs, gamma[:-1])) * last ** gamma[-1] * factorial(d - 1)
    for i in reversed(range(d - 1)):
        f = sympy.integrate(f, (xs[i], 0, 1 - sum(xs[:i])))
    return Fraction(int(sympy.fraction(f)[0]), int(sympy.fraction(f)[1]))


def test_spherical_Q_examples():
    assert spherical_Q((1, 0), (1, 0), 2) == Fraction(2, 3)
    assert spherical_Q((1, 0), (0, 1), 2) == Fraction(1, 3)
    assert spherical_Q((2, 1), (0, 0), 2) == 1


@pytest.mark.parametrize("d", [2, 3])
def test_spherical_Q_against_sphere_integral(d):
    for beta in multi_indices(d, 2):
        for alpha in multi_indices(d, 2):
            gamma = tuple(a + b for a, b in zip(alpha, beta))
            assert spherical_Q(beta, alpha, d) == simplex_moment(gamma) / simplex_moment(beta)


def test_spherical_Q_normalization():
    for d in (1, 2, 3):
        for beta in multi_indices(d, 3):
            for n in range(7):
                total = sum(Fraction(factorial(n), prod(factorial(x) for x in a)) * spherical_Q(beta, a, d)
                            for a in compositions(n, d))
                assert total == 1


def test_kernel_coefficient_example(T20, ray):
    # the block at d_u = (1, 0) for c_1, d = 2, alpha = (0, 1):
    # 1!0!/(1!1!) * (|d_u| + d)/c_1(|d_u|) = 3 / (3/2) = 2
    p = build_product([T20, ray], 4)
    m = family_weights(p, c1)
    b = kernel_blocks(p)[0]
    assert b.depth == (1, 0)
    assert kernel_coeff_closed(p, c1, b.u, b.F, (0, 1)) == 2
    assert kernel_coeff_oracle(m, b, (0, 1)) == 2
    assert kernel_coeff_oracle(m, b, (0, 0)) == 1


@pytest.mark.parametrize("a", [1, 2, 3])
def test_classical_taylor_coefficients(a):
    d = 2
    z1, z2 = sympy.symbols("z1 z2")
    s = sympy.symbols("s")
    # (1 - s)^-a with s = <z, w>; at w = (1, 1) the coefficient of z^alpha is
    # the kernel coefficient times the multinomial 1 (since w^alpha = 1)
    series = sympy.series((1 - s) ** (-a), s, 0, 6).removeO()
    poly = sympy.Poly(sympy.expand(series.subs(s, z1 + z2)), z1, z2)
    for alpha in multi_indices(d, 5):
        coeff = poly.coeff_monomial(z1 ** alpha[0] * z2 ** alpha[1])
        assert kernel_coeff_from_depth(WeightSequence.c_a(a), (0, 0), alpha) == Fraction(int(coeff.p), int(coeff.q))
        assert kernel_coeff_from_depth(WeightSequence.c_a(a), (0, 0), alpha) == \
            Fraction(prod(a + j for j in range(sum(alpha))), prod(factorial(x) for x in alpha))


def test_dual_coefficients():
    for a in (1, 2, 3, 5):
        c = WeightSequence.recip_c_a(a)
        for du in multi_indices(2, 3):
            for alpha in multi_indices(2, 3):
                t, n = sum(du), sum(alpha)
                expect = Fraction(prod(factorial(x) for x in du), prod(factorial(x + y) for x, y in zip(du, alpha)))
                for j in range(n):
                    expect *= Fraction((t + 2 + j) ** 2, t + a + j)
                assert kernel_coeff_from_depth(c, du, alpha) == expect


@pytest.mark.parametrize("c", ["c_a:1", "c_a:2", "recip_c_a:1"])
def test_kernel_coeff_oracle_all_blocks(B2, T20, c):
    p = build_product([B2, T20], 5)
    w = WeightSequence.parse(c)
    m = family_weights(p, w)
    for b in kernel_blocks(p):
        for alpha in multi_indices(2, min(4, p.Dtot - p.total_depth(b.u))):
            assert kernel_coeff_oracle(m, b, alpha) == kernel_coeff_closed(p, w, b.u, b.F, alpha)


def test_kernel_eval(T20, ray):
    p = build_product([T20, ray], 3)
    K0 = kernel_eval(p, c1, [0, 0], [0, 0], 6)
    assert np.allclose(K0.matrix, np.eye(2))
    z = [0.3 + 0.1j, -0.2j]
    w = [0.1, 0.25 + 0.05j]
    A = kernel_eval(p, c1, z, w, 12).matrix
    B = kernel_eval(p, c1, w, z, 12).matrix
    assert np.abs(A - B.conj().T).max() < 1e-12
    with pytest.raises(PointOutsideDomain):
        kernel_eval(p, c1, [0.8, 0.7], [0, 0], 3)


def test_kernel_eval_classical_limit(ray):
    p = build_product([ray, ray], 2)
    t = 0.6
    prev = None
    for N in (4, 12, 70):
        K = kernel_eval(p, c1, [t, 0], [t, 0], N)
        err = abs(K.matrix[0, 0] - 1 / (1 - t * t))
        assert err <= K.tail_bound + 1e-12
        if prev is not None:
            assert err <= prev
        prev = err
    assert prev < 1e-12


def test_hausdorff():
    assert hausdorff_check(moment_sequence(WeightSequence.const(1), 40), 20).passed
    r = hausdorff_check(moment_sequence(WeightSequence.table([2, 1, 1], 1), 40), 20)
    assert not r.passed and (r.k, r.n) == (2, 0) and r.value == Fraction(-1, 2)
    for d in range(1, 4):
        for a in range(d, 7):
            assert hausdorff_check(moment_sequence(WeightSequence.c_a(a, d), 40), 20).passed


def test_density_shapes():
    for d in range(1, 5):
        for l in range(4):
            w = density(d + 1, d, l)
            assert w.kind == "w"
            assert w.coefficients[d + l - 1] == l + d and sum(map(abs, w.coefficients)) == l + d
            w2 = density(d + 2, d, l)
            assert w2.coefficients[d + l - 1] == (l + d) * (l + d + 1)
            assert w2.coefficients[d + l] == -(l + d) * (l + d + 1)
    assert density(3, 3, 0).kind == "delta_1"
    with pytest.raises(WrongRegime):
        density(2, 3, 0, kind="w")


def test_density_moments_sympy():
    s = sympy.symbols("s")
    for a, d in [(3, 1), (5, 2), (1, 4), (2, 5)]:
        for l in range(3):
            dens = density(a, d, l)
            poly = sum(sympy.Rational(q.numerator, q.denominator) * s ** i
                       for i, q in enumerate(dens.coefficients))
            for n in range(6):
                val = sympy.integrate(s ** n * poly, (s, 0, 1))
                assert Fraction(int(val.p), int(val.q)) == dens.moment(n)
    assert all(x.ok for x in verify_density_moments(3, 1, 2, 20))
    assert all(x.lhs == 1 == x.rhs for x in verify_density_moments(2, 2, 1, 10))
    first = verify_density_moments(4, 3, 0, 5)
    assert [x.lhs for x in first] == [Fraction(3, 3 + n) for n in range(6)]


def test_density_nonnegative_grid():
    grid = np.linspace(0, 1, 1001)
    for a in range(2, 9):
        for d in range(1, a):
            for l in range(3):
                f = density(a, d, l)
                assert min(f(x) for x in grid) >= -1e-9


def test_integral_representation(T20, ray):
    p = build_product([T20, ray], 5)
    b = kernel_blocks(p)[0]
    for a in (1, 2, 3):
        for alpha in multi_indices(2, 4):
            r = integral_representation_check(p, a, b.u, b.F, alpha)
            assert r.ok
    r = integral_representation_check(p, 2, b.u, b.F, (1, 1))
    assert r.a_ratio == 1 and r.lhs == r.nu_moment
    r = integral_representation_check(p, 3, b.u, b.F, (1, 1))
    assert r.ok and r.lhs == r.rho_moment * r.nu_moment
    assert integral_representation_check(p, 3, b.u, b.F, (0, 0)).lhs == 1


@given(st.integers(1, 8), st.integers(1, 8), st.integers(0, 5))
def test_density_moment_identity_property(a, d, l):
    assert all(x.ok for x in verify_density_moments(a, d, l, 12))


@given(st.lists(st.fractions(min_value=Fraction(1, 4), max_value=4, max_denominator=8), min_size=1, max_size=4),
       st.fractions(min_value=Fraction(1, 4), max_value=4, max_denominator=8))
def test_hausdorff_failure_is_real(values, eventual):
    """A reported failure always comes with a negative finite difference."""
    seq = moment_sequence(WeightSequence.table(values, eventual), 16)
    r = hausdorff_check(seq, 8)
    if not r.passed:
        b = seq.bound
        xs = [v / b ** n for n, v in enumerate(seq.values)]
        diff = sum((-1) ** i * sympy.binomial(r.k, i) * xs[r.n + r.k - i] for i in range(r.k + 1))
        assert diff * (-1) ** r.k == r.value < 0
