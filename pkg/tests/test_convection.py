import random
from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from arithpde.convection import (
    EquationParams,
    apply_operator,
    beta_equation_residual,
    constant_constraint,
    covariance_report,
    decode_iota,
    encode_iota,
    psi_p,
    psi_p_const,
    psi_q,
    residual,
    solve_beta,
    term_solver,
)
from arithpde.modforms import tate_point
from arithpde.padic import DomainError, PadicContext, teichmuller
from arithpde.qseries import QSeries
from arithpde.solutions import u_mult, u_modular

N = 8
C = PadicContext(5, N)
F2 = PadicContext(5, 6, 2)


def unit_series(ctx, M, rng):
    cs = [rng.randrange(ctx.p**ctx.N) for _ in range(M + 1)]
    if cs[0] % ctx.p == 0:
        cs[0] += 1
    return QSeries.from_values(ctx, cs, 0, M)


def exact_log1p(x, terms=40):
    return sum(Fraction((-1) ** (k - 1)) * x**k / k for k in range(1, terms))


def exact_exp(x, terms=40):
    return sum(x**k / factorial(k) for k in range(terms))


def test_psi_q_examples():
    q = QSeries.q(C, 10)
    assert psi_q(q).agrees(QSeries.one(C, 10), N)
    assert psi_q(QSeries.constant(C, 3, 10)).valuation() >= N


def test_psi_p_examples():
    q = QSeries.q(C, 10)
    assert psi_p(q).valuation() >= N - 1
    z = teichmuller(3, C)
    assert psi_p(QSeries.constant(C, z, 10)).valuation() >= N - 1
    assert psi_p_const(z).is_zero()


def test_psi_p_of_one_plus_p():
    # (1/5) log(6 / 6^5) = -(4/5) log(1 + 5)
    expected = -Fraction(4, 5) * exact_log1p(Fraction(5))
    got = psi_p_const(C(6))
    assert got.agrees(C(expected), N - 1)


@given(st.integers(0, 2**30), st.integers(0, 2**30))
@settings(max_examples=10)
def test_characters_are_homomorphisms(s1, s2):
    u1 = unit_series(C, 12, random.Random(s1))
    u2 = unit_series(C, 12, random.Random(s2))
    assert psi_q(u1 * u2).agrees(psi_q(u1) + psi_q(u2), N)
    assert psi_p(u1 * u2).agrees(psi_p(u1) + psi_p(u2), N - 1)


def test_residual_of_one():
    eq = EquationParams.make(C, 3, 5, 0)
    r = residual(QSeries.one(C, 20), eq)
    assert r.passed and r.min_coeff_valuation >= N - 1


def test_equation_params_validation():
    with pytest.raises(DomainError):
        EquationParams.make(C, 5, 0)
    with pytest.raises(DomainError):
        EquationParams.make(C, 1, 1)
    with pytest.raises(DomainError):
        EquationParams.make(C, 1, 0, rhs=2)
    assert EquationParams.make(C, 2).declared_integer
    assert not EquationParams.make(C, Fraction(1, 2)).declared_integer


def test_solve_beta_closed_forms():
    for kappa, b in ((1, Fraction(5, 4)), (-1, Fraction(-5, 4))):
        eq = EquationParams.make(C, kappa, 0, -1)
        beta = solve_beta(eq)
        assert beta.agrees(C(exact_exp(b)), N)
        check = beta_equation_residual(beta, eq)
        assert check.prec >= N - 1 and (check.is_zero() or check.val >= N - 1)


def test_solve_beta_with_z_and_f2():
    eq = EquationParams.make(F2, 2, 5, -1)
    beta = solve_beta(eq)
    check = beta_equation_residual(beta, eq)
    assert check.is_zero() or check.val >= F2.N - 1
    assert constant_constraint(eq, beta).val >= F2.N - 2


def test_solution_residuals():
    u = u_mult(C, 5, 2, 3, 40)
    eq0 = EquationParams.make(C, 2, 5, 0)
    assert residual(u.scale(teichmuller(2, C)), eq0).passed
    eq1 = EquationParams.make(C, 2, 5, -1)
    assert residual(u.scale(solve_beta(eq1)), eq1).passed
    # a wrong kappa does not solve the equation
    assert not residual(u, EquationParams.make(C, 3, 5, 0)).passed


def test_apply_operator_is_additive_in_log():
    eq = EquationParams.make(C, 1, 0, 0)
    u = u_mult(C, 0, 1, 1, 20)
    twice = apply_operator(u * u, eq)
    assert twice.agrees(apply_operator(u, eq) * 2, N - 1)


def test_encode_trivial_pair():
    one = QSeries.one(C, 20)
    pt = encode_iota(one, one)
    tp = tate_point(C, 20)
    assert pt.a.agrees(tp.a, N) and pt.b.agrees(tp.b, N)


def test_encode_sign_of_v():
    rng = random.Random(1)
    u, v = unit_series(C, 15, rng), unit_series(C, 15, rng)
    p1, p2 = encode_iota(u, v), encode_iota(u, -v)
    assert p1.a.agrees(p2.a, N) and p1.b.agrees(p2.b, N)


def test_decode_tate_point():
    d = decode_iota(tate_point(C, 20))
    assert d.u.agrees(QSeries.one(C, d.u.M), N)
    assert d.v2.agrees(QSeries.one(C, d.v2.M), N)


def test_decode_rejects_good_type():
    from arithpde.modforms import ModularPoint

    pt = ModularPoint(QSeries.constant(C, 1, 10), QSeries.constant(C, 1, 10))
    with pytest.raises(DomainError):
        decode_iota(pt)


def test_decode_flags_missing_root():
    rng = random.Random(4)
    u = unit_series(C, 15, rng)
    v2 = QSeries.from_values(C, [2, 1], 0, 15)  # 2 is not a square mod 5
    v4 = v2 * v2
    from arithpde.modforms import ModularPoint, tate_at

    a, b = tate_at(C, u.shift(1), 15)
    d = decode_iota(ModularPoint((a * v4).truncate(15), (b * v4 * v2).truncate(15)))
    assert not d.v_exists
    assert d.v2.agrees(v2, N, upto=d.v2.M)


def test_modular_family_roundtrip():
    M = 25
    eta = teichmuller(2, C)
    v = QSeries.from_values(C, [3, 1, 4], 0, M)
    pt = u_modular(C, M, eta, v, 5, 1, 2)
    d = decode_iota(pt)
    expected = u_mult(C, 5, 1, 2, M).scale(eta)
    assert d.u.agrees(expected, N, upto=d.u.M)
    assert d.v2.agrees(v * v, N, upto=d.v2.M)


def test_covariance_report():
    u = unit_series(C, 15, random.Random(8))
    rep = covariance_report(u, 2)
    assert rep == {"psi_q": True, "psi_p": True, "psi_q_subst": True, "psi_p_subst": True}


def test_census_examples():
    c3 = term_solver(EquationParams.make(C, 3, 0, 0), 1, 30)
    assert c3.free == [3] and c3.obstructed == []
    assert sum(r.status == "determined" for r in c3.rows) == 29
    half = term_solver(EquationParams.make(C, Fraction(1, 2), 0, 0), 1, 30)
    assert half.parameter_count == 0
    assert half.u.agrees(QSeries.one(C, 30), N)


def test_census_reproduces_family_with_alpha():
    census = term_solver(EquationParams.make(C, 1, 5, 0), 1, 30, alpha=3)
    assert census.free == [1]
    assert census.u.agrees(u_mult(C, 5, 1, 3, 30), N - 3)


def test_census_rejects_bad_constant():
    with pytest.raises(DomainError):
        term_solver(EquationParams.make(C, 1, 0, -1), 1, 10)
    eq = EquationParams.make(C, 1, 0, -1)
    census = term_solver(eq, solve_beta(eq), 20)
    assert residual(census.u, eq).passed
