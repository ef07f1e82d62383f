from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from arithpde.modforms import tate_point
from arithpde.padic import DomainError, PadicContext
from arithpde.qseries import QSeries
from arithpde.solutions import (
    additive_terms,
    b_closed,
    b_dx_origin,
    b_eval,
    b_poly_y0,
    build_family,
    check_kappa,
    u_additive,
    u_modular,
    u_mult,
)

N = 8
C = PadicContext(5, N)
F2 = PadicContext(5, 6, 2)
rationals = st.fractions(min_value=-20, max_value=20, max_denominator=50)


def test_seeds():
    assert b_eval(0, 3, 4) == 1
    assert b_eval(-1, 3, 4) == 0
    with pytest.raises(DomainError):
        b_eval(-2, 0, 0)


@given(rationals, rationals.filter(lambda y: y != 1))
def test_b1(x, y):
    assert b_eval(1, x, y) == (1 - x) / (1 - y)


def test_closed_form_examples():
    x = Fraction(3, 7)
    assert b_eval(3, x, 0) == 1 - x + x**2 - x**3
    assert b_eval(4, x, 0) == (1 + x**5) / (1 + x) == b_closed(4, "y=0", x)
    y = Fraction(2, 9)
    assert b_eval(2, 0, y) == 1 / ((1 - y) * (1 - y**2)) == b_closed(2, "x=0", y)
    assert all(b_eval(n, 0, 0) == 1 for n in range(10))
    assert b_closed(5, "y=0", -1) == 6
    with pytest.raises(DomainError):
        b_closed(2, "z=0", 1)


@given(st.integers(0, 20), rationals)
def test_closed_forms_agree(n, v):
    assert b_eval(n, v, 0) == b_closed(n, "y=0", v)
    if v not in (1, -1):
        assert b_eval(n, 0, v) == b_closed(n, "x=0", v)


def test_derivative_at_origin():
    assert b_poly_y0(3) == [1, -1, 1, -1]
    for n in range(1, 21):
        assert b_dx_origin(n) == -1
        # finite difference on the polynomial b_n(x, 0) at two tiny samples
        h = Fraction(1, 10**30)
        fd = (b_eval(n, h, 0) - b_eval(n, -h, 0)) / (2 * h)
        assert abs(fd + 1) < Fraction(1, 10**20)


def test_vanishing_denominator():
    with pytest.raises(ZeroDivisionError):
        b_eval(2, 0, -1)


def test_check_kappa():
    assert check_kappa(2, 5) == 2
    for bad in (0, -1, 5, Fraction(1, 2), True):
        with pytest.raises(DomainError):
            check_kappa(bad, 5)


def test_additive_example():
    terms = additive_terms(C, 0, 1, 1, 30)
    assert [e for e, _ in terms] == [1, 5, 25]
    assert terms[1][1] == C(Fraction(-1, 4))
    assert terms[2][1] == C(Fraction(1, 96))
    assert u_additive(C, 0, 1, 0, 30).valuation() >= N


def test_additive_frobenius_twist():
    w = F2.gen()
    terms = additive_terms(F2, 0, 1, w, 5)
    assert terms[1][1] == F2(Fraction(-1, 4)) * w.frobenius()


def test_u_mult_examples():
    assert u_mult(C, 0, 1, 0, 10).agrees(QSeries.one(C, 10), N)
    u = u_mult(C, 0, 1, 1, 10)
    assert u.is_integral() and u[0] == C.one()
    # exp(q - q^5/20) = 1 + q + q^2/2 + q^3/6 + q^4/24 + (1/120 - 1/20) q^5 + ...
    assert u[4] == C(Fraction(1, 24))
    assert u[5] == C(Fraction(1, 120) - Fraction(1, 20))


@given(st.sampled_from([5, 7]), st.integers(1, 4), st.integers(0, 3), st.integers(0, 30))
def test_integrality(p, kappa, zk, alpha):
    if kappa % p == 0:
        return
    ctx = PadicContext(p, 6)
    u = u_mult(ctx, zk * p, kappa, alpha, 30)
    assert u.is_integral()


def test_u_modular_plain_is_tate():
    pt = u_modular(C, 15)
    tp = tate_point(C, 15)
    assert pt.a.agrees(tp.a, N) and pt.b.agrees(tp.b, N)
    deformed = u_modular(C, 15, 2, 3, 5, 1, 0)
    plain = u_modular(C, 15, 2, 3)
    assert deformed.a.agrees(plain.a, N) and deformed.b.agrees(plain.b, N)


def test_build_family():
    fam = build_family("multiplicative", C, 10, z=5, kappa=2, alpha=1)
    assert fam.is_integral()
    assert build_family("modular_plain", C, 10).payload.classify() == "bad"
    with pytest.raises(DomainError):
        build_family("nothing", C, 10)
