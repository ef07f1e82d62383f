import json
from fractions import Fraction
from pathlib import Path

import pytest
from hypothesis import given
from hypothesis import strategies as st

from arithpde import modforms as mf
from arithpde.modforms import (
    ModularPoint,
    delta_series,
    eisenstein,
    hurlburt_f1q,
    integer_expansion,
    inverse_j,
    is_ordinary,
    j_invariant,
    sigma_inverse_j,
    sigma_series,
    tate_point,
)
from arithpde.padic import DomainError, PadicContext
from arithpde.qseries import QSeries, compose

C = PadicContext(5, 8)
C7 = PadicContext(7, 8)


def divisor_sum(n, m):
    return sum(d**m for d in range(1, n + 1) if n % d == 0)


def residues(F, lo, hi):
    return [F[n].to_fraction() % F.p ** F.ctx.N for n in range(lo, hi)]


def test_sigma_examples():
    s3 = sigma_series(3, C, 5)
    assert int(s3[1]) == 1 and int(s3[2]) == 9
    assert int(sigma_series(5, C, 5)[2]) == 33
    with pytest.raises(DomainError):
        sigma_series(2, C, 5)


@given(st.integers(1, 60), st.sampled_from([1, 3, 5]))
def test_sigma_divisor_oracle(n, m):
    assert mf.sigma_list(m, 60)[n] == divisor_sum(n, m)


def test_eisenstein_examples():
    _, e4 = integer_expansion("E4", 3)
    _, e6 = integer_expansion("E6", 3)
    _, e2 = integer_expansion("E2", 3)
    assert e4[:3] == [1, 240, 2160]
    assert e6[:3] == [1, -504, -16632]
    assert e2[:3] == [1, -24, -72]
    assert eisenstein(4, C, 5)[0] == C.one()
    with pytest.raises(DomainError):
        eisenstein(8, C, 5)


def test_tate_point():
    pt = tate_point(C, 20)
    assert pt.a[0] == C(Fraction(-1, 48))
    assert pt.a[0].is_unit()
    d = pt.delta()
    assert d.order() == 1
    assert residues(d, 1, 4) == [1, (-24) % 5**8, 252]
    assert pt.is_bad_type() and pt.classify() == "bad"


def test_delta_series_product_form():
    D = delta_series(C, 30)
    prod = [1] + [0] * 30
    for n in range(1, 31):
        for _ in range(24):
            for k in range(30, n - 1, -1):
                prod[k] -= prod[k - n]
    assert residues(D, 0, 31) == [c % 5**8 for c in [0] + prod[:30]]


def test_j_expansion():
    j = j_invariant(tate_point(C, 10))
    assert j.lowest == -1
    assert residues(j, -1, 2) == [1, 744, 196884]


def test_inverse_j_identity():
    pt = tate_point(C, 15)
    a = pt.a
    lhs = inverse_j(pt) * (a * a * a * (2**8 * 27))
    assert lhs.agrees(pt.discriminant_form(), 8)


def test_j_inverse_consistent():
    pt = tate_point(C, 15)
    prod = j_invariant(pt) * inverse_j(pt)
    assert prod.M >= 12
    assert prod.agrees(QSeries.one(C, prod.M), 8)


def test_sigma_inverts_inverse_j():
    pt = tate_point(C, 20)
    x = inverse_j(pt).declare_order(1)
    s = sigma_inverse_j(C, x.M)
    assert compose(s, x).agrees(QSeries.q(C, x.M), 8)


def test_ordinarity():
    assert is_ordinary(tate_point(C, 10))
    assert is_ordinary(tate_point(C7, 10))
    pt = ModularPoint(QSeries.constant(C, 5, 10), QSeries.constant(C, 1, 10))
    assert not is_ordinary(pt)
    with pytest.raises(DomainError):
        is_ordinary(tate_point(PadicContext(11, 4), 5))


def test_classification():
    good = ModularPoint(QSeries.constant(C, 1, 5), QSeries.constant(C, 1, 5))
    assert good.is_good_type() and not good.is_bad_type()
    assert good.classify() == "good"


def test_hurlburt_constant_point_vanishes():
    pt = ModularPoint(QSeries.constant(C, 2, 8), QSeries.constant(C, 3, 8))
    f = hurlburt_f1q(pt)
    assert all(c.is_zero() for c in f.coeffs)


def test_hurlburt_on_tate_point():
    # Ramanujan's identities reduce the numerator to -Delta/24
    f = hurlburt_f1q(tate_point(C, 20))
    assert f.order() == 0
    assert f.agrees(QSeries.constant(C, Fraction(-1, 24), f.M), 8)


def test_fixtures_bit_exact():
    for name in mf.FIXTURE_NAMES:
        path = Path(mf.__file__).parent / "data" / f"{name}.json"
        assert path.read_text() == mf.fixture_text(mf.compute_fixture(name))


def test_fixture_env_override(tmp_path, monkeypatch):
    mf.write_fixtures(tmp_path, M=12)
    data = json.loads((tmp_path / "E4.json").read_text())
    data["coeffs"][1] = "241"
    (tmp_path / "E4.json").write_text(mf.fixture_text(data))
    monkeypatch.setenv(mf.FIXTURE_ENV, str(tmp_path))
    assert integer_expansion("E4", 5)[1][1] == 241
    # beyond the stored order the expansion is recomputed
    assert integer_expansion("E4", 20)[1][1] == 240
    monkeypatch.delenv(mf.FIXTURE_ENV)
    assert integer_expansion("E4", 5)[1][1] == 240


def test_lagrange_inversion():
    assert mf.int_reverse([0, 1, 1, 0, 0, 0]) == [0, 1, -1, 2, -5, 14]
