"""Exact fractions P / Delta^k in the jet variables a4_i, a6_i.

a4_i and a6_i stand for the i-th q-derivative of a4 and a6, and
Delta = -64 a4_0^3 - 432 a6_0^2.  Numerators are sympy polynomials over QQ;
common Delta factors are removed only by an explicit ``normalize``.
"""

from __future__ import annotations

import random
import re
from fractions import Fraction
from functools import lru_cache
from tokenize import TokenError
from typing import Dict, Optional, Tuple

import sympy
from sympy import QQ, Poly

from .padic import DomainError, PadicContext
from .qseries import QSeries, dq

_NAME = re.compile(r"^a([46])_(\d+)$")


@lru_cache(maxsize=None)
def jet(kind: int, i: int) -> sympy.Symbol:
    """The symbol a4_i (kind 4) or a6_i (kind 6)."""
    if kind not in (4, 6) or i < 0:
        raise DomainError(f"no jet variable a{kind}_{i}")
    return sympy.Symbol(f"a{kind}_{i}")


def _parse_name(sym) -> Tuple[int, int]:
    m = _NAME.match(str(sym))
    if not m:
        raise DomainError(f"unknown variable {sym}")
    return int(m.group(1)), int(m.group(2))


A4 = jet(4, 0)
A6 = jet(6, 0)
DELTA_EXPR = -64 * A4**3 - 432 * A6**2


def _poly(expr) -> Poly:
    expr = sympy.sympify(expr)
    gens = sorted(expr.free_symbols, key=lambda s: _parse_name(s)[::-1])
    if not gens:
        gens = [A4]
    return Poly(expr, *gens, domain=QQ)


DELTA = _poly(DELTA_EXPR)


class SymFraction:
    """num / Delta^k with num a polynomial in the jet variables."""

    __slots__ = ("num", "k")

    def __init__(self, num, k: int = 0):
        if k < 0:
            raise DomainError("the Delta power must be non-negative")
        self.num = num if isinstance(num, Poly) else _poly(num)
        self.k = k

    @classmethod
    def const(cls, c) -> "SymFraction":
        return cls(sympy.Rational(Fraction(c).numerator, Fraction(c).denominator))

    @classmethod
    def var(cls, kind: int, i: int) -> "SymFraction":
        return cls(jet(kind, i))

    @classmethod
    def delta(cls) -> "SymFraction":
        return cls(DELTA_EXPR)

    # -- inspection --

    def expr(self):
        return self.num.as_expr() / DELTA_EXPR**self.k

    @property
    def order(self) -> int:
        """Largest jet index present (0 for constants)."""
        idx = [_parse_name(s)[1] for s in self.num.as_expr().free_symbols]
        return max(idx, default=0)

    def is_zero(self) -> bool:
        return self.num.is_zero

    def constant_value(self) -> Optional[Fraction]:
        """The value when the normalized fraction is a constant, else None."""
        f = self.normalize()
        e = f.num.as_expr()
        if f.k == 0 and not e.free_symbols:
            r = sympy.Rational(e)
            return Fraction(int(r.p), int(r.q))
        return None

    def normalize(self) -> "SymFraction":
        """Cancel Delta factors from the numerator."""
        num, k = self.num, self.k
        while k > 0 and not num.is_zero:
            q, r = sympy.div(num, DELTA, domain=QQ)
            if not r.is_zero:
                break
            num, k = q, k - 1
        if num.is_zero:
            k = 0
        return SymFraction(num, k)

    def __eq__(self, other):
        if not isinstance(other, SymFraction):
            other = SymFraction.const(other)
        d = (self - other).num
        return d.is_zero

    def __hash__(self):
        f = self.normalize()
        return hash((str(f.num.as_expr()), f.k))

    def __repr__(self):
        return f"SymFraction({to_text(self)})"

    # -- arithmetic --

    def _lift(self, k: int) -> Poly:
        if k == self.k:
            return self.num
        return self.num * DELTA ** (k - self.k)

    def __add__(self, other):
        if not isinstance(other, SymFraction):
            other = SymFraction.const(other)
        k = max(self.k, other.k)
        return SymFraction(self._lift(k) + other._lift(k), k)

    __radd__ = __add__

    def __neg__(self):
        return SymFraction(-self.num, self.k)

    def __sub__(self, other):
        if not isinstance(other, SymFraction):
            other = SymFraction.const(other)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if not isinstance(other, SymFraction):
            other = SymFraction.const(other)
        return SymFraction(self.num * other.num, self.k + other.k)

    __rmul__ = __mul__

    def partial(self, kind: int, i: int) -> "SymFraction":
        """Partial derivative in a4_i or a6_i (quotient rule through Delta^-k)."""
        x = jet(kind, i)
        dnum = _diff(self.num, x)
        if self.k == 0 or i != 0:
            return SymFraction(dnum, self.k)
        ddelta = _diff(DELTA, x)
        top = dnum * DELTA - self.num * ddelta * self.k
        return SymFraction(top, self.k + 1)


def _diff(poly: Poly, x) -> Poly:
    if x not in poly.gens:
        return Poly(0, *poly.gens, domain=QQ)
    return poly.diff(x)


def hurlburt_symbolic() -> SymFraction:
    """(2 a4 a6' - 3 a6 a4') / Delta."""
    return SymFraction(2 * A4 * jet(6, 1) - 3 * A6 * jet(4, 1), 1)


def sym_dq(f: SymFraction) -> SymFraction:
    """Total derivative with a^(i) -> a^(i+1)."""
    keys = {_parse_name(s) for s in f.num.as_expr().free_symbols}
    if f.k:
        keys |= {(4, 0), (6, 0)}
    out = SymFraction(0)
    for kind, i in sorted(keys):
        out = out + f.partial(kind, i) * SymFraction.var(kind, i + 1)
    return out


def serre_partial(f: SymFraction, r: int) -> SymFraction:
    """16 a4^2 d/da6_r - 72 a6 d/da4_r."""
    return SymFraction(16 * A4**2) * f.partial(6, r) - SymFraction(72 * A6) * f.partial(4, r)


def euler_D(f: SymFraction, r: int) -> SymFraction:
    """4 a4 d/da4_r + 6 a6 d/da6_r."""
    return SymFraction(4 * A4) * f.partial(4, r) + SymFraction(6 * A6) * f.partial(6, r)


# -- text format --


def to_text(f: SymFraction) -> str:
    body = sympy.sstr(sympy.expand(f.num.as_expr()), order="lex")
    if f.k == 0:
        return body
    return f"({body})/Delta^{f.k}"


def parse(text: str) -> SymFraction:
    """Parse 'poly' or '(poly)/Delta^k' in the variables a4_i, a6_i."""
    text = text.strip()
    m = re.match(r"^\((.*)\)\s*/\s*Delta\^(\d+)$", text, re.S)
    body, k = (m.group(1), int(m.group(2))) if m else (text, 0)
    names = set(re.findall(r"a[46]_\d+", body))
    local = {n: sympy.Symbol(n) for n in names}
    try:
        expr = sympy.parse_expr(body, local_dict=local, evaluate=True)
    except (SyntaxError, TypeError, TokenError, sympy.SympifyError) as exc:
        raise DomainError(f"cannot parse {text!r}") from exc
    extra = {str(s) for s in expr.free_symbols} - names
    if extra:
        raise DomainError(f"unknown symbols {sorted(extra)}")
    return SymFraction(expr, k)


# -- evaluation on series --


def evaluate(f: SymFraction, jets: Dict[Tuple[int, int], QSeries], delta: QSeries) -> QSeries:
    """Substitute series for the jet variables; delta must be the value of Delta."""
    ctx = delta.ctx
    M = min(s.M for s in jets.values()) if jets else delta.M
    total = QSeries.zero(ctx, M)
    gens = [_parse_name(g) for g in f.num.gens]
    for exps, coeff in f.num.terms():
        c = Fraction(int(coeff.numerator), int(coeff.denominator))
        term = QSeries.constant(ctx, c, M)
        for key, e in zip(gens, exps):
            if e:
                if key not in jets:
                    raise DomainError(f"no value for a{key[0]}_{key[1]}")
                term = term * jets[key] ** e
        total = total + term
    if f.k:
        total = total * delta.inverse() ** f.k
    return total


def jets_of(a: QSeries, b: QSeries, r: int) -> Dict[Tuple[int, int], QSeries]:
    out = {}
    da, db = a, b
    for i in range(r + 1):
        out[(4, i)] = da
        out[(6, i)] = db
        da, db = dq(da), dq(db)
    return out


def evaluate_at_point(f: SymFraction, a: QSeries, b: QSeries) -> QSeries:
    delta = (a * a * a * 4 + b * b * 27) * (-16)
    return evaluate(f, jets_of(a, b, f.order), delta)


def fourier_eval(f: SymFraction, ctx: PadicContext, M: int) -> QSeries:
    """Value on the Tate point with a^(i) -> dq^i of the Tate coefficients."""
    from .modforms import tate_point

    pt = tate_point(ctx, M)
    return evaluate_at_point(f, pt.a, pt.b)


def _random_series(ctx, M, rng, unit=False):
    top = ctx.p**ctx.N
    cs = [rng.randrange(top) for _ in range(M + 1)]
    if unit and cs[0] % ctx.p == 0:
        cs[0] += 1
    return QSeries.from_values(ctx, cs, 0, M)


def weight_check_random(
    f: SymFraction,
    m: int,
    trials: int = 3,
    ctx: Optional[PadicContext] = None,
    M: int = 12,
    seed: int = 0,
    constant_scale: bool = False,
):
    """Check f(Lam^4 a, Lam^6 b) = Lam^m f(a, b) on random substitutions.

    Returns (passed, witness); witness describes the first failing trial.
    """
    ctx = ctx or PadicContext(5, 8)
    rng = random.Random(seed)
    for t in range(trials):
        while True:
            a = _random_series(ctx, M, rng, unit=True)
            b = _random_series(ctx, M, rng, unit=True)
            if ((a * a * a * 4 + b * b * 27) * (-16)).is_unit():
                break
        if constant_scale:
            lam = QSeries.constant(ctx, rng.randrange(1, ctx.p) + ctx.p * rng.randrange(ctx.p**ctx.N), M)
        else:
            lam = _random_series(ctx, M, rng, unit=True)
        l2 = lam * lam
        l4 = l2 * l2
        lhs = evaluate_at_point(f, l4 * a, l4 * l2 * b)
        rhs = evaluate_at_point(f, a, b) * (lam**m)
        diff = lhs - rhs
        bad = [n for n, c in diff.items() if not c.is_zero()]
        if bad:
            return False, {"trial": t, "exponent": bad[0], "lambda0": str(lam[0])}
    return True, None


# -- Ramanujan identities over the rationals --


def ramanujan_identities(M: int) -> Dict[str, bool]:
    """12 dq(a4) = 4 P a4 - 72 a6 and 12 dq(a6) = 6 P a6 + 16 a4^2 with
    a4 = -E4/48, a6 = -E6/864, P = E2, exactly to q^M."""
    from .modforms import eisenstein_list, int_dq, int_mul

    L = M + 1
    P = eisenstein_list(2, M)
    a4 = [Fraction(-c, 48) for c in eisenstein_list(4, M)]
    a6 = [Fraction(-c, 864) for c in eisenstein_list(6, M)]
    pa4 = int_mul(P, a4, L)
    pa6 = int_mul(P, a6, L)
    a4sq = int_mul(a4, a4, L)
    lhs4 = [12 * c for c in int_dq(a4)]
    lhs6 = [12 * c for c in int_dq(a6)]
    rhs4 = [4 * x - 72 * y for x, y in zip(pa4, a6)]
    rhs6 = [6 * x + 16 * y for x, y in zip(pa6, a4sq)]
    return {"a4": lhs4 == rhs4, "a6": lhs6 == rhs6}
