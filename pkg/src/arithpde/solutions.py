"""The rational functions b_n(x, y) and the explicit solution families.

b_{-1} = 0, b_0 = 1 and
    b_n = (1 - x)/(1 - y^n) b_{n-1} + x/(1 - y^n) b_{n-2}.
Evaluated at (x, y) = (pz, p) they give the additive solution
    sum_n b_n(pz, p) phi^n(alpha) q^(kappa p^n),
whose exponential integral exp(int . dq/q) is the multiplicative one.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Union

from .modforms import ModularPoint, tate_at
from .padic import DomainError, PadicContext, PadicNum, frobenius, vp_int
from .qseries import QSeries, series_exp

Number = Union[int, Fraction, PadicNum]


def b_table(n: int, x, y) -> List:
    """[b_0, ..., b_n] at (x, y); works over Fractions or PadicNums."""
    prev, cur = 0 * x, 1 + 0 * x
    out = [cur]
    yk = 1 + 0 * y
    for k in range(1, n + 1):
        yk = yk * y
        den = 1 - yk
        if den == 0:
            raise ZeroDivisionError(f"1 - y^{k} vanishes")
        prev, cur = cur, ((1 - x) * cur + x * prev) / den
        out.append(cur)
    return out


def b_eval(n: int, x, y):
    """b_n(x, y) by the recurrence (exact for Fraction input)."""
    if n == -1:
        return Fraction(0)
    if n < -1:
        raise DomainError("n must be >= -1")
    x = Fraction(x) if isinstance(x, int) else x
    y = Fraction(y) if isinstance(y, int) else y
    return b_table(n, x, y)[n]


def b_closed(n: int, mode: str, var) -> Fraction:
    """b_n(x, 0) = (1 + (-1)^n x^(n+1)) / (1 + x) or
    b_n(0, y) = 1 / ((1 - y)(1 - y^2)...(1 - y^n))."""
    var = Fraction(var)
    if mode == "y=0":
        if var == -1:
            # the polynomial 1 - x + ... + (-1)^n x^n at x = -1
            return Fraction(n + 1)
        return (1 + (-1) ** n * var ** (n + 1)) / (1 + var)
    if mode == "x=0":
        den = Fraction(1)
        for k in range(1, n + 1):
            den *= 1 - var**k
        if den == 0:
            raise ZeroDivisionError("1 - y^k vanishes")
        return 1 / den
    raise DomainError(f"mode must be 'y=0' or 'x=0', got {mode!r}")


def b_poly_y0(n: int) -> List[int]:
    """Integer coefficients (in x) of the polynomial b_n(x, 0)."""
    prev, cur = [0], [1]
    for _ in range(n):
        nxt = [0] * (len(cur) + 1)
        for i, c in enumerate(cur):
            nxt[i] += c
            nxt[i + 1] -= c
        for i, c in enumerate(prev):
            nxt[i + 1] += c
        prev, cur = cur, nxt
    return cur


def b_dx_origin(n: int) -> int:
    """d b_n / dx at (0, 0), read off the polynomial b_n(x, 0)."""
    poly = b_poly_y0(n)
    return poly[1] if len(poly) > 1 else 0


# -- solution families --


def _exactify(v):
    if isinstance(v, bool):
        raise TypeError("bool is not a parameter")
    if isinstance(v, int):
        return Fraction(v)
    return v


def check_kappa(kappa, p: int) -> int:
    if not isinstance(kappa, int) or isinstance(kappa, bool) or kappa < 1:
        raise DomainError(f"kappa must be a positive integer, got {kappa!r}")
    if kappa % p == 0:
        raise DomainError(f"kappa must not be divisible by p = {p}")
    return kappa


def additive_terms(ctx: PadicContext, z, kappa: int, alpha, M: int):
    """[(exponent, coefficient)] of the additive solution up to q^M."""
    p = ctx.p
    check_kappa(kappa, p)
    n_max = 0
    while kappa * p ** (n_max + 1) <= M:
        n_max += 1
    if kappa > M:
        return []
    z = _exactify(z)
    if isinstance(z, Fraction):
        bs = [ctx.coerce(b) for b in b_table(n_max, p * z, Fraction(p))]
    else:
        z = ctx.coerce(z)
        bs = b_table(n_max, z * p, ctx.coerce(p))
    a = ctx.coerce(_exactify(alpha))
    out = []
    for n in range(n_max + 1):
        out.append((kappa * p**n, bs[n] * frobenius(a, n)))
    return out


def u_additive(ctx: PadicContext, z, kappa: int, alpha, M: int) -> QSeries:
    cs = [ctx.zero() for _ in range(M + 1)]
    for e, c in additive_terms(ctx, z, kappa, alpha, M):
        cs[e] = c
    return QSeries(ctx, 0, cs)


def working_extra(p: int, M: int) -> int:
    """Extra digits that absorb the division by n in exp and by kappa p^n in the integral."""
    return vp_int(math.factorial(max(M, 1)), p) + 2 * max(1, math.ceil(math.log(max(M, 2), p))) + 3


def u_mult(ctx: PadicContext, z, kappa: int, alpha, M: int) -> QSeries:
    """exp(sum_n b_n(pz, p) phi^n(alpha) q^(kappa p^n) / (kappa p^n)).

    Computed with extra digits and reported back at the context precision;
    int and Fraction parameters are exact, PadicNum ones keep their precision.
    """
    big = ctx.raised(working_extra(ctx.p, M))
    cs = [big.zero() for _ in range(M + 1)]
    for e, c in additive_terms(big, z, kappa, alpha, M):
        cs[e] = c / e
    log_u = QSeries(big, 0, cs)
    return series_exp(log_u).to_context(ctx)


def u_modular(ctx: PadicContext, M: int, eta=1, v=None, z=None, kappa=None, alpha=None) -> ModularPoint:
    """(v^4 a4_inf(eta q w), v^6 a6_inf(eta q w)) with w = u_mult(z, kappa, alpha)
    for the deformed family and w = 1 for the plain one."""
    eta_p = ctx.coerce(_exactify(eta))
    if not eta_p.is_unit():
        raise DomainError("eta must be a unit")
    arg = QSeries.monomial(ctx, 1, M + 1, eta_p)
    if kappa is not None:
        w = u_mult(ctx, 0 if z is None else z, kappa, 0 if alpha is None else alpha, M)
        arg = arg * w
    a, b = tate_at(ctx, arg, M)
    if v is not None:
        if not isinstance(v, QSeries):
            v = QSeries.constant(ctx, _exactify(v), M)
        if not v.is_unit():
            raise DomainError("v must be a unit series")
        v2 = v * v
        v4 = v2 * v2
        a, b = a * v4, b * v4 * v2
    return ModularPoint(a.truncate(M), b.truncate(M))


@dataclass
class SolutionFamily:
    kind: str  # additive, multiplicative, modular_plain, modular_deformed
    params: Dict[str, object] = field(default_factory=dict)
    payload: Optional[Union[QSeries, ModularPoint]] = None

    def is_integral(self) -> bool:
        if isinstance(self.payload, QSeries):
            return self.payload.is_integral()
        return self.payload.a.is_integral() and self.payload.b.is_integral()


def build_family(kind: str, ctx: PadicContext, M: int, **params) -> SolutionFamily:
    z = params.get("z", 0)
    kappa = params.get("kappa")
    alpha = params.get("alpha", 1)
    if kind == "additive":
        payload = u_additive(ctx, z, kappa, alpha, M)
    elif kind == "multiplicative":
        payload = u_mult(ctx, z, kappa, alpha, M)
    elif kind == "modular_plain":
        payload = u_modular(ctx, M, params.get("eta", 1), params.get("v"))
    elif kind == "modular_deformed":
        payload = u_modular(ctx, M, params.get("eta", 1), params.get("v"), z, kappa, alpha)
    else:
        raise DomainError(f"unknown family {kind!r}")
    return SolutionFamily(kind, dict(params), payload)
