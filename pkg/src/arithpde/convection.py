"""The characters Psi_q, Psi_p on unit series and the equations

    Psi_q(u) + kappa Psi_p(u) + kappa z phi(Psi_p(u)) = rhs,  rhs in {0, -1},

together with the beta equation, the (u, v) <-> (a, b) correspondence for
bad-type points, and a coefficient-by-coefficient linear solver.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Tuple, Union

from .modforms import ModularPoint, inverse_j, sigma_inverse_j, tate_at
from .padic import DomainError, PadicContext, PadicNum, frobenius, pexp, plog
from .qseries import QSeries, compose, dq, phi_l, phi_star, series_exp, series_log, series_sqrt
from .solutions import working_extra

# -- characters --


def _split_unit(u: QSeries) -> Tuple[int, QSeries]:
    """u = q^e w with w a unit power series."""
    s = u.strip()
    e = s.lowest
    w = s.shift(-e)
    if not w[0].is_unit():
        raise DomainError("series is not a unit times a power of q")
    return e, w


def psi_q(u: QSeries) -> QSeries:
    """dq(u) / u; for u = q^e w this is e + dq(w)/w."""
    e, w = _split_unit(u)
    out = dq(w) / w
    return out + e if e else out


def psi_p(u: QSeries) -> QSeries:
    """(1/p) log(phi_star(u) / u^p); loses one digit."""
    _, w = _split_unit(u)
    p = u.p
    ratio = phi_star(w) / (w**p)
    return series_log(ratio).map_coeffs(lambda c: c.divide_by_p())


def psi_p_const(c: PadicNum) -> PadicNum:
    """Psi_p of a unit constant: (1/p) log(phi(c) / c^p)."""
    if not c.is_unit():
        raise DomainError("Psi_p needs a unit")
    return plog(frobenius(c) / c**c.ctx.p).divide_by_p()


# -- equations --


@dataclass(frozen=True)
class EquationParams:
    """kappa, z and the right-hand side rhs in {0, -1}.

    ``kappa_exact`` holds an int (a declared positive integer) or a Fraction
    when the caller supplied an exact value; ``kappa`` is always p-adic.
    """

    ctx: PadicContext
    kappa: PadicNum
    z: PadicNum
    rhs: int = 0
    kappa_exact: Optional[Union[int, Fraction]] = None
    z_exact: Optional[Fraction] = None

    @classmethod
    def make(cls, ctx: PadicContext, kappa, z=0, rhs: int = 0) -> "EquationParams":
        if rhs not in (0, -1):
            raise DomainError("rhs must be 0 or -1")
        exact = kappa if isinstance(kappa, (int, Fraction)) and not isinstance(kappa, bool) else None
        k = ctx.coerce(kappa)
        if not k.is_unit():
            raise DomainError("kappa must be a p-adic unit")
        zz = ctx.coerce(z)
        if not zz.is_zero() and zz.val < 1:
            raise DomainError("z must be divisible by p")
        z_exact = Fraction(z) if isinstance(z, (int, Fraction)) and not isinstance(z, bool) else None
        return cls(ctx, k, zz, rhs, exact, z_exact)

    def lifted(self, ctx: PadicContext):
        """(kappa, z) in a context with more digits; exact inputs stay exact."""
        k = ctx.coerce(self.kappa_exact if self.kappa_exact is not None else self.kappa)
        z = ctx.coerce(self.z_exact if self.z_exact is not None else self.z)
        return k, z

    @property
    def declared_integer(self) -> bool:
        return isinstance(self.kappa_exact, int) and self.kappa_exact >= 1


@dataclass
class ResidualReport:
    residual: QSeries
    min_coeff_valuation: int
    tolerance: int
    passed: bool

    @classmethod
    def of(cls, residual: QSeries, tolerance: int) -> "ResidualReport":
        v = residual.valuation()
        return cls(residual, v, tolerance, v >= tolerance)


def apply_operator(u: QSeries, eq: EquationParams) -> QSeries:
    """Psi_q(u) + kappa Psi_p(u) + kappa z phi(Psi_p(u))."""
    pp = psi_p(u)
    out = psi_q(u).truncate(pp.M) + pp.scale(eq.kappa)
    if not eq.z.is_zero():
        out = out + phi_star(pp).scale(eq.kappa * eq.z)
    return out


def residual(u: QSeries, eq: EquationParams, tolerance: Optional[int] = None) -> ResidualReport:
    """The operator applied to u minus rhs, judged at ``tolerance`` (default N - 3)."""
    tol = eq.ctx.N - 3 if tolerance is None else tolerance
    return ResidualReport.of(apply_operator(u, eq) - eq.rhs, tol)


def solve_beta(eq: EquationParams, zeta: Optional[PadicNum] = None) -> PadicNum:
    """beta in 1 + pR with Psi_p(beta) + z phi(Psi_p(beta)) = -1/kappa.

    y solves y + z phi(y) = -1/kappa and b = log(beta) solves phi(b) - p b = p y,
    both by contraction.
    """
    ctx = eq.ctx
    big = ctx.raised(3)
    p, f = ctx.p, ctx.f
    kappa, z = eq.lifted(big)
    target = -(big.one() / kappa)
    y = target
    for _ in range(big.N + 2):
        y = target - z * frobenius(y)
    if f == 1:
        b = y * Fraction(p, 1 - p)
    else:
        b = y * p
        for _ in range(big.N + 2):
            b = frobenius(b + y, f - 1) * p
    beta = ctx.coerce(pexp(b))
    if zeta is not None:
        beta = beta * zeta
    return beta


def beta_equation_residual(beta: PadicNum, eq: EquationParams) -> PadicNum:
    y = psi_p_const(beta)
    return y + eq.z * frobenius(y) + eq.ctx.one() / eq.kappa


# -- (u, v) <-> (a, b) --


def encode_iota(u: QSeries, v: QSeries) -> ModularPoint:
    """(v^4 a4_inf(uq), v^6 a6_inf(uq))."""
    if not (u.is_unit() and v.is_unit()):
        raise DomainError("u and v must be unit power series")
    M = min(u.M, v.M)
    a, b = tate_at(u.ctx, u.truncate(M).shift(1), M)
    v2 = v * v
    v4 = v2 * v2
    return ModularPoint((a * v4).truncate(M), (b * v4 * v2).truncate(M))


@dataclass
class Decoded:
    u: QSeries
    v2: QSeries
    v_exists: bool
    v: Optional[QSeries] = None


def decode_iota(pt: ModularPoint) -> Decoded:
    """Recover (u, v^2) from a bad-type point; u is known one order less than the point."""
    if not pt.is_bad_type():
        raise DomainError("point is not of bad type")
    ctx = pt.ctx
    x = inverse_j(pt).declare_order(1)
    sigma = sigma_inverse_j(ctx, x.M)
    uq = compose(sigma, x)
    u = uq.declare_order(1).shift(-1)
    a4, a6 = tate_at(ctx, uq, uq.M)
    # v^4 = a / a4(uq) and v^6 = b / a6(uq), so v^2 = v^6 / v^4
    v4 = pt.a.truncate(u.M) / a4.truncate(u.M)
    v6 = pt.b.truncate(u.M) / a6.truncate(u.M)
    v2 = v6 / v4
    v = series_sqrt(v2)
    return Decoded(u, v2, v is not None, v)


# -- covariance --


def covariance_report(u: QSeries, l: int) -> dict:
    """Weight -2 covariance of Psi_q and Psi_p under q -> q^l on the argument:
    Psi(u^l) = l Psi(u).  Also reports the coefficient substitution identities
    Psi_q(u(q^l)) = l Psi_q(u)(q^l) and Psi_p(u(q^l)) = Psi_p(u)(q^l)."""
    ul = u**l
    out = {}
    for name, fn in (("psi_q", psi_q), ("psi_p", psi_p)):
        lhs = fn(ul)
        rhs = fn(u) * l
        out[name] = lhs.agrees(rhs, u.ctx.N - 1, upto=min(lhs.M, rhs.M))
    sub = phi_l(u, l)
    out["psi_q_subst"] = psi_q(sub).agrees(phi_l(psi_q(u), l) * l, u.ctx.N - 1)
    out["psi_p_subst"] = psi_p(sub).agrees(phi_l(psi_p(u), l), u.ctx.N - 1)
    return out


# -- term-by-term solver --


@dataclass
class PivotRow:
    n: int
    pivot_valuation: Optional[int]  # None for an exactly zero pivot
    status: str  # determined, free, obstructed


@dataclass
class SolveCensus:
    rows: List[PivotRow]
    w: QSeries
    u: Optional[QSeries] = None
    notes: List[str] = field(default_factory=list)

    @property
    def free(self) -> List[int]:
        return [r.n for r in self.rows if r.status == "free"]

    @property
    def obstructed(self) -> List[int]:
        return [r.n for r in self.rows if r.status == "obstructed"]

    @property
    def parameter_count(self) -> int:
        return len(self.free)


def constant_constraint(eq: EquationParams, c0: PadicNum) -> PadicNum:
    """kappa Psi_p(c0) + kappa z phi(Psi_p(c0)) - rhs."""
    y = psi_p_const(c0)
    return eq.kappa * y + eq.kappa * eq.z * frobenius(y) - eq.rhs


def term_solver(eq: EquationParams, c0, M: int, alpha=1, build_u: bool = True) -> SolveCensus:
    """Solve for u = c0 exp(w), w in qK[[q]], one coefficient at a time.

    With w = log(u / c0) the equation is linear:
        (n - kappa) w_n + (kappa/p - kappa z) phi(w_{n/p}) + (kappa z / p) phi^2(w_{n/p^2}) = 0.
    At a vanishing pivot with vanishing right side w_n is a free parameter,
    set to alpha / kappa.
    """
    ctx = eq.ctx
    p = ctx.p
    c0 = ctx.coerce(c0)
    check = constant_constraint(eq, c0)
    notes = []
    if check.val < ctx.N - 2:
        raise DomainError("c0 does not satisfy the constant-term equation")
    big = ctx.raised(working_extra(p, M))
    exact_kappa = eq.kappa_exact
    kappa, z = eq.lifted(big)
    c1 = kappa / p - kappa * z
    c2 = kappa * z / p
    w = [big.zero() for _ in range(M + 1)]
    rows = []
    for n in range(1, M + 1):
        rhs = big.zero()
        if n % p == 0:
            rhs = rhs - c1 * frobenius(w[n // p])
            if n % (p * p) == 0:
                rhs = rhs - c2 * frobenius(w[n // (p * p)], 2)
        if exact_kappa is not None:
            pivot_exact = n - Fraction(exact_kappa)
            pivot = None if pivot_exact == 0 else big.coerce(pivot_exact)
        else:
            pivot = big.coerce(n) - kappa
            if pivot.is_zero():
                pivot = None
        if pivot is None:
            if rhs.is_zero():
                w[n] = big.coerce(alpha) / kappa
                rows.append(PivotRow(n, None, "free"))
            else:
                rows.append(PivotRow(n, None, "obstructed"))
            continue
        status = "determined"
        if pivot.val > 0 and not rhs.is_zero() and rhs.val < pivot.val:
            status = "obstructed"
        w[n] = rhs / pivot
        rows.append(PivotRow(n, pivot.val, status))
    wser = QSeries(big, 0, w)
    u = None
    if build_u:
        u = series_exp(wser).scale(big.coerce(c0)).to_context(ctx)
    return SolveCensus(rows, wser.to_context(ctx), u, notes)
