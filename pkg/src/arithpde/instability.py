"""Witnesses that nearby solution families disagree modulo p.

Two multiplicative solutions eta u^z_{kappa, alpha} and eta0 u^z0_{kappa, alpha0}
are compared coefficientwise; the first exponent where they differ mod p is
the witness.  Only a positive answer is conclusive at a finite truncation.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Tuple

from .padic import DomainError, PadicContext, vp
from .qseries import QSeries
from .solutions import b_eval, check_kappa, u_mult


def bn_diff_valuation(n: int, z, z0, p: int) -> int:
    """v_p(b_n(pz, p) - b_n(pz0, p)) over exact rationals."""
    z, z0 = Fraction(z), Fraction(z0)
    if z == z0:
        raise DomainError("z and z0 must differ")
    if n < 1:
        raise DomainError("n must be >= 1")
    d = b_eval(n, p * z, p) - b_eval(n, p * z0, p)
    if d == 0:
        raise ArithmeticError(f"b_{n} takes equal values at z = {z} and z0 = {z0}")
    return int(vp(d, p))


def valuation_table(z, z0, p: int, n_max: int = 10) -> List[Tuple[int, int]]:
    return [(n, bn_diff_valuation(n, z, z0, p)) for n in range(1, n_max + 1)]


def candidate_formulas(z, z0, p: int) -> dict:
    """The two candidate closed forms for the valuation of b_n differences."""
    z, z0 = Fraction(z), Fraction(z0)
    out = {"v(z-z0)+1": int(vp(z - z0, p)) + 1}
    out["v(z)+1"] = int(vp(z, p)) + 1 if z != 0 else None
    return out


def modp_congruent(F: QSeries, G: QSeries, M: Optional[int] = None) -> Optional[int]:
    """Smallest exponent <= M where F and G differ mod p, or None."""
    if F.lowest < 0 or G.lowest < 0:
        raise DomainError("power series expected")
    top = min(F.M, G.M) if M is None else min(M, F.M, G.M)
    for n in range(0, top + 1):
        d = F[n] - G[n]
        if d.prec < 1:
            raise DomainError(f"coefficient of q^{n} is not known mod p")
        if not d.is_zero() and d.val < 1:
            return n
    return None


@dataclass
class InstabilityWitness:
    scenario: str  # z-perturbed or alpha-perturbed
    first_bad_exponent: Optional[int]
    M: int
    valuation_table: List[Tuple[int, int]] = field(default_factory=list)
    formulas: dict = field(default_factory=dict)

    @property
    def status(self) -> str:
        if self.first_bad_exponent is not None:
            return "witness"
        return "inconclusive at truncation"


def instability_witness(
    ctx: PadicContext,
    kappa: int,
    alpha,
    alpha0,
    z,
    z0,
    eta=1,
    eta0=1,
    M: int = 30,
    n_table: int = 10,
) -> InstabilityWitness:
    """Compare eta u^z_{kappa, alpha} with eta0 u^z0_{kappa, alpha0} mod p up to q^M."""
    check_kappa(kappa, ctx.p)
    same_alpha = ctx.coerce(alpha) == ctx.coerce(alpha0)
    same_z = Fraction(z) == Fraction(z0)
    if same_alpha and not same_z:
        scenario = "z-perturbed"
    elif same_z and not same_alpha:
        scenario = "alpha-perturbed"
    elif same_z and same_alpha:
        scenario = "identical"
    else:
        raise DomainError("exactly one of alpha and z may change")
    F = u_mult(ctx, z, kappa, alpha, M).scale(eta)
    G = u_mult(ctx, z0, kappa, alpha0, M).scale(eta0)
    first = modp_congruent(F, G, M)
    table, formulas = [], {}
    if scenario == "z-perturbed":
        table = valuation_table(z, z0, ctx.p, n_table)
        formulas = candidate_formulas(z, z0, ctx.p)
    return InstabilityWitness(scenario, first, M, table, formulas)
