"""Level one q-expansions, the Tate curve point, and Weierstrass pairs (a, b).

Integer expansions are computed once over Z and then reduced into a p-adic
context.  Canonical tables of E2, E4, E6, Delta and j up to q^200 ship with
the package; ``ARITHPDE_FIXTURES`` points at an alternative directory.
"""

from __future__ import annotations

import json
import os
from fractions import Fraction
from functools import lru_cache
from pathlib import Path
from typing import List, Optional

from .padic import DomainError, PadicContext
from .qseries import QSeries, compose_many, dq

FIXTURE_ORDER = 200
FIXTURE_NAMES = ("E2", "E4", "E6", "Delta", "j")
FIXTURE_ENV = "ARITHPDE_FIXTURES"

J_SCALE = 110592  # 2^12 * 27, so that j = -J_SCALE a^3 / Delta(a, b)
INV_J_SCALE = 6912  # 2^8 * 3^3


# -- integer series (plain lists, index = exponent) --


def int_mul(a: List[int], b: List[int], L: int) -> List[int]:
    """Product of two power series truncated to L coefficients."""
    out = [0] * L
    for i, x in enumerate(a[:L]):
        if x:
            for j, y in enumerate(b[: L - i]):
                out[i + j] += x * y
    return out


def int_inverse(a: List[int], L: int) -> List:
    """Inverse of a power series with nonzero constant term.

    Entries stay ints when a[0] = +-1; otherwise Fractions appear.
    """
    a0 = a[0]
    if a0 == 0:
        raise DomainError("constant term is zero")
    unit = a0 in (1, -1)
    out = [1 // a0 if unit else Fraction(1, a0)]
    for n in range(1, L):
        s = sum(a[k] * out[n - k] for k in range(1, min(n, len(a) - 1) + 1))
        out.append(-s * a0 if unit else -s / a0)
    return out


def int_dq(a: List) -> List:
    return [n * c for n, c in enumerate(a)]


def sigma_list(m: int, M: int) -> List[int]:
    """[0, sigma_m(1), ..., sigma_m(M)] by a divisor sieve."""
    out = [0] * (M + 1)
    for d in range(1, M + 1):
        dm = d**m
        for n in range(d, M + 1, d):
            out[n] += dm
    return out


def eisenstein_list(k: int, M: int) -> List[int]:
    """Normalized Eisenstein series E2, E4 or E6 to q^M."""
    factor = {2: -24, 4: 240, 6: -504}.get(k)
    if factor is None:
        raise DomainError(f"only weights 2, 4, 6 are available, got {k}")
    s = sigma_list(k - 1, M)
    return [1] + [factor * c for c in s[1:]]


def euler_product_list(M: int) -> List[int]:
    """prod_{n>=1} (1 - q^n) to q^M via the pentagonal number theorem."""
    out = [0] * (M + 1)
    k = 0
    while True:
        hit = False
        for kk in ((k, -k) if k else (0,)):
            e = kk * (3 * kk - 1) // 2
            if e <= M:
                out[e] += -1 if kk % 2 else 1
                hit = True
        if not hit:
            break
        k += 1
    return out


def delta_list(M: int) -> List[int]:
    """q prod (1 - q^n)^24 to q^M (index 0 holds the zero constant term)."""
    base = euler_product_list(M)
    acc = [1] + [0] * M
    e = 24
    while e:
        if e & 1:
            acc = int_mul(acc, base, M + 1)
        e >>= 1
        if e:
            base = int_mul(base, base, M + 1)
    return [0] + acc[:M]


def j_list(M: int) -> List[int]:
    """Coefficients of q^-1, q^0, ..., q^M of j = E4^3 / Delta."""
    L = M + 2
    e4 = eisenstein_list(4, L)
    e4c = int_mul(int_mul(e4, e4, L), e4, L)
    d = delta_list(L + 1)[1:]  # Delta / q
    return int_mul(e4c, int_inverse(d, L), L)


def inv_j_list(M: int) -> List[int]:
    """Coefficients of q^0..q^M of 1/j = Delta / E4^3 (constant term 0)."""
    e4 = eisenstein_list(4, M)
    e4c = int_mul(int_mul(e4, e4, M + 1), e4, M + 1)
    return int_mul(delta_list(M), int_inverse(e4c, M + 1), M + 1)


def int_reverse(g: List[int]) -> List[int]:
    """Compositional inverse of g = q + g_2 q^2 + ... over Z (Lagrange inversion).

    [q^n] s = (1/n) [q^(n-1)] (q / g)^n.
    """
    if len(g) < 2 or g[0] != 0 or g[1] != 1:
        raise DomainError("int_reverse needs g = q + O(q^2)")
    M = len(g) - 1
    h = int_inverse(g[1:], M)  # q / g
    out = [0, 1]
    power = h[:]
    for n in range(2, M + 1):
        power = int_mul(power, h, M)
        c = power[n - 1]
        if c % n:
            raise ArithmeticError("Lagrange coefficient is not integral")
        out.append(c // n)
    return out


# -- fixtures --


def compute_fixture(name: str, M: int = FIXTURE_ORDER) -> dict:
    if name == "j":
        return {"name": "j", "lowest": -1, "M": M, "coeffs": [str(c) for c in j_list(M)]}
    if name == "Delta":
        coeffs = delta_list(M)
    elif name in ("E2", "E4", "E6"):
        coeffs = eisenstein_list(int(name[1]), M)
    else:
        raise DomainError(f"unknown fixture {name!r}")
    return {"name": name, "lowest": 0, "M": M, "coeffs": [str(c) for c in coeffs]}


def fixture_dir() -> Path:
    env = os.environ.get(FIXTURE_ENV)
    if env:
        return Path(env)
    return Path(__file__).resolve().parent / "data"


def fixture_text(data: dict) -> str:
    return json.dumps(data, sort_keys=True, indent=1) + "\n"


def write_fixtures(directory: Optional[Path] = None, M: int = FIXTURE_ORDER) -> List[Path]:
    directory = Path(directory) if directory is not None else fixture_dir()
    directory.mkdir(parents=True, exist_ok=True)
    paths = []
    for name in FIXTURE_NAMES:
        path = directory / f"{name}.json"
        path.write_text(fixture_text(compute_fixture(name, M)))
        paths.append(path)
    return paths


@lru_cache(maxsize=None)
def _load(name: str, directory: str):
    path = Path(directory) / f"{name}.json"
    if not path.exists():
        return None
    data = json.loads(path.read_text())
    return data["lowest"], tuple(int(c) for c in data["coeffs"])


def integer_expansion(name: str, M: int):
    """(lowest, coefficients up to q^M) for E2, E4, E6, Delta or j."""
    hit = _load(name, str(fixture_dir()))
    if hit is not None:
        lowest, cs = hit
        if lowest + len(cs) - 1 >= M:
            return lowest, list(cs[: M - lowest + 1])
    data = compute_fixture(name, max(M, 0))
    return data["lowest"], [int(c) for c in data["coeffs"]]


def expansion(name: str, ctx: PadicContext, M: int) -> QSeries:
    lowest, cs = integer_expansion(name, M)
    return QSeries.from_values(ctx, cs, lowest)


def sigma_series(m: int, ctx: PadicContext, M: int) -> QSeries:
    """s_m = sum sigma_m(n) q^n."""
    if m < 1 or m % 2 == 0:
        raise DomainError("m must be odd and positive")
    return QSeries.from_values(ctx, sigma_list(m, M))


def eisenstein(k: int, ctx: PadicContext, M: int) -> QSeries:
    if k not in (2, 4, 6):
        raise DomainError(f"only weights 2, 4, 6 are available, got {k}")
    return expansion(f"E{k}", ctx, M)


def delta_series(ctx: PadicContext, M: int) -> QSeries:
    return expansion("Delta", ctx, M)


# -- Weierstrass pairs --


class ModularPoint:
    """A pair (a, b) of series standing for y^2 = x^3 + a x + b."""

    __slots__ = ("a", "b")

    def __init__(self, a: QSeries, b: QSeries):
        if a.ctx != b.ctx:
            raise DomainError("a and b live in different contexts")
        self.a = a
        self.b = b

    @property
    def ctx(self):
        return self.a.ctx

    @property
    def M(self) -> int:
        return min(self.a.M, self.b.M)

    def __repr__(self):
        return f"ModularPoint(a={self.a!r}, b={self.b!r})"

    def __eq__(self, other):
        if not isinstance(other, ModularPoint):
            return NotImplemented
        return self.a == other.a and self.b == other.b

    def __hash__(self):
        return hash((self.a, self.b))

    def discriminant_form(self) -> QSeries:
        """4a^3 + 27b^2."""
        a, b = self.a, self.b
        return a * a * a * 4 + b * b * 27

    def delta(self) -> QSeries:
        """Delta(a, b) = -64 a^3 - 432 b^2."""
        return self.discriminant_form() * (-16)

    def scale(self, lam) -> "ModularPoint":
        """The action (a, b) -> (lam^-4 a, lam^-6 b) by a unit constant or unit series."""
        if isinstance(lam, QSeries):
            inv = lam.inverse()
            inv2 = inv * inv
            inv4 = inv2 * inv2
            return ModularPoint(self.a * inv4, self.b * inv4 * inv2)
        lam = self.ctx.coerce(lam)
        if not lam.is_unit():
            raise DomainError("scaling needs a unit")
        inv = self.ctx.one() / lam
        return ModularPoint(self.a.scale(inv**4), self.b.scale(inv**6))

    def is_bad_type(self) -> bool:
        """a, b unit power series and 4a^3 + 27b^2 in q R[[q]]^x."""
        if not (self.a.is_unit() and self.b.is_unit()):
            return False
        d = self.discriminant_form()
        if d.M < 1:
            return False
        return d[0].is_zero() and d[1].is_unit()

    def is_good_type(self) -> bool:
        """a, b unit power series and 4a^3 + 27b^2 a unit of R[[q]]."""
        return self.a.is_unit() and self.b.is_unit() and self.discriminant_form().is_unit()

    def classify(self) -> str:
        if self.is_bad_type():
            return "bad"
        if self.is_good_type():
            return "good"
        return "other"


def tate_point(ctx: PadicContext, M: int) -> ModularPoint:
    """(-E4/48, -E6/864)."""
    a = eisenstein(4, ctx, M).scale(Fraction(-1, 48))
    b = eisenstein(6, ctx, M).scale(Fraction(-1, 864))
    return ModularPoint(a, b)


def j_invariant(pt: ModularPoint) -> QSeries:
    """-110592 a^3 / Delta(a, b)."""
    if not pt.a.is_unit():
        raise DomainError("j needs a unit series a")
    a = pt.a
    return (a * a * a * (-J_SCALE)) / pt.delta()


def inverse_j(pt: ModularPoint) -> QSeries:
    """1/j = (4a^3 + 27b^2) / (2^8 3^3 a^3)."""
    a = pt.a
    return pt.discriminant_form() / (a * a * a * INV_J_SCALE)


def hasse_value(pt: ModularPoint) -> QSeries:
    """E_{p-1} evaluated at (a, b): -48 a for p = 5, -864 b for p = 7."""
    p = pt.ctx.p
    if p == 5:
        return pt.a * (-48)
    if p == 7:
        return pt.b * (-864)
    raise DomainError(f"the ordinarity test is available for p in (5, 7), got {p}")


def is_ordinary(pt: ModularPoint) -> bool:
    """E_{p-1}(a, b) is a unit of the p-adically completed Laurent ring,
    i.e. some coefficient is nonzero mod p."""
    h = hasse_value(pt)
    return any(c.val <= 0 and not c.is_zero() for c in h.coeffs)


def hurlburt_f1q(pt: ModularPoint) -> QSeries:
    """(2a dq(b) - 3b dq(a)) / Delta(a, b)."""
    a, b = pt.a, pt.b
    num = a * dq(b) * 2 - b * dq(a) * 3
    d = pt.delta()
    if d.order() is None:
        raise DomainError("Delta(a, b) vanishes to the known truncation")
    return num / d


@lru_cache(maxsize=32)
def _sigma_reverse_ints(M: int):
    g = inv_j_list(M)
    return tuple(int_reverse(g))


def sigma_inverse_j(ctx: PadicContext, M: int) -> QSeries:
    """sigma with sigma(1/j_inf(q)) = q, as an integral series to q^M."""
    return QSeries.from_values(ctx, _sigma_reverse_ints(M))


def tate_at(ctx: PadicContext, w: QSeries, M: Optional[int] = None):
    """(a4_inf(w), a6_inf(w)) for a series w in q R[[q]]."""
    M = w.M if M is None else M
    pt = tate_point(ctx, M)
    a, b = compose_many([pt.a, pt.b], w)
    return a, b
