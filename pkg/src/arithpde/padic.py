"""Fixed-precision p-adic numbers in Z_p and its unramified extensions.

Elements of the degree-f unramified extension are stored in the basis
1, w, ..., w^(f-1) of Z_p[w]/(m(w)), where m is a monic integer lift of an
irreducible polynomial over F_p.  Every element carries its exact
valuation, a unit part, and an absolute precision; the relative precision
is capped at the context's N.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Union


class PrecisionError(ArithmeticError):
    """Raised when an operation would leave no known p-adic digits."""


class DomainError(ValueError):
    """Raised when an argument lies outside an operation's domain."""


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    i = 3
    while i * i <= n:
        if n % i == 0:
            return False
        i += 2
    return True


def vp_int(n: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    if n == 0:
        raise ValueError("valuation of 0")
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def vp(x: Union[int, Fraction], p: int) -> float:
    """p-adic valuation of a rational; math.inf for zero."""
    x = Fraction(x)
    if x == 0:
        return math.inf
    return vp_int(x.numerator, p) - vp_int(x.denominator, p)


def _vec_val(d, p):
    """Smallest valuation among the nonzero components, or None."""
    best = None
    for x in d:
        if x:
            v = 0
            while x % p == 0:
                x //= p
                v += 1
            if best is None or v < best:
                best = v
                if v == 0:
                    return 0
    return best


def _find_modulus(p: int, f: int) -> tuple:
    # lexicographically first monic irreducible of degree f over F_p
    from itertools import product

    from sympy import Poly, symbols

    x = symbols("x")
    for tail in product(range(p), repeat=f):
        if tail[-1] == 0:
            continue
        coeffs = [1] + list(reversed(tail))  # highest degree first
        if Poly(coeffs, x, modulus=p).is_irreducible:
            return tuple(tail)  # m = x^f + sum tail[i] x^i
    raise RuntimeError("no irreducible polynomial found")  # pragma: no cover


@dataclass(frozen=True)
class PadicContext:
    """Prime p >= 5, relative precision cap N, and extension degree f."""

    p: int
    N: int
    f: int = 1
    modulus: tuple = field(default=None, compare=False, repr=False)

    def __post_init__(self):
        if not isinstance(self.p, int) or not is_prime(self.p) or self.p < 5:
            raise DomainError(f"p must be a prime >= 5, got {self.p!r}")
        if not isinstance(self.N, int) or self.N < 1:
            raise DomainError(f"N must be a positive integer, got {self.N!r}")
        if not isinstance(self.f, int) or self.f < 1:
            raise DomainError(f"f must be a positive integer, got {self.f!r}")
        if self.modulus is None:
            m = (0,) if self.f == 1 else _find_modulus(self.p, self.f)
            object.__setattr__(self, "modulus", m)

    def raised(self, extra: int) -> "PadicContext":
        """Same ring, relative precision cap N + extra."""
        return PadicContext(self.p, self.N + extra, self.f, self.modulus)

    @cached_property
    def _zero(self):
        return (0,) * self.f

    @cached_property
    def _one(self):
        return (1,) + (0,) * (self.f - 1)

    # -- ring arithmetic on component tuples (no reduction mod p^k) --

    def _reduce_poly(self, c):
        """Reduce a coefficient list of length up to 2f-1 modulo m."""
        f = self.f
        c = list(c)
        m = self.modulus
        for k in range(len(c) - 1, f - 1, -1):
            t = c[k]
            if t:
                base = k - f
                for i in range(f):
                    if m[i]:
                        c[base + i] -= t * m[i]
            c[k] = 0
        return tuple(c[:f]) + (0,) * (f - len(c[:f]))

    def _rmul(self, a, b):
        if self.f == 1:
            return (a[0] * b[0],)
        f = self.f
        out = [0] * (2 * f - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    if y:
                        out[i + j] += x * y
        return self._reduce_poly(out)

    def _rmod(self, a, mod):
        return tuple(x % mod for x in a)

    def _rinv(self, a, k):
        """Inverse of a unit modulo p^k."""
        p = self.p
        mod = p**k
        if self.f == 1:
            return (pow(a[0], -1, mod),)
        # inverse mod p by Fermat in F_{p^f}, then Newton lift
        b = self._rpow_mod(self._rmod(a, p), p**self.f - 2, p)
        prec = 1
        while prec < k:
            prec = min(2 * prec, k)
            m2 = p**prec
            ab = self._rmod(self._rmul(a, b), m2)
            two_minus = tuple((2 if i == 0 else 0) - x for i, x in enumerate(ab))
            b = self._rmod(self._rmul(b, two_minus), m2)
        return self._rmod(b, mod)

    def _rpow_mod(self, a, e, mod):
        result = self._rmod(self._one, mod)
        base = self._rmod(a, mod)
        while e:
            if e & 1:
                result = self._rmod(self._rmul(result, base), mod)
            base = self._rmod(self._rmul(base, base), mod)
            e >>= 1
        return result

    # -- Frobenius --

    @cached_property
    def _frob_powers(self):
        """phi(w)^i for i < f, known modulo p^(N+2)."""
        if self.f == 1:
            return ((1,),)
        K = self.N + 2
        mod = self.p**K
        f = self.f
        p = self.p
        w = tuple(1 if i == 1 else 0 for i in range(f))
        r = self._rpow_mod(w, p, mod)

        def m_at(x):
            acc = self._one
            for c in reversed(self.modulus):
                acc = tuple(t + (c if i == 0 else 0) for i, t in enumerate(self._rmul(acc, x)))
            return self._rmod(acc, mod)

        def dm_at(x):
            # derivative of x^f + sum m_i x^i
            acc = tuple(f * t for t in self._one)
            for i in range(f - 1, 0, -1):
                acc = tuple(
                    t + (i * self.modulus[i] if j == 0 else 0)
                    for j, t in enumerate(self._rmul(acc, x))
                )
            return self._rmod(acc, mod)

        for _ in range(2 * K + 4):
            num = m_at(r)
            if not any(num):
                break
            r = self._rmod(
                tuple(a - b for a, b in zip(r, self._rmul(num, self._rinv(dm_at(r), K)))), mod
            )
        powers = [self._one]
        for _ in range(1, f):
            powers.append(self._rmod(self._rmul(powers[-1], r), mod))
        return tuple(powers)

    def _rfrob(self, a, mod):
        if self.f == 1:
            return a
        out = [0] * self.f
        for x, pw in zip(a, self._frob_powers):
            if x:
                for i, y in enumerate(pw):
                    out[i] += x * y
        return self._rmod(out, mod)

    # -- constructors --

    def __call__(self, x) -> "PadicNum":
        return self.coerce(x)

    def coerce(self, x) -> "PadicNum":
        """Convert an int, Fraction, component tuple or PadicNum into this context."""
        if isinstance(x, PadicNum):
            if x.ctx == self:
                return x
            if x.ctx.p != self.p or x.ctx.f != self.f:
                raise DomainError("incompatible p-adic contexts")
            return _make(self, x.val, x.unit, x.prec)
        if isinstance(x, bool):
            raise TypeError("bool is not a p-adic number")
        if isinstance(x, int):
            return self._from_fraction(Fraction(x))
        if isinstance(x, Fraction):
            return self._from_fraction(x)
        if isinstance(x, (tuple, list)):
            if len(x) != self.f:
                raise DomainError(f"expected {self.f} components")
            fr = [Fraction(c) for c in x]
            den = math.lcm(*(c.denominator for c in fr))
            nums = tuple(int(c * den) for c in fr)
            if not any(nums):
                return self.zero()
            v = _vec_val(nums, self.p)
            vd = vp_int(den, self.p)
            dunit = den // self.p**vd
            val = v - vd
            N = self.N
            mod = self.p**N
            inv = pow(dunit, -1, mod)
            unit = tuple((c // self.p**v) * inv % mod for c in nums)
            return PadicNum(self, val, unit, val + N)
        raise TypeError(f"cannot coerce {type(x).__name__} into a p-adic context")

    def _from_fraction(self, x: Fraction) -> "PadicNum":
        if x == 0:
            return self.zero()
        p = self.p
        a, b = x.numerator, x.denominator
        va, vb = vp_int(a, p), vp_int(b, p)
        val = va - vb
        mod = p**self.N
        u = (a // p**va) * pow(b // p**vb, -1, mod) % mod
        return PadicNum(self, val, (u,) + (0,) * (self.f - 1), val + self.N)

    def zero(self, prec: int = None) -> "PadicNum":
        """Zero known modulo p^prec (default p^N)."""
        prec = self.N if prec is None else prec
        return PadicNum(self, prec, self._zero, prec)

    def one(self) -> "PadicNum":
        return PadicNum(self, 0, self._one, self.N)

    def gen(self) -> "PadicNum":
        """The generator w of the extension (for f = 1 this is 0)."""
        if self.f == 1:
            return self.zero()
        return self.coerce(tuple(1 if i == 1 else 0 for i in range(self.f)))


def _make(ctx: PadicContext, shift: int, digits, prec: int) -> "PadicNum":
    """Normalize the value p^shift * digits, known modulo p^prec."""
    p = ctx.p
    k = prec - shift
    if k <= 0:
        return PadicNum(ctx, prec, ctx._zero, prec)
    mod = p**k
    d = tuple(x % mod for x in digits)
    v = _vec_val(d, p)
    if v is None:
        return PadicNum(ctx, prec, ctx._zero, prec)
    val = shift + v
    rel = min(prec - val, ctx.N)
    if v:
        pv = p**v
        d = tuple(x // pv for x in d)
    if rel < k - v:
        mod = p**rel
        d = tuple(x % mod for x in d)
    return PadicNum(ctx, val, d, val + rel)


class PadicNum:
    """An element p^val * unit of Z_p[w]/(m), known modulo p^prec.

    A value that is zero to its precision has val == prec and a zero unit.
    """

    __slots__ = ("ctx", "val", "unit", "prec")

    def __init__(self, ctx: PadicContext, val: int, unit: tuple, prec: int):
        self.ctx = ctx
        self.val = val
        self.unit = unit
        self.prec = prec

    # -- inspection --

    def is_zero(self) -> bool:
        return not any(self.unit)

    @property
    def valuation(self) -> int:
        return self.val

    @property
    def rel_prec(self) -> int:
        return self.prec - self.val

    def is_unit(self) -> bool:
        return not self.is_zero() and self.val == 0

    def residue(self):
        """Canonical residue of an integral element modulo p^prec.

        Returns an int for f = 1 and a tuple of ints otherwise.
        """
        if self.val < 0:
            raise DomainError("element is not integral")
        p = self.ctx.p
        mod = p**self.prec
        r = tuple(x * p**self.val % mod for x in self.unit)
        return r[0] if self.ctx.f == 1 else r

    def to_fraction(self):
        """The canonical rational representative (f = 1) or tuple of them."""
        p = self.ctx.p
        scale = Fraction(p) ** self.val
        r = tuple(x * scale for x in self.unit)
        return r[0] if self.ctx.f == 1 else r

    def __int__(self):
        r = self.residue()
        if isinstance(r, tuple):
            raise TypeError("not an element of Z_p")
        return r

    def __repr__(self):
        p = self.ctx.p
        if self.is_zero():
            return f"O({p}^{self.prec})"
        u = self.unit[0] if self.ctx.f == 1 else self.unit
        return f"{p}^{self.val}*{u} + O({p}^{self.prec})"

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ctx.coerce(other)
        if not isinstance(other, PadicNum):
            return NotImplemented
        return (
            self.ctx.p == other.ctx.p
            and self.ctx.f == other.ctx.f
            and self.val == other.val
            and self.unit == other.unit
            and self.prec == other.prec
        )

    def __hash__(self):
        return hash((self.ctx.p, self.ctx.f, self.val, self.unit, self.prec))

    def agrees(self, other, prec: int) -> bool:
        """True when both are known to p^prec and agree modulo p^prec."""
        other = self.ctx.coerce(other)
        d = self - other
        return d.prec >= prec and (d.is_zero() or d.val >= prec)

    # -- arithmetic --

    def _other(self, other):
        if isinstance(other, PadicNum):
            if other.ctx is not self.ctx and other.ctx != self.ctx:
                if other.ctx.p != self.ctx.p or other.ctx.f != self.ctx.f:
                    raise DomainError("incompatible p-adic contexts")
                other = self.ctx.coerce(other)
            return other
        return self.ctx.coerce(other)

    def __add__(self, other):
        try:
            other = self._other(other)
        except TypeError:
            return NotImplemented
        prec = min(self.prec, other.prec)
        a, b = self, other
        if a.val > b.val:
            a, b = b, a
        s = a.val
        if s >= prec:
            return self.ctx.zero(prec)
        p = self.ctx.p
        sh = p ** (b.val - s) if b.val < prec else 0
        digits = tuple(x + y * sh for x, y in zip(a.unit, b.unit))
        return _make(self.ctx, s, digits, prec)

    __radd__ = __add__

    def __neg__(self):
        return _make(self.ctx, self.val, tuple(-x for x in self.unit), self.prec)

    def __sub__(self, other):
        try:
            other = self._other(other)
        except TypeError:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return self._other(other) - self

    def __mul__(self, other):
        try:
            other = self._other(other)
        except TypeError:
            return NotImplemented
        prec = min(self.prec + other.val, other.prec + self.val)
        if self.is_zero() or other.is_zero():
            return self.ctx.zero(prec)
        return _make(self.ctx, self.val + other.val, self.ctx._rmul(self.unit, other.unit), prec)

    __rmul__ = __mul__

    def __truediv__(self, other):
        try:
            other = self._other(other)
        except TypeError:
            return NotImplemented
        if other.is_zero():
            raise ZeroDivisionError("division by a p-adic zero")
        rel_b = other.rel_prec
        if self.is_zero():
            return self.ctx.zero(self.prec - other.val)
        rel = min(self.rel_prec, rel_b)
        if rel <= 0:
            raise PrecisionError("no relative precision left")
        ctx = self.ctx
        inv = ctx._rinv(other.unit, rel)
        val = self.val - other.val
        return _make(ctx, val, ctx._rmul(self.unit, inv), val + rel)

    def __rtruediv__(self, other):
        return self._other(other) / self

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return self.ctx.one() / (self ** (-e))
        result = self.ctx.one()
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def divide_by_p(self, k: int = 1) -> "PadicNum":
        """Exact division by p^k; absolute precision drops by k."""
        return PadicNum(self.ctx, self.val - k, self.unit, self.prec - k)

    # -- Frobenius and the Fermat-quotient operator --

    def frobenius(self, times: int = 1) -> "PadicNum":
        return frobenius(self, times)

    def delta_p(self) -> "PadicNum":
        return delta_p(self)


Scalar = Union[int, Fraction, tuple, PadicNum]


def frobenius(x: PadicNum, times: int = 1) -> PadicNum:
    """The Frobenius lift phi applied `times` times (negative allowed)."""
    ctx = x.ctx
    if ctx.f == 1 or x.is_zero():
        return x
    times %= ctx.f
    y = x
    for _ in range(times):
        mod = ctx.p ** (y.prec - y.val)
        y = _make(ctx, y.val, ctx._rfrob(y.unit, mod), y.prec)
    return y


def delta_p(x: PadicNum) -> PadicNum:
    """Fermat quotient (phi(x) - x^p) / p."""
    num = frobenius(x) - x ** x.ctx.p
    if not num.is_zero() and num.val < 1:
        raise DomainError("phi(x) - x^p is not divisible by p")
    return num.divide_by_p()


def c_p(x: PadicNum, y: PadicNum) -> PadicNum:
    """The integral polynomial (X^p + Y^p - (X+Y)^p) / p."""
    p = x.ctx.p
    return (x**p + y**p - (x + y) ** p).divide_by_p()


def teichmuller(c, ctx: PadicContext) -> PadicNum:
    """The root of unity congruent to the nonzero residue c."""
    x = ctx.coerce(c)
    if x.is_zero() or x.val != 0:
        raise DomainError("Teichmuller lift needs a nonzero residue mod p")
    q = ctx.p**ctx.f
    x = PadicNum(ctx, 0, tuple(u % ctx.p for u in x.unit), ctx.N)
    x = _make(ctx, 0, x.unit, ctx.N)
    for _ in range(ctx.N + 1):
        y = x**q
        if y == x:
            return x
        x = y
    return x  # pragma: no cover


def _sum_bound(k: int, v: int, p: int, kind: str) -> float:
    # lower bound for the valuation of the k-th series term
    if kind == "exp":
        return k * v - (k - 1) / (p - 1)
    return k * v - math.log(k, p)


def pexp(x: PadicNum) -> PadicNum:
    """p-adic exponential on p * (ring of integers)."""
    ctx = x.ctx
    if x.is_zero():
        return ctx.one() if x.prec >= ctx.N else _make(ctx, 0, ctx._one, x.prec)
    if x.val < 1:
        raise DomainError("pexp needs valuation >= 1")
    target = min(x.prec, ctx.N)
    total = ctx.one()
    term = ctx.one()
    k = 0
    while True:
        k += 1
        if _sum_bound(k, x.val, ctx.p, "exp") >= target:
            break
        term = term * x / k
        total = total + term
    if total.prec > target:
        total = _make(ctx, total.val, total.unit, target)
    return total


def plog(u: PadicNum) -> PadicNum:
    """p-adic logarithm on principal units 1 + p * (ring of integers)."""
    ctx = u.ctx
    x = u - 1
    if x.is_zero():
        return ctx.zero(x.prec)
    if x.val < 1:
        raise DomainError("plog needs an argument congruent to 1 mod p")
    target = x.prec
    total = ctx.zero(target)
    power = ctx.one()
    k = 0
    while True:
        k += 1
        if _sum_bound(k, x.val, ctx.p, "log") >= target:
            break
        power = power * x
        term = power / k
        total = total + term if k % 2 else total - term
    return total


@dataclass(frozen=True)
class Weight:
    """An element sum a_i phi^i of the weight ring Z[phi]."""

    coeffs: tuple = ()

    def __post_init__(self):
        c = tuple(int(a) for a in self.coeffs)
        while c and c[-1] == 0:
            c = c[:-1]
        object.__setattr__(self, "coeffs", c)

    @property
    def ord(self) -> int:
        return len(self.coeffs) - 1

    @property
    def deg(self) -> int:
        return sum(self.coeffs)

    def __add__(self, other: "Weight") -> "Weight":
        n = max(len(self.coeffs), len(other.coeffs))
        a = self.coeffs + (0,) * (n - len(self.coeffs))
        b = other.coeffs + (0,) * (n - len(other.coeffs))
        return Weight(tuple(x + y for x, y in zip(a, b)))

    def __neg__(self):
        return Weight(tuple(-a for a in self.coeffs))

    def __sub__(self, other):
        return self + (-other)


def weight_apply(lam: PadicNum, w: Weight) -> PadicNum:
    """lam^w = prod phi^i(lam)^(a_i)."""
    ctx = lam.ctx
    if any(a < 0 for a in w.coeffs) and not lam.is_unit():
        raise DomainError("negative weight exponents need a unit")
    result = ctx.one()
    for i, a in enumerate(w.coeffs):
        if a:
            result = result * frobenius(lam, i) ** a
    return result
