"""Truncated Laurent series in q over fixed-precision p-adic coefficients.

A QSeries stores the coefficients of q^lowest, ..., q^M; exponents above M
are unknown.  Each coefficient is a PadicNum with its own absolute
precision, so operations that divide by p lose digits only where they must.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

from .padic import (
    DomainError,
    PadicContext,
    PadicNum,
    PrecisionError,
    _make,
    frobenius,
    is_prime,
    plog,
    pexp,
)

_BIG = 1 << 40


class QSeries:
    """A Laurent series sum_{n=lowest}^{M} c_n q^n + O(q^(M+1))."""

    __slots__ = ("ctx", "lowest", "coeffs")

    def __init__(self, ctx: PadicContext, lowest: int, coeffs: Sequence[PadicNum]):
        self.ctx = ctx
        self.lowest = lowest
        self.coeffs = tuple(coeffs)
        if not self.coeffs:
            raise DomainError("a series needs at least one known coefficient")

    # -- construction --

    @classmethod
    def from_values(cls, ctx, values: Iterable, lowest: int = 0, M: Optional[int] = None):
        """Series with the given coefficients (ints, Fractions, tuples or PadicNums)."""
        cs = [ctx.coerce(v) for v in values]
        if M is not None:
            need = M - lowest + 1
            cs = cs[:need] + [ctx.zero()] * (need - len(cs))
        return cls(ctx, lowest, cs)

    @classmethod
    def constant(cls, ctx, c, M: int):
        return cls.from_values(ctx, [c], 0, M)

    @classmethod
    def one(cls, ctx, M: int):
        return cls.constant(ctx, 1, M)

    @classmethod
    def zero(cls, ctx, M: int, lowest: int = 0):
        return cls.from_values(ctx, [], lowest, M)

    @classmethod
    def monomial(cls, ctx, n: int, M: int, c=1):
        """c * q^n known up to q^M."""
        if n > M:
            return cls.zero(ctx, M, 0 if n > 0 else n)
        return cls.from_values(ctx, [c], n, M)

    @classmethod
    def q(cls, ctx, M: int):
        return cls.monomial(ctx, 1, M)

    # -- inspection --

    @property
    def M(self) -> int:
        return self.lowest + len(self.coeffs) - 1

    @property
    def p(self) -> int:
        return self.ctx.p

    def __len__(self):
        return len(self.coeffs)

    def __getitem__(self, n: int) -> PadicNum:
        if n > self.M:
            raise IndexError(f"coefficient of q^{n} is beyond the truncation q^{self.M}")
        if n < self.lowest:
            return self.ctx.zero(max(self.eff_prec, self.ctx.N))
        return self.coeffs[n - self.lowest]

    def items(self):
        for i, c in enumerate(self.coeffs):
            yield self.lowest + i, c

    @property
    def eff_prec(self) -> int:
        """Smallest absolute precision among the known coefficients."""
        return min(c.prec for c in self.coeffs)

    def valuation(self) -> int:
        """Smallest coefficient valuation (zeros count at their precision)."""
        return min(c.val for c in self.coeffs)

    def order(self) -> Optional[int]:
        """Exponent of the first coefficient that is nonzero to its precision."""
        for n, c in self.items():
            if not c.is_zero():
                return n
        return None

    def is_integral(self) -> bool:
        return all(c.val >= 0 for c in self.coeffs)

    def is_unit(self) -> bool:
        """Power series with a unit constant term."""
        return self.lowest >= 0 and self[0].is_unit()

    def __repr__(self):
        terms = []
        for n, c in self.items():
            if not c.is_zero():
                terms.append(f"({c})*q^{n}")
            if len(terms) >= 6:
                terms.append("...")
                break
        body = " + ".join(terms) if terms else "0"
        return f"QSeries[p={self.p}, M={self.M}]({body})"

    def __eq__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        return (
            self.ctx.p == other.ctx.p
            and self.ctx.f == other.ctx.f
            and self.lowest == other.lowest
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash((self.lowest, self.coeffs))

    def difference_valuation(self, other: "QSeries", upto: Optional[int] = None) -> int:
        """min over shared exponents of v_p(self_n - other_n), zeros at their precision."""
        d = self - other
        if upto is not None:
            d = d.truncate(upto)
        return d.valuation()

    def agrees(self, other: "QSeries", prec: int, upto: Optional[int] = None) -> bool:
        """Coefficients agree modulo p^prec on every shared exponent (<= upto)."""
        d = self - other
        if upto is not None:
            if d.M < upto:
                return False
            d = d.truncate(upto)
        return all(c.prec >= prec and c.val >= prec for c in d.coeffs)

    # -- structural helpers --

    def truncate(self, M: int) -> "QSeries":
        if M >= self.M:
            return self
        if M < self.lowest:
            raise DomainError("truncation below the lowest exponent")
        return QSeries(self.ctx, self.lowest, self.coeffs[: M - self.lowest + 1])

    def extend_lowest(self, lowest: int) -> "QSeries":
        """Same series with explicit zero coefficients down to q^lowest."""
        if lowest >= self.lowest:
            return self
        pad = [self.ctx.zero() for _ in range(self.lowest - lowest)]
        return QSeries(self.ctx, lowest, pad + list(self.coeffs))

    def declare_order(self, k: int) -> "QSeries":
        """Drop the coefficients below q^k, which must be zero to their precision."""
        if k <= self.lowest:
            return self
        for n in range(self.lowest, min(k, self.M + 1)):
            if not self[n].is_zero():
                raise DomainError(f"coefficient of q^{n} is not zero")
        if k > self.M:
            raise DomainError("no coefficients left after declaring the order")
        return QSeries(self.ctx, k, self.coeffs[k - self.lowest :])

    def strip(self) -> "QSeries":
        """Declare the order at the first coefficient that is nonzero to its precision."""
        k = self.order()
        if k is None:
            raise DomainError("series is zero to the known truncation")
        return self.declare_order(k)

    def shift(self, k: int) -> "QSeries":
        """Multiply by q^k."""
        return QSeries(self.ctx, self.lowest + k, self.coeffs)

    def to_context(self, ctx: PadicContext) -> "QSeries":
        return QSeries(ctx, self.lowest, [ctx.coerce(c) for c in self.coeffs])

    def map_coeffs(self, fn) -> "QSeries":
        return QSeries(self.ctx, self.lowest, [fn(c) for c in self.coeffs])

    def constant_term(self) -> PadicNum:
        return self[0]

    # -- ring operations --

    def _coerce_series(self, other):
        if isinstance(other, QSeries):
            if other.ctx != self.ctx:
                other = other.to_context(self.ctx)
            return other
        if isinstance(other, (int, Fraction, PadicNum, tuple)):
            return QSeries.constant(self.ctx, other, max(self.M, 0))
        return None

    def __add__(self, other):
        other = self._coerce_series(other)
        if other is None:
            return NotImplemented
        low = min(self.lowest, other.lowest)
        M = min(self.M, other.M)
        cs = [self[n] + other[n] for n in range(low, M + 1)]
        return QSeries(self.ctx, low, cs)

    __radd__ = __add__

    def __neg__(self):
        return self.map_coeffs(lambda c: -c)

    def __sub__(self, other):
        other = self._coerce_series(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "QSeries":
        c = self.ctx.coerce(c)
        return self.map_coeffs(lambda x: x * c)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, PadicNum, tuple)):
            return self.scale(other)
        other = self._coerce_series(other)
        if other is None:
            return NotImplemented
        return _series_mul(self, other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction, PadicNum, tuple)):
            c = self.ctx.coerce(other)
            return self.map_coeffs(lambda x: x / c)
        other = self._coerce_series(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        return self.inverse() * other

    def __pow__(self, e: int):
        if not isinstance(e, int):
            return NotImplemented
        if e < 0:
            return self.inverse() ** (-e)
        if e == 0:
            return QSeries.one(self.ctx, max(self.M, 0))
        result = None
        base = self
        while e:
            if e & 1:
                result = base if result is None else result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def inverse(self) -> "QSeries":
        """Multiplicative inverse; leading coefficients that are zero to their
        precision are treated as exact zeros."""
        s = self.strip()
        k = s.lowest
        h = s.coeffs
        inv0 = self.ctx.one() / h[0]
        g = [inv0]
        neg = -inv0
        for n in range(1, len(h)):
            acc = dot(self.ctx, [(h[j], g[n - j]) for j in range(1, n + 1)])
            g.append(acc * neg)
        return QSeries(self.ctx, -k, g)

    def extend_to(self, M: int) -> "QSeries":
        """Pad with zeros known to full precision (for iteration seeds)."""
        if M <= self.M:
            return self.truncate(M)
        return QSeries(self.ctx, self.lowest, list(self.coeffs) + [self.ctx.zero()] * (M - self.M))


def _series_mul(A: QSeries, B: QSeries) -> QSeries:
    ctx = A.ctx
    p, f = ctx.p, ctx.f
    low = A.lowest + B.lowest
    M = min(A.M + B.lowest, B.M + A.lowest, max(A.M, B.M))
    L = M - low + 1
    if L <= 0:
        raise DomainError("product has no known coefficients")
    a = A.coeffs[:L]
    b = B.coeffs[:L]

    # precision: min over i+j=n of min(prec a_i + val b_j, val a_i + prec b_j)
    pa = np.fromiter((c.prec for c in a), dtype=np.int64, count=len(a))
    va = np.fromiter((c.val for c in a), dtype=np.int64, count=len(a))
    pb = np.fromiter((c.prec for c in b), dtype=np.int64, count=len(b))
    vb = np.fromiter((c.val for c in b), dtype=np.int64, count=len(b))
    prec = np.minimum(_minplus(pa, vb, L), _minplus(va, pb, L))

    # digits via Kronecker substitution
    sa = min(c.val for c in a)
    sb = min(c.val for c in b)
    da = [_digits(c, sa, p) for c in a]
    db = [_digits(c, sb, p) for c in b]
    top = max(max(c.prec for c in a) - sa, 0) + max(max(c.prec for c in b) - sb, 0)
    bits = top * p.bit_length() + (L * f).bit_length() + 2 * f.bit_length() + 2
    nbytes = (bits + 7) // 8
    width = 2 * f - 1
    prod = _pack(da, width, f, nbytes) * _pack(db, width, f, nbytes)
    raw = prod.to_bytes(nbytes * width * (len(da) + len(db)), "little")

    shift = sa + sb
    out = []
    for n in range(L):
        base = n * width * nbytes
        vec = [
            int.from_bytes(raw[base + i * nbytes : base + (i + 1) * nbytes], "little")
            for i in range(width)
        ]
        digits = ctx._reduce_poly(vec) if f > 1 else (vec[0],)
        out.append(_make(ctx, shift, digits, int(prec[n])))
    return QSeries(ctx, low, out)


def _digits(c: PadicNum, s: int, p: int):
    if c.is_zero():
        return None
    sh = p ** (c.val - s)
    return tuple(x * sh for x in c.unit)


def _pack(ds, width, f, nbytes):
    zero = bytes(nbytes)
    chunks = []
    for d in ds:
        if d is None:
            chunks.append(zero * width)
        else:
            chunks.extend(x.to_bytes(nbytes, "little") for x in d)
            chunks.append(zero * (width - f))
    return int.from_bytes(b"".join(chunks), "little")


def _minplus(x: np.ndarray, y: np.ndarray, L: int) -> np.ndarray:
    """out[n] = min_{i+j=n} x[i] + y[j] for n < L."""
    la, lb = len(x), len(y)
    grid = np.full((la, la + lb - 1), _BIG, dtype=np.int64)
    rows = np.arange(la)[:, None]
    grid[rows, rows + np.arange(lb)[None, :]] = x[:, None] + y[None, :]
    out = grid.min(axis=0)
    return out[:L]


# -- derivative operators --


def dq(F: QSeries) -> QSeries:
    """The derivation q d/dq."""
    return QSeries(F.ctx, F.lowest, [c * n if n else c * 0 for n, c in F.items()])


def derivative(F: QSeries) -> QSeries:
    """Ordinary d/dq."""
    return dq(F).shift(-1)


def phi_star(F: QSeries) -> QSeries:
    """F^(phi)(q^p): Frobenius on coefficients and q -> q^p, truncated at F.M."""
    p = F.p
    M = F.M
    low = F.lowest * p
    if low > M:
        return QSeries.zero(F.ctx, M, 0 if low > 0 else low)
    cs = [F.ctx.zero() for _ in range(M - low + 1)]
    for n, c in F.items():
        k = n * p
        if k > M:
            break
        cs[k - low] = frobenius(c)
    return QSeries(F.ctx, low, cs)


def phi_l(F: QSeries, l: int) -> QSeries:
    """The substitution q -> q^l for a prime l != p, truncated at F.M."""
    if not isinstance(l, int) or not is_prime(l):
        raise DomainError(f"l must be a prime, got {l!r}")
    if l == F.p:
        raise DomainError("l must differ from p")
    M = F.M
    low = F.lowest * l
    if low > M:
        return QSeries.zero(F.ctx, M)
    cs = [F.ctx.zero() for _ in range(M - low + 1)]
    for n, c in F.items():
        k = n * l
        if k > M:
            break
        cs[k - low] = c
    return QSeries(F.ctx, low, cs)


def phi_series(F: QSeries) -> QSeries:
    """phi_p F = F^p + p * dp(F), computed through the Fermat quotient."""
    return F ** F.p + dp(F) * F.p


def dp(F: QSeries) -> QSeries:
    """The p-derivation (F^(phi)(q^p) - F^p) / p; costs one digit of precision."""
    if F.eff_prec < 2:
        raise PrecisionError("dp needs at least two digits of precision")
    p = F.p
    num = phi_star(F) - F**p
    for n, c in num.items():
        if not c.is_zero() and c.val < 1:
            raise DomainError(f"numerator of dp is not divisible by p at q^{n}")
    return num.map_coeffs(lambda c: c.divide_by_p())


def c_p_series(F: QSeries, G: QSeries) -> QSeries:
    """(F^p + G^p - (F+G)^p) / p."""
    p = F.p
    num = F**p + G**p - (F + G) ** p
    return num.map_coeffs(lambda c: c.divide_by_p())


def integrate(F: QSeries) -> QSeries:
    """The operator sum c_n q^n -> sum (c_n / n) q^n on qK[[q]]."""
    if F.lowest < 0:
        F = F.declare_order(0)
    if F.lowest == 0 and not F[0].is_zero():
        raise DomainError("integrate needs a zero constant term")
    cs = []
    for n, c in F.items():
        cs.append(c if n == 0 else c / n)
    return QSeries(F.ctx, F.lowest, cs)


# -- exp / log --


def series_exp(F: QSeries) -> QSeries:
    """exp(F) for F in qK[[q]] (a constant term of valuation >= 1 is allowed).

    Uses the recurrence n E_n = sum_k (k F_k) E_{n-k}, which never forms the
    large-denominator powers F^k / k!.
    """
    ctx = F.ctx
    if F.lowest < 0:
        F = F.declare_order(0)
    c0 = F[0] if F.lowest <= 0 else ctx.zero()
    head = ctx.one()
    if not c0.is_zero():
        head = pexp(c0)
    M = F.M
    D = dq(F).extend_lowest(0)
    d = [D[k] for k in range(M + 1)]
    E = [ctx.one()]
    for n in range(1, M + 1):
        acc = dot(ctx, [(d[k], E[n - k]) for k in range(1, n + 1)])
        E.append(acc / n)
    out = QSeries(ctx, 0, E)
    return out.scale(head) if not c0.is_zero() else out


def series_log(U: QSeries) -> QSeries:
    """log(U) for a unit series whose constant term is 1 mod p."""
    ctx = U.ctx
    if U.lowest < 0:
        U = U.declare_order(0)
    if U.lowest > 0:
        raise DomainError("series_log needs a unit series")
    u0 = U[0]
    if (u0 - 1).val < 1 and not (u0 - 1).is_zero():
        raise DomainError("series_log needs U(0) = 1 mod p")
    M = U.M
    if M == 0:
        return QSeries(ctx, 0, [plog(u0)])
    T = (U / u0).truncate(M)
    T = QSeries(ctx, 1, T.coeffs[1:]) if T.lowest == 0 else T
    vT = T.valuation()
    tail_cap = None
    K = M
    if vT >= 1:
        target = max(c.prec for c in T.coeffs) + 1
        k = 1
        while k < M and k * vT - math.log(k + 1, ctx.p) < target:
            k += 1
        if k < M:
            K = k
            tail_cap = math.floor((K + 1) * vT - math.log(K + 1, ctx.p))
    total = T
    power = T
    for k in range(2, K + 1):
        power = (power * T).truncate(M)
        term = power / k
        total = total + term if k % 2 else total - term
    if tail_cap is not None:
        total = total.map_coeffs(
            lambda c: c if c.prec <= tail_cap else _make(ctx, c.val, c.unit, tail_cap)
        )
    total = total.extend_lowest(0)
    c = plog(u0)
    cs = list(total.coeffs)
    cs[0] = c
    return QSeries(ctx, 0, cs)


# -- composition and reversion --


def dot(ctx: PadicContext, pairs) -> PadicNum:
    """sum x_k y_k, normalized once; precision min over k of
    min(prec x_k + v(y_k), v(x_k) + prec y_k)."""
    p, f = ctx.p, ctx.f
    prec = _BIG
    parts = []
    for x, y in pairs:
        prec = min(prec, x.prec + y.val, x.val + y.prec)
        if x.is_zero() or y.is_zero():
            continue
        parts.append((x.val + y.val, x.unit, y.unit))
    if prec >= _BIG:
        prec = ctx.N
    if not parts:
        return ctx.zero(prec)
    shift = min(v for v, _, _ in parts)
    if f == 1:
        acc = (sum(x[0] * y[0] * p ** (v - shift) for v, x, y in parts),)
    else:
        acc = [0] * f
        for v, x, y in parts:
            sc = p ** (v - shift)
            acc = [a + b * sc for a, b in zip(acc, ctx._rmul(x, y))]
    return _make(ctx, shift, acc, prec)


def lincomb(ctx: PadicContext, terms, M: int) -> QSeries:
    """sum_k s_k S_k for scalars s_k and series S_k, truncated at q^M."""
    low = min((S.lowest for _, S in terms), default=0)
    out = []
    for n in range(low, M + 1):
        out.append(dot(ctx, [(s, S.coeffs[n - S.lowest]) for s, S in terms if n >= S.lowest]))
    return QSeries(ctx, low, out)


def compose_many(Fs, G: QSeries):
    """[F(G) for F in Fs] for power series F and G in qK[[q]], sharing the
    powers of G (Paterson-Stockmeyer evaluation)."""
    ctx = G.ctx
    if G.ctx != Fs[0].ctx:
        G = G.to_context(Fs[0].ctx)
        ctx = G.ctx
    if G.lowest < 1:
        k = G.order()
        if k is None:
            return [QSeries.constant(ctx, F[0], G.M) for F in Fs]
        if k < 1:
            raise DomainError("compose needs G in qK[[q]]")
        G = G.declare_order(k)
    g = G.lowest
    for F in Fs:
        if F.lowest < 0:
            raise DomainError("compose_many needs power series")
    M = min([G.M] + [(F.M + 1) * g - 1 for F in Fs])
    K = min(max(F.M for F in Fs), M // g)
    G = G.truncate(M)
    one = QSeries.one(ctx, M)
    if K == 0:
        return [QSeries.constant(ctx, F[0], M) for F in Fs]
    b = max(1, math.isqrt(K))
    baby = [one, G]
    for _ in range(2, b + 1):
        baby.append((baby[-1] * G).truncate(M))
    giant = baby[b]
    results = []
    for F in Fs:
        blocks = []
        for j in range(0, K + 1, b):
            pairs = [(F[j + i], baby[i]) for i in range(b) if j + i <= min(K, F.M) and j + i >= F.lowest]
            blocks.append(lincomb(ctx, pairs, M) if pairs else QSeries.zero(ctx, M))
        acc = blocks[-1]
        for B in reversed(blocks[:-1]):
            acc = (acc * giant).truncate(M) + B
        results.append(acc.truncate(M))
    return results


def compose(F: QSeries, G: QSeries) -> QSeries:
    """F(G) for G with lowest exponent >= 1 (or G zero to its truncation)."""
    if F.lowest >= 0:
        return compose_many([F], G)[0]
    ctx = F.ctx
    if G.ctx != ctx:
        G = G.to_context(ctx)
    if G.lowest < 1:
        k = G.order()
        if k is None or k < 1:
            raise DomainError("compose needs G in qK[[q]]")
        G = G.declare_order(k)
    g = G.lowest
    # negative powers of G lose g + |k| g orders
    M = min(G.M, (F.M + 1) * g - 1, G.M + (F.lowest - 1) * g)
    if M < F.lowest * g:
        raise DomainError("composition has no known coefficients")
    head = QSeries(ctx, F.lowest, F.coeffs[: -F.lowest])
    tail = QSeries(ctx, 0, F.coeffs[-F.lowest :]) if F.M >= 0 else QSeries.zero(ctx, 0)
    total = compose_many([tail], G)[0] if F.M >= 0 else QSeries.zero(ctx, M)
    Ginv = G.inverse()
    pw = Ginv
    for k in range(-1, F.lowest - 1, -1):
        total = total + pw.scale(head[k])
        if k > F.lowest:
            pw = pw * Ginv
    return total.truncate(M)


def reverse(G: QSeries) -> QSeries:
    """Compositional inverse of G = c1 q + c2 q^2 + ... with c1 a unit.

    Fixed-point iteration s <- (q - H(s)) / c1 with H = G - c1 q; the n-th
    coefficient of the image depends only on lower coefficients of s, so
    each pass settles one more coefficient.
    """
    ctx = G.ctx
    if G.lowest < 1:
        G = G.declare_order(1)
    if G.lowest != 1 or not G[1].is_unit():
        raise DomainError("reverse needs a unit linear coefficient")
    M = G.M
    c1 = G[1]
    inv1 = ctx.one() / c1
    H = QSeries(ctx, 1, [ctx.zero()] + list(G.coeffs[1:]))
    s = QSeries.monomial(ctx, 1, M, inv1)
    qser = QSeries.q(ctx, M)
    for _ in range(M):
        nxt = ((qser - compose(H, s)).scale(inv1)).truncate(M).declare_order(1)
        if nxt == s:
            break
        s = nxt
    return s


def series_sqrt(X: QSeries) -> Optional[QSeries]:
    """A square root of a unit power series, or None if its constant term is
    not a square residue."""
    ctx = X.ctx
    if not X.is_unit():
        raise DomainError("series_sqrt needs a unit series")
    r0 = _sqrt_residue(X[0])
    if r0 is None:
        return None
    s0 = ctx.coerce(r0)
    for _ in range(ctx.N.bit_length() + 3):
        s0 = (s0 + X[0] / s0) / 2
    if not (s0 * s0).agrees(X[0], X[0].prec):
        raise PrecisionError("square root of the constant term did not converge")
    # s_n = (X_n - sum_{0<k<n} s_k s_{n-k}) / (2 s_0)
    inv = ctx.one() / (s0 * 2)
    s = [s0]
    for n in range(1, len(X.coeffs)):
        acc = X.coeffs[n] - dot(ctx, [(s[k], s[n - k]) for k in range(1, n)])
        s.append(acc * inv)
    return QSeries(ctx, 0, s)


def _sqrt_residue(c: PadicNum):
    ctx = c.ctx
    p, f = ctx.p, ctx.f
    if ctx.f == 1:
        a = c.unit[0] % p
        for r in range(1, p):
            if r * r % p == a:
                return r
        return None
    if p**f > 10**5:
        raise NotImplementedError("square roots for large residue fields")
    from itertools import product

    target = tuple(x % p for x in c.unit)
    for r in product(range(p), repeat=f):
        if any(r) and ctx._rmod(ctx._rmul(r, r), p) == target:
            return r
    return None
