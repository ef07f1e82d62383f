"""Canonical JSON for p-adic numbers, series, points and reports.

A coefficient is written as the decimal residue p^v * unit mod p^prec when
v >= 0, as "unit/p^k" when v = -k < 0, and as a list of such strings when
f > 1.  Output uses sorted keys so equal objects give identical bytes.
"""

from __future__ import annotations

import json
import re
from fractions import Fraction
from typing import Any

from .modforms import ModularPoint
from .padic import DomainError, PadicContext, PadicNum, _make

_NEG = re.compile(r"^(-?\d+)/(\d+)\^(\d+)$")


def dumps(obj: Any) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def context_header(ctx: PadicContext, **extra) -> dict:
    out = {"p": ctx.p, "N": ctx.N, "f": ctx.f}
    out.update({k: v for k, v in extra.items() if v is not None})
    return out


def _component_text(x: int, val: int, prec: int, p: int) -> str:
    if val >= 0:
        return str(x * p**val % p**prec) if prec > 0 else "0"
    return f"{x}/{p}^{-val}"


def coeff_text(c: PadicNum):
    p = c.ctx.p
    if c.is_zero():
        return "0" if c.ctx.f == 1 else ["0"] * c.ctx.f
    parts = [_component_text(x, c.val, c.prec, p) for x in c.unit]
    return parts[0] if c.ctx.f == 1 else parts


def _component_value(s: str, p: int) -> Fraction:
    m = _NEG.match(s)
    if m:
        if int(m.group(2)) != p:
            raise DomainError(f"denominator base must be p = {p}")
        return Fraction(int(m.group(1)), p ** int(m.group(3)))
    return Fraction(int(s))


def coeff_from_text(ctx: PadicContext, text, prec: int) -> PadicNum:
    parts = [text] if isinstance(text, str) else list(text)
    if len(parts) != ctx.f:
        raise DomainError(f"expected {ctx.f} components")
    vals = [_component_value(s, ctx.p) for s in parts]
    if not any(vals):
        return ctx.zero(prec)
    x = ctx.coerce(vals[0] if ctx.f == 1 else tuple(vals))
    return _make(ctx, x.val, x.unit, prec)


def padic_to_json(c: PadicNum) -> dict:
    ctx = c.ctx
    return {
        "p": ctx.p,
        "N": ctx.N,
        "f": ctx.f,
        "valuation": None if c.is_zero() else c.val,
        "prec": c.prec,
        "residue": coeff_text(c),
    }


def padic_from_json(d: dict, ctx: PadicContext = None) -> PadicNum:
    ctx = ctx or PadicContext(d["p"], d["N"], d.get("f", 1))
    return coeff_from_text(ctx, d["residue"], d["prec"])


def series_to_json(F) -> dict:
    ctx = F.ctx
    return {
        "p": ctx.p,
        "N": ctx.N,
        "f": ctx.f,
        "M": F.M,
        "lowest": F.lowest,
        "coeffs": [coeff_text(c) for c in F.coeffs],
        "prec": [c.prec for c in F.coeffs],
        "eff_prec": F.eff_prec,
    }


def series_from_json(d: dict, ctx: PadicContext = None):
    from .qseries import QSeries

    ctx = ctx or PadicContext(d["p"], d["N"], d.get("f", 1))
    precs = d.get("prec") or [ctx.N] * len(d["coeffs"])
    cs = [coeff_from_text(ctx, t, pr) for t, pr in zip(d["coeffs"], precs)]
    out = QSeries(ctx, d["lowest"], cs)
    if out.M != d["M"]:
        raise DomainError("M does not match the number of coefficients")
    return out


def point_to_json(pt: ModularPoint) -> dict:
    return {"a": series_to_json(pt.a), "b": series_to_json(pt.b), "type": pt.classify()}


def point_from_json(d: dict, ctx: PadicContext = None) -> ModularPoint:
    return ModularPoint(series_from_json(d["a"], ctx), series_from_json(d["b"], ctx))


def param_text(v) -> Any:
    """Parameters echo as strings (exact values) or p-adic JSON."""
    if isinstance(v, PadicNum):
        return padic_to_json(v)
    if isinstance(v, (int, Fraction)):
        return str(v)
    if isinstance(v, (list, tuple)):
        return [param_text(x) for x in v]
    if v is None:
        return None
    if hasattr(v, "coeffs"):
        return series_to_json(v)
    return str(v)
