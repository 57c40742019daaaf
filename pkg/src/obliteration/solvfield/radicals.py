"""Roots of univariate polynomials of degree <= 4 by radicals.

All routines take coefficients low -> high as complex numbers of one
``mpmath`` context and return every root with multiplicity.  Results are
polished with a few guarded Newton steps.
"""

from __future__ import annotations

import functools

__all__ = ["radical_roots", "sort_roots", "horner"]


def horner(coeffs, x):
    acc = coeffs[-1]
    for c in reversed(coeffs[:-1]):
        acc = acc * x + c
    return acc


def _quadratic(ctx, b, c):
    """Roots of t^2 + b t + c, avoiding cancellation."""
    disc = ctx.sqrt(b * b - 4 * c)
    # choose the sign that adds magnitudes
    if ctx.re(ctx.conj(b) * disc) < 0:
        disc = -disc
    q = -(b + disc) / 2
    if q == 0:
        return [ctx.mpc(0), ctx.mpc(0)]
    return [q, c / q]


def _cubic(ctx, a, b, c):
    """Cardano on t^3 + a t^2 + b t + c."""
    shift = a / 3
    p = b - a * a / 3
    q = 2 * a ** 3 / 27 - a * b / 3 + c
    half = -q / 2
    delta = half * half + (p / 3) ** 3
    sd = ctx.sqrt(delta)
    inner = half + sd
    if abs(half - sd) > abs(inner):
        inner = half - sd
    omega = ctx.mpc(-0.5, ctx.sqrt(3) / 2)
    if inner == 0:
        # p == 0 and q == 0: triple root
        return [-shift] * 3
    big_c = ctx.cbrt(inner)
    roots = []
    w = ctx.mpc(1)
    for _ in range(3):
        u = w * big_c
        roots.append(u - p / (3 * u) - shift)
        w = w * omega
    return roots


def _quartic(ctx, a, b, c, d):
    """Ferrari on t^4 + a t^3 + b t^2 + c t + d."""
    shift = a / 4
    p = b - 3 * a * a / 8
    q = c - a * b / 2 + a ** 3 / 8
    r = d - a * c / 4 + a * a * b / 16 - 3 * a ** 4 / 256
    scale = max(abs(p), abs(q), abs(r), ctx.mpf(1))
    if abs(q) <= ctx.mpf(10) ** (-(ctx.dps * 3) // 4) * scale:
        roots = []
        for z in _quadratic(ctx, p, r):
            s = ctx.sqrt(z)
            roots += [s, -s]
        return [u - shift for u in roots]
    # resolvent: 8 m^3 + 8 p m^2 + (2 p^2 - 8 r) m - q^2 = 0
    ms = _cubic(ctx, p, (p * p - 4 * r) / 4, -q * q / 8)
    m = max(ms, key=abs)
    s = ctx.sqrt(2 * m)
    base = p / 2 + m
    corr = q / (2 * s)
    roots = _quadratic(ctx, -s, base + corr) + _quadratic(ctx, s, base - corr)
    return [u - shift for u in roots]


def _polish(ctx, coeffs, x, steps=3):
    deriv = [i * coeffs[i] for i in range(1, len(coeffs))]
    best = x
    best_res = abs(horner(coeffs, x))
    for _ in range(steps):
        dv = horner(deriv, best)
        if dv == 0:
            break
        cand = best - horner(coeffs, best) / dv
        res = abs(horner(coeffs, cand))
        if res < best_res:
            best, best_res = cand, res
        else:
            break
    return best


def radical_roots(ctx, coeffs):
    """All roots of ``sum coeffs[i] t^i`` (1 <= degree <= 4, leading coeff nonzero)."""
    coeffs = [ctx.mpc(c) for c in coeffs]
    deg = len(coeffs) - 1
    if deg < 1 or deg > 4:
        raise ValueError(f"degree must be between 1 and 4, got {deg}")
    lead = coeffs[-1]
    if lead == 0:
        raise ValueError("leading coefficient is zero")
    monic = [c / lead for c in coeffs[:-1]]
    if deg == 1:
        return [-monic[0]]
    if deg == 2:
        roots = _quadratic(ctx, monic[1], monic[0])
    elif deg == 3:
        roots = _cubic(ctx, monic[2], monic[1], monic[0])
    else:
        roots = _quartic(ctx, monic[3], monic[2], monic[1], monic[0])
    return [_polish(ctx, coeffs, x) for x in roots]


def sort_roots(ctx, roots, digits=None):
    """Deterministic order: real part, then imaginary part, with ties within
    ``10^-digits`` (relative) treated as equal."""
    if digits is None:
        digits = ctx.dps // 2
    scale = max([abs(r) for r in roots] + [ctx.mpf(1)])
    tol = ctx.mpf(10) ** (-digits) * scale

    def cmp(x, y):
        dre = ctx.re(x) - ctx.re(y)
        if abs(dre) > tol:
            return -1 if dre < 0 else 1
        dim = ctx.im(x) - ctx.im(y)
        if abs(dim) > tol:
            return -1 if dim < 0 else 1
        return 0

    return sorted(roots, key=functools.cmp_to_key(cmp))
