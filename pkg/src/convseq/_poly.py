"""Exact polynomial helpers over Q. Coefficient lists run low -> high."""

from __future__ import annotations

from fractions import Fraction


def trim(p):
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def deriv(p):
    return trim([i * c for i, c in enumerate(p)][1:] or [Fraction(0)])


def divmod_poly(a, b):
    a, b = trim(a), trim(b)
    if b == [0]:
        raise ZeroDivisionError("polynomial division by zero")
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    r = list(a)
    lead = b[-1]
    for i in range(len(a) - len(b), -1, -1):
        c = r[i + len(b) - 1] / lead
        q[i] = c
        if c:
            for j, bj in enumerate(b):
                r[i + j] -= c * bj
    return trim(q), trim(r[: len(b) - 1] or [Fraction(0)])


def monic(p):
    p = trim(p)
    return [c / p[-1] for c in p]


def gcd_poly(a, b):
    a, b = trim(a), trim(b)
    while b != [0]:
        a, b = b, divmod_poly(a, b)[1]
    return monic(a)


def squarefree_factors(p):
    """Yun's algorithm: [(f_i, i)] with p = c * prod f_i^i, f_i squarefree."""
    p = trim([Fraction(c) for c in p])
    out = []
    dp = deriv(p)
    a = gcd_poly(p, dp)
    b = divmod_poly(p, a)[0]
    c = divmod_poly(dp, a)[0]
    d = [x - y for x, y in zip(_pad(c, b), _pad(deriv(b), c))]
    i = 1
    while len(trim(b)) > 1:
        a = gcd_poly(b, d)
        if len(a) > 1:
            out.append((a, i))
        b = divmod_poly(b, a)[0]
        c = divmod_poly(d, a)[0]
        d = [x - y for x, y in zip(_pad(c, b), _pad(deriv(b), c))]
        i += 1
    return out


def _pad(x, y):
    n = max(len(x), len(y))
    return list(x) + [Fraction(0)] * (n - len(x))
