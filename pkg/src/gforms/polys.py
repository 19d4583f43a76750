"""Univariate polynomials over a :class:`~gforms.field.GF`.

A polynomial is a list of element codes, lowest degree first, with no
trailing zeros (the zero polynomial is ``[]``).
"""
from __future__ import annotations

from itertools import count

from .field import GF


def trim(f):
    f = list(f)
    while f and f[-1] == 0:
        f.pop()
    return f


def degree(f) -> int:
    return len(f) - 1


def add(F: GF, f, g):
    n = max(len(f), len(g))
    out = [F.sadd(f[i] if i < len(f) else 0, g[i] if i < len(g) else 0) for i in range(n)]
    return trim(out)


def neg(F: GF, f):
    return [F.sneg(c) for c in f]


def sub(F: GF, f, g):
    return add(F, f, neg(F, g))


def scale(F: GF, c: int, f):
    if c == 0:
        return []
    return trim([F.smul(c, a) for a in f])


def mul(F: GF, f, g):
    if not f or not g:
        return []
    out = [0] * (len(f) + len(g) - 1)
    for i, a in enumerate(f):
        if a:
            for j, b in enumerate(g):
                if b:
                    out[i + j] = F.sadd(out[i + j], F.smul(a, b))
    return trim(out)


def monic(F: GF, f):
    if not f:
        return []
    return scale(F, F.sinv(f[-1]), f)


def divmod_(F: GF, f, g):
    if not g:
        raise ZeroDivisionError("polynomial division by zero")
    f = list(f)
    dg = len(g) - 1
    inv_lead = F.sinv(g[-1])
    quo = [0] * max(len(f) - dg, 0)
    for k in range(len(f) - 1, dg - 1, -1):
        c = f[k]
        if c:
            c = F.smul(c, inv_lead)
            quo[k - dg] = c
            for i, b in enumerate(g):
                if b:
                    f[k - dg + i] = F.ssub(f[k - dg + i], F.smul(c, b))
    return trim(quo), trim(f[:dg] if dg > 0 else [])


def mod(F: GF, f, g):
    return divmod_(F, f, g)[1]


def gcd(F: GF, f, g):
    """Monic gcd."""
    f, g = trim(f), trim(g)
    while g:
        f, g = g, mod(F, f, g)
    return monic(F, f)


def xgcd(F: GF, f, g):
    """(d, s, t) with s*f + t*g = d monic."""
    r0, r1 = trim(f), trim(g)
    s0, s1 = [1], []
    t0, t1 = [], [1]
    while r1:
        qt, r = divmod_(F, r0, r1)
        r0, r1 = r1, r
        s0, s1 = s1, sub(F, s0, mul(F, qt, s1))
        t0, t1 = t1, sub(F, t0, mul(F, qt, t1))
    if not r0:
        return [], [], []
    c = F.sinv(r0[-1])
    return scale(F, c, r0), scale(F, c, s0), scale(F, c, t0)


def powmod(F: GF, f, e: int, m):
    result = [1]
    base = mod(F, f, m)
    while e:
        if e & 1:
            result = mod(F, mul(F, result, base), m)
        base = mod(F, mul(F, base, base), m)
        e >>= 1
    return mod(F, result, m) if len(m) > 1 else []


def deriv(F: GF, f):
    return trim([F.smul(i % F.p, c) for i, c in enumerate(f)][1:])


def evaluate(F: GF, f, x: int) -> int:
    acc = 0
    for c in reversed(f):
        acc = F.sadd(F.smul(acc, x), c)
    return acc


def is_irreducible(F: GF, f) -> bool:
    """Rabin's test for a polynomial of degree >= 1."""
    f = monic(F, trim(f))
    n = len(f) - 1
    if n < 1:
        return False
    if n == 1:
        return True
    x = [0, 1]
    q = F.q

    def frob_power(k):
        h = x
        for _ in range(k):
            h = powmod(F, h, q, f)
        return h

    if sub(F, frob_power(n), mod(F, x, f)):
        return False
    for r in _prime_divisors(n):
        h = sub(F, frob_power(n // r), x)
        if len(gcd(F, f, h)) > 1:
            return False
    return True


def _prime_divisors(n):
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _pth_root(F: GF, f):
    p = F.p
    # inverse Frobenius on coefficients: a -> a**(q/p)
    e = F.q // p
    return trim([F.spow(f[i], e) for i in range(0, len(f), p)])


def squarefree_factorization(F: GF, f):
    """Monic f -> list of (squarefree g, i) with f = prod g**i."""
    out = []
    f = monic(F, f)
    if len(f) <= 1:
        return out
    d = deriv(F, f)
    if not d:
        for g, j in squarefree_factorization(F, _pth_root(F, f)):
            out.append((g, j * F.p))
        return out
    c = gcd(F, f, d)
    w = divmod_(F, f, c)[0]
    i = 1
    while len(w) > 1:
        y = gcd(F, w, c)
        z = divmod_(F, w, y)[0]
        if len(z) > 1:
            out.append((monic(F, z), i))
        i += 1
        w = y
        c = divmod_(F, c, y)[0]
    if len(c) > 1:
        for g, j in squarefree_factorization(F, _pth_root(F, c)):
            out.append((g, j * F.p))
    return out


def distinct_degree(F: GF, f):
    """Squarefree monic f -> list of (product of all degree-d factors, d)."""
    out = []
    h = [0, 1]
    d = 0
    f = list(f)
    while len(f) - 1 >= 2 * (d + 1):
        d += 1
        h = powmod(F, h, F.q, f)
        g = gcd(F, f, sub(F, h, [0, 1]))
        if len(g) > 1:
            out.append((g, d))
            f = divmod_(F, f, g)[0]
            h = mod(F, h, f)
    if len(f) > 1:
        out.append((f, len(f) - 1))
    return out


def _candidates(F: GF, n: int):
    """Deterministic scan of nonconstant polynomials of degree < n."""
    q = F.q
    for k in count(q):
        if k >= q ** n:
            return
        digits = []
        t = k
        while t:
            digits.append(t % q)
            t //= q
        yield trim(digits)


def equal_degree(F: GF, f, d: int):
    """Split squarefree monic f whose irreducible factors all have degree d."""
    n = len(f) - 1
    if n == d:
        return [f]
    e = (F.q ** d - 1) // 2
    for a in _candidates(F, n):
        b = sub(F, powmod(F, a, e, f), [1])
        g = gcd(F, f, b)
        if 1 < len(g) < len(f):
            h = divmod_(F, f, g)[0]
            return equal_degree(F, g, d) + equal_degree(F, monic(F, h), d)
    raise RuntimeError("equal-degree splitting exhausted its scan")  # pragma: no cover


def factor_poly(F: GF, f):
    """Complete factorization: list of (monic irreducible, multiplicity).

    A non-unit leading coefficient is returned as a leading ``([c], 1)``
    entry so that the product of all entries reproduces ``f`` exactly.
    Factors are sorted by (degree, coefficients from the top).
    """
    f = trim(f)
    if not f:
        raise ValueError("factor_poly of the zero polynomial")
    lead = f[-1]
    out = []
    for g, i in squarefree_factorization(F, f):
        for h, d in distinct_degree(F, g):
            for irr in equal_degree(F, h, d):
                out.append((irr, i))
    merged = {}
    for g, i in out:
        merged[tuple(g)] = merged.get(tuple(g), 0) + i
    res = sorted(((list(g), i) for g, i in merged.items()),
                 key=lambda t: (len(t[0]), t[0][::-1]))
    if lead != 1:
        res.insert(0, ([lead], 1))
    return res


def expand(F: GF, factors):
    out = [1]
    for g, i in factors:
        for _ in range(i):
            out = mul(F, out, g)
    return out


def to_string(f, var: str = "t") -> str:
    """Ascending-degree rendering, e.g. ``3 - 4*t + t^2``; integer coefficients."""
    terms = []
    for i, c in enumerate(f):
        c = int(c)
        if c == 0:
            continue
        mag = abs(c)
        if i == 0:
            body = str(mag)
        else:
            mono = var if i == 1 else f"{var}^{i}"
            body = mono if mag == 1 else f"{mag}*{mono}"
        terms.append((c < 0, body))
    if not terms:
        return "0"
    s = ("-" if terms[0][0] else "") + terms[0][1]
    for negsign, body in terms[1:]:
        s += (" - " if negsign else " + ") + body
    return s
