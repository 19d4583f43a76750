"""Finite fields of odd characteristic.

Elements of F_q, q = p^m, are stored as integer codes ``sum(c_i * p**i)``
where ``c_i`` is the coefficient of ``x**i`` in the residue class modulo the
field's defining polynomial.  The prime subfield F_p is therefore the code
range ``0..p-1``.  All vectorised operations accept and return ``int64``
numpy arrays of codes; the ``s*`` methods are the scalar (Python int)
counterparts used by polynomial code.
"""
from __future__ import annotations

from functools import lru_cache

import numpy as np

FIELD_BOUND = 1 << 20
TABLE_LIMIT = 1024


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


class FieldError(ValueError):
    pass


class GF:
    """Arithmetic in F_{p^m}; construct through :func:`make_field`."""

    def __init__(self, p: int, m: int, modulus: tuple[int, ...]):
        self.p = p
        self.m = m
        self.q = p ** m
        self.modulus = tuple(modulus)
        self.is_prime = m == 1
        q = self.q
        self._pw = np.array([p ** i for i in range(m)], dtype=np.int64)
        if self.is_prime:
            self.generator = _prime_generator(p)
            self.exp = _power_table_prime(self.generator, p)
        else:
            self.generator = self._find_generator()
            self.exp = self._power_table(self.generator)
        log = np.full(q, -1, dtype=np.int64)
        log[self.exp] = np.arange(q - 1, dtype=np.int64)
        self.log = log
        inv = np.zeros(q, dtype=np.int64)
        inv[1:] = self.exp[(-log[1:]) % (q - 1)]
        self.inv_table = inv
        codes = np.arange(q, dtype=np.int64)
        self.neg_table = self._neg_digits(codes)
        if q <= TABLE_LIMIT:
            a = codes[:, None]
            b = codes[None, :]
            self.add_table = self._add_digits(a, b)
            la, lb = log[a], log[b]
            mul = self.exp[(la + lb) % (q - 1)]
            mul[(a == 0) | (b == 0)] = 0
            self.mul_table = mul
        else:
            self.add_table = None
            self.mul_table = None
        # nonsquare of least code, used for canonical square-class labels
        odd = np.flatnonzero(log[1:] % 2 == 1)
        self.nonsquare = int(odd[0]) + 1

    # ------------------------------------------------------------------
    def __repr__(self) -> str:
        return f"GF({self.p}^{self.m})" if self.m > 1 else f"GF({self.p})"

    def __reduce__(self):
        return (make_field, (self.p, self.m))

    # digit helpers ----------------------------------------------------
    def digits(self, a) -> np.ndarray:
        """Coefficient vectors (last axis of length m) of codes ``a``."""
        a = np.asarray(a, dtype=np.int64)
        return (a[..., None] // self._pw) % self.p

    def from_digits(self, d) -> np.ndarray:
        d = np.asarray(d, dtype=np.int64) % self.p
        return d @ self._pw

    def _add_digits(self, a, b):
        p = self.p
        if self.is_prime:
            return (a + b) % p
        res = np.zeros(np.broadcast(a, b).shape, dtype=np.int64)
        for w in self._pw:
            res = res + ((a // w % p + b // w % p) % p) * w
        return res

    def _neg_digits(self, a):
        p = self.p
        if self.is_prime:
            return (-a) % p
        res = np.zeros_like(a)
        for w in self._pw:
            res = res + ((-(a // w % p)) % p) * w
        return res

    def _poly_mulmod(self, a: int, b: int) -> int:
        p, m = self.p, self.m
        da = [(a // p ** i) % p for i in range(m)]
        db = [(b // p ** i) % p for i in range(m)]
        prod = [0] * (2 * m - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] = (prod[i + j] + x * y) % p
        mod = self.modulus
        for k in range(2 * m - 2, m - 1, -1):
            c = prod[k]
            if c:
                for i in range(m + 1):
                    prod[k - m + i] = (prod[k - m + i] - c * mod[i]) % p
        return sum(prod[i] * p ** i for i in range(m))

    def _poly_pow(self, a: int, k: int) -> int:
        result, base = 1, a
        while k:
            if k & 1:
                result = self._poly_mulmod(result, base)
            base = self._poly_mulmod(base, base)
            k >>= 1
        return result

    def _find_generator(self) -> int:
        q = self.q
        facs = prime_factors(q - 1)
        for g in range(2, q):
            if all(self._poly_pow(g, (q - 1) // r) != 1 for r in facs):
                return g
        raise FieldError("no primitive element found")  # pragma: no cover

    def _power_table(self, g: int) -> np.ndarray:
        """exp[k] = g**k for 0 <= k < q-1, built blockwise with F_p-linear maps."""
        p, m, q = self.p, self.m, self.q

        def mult_matrix(c: int) -> np.ndarray:
            # row i: digits of c * x^i
            return np.array([self.digits(self._poly_mulmod(c, p ** i)) for i in range(m)],
                            dtype=np.int64)

        block = min(q - 1, 4096)
        first = np.empty(block, dtype=np.int64)
        x = 1
        for k in range(block):
            first[k] = x
            x = self._poly_mulmod(x, g)
        out = np.empty(q - 1, dtype=np.int64)
        out[:block] = first
        step = mult_matrix(x)  # multiplication by g**block
        cur = self.digits(first)
        pos = block
        while pos < q - 1:
            cur = (cur @ step) % p
            take = min(block, q - 1 - pos)
            out[pos:pos + take] = (cur[:take] @ self._pw)
            pos += take
        return out

    # vectorised arithmetic ---------------------------------------------
    def add(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.is_prime:
            return (a + b) % self.p
        if self.add_table is not None:
            return self.add_table[a, b]
        return self._add_digits(a, b)

    def neg(self, a):
        a = np.asarray(a, dtype=np.int64)
        if self.is_prime:
            return (-a) % self.p
        return self.neg_table[a]

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        a = np.asarray(a, dtype=np.int64)
        b = np.asarray(b, dtype=np.int64)
        if self.is_prime:
            return (a * b) % self.p
        if self.mul_table is not None:
            return self.mul_table[a, b]
        res = self.exp[(self.log[a] + self.log[b]) % (self.q - 1)]
        return np.where((a == 0) | (b == 0), 0, res)

    def inv(self, a):
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise ZeroDivisionError("inverse of zero in " + repr(self))
        return self.inv_table[a]

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def power(self, a, k: int):
        a = np.asarray(a, dtype=np.int64)
        if k == 0:
            return np.ones_like(a)
        res = self.exp[(self.log[a] * (k % (self.q - 1))) % (self.q - 1)]
        if k < 0 and np.any(a == 0):
            raise ZeroDivisionError("negative power of zero")
        return np.where(a == 0, 0, res)

    def from_int(self, n):
        """Image of integers in the prime subfield."""
        return np.asarray(n, dtype=np.int64) % self.p

    def elements(self) -> np.ndarray:
        return np.arange(self.q, dtype=np.int64)

    # scalar arithmetic on Python ints -----------------------------------
    def sadd(self, a: int, b: int) -> int:
        if self.is_prime:
            return (a + b) % self.p
        if self.add_table is not None:
            return int(self.add_table[a, b])
        return int(self._add_digits(np.int64(a), np.int64(b)))

    def sneg(self, a: int) -> int:
        return (-a) % self.p if self.is_prime else int(self.neg_table[a])

    def ssub(self, a: int, b: int) -> int:
        return self.sadd(a, self.sneg(b))

    def smul(self, a: int, b: int) -> int:
        if self.is_prime:
            return (a * b) % self.p
        if a == 0 or b == 0:
            return 0
        return int(self.exp[(self.log[a] + self.log[b]) % (self.q - 1)])

    def sinv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in " + repr(self))
        if self.is_prime:
            return pow(a, self.p - 2, self.p)
        return int(self.inv_table[a])

    def spow(self, a: int, k: int) -> int:
        if k == 0:
            return 1
        if a == 0:
            if k < 0:
                raise ZeroDivisionError("negative power of zero")
            return 0
        return int(self.exp[(int(self.log[a]) * k) % (self.q - 1)])

    # field-theoretic maps ----------------------------------------------
    def frobenius(self, a, k: int = 1):
        """a -> a**(p**k)."""
        return self.power(a, self.p ** (k % self.m) if self.m > 1 else 1)

    def trace(self, a):
        """Trace to the prime field (codes 0..p-1)."""
        a = np.asarray(a, dtype=np.int64)
        acc = np.zeros_like(a)
        cur = a
        for _ in range(self.m):
            acc = self.add(acc, cur)
            cur = self.power(cur, self.p)
        return acc

    def is_square(self, a):
        a = np.asarray(a, dtype=np.int64)
        if np.any(a == 0):
            raise FieldError("is_square is defined on nonzero elements")
        return (self.log[a] % 2) == 0

    def square_class(self, a: int) -> int:
        """0 for squares, 1 for non-squares (a nonzero)."""
        return 0 if bool(self.is_square(a)) else 1

    def sqrt(self, a: int) -> int:
        """Square root with even discrete log (the canonical choice)."""
        if a == 0:
            return 0
        la = int(self.log[a])
        if la % 2:
            raise FieldError(f"{a} is not a square in {self!r}")
        return int(self.exp[la // 2])

    # embeddings ---------------------------------------------------------
    def embed_prime(self, a):
        """Elements of F_p are the codes 0..p-1 in every extension."""
        return np.asarray(a, dtype=np.int64) % self.p

    def coords(self, a) -> list[int]:
        return [int(c) for c in self.digits(int(a))]


def _prime_generator(p: int) -> int:
    if p == 3:
        return 2
    facs = prime_factors(p - 1)
    for g in range(2, p):
        if all(pow(g, (p - 1) // r, p) != 1 for r in facs):
            return g
    raise FieldError("no generator")  # pragma: no cover


def _power_table_prime(g: int, p: int) -> np.ndarray:
    out = np.empty(p - 1, dtype=np.int64)
    x = 1
    for k in range(p - 1):
        out[k] = x
        x = (x * g) % p
    return out


@lru_cache(maxsize=None)
def make_field(p: int, m: int = 1, bound: int = FIELD_BOUND) -> GF:
    """The field F_{p^m} with the least monic irreducible modulus.

    Fields are cached, so equal (p, m) give the same object.

    Moduli are compared by their integer code ``sum(c_i p**i)`` over the
    non-leading coefficients, i.e. the scan runs through codes 0, 1, 2, ...
    """
    if not isinstance(p, (int, np.integer)) or p < 3 or p % 2 == 0 or not is_prime(int(p)):
        raise FieldError(f"characteristic must be an odd prime, got {p}")
    if m < 1:
        raise FieldError("extension degree must be >= 1")
    p, m = int(p), int(m)
    if p ** m > bound:
        raise FieldError(f"field size {p}^{m} exceeds bound {bound}")
    return _make_field(p, m)


@lru_cache(maxsize=None)
def _make_field(p: int, m: int) -> GF:
    if m == 1:
        return GF(p, 1, (0, 1))
    from . import polys

    base = make_field(p, 1)
    for code in range(p ** m):
        coeffs = [(code // p ** i) % p for i in range(m)] + [1]
        if coeffs[0] == 0:
            continue
        if polys.is_irreducible(base, coeffs):
            return GF(p, m, tuple(coeffs))
    raise FieldError("no irreducible polynomial found")  # pragma: no cover


def trace_to_base(F: GF, x):
    """Absolute trace F_{p^m} -> F_p."""
    return F.trace(x)


def is_square(F: GF, a):
    return F.is_square(a)


def subfield_embedding(small: GF, big: GF) -> np.ndarray:
    """Array ``emb`` with ``emb[c]`` the code in ``big`` of element ``c`` of ``small``.

    Requires small.m | big.m; the embedding sends small's generator to
    big.generator ** ((Q-1)/(q-1)), which is a primitive element of the
    subfield; the map is checked to be additive on all pairs when small.q is
    at most 81 and on the basis otherwise.
    """
    if small.p != big.p or big.m % small.m:
        raise FieldError(f"{small!r} does not embed in {big!r}")
    if small.m == 1:
        return np.arange(small.q, dtype=np.int64)
    # find image of x (the class of the variable) as a root of small's modulus
    step = (big.q - 1) // (small.q - 1)
    cands = big.exp[(np.arange(small.q - 1, dtype=np.int64) * step) % (big.q - 1)]
    mod = small.modulus
    root = None
    for r in cands.tolist():
        acc = 0
        for c in reversed(mod):
            acc = big.sadd(big.smul(acc, r), c)
        if acc == 0:
            root = r
            break
    if root is None:  # pragma: no cover
        raise FieldError("modulus has no root in the extension")
    powers = [1]
    for _ in range(small.m - 1):
        powers.append(big.smul(powers[-1], root))
    digs = small.digits(np.arange(small.q, dtype=np.int64))
    emb = np.zeros(small.q, dtype=np.int64)
    for i in range(small.m):
        emb = big.add(emb, big.mul(digs[:, i], powers[i]))
    return emb
