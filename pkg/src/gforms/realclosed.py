"""Exact forms over k, k(i) and the quaternions, with rational coordinates.

Rational numbers stand in for a real closed field k: every step used here
(signs, diagonalization, positive rationals counted as squares) is valid in
any real closed field containing Q.  Scalars are quaternions a + b i + c j + d ij
with Fraction components; k and k(i) are the subrings with c = d = 0 (and
b = 0 for k).

A form is a Gram matrix B with h(x, y) = sum_ab x_a B_ab sigma(y_b), so the
hermitian condition reads sigma(B)^T = eps B and a base change by the rows
of P gives P B sigma(P)^T.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction


class ExactFormError(ValueError):
    pass


@dataclass(frozen=True)
class Quat:
    a: Fraction = Fraction(0)
    b: Fraction = Fraction(0)
    c: Fraction = Fraction(0)
    d: Fraction = Fraction(0)

    @staticmethod
    def of(*parts) -> "Quat":
        vals = [Fraction(p) for p in parts] + [Fraction(0)] * (4 - len(parts))
        return Quat(*vals)

    def __add__(self, o):
        return Quat(self.a + o.a, self.b + o.b, self.c + o.c, self.d + o.d)

    def __sub__(self, o):
        return Quat(self.a - o.a, self.b - o.b, self.c - o.c, self.d - o.d)

    def __neg__(self):
        return Quat(-self.a, -self.b, -self.c, -self.d)

    def __mul__(self, o):
        a1, b1, c1, d1 = self.a, self.b, self.c, self.d
        a2, b2, c2, d2 = o.a, o.b, o.c, o.d
        return Quat(a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
                    a1 * b2 + b1 * a2 + c1 * d2 - d1 * c2,
                    a1 * c2 - b1 * d2 + c1 * a2 + d1 * b2,
                    a1 * d2 + b1 * c2 - c1 * b2 + d1 * a2)

    def scale(self, r) -> "Quat":
        r = Fraction(r)
        return Quat(self.a * r, self.b * r, self.c * r, self.d * r)

    def conj(self) -> "Quat":
        return Quat(self.a, -self.b, -self.c, -self.d)

    def norm(self) -> Fraction:
        return self.a * self.a + self.b * self.b + self.c * self.c + self.d * self.d

    def inverse(self) -> "Quat":
        n = self.norm()
        if n == 0:
            raise ZeroDivisionError("zero quaternion")
        return self.conj().scale(1 / n)

    def is_zero(self) -> bool:
        return not (self.a or self.b or self.c or self.d)

    def parts(self) -> tuple:
        return (self.a, self.b, self.c, self.d)

    def to_json(self) -> list[str]:
        return [str(x) for x in self.parts()]


ZERO = Quat()
ONE = Quat.of(1)
I = Quat.of(0, 1)
J = Quat.of(0, 0, 1)
K = Quat.of(0, 0, 0, 1)

RINGS = ("k", "k(i)", "quaternion")
INVOLUTIONS = ("trivial", "conjugation", "hyperbolic", "orthogonal")


def apply_involution(kind: str, x: Quat) -> Quat:
    if kind == "trivial":
        return x
    if kind in ("conjugation", "hyperbolic"):
        return x.conj()
    if kind == "orthogonal":            # i -> -i, j -> j, ij -> ij
        return Quat(x.a, -x.b, x.c, x.d)
    raise ExactFormError(f"unknown involution {kind!r}")


@dataclass(frozen=True)
class CaseDescriptor:
    ring: str
    involution: str
    epsilon: int

    def label(self) -> str:
        return f"{self.ring}/{self.involution}/{'+1' if self.epsilon == 1 else '-1'}"


# the ten cases, in the classical order
CASES = (
    CaseDescriptor("k", "trivial", 1),
    CaseDescriptor("k", "trivial", -1),
    CaseDescriptor("k(i)", "trivial", 1),
    CaseDescriptor("k(i)", "trivial", -1),
    CaseDescriptor("k(i)", "conjugation", 1),
    CaseDescriptor("k(i)", "conjugation", -1),
    CaseDescriptor("quaternion", "hyperbolic", 1),
    CaseDescriptor("quaternion", "hyperbolic", -1),
    CaseDescriptor("quaternion", "orthogonal", 1),
    CaseDescriptor("quaternion", "orthogonal", -1),
)


def in_ring(ring: str, x: Quat) -> bool:
    if ring == "k":
        return x.b == 0 and x.c == 0 and x.d == 0
    if ring == "k(i)":
        return x.c == 0 and x.d == 0
    return True


Matrix = tuple  # tuple of tuples of Quat


def _mat(rows) -> Matrix:
    return tuple(tuple(x if isinstance(x, Quat) else Quat.of(x) for x in r) for r in rows)


def mat_mul(A, B) -> Matrix:
    n, m, p = len(A), len(B), len(B[0]) if B else 0
    out = []
    for i in range(n):
        row = []
        for j in range(p):
            acc = ZERO
            for k in range(m):
                acc = acc + A[i][k] * B[k][j]
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def sigma_transpose(kind: str, A) -> Matrix:
    n = len(A)
    m = len(A[0]) if n else 0
    return tuple(tuple(apply_involution(kind, A[i][j]) for i in range(n)) for j in range(m))


def congruent(kind: str, P, B) -> Matrix:
    """P B sigma(P)^T."""
    return mat_mul(mat_mul(P, B), sigma_transpose(kind, P))


def _rank(A) -> int:
    """Rank over the division ring (left row reduction)."""
    rows = [list(r) for r in A]
    n = len(rows)
    m = len(rows[0]) if n else 0
    r = 0
    for c in range(m):
        piv = next((i for i in range(r, n) if not rows[i][c].is_zero()), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        inv = rows[r][c].inverse()
        rows[r] = [inv * x for x in rows[r]]
        for i in range(n):
            if i != r and not rows[i][c].is_zero():
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        r += 1
    return r


@dataclass(frozen=True)
class ExactForm:
    case: CaseDescriptor
    gram: Matrix

    def __post_init__(self):
        object.__setattr__(self, "gram", _mat(self.gram))
        c = self.case
        if c not in CASES:
            raise ExactFormError(f"not one of the ten cases: {c}")
        n = len(self.gram)
        if any(len(r) != n for r in self.gram):
            raise ExactFormError("Gram matrix must be square")
        for r in self.gram:
            for x in r:
                if not in_ring(c.ring, x):
                    raise ExactFormError(f"entry {x.to_json()} outside {c.ring}")
        st = sigma_transpose(c.involution, self.gram)
        for i in range(n):
            for j in range(n):
                if st[i][j] != self.gram[i][j].scale(c.epsilon):
                    raise ExactFormError("Gram matrix is not epsilon-hermitian")
        if _rank(self.gram) != n:
            raise ExactFormError("form is singular")

    @property
    def dim(self) -> int:
        return len(self.gram)


def orthogonal_sum(f: ExactForm, g: ExactForm) -> ExactForm:
    if f.case != g.case:
        raise ExactFormError("case mismatch")
    n, m = f.dim, g.dim
    rows = [list(r) + [ZERO] * m for r in f.gram] + [[ZERO] * n + list(r) for r in g.gram]
    return ExactForm(f.case, rows)


def n_fold(f: ExactForm, n: int) -> ExactForm:
    out = f
    for _ in range(n - 1):
        out = orthogonal_sum(out, f)
    return out


def hyperbolic_form(case: CaseDescriptor, r: int = 1) -> ExactForm:
    """r hyperbolic planes [[0, 1], [eps, 0]]."""
    n = 2 * r
    rows = [[ZERO] * n for _ in range(n)]
    for t in range(r):
        rows[2 * t][2 * t + 1] = ONE
        rows[2 * t + 1][2 * t] = ONE.scale(case.epsilon)
    return ExactForm(case, rows)


# --------------------------------------------------------------------------
# diagonalization

def diagonalize(kind: str, B):
    """(P, diag) with P B sigma(P)^T diagonal; fails on alternating forms."""
    n = len(B)

    def h(x, y):
        acc = ZERO
        for a in range(n):
            if x[a].is_zero():
                continue
            for b in range(n):
                if not y[b].is_zero() and not B[a][b].is_zero():
                    acc = acc + x[a] * B[a][b] * apply_involution(kind, y[b])
        return acc

    basis = [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]
    done, diag = [], []
    while basis:
        idx = next((s for s, v in enumerate(basis) if not h(v, v).is_zero()), None)
        if idx is None:
            for s in range(len(basis)):
                for t in range(len(basis)):
                    for lam in (ONE, I, J, K):
                        if s == t:
                            continue
                        v = [x + lam * y for x, y in zip(basis[s], basis[t])]
                        if not h(v, v).is_zero():
                            basis[s], idx = v, s
                            break
                    if idx is not None:
                        break
                if idx is not None:
                    break
        if idx is None:
            raise ExactFormError("form is alternating on the remaining subspace")
        p = basis.pop(idx)
        d = h(p, p)
        dinv = d.inverse()
        basis = [[x - (h(v, p) * dinv) * y for x, y in zip(v, p)] for v in basis]
        done.append(p)
        diag.append(d)
    P = tuple(tuple(r) for r in done)
    D = congruent(kind, P, B)
    for i in range(n):
        for j in range(n):
            if (i != j and not D[i][j].is_zero()) or (i == j and D[i][i] != diag[i]):
                raise ExactFormError("diagonalization check failed")  # pragma: no cover
    return P, diag


# --------------------------------------------------------------------------
# classification

@dataclass(frozen=True)
class FormInvariant:
    shape: str            # "Z+Z" (signature) or "Z" (rank)
    values: tuple
    witt: int
    witt_group: str       # "Z", "Z/2Z" or "0"

    def to_json(self) -> dict:
        return {"shape": self.shape, "values": list(self.values), "witt": self.witt,
                "witt_group": self.witt_group}


def reduce_to_base(f: ExactForm) -> ExactForm:
    """Multiply by i to move the three reducible cases to base cases."""
    c = f.case
    if c == CaseDescriptor("k(i)", "conjugation", -1):
        rows = [[I * x for x in r] for r in f.gram]
        return ExactForm(CaseDescriptor("k(i)", "conjugation", 1), rows)
    if c.ring == "quaternion" and c.involution == "orthogonal":
        rows = [[x * I for x in r] for r in f.gram]
        return ExactForm(CaseDescriptor("quaternion", "hyperbolic", -c.epsilon), rows)
    return f


def _signature(diag) -> tuple[int, int]:
    pos = sum(1 for d in diag if d.a > 0)
    neg = sum(1 for d in diag if d.a < 0)
    return pos, neg


def classify_case(f: ExactForm) -> FormInvariant:
    g = reduce_to_base(f)
    c = g.case
    n = g.dim
    alternating = c.involution == "trivial" and c.epsilon == -1
    if alternating:
        if n % 2:
            raise ExactFormError("alternating form of odd rank")
        rank = _rank(g.gram)
        return FormInvariant("Z", (rank,), 0, "0")
    P, diag = diagonalize(c.involution, g.gram)
    if c in (CaseDescriptor("k", "trivial", 1), CaseDescriptor("k(i)", "conjugation", 1),
             CaseDescriptor("quaternion", "hyperbolic", 1)):
        for d in diag:
            if d.b or d.c or d.d:
                raise ExactFormError("hermitian diagonal entry is not in k")  # pragma: no cover
        pos, neg = _signature(diag)
        return FormInvariant("Z+Z", (pos, neg), pos - neg, "Z")
    # rank-classified: k(i) symmetric, quaternion skew-hermitian
    return FormInvariant("Z", (n,), n % 2, "Z/2Z")


def witt_class_case(f: ExactForm) -> int:
    return classify_case(f).witt


def is_isometric_exact(f: ExactForm, g: ExactForm) -> bool:
    if f.case != g.case:
        raise ExactFormError("case mismatch")
    return f.dim == g.dim and classify_case(f).values == classify_case(g).values


def rank_one_generator(case: CaseDescriptor) -> ExactForm:
    """A smallest nonzero form of the case (a hyperbolic plane when alternating)."""
    if case.involution == "trivial" and case.epsilon == -1:
        return hyperbolic_form(case)
    table = {
        ("k(i)", "conjugation", -1): I,
        ("quaternion", "hyperbolic", -1): I,
        ("quaternion", "orthogonal", -1): I,
    }
    return ExactForm(case, [[table.get((case.ring, case.involution, case.epsilon), ONE)]])


def witt_group_of_case(case: CaseDescriptor, max_order: int = 4) -> str:
    """Order of the generator class modulo hyperbolic forms, as a group name."""
    x = rank_one_generator(case)
    for n in range(1, max_order + 1):
        nx = n_fold(x, n)
        if nx.dim % 2 == 0 and is_isometric_exact(nx, hyperbolic_form(case, nx.dim // 2)):
            return "0" if n == 1 else ("Z/2Z" if n == 2 else f"Z/{n}Z")
    return "Z"


# --------------------------------------------------------------------------
# sample generation

def _rand_scalar(rng: random.Random, ring: str, lo: int = -3, hi: int = 3) -> Quat:
    parts = [rng.randint(lo, hi)]
    if ring in ("k(i)", "quaternion"):
        parts.append(rng.randint(lo, hi))
    if ring == "quaternion":
        parts += [rng.randint(lo, hi), rng.randint(lo, hi)]
    return Quat.of(*parts)


def random_invertible(rng: random.Random, ring: str, n: int):
    while True:
        P = tuple(tuple(_rand_scalar(rng, ring) for _ in range(n)) for _ in range(n))
        if _rank(P) == n:
            return P


def random_form(case: CaseDescriptor, n: int, rng: random.Random) -> ExactForm:
    """P D sigma(P)^T with D a random diagonal (or hyperbolic, if alternating)."""
    if case.involution == "trivial" and case.epsilon == -1:
        n += n % 2
        D = hyperbolic_form(case, n // 2).gram
    else:
        x = rank_one_generator(case).gram[0][0]
        entries = []
        for _ in range(n):
            r = Fraction(rng.choice([-3, -2, -1, 1, 2, 3]), rng.choice([1, 2, 3]))
            if case.involution == "trivial" and case.ring == "k(i)":
                r = abs(r)          # symmetric forms over k(i): any nonzero scalar
                entries.append(_rand_scalar(rng, "k(i)", 1, 2).scale(r))
            else:
                entries.append(x.scale(r))
        D = tuple(tuple(entries[i] if i == j else ZERO for j in range(n)) for i in range(n))
    P = random_invertible(rng, case.ring, len(D))
    return ExactForm(case, congruent(case.involution, P, D))
