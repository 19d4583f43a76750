"""Text file formats and canonical JSON.

Group files::

    group
    gens: (1 2); (1 2 3)          # or
    named: S 3                    # or
    table:
    0 1 ...                       # one row per element

Space files::

    field 5 1
    epsilon 1
    group S3                      # catalog name, a .grp path, or "table n" + n rows
    dim 2
    gram
    1 0
    0 1
    rep 1                         # one block per generator (element index)
    ...

Algebra files share the header and carry ``struct`` (n blocks of n rows,
block i row j = b_i b_j), ``unit`` and ``sigma`` (n rows).  Real closed form
files carry ``case <ring> <involution> <eps>``, ``dim`` and ``gram`` rows of
entries ``a`` or ``a,b`` or ``a,b,c,d`` (fraction strings).

Lines starting with ``#`` and blank lines are ignored.  Parse errors carry the
offending line number.
"""
from __future__ import annotations

import hashlib
import json
import os
from fractions import Fraction

import numpy as np

from .algebra import Algebra
from .field import GF, make_field
from .forms import EquivariantSpace, ModuleRep
from .groups import (CATALOG_NAMES, FiniteGroup, GroupError, catalog_group, from_permutations,
                     from_table, parse_cycles)
from .realclosed import CaseDescriptor, ExactForm, Quat


class ParseError(ValueError):
    def __init__(self, line: int, msg: str):
        super().__init__(f"line {line}: {msg}")
        self.line = line


# --------------------------------------------------------------------------
# canonical JSON

def to_plain(obj):
    """Convert to JSON-ready data: exact integers, fraction strings, no floats."""
    if hasattr(obj, "to_json"):
        return to_plain(obj.to_json())
    if isinstance(obj, dict):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_plain(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return to_plain(obj.tolist())
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, Fraction):
        return str(obj)
    if obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, float):
        raise TypeError("floating point values are not allowed in serialized output")
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def canonical_json(obj, drop_keys: tuple = ()) -> str:
    data = to_plain(obj)
    if drop_keys:
        data = _drop(data, set(drop_keys))
    return json.dumps(data, sort_keys=True, indent=1, ensure_ascii=True) + "\n"


def _drop(data, keys: set):
    if isinstance(data, dict):
        return {k: _drop(v, keys) for k, v in data.items() if k not in keys}
    if isinstance(data, list):
        return [_drop(v, keys) for v in data]
    return data


def verification_hash(*objs) -> str:
    """sha256 of the canonical JSON of the given objects."""
    return hashlib.sha256(canonical_json(list(objs)).encode()).hexdigest()


# --------------------------------------------------------------------------
# line reader

class _Lines:
    def __init__(self, text: str):
        self.items = []
        for no, raw in enumerate(text.splitlines(), 1):
            s = raw.split("#", 1)[0].strip()
            if s:
                self.items.append((no, s))
        self.pos = 0

    def done(self) -> bool:
        return self.pos >= len(self.items)

    def peek(self):
        return self.items[self.pos] if not self.done() else (self.last_line, "")

    @property
    def last_line(self) -> int:
        return self.items[-1][0] if self.items else 1

    def next(self, what: str):
        if self.done():
            raise ParseError(self.last_line, f"unexpected end of input, expected {what}")
        item = self.items[self.pos]
        self.pos += 1
        return item

    def keyword(self, key: str) -> tuple[int, list[str]]:
        no, s = self.next(key)
        parts = s.split()
        if parts[0] != key:
            raise ParseError(no, f"expected {key!r}, got {parts[0]!r}")
        return no, parts[1:]

    def int_rows(self, count: int, width: int, what: str) -> np.ndarray:
        rows = []
        for _ in range(count):
            no, s = self.next(what)
            try:
                vals = [int(x) for x in s.split()]
            except ValueError:
                raise ParseError(no, f"non-integer entry in {what}") from None
            if len(vals) != width:
                raise ParseError(no, f"{what} row has {len(vals)} entries, expected {width}")
            rows.append(vals)
        return np.array(rows, dtype=np.int64).reshape(count, width)


def _int(no: int, s: str, what: str) -> int:
    try:
        return int(s)
    except ValueError:
        raise ParseError(no, f"{what} must be an integer, got {s!r}") from None


# --------------------------------------------------------------------------
# groups

_INTERNED: dict[bytes, FiniteGroup] = {}


def _intern_table(table: np.ndarray, name: str = "") -> FiniteGroup:
    """One group object per multiplication table (needed for identity checks)."""
    table = np.ascontiguousarray(table, dtype=np.int64)
    key = table.tobytes() + str(table.shape).encode()
    G = _INTERNED.get(key)
    if G is None:
        G = from_table(table, name=name)
        _INTERNED[key] = G
    return G


def parse_group_text(text: str) -> FiniteGroup:
    L = _Lines(text)
    no, s = L.next("'group'")
    if s != "group":
        raise ParseError(no, f"expected 'group', got {s!r}")
    no, s = L.next("gens:, table: or named:")
    key, _, rest = s.partition(":")
    key = key.strip()
    try:
        if key == "named":
            G = catalog_group(rest.strip())
        elif key == "gens":
            perms = [parse_cycles(g) for g in rest.split(";") if g.strip()]
            if not perms:
                raise ParseError(no, "no generators given")
            deg = max(len(p) for p in perms)
            perms = [tuple(p) + tuple(range(len(p), deg)) for p in perms]
            G = from_permutations(perms)
        elif key == "table":
            rows = []
            while not L.done():
                rno, r = L.next("table row")
                try:
                    rows.append([int(x) for x in r.split()])
                except ValueError:
                    raise ParseError(rno, "non-integer entry in table") from None
            n = len(rows)
            if n == 0 or any(len(r) != n for r in rows):
                raise ParseError(no, "table must be square and nonempty")
            G = _intern_table(np.array(rows))
        else:
            raise ParseError(no, f"unknown group description {key!r}")
    except GroupError as exc:
        raise ParseError(no, str(exc)) from None
    if not L.done():
        raise ParseError(L.peek()[0], "trailing content after group description")
    return G


def format_group_text(G: FiniteGroup) -> str:
    if G.name in CATALOG_NAMES and catalog_group(G.name) is G:
        return f"group\nnamed: {G.name}\n"
    rows = "\n".join(" ".join(str(int(v)) for v in r) for r in G.table)
    return f"group\ntable:\n{rows}\n"


def load_group(ref: str, base_dir: str = ".") -> FiniteGroup:
    """A catalog name or a path to a group file."""
    path = ref if os.path.isabs(ref) else os.path.join(base_dir, ref)
    if os.path.exists(path):
        with open(path) as fh:
            return parse_group_text(fh.read())
    try:
        return catalog_group(ref)
    except GroupError:
        raise GroupError(f"{ref!r} is neither a group file nor a catalog name") from None


# --------------------------------------------------------------------------
# shared header

def _read_field(L: _Lines) -> GF:
    no, args = L.keyword("field")
    if len(args) not in (1, 2):
        raise ParseError(no, "field takes 'p m'")
    p = _int(no, args[0], "p")
    m = _int(no, args[1], "m") if len(args) == 2 else 1
    try:
        return make_field(p, m)
    except ValueError as exc:
        raise ParseError(no, str(exc)) from None


def _read_group(L: _Lines, base_dir: str) -> FiniteGroup:
    no, args = L.keyword("group")
    if not args:
        raise ParseError(no, "group needs a reference")
    if args[0] == "table":
        if len(args) != 2:
            raise ParseError(no, "expected 'group table n'")
        n = _int(no, args[1], "group order")
        T = L.int_rows(n, n, "group table")
        try:
            return _intern_table(T)
        except GroupError as exc:
            raise ParseError(no, str(exc)) from None
    try:
        return load_group(args[0], base_dir)
    except (GroupError, ValueError) as exc:
        raise ParseError(no, str(exc)) from None


def _group_ref(G: FiniteGroup) -> str:
    if G.name in CATALOG_NAMES and catalog_group(G.name) is G:
        return f"group {G.name}\n"
    rows = "\n".join(" ".join(str(int(v)) for v in r) for r in G.table)
    return f"group table {G.order}\n{rows}\n"


def _rows(M) -> str:
    return "\n".join(" ".join(str(int(v)) for v in r) for r in np.atleast_2d(M)) + "\n"


def _check_codes(F: GF, arr: np.ndarray, no: int, what: str):
    if arr.size and (arr.min() < 0 or arr.max() >= F.q):
        raise ParseError(no, f"{what} entries must be field codes in 0..{F.q - 1}")


# --------------------------------------------------------------------------
# spaces

def parse_space(text: str, base_dir: str = ".") -> EquivariantSpace:
    L = _Lines(text)
    F = _read_field(L)
    no, args = L.keyword("epsilon")
    eps = _int(no, args[0] if args else "", "epsilon")
    if eps not in (1, -1):
        raise ParseError(no, "epsilon must be 1 or -1")
    G = _read_group(L, base_dir)
    no, args = L.keyword("dim")
    d = _int(no, args[0] if args else "", "dim")
    gno, _ = L.keyword("gram")
    gram = L.int_rows(d, d, "gram")
    _check_codes(F, gram, gno, "gram")
    images = {}
    while not L.done():
        no, args = L.keyword("rep")
        g = _int(no, args[0] if args else "", "element index")
        if not 0 <= g < G.order:
            raise ParseError(no, f"element index {g} out of range")
        M = L.int_rows(d, d, "rep")
        _check_codes(F, M, no, "rep")
        images[g] = M
    try:
        mod = ModuleRep.from_generators(F, G, images) if images else _trivial_rep(F, G, d)
        return EquivariantSpace(F, G, eps, gram, mod.rep)
    except ValueError as exc:
        raise ParseError(gno, str(exc)) from None


def _trivial_rep(F: GF, G: FiniteGroup, d: int) -> ModuleRep:
    rep = np.broadcast_to(np.eye(d, dtype=np.int64), (G.order, d, d)).copy()
    return ModuleRep(F, G, rep)


def format_space(X: EquivariantSpace) -> str:
    F = X.field
    out = [f"field {F.p} {F.m}\n", f"epsilon {X.epsilon}\n", _group_ref(X.group),
           f"dim {X.dim}\n", "gram\n", _rows(X.gram) if X.dim else ""]
    for s in X.group.generators:
        out.append(f"rep {s}\n")
        out.append(_rows(X.rep[s]) if X.dim else "")
    return "".join(out)


def spaces_equal(X: EquivariantSpace, Y: EquivariantSpace) -> bool:
    return (X.field is Y.field and X.epsilon == Y.epsilon and X.group is Y.group
            and np.array_equal(X.gram, Y.gram) and np.array_equal(X.rep, Y.rep))


def space_json(X: EquivariantSpace) -> dict:
    return {"field": [X.field.p, X.field.m], "epsilon": X.epsilon, "group": X.group.name or None,
            "group_order": X.group.order, "dim": X.dim, "gram": X.gram,
            "rep": {str(s): X.rep[s] for s in X.group.generators}}


# --------------------------------------------------------------------------
# algebras

def parse_algebra(text: str) -> Algebra:
    L = _Lines(text)
    F = _read_field(L)
    no, args = L.keyword("dim")
    n = _int(no, args[0] if args else "", "dim")
    sno, _ = L.keyword("struct")
    struct = L.int_rows(n * n, n, "struct").reshape(n, n, n)
    _check_codes(F, struct, sno, "struct")
    uno, args = L.keyword("unit")
    if len(args) != n:
        raise ParseError(uno, f"unit needs {n} entries")
    unit = np.array([_int(uno, a, "unit entry") for a in args], dtype=np.int64)
    gno, _ = L.keyword("sigma")
    sigma = L.int_rows(n, n, "sigma")
    _check_codes(F, sigma, gno, "sigma")
    name = ""
    if not L.done():
        no, args = L.keyword("name")
        name = " ".join(args)
    if not L.done():
        raise ParseError(L.peek()[0], "trailing content")
    try:
        return Algebra(F, struct, unit, sigma, name=name)
    except ValueError as exc:
        raise ParseError(sno, str(exc)) from None


def format_algebra(A: Algebra) -> str:
    F = A.field
    out = [f"field {F.p} {F.m}\n", f"dim {A.n}\n", "struct\n"]
    out += [_rows(A.struct[i]) for i in range(A.n)]
    out += ["unit " + " ".join(str(int(v)) for v in A.unit) + "\n", "sigma\n", _rows(A.sigma)]
    if A.name:
        out.append(f"name {A.name}\n")
    return "".join(out)


def algebras_equal(A: Algebra, B: Algebra) -> bool:
    return (A.field is B.field and np.array_equal(A.struct, B.struct)
            and np.array_equal(A.unit, B.unit) and np.array_equal(A.sigma, B.sigma))


# --------------------------------------------------------------------------
# real closed forms

def _quat(no: int, s: str) -> Quat:
    try:
        return Quat.of(*[Fraction(p) for p in s.split(",")])
    except (ValueError, ZeroDivisionError, TypeError):
        raise ParseError(no, f"bad scalar {s!r}") from None


def parse_exact_form(text: str) -> ExactForm:
    L = _Lines(text)
    no, args = L.keyword("case")
    if len(args) != 3:
        raise ParseError(no, "case takes '<ring> <involution> <eps>'")
    case = CaseDescriptor(args[0], args[1], _int(no, args[2], "epsilon"))
    dno, args = L.keyword("dim")
    n = _int(dno, args[0] if args else "", "dim")
    gno, _ = L.keyword("gram")
    rows = []
    for _ in range(n):
        rno, s = L.next("gram row")
        ents = s.split()
        if len(ents) != n:
            raise ParseError(rno, f"gram row has {len(ents)} entries, expected {n}")
        rows.append([_quat(rno, e) for e in ents])
    if not L.done():
        raise ParseError(L.peek()[0], "trailing content")
    try:
        return ExactForm(case, rows)
    except ValueError as exc:
        raise ParseError(gno, str(exc)) from None


def _quat_text(x: Quat) -> str:
    parts = list(x.parts())
    while len(parts) > 1 and parts[-1] == 0:
        parts.pop()
    return ",".join(str(p) for p in parts)


def format_exact_form(f: ExactForm) -> str:
    c = f.case
    out = [f"case {c.ring} {c.involution} {c.epsilon}\n", f"dim {f.dim}\n", "gram\n"]
    out += [" ".join(_quat_text(x) for x in r) + "\n" for r in f.gram]
    return "".join(out)
