"""Command-line interface: ``gforms <area> <command> ...``.

Exit status: 0 on success or pass, 1 on a check failure or an undecided
(over budget) question, 2 on usage or input errors.
"""
from __future__ import annotations

import argparse
import os
import sys

import numpy as np

from . import burnside as bn
from . import forms as fo
from . import groups as gr
from . import hermitian as he
from . import io
from . import realclosed as rc
from . import wittlab as wl
from .field import FieldError, make_field
from .forms import DEFAULT_BUDGET, EquivariantSpace, FormError, UndecidedError
from .galois import galois_algebra, sdnb_search, trace_form
from .isometry import BackendDisagreement, is_isometric


class UsageError(ValueError):
    pass


class Output:
    """What a command produced: a JSON-able payload or raw file text."""

    def __init__(self, payload=None, text: str | None = None, csv: str | None = None,
                 failed: bool = False):
        self.payload = payload
        self.text = text
        self.csv = csv
        self.failed = failed


# --------------------------------------------------------------------------
# argument helpers

def _read(path: str) -> str:
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def load_space(path: str) -> EquivariantSpace:
    return io.parse_space(_read(path), os.path.dirname(path) or ".")


def load_group_arg(ref: str) -> gr.FiniteGroup:
    try:
        return io.load_group(ref)
    except gr.GroupError as exc:
        raise UsageError(str(exc)) from None


def parse_field(text: str):
    """``5``, ``9`` (prime power) or ``3^2``."""
    try:
        if "^" in text:
            p, m = (int(x) for x in text.split("^"))
            return make_field(p, m)
        q = int(text)
    except ValueError:
        raise UsageError(f"bad field {text!r}") from None
    for p in range(3, q + 1, 2):
        if q % p == 0:
            m, r = 0, q
            while r % p == 0:
                r //= p
                m += 1
            if r != 1:
                break
            return make_field(p, m)
    raise UsageError(f"{text!r} is not an odd prime power")


def resolve_subgroup(G: gr.FiniteGroup, ref: str) -> gr.SubgroupRef:
    """``sylow2``, ``trivial``, ``whole``, ``class:<i>`` or ``elems:<i,j,...>``."""
    if ref == "sylow2":
        return gr.sylow2(G)
    if ref == "trivial":
        return gr.trivial_subgroup(G)
    if ref == "whole":
        return gr.whole_group(G)
    kind, _, arg = ref.partition(":")
    try:
        if kind == "class":
            return gr.subgroup_classes(G)[int(arg)].representative
        if kind == "elems":
            return gr.make_subgroup(G, [int(x) for x in arg.split(",")])
    except (ValueError, IndexError, gr.GroupError) as exc:
        raise UsageError(f"bad subgroup {ref!r}: {exc}") from None
    raise UsageError(f"unknown subgroup reference {ref!r}")


def resolve_gset(G: gr.FiniteGroup, ref: str) -> gr.GSet:
    """``regular``, ``cosets:<subgroup ref>`` or a ``+``-joined disjoint union."""
    parts = ref.split("+")
    out = None
    for part in parts:
        part = part.strip()
        if part == "regular":
            X = gr.regular_gset(G)
        elif part.startswith("cosets:"):
            X = gr.coset_action(G, resolve_subgroup(G, part[len("cosets:"):]))
        else:
            raise UsageError(f"unknown G-set {part!r}")
        out = X if out is None else out.disjoint_union(X)
    return out


def burnside_element(G: gr.FiniteGroup, ref: str) -> bn.BurnsideElement:
    if ref.startswith("coeffs:"):
        try:
            return bn.burnside_ring(G).element([int(x) for x in ref[len("coeffs:"):].split(",")])
        except ValueError as exc:
            raise UsageError(str(exc)) from None
    if ref == "one":
        return bn.burnside_ring(G).one()
    return bn.decompose_gset(resolve_gset(G, ref))


def parse_matrix(text: str) -> np.ndarray:
    """``1,0;0,2`` -> [[1, 0], [0, 2]]."""
    try:
        rows = [[int(x) for x in r.split(",")] for r in text.split(";")]
    except ValueError:
        raise UsageError(f"bad matrix {text!r}") from None
    if any(len(r) != len(rows[0]) for r in rows):
        raise UsageError("matrix rows differ in length")
    return np.array(rows, dtype=np.int64)


def parse_vector(text: str) -> np.ndarray:
    try:
        return np.array([int(x) for x in text.split(",")], dtype=np.int64)
    except ValueError:
        raise UsageError(f"bad vector {text!r}") from None


def rebase(X: EquivariantSpace, H: gr.FiniteGroup) -> EquivariantSpace:
    """Move a parsed space onto the group object H when the tables agree."""
    if X.group is H:
        return X
    if X.group.order != H.order or not np.array_equal(X.group.table, H.table):
        raise UsageError("space is not over the requested subgroup")
    return EquivariantSpace(X.field, H, X.epsilon, X.gram, X.rep)


def space_output(X: EquivariantSpace, fmt: str | None) -> Output:
    if fmt == "json":
        return Output(io.space_json(X))
    return Output(text=io.format_space(X))


# --------------------------------------------------------------------------
# group

def cmd_group_info(a) -> Output:
    G = load_group_arg(a.group)
    classes = G.conjugacy_classes()
    return Output({
        "name": G.name or None, "order": G.order, "abelian": G.is_abelian(),
        "solvable": gr.is_solvable(G), "generators": list(G.generators),
        "element_orders": [int(x) for x in G.element_orders],
        "class_sizes": [len(c) for c in classes],
        "class_representatives": [c[0] for c in classes],
        "labels": list(G.labels) if G.labels else None,
    })


def cmd_group_subgroups(a) -> Output:
    G = load_group_arg(a.group)
    table = gr.subgroup_classes(G)
    rows = []
    for i, c in enumerate(table):
        H = c.representative
        rows.append({"index": i, "order": c.order, "class_size": c.size,
                     "representative": list(H.elements), "normal": H.is_normal()})
    return Output({"group": G.name or None, "classes": rows})


# --------------------------------------------------------------------------
# burnside

def _element_for(a):
    G = load_group_arg(a.group)
    x = burnside_element(G, a.gset)
    if a.restrict_to:
        S = resolve_subgroup(G, a.restrict_to)
        x = bn.restrict(S, x)
    return x


def cmd_burnside_marks(a) -> Output:
    G = load_group_arg(a.group)
    ring = bn.burnside_ring(G)
    payload = {"group": G.name or None, "h": ring.h, "class_orders": [c.order for c in ring.classes],
               "marks": ring.marks}
    return Output(payload, csv=bn.mark_table_csv(G))


def cmd_burnside_spectral(a) -> Output:
    return Output(bn.spectral(_element_for(a)))


def cmd_burnside_divpoly(a) -> Output:
    x = _element_for(a)
    F, N = bn.division_polynomial(x)
    return Output({"n": N, "F": bn.to_string(F), "F_coeffs": list(F), "ghost": list(x.ghost())})


def cmd_burnside_project(a) -> Output:
    G = load_group_arg(a.group)
    S = resolve_subgroup(G, a.subgroup)
    rep = bn.projection_suite(G, S)
    return Output(rep, failed=not rep.passed)


def cmd_burnside_connected(a) -> Output:
    groups = gr.catalog(a.max_order) if a.catalog else [load_group_arg(a.group)]
    rows, failed = [], False
    for G in groups:
        conn, idem = bn.spec_connected(G)
        solv = gr.is_solvable(G)
        failed |= conn != solv
        rows.append({"group": G.name or None, "connected": conn, "solvable": solv,
                     "idempotent": None if idem is None else list(idem.coeffs)})
    return Output(rows, failed=failed)


# --------------------------------------------------------------------------
# forms

def cmd_forms_build(a) -> Output:
    G = load_group_arg(a.group)
    F = parse_field(a.field)
    if a.kind == "regular":
        X = fo.regular_form(G, F)
    elif a.kind == "permutation":
        X = fo.permutation_form(resolve_gset(G, a.gset or "regular"), F)
    elif a.kind == "diagonal":
        if not a.entries:
            raise UsageError("--entries is required for a diagonal form")
        X = fo.diagonal_form(F, [int(x) for x in a.entries.split(",")], G)
    elif a.kind == "gram":
        if not a.gram:
            raise UsageError("--gram is required")
        X = fo.plain_space(F, parse_matrix(a.gram), a.epsilon, G)
    elif a.kind == "hyperbolic":
        X = fo.hyperbolic(fo.trivial_module(F, G, a.rank), a.epsilon)
    else:  # pragma: no cover - argparse restricts choices
        raise UsageError(a.kind)
    return space_output(X, a.format)


def cmd_forms_sum(a) -> Output:
    spaces = [load_space(p) for p in a.spaces]
    X = spaces[0]
    for Y in spaces[1:]:
        X = fo.orthogonal_sum(X, Y)
    if a.times > 1:
        X = fo.n_fold(X, a.times)
    return space_output(X, a.format)


def cmd_forms_tensor(a) -> Output:
    return space_output(fo.tensor_scalar_form(parse_matrix(a.scalar), load_space(a.space)), a.format)


def cmd_forms_hyperbolic(a) -> Output:
    X = load_space(a.space)
    return space_output(fo.hyperbolic(X.module, a.epsilon if a.epsilon else X.epsilon), a.format)


def cmd_forms_induce(a) -> Output:
    G = load_group_arg(a.group)
    S = resolve_subgroup(G, a.subgroup)
    X = rebase(load_space(a.space), S.as_group)
    return space_output(fo.induce_space(S, X), a.format)


def cmd_forms_restrict(a) -> Output:
    X = load_space(a.space)
    S = resolve_subgroup(X.group, a.subgroup)
    return space_output(fo.restrict_space(X, S), a.format)


def cmd_forms_extend(a) -> Output:
    return space_output(fo.extend_scalars(load_space(a.space), a.degree), a.format)


def cmd_forms_transfer(a) -> Output:
    X = load_space(a.space)
    twist = a.twist
    if twist is None:
        twist, _ = fo.scharlau_section(X.field.p, X.field.m)
    Y = fo.scharlau_transfer(X, twist)
    if a.format == "json":
        return Output({"twist": twist, "space": io.space_json(Y)})
    return Output(text=io.format_space(Y))


def cmd_forms_isometric(a) -> Output:
    X, Y = load_space(a.a), load_space(a.b)
    Y = rebase(Y, X.group)
    v = is_isometric(X, Y, a.backend, a.budget)
    out = v.to_json()
    out["details"] = v.details
    if v.witness is not None:
        out["hash"] = io.verification_hash(io.space_json(X), io.space_json(Y), v.witness)
    return Output(out)


def cmd_forms_witt(a) -> Output:
    X = load_space(a.space)
    if X.epsilon != 1:
        raise UsageError("Witt invariants are computed for symmetric forms")
    r, d = fo.witt_class_plain(X.field, X.gram)
    return Output({"dim": X.dim, "rank_mod_2": r, "discriminant_class": d,
                   "group_order": X.group.order,
                   "note": None if X.group.order == 1 else "invariants of the underlying form"})


def cmd_forms_permform(a) -> Output:
    G = load_group_arg(a.group)
    return space_output(fo.permutation_form(resolve_gset(G, a.gset), parse_field(a.field)), a.format)


def cmd_forms_section(a) -> Output:
    t, gram = fo.scharlau_section(a.q, a.m)
    return Output({"q": a.q, "m": a.m, "twist": t, "gram": gram})


# --------------------------------------------------------------------------
# galois

def _galois(a):
    G = load_group_arg(a.group)
    classes = G.conjugacy_classes()
    if not 0 <= a.cls < len(classes):
        raise UsageError(f"class index out of range (0..{len(classes) - 1})")
    return galois_algebra(G, a.q, classes[a.cls][0])


def cmd_galois_build(a) -> Output:
    L = _galois(a)
    return Output({"group": L.group.name or None, "q": L.field.q, "frobenius": L.frobenius,
                   "degree": L.degree, "dim": L.dim, "coset_reps": list(L.coset_reps),
                   "valid": True, "struct": L.struct})


def cmd_galois_traceform(a) -> Output:
    return space_output(trace_form(_galois(a)), a.format)


def cmd_galois_sdnb(a) -> Output:
    L = _galois(a)
    x = sdnb_search(L, a.budget, a.backend)
    return Output({"exists": x is not None, "element": x,
                   "values": None if x is None else L.to_values(x)})


# --------------------------------------------------------------------------
# hermitian

def load_algebra_arg(path: str):
    """An algebra file, or a space file (giving its endomorphism algebra)."""
    text = _read(path)
    keys = [ln.split("#")[0].split()[0] for ln in text.splitlines() if ln.split("#")[0].strip()]
    if len(keys) > 1 and keys[1] == "epsilon":
        return he.endomorphism_algebra(io.parse_space(text, os.path.dirname(path) or "."))
    return io.parse_algebra(text)


def cmd_hermitian_endo(a) -> Output:
    E = he.endomorphism_algebra(load_space(a.space))
    if a.format == "json":
        return Output({"dim": E.n, "struct": E.struct, "unit": E.unit, "sigma": E.sigma})
    return Output(text=io.format_algebra(E))


def cmd_hermitian_classes(a) -> Output:
    E = load_algebra_arg(a.algebra)
    return Output(he.class_set_exhaustive(E, a.epsilon, a.budget))


def cmd_hermitian_reduce(a) -> Output:
    E = load_algebra_arg(a.algebra)
    red = he.reduce_mod_radical(E, a.method)
    return Output({"dim": E.n, "radical_dim": int(red.radical.shape[0]), "radical": red.radical,
                   "quotient_dim": red.quotient.n})


def cmd_hermitian_split(a) -> Output:
    E = load_algebra_arg(a.algebra)
    red = he.reduce_mod_radical(E, a.method)
    return Output({"quotient_dim": red.quotient.n,
                   "components": [c.to_json() for c in he.split_semisimple(red.quotient)]})


def cmd_hermitian_classify(a) -> Output:
    E = load_algebra_arg(a.algebra)
    red = he.reduce_mod_radical(E, a.method)
    cs = he.classify_classes_structural(red.quotient, a.epsilon)
    out = cs.to_json()
    if a.element:
        out["element_invariant"] = list(cs.invariant(red.proj(parse_vector(a.element))))
    return Output(out)


def cmd_hermitian_embed(a) -> Output:
    E = load_algebra_arg(a.algebra)
    if a.element:
        En, un = he.diagonal_embed(E, parse_vector(a.element), a.n)
    else:
        En, un = he.matrix_ring(E, a.n), None
    if a.format == "json":
        return Output({"dim": En.n, "element": un})
    return Output(text=io.format_algebra(En) + ("" if un is None else
                                               "# element " + " ".join(str(int(v)) for v in un) + "\n"))


# --------------------------------------------------------------------------
# real closed

def cmd_realclosed_classify(a) -> Output:
    f = io.parse_exact_form(_read(a.form))
    return Output(dict(rc.classify_case(f).to_json(), case=f.case.label(), dim=f.dim))


def cmd_realclosed_witt(a) -> Output:
    if a.form:
        f = io.parse_exact_form(_read(a.form))
        return Output({"case": f.case.label(), "witt": rc.witt_class_case(f),
                       "witt_group": rc.classify_case(f).witt_group})
    return Output([{"case": c.label(), "witt_group": rc.witt_group_of_case(c)} for c in rc.CASES])


# --------------------------------------------------------------------------
# suite

def _parse_params(items) -> dict:
    out = {}
    for it in items or []:
        k, sep, v = it.partition("=")
        if not sep:
            raise UsageError(f"parameter {it!r} must be key=value")
        if "," in v:
            out[k] = tuple(int(x) if x.lstrip("-").isdigit() else x for x in v.split(","))
        elif v.lstrip("-").isdigit():
            out[k] = int(v)
        elif v in ("true", "false"):
            out[k] = v == "true"
        else:
            out[k] = v
    return out


def cmd_suite_run(a) -> Output:
    params = _parse_params(a.param)
    params.setdefault("seed", a.seed if a.seed is not None else 42)
    if a.budget is not None:
        params.setdefault("budget", a.budget)
    try:
        rep = wl.run_check(a.check, params)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return Output(rep, failed=not rep.passed)


def cmd_suite_all(a) -> Output:
    cfg = wl.load_config(_read(a.config)) if a.config else wl.SuiteConfig()
    if a.seed is not None:
        cfg.seeds = (a.seed,)
    if a.budget is not None:
        cfg.budget = a.budget
    reports = wl.run_suite(cfg)
    return Output(reports, failed=any(not r.passed for r in reports))


# --------------------------------------------------------------------------
# rendering

def render_table(payload) -> str:
    data = io.to_plain(payload)
    if isinstance(data, list) and data and all(isinstance(r, dict) and "check" in r for r in data):
        lines = [f"{'check':<18} {'verdict':<7} {'nonvac':>7} {'tried':>7} {'skip':>5} params"]
        for r in data:
            lines.append(f"{r['check']:<18} {r['verdict']:<7} {r['nonvacuous']:>7} {r['attempted']:>7} "
                         f"{r['skipped']:>5} {io.canonical_json(r['params']).replace(chr(10), '')}")
        return "\n".join(lines) + "\n"
    if isinstance(data, dict):
        w = max((len(k) for k in data), default=0)
        return "".join(f"{k:<{w}}  {_cell(v)}\n" for k, v in sorted(data.items()))
    if isinstance(data, list):
        return "".join(_cell(v) + "\n" for v in data)
    return _cell(data) + "\n"


def _cell(v) -> str:
    if isinstance(v, list) and v and isinstance(v[0], list):
        return "\n    " + "\n    ".join(" ".join(str(x) for x in r) for r in v)
    if isinstance(v, (list, dict)):
        return io.canonical_json(v).replace("\n", "")
    return str(v)


def render_csv(out: Output) -> str:
    if out.csv is not None:
        return out.csv
    data = io.to_plain(out.payload)
    rows = data if isinstance(data, list) else [data]
    if rows and all(isinstance(r, dict) and "check" in r for r in rows):
        lines = ["check,verdict,attempted,nonvacuous,passes,skipped,failures"]
        for r in rows:
            lines.append(f"{r['check']},{r['verdict']},{r['attempted']},{r['nonvacuous']},"
                         f"{r['passes']},{r['skipped']},{len(r['failures'])}")
        return "\n".join(lines) + "\n"
    raise UsageError("csv output is available for mark tables and check reports")


def emit(out: Output, fmt: str | None, timing: bool = False) -> str:
    if out.text is not None and fmt != "json":
        return out.text
    if fmt == "table":
        return render_table(out.payload)
    if fmt == "csv":
        return render_csv(out)
    return io.canonical_json(out.payload, drop_keys=() if timing else ("runtime_ms",))


# --------------------------------------------------------------------------
# parser

def _global_options(p: argparse.ArgumentParser, suppress: bool):
    d = argparse.SUPPRESS if suppress else None
    p.add_argument("--seed", type=int, default=d, help="random seed")
    p.add_argument("--budget", type=int, default=d, help="search budget (visited candidates)")
    p.add_argument("--out", default=d, help="write output to this file")
    p.add_argument("--format", choices=("json", "table", "csv"), default=d, help="output format")
    p.add_argument("--timing", action="store_true", default=argparse.SUPPRESS if suppress else False,
                   help="keep runtimes in JSON output")


def build_parser() -> argparse.ArgumentParser:
    top = argparse.ArgumentParser(prog="gforms", description="Equivariant forms toolkit")
    _global_options(top, suppress=False)
    areas = top.add_subparsers(dest="area", required=True)

    def leaf(sub, name, fn, help_):
        p = sub.add_parser(name, help=help_)
        _global_options(p, suppress=True)
        p.set_defaults(fn=fn)
        return p

    # group
    g = areas.add_parser("group", help="finite groups").add_subparsers(dest="cmd", required=True)
    for name, fn, h in (("info", cmd_group_info, "orders, classes, generators"),
                        ("subgroups", cmd_group_subgroups, "subgroup conjugacy classes")):
        leaf(g, name, fn, h).add_argument("--group", required=True, help="catalog name or group file")

    # burnside
    b = areas.add_parser("burnside", help="Burnside rings").add_subparsers(dest="cmd", required=True)
    leaf(b, "marks", cmd_burnside_marks, "table of marks").add_argument("--group", required=True)
    for name, fn, h in (("spectral", cmd_burnside_spectral, "ghost vector and characteristic polynomial"),
                        ("divpoly", cmd_burnside_divpoly, "division polynomial x F(x) = N")):
        p = leaf(b, name, fn, h)
        p.add_argument("--group", required=True)
        p.add_argument("--gset", default="regular", help="regular, cosets:<subgroup>, one, coeffs:...")
        p.add_argument("--restrict-to", default=None, help="restrict the element to this subgroup")
    p = leaf(b, "project", cmd_burnside_project, "projection-formula identities")
    p.add_argument("--group", required=True)
    p.add_argument("--subgroup", default="sylow2")
    p = leaf(b, "connected", cmd_burnside_connected, "connectedness of the prime spectrum")
    p.add_argument("--group", default=None)
    p.add_argument("--catalog", action="store_true", help="run over the whole catalog")
    p.add_argument("--max-order", type=int, default=None)

    # forms
    f = areas.add_parser("forms", help="equivariant forms").add_subparsers(dest="cmd", required=True)
    p = leaf(f, "build", cmd_forms_build, "build a space")
    p.add_argument("--group", default="C1")
    p.add_argument("--field", required=True, help="q, or p^m")
    p.add_argument("--kind", choices=("regular", "permutation", "diagonal", "gram", "hyperbolic"),
                   default="diagonal")
    p.add_argument("--entries", default=None, help="diagonal entries, comma separated")
    p.add_argument("--gram", default=None, help="Gram matrix like 1,0;0,2 (trivial action)")
    p.add_argument("--gset", default=None)
    p.add_argument("--epsilon", type=int, choices=(1, -1), default=1)
    p.add_argument("--rank", type=int, default=1, help="rank of the hyperbolic space")
    p = leaf(f, "sum", cmd_forms_sum, "orthogonal sum")
    p.add_argument("spaces", nargs="+")
    p.add_argument("--times", type=int, default=1, help="n-fold multiple of the sum")
    p = leaf(f, "tensor", cmd_forms_tensor, "tensor with a plain symmetric form")
    p.add_argument("space")
    p.add_argument("--scalar", required=True, help="Gram matrix like 1,0;0,2")
    p = leaf(f, "hyperbolic", cmd_forms_hyperbolic, "hyperbolic space on the module of a space")
    p.add_argument("space")
    p.add_argument("--epsilon", type=int, choices=(1, -1), default=None)
    p = leaf(f, "induce", cmd_forms_induce, "induce from a subgroup")
    p.add_argument("space")
    p.add_argument("--group", required=True)
    p.add_argument("--subgroup", default="sylow2")
    p = leaf(f, "restrict", cmd_forms_restrict, "restrict to a subgroup")
    p.add_argument("space")
    p.add_argument("--subgroup", default="sylow2")
    p = leaf(f, "extend", cmd_forms_extend, "extend scalars")
    p.add_argument("space")
    p.add_argument("--degree", type=int, required=True)
    p = leaf(f, "transfer", cmd_forms_transfer, "transfer to the prime field")
    p.add_argument("space")
    p.add_argument("--twist", type=int, default=None, help="field code a of s(z) = Tr(a z)")
    p = leaf(f, "isometric", cmd_forms_isometric, "decide isometry")
    p.add_argument("a")
    p.add_argument("b")
    p.add_argument("--backend", choices=("both", "exhaustive", "structural"), default="both")
    p = leaf(f, "witt", cmd_forms_witt, "Witt invariants of a symmetric form")
    p.add_argument("space")
    p = leaf(f, "permform", cmd_forms_permform, "permutation form of a G-set")
    p.add_argument("--group", required=True)
    p.add_argument("--gset", default="regular")
    p.add_argument("--field", required=True)
    p = leaf(f, "section", cmd_forms_section, "twist whose trace form is Witt equivalent to <1>")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--m", type=int, required=True)

    # galois
    ga = areas.add_parser("galois", help="G-Galois algebras").add_subparsers(dest="cmd", required=True)
    for name, fn, h in (("build", cmd_galois_build, "build and validate"),
                        ("traceform", cmd_galois_traceform, "trace form as a space"),
                        ("sdnb", cmd_galois_sdnb, "self-dual normal basis")):
        p = leaf(ga, name, fn, h)
        p.add_argument("--group", required=True)
        p.add_argument("--q", type=int, required=True, help="prime base field size")
        p.add_argument("--class", dest="cls", type=int, default=0,
                       help="conjugacy class index of the Frobenius element")
        if name == "sdnb":
            p.add_argument("--backend", choices=("both", "exhaustive"), default="exhaustive")

    # hermitian
    h = areas.add_parser("hermitian", help="hermitian elements").add_subparsers(dest="cmd", required=True)
    leaf(h, "endo", cmd_hermitian_endo, "endomorphism algebra of a space").add_argument("space")
    for name, fn, hp in (("classes", cmd_hermitian_classes, "class set by enumeration"),
                         ("reduce", cmd_hermitian_reduce, "radical and quotient"),
                         ("split", cmd_hermitian_split, "simple components of the quotient"),
                         ("classify", cmd_hermitian_classify, "structural class count"),
                         ("embed", cmd_hermitian_embed, "matrix ring / diagonal embedding")):
        p = leaf(h, name, fn, hp)
        p.add_argument("algebra", help="algebra file or space file")
        if name in ("classes", "classify"):
            p.add_argument("--epsilon", type=int, choices=(1, -1), default=1)
        if name in ("reduce", "split", "classify"):
            p.add_argument("--method", choices=("meataxe", "scan"), default="meataxe")
        if name in ("classify", "embed"):
            p.add_argument("--element", default=None, help="coordinates, comma separated")
        if name == "embed":
            p.add_argument("--n", type=int, default=2)

    # real closed
    r = areas.add_parser("realclosed", help="forms over real closed fields").add_subparsers(
        dest="cmd", required=True)
    leaf(r, "classify", cmd_realclosed_classify, "classify a form").add_argument("form")
    leaf(r, "witt", cmd_realclosed_witt, "Witt groups of the ten cases").add_argument(
        "form", nargs="?", default=None)

    # suite
    s = areas.add_parser("suite", help="property suites").add_subparsers(dest="cmd", required=True)
    p = leaf(s, "run", cmd_suite_run, "run one check")
    p.add_argument("check", choices=wl.CHECK_KINDS)
    p.add_argument("--param", action="append", help="key=value (repeatable)")
    p = leaf(s, "all", cmd_suite_all, "run every check and the Burnside suites")
    p.add_argument("--config", default=None, help="suite.config file")
    return top


def main(argv=None) -> int:
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if a.budget is None and a.area != "suite":
        a.budget = DEFAULT_BUDGET
    try:
        out = a.fn(a)
        text = emit(out, a.format, a.timing)
    except (UsageError, io.ParseError, FieldError, gr.GroupError) as exc:
        print(f"gforms: error: {exc}", file=sys.stderr)
        return 2
    except UndecidedError as exc:
        print(f"gforms: undecided: {exc}", file=sys.stderr)
        return 1
    except BackendDisagreement as exc:
        print(f"gforms: backend disagreement: {exc}", file=sys.stderr)
        return 1
    except (FormError, bn.BurnsideError, ValueError) as exc:
        print(f"gforms: error: {exc}", file=sys.stderr)
        return 2
    if a.out:
        with open(a.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 1 if out.failed else 0


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
