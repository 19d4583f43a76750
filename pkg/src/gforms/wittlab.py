"""Seeded property suites for cancellation, odd division and descent theorems.

Each check draws instances from a deterministic generator, evaluates the
hypothesis of an implication and, when it holds (a nonvacuous instance),
asserts the conclusion.  Every isometry question is answered by both the
exhaustive and the structural backend; disagreement is reported as a
failure.  Instances whose exhaustive search exceeds the budget are skipped
and counted, never passed.
"""
from __future__ import annotations

import configparser
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import forms as fo
from . import linalg as la
from .burnside import projection_suite, spec_connected
from .field import make_field
from .forms import EquivariantSpace, ModuleRep, UndecidedError
from .groups import (FiniteGroup, all_subgroups, catalog, catalog_group, coset_action,
                     is_solvable, normalizer, sylow2)
from .isometry import BackendDisagreement, is_isometric
from .report import CheckReport, timed

CHECK_KINDS = ("cancellation", "div_odd", "odd_extension", "ind_res_sylow", "hyperbolic_props")
CROSS_BUDGET = 1 << 20


# --------------------------------------------------------------------------
# serialization of instances (for failure witnesses)

def space_to_json(X: EquivariantSpace) -> dict:
    return {"field": [X.field.p, X.field.m], "group": X.group.name, "epsilon": X.epsilon,
            "gram": X.gram.tolist(),
            "rep": {str(s): X.rep[s].tolist() for s in X.group.generators}}


# --------------------------------------------------------------------------
# module and form sources

def sign_characters(G: FiniteGroup) -> list[np.ndarray]:
    """Indicator arrays of the index-2 subgroups (each gives a sign character)."""
    out = []
    for H in all_subgroups(G):
        if 2 * H.order == G.order:
            mask = np.zeros(G.order, dtype=bool)
            mask[list(H.elements)] = True
            out.append(mask)
    return out


@lru_cache(maxsize=None)
def small_modules(group_name: str, q: int, max_dim: int) -> tuple:
    """Trivial, sign and small permutation modules and their pairwise sums."""
    G = catalog_group(group_name)
    F = make_field(q)
    base = [fo.trivial_module(F, G)]
    for mask in sign_characters(G):
        rep = np.where(mask, 1, F.p - 1).astype(np.int64).reshape(-1, 1, 1)
        base.append(ModuleRep(F, G, rep))
    seen = set()
    for H in all_subgroups(G):
        idx = G.order // H.order
        if 1 < idx <= max_dim and H.elements not in seen:
            seen.add(H.elements)
            base.append(fo.permutation_module(coset_action(G, H), F))
    mods = [M for M in base if M.dim <= max_dim]
    for i, M in enumerate(base):
        for N in base[i:]:
            if M.dim + N.dim <= max_dim:
                mods.append(fo.direct_sum_modules(M, N))
    return tuple(mods)


def invariant_forms(M: ModuleRep, eps: int) -> np.ndarray:
    """Basis of the G-invariant eps-symmetric Gram matrices on M."""
    hit = M._cache.get(("forms", eps))
    if hit is not None:
        return hit
    F = M.field
    H = fo.hom_basis(M, M.dual)
    d = M.dim
    if H.shape[0] == 0:
        out = np.zeros((0, d, d), dtype=np.int64)
    else:
        sym = [F.add(B, F.mul(np.ascontiguousarray(B.T), eps % F.p)) for B in H]
        flat, _ = la.row_basis(F, np.array(sym).reshape(len(sym), -1), d * d)
        out = flat.reshape(-1, d, d)
    M._cache[("forms", eps)] = out
    return out


def random_space(M: ModuleRep, eps: int, rng: np.random.Generator, tries: int = 40):
    F = M.field
    basis = invariant_forms(M, eps)
    if basis.shape[0] == 0:
        return None
    for _ in range(tries):
        c = rng.integers(0, F.q, size=basis.shape[0])
        B = fo.combine(F, basis, c)
        if la.det(F, B) != 0:
            return fo.space_from_module(M, eps, B)
    return None


def conjugation_twist(X: EquivariantSpace, c: int) -> EquivariantSpace:
    """Same Gram, rep g -> rho(c g c^-1)."""
    G = X.group
    idx = np.array([G.conj(c, g) for g in range(G.order)], dtype=np.int64)
    return EquivariantSpace(X.field, G, X.epsilon, X.gram, X.rep[idx])


# --------------------------------------------------------------------------
# instance generation

@dataclass
class InstanceGenerator:
    seed: int
    fields: tuple = (3, 5)
    groups: tuple = ("C1", "C2", "S3")
    max_dim: int = 2
    strategies: tuple = ("scalar", "nonsquare", "random_gram", "conjugation")
    rng: np.random.Generator = field(init=False, repr=False)

    def __post_init__(self):
        self.rng = np.random.default_rng(self.seed)

    def choice(self, seq):
        return seq[int(self.rng.integers(len(seq)))]

    def space(self, group: str, q: int, eps: int, max_dim: int | None = None):
        mods = [M for M in small_modules(group, q, max_dim or self.max_dim)]
        for _ in range(20):
            X = random_space(self.choice(mods), eps, self.rng)
            if X is not None:
                return X
        return None

    def twin(self, X: EquivariantSpace, strategy: str) -> EquivariantSpace:
        F = X.field
        if strategy == "scalar":
            lam = int(self.rng.integers(1, F.q))
            return fo.scale_form(X, lam)
        if strategy == "nonsquare":
            return fo.scale_form(X, F.nonsquare)
        if strategy == "random_gram":
            Y = random_space(X.module, X.epsilon, self.rng)
            return Y if Y is not None else X
        if strategy == "conjugation":
            return conjugation_twist(X, int(self.rng.integers(X.group.order)))
        raise ValueError(f"unknown strategy {strategy!r}")

    def pair(self, group: str, q: int, eps: int = 1, max_dim: int | None = None):
        X = self.space(group, q, eps, max_dim)
        if X is None:
            return None
        strat = self.choice(self.strategies)
        return X, self.twin(X, strat), strat

    def padding(self, X: EquivariantSpace, max_dim: int):
        """A space N for cancellation: hyperbolic padding or a random space."""
        if self.rng.integers(2) == 0:
            mods = [M for M in small_modules(X.group.name, X.field.q, max(1, max_dim // 2))]
            return fo.hyperbolic(self.choice(mods), X.epsilon), "hyperbolic"
        N = self.space(X.group.name, X.field.q, X.epsilon, max_dim)
        return (N, "random") if N is not None else (fo.hyperbolic(X.module, X.epsilon), "hyperbolic")

    def stream(self, kind: str, count: int):
        """Deterministic list of ``count`` pairs (X, X', strategy) for a group/field mix."""
        out = []
        while len(out) < count:
            p = self.pair(self.choice(self.groups), self.choice(self.fields))
            if p is not None:
                out.append(p)
        return out


# --------------------------------------------------------------------------
# decisions

class Skip(Exception):
    pass


def decide(X: EquivariantSpace, Y: EquivariantSpace, budget: int) -> bool:
    """Isometry verdict with both backends; Skip when over budget."""
    try:
        return is_isometric(X, Y, "both", budget).isometric
    except UndecidedError as exc:
        raise Skip(str(exc)) from exc


def _implication(rep: CheckReport, hyp, concl, witness):
    """Record one implication instance; returns whether it was nonvacuous."""
    try:
        h = hyp()
    except Skip:
        rep.attempted += 1
        rep.skipped += 1
        return False
    except BackendDisagreement as exc:
        rep.record(False, dict(witness(), error=str(exc), stage="hypothesis"))
        return True
    if not h:
        rep.record(True, nonvacuous=False)
        return False
    try:
        ok = concl()
    except Skip:
        rep.attempted += 1
        rep.skipped += 1
        return False
    except BackendDisagreement as exc:
        rep.record(False, dict(witness(), error=str(exc), stage="conclusion"))
        return True
    rep.record(bool(ok), dict(witness(), stage="conclusion"))
    return True


def _tally(rep: CheckReport, key: str):
    st = rep.data.setdefault("strategies", {})
    st[key] = st.get(key, 0) + 1


# --------------------------------------------------------------------------
# checks

def check_cancellation(params: dict) -> CheckReport:
    """X + N = X' + N  implies  X = X'."""
    seed = int(params.get("seed", 42))
    target = int(params.get("target", 200))
    max_attempts = int(params.get("max_attempts", 4 * target))
    budget = int(params.get("budget", CROSS_BUDGET))
    mutation = bool(params.get("mutation", False))
    gen = InstanceGenerator(seed, tuple(params.get("fields", (3, 5))),
                            tuple(params.get("groups", ("C1", "C2", "S3"))), int(params.get("max_dim", 2)))
    rep = CheckReport("cancellation", {"seed": seed, "target": target, "mutation": mutation})
    with timed(rep):
        while rep.nonvacuous < target and rep.attempted < max_attempts:
            p = gen.pair(gen.choice(gen.groups), gen.choice(gen.fields), int(gen.choice((1, 1, 1, -1))))
            if p is None:
                continue
            X, Xp, strat = p
            N, pad = gen.padding(X, 2)
            Xc = fo.scale_form(Xp, X.field.nonsquare) if mutation else Xp
            _tally(rep, f"{strat}/{pad}")
            _implication(
                rep,
                lambda: decide(fo.orthogonal_sum(X, N), fo.orthogonal_sum(Xp, N), budget),
                lambda: decide(X, Xc, budget),
                lambda: {"X": space_to_json(X), "X'": space_to_json(Xc), "N": space_to_json(N),
                         "strategy": strat})
    return rep


def check_div_odd(params: dict) -> CheckReport:
    """n X = n X'  implies  X = X'  (n odd)."""
    seed = int(params.get("seed", 42))
    n = int(params.get("n", 3))
    if n % 2 == 0 and not params.get("allow_even", False):
        raise ValueError("div_odd needs odd n (even n only as the documented demonstration)")
    target = int(params.get("target", 100))
    max_attempts = int(params.get("max_attempts", 5 * target))
    budget = int(params.get("budget", CROSS_BUDGET))
    fields = tuple(params.get("fields", (3, 5) if n <= 3 else (3,)))
    gen = InstanceGenerator(seed, fields, tuple(params.get("groups", ("C1", "C2", "S3"))),
                            int(params.get("max_dim", 1)))
    rep = CheckReport("div_odd", {"seed": seed, "n": n, "target": target})
    with timed(rep):
        while rep.nonvacuous < target and rep.attempted < max_attempts:
            p = gen.pair(gen.choice(gen.groups), gen.choice(gen.fields))
            if p is None:
                continue
            X, Xp, strat = p
            _tally(rep, strat)
            _implication(rep,
                         lambda: decide(fo.n_fold(X, n), fo.n_fold(Xp, n), budget),
                         lambda: decide(X, Xp, budget),
                         lambda: {"X": space_to_json(X), "X'": space_to_json(Xp), "n": n,
                                  "strategy": strat})
    return rep


def check_odd_extension(params: dict) -> CheckReport:
    """X, X' isometric over an odd degree extension  implies  isometric."""
    seed = int(params.get("seed", 42))
    m = int(params.get("m", 3))
    target = int(params.get("target", 100))
    max_attempts = int(params.get("max_attempts", 4 * target))
    budget = int(params.get("budget", CROSS_BUDGET))
    gen = InstanceGenerator(seed, tuple(params.get("fields", (3, 5))),
                            tuple(params.get("groups", ("C1", "C2", "S3"))), int(params.get("max_dim", 2)))
    rep = CheckReport("odd_extension", {"seed": seed, "m": m, "target": target})
    with timed(rep):
        while rep.nonvacuous < target and rep.attempted < max_attempts:
            p = gen.pair(gen.choice(gen.groups), gen.choice(gen.fields))
            if p is None:
                continue
            X, Xp, strat = p
            _tally(rep, strat)
            _implication(rep,
                         lambda: decide(fo.extend_scalars(X, m), fo.extend_scalars(Xp, m), budget),
                         lambda: decide(X, Xp, budget),
                         lambda: {"X": space_to_json(X), "X'": space_to_json(Xp), "m": m,
                                  "strategy": strat})
    return rep


def check_ind_res_sylow(params: dict) -> CheckReport:
    """Res Ind X1 = Res Ind X2 over S  implies  Ind X1 = Ind X2 over G (S a 2-Sylow)."""
    seed = int(params.get("seed", 42))
    gname = params.get("group", "S3")
    target = int(params.get("target", 25))
    max_attempts = int(params.get("max_attempts", 6 * target))
    budget = int(params.get("budget", CROSS_BUDGET))
    fields = tuple(params.get("fields", (3, 5)))
    G = catalog_group(gname)
    S = sylow2(G)
    SG = S.as_group
    Nz = normalizer(G, S)
    max_dim = int(params.get("max_dim", 2 if G.order <= 12 else 1))
    gen = InstanceGenerator(seed, fields, (SG.name,), max_dim)
    rep = CheckReport("ind_res_sylow", {"seed": seed, "group": gname, "subgroup_order": S.order,
                                        "target": target})
    with timed(rep):
        while rep.nonvacuous < target and rep.attempted < max_attempts:
            q = gen.choice(fields)
            X1 = _subgroup_space(gen, SG, q, max_dim)
            if X1 is None:
                continue
            strat = gen.choice(("scalar", "nonsquare", "random_gram", "conjugation"))
            if strat == "conjugation":
                c = int(Nz.elements[int(gen.rng.integers(Nz.order))])
                X2 = _normalizer_twist(X1, S, c)
            else:
                X2 = gen.twin(X1, strat)
            _tally(rep, strat)
            I1, I2 = fo.induce_space(S, X1), fo.induce_space(S, X2)
            _implication(rep,
                         lambda: decide(fo.restrict_space(I1, S), fo.restrict_space(I2, S), budget),
                         lambda: decide(I1, I2, budget),
                         lambda: {"X1": space_to_json(X1), "X2": space_to_json(X2), "group": gname,
                                  "strategy": strat})
    return rep


def _subgroup_space(gen: InstanceGenerator, SG: FiniteGroup, q: int, max_dim: int):
    """A random space over the abstract subgroup group SG (modules built on the fly)."""
    F = make_field(q)
    mods = [fo.trivial_module(F, SG)]
    for mask in sign_characters(SG):
        mods.append(ModuleRep(F, SG, np.where(mask, 1, F.p - 1).astype(np.int64).reshape(-1, 1, 1)))
    if max_dim >= 2:
        mods += [fo.direct_sum_modules(a, b) for a in mods[:3] for b in mods[:3]]
    for _ in range(20):
        X = random_space(gen.choice(mods), 1, gen.rng)
        if X is not None:
            return X
    return None


def _normalizer_twist(X: EquivariantSpace, S, c: int) -> EquivariantSpace:
    """Twist a space over S by conjugation with c in N_G(S)."""
    G = S.parent
    SG = S.as_group
    pos = {g: i for i, g in enumerate(S.elements)}
    idx = np.array([pos[G.conj(c, g)] for g in S.elements], dtype=np.int64)
    return EquivariantSpace(X.field, SG, X.epsilon, X.gram, X.rep[idx])


def check_hyperbolic_props(params: dict) -> CheckReport:
    """Hyperbolic space identities and the module criterion for isometry of hyperbolics."""
    seed = int(params.get("seed", 42))
    target = int(params.get("target", 50))
    max_attempts = int(params.get("max_attempts", 4 * target))
    budget = int(params.get("budget", CROSS_BUDGET))
    gen = InstanceGenerator(seed, tuple(params.get("fields", (3, 5))),
                            tuple(params.get("groups", ("C1", "C2", "S3"))), 2)
    rep = CheckReport("hyperbolic_props", {"seed": seed, "target": target})
    counts = rep.data.setdefault("identities", {})

    def unconditional(name, X, Y):
        counts[name] = counts.get(name, 0) + 1
        _implication(rep, lambda: True, lambda: decide(X, Y, budget),
                     lambda: {"identity": name, "X": space_to_json(X), "Y": space_to_json(Y)})

    with timed(rep):
        while rep.nonvacuous < target and rep.attempted < max_attempts:
            gname, q = gen.choice(gen.groups), gen.choice(gen.fields)
            eps = int(gen.choice((1, -1)))
            mods = small_modules(gname, q, 2)
            N = gen.choice(mods)
            unconditional("H(N) = H(N*)", fo.hyperbolic(N, eps), fo.hyperbolic(N.dual, eps))
            if N.dim == 1:
                unconditional("H(N + N*) = 2 H(N)", fo.hyperbolic(fo.direct_sum_modules(N, N.dual), eps),
                              fo.n_fold(fo.hyperbolic(N, eps), 2))
            X = gen.space(gname, q, eps, 2)
            if X is not None:
                unconditional("X + (-X) = H(M)", fo.orthogonal_sum(X, fo.negate(X)),
                              fo.hyperbolic(X.module, eps))
            Np = gen.choice([M for M in mods if M.dim == N.dim])
            counts["module criterion"] = counts.get("module criterion", 0) + 1
            _implication(
                rep,
                lambda: fo.module_isomorphism(fo.direct_sum_modules(N, N.dual),
                                              fo.direct_sum_modules(Np, Np.dual)) is not None,
                lambda: decide(fo.hyperbolic(N, eps), fo.hyperbolic(Np, eps), budget),
                lambda: {"identity": "module criterion", "N": N.rep.tolist(), "N'": Np.rep.tolist()})
    return rep


def run_check(kind: str, params: dict | None = None) -> CheckReport:
    params = dict(params or {})
    fn = {"cancellation": check_cancellation, "div_odd": check_div_odd,
          "odd_extension": check_odd_extension, "ind_res_sylow": check_ind_res_sylow,
          "hyperbolic_props": check_hyperbolic_props}.get(kind)
    if fn is None:
        raise ValueError(f"unknown check kind {kind!r}")
    return fn(params)


# --------------------------------------------------------------------------
# suites

@dataclass
class SuiteConfig:
    seeds: tuple = (42,)
    budget: int = CROSS_BUDGET
    catalog_max_order: int = 60
    minimums: dict = field(default_factory=lambda: {
        "cancellation": 200, "div_odd": 100, "odd_extension": 100,
        "ind_res_sylow": 25, "hyperbolic_props": 50})
    div_n: tuple = (3, 5)
    ind_res_groups: tuple = ("S3", "S4")
    checks: tuple = CHECK_KINDS
    burnside: bool = True

    def to_json(self) -> dict:
        return {"seeds": list(self.seeds), "budget": self.budget,
                "catalog_max_order": self.catalog_max_order, "minimums": dict(self.minimums),
                "div_n": list(self.div_n), "ind_res_groups": list(self.ind_res_groups),
                "checks": list(self.checks), "burnside": self.burnside}


def _ints(s: str) -> tuple:
    return tuple(int(x) for x in s.replace(",", " ").split())


def load_config(text: str) -> SuiteConfig:
    """Parse a suite.config file (INI sections [suite] and [minimums])."""
    cp = configparser.ConfigParser()
    cp.read_string(text)
    cfg = SuiteConfig()
    if cp.has_section("suite"):
        s = cp["suite"]
        if "seeds" in s:
            cfg.seeds = _ints(s["seeds"])
        if "budget" in s:
            cfg.budget = int(s["budget"])
        if "catalog_max_order" in s:
            cfg.catalog_max_order = int(s["catalog_max_order"])
        if "div_n" in s:
            cfg.div_n = _ints(s["div_n"])
        if "ind_res_groups" in s:
            cfg.ind_res_groups = tuple(s["ind_res_groups"].replace(",", " ").split())
        if "checks" in s:
            cfg.checks = tuple(s["checks"].replace(",", " ").split())
        if "burnside" in s:
            cfg.burnside = s.getboolean("burnside")
    if cp.has_section("minimums"):
        for k, v in cp["minimums"].items():
            cfg.minimums[k] = int(v)
    for k in cfg.checks:
        if k not in CHECK_KINDS:
            raise ValueError(f"unknown check kind {k!r} in config")
    return cfg


def _minimum_gate(rep: CheckReport, minimum: int):
    rep.data["minimum_nonvacuous"] = minimum
    if rep.nonvacuous < minimum:
        rep.failures.append({"error": f"only {rep.nonvacuous} nonvacuous instances, need {minimum}"})


def run_seed(cfg: SuiteConfig, seed: int) -> list[CheckReport]:
    out = []
    mins = cfg.minimums
    for kind in cfg.checks:
        if kind == "div_odd":
            for n in cfg.div_n:
                r = run_check(kind, {"seed": seed, "n": n, "target": mins["div_odd"], "budget": cfg.budget})
                _minimum_gate(r, mins["div_odd"])
                out.append(r)
        elif kind == "ind_res_sylow":
            for g in cfg.ind_res_groups:
                r = run_check(kind, {"seed": seed, "group": g, "target": mins["ind_res_sylow"],
                                     "budget": cfg.budget})
                _minimum_gate(r, mins["ind_res_sylow"])
                out.append(r)
        else:
            r = run_check(kind, {"seed": seed, "target": mins[kind], "budget": cfg.budget})
            _minimum_gate(r, mins[kind])
            out.append(r)
    return out


def burnside_reports(max_order: int) -> list[CheckReport]:
    out = []
    groups = catalog(max_order)
    for G in groups:
        out.append(projection_suite(G))
    rep = CheckReport("spec_connected", {"catalog_max_order": max_order})
    with timed(rep):
        for G in groups:
            conn, idem = spec_connected(G)
            rep.record(conn == is_solvable(G), {"group": G.name, "connected": conn})
            if idem is not None:
                rep.data.setdefault("idempotents", {})[G.name] = list(idem.coeffs)
    out.append(rep)
    return out


def run_suite(cfg: SuiteConfig | None = None) -> list[CheckReport]:
    cfg = cfg or SuiteConfig()
    out = []
    for seed in cfg.seeds:
        out += run_seed(cfg, seed)
    if cfg.burnside and cfg.catalog_max_order > 0:
        out += burnside_reports(cfg.catalog_max_order)
    return out
