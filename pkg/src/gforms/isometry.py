"""Isometry decision for G-equivariant forms.

Two backends:

* ``exhaustive``: depth-first search over Hom_G(M_X, M_Y) for an invertible
  phi with phi^T B_Y phi = B_X (see :func:`gforms.kernels.isometry_search`).
* ``structural``: find a module isomorphism phi, transport B_Y to
  B' = phi^T B_Y phi on M_X, and decide whether u = B_X^-1 B' is equivalent
  to 1 as a symmetric element of (End_G(M_X), tau) with
  tau(e) = B_X^-1 e^T B_X.  X and Y are isometric exactly when it is.

``both`` runs the two and raises :class:`BackendDisagreement` on conflict.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import linalg as la
from .forms import (DEFAULT_BUDGET, EquivariantSpace, FormError, UndecidedError,
                    hom_basis, module_isomorphism)
from .hermitian import element_coords, endomorphism_algebra, same_class
from .kernels import isometry_search


class BackendDisagreement(AssertionError):
    pass


@dataclass
class IsometryVerdict:
    isometric: bool
    witness: np.ndarray | None
    backend: str
    rung: int | None = None
    details: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        out = {"isometric": self.isometric, "backend": self.backend,
               "witness": None if self.witness is None else [[int(v) for v in r] for r in self.witness]}
        if self.rung is not None:
            out["rung"] = self.rung
        return out


def _check_compatible(X: EquivariantSpace, Y: EquivariantSpace):
    if X.field is not Y.field or X.group is not Y.group or X.epsilon != Y.epsilon:
        raise FormError("spaces differ in field, group or epsilon")


def is_witness(X: EquivariantSpace, Y: EquivariantSpace, phi) -> bool:
    """phi: M_X -> M_Y equivariant, invertible, with phi^T B_Y phi = B_X."""
    F = X.field
    phi = np.asarray(phi, dtype=np.int64)
    if phi.shape != (Y.dim, X.dim) or not la.is_invertible(F, phi):
        return False
    if not np.array_equal(la.matmul_chain(F, phi.T, Y.gram, phi), X.gram):
        return False
    for s in X.group.generators:
        if not np.array_equal(la.matmul(F, phi, X.rep[s]), la.matmul(F, Y.rep[s], phi)):
            return False
    return True


def exhaustive_isometric(X: EquivariantSpace, Y: EquivariantSpace, budget: int = DEFAULT_BUDGET,
                         impl=None) -> IsometryVerdict:
    _check_compatible(X, Y)
    if X.dim != Y.dim:
        return IsometryVerdict(False, None, "exhaustive", details={"reason": "dimension"})
    H = hom_basis(X.module, Y.module)
    status, phi, visited = isometry_search(X.field, H, X.gram, Y.gram, budget, impl)
    if status < 0:
        raise UndecidedError(f"isometry search exceeded budget {budget} (hom dimension {H.shape[0]})")
    if status == 1 and not is_witness(X, Y, phi):  # pragma: no cover
        raise AssertionError("search returned an invalid witness")
    return IsometryVerdict(status == 1, phi, "exhaustive",
                           details={"hom_dim": int(H.shape[0]), "visited": int(visited)})


def structural_isometric(X: EquivariantSpace, Y: EquivariantSpace, budget: int = DEFAULT_BUDGET,
                         method: str = "meataxe") -> IsometryVerdict:
    _check_compatible(X, Y)
    F = X.field
    if X.dim != Y.dim:
        return IsometryVerdict(False, None, "structural", 0, {"reason": "dimension"})
    phi = module_isomorphism(X.module, Y.module, budget)
    if phi is None:
        return IsometryVerdict(False, None, "structural", 0, {"reason": "modules differ"})
    Bp = la.matmul_chain(F, phi.T, Y.gram, phi)
    u = la.matmul(F, X.gram_inverse, Bp)
    E = endomorphism_algebra(X)
    uc = element_coords(E, u)
    # u is tau-symmetric for either sign of epsilon, so the question is always
    # about +1-hermitian elements
    dec = same_class(E, 1, E.unit, uc, budget, method)
    witness = phi if dec.same and np.array_equal(uc, E.unit) else None
    return IsometryVerdict(dec.same, witness, "structural", dec.rung,
                           dict(dec.details, endo_dim=E.n))


def is_isometric(X: EquivariantSpace, Y: EquivariantSpace, backend: str = "both",
                 budget: int = DEFAULT_BUDGET, impl=None) -> IsometryVerdict:
    if backend == "exhaustive":
        return exhaustive_isometric(X, Y, budget, impl)
    if backend == "structural":
        return structural_isometric(X, Y, budget)
    if backend != "both":
        raise ValueError(f"unknown backend {backend!r}")
    ex = exhaustive_isometric(X, Y, budget, impl)
    st = structural_isometric(X, Y, budget)
    if ex.isometric != st.isometric:
        raise BackendDisagreement(f"exhaustive says {ex.isometric}, structural says {st.isometric}")
    return IsometryVerdict(ex.isometric, ex.witness, "both", st.rung,
                           {"exhaustive": ex.details, "structural": st.details})
