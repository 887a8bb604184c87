"""Functional calculus: lifting PH functions to vector lattices.

The lift acts per coordinate: on R^m through the m coordinate columns, on
step functions through the columns of the common refinement.  Both element
kinds route every column through the same scalar evaluation, so embedding a
step tuple on a grid and lifting commute bitwise.
"""

import numpy as np

from . import convexsets
from .convexsets import feasible_point, set_from_json, set_to_json, support
from .errors import (
    DimensionMismatch,
    EmptyFamily,
    LatticeMismatch,
    NotOrdered,
    SaddleGap,
    SchemaError,
)
from .homog import (
    PHFunction,
    SublinearMap,
    SuperlinearMap,
    eval_family_detailed,
    map_from_json,
    map_to_json,
    sphere_grid,
)
from .lattice import RmElement, StepFunction, common_refinement

DEFAULT_TOL = 1e-9
SADDLE_TOL = 1e-6


def _columns(elements):
    """(kind, breakpoints_or_None, value matrix of shape (p, cols))."""
    elements = tuple(elements)
    if not elements:
        raise EmptyFamily("fc", "no lattice elements given")
    if all(isinstance(f, RmElement) for f in elements):
        dims = {f.m for f in elements}
        if len(dims) != 1:
            raise LatticeMismatch("fc", f"mixed R^m dimensions {sorted(dims)}")
        return "rm", None, np.vstack([f.coords for f in elements])
    if all(isinstance(f, StepFunction) for f in elements):
        bp, vals = common_refinement(elements)
        return "step", bp, vals
    raise LatticeMismatch("fc", "elements mix R^m and step functions")


def _wrap(kind, bp, vals):
    if kind == "rm":
        return RmElement(vals)
    return StepFunction(bp, vals)


def fc_sublinear(phi, elements):
    """Coordinatewise application of a sublinear map to a lattice tuple."""
    kind, bp, cols = _columns(elements)
    if cols.shape[0] != phi.dim:
        raise DimensionMismatch(
            "fc_sublinear", f"{cols.shape[0]} elements, map expects {phi.dim}"
        )
    out = np.array([support(phi.subdiff, cols[:, k]) for k in range(cols.shape[1])])
    return _wrap(kind, bp, out)


def fc_superlinear(psi, elements):
    """Coordinatewise application of a superlinear map to a lattice tuple."""
    kind, bp, cols = _columns(elements)
    if cols.shape[0] != psi.dim:
        raise DimensionMismatch(
            "fc_superlinear", f"{cols.shape[0]} elements, map expects {psi.dim}"
        )
    out = np.array([-support(psi.superdiff, -cols[:, k]) for k in range(cols.shape[1])])
    return _wrap(kind, bp, out)


def fc_semicontinuous(h, elements, tol=DEFAULT_TOL, side="auto"):
    """Lift a PH function through its representing family, per coordinate."""
    element, _ = fc_semicontinuous_detailed(h, elements, tol=tol, side=side)
    return element


def fc_semicontinuous_detailed(h, elements, tol=DEFAULT_TOL, side="auto"):
    """(element, diagnostics): terms actually enumerated and oracle residual."""
    kind, bp, cols = _columns(elements)
    if cols.shape[0] != h.dim:
        raise DimensionMismatch(
            "fc_semicontinuous", f"{cols.shape[0]} elements, function expects {h.dim}"
        )
    out = np.empty(cols.shape[1])
    terms_max = 0
    for k in range(cols.shape[1]):
        out[k], terms = eval_family_detailed(h, cols[:, k], tol=tol, side=side)
        terms_max = max(terms_max, terms)
    diagnostics = {"family_terms_used": terms_max, "max_residual": None}
    if h.oracle is not None:
        diagnostics["max_residual"] = float(
            np.abs(out - np.asarray(h.oracle(cols.T), dtype=float)).max()
        )
    return _wrap(kind, bp, out), diagnostics


# ---------------------------------------------------------------------------
# saddle representations

class SaddleFamily:
    """Coefficient tensor a[i, j] in subdiff(phi_i) cap superdiff(psi_j).

    Each coefficient is simultaneously below every value of phi_i and above
    every value of psi_j, so min-max and max-min over the matrix a[i,j].x
    bracket any function sandwiched between the two families.
    """

    def __init__(self, coeffs, phi_labels=None, psi_labels=None):
        coeffs = np.asarray(coeffs, dtype=float)
        if coeffs.ndim != 3:
            raise ValueError("coeffs must have shape (P, Q, n)")
        self.coeffs = coeffs
        self.coeffs.setflags(write=False)
        P, Q, _ = coeffs.shape
        self.phi_labels = tuple(phi_labels) if phi_labels else tuple(f"phi{i}" for i in range(P))
        self.psi_labels = tuple(psi_labels) if psi_labels else tuple(f"psi{j}" for j in range(Q))

    @property
    def shape(self):
        return self.coeffs.shape[:2]

    @property
    def dim(self):
        return self.coeffs.shape[2]


def saddle_build(phis, psis, grid_density=None, tol=DEFAULT_TOL):
    """Pairwise coefficients for an ordered (psi <= phi) pair of families.

    Validates psi_j <= phi_i on a sphere grid first (NotOrdered on failure),
    then intersects each subdifferential with each superdifferential.  The
    bracket max_j psi_j <= minmax/maxmin <= min_i phi_i is re-checked on the
    grid with slack tol.
    """
    phis = list(phis)
    psis = list(psis)
    if not phis or not psis:
        raise EmptyFamily("saddle_build", "need at least one map on each side")
    for i, p in enumerate(phis):
        if not isinstance(p, SublinearMap):
            raise TypeError(f"phis[{i}] is not a SublinearMap")
    for j, q in enumerate(psis):
        if not isinstance(q, SuperlinearMap):
            raise TypeError(f"psis[{j}] is not a SuperlinearMap")
    dims = {p.dim for p in phis} | {q.dim for q in psis}
    if len(dims) != 1:
        raise DimensionMismatch("saddle_build", f"mixed map dimensions {sorted(dims)}")
    n = dims.pop()

    density = (720 if n <= 2 else 2000) if grid_density is None else int(grid_density)
    grid = sphere_grid(n, density)
    phi_vals = np.array([convexsets.support_batch(p.subdiff, grid) for p in phis])
    psi_vals = np.array([-convexsets.support_batch(q.superdiff, -grid) for q in psis])
    worst = float((psi_vals[None, :, :] - phi_vals[:, None, :]).max())
    if worst > tol:
        raise NotOrdered(
            "saddle_build",
            f"some psi exceeds some phi by {worst:.3e} on the sphere grid",
        )

    P, Q = len(phis), len(psis)
    coeffs = np.empty((P, Q, n))
    for i in range(P):
        for j in range(Q):
            coeffs[i, j] = feasible_point(phis[i].subdiff, psis[j].superdiff, tol=tol)

    S = SaddleFamily(
        coeffs,
        phi_labels=[p.label or f"phi{i}" for i, p in enumerate(phis)],
        psi_labels=[q.label or f"psi{j}" for j, q in enumerate(psis)],
    )
    inner = np.einsum("ijn,un->iju", coeffs, grid)
    infsup = inner.max(axis=1).min(axis=0)
    supinf = inner.min(axis=0).max(axis=0)
    lo = psi_vals.max(axis=0)
    hi = phi_vals.min(axis=0)
    slack = tol * (1.0 + np.abs(hi).max())
    if (
        np.any(infsup < lo - slack)
        or np.any(infsup > hi + slack)
        or np.any(supinf < lo - slack)
        or np.any(supinf > hi + slack)
    ):
        raise NotOrdered(
            "saddle_build", "saddle values escape the family bracket on the sphere grid"
        )
    return S


def saddle_eval(S, x):
    """(infsup, supinf) of the coefficient matrix at a point."""
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.size != S.dim:
        raise DimensionMismatch("saddle_eval", f"point has dim {x.size}, saddle has dim {S.dim}")
    M = S.coeffs @ x
    infsup = float(M.max(axis=1).min())
    supinf = float(M.min(axis=0).max())
    return infsup, supinf


def fc_saddle(S, elements, tol=SADDLE_TOL):
    """Coordinatewise saddle value; the two orderings must agree within tol.

    Returns the min-max ordering.  A per-coordinate disagreement beyond tol
    raises SaddleGap naming the worst coordinate.
    """
    kind, bp, cols = _columns(elements)
    if cols.shape[0] != S.dim:
        raise DimensionMismatch("fc_saddle", f"{cols.shape[0]} elements, saddle expects {S.dim}")
    out = np.empty(cols.shape[1])
    worst = 0.0
    worst_k = -1
    for k in range(cols.shape[1]):
        infsup, supinf = saddle_eval(S, cols[:, k])
        gap = abs(infsup - supinf)
        if gap > worst:
            worst, worst_k = gap, k
        out[k] = infsup
    if worst > tol:
        raise SaddleGap(
            "fc_saddle",
            f"min-max and max-min differ by {worst:.3e} at coordinate {worst_k} (tol {tol:g})",
        )
    return _wrap(kind, bp, out)


def saddle_to_json(S):
    return {
        "saddle": {
            "coeffs": S.coeffs.tolist(),
            "phi_labels": list(S.phi_labels),
            "psi_labels": list(S.psi_labels),
        }
    }


def saddle_from_json(obj, source="<inline>", path="saddle"):
    if not isinstance(obj, dict) or "saddle" not in obj:
        raise SchemaError(source, path, "expected a 'saddle' object")
    body = obj["saddle"]
    if not isinstance(body, dict) or "coeffs" not in body:
        raise SchemaError(source, f"{path}.saddle", "expected {'coeffs': [[[...]]]}")
    try:
        coeffs = np.asarray(body["coeffs"], dtype=float)
    except (TypeError, ValueError):
        raise SchemaError(source, f"{path}.saddle.coeffs", "expected a numeric 3-d array") from None
    if coeffs.ndim != 3:
        raise SchemaError(source, f"{path}.saddle.coeffs", "expected shape (P, Q, n)")
    if not np.all(np.isfinite(coeffs)):
        raise SchemaError(source, f"{path}.saddle.coeffs", "coefficients must be finite")
    labels = {}
    for key in ("phi_labels", "psi_labels"):
        if key in body:
            val = body[key]
            if not isinstance(val, list) or not all(isinstance(s, str) for s in val):
                raise SchemaError(source, f"{path}.saddle.{key}", "expected a list of strings")
            if len(val) != coeffs.shape[0 if key == "phi_labels" else 1]:
                raise SchemaError(source, f"{path}.saddle.{key}", "label count mismatch")
            labels[key] = val
    return SaddleFamily(coeffs, **labels)
