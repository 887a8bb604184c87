"""Positively homogeneous functions and their map families.

A sublinear map is the support function of a convex compact set (its
subdifferential at the origin); a superlinear map is the pointwise minimum
over its superdifferential.  A PH function is represented by an inf-family
of sublinear maps (upper semicontinuous side), a sup-family of superlinear
maps (lower semicontinuous side), or both (continuous), optionally paired
with a closed-form oracle used for cross-checks only.

Semicontinuity cannot be certified from finitely many samples; the kind tag
is declarative and only the oracle/family agreement is checked numerically.
"""

import warnings

import numpy as np
from scipy.special import ndtri

from . import convexsets
from .convexsets import Ball, VPolytope, set_from_json, set_to_json, support
from .errors import DimensionMismatch, EmptyFamily, EnvelopeViolation, SchemaError, UnknownBuiltin

DEFAULT_TOL = 1e-9
DEFAULT_BUDGET = 10_000
DEFAULT_WINDOW = 200
_RAY_EXP_CAP = 400  # keeps 2**e finite in float64
_EVAL_CHUNK = 512


class RepresentationWarning(UserWarning):
    """Family evaluation drifted from the declared oracle beyond 10*tol."""


class SublinearMap:
    """Support function of `subdiff`: x -> max{a.x : a in subdiff}."""

    def __init__(self, subdiff, label=""):
        if not isinstance(subdiff, (VPolytope, Ball)):
            raise TypeError("subdiff must be a VPolytope or Ball")
        self.subdiff = subdiff
        self.label = str(label)

    @property
    def dim(self):
        return self.subdiff.dim

    def __call__(self, x):
        return support(self.subdiff, x)

    def __repr__(self):
        return f"SublinearMap({self.label or self.subdiff!r})"


class SuperlinearMap:
    """Minimum over `superdiff`: x -> min{a.x : a in superdiff}."""

    def __init__(self, superdiff, label=""):
        if not isinstance(superdiff, (VPolytope, Ball)):
            raise TypeError("superdiff must be a VPolytope or Ball")
        self.superdiff = superdiff
        self.label = str(label)

    @property
    def dim(self):
        return self.superdiff.dim

    def __call__(self, x):
        x = np.asarray(x, dtype=float).reshape(-1)
        return -support(self.superdiff, -x)

    def __repr__(self):
        return f"SuperlinearMap({self.label or self.superdiff!r})"


def eval_sublinear(phi, x):
    return phi(x)


def eval_superlinear(psi, x):
    return psi(x)


# ---------------------------------------------------------------------------
# family enumerations

class FiniteFamily:
    """Explicit finite list of maps; evaluation visits every member.

    `block_fn(x, a, b)`, when given, must return the same values as calling
    maps[a:b] one by one; it exists purely to batch large angle grids.
    """

    is_generated = False

    def __init__(self, maps, block_fn=None):
        maps = tuple(maps)
        if not maps:
            raise ValueError("finite family needs at least one map")
        self.maps = maps
        self._block_fn = block_fn

    @property
    def size(self):
        return len(self.maps)

    def values(self, x, a, b):
        if self._block_fn is not None:
            return self._block_fn(x, a, b)
        return np.array([m(x) for m in self.maps[a:b]], dtype=float)

    def map_at(self, k):
        return self.maps[k]


class GeneratedFamily:
    """Deterministic enumeration of maps, evaluated lazily up to `budget`.

    block_fn(x, a, b) -> values of maps a..b-1 at x; map_at(k) materializes
    the k-th map.  Evaluation stops at the budget or after `window`
    consecutive maps without an improvement beyond the working tolerance.
    Re-entrant: no state is mutated during evaluation.
    """

    is_generated = True

    def __init__(self, block_fn, map_fn, budget=DEFAULT_BUDGET, window=DEFAULT_WINDOW):
        if budget < 1:
            raise ValueError("budget must be >= 1")
        if window < 1:
            raise ValueError("window must be >= 1")
        self._block_fn = block_fn
        self._map_fn = map_fn
        self.budget = int(budget)
        self.window = int(window)

    @property
    def size(self):
        return self.budget

    def values(self, x, a, b):
        return self._block_fn(x, a, b)

    def map_at(self, k):
        return self._map_fn(k)


class PHFunction:
    """A positively homogeneous function given by representing families.

    kind is derived from which sides are present: "usc" (inf-family only),
    "lsc" (sup-family only) or "cts" (both).  The oracle, when present, is a
    vectorized closed form over arrays shaped (..., dim); it never feeds the
    engine, only cross-checks and sphere grids.
    """

    def __init__(self, name, dim, inf_family=None, sup_family=None, oracle=None):
        if inf_family is None and sup_family is None:
            raise EmptyFamily("PHFunction", f"{name}: needs at least one family side")
        self.name = str(name)
        self.dim = int(dim)
        self.inf_family = inf_family
        self.sup_family = sup_family
        self.oracle = oracle

    @property
    def kind(self):
        if self.inf_family is not None and self.sup_family is not None:
            return "cts"
        return "usc" if self.inf_family is not None else "lsc"

    def oracle_at(self, x):
        return float(self.oracle(np.asarray(x, dtype=float)))

    def __repr__(self):
        return f"PHFunction({self.name!r}, kind={self.kind}, dim={self.dim})"


def _pick_side(h, side):
    if side == "auto":
        side = "inf" if h.inf_family is not None else "sup"
    if side == "inf":
        if h.inf_family is None:
            raise EmptyFamily("eval_family", f"{h.name}: no inf-family")
        return "inf", h.inf_family
    if side == "sup":
        if h.sup_family is None:
            raise EmptyFamily("eval_family", f"{h.name}: no sup-family")
        return "sup", h.sup_family
    raise ValueError(f"side must be 'auto', 'inf' or 'sup', got {side!r}")


def _scan_family(family, x, tol, minimize):
    """Running extremum with the generated-family stopping rule.

    Returns (value, terms).  Semantics match a scalar scan over the
    enumeration: the running best includes every map seen; the stall counter
    resets only on improvements larger than tol, and evaluation stops once
    `window` consecutive maps fail to improve (generated families only).
    """
    sign = 1.0 if minimize else -1.0
    total = family.size
    if not family.is_generated:
        best = np.inf
        for a in range(0, total, _EVAL_CHUNK):
            vals = sign * np.asarray(family.values(x, a, min(a + _EVAL_CHUNK, total)), dtype=float)
            if vals.size:
                best = min(best, float(vals.min()))
        return sign * best, total

    window = family.window
    best = np.inf
    last_imp = -1
    a = 0
    while a < total:
        b = min(a + _EVAL_CHUNK, total)
        vals = sign * np.asarray(family.values(x, a, b), dtype=float)
        run = np.minimum(np.minimum.accumulate(vals), best)
        prev = np.concatenate(([best], run[:-1]))
        improving = np.nonzero(prev - vals > tol)[0]
        stop = None
        for j in improving:
            g = a + int(j)
            if g - last_imp > window:
                stop = last_imp + window
                break
            last_imp = g
        if stop is None and (b - 1) - last_imp >= window:
            stop = last_imp + window
        if stop is not None:
            # stop is always inside the current chunk: a previous chunk end
            # would have tripped the same test earlier.
            return sign * float(run[stop - a]), stop + 1
        best = float(run[-1])
        a = b
    return sign * best, total


def eval_family(h, x, tol=DEFAULT_TOL, side="auto"):
    """Value of h at x through its representing family."""
    value, _ = eval_family_detailed(h, x, tol=tol, side=side)
    return value


def eval_family_detailed(h, x, tol=DEFAULT_TOL, side="auto"):
    """(value, terms used); flags a RepresentationWarning on oracle drift."""
    x = np.asarray(x, dtype=float).reshape(-1)
    if x.size != h.dim:
        raise DimensionMismatch("eval_family", f"point has dim {x.size}, function has dim {h.dim}")
    if tol <= 0:
        raise ValueError("tol must be > 0")
    chosen, family = _pick_side(h, side)
    value, terms = _scan_family(family, x, tol, minimize=(chosen == "inf"))
    if h.oracle is not None:
        residual = abs(value - float(h.oracle(x)))
        if residual > 10.0 * tol:
            warnings.warn(
                RepresentationWarning(
                    f"{h.name}: family value deviates from oracle by {residual:.3e}"
                ),
                stacklevel=2,
            )
    return value, terms


# ---------------------------------------------------------------------------
# sphere grids and envelopes

def _kronecker_alphas(n):
    # root of x**(n+1) = x + 1, Newton from 1.5; deterministic
    phi = 1.5
    for _ in range(64):
        phi -= (phi ** (n + 1) - phi - 1.0) / ((n + 1) * phi**n - 1.0)
    return np.array([(1.0 / phi) ** (j + 1) % 1.0 for j in range(n)])


def sphere_grid(n, density):
    """Deterministic unit-sphere sample: uniform angles (n=2), Fibonacci
    spiral (n=3), Kronecker lattice through the Gaussian (n>=4)."""
    if density < 8:
        raise ValueError("grid density must be >= 8")
    if n == 1:
        return np.array([[1.0], [-1.0]])
    if n == 2:
        theta = np.arange(density) * (2.0 * np.pi / density)
        return np.column_stack([np.cos(theta), np.sin(theta)])
    if n == 3:
        i = np.arange(density, dtype=float)
        offset = 2.0 / density
        increment = np.pi * (3.0 - np.sqrt(5.0))
        y = i * offset - 1.0 + offset / 2.0
        r = np.sqrt(np.maximum(1.0 - y * y, 0.0))
        phi = ((i + 1) % density) * increment
        return np.column_stack([np.cos(phi) * r, y, np.sin(phi) * r])
    alphas = _kronecker_alphas(n)
    i = np.arange(1, density + 1, dtype=float)
    u = (0.5 + np.outer(i, alphas)) % 1.0
    z = ndtri(np.clip(u, 1e-12, 1.0 - 1e-12))
    norms = np.linalg.norm(z, axis=1)
    bad = norms < 1e-9
    if np.any(bad):
        z[bad] = 0.0
        z[bad, 0] = 1.0
        norms[bad] = 1.0
    return z / norms[:, None]


def _values_on_grid(h, grid, tol=DEFAULT_TOL):
    if h.oracle is not None:
        return np.asarray(h.oracle(grid), dtype=float)
    return np.array([eval_family(h, u, tol=tol) for u in grid], dtype=float)


def _default_density(n):
    return 720 if n <= 2 else 2000


def sphere_bounds(h, grid_density=None):
    """(m, M) with -m = min and M = max of h over the sphere grid."""
    density = _default_density(h.dim) if grid_density is None else int(grid_density)
    grid = sphere_grid(h.dim, density)
    vals = _values_on_grid(h, grid)
    return float(-vals.min()), float(vals.max())


def domination_envelopes(h, grid_density=None):
    """Norm envelopes (psi, phi) with psi <= h <= phi on the sphere grid.

    psi = -m.||.|| (superdiff = ball of radius m), phi = M.||.||; negative
    sphere bounds clamp to radius 0 so both maps stay genuinely super/sub
    linear.  When both an oracle and a family are present they are
    cross-checked on a grid subsample; disagreement raises
    EnvelopeViolation, as does an actual bracket violation on the grid.
    """
    density = _default_density(h.dim) if grid_density is None else int(grid_density)
    grid = sphere_grid(h.dim, density)
    vals = _values_on_grid(h, grid)
    m, M = float(-vals.min()), float(vals.max())
    m_env = max(m, 0.0)
    M_env = max(M, 0.0)
    center = np.zeros(h.dim)
    psi = SuperlinearMap(Ball(center, m_env), label=f"-{m_env:g}*norm")
    phi = SublinearMap(Ball(center, M_env), label=f"{M_env:g}*norm")

    norms = np.linalg.norm(grid, axis=1)
    slack = 1e-12 * (1.0 + abs(m_env) + abs(M_env))
    low = -m_env * norms
    high = M_env * norms
    if np.any(vals < low - slack) or np.any(vals > high + slack):
        worst = max(float((low - vals).max()), float((vals - high).max()))
        raise EnvelopeViolation(
            "domination_envelopes",
            f"{h.name}: grid values escape [-m, M] envelope by {worst:.3e}",
        )
    if h.oracle is not None and (h.inf_family is not None or h.sup_family is not None):
        stride = max(1, density // 128)
        for u in grid[::stride]:
            fam = eval_family(h, u)
            orc = float(h.oracle(u))
            if abs(fam - orc) > 1e-6 * (1.0 + abs(orc)):
                raise EnvelopeViolation(
                    "domination_envelopes",
                    f"{h.name}: family and oracle disagree by {abs(fam - orc):.3e} "
                    "on the sphere grid (bad oracle or coarse family)",
                )
    return psi, phi


class HomogeneityReport:
    def __init__(self, name, samples, violations, seed):
        self.name = name
        self.samples = samples
        self.violations = violations
        self.seed = seed

    @property
    def passed(self):
        return not self.violations


def check_positive_homogeneity(h, samples=200, tol=DEFAULT_TOL, seed=0):
    """Sample |h(lam*x) - lam*h(x)| <= tol*(1+lam) through the oracle."""
    if h.oracle is None:
        raise ValueError("check_positive_homogeneity needs an oracle")
    rng = np.random.default_rng(np.random.SeedSequence([seed, 0x504F53]))
    xs = rng.uniform(-5.0, 5.0, size=(samples, h.dim))
    lams = rng.uniform(0.0, 10.0, size=samples)
    violations = []
    for x, lam in zip(xs, lams):
        lhs = float(h.oracle(lam * x))
        rhs = lam * float(h.oracle(x))
        if abs(lhs - rhs) > tol * (1.0 + lam):
            violations.append({"x": x.tolist(), "lambda": float(lam), "gap": abs(lhs - rhs)})
    return HomogeneityReport(h.name, samples, violations, seed)


# ---------------------------------------------------------------------------
# built-in functions

def _diag_ray_pairs(budget):
    # diagonal order on N^2 (m+n ascending, then m ascending) interleaved with
    # geometric rays (2^e, 1), (1, 2^e); the rays make the infimum attainable
    # within budget for sign-mixed inputs arbitrarily close to an axis.
    ms, ns = [], []
    d = 2
    while len(ms) < budget:
        for m in range(1, d):
            ms.append(float(m))
            ns.append(float(d - m))
        e = min(d - 1, _RAY_EXP_CAP)
        ms.append(2.0**e)
        ns.append(1.0)
        ms.append(1.0)
        ns.append(2.0**e)
        d += 1
    return np.array(ms[:budget]), np.array(ns[:budget])


def quadrant_sum(budget=DEFAULT_BUDGET, window=DEFAULT_WINDOW):
    """x+y on the closed positive quadrant, 0 elsewhere (usc).

    Inf-family of maps (mx+ny)^+ over positive integer pairs; the infimum is
    attained at finite index for every sign pattern, so family evaluation is
    exact up to index ratios of 2^400.
    """
    M, N = _diag_ray_pairs(budget)

    def block(x, a, b):
        return np.maximum(M[a:b] * x[0] + N[a:b] * x[1], 0.0)

    def map_at(k):
        return SublinearMap(
            VPolytope([[M[k], N[k]], [0.0, 0.0]]), label=f"pospart(m={M[k]:g},n={N[k]:g})"
        )

    def oracle(pts):
        pts = np.asarray(pts, dtype=float)
        x, y = pts[..., 0], pts[..., 1]
        return np.where((x >= 0) & (y >= 0), x + y, 0.0)

    return PHFunction(
        "example-7.1",
        2,
        inf_family=GeneratedFamily(block, map_at, budget=budget, window=window),
        oracle=oracle,
    )


def _lambda_ray_pairs(budget):
    # (lambda, n) with lambda in {0,1}, n ascending, plus geometric n-rays.
    lams, ns = [], []
    j = 1
    while len(lams) < budget:
        e = min(j, _RAY_EXP_CAP)
        lams.extend([0.0, 1.0, 0.0, 1.0])
        ns.extend([float(j), float(j), 2.0**e, 2.0**e])
        j += 1
    return np.array(lams[:budget]), np.array(ns[:budget])


def sign_switch(budget=DEFAULT_BUDGET, window=DEFAULT_WINDOW):
    """x when both coordinates are positive, y when y is negative, else 0 (lsc).

    Sup-family of maps min{lambda*x, n*y}, lambda in {0,1}, n a positive
    integer; geometric n-rays make the supremum attained within budget.
    """
    L, N = _lambda_ray_pairs(budget)

    def block(x, a, b):
        return np.minimum(L[a:b] * x[0], N[a:b] * x[1])

    def map_at(k):
        return SuperlinearMap(
            VPolytope([[L[k], 0.0], [0.0, N[k]]]), label=f"min(lam={L[k]:g},n={N[k]:g})"
        )

    def oracle(pts):
        pts = np.asarray(pts, dtype=float)
        x, y = pts[..., 0], pts[..., 1]
        return np.where((x > 0) & (y > 0), x, np.where(y < 0, y, 0.0))

    return PHFunction(
        "example-7.2",
        2,
        sup_family=GeneratedFamily(block, map_at, budget=budget, window=window),
        oracle=oracle,
    )


def _bit_reversed_angles(count):
    bits = count.bit_length() - 1
    if 1 << bits != count:
        raise ValueError("angle count must be a power of two")
    idx = np.arange(count)
    rev = np.zeros(count, dtype=np.int64)
    for b in range(bits):
        rev |= ((idx >> b) & 1) << (bits - 1 - b)
    return rev * (2.0 * np.pi / count)


def disk_map():
    return SublinearMap(Ball([0.0, 0.0], 1.0), label="euclidean")


def angle_superlinear_family(count):
    """Finite family of tangent linear maps (cos t, sin t) on a uniform grid."""
    theta = np.arange(count) * (2.0 * np.pi / count)
    C, S = np.cos(theta), np.sin(theta)
    maps = [
        SuperlinearMap(VPolytope([[C[k], S[k]]]), label=f"tangent({k}/{count})")
        for k in range(count)
    ]

    def block(x, a, b):
        return C[a:b] * x[0] + S[a:b] * x[1]

    return FiniteFamily(maps, block_fn=block)


def circumscribed_polygon_map(count):
    """Sublinear map whose subdifferential is the regular polygon tangent to
    the unit disk from outside; dominates the euclidean norm within
    sec(pi/count) - 1 relative."""
    r = 1.0 / np.cos(np.pi / count)
    theta = (2.0 * np.arange(count) + 1.0) * (np.pi / count)
    verts = np.column_stack([r * np.cos(theta), r * np.sin(theta)])
    return SublinearMap(VPolytope(verts), label=f"circumscribed-{count}")


def square_mean(sup_angles=512, window=DEFAULT_WINDOW):
    """Euclidean norm on R^2 (continuous): disk inf-family plus a generated
    sup-family of tangent maps on a bit-reversal-refined angle grid."""
    theta = _bit_reversed_angles(sup_angles)
    C, S = np.cos(theta), np.sin(theta)

    def block(x, a, b):
        return C[a:b] * x[0] + S[a:b] * x[1]

    def map_at(k):
        return SuperlinearMap(VPolytope([[C[k], S[k]]]), label=f"tangent-bitrev-{k}")

    def oracle(pts):
        pts = np.asarray(pts, dtype=float)
        return np.hypot(pts[..., 0], pts[..., 1])

    return PHFunction(
        "square-mean",
        2,
        inf_family=FiniteFamily([disk_map()]),
        sup_family=GeneratedFamily(block, map_at, budget=sup_angles, window=window),
        oracle=oracle,
    )


def abs_sum(n=2):
    """l1 norm on R^n (continuous)."""
    from itertools import product

    signs = np.array(list(product([-1.0, 1.0], repeat=n)))
    sup_maps = [SuperlinearMap(VPolytope([s]), label=f"sign{k}") for k, s in enumerate(signs)]

    def block(x, a, b):
        return signs[a:b] @ np.asarray(x, dtype=float)

    def oracle(pts):
        return np.abs(np.asarray(pts, dtype=float)).sum(axis=-1)

    return PHFunction(
        "abs-sum",
        n,
        inf_family=FiniteFamily([SublinearMap(VPolytope(signs), label="l1")]),
        sup_family=FiniteFamily(sup_maps, block_fn=block),
        oracle=oracle,
    )


def max_coord(n=2):
    """Largest coordinate on R^n (continuous); subdifferential is the
    standard simplex."""
    eye = np.eye(n)
    sup_maps = [SuperlinearMap(VPolytope([eye[k]]), label=f"coord{k + 1}") for k in range(n)]

    def block(x, a, b):
        return np.asarray(x, dtype=float)[a:b]

    def oracle(pts):
        return np.asarray(pts, dtype=float).max(axis=-1)

    return PHFunction(
        "max-coord",
        n,
        inf_family=FiniteFamily([SublinearMap(VPolytope(eye), label="max")]),
        sup_family=FiniteFamily(sup_maps, block_fn=block),
        oracle=oracle,
    )


_BUILTINS = {
    "example-7.1": quadrant_sum,
    "example-7.2": sign_switch,
    "square-mean": square_mean,
    "abs-sum": abs_sum,
    "max-coord": max_coord,
}


def builtin(name, **kwargs):
    """Named ready-made PHFunctions; kwargs (budget, window, ...) pass through."""
    try:
        factory = _BUILTINS[name]
    except KeyError:
        known = ", ".join(sorted(_BUILTINS))
        raise UnknownBuiltin("builtin", f"unknown name {name!r}; known: {known}") from None
    return factory(**kwargs)


# ---------------------------------------------------------------------------
# JSON:  {"sublinear": {"subdiff": <set>, "label": s}}
#        {"superlinear": {"superdiff": <set>, "label": s}}
#        {"family": {"kind": "usc"|"lsc"|"cts", "maps": [...] | {"builtin": name}}}

def map_to_json(m):
    if isinstance(m, SublinearMap):
        return {"sublinear": {"subdiff": set_to_json(m.subdiff), "label": m.label}}
    if isinstance(m, SuperlinearMap):
        return {"superlinear": {"superdiff": set_to_json(m.superdiff), "label": m.label}}
    raise TypeError(f"unsupported map type {type(m).__name__}")


def map_from_json(obj, source="<inline>", path="map"):
    if not isinstance(obj, dict):
        raise SchemaError(source, path, "expected an object")
    if "sublinear" in obj:
        body = obj["sublinear"]
        if not isinstance(body, dict) or "subdiff" not in body:
            raise SchemaError(source, f"{path}.sublinear", "expected {'subdiff': <set>}")
        s = set_from_json(body["subdiff"], source, f"{path}.sublinear.subdiff")
        return SublinearMap(s, label=str(body.get("label", "")))
    if "superlinear" in obj:
        body = obj["superlinear"]
        if not isinstance(body, dict) or "superdiff" not in body:
            raise SchemaError(source, f"{path}.superlinear", "expected {'superdiff': <set>}")
        s = set_from_json(body["superdiff"], source, f"{path}.superlinear.superdiff")
        return SuperlinearMap(s, label=str(body.get("label", "")))
    raise SchemaError(source, path, "expected a 'sublinear' or 'superlinear' key")


def _family_from_map_list(objs, side, source, path):
    maps = [map_from_json(o, source, f"{path}[{i}]") for i, o in enumerate(objs)]
    want = SublinearMap if side == "inf" else SuperlinearMap
    for i, m in enumerate(maps):
        if not isinstance(m, want):
            raise SchemaError(
                source, f"{path}[{i}]", f"expected a {'sublinear' if side == 'inf' else 'superlinear'} map"
            )
    dims = {m.dim for m in maps}
    if len(dims) != 1:
        raise SchemaError(source, path, "maps have mixed dimensions")
    return FiniteFamily(maps), dims.pop()


def function_from_json(obj, source="<inline>", path="family"):
    if not isinstance(obj, dict) or "family" not in obj:
        raise SchemaError(source, path, "expected a 'family' object")
    body = obj["family"]
    if not isinstance(body, dict):
        raise SchemaError(source, f"{path}.family", "expected an object")
    maps = body.get("maps", body if "builtin" in body else None)
    if isinstance(maps, dict) and "builtin" in maps:
        name = maps["builtin"]
        if not isinstance(name, str):
            raise SchemaError(source, f"{path}.family.maps.builtin", "expected a string")
        try:
            h = builtin(name)
        except UnknownBuiltin as exc:
            raise SchemaError(source, f"{path}.family.maps.builtin", exc.message) from exc
        kind = body.get("kind")
        if kind is not None and kind != h.kind:
            raise SchemaError(
                source, f"{path}.family.kind", f"builtin {name!r} has kind {h.kind!r}, not {kind!r}"
            )
        return h
    kind = body.get("kind")
    if kind not in ("usc", "lsc", "cts"):
        raise SchemaError(source, f"{path}.family.kind", "expected 'usc', 'lsc' or 'cts'")
    if maps is None:
        raise SchemaError(source, f"{path}.family.maps", "expected a map list or {'builtin': name}")
    if kind == "cts":
        if not isinstance(maps, dict) or "inf" not in maps or "sup" not in maps:
            raise SchemaError(
                source, f"{path}.family.maps", "continuous kind needs {'inf': [...], 'sup': [...]}"
            )
        if not isinstance(maps["inf"], list) or not maps["inf"]:
            raise SchemaError(source, f"{path}.family.maps.inf", "expected a nonempty list")
        if not isinstance(maps["sup"], list) or not maps["sup"]:
            raise SchemaError(source, f"{path}.family.maps.sup", "expected a nonempty list")
        inf_fam, dim_inf = _family_from_map_list(maps["inf"], "inf", source, f"{path}.family.maps.inf")
        sup_fam, dim_sup = _family_from_map_list(maps["sup"], "sup", source, f"{path}.family.maps.sup")
        if dim_inf != dim_sup:
            raise SchemaError(source, f"{path}.family.maps", "inf and sup sides have different dims")
        return PHFunction("user-family", dim_inf, inf_family=inf_fam, sup_family=sup_fam)
    if not isinstance(maps, list) or not maps:
        raise SchemaError(source, f"{path}.family.maps", "expected a nonempty list")
    side = "inf" if kind == "usc" else "sup"
    fam, dim = _family_from_map_list(maps, side, source, f"{path}.family.maps")
    if kind == "usc":
        return PHFunction("user-family", dim, inf_family=fam)
    return PHFunction("user-family", dim, sup_family=fam)
