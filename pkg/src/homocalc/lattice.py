"""Concrete vector lattices: R^m with coordinatewise order, and real step
functions on [0,1] with pointwise order.

Step functions use half-open pieces [t_{i-1}, t_i); the point t = 1 belongs
to the last piece.  Refinement merges breakpoint sets exactly (float
equality), no epsilon snapping.
"""

import numpy as np

from .errors import DimensionMismatch, IndexOutOfRange, LatticeMismatch, SchemaError


class RmElement:
    """A vector in R^m."""

    def __init__(self, coords):
        c = np.array(coords, dtype=float, copy=True).reshape(-1)
        if c.size == 0:
            raise ValueError("coords must be nonempty")
        if not np.all(np.isfinite(c)):
            raise ValueError("coords must be finite")
        c.flags.writeable = False
        self.coords = c

    @property
    def m(self):
        return self.coords.size

    def __add__(self, other):
        if not isinstance(other, RmElement) or other.m != self.m:
            raise LatticeMismatch("add", "operands must be RmElements of equal dim")
        return RmElement(self.coords + other.coords)

    def __rmul__(self, scalar):
        return RmElement(float(scalar) * self.coords)

    def __le__(self, other):
        return bool(np.all(self.coords <= other.coords))

    def __eq__(self, other):
        return isinstance(other, RmElement) and np.array_equal(self.coords, other.coords)

    def __hash__(self):
        return hash(self.coords.tobytes())

    def __repr__(self):
        return f"RmElement({self.coords.tolist()})"


class StepFunction:
    """Piecewise-constant function on [0,1].

    breakpoints: 0 = t_0 < t_1 < ... < t_k = 1 (length k+1)
    values: one per piece (length k), piece i covers [t_i, t_{i+1}).
    """

    def __init__(self, breakpoints, values):
        b = np.array(breakpoints, dtype=float, copy=True).reshape(-1)
        v = np.array(values, dtype=float, copy=True).reshape(-1)
        if b.size < 2 or v.size != b.size - 1:
            raise ValueError("need k+1 breakpoints and k values")
        if b[0] != 0.0 or b[-1] != 1.0:
            raise ValueError("breakpoints must start at 0 and end at 1")
        if np.any(np.diff(b) <= 0):
            raise ValueError("breakpoints must be strictly increasing")
        if not (np.all(np.isfinite(b)) and np.all(np.isfinite(v))):
            raise ValueError("breakpoints and values must be finite")
        b.flags.writeable = False
        v.flags.writeable = False
        self.breakpoints = b
        self.values = v

    @property
    def pieces(self):
        return self.values.size

    def value_at(self, t):
        t = float(t)
        if not 0.0 <= t <= 1.0:
            raise IndexOutOfRange("value_at", f"t={t} outside [0,1]")
        idx = int(np.searchsorted(self.breakpoints, t, side="right")) - 1
        return float(self.values[min(idx, self.pieces - 1)])

    def values_at(self, ts):
        ts = np.asarray(ts, dtype=float).reshape(-1)
        if ts.size and (ts.min() < 0.0 or ts.max() > 1.0):
            raise IndexOutOfRange("values_at", "grid points must lie in [0,1]")
        idx = np.searchsorted(self.breakpoints, ts, side="right") - 1
        return self.values[np.minimum(idx, self.pieces - 1)]

    def __add__(self, other):
        fa, fb = refine(self, other)
        return StepFunction(fa.breakpoints, fa.values + fb.values)

    def __rmul__(self, scalar):
        return StepFunction(self.breakpoints, float(scalar) * self.values)

    def __le__(self, other):
        fa, fb = refine(self, other)
        return bool(np.all(fa.values <= fb.values))

    def __eq__(self, other):
        if not isinstance(other, StepFunction):
            return False
        return np.array_equal(self.breakpoints, other.breakpoints) and np.array_equal(
            self.values, other.values
        )

    def __hash__(self):
        return hash((self.breakpoints.tobytes(), self.values.tobytes()))

    def __repr__(self):
        return f"StepFunction({self.pieces} pieces)"


# --- homomorphism descriptors ----------------------------------------------

class CoordinateHom:
    """R^m -> R, pick the j-th coordinate (1-based)."""

    def __init__(self, j):
        j = int(j)
        if j < 1:
            raise IndexOutOfRange("CoordinateHom", "j must be >= 1")
        self.j = j


class PointEvalHom:
    """Step functions -> R, evaluate at t in [0,1]."""

    def __init__(self, t):
        t = float(t)
        if not 0.0 <= t <= 1.0:
            raise IndexOutOfRange("PointEvalHom", f"t={t} outside [0,1]")
        self.t = t


def hom_eval(hom, f):
    """Apply a lattice homomorphism descriptor to an element."""
    if isinstance(hom, CoordinateHom):
        if not isinstance(f, RmElement):
            raise LatticeMismatch("hom_eval", "CoordinateHom applies to RmElement")
        if hom.j > f.m:
            raise IndexOutOfRange("hom_eval", f"coordinate {hom.j} outside 1..{f.m}")
        return float(f.coords[hom.j - 1])
    if isinstance(hom, PointEvalHom):
        if not isinstance(f, StepFunction):
            raise LatticeMismatch("hom_eval", "PointEvalHom applies to StepFunction")
        return f.value_at(hom.t)
    raise TypeError(f"unknown homomorphism {type(hom).__name__}")


# --- lattice operations ------------------------------------------------------

def _pair_check(f, g, op):
    if isinstance(f, RmElement) and isinstance(g, RmElement):
        if f.m != g.m:
            raise DimensionMismatch(op, f"elements have dims {f.m} and {g.m}")
        return "rm"
    if isinstance(f, StepFunction) and isinstance(g, StepFunction):
        return "step"
    raise LatticeMismatch(op, "operands must be two RmElements or two StepFunctions")


def join(f, g):
    kind = _pair_check(f, g, "join")
    if kind == "rm":
        return RmElement(np.maximum(f.coords, g.coords))
    fa, fb = refine(f, g)
    return StepFunction(fa.breakpoints, np.maximum(fa.values, fb.values))


def meet(f, g):
    kind = _pair_check(f, g, "meet")
    if kind == "rm":
        return RmElement(np.minimum(f.coords, g.coords))
    fa, fb = refine(f, g)
    return StepFunction(fa.breakpoints, np.minimum(fa.values, fb.values))


def refine(f, g):
    """Rewrite two step functions on the union of their breakpoints."""
    if not (isinstance(f, StepFunction) and isinstance(g, StepFunction)):
        raise LatticeMismatch("refine", "refine applies to StepFunctions")
    bp = np.union1d(f.breakpoints, g.breakpoints)
    lefts = bp[:-1]
    return (
        StepFunction(bp, f.values_at(lefts)),
        StepFunction(bp, g.values_at(lefts)),
    )


def common_refinement(fs):
    """Shared breakpoints and the (n, pieces) value matrix of n step functions."""
    if not fs:
        raise LatticeMismatch("common_refinement", "need at least one step function")
    if not all(isinstance(f, StepFunction) for f in fs):
        raise LatticeMismatch("common_refinement", "all inputs must be StepFunctions")
    bp = fs[0].breakpoints
    for f in fs[1:]:
        bp = np.union1d(bp, f.breakpoints)
    lefts = bp[:-1]
    vals = np.stack([f.values_at(lefts) for f in fs])
    return bp, vals


def embed_step_to_grid(f, grid):
    """Point evaluations of a step function on a finite grid, as an RmElement.

    The embedding is a lattice homomorphism; when the grid refines the
    partition it is injective on the pieces the grid touches.
    """
    if not isinstance(f, StepFunction):
        raise LatticeMismatch("embed_step_to_grid", "first argument must be a StepFunction")
    grid = np.asarray(grid, dtype=float).reshape(-1)
    if grid.size == 0:
        raise ValueError("grid must be nonempty")
    return RmElement(f.values_at(grid))


# --- JSON --------------------------------------------------------------------
# {"rm": [..]} | {"step": {"breakpoints": [..], "values": [..]}}

def element_to_json(f):
    if isinstance(f, RmElement):
        return {"rm": f.coords.tolist()}
    if isinstance(f, StepFunction):
        return {
            "step": {
                "breakpoints": f.breakpoints.tolist(),
                "values": f.values.tolist(),
            }
        }
    raise TypeError(f"unsupported element type {type(f).__name__}")


def _num_list(obj, source, path):
    if not isinstance(obj, list) or not all(
        isinstance(v, (int, float)) and not isinstance(v, bool) for v in obj
    ):
        raise SchemaError(source, path, "expected a list of numbers")
    return [float(v) for v in obj]


def element_from_json(obj, source="<inline>", path="element"):
    if not isinstance(obj, dict):
        raise SchemaError(source, path, "expected an object")
    if "rm" in obj:
        coords = _num_list(obj["rm"], source, f"{path}.rm")
        if not coords:
            raise SchemaError(source, f"{path}.rm", "expected a nonempty list")
        return RmElement(coords)
    if "step" in obj:
        body = obj["step"]
        if not isinstance(body, dict) or "breakpoints" not in body or "values" not in body:
            raise SchemaError(
                source, f"{path}.step", "expected {'breakpoints': [...], 'values': [...]}"
            )
        bp = _num_list(body["breakpoints"], source, f"{path}.step.breakpoints")
        vals = _num_list(body["values"], source, f"{path}.step.values")
        try:
            return StepFunction(bp, vals)
        except ValueError as exc:
            raise SchemaError(source, f"{path}.step", str(exc)) from exc
    raise SchemaError(source, path, "expected an 'rm' or 'step' key")
