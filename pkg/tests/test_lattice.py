import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from homocalc.errors import (
    DimensionMismatch,
    IndexOutOfRange,
    LatticeMismatch,
    SchemaError,
)
from homocalc.lattice import (
    CoordinateHom,
    PointEvalHom,
    RmElement,
    StepFunction,
    common_refinement,
    element_from_json,
    element_to_json,
    embed_step_to_grid,
    hom_eval,
    join,
    meet,
    refine,
)

F = StepFunction([0.0, 0.5, 1.0], [1.0, 3.0])
G = StepFunction([0.0, 1.0], [2.0])


def steps():
    interior = st.lists(
        st.floats(0.01, 0.99, allow_nan=False), min_size=0, max_size=4, unique=True
    )
    vals = st.floats(-5, 5, allow_nan=False, allow_infinity=False)

    def build(inner, seed):
        bp = np.concatenate([[0.0], np.sort(np.array(inner)), [1.0]])
        rng = np.random.default_rng(seed)
        return StepFunction(bp, rng.uniform(-5, 5, size=bp.size - 1))

    return st.builds(build, interior, st.integers(0, 2**31 - 1)), vals


def test_rm_join_meet():
    a = RmElement([1.0, -2.0, 0.0])
    b = RmElement([0.0, 5.0, 0.0])
    assert np.array_equal(join(a, b).coords, [1.0, 5.0, 0.0])
    assert np.array_equal(meet(a, b).coords, [0.0, -2.0, 0.0])


def test_step_join_refines_partitions():
    j = join(F, G)
    assert np.array_equal(j.breakpoints, [0.0, 0.5, 1.0])
    assert np.array_equal(j.values, [2.0, 3.0])


def test_meet_idempotent():
    m = meet(F, F)
    assert m == F


def test_join_lattice_mismatch():
    with pytest.raises(LatticeMismatch):
        join(RmElement([1.0]), F)
    with pytest.raises(DimensionMismatch):
        join(RmElement([1.0]), RmElement([1.0, 2.0]))


def test_refine_union_of_breakpoints():
    a = StepFunction([0.0, 0.5, 1.0], [1.0, 2.0])
    b = StepFunction([0.0, 1.0 / 3.0, 1.0], [4.0, 5.0])
    a2, b2 = refine(a, b)
    expected = [0.0, 1.0 / 3.0, 0.5, 1.0]
    assert np.array_equal(a2.breakpoints, expected)
    assert np.array_equal(b2.breakpoints, expected)
    for t in (0.0, 0.4, 0.9):
        assert a2.value_at(t) == a.value_at(t)
        assert b2.value_at(t) == b.value_at(t)


def test_refine_self_is_identity():
    a2, b2 = refine(F, F)
    assert a2 == F and b2 == F


def test_hom_eval_coordinate_one_based():
    assert hom_eval(CoordinateHom(2), RmElement([7.0, -1.0, 4.0])) == -1.0


def test_hom_eval_point_eval():
    assert hom_eval(PointEvalHom(0.5), F) == 3.0
    assert hom_eval(PointEvalHom(1.0), F) == 3.0
    assert hom_eval(PointEvalHom(0.0), F) == 1.0


def test_hom_eval_range_errors():
    with pytest.raises(IndexOutOfRange):
        hom_eval(CoordinateHom(4), RmElement([1.0, 2.0, 3.0]))
    with pytest.raises(IndexOutOfRange):
        PointEvalHom(1.5)
    with pytest.raises(LatticeMismatch):
        hom_eval(CoordinateHom(1), F)


def test_embed_step_to_grid():
    e = embed_step_to_grid(F, [0.25, 0.75])
    assert np.array_equal(e.coords, [1.0, 3.0])


def test_embed_constant():
    c = StepFunction([0.0, 1.0], [5.0])
    assert np.array_equal(embed_step_to_grid(c, [0.1, 0.5, 0.9]).coords, [5.0, 5.0, 5.0])


def test_common_refinement_matrix():
    bp, vals = common_refinement([F, G])
    assert np.array_equal(bp, [0.0, 0.5, 1.0])
    assert np.array_equal(vals, [[1.0, 3.0], [2.0, 2.0]])


def test_step_function_validation():
    with pytest.raises(ValueError):
        StepFunction([0.0, 0.5], [1.0, 2.0])
    with pytest.raises(ValueError):
        StepFunction([0.1, 1.0], [2.0])
    with pytest.raises(ValueError):
        StepFunction([0.0, 0.5, 0.5, 1.0], [1.0, 2.0, 3.0])


def test_rm_order_and_arithmetic():
    a = RmElement([1.0, 2.0])
    b = RmElement([2.0, 2.0])
    assert a <= b
    assert not (b <= a)
    assert np.array_equal((a + b).coords, [3.0, 4.0])
    assert np.array_equal((2.0 * a).coords, [2.0, 4.0])


def test_element_json_round_trip():
    for e in (RmElement([1.0, -2.0]), F):
        e2 = element_from_json(element_to_json(e))
        assert e2 == e


def test_element_json_schema_errors():
    with pytest.raises(SchemaError):
        element_from_json({"rm": [True]})
    with pytest.raises(SchemaError):
        element_from_json({"step": {"breakpoints": [0.0, 1.0]}})
    with pytest.raises(SchemaError):
        element_from_json({"vector": [1.0]})


@settings(max_examples=50, deadline=None)
@given(*steps())
def test_hom_eval_is_linear_and_lattice_preserving(f, alpha):
    g = StepFunction(f.breakpoints, f.values[::-1].copy())
    for t in (0.0, 0.3, 0.77, 1.0):
        T = PointEvalHom(t)
        assert hom_eval(T, f + g) == hom_eval(T, f) + hom_eval(T, g)
        assert hom_eval(T, alpha * f) == alpha * hom_eval(T, f)
        assert hom_eval(T, join(f, g)) == max(hom_eval(T, f), hom_eval(T, g))
        assert hom_eval(T, meet(f, g)) == min(hom_eval(T, f), hom_eval(T, g))


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**31 - 1))
def test_refine_preserves_pointwise_values(seed):
    rng = np.random.default_rng(seed)
    def rand_step():
        inner = np.unique(rng.uniform(0.05, 0.95, size=rng.integers(0, 5)))
        bp = np.concatenate([[0.0], inner, [1.0]])
        return StepFunction(bp, rng.uniform(-5, 5, size=bp.size - 1))
    f, g = rand_step(), rand_step()
    f2, g2 = refine(f, g)
    ts = rng.uniform(0.0, 1.0, size=10)
    for t in ts:
        assert f2.value_at(t) == f.value_at(t)
        assert g2.value_at(t) == g.value_at(t)


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**31 - 1))
def test_join_embed_commutes(seed):
    rng = np.random.default_rng(seed)
    def rand_step():
        inner = np.unique(rng.uniform(0.05, 0.95, size=rng.integers(0, 4)))
        bp = np.concatenate([[0.0], inner, [1.0]])
        return StepFunction(bp, rng.uniform(-5, 5, size=bp.size - 1))
    f, g = rand_step(), rand_step()
    grid = np.sort(rng.uniform(0.0, 1.0, size=6))
    a = embed_step_to_grid(join(f, g), grid)
    b = join(embed_step_to_grid(f, grid), embed_step_to_grid(g, grid))
    assert np.array_equal(a.coords, b.coords)


def test_order_absorption_on_rm():
    a = RmElement([1.0, -3.0, 2.0])
    b = RmElement([0.5, 4.0, 2.0])
    assert join(a, meet(a, b)) == a
    assert meet(a, join(a, b)) == a
