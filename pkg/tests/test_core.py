"""
Tests for core.py - Validation, ranges, fibers and subspaces
"""
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st


RECTANGLE = [
    [0, 3, 5, 4],
    [3, 0, 4, 5],
    [5, 4, 0, 3],
    [4, 5, 3, 0],
]


def test_parse_rational_wire_format():
    """Wire-format rationals parse to reduced Fractions"""
    from core import parse_rational

    assert parse_rational("6/4") == Fraction(3, 2)
    assert parse_rational(" -7 ") == Fraction(-7)
    assert parse_rational(5) == Fraction(5)
    assert parse_rational("0/3") == 0


@pytest.mark.parametrize("text", ["1.5", "1/0", "a", "", "1/-2", True, 1.5, None])
def test_parse_rational_rejects_malformed(text):
    """Anything outside the wire format is rejected"""
    from core import parse_rational

    with pytest.raises(ValueError):
        parse_rational(text)


def test_format_rational_omits_unit_denominator():
    """Integers print without a denominator"""
    from core import format_rational

    assert format_rational(Fraction(3, 2)) == "3/2"
    assert format_rational(Fraction(4, 2)) == "2"
    assert format_rational(Fraction(0)) == "0"


def test_validate_rectangle():
    """The 3-4-5 rectangle is a metric space"""
    from core import validate

    space = validate(["a", "b", "c", "d"], RECTANGLE)
    assert space.n == 4
    assert space.d("a", "c") == 5
    assert all(isinstance(v, Fraction) for row in space.dist for v in row)


def test_validate_zero_matrix():
    """The zero matrix is a valid pseudometric"""
    from core import validate

    space = validate(["a", "b", "c"], [[0] * 3 for _ in range(3)])
    assert space.d("a", "b") == 0


def test_validate_asymmetric_names_indices():
    """An asymmetric matrix fails with the first offending pair"""
    from core import Asymmetric, validate

    with pytest.raises(Asymmetric) as excinfo:
        validate(["a", "b"], [[0, 1], [2, 0]])
    assert str(excinfo.value) == "Asymmetric at (0,1)"
    assert excinfo.value.indices == (0, 1)
    assert excinfo.value.axiom == "Asymmetric"


def test_validate_triangle_violation_names_triple():
    """A triangle violation names (i, j, k)"""
    from core import TriangleViolation, validate

    with pytest.raises(TriangleViolation) as excinfo:
        validate(["a", "b", "c"], [[0, 1, 3], [1, 0, 1], [3, 1, 0]])
    assert excinfo.value.indices == (0, 1, 2)


@pytest.mark.parametrize("points, matrix, error", [
    ([], [], "EmptySpace"),
    (["a", "a"], [[0, 0], [0, 0]], "DuplicateLabel"),
    (["a", "b"], [[0, 1]], "NonSquare"),
    (["a", "b"], [[0, 1], [1]], "NonSquare"),
    (["a", "b"], [[0, 1.5], [1.5, 0]], "NonRational"),
    (["a", "b"], [[0, -1], [-1, 0]], "NegativeDistance"),
    (["a", "b"], [[1, 1], [1, 0]], "NonZeroDiagonal"),
])
def test_validate_rejects(points, matrix, error):
    """Each malformed input raises its own validation error"""
    import core

    with pytest.raises(getattr(core, error)):
        core.validate(points, matrix)


def test_validation_errors_share_base():
    """Axiom errors are ValueErrors through one base class"""
    from core import NegativeDistance, SpaceValidationError, validate

    assert issubclass(NegativeDistance, SpaceValidationError)
    with pytest.raises(ValueError):
        validate(["a", "b"], [[0, -1], [-1, 0]])


def test_distance_range_sorted_with_zero():
    """The range is sorted and starts at 0"""
    from core import distance_range, validate

    space = validate(["a", "b", "c", "d"], RECTANGLE)
    rng = distance_range(space)
    assert list(rng) == [0, 3, 4, 5]
    assert len(rng) == 4
    assert rng.nonzero() == (3, 4, 5)
    assert Fraction(4) in rng


def test_fiber_of_side():
    """The fiber of 3 in the rectangle is both orientations of both side-3 edges"""
    from core import fiber, validate

    space = validate(["a", "b", "c", "d"], RECTANGLE)
    assert fiber(space, 3) == {("a", "b"), ("b", "a"), ("c", "d"), ("d", "c")}


def test_fiber_of_zero_is_diagonal_for_metric():
    """The zero fiber of a metric space is the diagonal"""
    from core import fiber, validate

    space = validate(["a", "b", "c", "d"], RECTANGLE)
    assert fiber(space, 0) == {(p, p) for p in "abcd"}


def test_fiber_outside_range():
    """A value outside the range has no fiber"""
    from core import ValueNotInRange, fiber, validate

    space = validate(["a", "b", "c", "d"], RECTANGLE)
    with pytest.raises(ValueNotInRange):
        fiber(space, 7)


def test_subspace_restricts_and_keeps_order():
    """Subspace points keep the parent order"""
    from core import subspace, validate

    space = validate(["a", "b", "c", "d"], RECTANGLE)
    sub = subspace(space, ["c", "a"])
    assert sub.points == ("a", "c")
    assert sub.d("a", "c") == 5


def test_subspace_errors():
    """Empty subsets and unknown labels are rejected"""
    from core import EmptySubset, UnknownLabel, subspace, validate

    space = validate(["a", "b"], [[0, 1], [1, 0]])
    with pytest.raises(EmptySubset):
        subspace(space, [])
    with pytest.raises(UnknownLabel):
        subspace(space, ["z"])


def test_is_metric_subspace():
    """A subset is metric unless two of its points are at distance 0"""
    from core import is_metric_subspace, validate

    space = validate(["a", "b", "c"], [[0, 1, 1], [1, 0, 0], [1, 0, 0]])
    assert is_metric_subspace(space, ["a", "b"])
    assert not is_metric_subspace(space, ["b", "c"])


def test_value_codes_zero_is_code_zero():
    """Codes follow the sorted range"""
    from core import validate

    space = validate(["a", "b", "c"], [[0, "3/2", 1], ["3/2", 0, 1], [1, 1, 0]])
    codes = space.value_codes()
    assert codes.shape == (3, 3)
    assert codes[0, 0] == 0
    assert codes[0, 2] == 1
    assert codes[0, 1] == 2


def test_relabel_is_isometric_copy():
    """Relabeling pulls distances back along the permutation"""
    from core import relabel, validate

    space = validate(["a", "b", "c", "d"], RECTANGLE)
    moved = relabel(space, [1, 2, 3, 0])
    assert moved.points == space.points
    assert moved.dist[0][1] == space.dist[1][2]
    with pytest.raises(ValueError):
        relabel(space, [0, 0, 1, 2])


def test_map_values_revalidates():
    """Mapped values are checked against the axioms"""
    from core import TriangleViolation, map_values, validate

    space = validate(["a", "b", "c", "d"], RECTANGLE)
    shifted = map_values(space, {0: 0, 3: 4, 4: 5, 5: 6})
    assert shifted.d("a", "c") == 6
    with pytest.raises(TriangleViolation):
        map_values(space, {0: 0, 3: 1, 4: 1, 5: 6})


def test_inflate_adds_zero_twin():
    """A twin copies the distances of its original"""
    from core import DuplicateLabel, inflate, validate

    space = validate(["a", "b"], [[0, 2], [2, 0]])
    bigger = inflate(space, "a", "a'")
    assert bigger.points == ("a", "b", "a'")
    assert bigger.d("a", "a'") == 0
    assert bigger.d("b", "a'") == 2
    with pytest.raises(DuplicateLabel):
        inflate(space, "a", "b")


@settings(deadline=None, max_examples=50)
@given(st.lists(st.integers(min_value=1, max_value=9), min_size=1, max_size=6))
def test_line_metrics_validate(positions):
    """Distances between points on a line always satisfy the axioms"""
    from core import validate

    n = len(positions)
    matrix = [[abs(positions[i] - positions[j]) for j in range(n)] for i in range(n)]
    space = validate([f"p{i}" for i in range(n)], matrix)
    assert space.n == n


@settings(deadline=None, max_examples=50)
@given(
    st.integers(min_value=0, max_value=2 ** 32),
    st.integers(min_value=1, max_value=7),
    st.sampled_from(["generic", "discrete", "strongly-rigid", "near-miss"]),
)
def test_fields_revalidate_before_and_after_relabeling(seed, n, profile):
    """A space's own fields pass validation, also after permuting its points"""
    from construct import make_rng, random_space
    from core import relabel, validate

    if profile == "near-miss":
        n = max(n, 3)
    space = random_space(n, profile, seed)
    points, matrix = space.fields()
    assert validate(points, matrix) == space

    order = [int(k) for k in make_rng(seed).permutation(n)]
    moved = relabel(space, order)
    assert validate(*moved.fields()) == moved
    shuffled = validate([points[k] for k in order], [[matrix[i][j] for j in order] for i in order])
    assert shuffled.d(points[order[0]], points[order[-1]]) == space.d(points[order[0]], points[order[-1]])


@settings(deadline=None, max_examples=50)
@given(st.integers(min_value=0, max_value=2 ** 32), st.integers(min_value=1, max_value=8))
def test_subspace_of_subspace(seed, n):
    """Restricting to A and then to B ⊆ A is restricting to B"""
    from construct import make_rng, random_space
    from core import subspace

    space = random_space(n, "generic", seed)
    rng = make_rng(seed)
    outer = [space.points[int(k)] for k in rng.choice(n, size=int(rng.integers(1, n + 1)), replace=False)]
    inner = [outer[int(k)] for k in rng.choice(len(outer), size=int(rng.integers(1, len(outer) + 1)), replace=False)]
    assert subspace(subspace(space, outer), inner) == subspace(space, inner)
