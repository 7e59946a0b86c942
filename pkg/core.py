"""
Core - Exact finite pseudometric spaces

This module holds the representation of finite pseudometric spaces with
exact rational distances, the axiom checks performed on construction, and
the basic queries used everywhere else: the distance range, fibers of the
distance function and subspaces.
"""

import logging
import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, FrozenSet, Iterable, Iterator, List, Sequence, Tuple, Union

import numpy as np

logger = logging.getLogger(__name__)

Rational = Fraction
Pair = Tuple[str, str]

RATIONAL_PATTERN = re.compile(r'^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$')


class TheoremViolation(AssertionError):
    """A guaranteed result failed, or two independent methods disagreed"""
    pass


class SpaceValidationError(ValueError):
    """Base class for every violated pseudometric axiom or malformed space"""

    axiom = "Invalid"

    def __init__(self, message: str, indices: Tuple[int, ...] = ()):
        self.indices = tuple(indices)
        super().__init__(message)


class EmptySpace(SpaceValidationError):
    axiom = "EmptySpace"


class NonSquare(SpaceValidationError):
    axiom = "NonSquare"


class DuplicateLabel(SpaceValidationError):
    axiom = "DuplicateLabel"


class NonRational(SpaceValidationError):
    axiom = "NonRational"


class NegativeDistance(SpaceValidationError):
    axiom = "NegativeDistance"


class NonZeroDiagonal(SpaceValidationError):
    axiom = "NonZeroDiagonal"


class Asymmetric(SpaceValidationError):
    axiom = "Asymmetric"


class TriangleViolation(SpaceValidationError):
    axiom = "TriangleViolation"


class ValueNotInRange(SpaceValidationError):
    axiom = "ValueNotInRange"


class EmptySubset(SpaceValidationError):
    axiom = "EmptySubset"


class UnknownLabel(SpaceValidationError):
    axiom = "UnknownLabel"


def _at(error_cls, indices: Tuple[int, ...]) -> SpaceValidationError:
    where = ",".join(str(i) for i in indices)
    return error_cls(f"{error_cls.axiom} at ({where})", indices)


def parse_rational(text: Union[str, int, Fraction]) -> Fraction:
    """
    Parse a rational in wire format.

    The wire format is an optional sign, an integer, and optionally a "/"
    followed by a positive integer. Python ints and Fractions pass through.

    Args:
        text: Wire-format string, int or Fraction

    Returns:
        The value as a Fraction in lowest terms

    Raises:
        ValueError: If the text is not a wire-format rational

    Examples:
        >>> parse_rational("6/4")
        Fraction(3, 2)
        >>> parse_rational(-7)
        Fraction(-7, 1)
    """
    if isinstance(text, bool):
        raise ValueError(f"Not a rational: {text!r}")
    if isinstance(text, (int, Fraction)):
        return Fraction(text)
    if not isinstance(text, str):
        raise ValueError(f"Not a rational: {text!r}")

    match = RATIONAL_PATTERN.match(text)
    if not match:
        raise ValueError(f"Not a rational: {text!r}")

    numerator, denominator = match.groups()
    if denominator is not None and int(denominator) == 0:
        raise ValueError(f"Zero denominator in {text!r}")
    return Fraction(int(numerator), int(denominator or 1))


def format_rational(value: Fraction) -> str:
    """Canonical "p/q" text, with "/q" omitted when q is 1"""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True)
class DistanceRange:
    """Sorted distinct values d(X²) of a pseudometric"""

    values: Tuple[Fraction, ...]

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self.values)

    def __contains__(self, value) -> bool:
        return Fraction(value) in self.values

    def index(self, value) -> int:
        return self.values.index(Fraction(value))

    def nonzero(self) -> Tuple[Fraction, ...]:
        return tuple(v for v in self.values if v != 0)


@dataclass(frozen=True)
class PseudometricSpace:
    """
    A finite pseudometric space.

    Instances are built with `validate`, which checks every axiom; the
    constructor itself trusts its input and is used by operations whose
    output is valid by construction (subspaces, quotients, relabelings).
    """

    points: Tuple[str, ...]
    dist: Tuple[Tuple[Fraction, ...], ...]

    def __len__(self) -> int:
        return len(self.points)

    @property
    def n(self) -> int:
        return len(self.points)

    def index(self, label: str) -> int:
        try:
            return self.points.index(label)
        except ValueError:
            raise UnknownLabel(f"Unknown point label '{label}'") from None

    def d(self, x: str, y: str) -> Fraction:
        """Distance between two labelled points"""
        return self.dist[self.index(x)][self.index(y)]

    def value_codes(self) -> np.ndarray:
        """
        Integer matrix whose entry (i, j) is the position of d(i, j) in the
        sorted distance range. Code 0 is always the zero distance.
        """
        values = distance_range(self).values
        lookup = {v: k for k, v in enumerate(values)}
        return np.array(
            [[lookup[v] for v in row] for row in self.dist],
            dtype=np.int64
        ).reshape(self.n, self.n)

    def fields(self) -> Tuple[List[str], List[List[Fraction]]]:
        """Plain (points, matrix) pair accepted back by `validate`"""
        return list(self.points), [list(row) for row in self.dist]


def validate(
    points: Sequence[str],
    matrix: Sequence[Sequence[Union[Fraction, int, str]]]
) -> PseudometricSpace:
    """
    Validate labels and a distance matrix and build a pseudometric space.

    Checks run in a fixed order and each failure names the first offending
    index tuple in row-major order.

    Args:
        points: Distinct point labels
        matrix: n×n matrix of rationals (Fraction, int or wire-format str)

    Returns:
        The validated PseudometricSpace

    Raises:
        EmptySpace, DuplicateLabel, NonSquare, NonRational, NegativeDistance,
        NonZeroDiagonal, Asymmetric, TriangleViolation
    """
    points = tuple(str(p) for p in points)
    n = len(points)
    if n == 0:
        raise EmptySpace("A pseudometric space must be nonempty")

    seen: Dict[str, int] = {}
    for i, label in enumerate(points):
        if label in seen:
            raise _at(DuplicateLabel, (seen[label], i))
        seen[label] = i

    rows = list(matrix)
    if len(rows) != n:
        raise NonSquare(f"NonSquare: {len(rows)} rows for {n} points", (len(rows),))
    for i, row in enumerate(rows):
        if len(row) != n:
            raise _at(NonSquare, (i,))

    dist: List[List[Fraction]] = []
    for i, row in enumerate(rows):
        converted = []
        for j, entry in enumerate(row):
            if isinstance(entry, float):
                raise _at(NonRational, (i, j))
            try:
                converted.append(parse_rational(entry))
            except ValueError:
                raise _at(NonRational, (i, j)) from None
        dist.append(converted)

    matrix_arr = np.empty((n, n), dtype=object)
    for i in range(n):
        for j in range(n):
            matrix_arr[i, j] = dist[i][j]

    negative = np.argwhere(matrix_arr < 0)
    if len(negative):
        raise _at(NegativeDistance, tuple(int(k) for k in negative[0]))

    nonzero_diagonal = np.flatnonzero(np.diagonal(matrix_arr) != 0)
    if len(nonzero_diagonal):
        i = int(nonzero_diagonal[0])
        raise _at(NonZeroDiagonal, (i, i))

    asymmetric = np.argwhere(matrix_arr != matrix_arr.T)
    if len(asymmetric):
        i, j = sorted(int(k) for k in asymmetric[0])
        raise _at(Asymmetric, (i, j))

    # violation[i, j, k] is d(i,k) > d(i,j) + d(j,k)
    detour = matrix_arr[:, :, None] + matrix_arr[None, :, :]
    violation = matrix_arr[:, None, :] > detour
    offending = np.argwhere(violation)
    if len(offending):
        raise _at(TriangleViolation, tuple(int(k) for k in offending[0]))

    logger.debug("validated pseudometric space on %d points", n)
    return PseudometricSpace(points, tuple(tuple(row) for row in dist))


def distance_range(space: PseudometricSpace) -> DistanceRange:
    """
    The range d(X²) of the pseudometric, sorted ascending.

    Raises:
        EmptySpace: If the space has no points
    """
    if space.n == 0:
        raise EmptySpace("The range of an empty space is undefined")
    values = {v for row in space.dist for v in row}
    return DistanceRange(tuple(sorted(values)))


def fiber(space: PseudometricSpace, t) -> FrozenSet[Pair]:
    """
    The fiber d⁻¹(t) as a set of ordered label pairs.

    Raises:
        ValueNotInRange: If t is not a distance of the space
    """
    t = Fraction(t)
    if t not in distance_range(space):
        raise ValueNotInRange(f"ValueNotInRange: {format_rational(t)}")
    return frozenset(
        (space.points[i], space.points[j])
        for i in range(space.n)
        for j in range(space.n)
        if space.dist[i][j] == t
    )


def _subset_indices(space: PseudometricSpace, subset: Iterable[str]) -> List[int]:
    labels = list(subset)
    if not labels:
        raise EmptySubset("Subset must be nonempty")
    indices = {space.index(label) for label in labels}
    return sorted(indices)


def subspace(space: PseudometricSpace, subset: Iterable[str]) -> PseudometricSpace:
    """
    Restrict the space to a nonempty subset of its points.

    Points keep the order they have in the parent space.

    Raises:
        EmptySubset: If the subset is empty
        UnknownLabel: If a label is not a point of the space
    """
    indices = _subset_indices(space, subset)
    return PseudometricSpace(
        tuple(space.points[i] for i in indices),
        tuple(tuple(space.dist[i][j] for j in indices) for i in indices)
    )


def is_metric_subspace(space: PseudometricSpace, subset: Iterable[str]) -> bool:
    """True iff distinct points of the subset are at positive distance"""
    indices = _subset_indices(space, subset)
    return all(
        space.dist[i][j] > 0
        for a, i in enumerate(indices)
        for j in indices[a + 1:]
    )


def relabel(space: PseudometricSpace, mapping: Sequence[int]) -> PseudometricSpace:
    """
    Pull the pseudometric back along a permutation of point positions.

    The result has the same labels and distance rho(i, j) = d(mapping[i],
    mapping[j]), so `mapping` is an isometry from the result onto `space`.
    """
    if sorted(mapping) != list(range(space.n)):
        raise ValueError(f"Not a permutation of {space.n} points: {list(mapping)}")
    return PseudometricSpace(
        space.points,
        tuple(
            tuple(space.dist[mapping[i]][mapping[j]] for j in range(space.n))
            for i in range(space.n)
        )
    )


def map_values(space: PseudometricSpace, values: Dict[Fraction, Fraction]) -> PseudometricSpace:
    """
    Replace every distance t by values[t].

    The image is revalidated, so a relabeling that breaks the triangle
    inequality raises TriangleViolation.
    """
    lookup = {Fraction(k): Fraction(v) for k, v in values.items()}
    missing = [v for v in distance_range(space) if v not in lookup]
    if missing:
        raise ValueNotInRange(f"ValueNotInRange: no image for {format_rational(missing[0])}")
    return validate(space.points, [[lookup[v] for v in row] for row in space.dist])


def inflate(space: PseudometricSpace, label: str, twin: str) -> PseudometricSpace:
    """Add a new point `twin` at distance zero from `label`"""
    i = space.index(label)
    if twin in space.points:
        raise DuplicateLabel(f"DuplicateLabel: '{twin}' already present")
    rows = [list(row) + [row[i]] for row in space.dist]
    rows.append(list(space.dist[i]) + [Fraction(0)])
    return PseudometricSpace(space.points + (twin,), tuple(tuple(r) for r in rows))
