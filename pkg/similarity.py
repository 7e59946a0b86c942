"""
Similarity - Decision procedures between two pseudometric spaces

This module searches for combinatorial similarities (a point bijection
together with a bijection of distance values), decides pseudoisometry via
the metric reflections, and implements the shortcuts that reduce
similarity to equality of zero-relations for discrete, strongly rigid and
pseudorectangle spaces on a common point set.
"""

import logging
from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterator, List, Optional, Tuple

from classify import is_discrete, is_pseudorectangle, is_strongly_rigid, metric_reflection
from config import DEFAULTS
from core import PseudometricSpace, TheoremViolation, distance_range, format_rational
from groups import TooLarge
from partition import canonical_projection, fiber_partition, partitions_equal, zero_relation

logger = logging.getLogger(__name__)


class SimilarityError(ValueError):
    pass


class PointSetMismatch(SimilarityError):
    pass


class WitnessError(SimilarityError):
    pass


@dataclass(frozen=True)
class SimilarityWitness:
    """
    A combinatorial similarity of (X, d) and (Y, ρ): psi maps the points of
    Y onto the points of X, f maps d(X²) onto ρ(Y²), and
    ρ(x, y) = f(d(psi(x), psi(y))) for all x, y in Y.
    """

    psi: Dict[str, str]
    f: Dict[Fraction, Fraction]

    def verify(self, space_x: PseudometricSpace, space_y: PseudometricSpace) -> "SimilarityWitness":
        """
        Re-check the witness on every pair.

        Raises:
            WitnessError: If psi or f is not a bijection, f(0) != 0, or some
                pair breaks ρ = f∘d∘(psi×psi)
        """
        if sorted(self.psi) != sorted(space_y.points) or sorted(self.psi.values()) != sorted(space_x.points):
            raise WitnessError("psi is not a bijection from Y onto X")
        range_x = set(distance_range(space_x))
        range_y = set(distance_range(space_y))
        if set(self.f) != range_x or set(self.f.values()) != range_y or len(range_x) != len(range_y):
            raise WitnessError("f is not a bijection between the distance ranges")
        if self.f[Fraction(0)] != 0:
            raise WitnessError("f(0) must be 0")
        for a in space_y.points:
            for b in space_y.points:
                if space_y.d(a, b) != self.f[space_x.d(self.psi[a], self.psi[b])]:
                    raise WitnessError(f"pair ({a},{b}) breaks the similarity")
        return self

    def inverse(self) -> "SimilarityWitness":
        """The witness for (Y, ρ) and (X, d)"""
        return SimilarityWitness(
            {x: y for y, x in self.psi.items()},
            {w: v for v, w in self.f.items()},
        )

    def compose(self, other: "SimilarityWitness") -> "SimilarityWitness":
        """
        Given self for (X, Y) and other for (Y, Z), the witness for (X, Z).
        """
        return SimilarityWitness(
            {z: self.psi[y] for z, y in other.psi.items()},
            {v: other.f[w] for v, w in self.f.items()},
        )

    def psi_table(self) -> List[Tuple[str, str]]:
        return sorted(self.psi.items())

    def f_table(self) -> List[Tuple[str, str]]:
        return [(format_rational(v), format_rational(w)) for v, w in sorted(self.f.items())]


def _fiber_sizes(space: PseudometricSpace) -> List[int]:
    counts = Counter(v for row in space.dist for v in row)
    return sorted(counts.values())


def _signatures(space: PseudometricSpace, fixed_values: bool) -> List[Tuple]:
    """
    Per-point invariant under every similarity: zero-class size and the
    multiset of row counts per distance value (with the values themselves
    when distances must be preserved exactly).
    """
    signatures = []
    for row in space.dist:
        counts = Counter(row)
        zero_class = counts[Fraction(0)]
        if fixed_values:
            profile = tuple(sorted(counts.items()))
        else:
            profile = tuple(sorted(counts.values()))
        signatures.append((zero_class, profile))
    return signatures


def rejection_reason(
    space_x: PseudometricSpace,
    space_y: PseudometricSpace,
    fixed_values: bool = False
) -> Optional[str]:
    """First cheap invariant that rules out a similarity, or None"""
    if space_x.n != space_y.n:
        return "point counts differ"
    range_x, range_y = distance_range(space_x), distance_range(space_y)
    if len(range_x) != len(range_y):
        return "range sizes differ"
    if fixed_values and range_x != range_y:
        return "distance ranges differ"
    zero_x = sorted(Counter(canonical_projection(space_x)).values())
    zero_y = sorted(Counter(canonical_projection(space_y)).values())
    if zero_x != zero_y:
        return "zero-class sizes differ"
    if _fiber_sizes(space_x) != _fiber_sizes(space_y):
        return "fiber sizes differ"
    if sorted(_signatures(space_x, fixed_values)) != sorted(_signatures(space_y, fixed_values)):
        return "point profiles differ"
    return None


def _check_bound(space: PseudometricSpace, bound: Optional[int]) -> None:
    if bound is None:
        bound = DEFAULTS["search_bound"]
    if space.n > bound:
        raise TooLarge(space.n, bound)


def _search(space_x: PseudometricSpace, space_y: PseudometricSpace, fixed_values: bool) -> Iterator[Tuple[int, ...]]:
    """
    Backtracking over bijections Y -> X with the induced value map kept
    consistent after every assignment, 0 pinned to 0. Yields image[y] = x.
    """
    n = space_y.n
    dx, dy = space_x.dist, space_y.dist
    sig_x = _signatures(space_x, fixed_values)
    sig_y = _signatures(space_y, fixed_values)
    candidates = [[x for x in range(n) if sig_x[x] == sig_y[y]] for y in range(n)]
    order = sorted(range(n), key=lambda y: (len(candidates[y]), -sig_y[y][0], y))

    image: List[Optional[int]] = [None] * n
    used = [False] * n
    f: Dict[Fraction, Fraction] = {Fraction(0): Fraction(0)}
    f_inv: Dict[Fraction, Fraction] = {Fraction(0): Fraction(0)}

    def extend(k: int) -> Iterator[Tuple[int, ...]]:
        if k == n:
            yield tuple(image)
            return
        y = order[k]
        for x in candidates[y]:
            if used[x]:
                continue
            added = []
            consistent = True
            for j in range(k):
                y2 = order[j]
                v = dx[x][image[y2]]
                w = dy[y][y2]
                if fixed_values:
                    if v != w:
                        consistent = False
                        break
                    continue
                known = f.get(v)
                if known is None:
                    if w in f_inv:
                        consistent = False
                        break
                    f[v] = w
                    f_inv[w] = v
                    added.append(v)
                elif known != w:
                    consistent = False
                    break
            if consistent:
                used[x] = True
                image[y] = x
                yield from extend(k + 1)
                used[x] = False
                image[y] = None
            for v in added:
                del f_inv[f.pop(v)]

    yield from extend(0)


def _witness(space_x: PseudometricSpace, space_y: PseudometricSpace, image: Tuple[int, ...]) -> SimilarityWitness:
    f = {}
    for a in range(space_y.n):
        for b in range(space_y.n):
            f[space_x.dist[image[a]][image[b]]] = space_y.dist[a][b]
    psi = {space_y.points[a]: space_x.points[image[a]] for a in range(space_y.n)}
    return SimilarityWitness(psi, f).verify(space_x, space_y)


def find_similarity(
    space_x: PseudometricSpace,
    space_y: PseudometricSpace,
    bound: Optional[int] = None,
    fixed_values: bool = False
) -> Optional[SimilarityWitness]:
    """
    Search for a combinatorial similarity of (X, d) and (Y, ρ).

    Args:
        space_x: The space (X, d)
        space_y: The space (Y, ρ)
        bound: Largest number of points searched (defaults to config)
        fixed_values: Require f to be the identity, i.e. search isometries

    Returns:
        A verified witness, or None when the exhaustive search finds none

    Raises:
        TooLarge: If the spaces exceed the search bound
    """
    reason = rejection_reason(space_x, space_y, fixed_values)
    if reason is not None:
        logger.debug("rejected without search: %s", reason)
        return None
    _check_bound(space_y, bound)
    for image in _search(space_x, space_y, fixed_values):
        return _witness(space_x, space_y, image)
    return None


def enumerate_similarities(
    space_x: PseudometricSpace,
    space_y: PseudometricSpace,
    bound: Optional[int] = None,
    fixed_values: bool = False
) -> List[SimilarityWitness]:
    """Every witness; the count is factorial in the worst case"""
    if rejection_reason(space_x, space_y, fixed_values) is not None:
        return []
    _check_bound(space_y, bound)
    return [_witness(space_x, space_y, image) for image in _search(space_x, space_y, fixed_values)]


def find_pseudoisometry(
    space_x: PseudometricSpace,
    space_y: PseudometricSpace,
    bound: Optional[int] = None
) -> Optional[Dict[str, str]]:
    """
    A map Φ: X -> Y with ρ(Φx, Φy) = d(x, y) for all x, y and every point of
    Y at distance zero from some Φ(v), or None.

    Built from an isometry of the metric reflections, sending each point to
    the earliest member of the matching zero-class of Y.
    """
    refl_x = metric_reflection(space_x)
    refl_y = metric_reflection(space_y)
    witness = find_similarity(refl_x.space, refl_y.space, bound, fixed_values=True)
    if witness is None:
        return None

    class_to_y = {x_cls: y_cls for y_cls, x_cls in witness.psi.items()}
    representative = {}
    for y, c in enumerate(refl_y.projection):
        representative.setdefault(refl_y.space.points[c], space_y.points[y])
    phi = {
        space_x.points[x]: representative[class_to_y[refl_x.space.points[c]]]
        for x, c in enumerate(refl_x.projection)
    }

    if not all(
        space_y.d(phi[a], phi[b]) == space_x.d(a, b)
        for a in space_x.points for b in space_x.points
    ):
        raise TheoremViolation("Φ does not preserve distances")
    if not all(
        any(space_y.d(phi[v], u) == 0 for v in space_x.points)
        for u in space_y.points
    ):
        raise TheoremViolation("Φ is not onto up to zero distance")
    return phi


def are_pseudoisometric(
    space_x: PseudometricSpace,
    space_y: PseudometricSpace,
    bound: Optional[int] = None
) -> bool:
    """True iff the metric reflections are isometric"""
    refl_x = metric_reflection(space_x).space
    refl_y = metric_reflection(space_y).space
    return find_similarity(refl_x, refl_y, bound, fixed_values=True) is not None


def _check_same_points(space_x: PseudometricSpace, space_y: PseudometricSpace) -> None:
    if set(space_x.points) != set(space_y.points):
        raise PointSetMismatch("PointSetMismatch: spaces live on different point sets")


def similar_iff_same_zero(
    space_x: PseudometricSpace,
    space_y: PseudometricSpace,
    bound: Optional[int] = None
) -> Tuple[bool, bool]:
    """
    Decide similarity of two spaces on one point set by their zero-relations.

    When both spaces are discrete, both strongly rigid or both
    pseudorectangles, the identity of the common point set is a similarity
    exactly when the zero-relations coincide, and that is the verdict.
    Similarity through some other bijection is a weaker condition (equal
    zero-class size multisets) and is left to `find_similarity`.
    Otherwise the verdict falls back to the witness search.

    Returns:
        (verdict, applicable)

    Raises:
        PointSetMismatch: If the point sets differ
    """
    _check_same_points(space_x, space_y)
    applicable = any(
        predicate(space_x) and predicate(space_y)
        for predicate in (is_discrete, is_strongly_rigid, is_pseudorectangle)
    )
    if applicable:
        return zero_relation(space_x).pairs == zero_relation(space_y).pairs, True
    return find_similarity(space_x, space_y, bound) is not None, False


def identity_similarity_from_fibers(
    space_x: PseudometricSpace,
    space_y: PseudometricSpace
) -> Optional[SimilarityWitness]:
    """
    The identity witness when the fiber partitions of d and ρ coincide,
    with f read off block by block; None otherwise.

    Raises:
        PointSetMismatch: If the point sets differ
    """
    _check_same_points(space_x, space_y)
    p_x = fiber_partition(space_x)
    if not partitions_equal(p_x, fiber_partition(space_y)):
        return None
    f = {}
    for block in p_x.blocks:
        a, b = next(iter(block))
        f[space_x.d(a, b)] = space_y.d(a, b)
    psi = {p: p for p in space_y.points}
    return SimilarityWitness(psi, f).verify(space_x, space_y)
