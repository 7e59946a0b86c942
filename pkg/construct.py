"""
Construct - Spaces realizing prescribed zero-relations

This module realizes a finite equivalence relation as the zero-relation of
a discrete, strongly rigid or pseudorectangle pseudometric, generates
seeded random spaces for property testing, provides a few named instances,
and checks on samples that the three classes are closed under
pseudoisometry, same-zero-relation partners and subspaces.

All nonzero constructed distances lie in the open interval (1, 2), so the
triangle inequality holds without further care. Values are drawn from the
evenly spaced schedule 1 + k/(K+1), k = 1..K, shuffled with
numpy.random.default_rng(seed).permutation (PCG64).
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Callable, Dict, List, Optional, Sequence, Tuple

import numpy as np

from classify import is_discrete, is_pseudorectangle, is_strongly_rigid, metric_reflection
from core import PseudometricSpace, distance_range, inflate, relabel, subspace, validate
from partition import (
    EquivalenceRelation,
    Partition,
    WrongBlockCount,
    partition_from_relation,
    relation_from_blocks,
    zero_relation,
)
from similarity import identity_similarity_from_fibers

logger = logging.getLogger(__name__)

SEED_MAX = 2 ** 64 - 1

PROFILES = ("generic", "discrete", "strongly-rigid", "pseudorectangle", "near-miss")

CLASS_TAGS = ("strongly-rigid", "discrete", "pseudorectangle")


class ConstructionError(ValueError):
    pass


class BadSize(ConstructionError):
    pass


class BadSeed(ConstructionError):
    pass


class ClosureViolation(ConstructionError):
    """A closure condition failed; carries the space that broke it"""

    def __init__(self, condition: str, witness: PseudometricSpace):
        self.condition = condition
        self.witness = witness
        super().__init__(f"ClosureViolation: {condition} fails on points {list(witness.points)}")


def make_rng(seed: int) -> np.random.Generator:
    if isinstance(seed, bool) or not isinstance(seed, (int, np.integer)) or not 0 <= seed <= SEED_MAX:
        raise BadSeed(f"BadSeed: seeds are integers in 0..{SEED_MAX}, got {seed!r}")
    return np.random.default_rng(int(seed))


def _schedule(count: int, rng: np.random.Generator) -> List[Fraction]:
    """count distinct rationals 1 + k/(count+1) in (1, 2), in shuffled order"""
    values = [1 + Fraction(k, count + 1) for k in range(1, count + 1)]
    return [values[int(k)] for k in rng.permutation(count)]


def value_schedule(count: int, seed: int = 0) -> List[Fraction]:
    """
    The documented value schedule for `count` values and a seed.

    Raises:
        BadSeed: If the seed is not a 64-bit unsigned integer
    """
    return _schedule(count, make_rng(seed))


def point_labels(n: int) -> Tuple[str, ...]:
    return tuple(f"x{i}" for i in range(n))


def _from_blocks(part: Partition, value: Callable[[int, int], Fraction]) -> PseudometricSpace:
    """
    Distance 0 inside a block and value(b1, b2), b1 < b2, across blocks.
    The result is revalidated.
    """
    index = part.block_index()
    ground = part.ground
    rows = []
    for x in ground:
        row = []
        for y in ground:
            bx, by = index[x], index[y]
            row.append(Fraction(0) if bx == by else value(min(bx, by), max(bx, by)))
        rows.append(row)
    return validate(ground, rows)


def discrete_from_relation(rel: EquivalenceRelation) -> PseudometricSpace:
    """
    d = 0 inside blocks and 1 across them.

    Raises:
        NotAnEquivalence: If rel is not an equivalence relation
    """
    part = partition_from_relation(rel)
    return _from_blocks(part, lambda a, b: Fraction(1))


def _strongly_rigid(part: Partition, rng: np.random.Generator) -> PseudometricSpace:
    pairs = list(combinations(range(len(part)), 2))
    values = dict(zip(pairs, _schedule(len(pairs), rng)))
    return _from_blocks(part, lambda a, b: values[(a, b)])


def strongly_rigid_from_relation(rel: EquivalenceRelation, seed: int = 0) -> PseudometricSpace:
    """
    A distinct value in (1, 2) for every unordered pair of distinct blocks.

    Raises:
        NotAnEquivalence: If rel is not an equivalence relation
        BadSeed: If the seed is out of range
    """
    part = partition_from_relation(rel)
    return _strongly_rigid(part, make_rng(seed))


# Matching of the four blocks each of the three values is spread over
_MATCHINGS = (((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2)))


def _pseudorectangle(part: Partition, values: Sequence[Fraction]) -> PseudometricSpace:
    if len(part) != 4:
        raise WrongBlockCount(f"WrongBlockCount: a pseudorectangle needs 4 blocks, got {len(part)}")
    lookup = {}
    for matching, v in zip(_MATCHINGS, values):
        for pair in matching:
            lookup[pair] = v
    return _from_blocks(part, lambda a, b: lookup[(a, b)])


def pseudorectangle_from_relation(
    rel: EquivalenceRelation,
    seed: int = 0,
    values: Optional[Sequence] = None
) -> PseudometricSpace:
    """
    Spread three distinct values over the three perfect matchings of the
    four blocks, zero inside blocks.

    Args:
        rel: An equivalence relation with exactly four blocks
        seed: Seed for the value schedule
        values: Explicit three distinct positive values, overriding the seed

    Raises:
        WrongBlockCount: If rel does not have exactly four blocks
        ConstructionError: If explicit values are not three distinct positives
        TriangleViolation: If explicit values break the triangle inequality
    """
    part = partition_from_relation(rel)
    if len(part) != 4:
        raise WrongBlockCount(f"WrongBlockCount: a pseudorectangle needs 4 blocks, got {len(part)}")
    if values is None:
        values = _schedule(3, make_rng(seed))
    else:
        values = [Fraction(v) for v in values]
        if len(values) != 3 or len(set(values)) != 3 or min(values) <= 0:
            raise ConstructionError("A pseudorectangle needs three distinct positive values")
    return _pseudorectangle(part, values)


def _random_partition(n: int, rng: np.random.Generator, blocks: Optional[int] = None) -> Partition:
    """A random partition of n labelled points into `blocks` nonempty blocks"""
    if blocks is None:
        blocks = int(rng.integers(1, n + 1))
    order = rng.permutation(n)
    assignment = [0] * n
    for k, x in enumerate(order):
        assignment[int(x)] = k if k < blocks else int(rng.integers(0, blocks))
    labels = point_labels(n)
    grouped = [[labels[x] for x in range(n) if assignment[x] == b] for b in range(blocks)]
    return Partition.from_blocks(labels, grouped)


def random_relation(n: int, seed: int = 0, blocks: Optional[int] = None) -> EquivalenceRelation:
    """
    A seeded random equivalence relation on x0..x{n-1}.

    Raises:
        BadSize: If n < 1 or the block count is not in 1..n
        BadSeed: If the seed is out of range
    """
    if n < 1:
        raise BadSize(f"BadSize: need at least one point, got {n}")
    if blocks is not None and not 1 <= blocks <= n:
        raise BadSize(f"BadSize: {blocks} blocks on {n} points")
    part = _random_partition(n, make_rng(seed), blocks)
    return relation_from_blocks(part.ground, part.blocks)


def _generic(part: Partition, rng: np.random.Generator) -> PseudometricSpace:
    """Each block pair takes one of r random values, r itself random"""
    pairs = list(combinations(range(len(part)), 2))
    if not pairs:
        return _from_blocks(part, lambda a, b: Fraction(1))
    r = int(rng.integers(1, len(pairs) + 1))
    values = _schedule(r, rng)
    chosen = {pair: values[int(rng.integers(0, r))] for pair in pairs}
    return _from_blocks(part, lambda a, b: chosen[(a, b)])


def generic_from_relation(rel: EquivalenceRelation, seed: int = 0) -> PseudometricSpace:
    """
    A space with zero-relation rel and random value multiplicities across
    blocks, all values in (1, 2).

    Raises:
        NotAnEquivalence: If rel is not an equivalence relation
        BadSeed: If the seed is out of range
    """
    return _generic(partition_from_relation(rel), make_rng(seed))


def _near_miss(n: int, rng: np.random.Generator, seed: int) -> PseudometricSpace:
    """
    A space that is neither discrete, strongly rigid nor a pseudorectangle:
    a pseudorectangle with two matching values merged (odd seeds, n >= 4),
    otherwise a strongly rigid space on >= 3 classes with two block pairs
    sharing a class given the same value.
    """
    if n < 3:
        raise BadSize(f"BadSize: near-miss spaces need at least 3 points, got {n}")
    if seed % 2 == 1 and n >= 4:
        part = _random_partition(n, rng, 4)
        a, b = _schedule(2, rng)
        return _pseudorectangle(part, [a, a, b])
    part = _random_partition(n, rng, int(rng.integers(3, n + 1)))
    pairs = list(combinations(range(len(part)), 2))
    values = dict(zip(pairs, _schedule(len(pairs), rng)))
    values[(0, 2)] = values[(0, 1)]
    return _from_blocks(part, lambda a, b: values[(a, b)])


def random_space(n: int, profile: str = "generic", seed: int = 0) -> PseudometricSpace:
    """
    A seeded random space of the given profile on x0..x{n-1}.

    Args:
        n: Number of points
        profile: One of generic, discrete, strongly-rigid, pseudorectangle,
            near-miss
        seed: 64-bit unsigned seed; equal arguments give equal spaces

    Raises:
        BadSize: If n < 1, or n < 4 for pseudorectangles, or n < 3 for
            near-miss spaces
        BadSeed: If the seed is out of range
        ConstructionError: If the profile is unknown
    """
    if n < 1:
        raise BadSize(f"BadSize: need at least one point, got {n}")
    if profile not in PROFILES:
        raise ConstructionError(f"Unknown profile '{profile}', expected one of {', '.join(PROFILES)}")
    rng = make_rng(seed)

    if profile == "generic":
        space = _generic(_random_partition(n, rng), rng)
    elif profile == "discrete":
        space = _from_blocks(_random_partition(n, rng), lambda a, b: Fraction(1))
    elif profile == "strongly-rigid":
        space = _strongly_rigid(_random_partition(n, rng), rng)
    elif profile == "pseudorectangle":
        if n < 4:
            raise BadSize(f"BadSize: a pseudorectangle needs at least 4 points, got {n}")
        space = _pseudorectangle(_random_partition(n, rng, 4), _schedule(3, rng))
    else:
        space = _near_miss(n, rng, seed)

    logger.debug("random %s space on %d points (seed %d)", profile, n, seed)
    return space


# Named instances

def zero_space(n: int) -> PseudometricSpace:
    """All distances zero"""
    if n < 1:
        raise BadSize(f"BadSize: need at least one point, got {n}")
    return validate(point_labels(n), [[0] * n for _ in range(n)])


def equidistant_space(n: int) -> PseudometricSpace:
    """Distance 1 between any two distinct points"""
    if n < 1:
        raise BadSize(f"BadSize: need at least one point, got {n}")
    return validate(point_labels(n), [[int(i != j) for j in range(n)] for i in range(n)])


def rectangle_345() -> PseudometricSpace:
    """Vertices a, b, c, d of a 3×4 rectangle: sides 3 and 4, diagonals 5"""
    return validate(
        ["a", "b", "c", "d"],
        [
            [0, 3, 5, 4],
            [3, 0, 4, 5],
            [5, 4, 0, 3],
            [4, 5, 3, 0],
        ]
    )


# Class closure

def in_class(space: PseudometricSpace, class_tag: str) -> bool:
    """
    Membership in the class named by the tag. The pseudorectangle tag
    stands for pseudorectangles together with the strongly rigid spaces
    with at most four distances.
    """
    if class_tag == "discrete":
        return is_discrete(space)
    if class_tag == "strongly-rigid":
        return is_strongly_rigid(space)
    if class_tag == "pseudorectangle":
        return is_pseudorectangle(space) or (
            is_strongly_rigid(space) and len(distance_range(space)) <= 4
        )
    raise ConstructionError(f"Unknown class '{class_tag}', expected one of {', '.join(CLASS_TAGS)}")


def partner_in_class(space: PseudometricSpace, class_tag: str, seed: int = 0) -> PseudometricSpace:
    """
    Another space of the same class on the same points with the same
    zero-relation, built from a fresh seed.
    """
    rel = zero_relation(space)
    if class_tag == "discrete":
        (value,) = value_schedule(1, seed)
        part = partition_from_relation(rel)
        return _from_blocks(part, lambda a, b: value)
    if class_tag == "pseudorectangle" and is_pseudorectangle(space):
        return pseudorectangle_from_relation(rel, seed)
    return strongly_rigid_from_relation(rel, seed)


@dataclass
class ClosureReport:
    """Counts of the checks performed by `check_class_closure`"""

    class_tag: str
    spaces: int = 0
    pseudoisometric_copies: int = 0
    identity_witnesses: int = 0
    subspaces: int = 0
    subspace_ranges: Dict[int, int] = field(default_factory=dict)

    def to_dict(self) -> Dict:
        return {
            "class": self.class_tag,
            "spaces": self.spaces,
            "pseudoisometric_copies": self.pseudoisometric_copies,
            "identity_witnesses": self.identity_witnesses,
            "subspaces": self.subspaces,
            "subspace_ranges": {str(k): v for k, v in sorted(self.subspace_ranges.items())},
        }


def check_class_closure(
    class_tag: str,
    sample: Sequence[PseudometricSpace],
    seed: int = 0
) -> ClosureReport:
    """
    Check on a sample that the class is closed under pseudoisometric
    copies, that same-zero-relation partners are similar through the
    identity, and that every nonempty subspace stays in the class.

    Pseudoisometric copies checked per space: the metric reflection, a
    seeded relabeling of the points, and the space with a zero-distance
    twin of its first point added.

    Args:
        class_tag: strongly-rigid, discrete or pseudorectangle
        sample: Spaces of the class
        seed: Seed for relabelings and partner spaces

    Returns:
        ClosureReport

    Raises:
        ConstructionError: If a sample space is not in the class
        ClosureViolation: If a closure condition fails
    """
    if class_tag not in CLASS_TAGS:
        raise ConstructionError(f"Unknown class '{class_tag}', expected one of {', '.join(CLASS_TAGS)}")
    rng = make_rng(seed)
    report = ClosureReport(class_tag)

    for k, space in enumerate(sample):
        if not in_class(space, class_tag):
            raise ConstructionError(f"Sample space {k} is not in the class {class_tag}")
        report.spaces += 1

        copies = [
            metric_reflection(space).space,
            relabel(space, [int(i) for i in rng.permutation(space.n)]),
            inflate(space, space.points[0], f"{space.points[0]}'"),
        ]
        for copy in copies:
            if not in_class(copy, class_tag):
                raise ClosureViolation("pseudoisometric copy", copy)
            report.pseudoisometric_copies += 1

        partner = partner_in_class(space, class_tag, int(rng.integers(0, 2 ** 63)))
        if identity_similarity_from_fibers(space, partner) is None:
            raise ClosureViolation("identity witness", partner)
        report.identity_witnesses += 1

        for size in range(1, space.n + 1):
            for subset in combinations(space.points, size):
                sub = subspace(space, subset)
                if not in_class(sub, class_tag):
                    raise ClosureViolation("subspace", sub)
                report.subspaces += 1
                r = len(distance_range(sub))
                report.subspace_ranges[r] = report.subspace_ranges.get(r, 0) + 1

    logger.debug("closure of %s checked on %d spaces", class_tag, report.spaces)
    return report
