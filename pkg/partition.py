"""
Partition - Partitions, equivalence relations and fiber products

This module provides partitions of finite ground sets (points or ordered
pairs of points), the equivalence relations they correspond to, the
zero-relation of a pseudometric, the fiber partition of X², and the three
products Q⊗₁Q, Q⊗₂Q and Q⊗₃Q of a point partition with itself.
"""

import logging
from dataclasses import dataclass
from itertools import combinations
from typing import Dict, FrozenSet, Hashable, Iterable, List, Optional, Sequence, Tuple

from core import PseudometricSpace, distance_range

logger = logging.getLogger(__name__)

Element = Hashable


class PartitionError(ValueError):
    """Base class for malformed partitions and relations"""
    pass


class NotAPartition(PartitionError):
    pass


class NotAnEquivalence(PartitionError):
    """Raised with the (x, y, z) triple witnessing the failed property"""

    def __init__(self, prop: str, witness: Tuple):
        self.prop = prop
        self.witness = tuple(witness)
        super().__init__(f"NotAnEquivalence: {prop} fails at {self.witness}")


class WrongBlockCount(PartitionError):
    pass


class GroundMismatch(PartitionError):
    pass


@dataclass(frozen=True)
class Partition:
    """
    A partition of an ordered ground set.

    Blocks are stored in normal form, sorted by the ground position of
    their earliest member, so equal partitions of equal grounds compare
    equal as values.
    """

    ground: Tuple[Element, ...]
    blocks: Tuple[FrozenSet[Element], ...]

    @classmethod
    def from_blocks(cls, ground: Iterable[Element], blocks: Iterable[Iterable[Element]]) -> "Partition":
        """
        Build a partition, checking that blocks are nonempty, disjoint and
        cover the ground set.

        Raises:
            NotAPartition: If any of the three conditions fails
        """
        ground = tuple(ground)
        position = {x: k for k, x in enumerate(ground)}
        if len(position) != len(ground):
            raise NotAPartition("Ground set has repeated elements")

        seen: Dict[Element, int] = {}
        frozen = []
        for b, block in enumerate(blocks):
            block = frozenset(block)
            if not block:
                raise NotAPartition(f"Block {b} is empty")
            for x in block:
                if x not in position:
                    raise NotAPartition(f"Block {b} contains {x!r}, which is not in the ground set")
                if x in seen:
                    raise NotAPartition(f"{x!r} lies in blocks {seen[x]} and {b}")
                seen[x] = b
            frozen.append(block)

        if len(seen) != len(ground):
            missing = next(x for x in ground if x not in seen)
            raise NotAPartition(f"{missing!r} is not covered by any block")

        frozen.sort(key=lambda blk: min(position[x] for x in blk))
        return cls(ground, tuple(frozen))

    def __len__(self) -> int:
        return len(self.blocks)

    def block_of(self, x: Element) -> FrozenSet[Element]:
        for block in self.blocks:
            if x in block:
                return block
        raise KeyError(x)

    def block_index(self) -> Dict[Element, int]:
        """Map every ground element to the index of its block"""
        return {x: b for b, block in enumerate(self.blocks) for x in block}

    def sizes(self) -> List[int]:
        return [len(block) for block in self.blocks]

    def ordered_block(self, b: int) -> List[Element]:
        """Members of block b in ground order"""
        block = self.blocks[b]
        return [x for x in self.ground if x in block]


@dataclass(frozen=True)
class EquivalenceRelation:
    """A binary relation on an ordered ground set, given by its pairs"""

    ground: Tuple[Element, ...]
    pairs: FrozenSet[Tuple[Element, Element]]

    def __contains__(self, pair) -> bool:
        return tuple(pair) in self.pairs

    def witness_failure(self) -> Optional[Tuple[str, Tuple]]:
        """
        First failing property with its witness, or None for an
        equivalence relation. Witnesses are triples (x, y, z); unused
        positions repeat the last element.
        """
        for x in self.ground:
            if (x, x) not in self.pairs:
                return "reflexivity", (x, x, x)
        for x, y in sorted(self.pairs, key=repr):
            if (y, x) not in self.pairs:
                return "symmetry", (x, y, y)
        successors: Dict[Element, List[Element]] = {}
        for x, y in self.pairs:
            successors.setdefault(x, []).append(y)
        for x in self.ground:
            for y in successors.get(x, []):
                for z in successors.get(y, []):
                    if (x, z) not in self.pairs:
                        return "transitivity", (x, y, z)
        return None

    def check(self) -> "EquivalenceRelation":
        """
        Raises:
            NotAnEquivalence: If reflexivity, symmetry or transitivity fails
        """
        failure = self.witness_failure()
        if failure is not None:
            raise NotAnEquivalence(*failure)
        return self

    def is_equivalence(self) -> bool:
        return self.witness_failure() is None


def relation_from_partition(part: Partition) -> EquivalenceRelation:
    """The relation R = ∪ blocks²"""
    pairs = frozenset((x, y) for block in part.blocks for x in block for y in block)
    return EquivalenceRelation(part.ground, pairs)


def partition_from_relation(rel: EquivalenceRelation) -> Partition:
    """
    The quotient set of an equivalence relation.

    Raises:
        NotAnEquivalence: If rel is not an equivalence relation
    """
    rel.check()
    classes: List[FrozenSet[Element]] = []
    assigned = set()
    for a in rel.ground:
        if a in assigned:
            continue
        cls = frozenset(x for x in rel.ground if (x, a) in rel.pairs)
        assigned |= cls
        classes.append(cls)
    return Partition.from_blocks(rel.ground, classes)


def relation_from_blocks(ground: Iterable[Element], blocks: Iterable[Iterable[Element]]) -> EquivalenceRelation:
    return relation_from_partition(Partition.from_blocks(ground, blocks))


def zero_relation(space: PseudometricSpace) -> EquivalenceRelation:
    """The relation x ≅₀ y iff d(x, y) = 0"""
    pts = space.points
    pairs = frozenset(
        (pts[i], pts[j])
        for i in range(space.n)
        for j in range(space.n)
        if space.dist[i][j] == 0
    )
    return EquivalenceRelation(pts, pairs)


def zero_partition(space: PseudometricSpace) -> Partition:
    """The zero-classes of the space as a partition Q of its points"""
    return partition_from_relation(zero_relation(space))


def canonical_projection(space: PseudometricSpace) -> Tuple[int, ...]:
    """
    π as a tuple: the zero-class index of every point, classes numbered in
    the order of their earliest member.
    """
    reps: List[int] = []
    projection = []
    for x in range(space.n):
        for c, rep in enumerate(reps):
            if space.dist[x][rep] == 0:
                projection.append(c)
                break
        else:
            projection.append(len(reps))
            reps.append(x)
    return tuple(projection)


def class_label(members: Sequence[str]) -> str:
    return "{" + ",".join(members) + "}"


def quotient_space(space: PseudometricSpace, projection: Sequence[int]) -> PseudometricSpace:
    """
    The quotient on the classes of `projection`, each class represented by
    its earliest member and labelled "{a,b,...}".
    """
    reps: Dict[int, int] = {}
    for x, c in enumerate(projection):
        reps.setdefault(c, x)
    order = [reps[c] for c in range(len(reps))]
    labels = tuple(
        class_label([space.points[x] for x, k in enumerate(projection) if k == c])
        for c in range(len(reps))
    )
    return PseudometricSpace(
        labels,
        tuple(tuple(space.dist[a][b] for b in order) for a in order)
    )


def square(ground: Sequence[Element]) -> Tuple[Tuple[Element, Element], ...]:
    """All ordered pairs of the ground set, row-major"""
    return tuple((x, y) for x in ground for y in ground)


def fiber_partition(space: PseudometricSpace) -> Partition:
    """
    The partition P of X² into the fibers d⁻¹(t), one block per value of
    the distance range.
    """
    pts = space.points
    fibers: Dict = {t: set() for t in distance_range(space)}
    for i in range(space.n):
        for j in range(space.n):
            fibers[space.dist[i][j]].add((pts[i], pts[j]))
    return Partition.from_blocks(square(pts), fibers.values())


def _cross(a: Iterable[Element], b: Iterable[Element]) -> set:
    a, b = list(a), list(b)
    return {(x, y) for x in a for y in b} | {(y, x) for x in a for y in b}


def _diagonal_block(q: Partition) -> set:
    return {(x, y) for block in q.blocks for x in block for y in block}


def otimes1(q: Partition) -> Partition:
    """
    Q⊗₁Q: the block ∪ X_j² plus one block (X_j1×X_j2) ∪ (X_j2×X_j1) for
    each unordered pair of distinct blocks. {X²} when |Q| = 1.
    """
    ground = square(q.ground)
    if len(q) == 1:
        return Partition.from_blocks(ground, [ground])
    blocks = [_diagonal_block(q)]
    blocks += [_cross(a, b) for a, b in combinations(q.blocks, 2)]
    return Partition.from_blocks(ground, blocks)


def otimes2(q: Partition) -> Partition:
    """Q⊗₂Q: ∪ X_j² and its complement in X². {X²} when |Q| = 1."""
    ground = square(q.ground)
    if len(q) == 1:
        return Partition.from_blocks(ground, [ground])
    diagonal = _diagonal_block(q)
    return Partition.from_blocks(ground, [diagonal, set(ground) - diagonal])


def otimes3(q: Partition, order: Sequence[int] = (0, 1, 2, 3)) -> Partition:
    """
    Q⊗₃Q for a partition with exactly four blocks X1..X4 taken in `order`:
    ∪ Xi² together with the three perfect-matching blocks
    (X1×X2)∪(X2×X1)∪(X3×X4)∪(X4×X3), the same for 13|24 and for 14|23.

    Raises:
        WrongBlockCount: If Q does not have exactly four blocks
    """
    if len(q) != 4:
        raise WrongBlockCount(f"WrongBlockCount: Q⊗₃Q needs 4 blocks, got {len(q)}")
    if sorted(order) != [0, 1, 2, 3]:
        raise ValueError(f"order must be a permutation of 0..3, got {list(order)}")
    x1, x2, x3, x4 = (q.blocks[k] for k in order)
    blocks = [
        _diagonal_block(q),
        _cross(x1, x2) | _cross(x3, x4),
        _cross(x1, x3) | _cross(x2, x4),
        _cross(x1, x4) | _cross(x2, x3),
    ]
    return Partition.from_blocks(square(q.ground), blocks)


def partitions_equal(p: Partition, q: Partition) -> bool:
    """
    Equality of partitions of the same ground set.

    Since both arguments are partitions, the one-sided inclusion of P's
    blocks among Q's blocks already forces equality.

    Raises:
        GroundMismatch: If the ground sets differ
    """
    if set(p.ground) != set(q.ground):
        raise GroundMismatch("GroundMismatch: partitions of different ground sets")
    q_blocks = set(q.blocks)
    return all(block in q_blocks for block in p.blocks)


def refines(p: Partition, q: Partition) -> bool:
    """True iff every block of P lies inside some block of Q"""
    if set(p.ground) != set(q.ground):
        raise GroundMismatch("GroundMismatch: partitions of different ground sets")
    index = q.block_index()
    return all(len({index[x] for x in block}) == 1 for block in p.blocks)
