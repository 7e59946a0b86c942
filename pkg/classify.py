"""
Classify - Metric reflections and the three classification predicates

Each predicate (discrete, strongly rigid, pseudorectangle) is implemented
twice: by its definition in terms of metric subspaces and distances, and
structurally by comparing the fiber partition P of X² with a product of the
zero-class partition Q. The two methods are computed independently of
each other, so agreement between them is a real check. The IP decision
and the full-symmetric-group test for the reflection are built on top.
"""

import logging
import math
from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations
from typing import Dict, List, Optional, Tuple

from core import PseudometricSpace, TheoremViolation, distance_range, is_metric_subspace
from groups import TooLarge, cs_group, pi_group
from partition import (
    canonical_projection,
    fiber_partition,
    otimes1,
    otimes2,
    otimes3,
    partitions_equal,
    quotient_space,
    zero_partition,
)

logger = logging.getLogger(__name__)

DEFINITIONAL = "definitional"
STRUCTURAL = "structural"
BOTH_AGREE = "both-agree"


@dataclass(frozen=True)
class Reflection:
    """The metric reflection and the canonical projection onto it"""

    space: PseudometricSpace
    projection: Tuple[int, ...]


def metric_reflection(space: PseudometricSpace) -> Reflection:
    """
    The quotient (X/≅₀, δ_d) with δ_d(π(x), π(y)) = d(x, y).

    Every pair of representatives is checked to give the same distance, and
    distinct classes must sit at positive distance.
    """
    projection = canonical_projection(space)
    quotient = quotient_space(space, projection)
    for x in range(space.n):
        for y in range(space.n):
            if quotient.dist[projection[x]][projection[y]] != space.dist[x][y]:
                raise TheoremViolation(f"δ_d depends on the representatives at ({x},{y})")
    if not all(
        quotient.dist[a][b] > 0
        for a in range(quotient.n) for b in range(quotient.n) if a != b
    ):
        raise TheoremViolation("δ_d is not a metric")
    return Reflection(quotient, projection)


def zero_block_sizes(space: PseudometricSpace) -> List[int]:
    """Sizes of the zero-classes, ascending"""
    return sorted(Counter(canonical_projection(space)).values())


# Discrete

def discrete_by_definition(space: PseudometricSpace) -> bool:
    """|d(X²)| <= 2"""
    return len(distance_range(space)) <= 2


def discrete_by_fibers(space: PseudometricSpace) -> bool:
    """Q⊗₂Q = P"""
    return partitions_equal(otimes2(zero_partition(space)), fiber_partition(space))


# Strongly rigid

def _nonzero_fibers(space: PseudometricSpace) -> Dict:
    fibers: Dict = {}
    for x in range(space.n):
        for y in range(space.n):
            t = space.dist[x][y]
            if t != 0:
                fibers.setdefault(t, []).append((x, y))
    return fibers


def _rigid_quadruple(dist, x: int, y: int, u: int, v: int) -> bool:
    return (dist[x][u] == 0 and dist[y][v] == 0) or (dist[x][v] == 0 and dist[y][u] == 0)


def rigid_at_value(space: PseudometricSpace, t) -> bool:
    """
    d(x,y) = t = d(u,v) implies (d(x,u) = d(y,v) = 0) or
    (d(x,v) = d(y,u) = 0), for one nonzero value t.
    """
    pairs = _nonzero_fibers(space).get(t, [])
    dist = space.dist
    return all(
        _rigid_quadruple(dist, x, y, u, v)
        for a, (x, y) in enumerate(pairs)
        for (u, v) in pairs[a + 1:]
    )


def strongly_rigid_by_definition(space: PseudometricSpace) -> bool:
    """The quadruple condition, scanned fiber by fiber"""
    return all(rigid_at_value(space, t) for t in _nonzero_fibers(space))


def strongly_rigid_by_fibers(space: PseudometricSpace) -> bool:
    """Q⊗₁Q = P"""
    return partitions_equal(otimes1(zero_partition(space)), fiber_partition(space))


def strongly_rigid_by_counting(space: PseudometricSpace) -> bool:
    """
    On the reflection Z: |δ(Z²)| = |Z|(|Z|-1)/2 + 1, i.e. distinct pairs
    of classes all have distinct distances.
    """
    reflection = metric_reflection(space).space
    m = reflection.n
    return len(distance_range(reflection)) == m * (m - 1) // 2 + 1


def fiber_block_pair(space: PseudometricSpace, t) -> Optional[Tuple[int, int]]:
    """
    The zero-class pair (j1, j2), j1 < j2, when d⁻¹(t) is exactly
    (X_j1×X_j2) ∪ (X_j2×X_j1); None otherwise.
    """
    projection = canonical_projection(space)
    pairs = _nonzero_fibers(space).get(t)
    if not pairs:
        return None
    classes = {tuple(sorted((projection[x], projection[y]))) for x, y in pairs}
    if len(classes) != 1:
        return None
    j1, j2 = next(iter(classes))
    size = Counter(projection)
    if len(pairs) != 2 * size[j1] * size[j2]:
        return None
    return j1, j2


# Pseudorectangle

def _sorted_triple(space: PseudometricSpace, triple) -> Tuple:
    x, y, z = triple
    d = space.dist
    return tuple(sorted((d[x][y], d[y][z], d[x][z])))


def triples_rigid_and_isometric(space: PseudometricSpace) -> bool:
    """
    Every three-point metric subspace has three distinct distances, and
    all of them share the same sorted distance triple.
    """
    seen = None
    for triple in combinations(range(space.n), 3):
        labels = [space.points[k] for k in triple]
        if not is_metric_subspace(space, labels):
            continue
        key = _sorted_triple(space, triple)
        if len(set(key)) != 3:
            return False
        if seen is None:
            seen = key
        elif key != seen:
            return False
    return True


def _has_transversal_quadruple(space: PseudometricSpace) -> bool:
    """A four-point metric subspace meeting every zero-class"""
    for quad in combinations(range(space.n), 4):
        labels = [space.points[k] for k in quad]
        if not is_metric_subspace(space, labels):
            continue
        if all(any(space.dist[x][y] == 0 for y in quad) for x in range(space.n)):
            return True
    return False


def pseudorectangle_by_definition(space: PseudometricSpace) -> bool:
    return _has_transversal_quadruple(space) and triples_rigid_and_isometric(space)


def pseudorectangle_by_fibers(space: PseudometricSpace) -> bool:
    """
    Four zero-classes, four distance values, and Q⊗₃Q = P. The three
    matching blocks are the same for every ordering of the four classes,
    so one ordering decides.
    """
    q = zero_partition(space)
    if len(q) != 4 or len(distance_range(space)) != 4:
        return False
    return partitions_equal(otimes3(q), fiber_partition(space))


# Dispatch

_PREDICATES = {
    "discrete": (discrete_by_definition, discrete_by_fibers),
    "strongly_rigid": (strongly_rigid_by_definition, strongly_rigid_by_fibers),
    "pseudorectangle": (pseudorectangle_by_definition, pseudorectangle_by_fibers),
}


@dataclass(frozen=True)
class Verdict:
    """Outcome of one predicate with the methods that produced it"""

    value: bool
    method: str
    definitional: Optional[bool] = None
    structural: Optional[bool] = None


def decide(space: PseudometricSpace, predicate: str, method: str = BOTH_AGREE) -> Verdict:
    """
    Evaluate a predicate by one method, or by both and require agreement.

    Raises:
        TheoremViolation: If both methods ran and disagree
    """
    by_definition, by_fibers = _PREDICATES[predicate]
    if method == DEFINITIONAL:
        value = by_definition(space)
        return Verdict(value, method, definitional=value)
    if method == STRUCTURAL:
        value = by_fibers(space)
        return Verdict(value, method, structural=value)
    if method != BOTH_AGREE:
        raise ValueError(f"Unknown method '{method}'")

    definitional = by_definition(space)
    structural = by_fibers(space)
    if definitional != structural:
        raise TheoremViolation(
            f"{predicate}: definition says {definitional}, fiber partition says {structural}"
        )
    return Verdict(definitional, BOTH_AGREE, definitional, structural)


def is_discrete(space: PseudometricSpace, method: str = STRUCTURAL) -> bool:
    return decide(space, "discrete", method).value


def is_strongly_rigid(space: PseudometricSpace, method: str = STRUCTURAL) -> bool:
    return decide(space, "strongly_rigid", method).value


def is_pseudorectangle(space: PseudometricSpace, method: str = STRUCTURAL) -> bool:
    return decide(space, "pseudorectangle", method).value


def reflection_sym_full(space: PseudometricSpace, method: str = STRUCTURAL) -> bool:
    """
    Whether Cs of the metric reflection is the full symmetric group.

    The structural path is discrete ∨ strongly rigid ∨ pseudorectangle and
    never enumerates permutations.
    """
    return (
        is_discrete(space, method)
        or is_strongly_rigid(space, method)
        or is_pseudorectangle(space, method)
    )


def reflection_sym_full_oracle(space: PseudometricSpace, bound: Optional[int] = None) -> bool:
    """
    Brute force: |Cs(reflection)| = |reflection|!.

    Raises:
        TooLarge: If the reflection has more points than the bound
    """
    reflection = metric_reflection(space).space
    return cs_group(reflection, bound).order == math.factorial(reflection.n)


def _distinct(sizes: List[int]) -> bool:
    return len(set(sizes)) == len(sizes)


def ip_by_classes(space: PseudometricSpace) -> bool:
    """Distinct zero-class sizes and discrete ∨ strongly rigid ∨ pseudorectangle"""
    return _distinct(zero_block_sizes(space)) and reflection_sym_full(space, DEFINITIONAL)


def ip_by_fibers(space: PseudometricSpace) -> bool:
    """Distinct zero-class sizes and P ∈ {Q⊗₁Q, Q⊗₂Q, Q⊗₃Q}"""
    q = zero_partition(space)
    if not _distinct(q.sizes()):
        return False
    p = fiber_partition(space)
    if partitions_equal(otimes1(q), p) or partitions_equal(otimes2(q), p):
        return True
    return len(q) == 4 and partitions_equal(otimes3(q), p)


def ip_oracle(space: PseudometricSpace, bound: Optional[int] = None) -> bool:
    """
    Cs(X, d) = PI(X, d) and Cs(reflection) = Sym(reflection), by brute force.

    Raises:
        TooLarge: If the space has more points than the bound
    """
    cs = cs_group(space, bound)
    pi = pi_group(space, bound)
    return cs.order == pi.order and reflection_sym_full_oracle(space, bound)


def is_ip(space: PseudometricSpace, method: str = STRUCTURAL) -> bool:
    """
    Membership in the class IP.

    `structural` evaluates both polynomial characterizations and requires
    them to agree; `classes` and `fibers` run one of them; `oracle` runs
    the brute-force definition.

    Raises:
        TheoremViolation: If the two structural characterizations disagree
        TooLarge: For the oracle on spaces past the brute-force bound
    """
    if method == "classes":
        return ip_by_classes(space)
    if method == "fibers":
        return ip_by_fibers(space)
    if method == "oracle":
        return ip_oracle(space)
    if method != STRUCTURAL:
        raise ValueError(f"Unknown method '{method}'")
    by_classes = ip_by_classes(space)
    by_fibers = ip_by_fibers(space)
    if by_classes != by_fibers:
        raise TheoremViolation(f"IP: class test says {by_classes}, fiber test says {by_fibers}")
    return by_classes


@dataclass(frozen=True)
class ClassificationReport:
    """Verdicts for one space, each tagged with how it was obtained"""

    is_discrete: bool
    is_strongly_rigid: bool
    is_pseudorectangle: bool
    reflection_size: int
    range_size: int
    zero_block_sizes: Tuple[int, ...]
    ip_member: bool
    reflection_sym_full: bool
    cs_order: Optional[int] = None
    pi_order: Optional[int] = None
    reflection_cs_order: Optional[int] = None
    method: Dict[str, str] = field(default_factory=dict)

    def to_dict(self) -> Dict:
        return {
            "is_discrete": self.is_discrete,
            "is_strongly_rigid": self.is_strongly_rigid,
            "is_pseudorectangle": self.is_pseudorectangle,
            "reflection_size": self.reflection_size,
            "range_size": self.range_size,
            "zero_block_sizes": list(self.zero_block_sizes),
            "ip_member": self.ip_member,
            "reflection_sym_full": self.reflection_sym_full,
            "cs_order": self.cs_order,
            "pi_order": self.pi_order,
            "reflection_cs_order": self.reflection_cs_order,
            "method": dict(self.method),
        }


def classify(
    space: PseudometricSpace,
    bound: Optional[int] = None,
    structural_only: bool = False
) -> ClassificationReport:
    """
    Classify a space.

    The three predicates run by both methods. Unless `structural_only` is
    set, group orders are brute-forced when the space is within the bound,
    and the brute-force verdicts are required to match the structural ones.

    Args:
        space: The pseudometric space
        bound: Brute-force bound (defaults to config)
        structural_only: Skip every permutation enumeration

    Returns:
        ClassificationReport

    Raises:
        TheoremViolation: If any two independent methods disagree
    """
    verdicts = {name: decide(space, name, BOTH_AGREE) for name in _PREDICATES}
    method = {name: v.method for name, v in verdicts.items()}
    sym_full = any(v.value for v in verdicts.values())
    ip_member = is_ip(space, STRUCTURAL)
    method["ip_member"] = STRUCTURAL
    method["reflection_sym_full"] = STRUCTURAL

    reflection = metric_reflection(space).space
    cs_order = pi_order = reflection_cs_order = None
    if not structural_only:
        try:
            cs_order = cs_group(space, bound).order
            pi_order = pi_group(space, bound).order
            reflection_cs_order = cs_group(reflection, bound).order
        except TooLarge as e:
            logger.info("skipping brute force: %s", e)
            cs_order = pi_order = reflection_cs_order = None

    if reflection_cs_order is not None:
        oracle_full = reflection_cs_order == math.factorial(reflection.n)
        oracle_ip = cs_order == pi_order and oracle_full
        if oracle_full != sym_full or oracle_ip != ip_member:
            raise TheoremViolation(
                f"brute force gives sym_full={oracle_full}, ip={oracle_ip}; "
                f"structural gives {sym_full}, {ip_member}"
            )
        method["ip_member"] = BOTH_AGREE
        method["reflection_sym_full"] = BOTH_AGREE

    return ClassificationReport(
        is_discrete=verdicts["discrete"].value,
        is_strongly_rigid=verdicts["strongly_rigid"].value,
        is_pseudorectangle=verdicts["pseudorectangle"].value,
        reflection_size=reflection.n,
        range_size=len(distance_range(space)),
        zero_block_sizes=tuple(zero_block_sizes(space)),
        ip_member=ip_member,
        reflection_sym_full=sym_full,
        cs_order=cs_order,
        pi_order=pi_order,
        reflection_cs_order=reflection_cs_order,
        method=method,
    )
