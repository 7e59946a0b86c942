"""
Propcheck - Seeded property campaign

Runs the structural results of the library against their brute-force and
definitional counterparts on seeded samples, and collects every
disagreement as a violation instead of stopping at the first one.
"""

import logging
import math
import time
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from typing import Callable, Dict, List, Optional, Sequence

from classify import (
    BOTH_AGREE,
    DEFINITIONAL,
    STRUCTURAL,
    decide,
    ip_oracle,
    is_discrete,
    is_ip,
    is_pseudorectangle,
    is_strongly_rigid,
    reflection_sym_full,
    reflection_sym_full_oracle,
    zero_block_sizes,
)
from config import DEFAULTS, space_to_document
from construct import (
    CLASS_TAGS,
    PROFILES,
    BadSize,
    ConstructionError,
    check_class_closure,
    discrete_from_relation,
    equidistant_space,
    generic_from_relation,
    make_rng,
    point_labels,
    pseudorectangle_from_relation,
    random_relation,
    random_space,
    rectangle_345,
    strongly_rigid_from_relation,
    value_schedule,
    zero_space,
)
from core import PseudometricSpace, distance_range, map_values, relabel, validate
from groups import GroupError, TooLarge, cs_group, kernel, pi_group, reflection_hom
from partition import (
    EquivalenceRelation,
    otimes3,
    relation_from_blocks,
    zero_partition,
    zero_relation,
)
from similarity import (
    SimilarityError,
    find_similarity,
    identity_similarity_from_fibers,
    similar_iff_same_zero,
)

logger = logging.getLogger(__name__)

# Largest n used for constructor round trips
ROUND_TRIP_MAX_N = 8

CLOSURE_SAMPLE = 100

Check = Callable[[], Optional[str]]


@dataclass(frozen=True)
class Violation:
    criterion: str
    detail: str
    space: Optional[Dict] = None

    def to_dict(self) -> Dict:
        return {"criterion": self.criterion, "detail": self.detail, "space": self.space}


@dataclass
class CampaignReport:
    """Number of checks per criterion, the violations found, and timings"""

    seed: int
    count: int
    max_n: int
    checks: Counter = field(default_factory=Counter)
    violations: List[Violation] = field(default_factory=list)
    seconds: Dict[str, float] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.violations

    def run(self, criterion: str, check: Check, space: Optional[PseudometricSpace] = None) -> None:
        """Run one check, recording a violation on a message or an assertion"""
        try:
            problem = check()
        except (AssertionError, GroupError, SimilarityError, ConstructionError) as e:
            problem = f"{type(e).__name__}: {e}"
        self.checks[criterion] += 1
        if problem:
            document = space_to_document(space) if space is not None else None
            self.violations.append(Violation(criterion, problem, document))
            logger.warning("%s violated: %s", criterion, problem)

    def to_dict(self) -> Dict:
        return {
            "seed": self.seed,
            "count": self.count,
            "max_n": self.max_n,
            "ok": self.ok,
            "checks": dict(sorted(self.checks.items())),
            "violations": [v.to_dict() for v in self.violations],
            "seconds": {k: round(v, 3) for k, v in sorted(self.seconds.items())},
        }


def _timed(report: CampaignReport, key: str, fn: Callable):
    start = time.perf_counter()
    try:
        return fn()
    finally:
        report.seconds[key] = report.seconds.get(key, 0.0) + time.perf_counter() - start


# Per-space checks

def _sym_full(space: PseudometricSpace, bound: int) -> Check:
    def check():
        oracle = reflection_sym_full_oracle(space, bound)
        if oracle != reflection_sym_full(space, DEFINITIONAL):
            return f"|Cs(reflection)| = m! is {oracle}, D ∨ SR ∨ PR is {not oracle}"
        return None
    return check


def _ip(report: CampaignReport, space: PseudometricSpace, bound: int) -> Check:
    def check():
        structural = _timed(report, "ip_structural", lambda: is_ip(space, STRUCTURAL))
        oracle = _timed(report, "ip_oracle", lambda: ip_oracle(space, bound))
        if structural != oracle:
            return f"structural IP {structural}, brute force {oracle}"
        return None
    return check


def _fibers(space: PseudometricSpace) -> Check:
    def check():
        for predicate in ("discrete", "strongly_rigid", "pseudorectangle"):
            decide(space, predicate, BOTH_AGREE)
        q = zero_partition(space)
        if len(q) == 4:
            canonical = otimes3(q)
            for order in permutations(range(4)):
                if otimes3(q, order) != canonical:
                    return f"Q⊗₃Q depends on the block order {order}"
        return None
    return check


def _groups(space: PseudometricSpace, bound: int) -> Check:
    def check():
        cs = cs_group(space, bound)
        pi = pi_group(space, bound)
        hom = reflection_hom(space, bound)
        if kernel(hom).elements != pi.elements:
            return "kernel of H differs from PI"
        if not pi.is_subgroup_of(cs):
            return "PI is not inside Cs"
        if cs.order > math.factorial(space.n):
            return "Cs is larger than Sym"
        sizes = zero_block_sizes(space)
        if len(set(sizes)) == len(sizes) and cs.elements != pi.elements:
            return "distinct zero-class sizes but Cs != PI"
        return None
    return check


def _discrete_with_value(rel: EquivalenceRelation, seed: int) -> PseudometricSpace:
    (value,) = value_schedule(1, seed)
    return map_values(discrete_from_relation(rel), {Fraction(0): Fraction(0), Fraction(1): value})


_CONSTRUCTORS = {
    "discrete": _discrete_with_value,
    "strongly-rigid": strongly_rigid_from_relation,
    "pseudorectangle": pseudorectangle_from_relation,
}

_MEMBERSHIP = {
    "discrete": is_discrete,
    "strongly-rigid": is_strongly_rigid,
    "pseudorectangle": is_pseudorectangle,
}


def _relation(kind: str, n: int, seed: int) -> EquivalenceRelation:
    return random_relation(n, seed, blocks=4 if kind == "pseudorectangle" else None)


def _same_ground_pair(kind: str, n: int, seeds: Sequence[int]) -> Check:
    """
    Same relation with two seeds, then a second relation on the same
    points: identity similarity iff equal zero-relations, and a witness
    under some bijection iff equal zero-class size multisets.
    """
    def check():
        build = _CONSTRUCTORS[kind]
        rel = _relation(kind, n, seeds[0])
        x = build(rel, seeds[1])
        y = build(rel, seeds[2])
        if not (_MEMBERSHIP[kind](x) and _MEMBERSHIP[kind](y)):
            return f"{kind} constructor left its class"
        if similar_iff_same_zero(x, y) != (True, True):
            return "equal zero-relations not reported similar"
        if find_similarity(x, y) is None:
            return "equal zero-relations but no witness found"
        if identity_similarity_from_fibers(x, y) is None:
            return "equal zero-relations but the identity is not a witness"

        other = _relation(kind, n, seeds[3])
        z = build(other, seeds[1])
        same = zero_relation(x).pairs == zero_relation(z).pairs
        verdict, applicable = similar_iff_same_zero(x, z)
        if not applicable or verdict != same:
            return f"zero-relation verdict {verdict} for equal={same}"
        if (identity_similarity_from_fibers(x, z) is not None) != same:
            return "identity witness disagrees with zero-relation equality"
        found = find_similarity(x, z) is not None
        if found != (zero_block_sizes(x) == zero_block_sizes(z)):
            return f"witness found={found} but zero-class sizes {zero_block_sizes(x)} vs {zero_block_sizes(z)}"
        return None
    return check


def _value_relabeled(space: PseudometricSpace, seed: int) -> Check:
    """Order-preserving move of the nonzero values to a fresh schedule"""
    def check():
        nonzero = distance_range(space).nonzero()
        targets = sorted(value_schedule(len(nonzero), seed))
        mapping = {Fraction(0): Fraction(0), **dict(zip(nonzero, targets))}
        moved = map_values(space, mapping)
        witness = identity_similarity_from_fibers(space, moved)
        if witness is None:
            return "value relabeling lost the identity witness"
        if any(witness.psi[p] != p for p in space.points):
            return "identity witness moves a point"
        return None
    return check


def _witness_algebra(space: PseudometricSpace, seed: int) -> Check:
    """Inverse and composition of witnesses between relabeled copies"""
    def check():
        rng = make_rng(seed)
        y = relabel(space, [int(k) for k in rng.permutation(space.n)])
        z = relabel(y, [int(k) for k in rng.permutation(space.n)])
        xy = find_similarity(space, y)
        yz = find_similarity(y, z)
        if xy is None or yz is None:
            return "no witness between isometric copies"
        xy.inverse().verify(y, space)
        xy.compose(yz).verify(space, z)
        return None
    return check


def _round_trip(n: int, seed: int) -> Check:
    def check():
        rel = random_relation(n, seed)
        for kind in ("discrete", "strongly-rigid"):
            if zero_relation(_CONSTRUCTORS[kind](rel, seed)).pairs != rel.pairs:
                return f"{kind} constructor changed the zero-relation"
        if n >= 4:
            rel4 = random_relation(n, seed, blocks=4)
            if zero_relation(pseudorectangle_from_relation(rel4, seed)).pairs != rel4.pairs:
                return "pseudorectangle constructor changed the zero-relation"
        return None
    return check


def _named_instances(bound: int) -> Check:
    def check():
        point = validate(["p"], [[0]])
        if not is_ip(point) or not ip_oracle(point, bound):
            return "1-point space is not IP"
        segment = validate(["p", "q"], [[0, 1], [1, 0]])
        if is_ip(segment) or ip_oracle(segment, bound):
            return "2-point metric space is IP"
        zero = zero_space(3)
        if not (decide(zero, "discrete").value and decide(zero, "strongly_rigid").value):
            return "zero pseudometric is not discrete and strongly rigid"
        rectangle = rectangle_345()
        if cs_group(rectangle, bound).order != 24:
            return "3-4-5 rectangle does not have |Cs| = 24"
        if not decide(rectangle, "pseudorectangle", BOTH_AGREE).value:
            return "3-4-5 rectangle is not a pseudorectangle"
        if not is_discrete(equidistant_space(4)):
            return "equidistant space is not discrete"
        return None
    return check


def _closure(tag: str, sample: List[PseudometricSpace], seed: int) -> Check:
    def check():
        check_class_closure(tag, sample, seed)
        return None
    return check


def _distinct_sizes_relation(n: int, seed: int) -> EquivalenceRelation:
    """Blocks of sizes 1, 2, ..., m (m as large as n allows), seeded shuffle"""
    m = 1
    while (m + 1) * (m + 2) // 2 <= n:
        m += 1
    labels = list(point_labels(m * (m + 1) // 2))
    order = [labels[int(k)] for k in make_rng(seed).permutation(len(labels))]
    blocks, start = [], 0
    for size in range(1, m + 1):
        blocks.append(order[start:start + size])
        start += size
    return relation_from_blocks(labels, blocks)


def run_campaign(seed: int = 1, count: int = 500, max_n: int = 6, bound: Optional[int] = None) -> CampaignReport:
    """
    Run every property check on `count` seeded samples.

    Args:
        seed: Campaign seed; the run is deterministic given the arguments
        count: Number of random spaces (and of every derived sample)
        max_n: Largest number of points of a random space
        bound: Brute-force bound (defaults to config)

    Returns:
        CampaignReport; `ok` is False when any check failed

    Raises:
        BadSize: If max_n < 1 or count < 0
        TooLarge: If max_n exceeds the brute-force bound
    """
    if bound is None:
        bound = DEFAULTS["bound"]
    if max_n < 1 or count < 0:
        raise BadSize(f"BadSize: max_n {max_n}, count {count}")
    if max_n > bound:
        raise TooLarge(max_n, bound)

    rng = make_rng(seed)
    report = CampaignReport(seed, count, max_n)

    def draw_seed() -> int:
        return int(rng.integers(0, 2 ** 63))

    def draw_n(low: int) -> int:
        return int(rng.integers(min(low, max_n), max_n + 1))

    report.run("named_instances", _named_instances(bound))

    for i in range(count):
        profile = PROFILES[i % len(PROFILES)]
        low = {"pseudorectangle": 4, "near-miss": 3}.get(profile, 1)
        n = draw_n(low)
        if n < low:
            profile = "generic"
        space = random_space(n, profile, draw_seed())

        report.run("sym_full", _sym_full(space, bound), space)
        report.run("ip", _ip(report, space, bound), space)
        report.run("fiber_partitions", _fibers(space), space)
        report.run("groups", _groups(space, bound), space)
        report.run("value_relabeling", _value_relabeled(space, draw_seed()), space)
        if space.n <= 5:
            report.run("witness_algebra", _witness_algebra(space, draw_seed()), space)

        targeted = generic_from_relation(_distinct_sizes_relation(max_n, draw_seed()), draw_seed())
        report.run("groups", _groups(targeted, bound), targeted)

        kind = ("discrete", "strongly-rigid", "pseudorectangle")[i % 3]
        pair_n = draw_n(4 if kind == "pseudorectangle" else 1)
        if kind != "pseudorectangle" or pair_n >= 4:
            report.run("same_ground_pairs", _same_ground_pair(kind, pair_n, [draw_seed() for _ in range(4)]))

        report.run("round_trips", _round_trip(int(rng.integers(1, ROUND_TRIP_MAX_N + 1)), draw_seed()))

        if (i + 1) % 100 == 0:
            logger.info("campaign: %d/%d samples, %d violations", i + 1, count, len(report.violations))

    closure_n = min(max_n, 6)
    for tag in CLASS_TAGS:
        profile, low = tag, 1
        if tag == "pseudorectangle":
            profile, low = ("pseudorectangle", 4) if closure_n >= 4 else ("strongly-rigid", 1)
        sample = []
        for _ in range(min(count, CLOSURE_SAMPLE)):
            n = int(rng.integers(min(low, closure_n), closure_n + 1))
            sample.append(random_space(n, profile, draw_seed()))
        if tag == "pseudorectangle" and profile != tag:
            sample = [s for s in sample if len(distance_range(s)) <= 4]
        report.run(f"closure_{tag}", _closure(tag, sample, draw_seed()))

    logger.info("campaign finished: %s", dict(report.checks))
    return report
