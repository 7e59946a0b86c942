"""
Groups - Combinatorial self-similarities and pseudoidentities

This module enumerates, by brute force over Sym(X), the group Cs(X, d) of
combinatorial self-similarities and its subgroup PI(X, d) of
pseudoidentities, and builds the homomorphism H: Cs(X, d) -> Cs(X/≅₀, δ_d)
induced by the canonical projection onto the metric reflection.
"""

import logging
import random
from dataclasses import dataclass
from itertools import permutations
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

import numpy as np

from config import DEFAULTS
from core import PseudometricSpace, TheoremViolation
from partition import canonical_projection, quotient_space

logger = logging.getLogger(__name__)

# Rows of Sym(n) evaluated per numpy batch
BATCH_SIZE = 5040


class GroupError(Exception):
    """Base class for group enumeration failures"""
    pass


class SizeMismatch(GroupError):
    pass


class TooLarge(GroupError):
    """Raised instead of silently truncating a factorial enumeration"""

    def __init__(self, n: int, bound: int):
        self.n = n
        self.bound = bound
        super().__init__(f"TooLarge: {n} points exceeds the brute-force bound {bound}")


class GroupAxiomError(GroupError):
    pass


@dataclass(frozen=True, order=True)
class Permutation:
    """A bijection of {0..n-1}; entry i of `mapping` is the image of i"""

    mapping: Tuple[int, ...]

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(tuple(range(n)))

    @classmethod
    def of(cls, mapping: Sequence[int]) -> "Permutation":
        mapping = tuple(int(k) for k in mapping)
        if sorted(mapping) != list(range(len(mapping))):
            raise ValueError(f"Not a bijection of 0..{len(mapping) - 1}: {list(mapping)}")
        return cls(mapping)

    @classmethod
    def transposition(cls, n: int, i: int, j: int) -> "Permutation":
        mapping = list(range(n))
        mapping[i], mapping[j] = j, i
        return cls(tuple(mapping))

    def __len__(self) -> int:
        return len(self.mapping)

    def __call__(self, i: int) -> int:
        return self.mapping[i]

    def __mul__(self, other: "Permutation") -> "Permutation":
        """Composition self∘other: apply other first, then self"""
        if len(self) != len(other):
            raise SizeMismatch(f"SizeMismatch: {len(self)} vs {len(other)}")
        return Permutation(tuple(self.mapping[k] for k in other.mapping))

    def inverse(self) -> "Permutation":
        inv = [0] * len(self)
        for i, k in enumerate(self.mapping):
            inv[k] = i
        return Permutation(tuple(inv))

    def is_identity(self) -> bool:
        return all(i == k for i, k in enumerate(self.mapping))

    def conjugate(self, sigma: "Permutation") -> "Permutation":
        """σ∘self∘σ⁻¹"""
        return sigma * self * sigma.inverse()

    def cycles(self) -> List[Tuple[int, ...]]:
        """Nontrivial cycles, each starting at its smallest element"""
        seen = set()
        result = []
        for start in range(len(self)):
            if start in seen:
                continue
            cycle = [start]
            seen.add(start)
            k = self.mapping[start]
            while k != start:
                cycle.append(k)
                seen.add(k)
                k = self.mapping[k]
            if len(cycle) > 1:
                result.append(tuple(cycle))
        return result

    def label(self, points: Sequence[str]) -> str:
        """Cycle notation over point labels, "id" for the identity"""
        cycles = self.cycles()
        if not cycles:
            return "id"
        return "".join("(" + " ".join(points[k] for k in c) + ")" for c in cycles)


@dataclass(frozen=True)
class PermutationGroup:
    """A group of permutations given by its full, sorted element list"""

    n: int
    elements: Tuple[Permutation, ...]

    @classmethod
    def from_elements(cls, n: int, elements) -> "PermutationGroup":
        return cls(n, tuple(sorted(set(elements))))

    @property
    def order(self) -> int:
        return len(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, perm: Permutation) -> bool:
        return perm in set(self.elements)

    def __iter__(self) -> Iterator[Permutation]:
        return iter(self.elements)

    def is_subgroup_of(self, other: "PermutationGroup") -> bool:
        return self.n == other.n and set(self.elements) <= set(other.elements)

    def verify(self, table_limit: Optional[int] = None, seed: int = 0) -> "PermutationGroup":
        """
        Check identity, inverses and closure under composition.

        The closure table is checked in full when the order is at most
        `table_limit`; above it, on table_limit² seeded random pairs
        (at most 100000).

        Raises:
            GroupAxiomError: If an axiom fails
        """
        if table_limit is None:
            table_limit = DEFAULTS["table_limit"]
        members = set(self.elements)
        if Permutation.identity(self.n) not in members:
            raise GroupAxiomError("GroupAxiomError: identity missing")
        for g in self.elements:
            if g.inverse() not in members:
                raise GroupAxiomError(f"GroupAxiomError: inverse of {g.mapping} missing")

        if self.order <= table_limit:
            pairs = ((a, b) for a in self.elements for b in self.elements)
        else:
            rng = random.Random(seed)
            samples = min(table_limit * table_limit, 100000)
            logger.debug("sampling %d products of a group of order %d", samples, self.order)
            pairs = ((rng.choice(self.elements), rng.choice(self.elements)) for _ in range(samples))
        for a, b in pairs:
            if a * b not in members:
                raise GroupAxiomError(f"GroupAxiomError: {a.mapping}∘{b.mapping} not in group")
        return self


def _check_size(space: PseudometricSpace, perm: Permutation) -> None:
    if len(perm) != space.n:
        raise SizeMismatch(f"SizeMismatch: permutation of {len(perm)} on {space.n} points")


def induced_value_map(space: PseudometricSpace, perm: Permutation) -> Optional[Dict]:
    """
    The map f: d(Ψx, Ψy) -> d(x, y) induced by Ψ = perm, or None when it
    is not a well-defined bijection of the distance range.
    """
    _check_size(space, perm)
    forward: Dict = {}
    backward: Dict = {}
    dist = space.dist
    for x in range(space.n):
        px = perm.mapping[x]
        for y in range(x, space.n):
            v = dist[px][perm.mapping[y]]
            w = dist[x][y]
            if forward.setdefault(v, w) != w or backward.setdefault(w, v) != v:
                return None
    return forward


def is_self_similarity(space: PseudometricSpace, perm: Permutation) -> bool:
    """
    True iff perm is a combinatorial self-similarity of the space.

    Builds the induced value map in one pass over unordered pairs and checks
    that it is a function and injective.

    Raises:
        SizeMismatch: If the permutation acts on a different number of points
    """
    f = induced_value_map(space, perm)
    if f is None:
        return False
    if f.get(0, 0) != 0:
        raise TheoremViolation("induced value map does not fix 0")
    return True


def is_self_similarity_quadruple(space: PseudometricSpace, perm: Permutation) -> bool:
    """
    The four-point test: d(x,y) = d(u,v) iff d(Ψx,Ψy) = d(Ψu,Ψv) for all
    x, y, u, v. Quadratic in the number of pairs.
    """
    _check_size(space, perm)
    n = space.n
    dist = space.dist
    p = perm.mapping
    pairs = [(x, y) for x in range(n) for y in range(x, n)]
    for a, (x, y) in enumerate(pairs):
        for u, v in pairs[a + 1:]:
            if (dist[x][y] == dist[u][v]) != (dist[p[x]][p[y]] == dist[p[u]][p[v]]):
                return False
    return True


def is_pseudoidentity(space: PseudometricSpace, perm: Permutation) -> bool:
    _check_size(space, perm)
    return all(space.dist[x][perm.mapping[x]] == 0 for x in range(space.n))


def _check_bound(space: PseudometricSpace, bound: Optional[int]) -> None:
    if bound is None:
        bound = DEFAULTS["bound"]
    if space.n > bound:
        raise TooLarge(space.n, bound)


def _permutation_batches(n: int) -> Iterator[np.ndarray]:
    """Sym(n) in lexicographic order as integer arrays of shape (k, n)"""
    batch: List[Tuple[int, ...]] = []
    for p in permutations(range(n)):
        batch.append(p)
        if len(batch) == BATCH_SIZE:
            yield np.array(batch, dtype=np.int64).reshape(-1, n)
            batch = []
    if batch:
        yield np.array(batch, dtype=np.int64).reshape(-1, n)


def _similarity_mask(codes: np.ndarray, perms: np.ndarray) -> np.ndarray:
    """
    For each row Ψ of `perms`, whether the pairs (code(Ψx,Ψy), code(x,y))
    over all x, y take exactly as many distinct values as the range has.
    Both coordinates already cover the whole range, so this holds iff the
    induced value map is a bijection.
    """
    k = int(codes.max()) + 1
    moved = codes[perms[:, :, None], perms[:, None, :]]
    combined = (moved * k + codes[None, :, :]).reshape(len(perms), -1)
    combined.sort(axis=1)
    distinct = 1 + np.count_nonzero(np.diff(combined, axis=1), axis=1)
    return distinct == k


def _pseudoidentity_mask(zero: np.ndarray, perms: np.ndarray) -> np.ndarray:
    rows = np.arange(perms.shape[1])
    return zero[rows[None, :], perms].all(axis=1)


def _enumerate(space: PseudometricSpace, bound: Optional[int], kind: str) -> PermutationGroup:
    _check_bound(space, bound)
    codes = space.value_codes()
    zero = codes == 0
    elements = []
    for perms in _permutation_batches(space.n):
        if kind == "cs":
            mask = _similarity_mask(codes, perms)
        else:
            mask = _pseudoidentity_mask(zero, perms)
        elements.extend(Permutation(tuple(int(k) for k in row)) for row in perms[mask])
    logger.debug("%s group of a %d-point space has order %d", kind, space.n, len(elements))
    return PermutationGroup(space.n, tuple(elements))


def cs_group(space: PseudometricSpace, bound: Optional[int] = None) -> PermutationGroup:
    """
    The group Cs(X, d) of all combinatorial self-similarities.

    Args:
        space: The pseudometric space
        bound: Largest number of points enumerated (defaults to config)

    Returns:
        The group, elements sorted lexicographically by mapping

    Raises:
        TooLarge: If the space has more points than the bound
    """
    return _enumerate(space, bound, "cs").verify()


def pi_group(space: PseudometricSpace, bound: Optional[int] = None) -> PermutationGroup:
    """
    The group PI(X, d) of pseudoidentities, d(x, Φ(x)) = 0 for every x.

    Raises:
        TooLarge: If the space has more points than the bound
    """
    return _enumerate(space, bound, "pi").verify()


@dataclass(frozen=True)
class ReflectionHom:
    """
    H: Cs(X, d) -> Cs(X/≅₀, δ_d), stored element-wise: images[k] is
    H(source.elements[k]).
    """

    source: PermutationGroup
    target: PermutationGroup
    projection: Tuple[int, ...]
    images: Tuple[Permutation, ...]

    def __call__(self, phi: Permutation) -> Permutation:
        return self.images[self.source.elements.index(phi)]

    def table(self) -> List[Tuple[Permutation, Permutation]]:
        return list(zip(self.source.elements, self.images))

    def image(self) -> PermutationGroup:
        """The image H(Cs(X, d)); surjectivity is reported, never assumed"""
        return PermutationGroup.from_elements(self.target.n, self.images)

    def check_homomorphism(self, table_limit: Optional[int] = None, seed: int = 0) -> None:
        """
        H(Φ∘Φ') = H(Φ)∘H(Φ') on all pairs, or on a seeded sample above the
        table limit.

        Raises:
            GroupAxiomError: If the law fails for some pair
        """
        if table_limit is None:
            table_limit = DEFAULTS["table_limit"]
        lookup = dict(zip(self.source.elements, self.images))
        elements = self.source.elements
        if len(elements) <= table_limit:
            pairs = ((a, b) for a in elements for b in elements)
        else:
            rng = random.Random(seed)
            pairs = ((rng.choice(elements), rng.choice(elements))
                     for _ in range(min(table_limit * table_limit, 100000)))
        for a, b in pairs:
            if lookup[a * b] != lookup[a] * lookup[b]:
                raise GroupAxiomError(f"GroupAxiomError: H fails on {a.mapping}, {b.mapping}")


def induced_class_map(projection: Sequence[int], phi: Permutation) -> Permutation:
    """
    The permutation Ψ of zero-classes with Ψ(π(x)) = π(Φ(x)).

    Raises:
        TheoremViolation: If Φ does not map zero-classes onto zero-classes
    """
    m = max(projection) + 1
    image: Dict[int, int] = {}
    for x, c in enumerate(projection):
        target = projection[phi.mapping[x]]
        if image.setdefault(c, target) != target:
            raise TheoremViolation(f"Φ splits zero-class {c}")
    return Permutation.of([image[c] for c in range(m)])


def reflection_hom(space: PseudometricSpace, bound: Optional[int] = None) -> ReflectionHom:
    """
    The homomorphism H induced by the canonical projection π, with
    H(Φ)(π(x)) = π(Φ(x)).

    Raises:
        TooLarge: If the space has more points than the bound
    """
    source = cs_group(space, bound)
    projection = canonical_projection(space)
    target = cs_group(quotient_space(space, projection), bound)
    images = tuple(induced_class_map(projection, phi) for phi in source)
    hom = ReflectionHom(source, target, projection, images)
    if not all(img in target for img in set(images)):
        raise TheoremViolation("H leaves Cs of the reflection")
    hom.check_homomorphism()
    return hom


def kernel(hom: ReflectionHom) -> PermutationGroup:
    """{Φ ∈ Cs(X, d): H(Φ) is the identity}"""
    return PermutationGroup(
        hom.source.n,
        tuple(phi for phi, img in hom.table() if img.is_identity())
    )


def lift_self_similarity(space: PseudometricSpace, psi: Permutation, phi: Permutation) -> bool:
    """
    Whether π∘Φ = Ψ∘π for Ψ acting on the zero-classes.

    When the square commutes and Ψ is a self-similarity of the reflection,
    Φ is a self-similarity of the space; TheoremViolation is raised otherwise.

    Raises:
        SizeMismatch: If Φ or Ψ act on the wrong number of elements
    """
    _check_size(space, phi)
    projection = canonical_projection(space)
    m = max(projection) + 1
    if len(psi) != m:
        raise SizeMismatch(f"SizeMismatch: Ψ acts on {len(psi)} classes, reflection has {m}")
    commutes = all(projection[phi.mapping[x]] == psi.mapping[projection[x]] for x in range(space.n))
    if commutes and is_self_similarity(quotient_space(space, projection), psi):
        if not is_self_similarity(space, phi):
            raise TheoremViolation(f"lift {phi.mapping} of {psi.mapping} is not a self-similarity")
    return commutes
