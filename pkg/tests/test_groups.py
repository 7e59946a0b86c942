"""
Tests for groups.py - Cs, PI and the homomorphism onto the reflection
"""
import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st


def _space(points, matrix):
    from core import validate
    return validate(points, matrix)


def _blocks_space():
    return _space(["a", "b", "c"], [[0, 1, 1], [1, 0, 0], [1, 0, 0]])


def test_permutation_algebra():
    """Inverse, identity, cycles and labels"""
    from groups import Permutation

    p = Permutation.of([1, 2, 0])
    assert (p * p.inverse()).is_identity()
    assert p * Permutation.identity(3) == p
    assert p.cycles() == [(0, 1, 2)]
    assert p.label("abc") == "(a b c)"
    assert Permutation.identity(2).label("ab") == "id"
    assert Permutation.transposition(3, 0, 2).mapping == (2, 1, 0)


def test_permutation_composition_applies_right_first():
    """(p * q)(x) is p(q(x))"""
    from groups import Permutation

    shift = Permutation.of([1, 2, 0])
    swap = Permutation.transposition(3, 0, 1)
    assert (shift * swap)(0) == shift(swap(0))


def test_permutation_rejects_non_bijection():
    """Non-bijections and mixed sizes are rejected"""
    from groups import Permutation, SizeMismatch

    with pytest.raises(ValueError):
        Permutation.of([0, 0, 1])
    with pytest.raises(SizeMismatch):
        Permutation.identity(2) * Permutation.identity(3)


def test_cs_of_rectangle_is_full():
    """All 24 permutations of the 3-4-5 rectangle are self-similarities"""
    from construct import rectangle_345
    from groups import cs_group, pi_group

    space = rectangle_345()
    assert cs_group(space).order == 24
    assert pi_group(space).order == 1


def test_cs_of_scalene_triangle_is_full():
    """Every permutation of a scalene triangle is a self-similarity"""
    from groups import cs_group

    space = _space(["a", "b", "c"], [[0, 1, 2], [1, 0, 3], [2, 3, 0]])
    assert cs_group(space).order == 6


def test_cs_of_path_metric_is_not_full():
    """Four points on a line at 0, 1, 2, 3: only the reversal survives"""
    from groups import cs_group

    pos = [0, 1, 2, 3]
    space = _space("abcd", [[abs(x - y) for y in pos] for x in pos])
    cs = cs_group(space)
    assert cs.order == 2
    assert [p.mapping for p in cs] == [(0, 1, 2, 3), (3, 2, 1, 0)]


def test_zero_space_groups_are_symmetric_group():
    """The zero space has Cs = PI = Sym(4)"""
    from construct import zero_space
    from groups import cs_group, pi_group

    space = zero_space(4)
    assert cs_group(space).order == 24
    assert pi_group(space).order == 24


def test_blocks_example_groups():
    """{a},{b,c}: the swap of b and c is a pseudoidentity, nothing else moves"""
    from groups import Permutation, cs_group, pi_group

    space = _blocks_space()
    cs = cs_group(space)
    pi = pi_group(space)
    assert cs.elements == pi.elements
    assert Permutation.transposition(3, 1, 2) in pi
    assert pi.order == 2


def test_induced_value_map_and_quadruple_test_agree():
    """Both self-similarity tests agree on all of Sym(5)"""
    from construct import random_space
    from groups import Permutation, is_self_similarity, is_self_similarity_quadruple
    from itertools import permutations

    space = random_space(5, "generic", 3)
    for mapping in permutations(range(5)):
        perm = Permutation(mapping)
        assert is_self_similarity(space, perm) == is_self_similarity_quadruple(space, perm)


def test_too_large():
    """Brute force refuses past the bound"""
    from construct import zero_space
    from groups import TooLarge, cs_group

    with pytest.raises(TooLarge) as excinfo:
        cs_group(zero_space(9))
    assert "9 points exceeds the brute-force bound 8" in str(excinfo.value)
    assert cs_group(zero_space(3), bound=3).order == 6


def test_size_mismatch():
    """A permutation of the wrong size is rejected"""
    from groups import Permutation, SizeMismatch, is_self_similarity

    with pytest.raises(SizeMismatch):
        is_self_similarity(_blocks_space(), Permutation.identity(2))


def test_verify_detects_missing_closure():
    """A set that is not closed fails verification"""
    from groups import GroupAxiomError, Permutation, PermutationGroup

    broken = PermutationGroup.from_elements(3, [Permutation.identity(3), Permutation.of([1, 2, 0])])
    with pytest.raises(GroupAxiomError):
        broken.verify()


def test_verify_sampled_above_table_limit():
    """Sym(5) passes the sampled closure check"""
    from itertools import permutations
    from groups import Permutation, PermutationGroup

    sym = PermutationGroup.from_elements(5, [Permutation(p) for p in permutations(range(5))])
    assert sym.verify(table_limit=10, seed=7) is sym


def test_reflection_hom_blocks_example():
    """H sends the swap of b, c to the identity of the 2-point reflection"""
    from groups import Permutation, kernel, pi_group, reflection_hom

    space = _blocks_space()
    hom = reflection_hom(space)
    assert hom(Permutation.transposition(3, 1, 2)).is_identity()
    assert kernel(hom).elements == pi_group(space).elements
    assert hom.target.order == 2
    assert hom.image().order == 1


def test_induced_class_map_rejects_class_breaking_permutation():
    """Swapping a with b splits the zero-class {b, c}"""
    from core import TheoremViolation
    from groups import Permutation, induced_class_map

    with pytest.raises(TheoremViolation, match="splits zero-class 1"):
        induced_class_map((0, 1, 1), Permutation.of([1, 0, 2]))


def test_lift_self_similarity():
    """Φ = (a b) on {a},{b},{c,d} commutes with the class swap"""
    from groups import Permutation, lift_self_similarity

    space = _space("abcd", [[0, 2, 3, 3], [2, 0, 3, 3], [3, 3, 0, 0], [3, 3, 0, 0]])
    phi = Permutation.transposition(4, 0, 1)
    psi = Permutation.transposition(3, 0, 1)
    assert lift_self_similarity(space, psi, phi)
    assert not lift_self_similarity(space, Permutation.identity(3), phi)


def test_conjugation_stability():
    """Φ ∈ Cs(X, d) iff σΦσ⁻¹ ∈ Cs of the space relabeled by σ⁻¹"""
    from construct import random_space
    from core import relabel
    from groups import Permutation, cs_group

    space = random_space(5, "generic", 11)
    sigma = Permutation.of([2, 0, 4, 1, 3])
    relabeled = relabel(space, sigma.inverse().mapping)
    cs = cs_group(space)
    conjugated = {phi.conjugate(sigma) for phi in cs}
    assert conjugated == set(cs_group(relabeled).elements)


@settings(deadline=None, max_examples=25)
@given(st.integers(min_value=0, max_value=2 ** 32), st.integers(min_value=1, max_value=6))
def test_group_sanity(seed, n):
    """PI ⊆ Cs ⊆ Sym and ker H = PI"""
    from construct import random_space
    from groups import cs_group, kernel, pi_group, reflection_hom

    space = random_space(n, "generic", seed)
    cs = cs_group(space)
    pi = pi_group(space)
    assert pi.is_subgroup_of(cs)
    assert cs.order <= math.factorial(n)
    assert kernel(reflection_hom(space)).elements == pi.elements


def test_is_pseudoidentity():
    """Moving points only inside their zero-class"""
    from groups import Permutation, is_pseudoidentity

    space = _blocks_space()
    assert is_pseudoidentity(space, Permutation.transposition(3, 1, 2))
    assert not is_pseudoidentity(space, Permutation.transposition(3, 0, 1))


def test_check_homomorphism_detects_broken_table():
    """A constant non-identity table is not a homomorphism"""
    from groups import GroupAxiomError, Permutation, ReflectionHom, reflection_hom

    hom = reflection_hom(_space("pq", [[0, 1], [1, 0]]))
    swap = Permutation.transposition(2, 0, 1)
    broken = ReflectionHom(hom.source, hom.target, hom.projection,
                           tuple(swap for _ in hom.source.elements))
    with pytest.raises(GroupAxiomError):
        broken.check_homomorphism()


@settings(deadline=None, max_examples=25)
@given(
    st.integers(min_value=0, max_value=2 ** 32),
    st.integers(min_value=1, max_value=6),
    st.sampled_from(["generic", "discrete", "strongly-rigid"]),
)
def test_self_similarities_permute_zero_classes(seed, n, profile):
    """Every Φ in Cs maps the zero-classes onto the zero-classes"""
    from construct import random_space
    from groups import cs_group
    from partition import zero_partition

    space = random_space(n, profile, seed)
    classes = set(zero_partition(space).blocks)
    for phi in cs_group(space):
        images = {frozenset(space.points[phi(space.index(x))] for x in block) for block in classes}
        assert images == classes
