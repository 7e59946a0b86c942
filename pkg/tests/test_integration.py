"""
Integration tests - End-to-end workflow testing

These tests verify that all components work together correctly
"""
from pathlib import Path

import pytest

SPACES = Path(__file__).parent.parent / "spaces"


@pytest.mark.integration
def test_load_classify_and_compare_groups():
    """
    Integration test: Load document → Classify → Cross-check the groups
    """
    from classify import classify
    from config import load_space
    from groups import cs_group, kernel, pi_group, reflection_hom

    space = load_space(str(SPACES / "example_blocks_abc.json"))
    report = classify(space)
    assert report.reflection_size == 2
    assert report.zero_block_sizes == (1, 2)

    hom = reflection_hom(space)
    assert kernel(hom).elements == pi_group(space).elements
    assert cs_group(space).order == report.cs_order


@pytest.mark.integration
def test_construct_then_find_witness():
    """
    Integration test: Load relation → Construct with two seeds → Similar
    """
    from classify import is_ip, is_pseudorectangle
    from config import load_relation, relation_to_document, space_from_document, space_to_document
    from construct import pseudorectangle_from_relation
    from similarity import find_similarity, similar_iff_same_zero

    rel = load_relation(str(SPACES / "relation_1234.json"))
    assert relation_to_document(rel)["blocks"][3] == ["g", "h", "i", "j"]
    first = pseudorectangle_from_relation(rel, seed=1)
    second = space_from_document(space_to_document(pseudorectangle_from_relation(rel, seed=2)))

    assert is_pseudorectangle(first) and is_pseudorectangle(second)
    assert is_ip(first)
    assert similar_iff_same_zero(first, second) == (True, True)
    assert find_similarity(first, second) is not None


@pytest.mark.integration
def test_pseudoisometric_copy_keeps_classification():
    """
    Integration test: Inflate a point → Same reflection → Same class
    """
    from classify import classify
    from config import load_space
    from core import inflate
    from similarity import are_pseudoisometric, find_pseudoisometry

    space = load_space(str(SPACES / "example_rectangle_345.json"))
    bigger = inflate(space, "a", "a'")
    assert are_pseudoisometric(space, bigger)
    phi = find_pseudoisometry(bigger, space)
    assert phi["a'"] == "a"

    before, after = classify(space), classify(bigger)
    assert after.is_pseudorectangle == before.is_pseudorectangle
    assert after.reflection_cs_order == before.reflection_cs_order
    assert after.zero_block_sizes == (1, 1, 1, 2)


@pytest.mark.integration
def test_cli_round_trip(tmp_path, capsys):
    """
    Integration test: construct command → document on disk → classify command
    """
    import json
    from cli import main

    assert main(["construct", str(SPACES / "relation_1234.json"), "--kind", "pseudorectangle", "--seed", "6"]) == 0
    document = tmp_path / "constructed.json"
    document.write_text(capsys.readouterr().out)

    assert main(["--structural-only", "classify", str(document)]) == 0
    report = json.loads(capsys.readouterr().out)
    assert report["is_pseudorectangle"] is True
    assert report["ip_member"] is True


@pytest.mark.slow
@pytest.mark.integration
def test_default_campaign():
    """The documented campaign: seed 1, 500 samples, up to 6 points"""
    from propcheck import run_campaign

    report = run_campaign(seed=1, count=500, max_n=6)
    assert report.ok, report.to_dict()["violations"]
