"""
Tests for config.py - Document loading and validation
"""
import json
import os
import tempfile
from fractions import Fraction
from pathlib import Path

import pytest

SPACES = Path(__file__).parent.parent / "spaces"


def _write(document):
    with tempfile.NamedTemporaryFile(mode='w', suffix='.json', delete=False) as f:
        if isinstance(document, str):
            f.write(document)
        else:
            json.dump(document, f)
        return f.name


def test_load_rows_document():
    """A document with one row per point"""
    from config import load_space

    space = load_space(str(SPACES / "example_rectangle_345.json"))
    assert space.points == ("a", "b", "c", "d")
    assert space.d("a", "c") == 5


def test_load_flat_document():
    """A flat list is read row-major"""
    from config import load_space

    space = load_space(str(SPACES / "example_zero_3.json"))
    assert space.n == 3
    assert all(v == 0 for row in space.dist for v in row)


def test_load_rational_strings():
    """Rational strings and integers both load exactly"""
    from config import load_space

    space = load_space(str(SPACES / "example_rational.json"))
    assert space.d("b", "c") == Fraction(7, 4)
    scaled = load_space(str(SPACES / "example_triangle_scaled.json"))
    assert scaled.d("v", "w") == 25


def test_flat_list_of_wrong_length_is_non_square():
    """A flat list must hold n² entries"""
    from config import load_space
    from core import NonSquare

    path = _write({"points": ["a", "b"], "distances": [0, 1, 1]})
    try:
        with pytest.raises(NonSquare):
            load_space(path)
    finally:
        os.unlink(path)


@pytest.mark.parametrize("document", [
    {"name": "No distances", "points": ["a"]},
    {"points": ["a", "b"], "distances": [[0, 1.5], [1.5, 0]]},
    {"points": ["a", "b"], "distances": [[0, "1.5"], ["1.5", 0]]},
    {"points": [1, 2], "distances": [[0, 1], [1, 0]]},
    ["not", "an", "object"],
])
def test_reject_invalid_schema(document):
    """Off-schema documents fail before any axiom is checked"""
    from config import ConfigValidationError, load_space

    path = _write(document)
    try:
        with pytest.raises(ConfigValidationError):
            load_space(path)
    finally:
        os.unlink(path)


def test_reject_invalid_json():
    """Malformed JSON is a configuration error"""
    from config import ConfigValidationError, load_space

    path = _write('{"points": ["a"], "distances": [[0]')
    try:
        with pytest.raises(ConfigValidationError) as excinfo:
            load_space(path)
        assert "Invalid JSON" in str(excinfo.value)
    finally:
        os.unlink(path)


def test_missing_file():
    """A missing file is a configuration error"""
    from config import ConfigValidationError, load_space

    with pytest.raises(ConfigValidationError) as excinfo:
        load_space("no/such/space.json")
    assert "not found" in str(excinfo.value)


def test_zero_denominator_is_a_parse_error():
    """1/0 fails parsing and names its entry"""
    from config import ConfigValidationError, load_space

    path = _write({"points": ["a", "b"], "distances": [[0, "1/0"], ["1/0", 0]]})
    try:
        with pytest.raises(ConfigValidationError) as excinfo:
            load_space(path)
        assert "Entry (0,1)" in str(excinfo.value)
    finally:
        os.unlink(path)


def test_axiom_errors_pass_through():
    """Schema-valid documents that break an axiom raise the axiom's error"""
    from config import load_space
    from core import Asymmetric, TriangleViolation

    with pytest.raises(Asymmetric):
        load_space(str(SPACES / "example_asymmetric.json"))
    with pytest.raises(TriangleViolation):
        load_space(str(SPACES / "example_triangle_violation.json"))


def test_load_relation():
    """A relation document loads as an equivalence relation"""
    from config import load_relation
    from partition import partition_from_relation

    rel = load_relation(str(SPACES / "relation_1234.json"))
    assert partition_from_relation(rel).sizes() == [1, 2, 3, 4]
    assert ("c", "b") in rel


def test_relation_blocks_must_partition():
    """Uncovered or overlapping blocks are rejected"""
    from config import relation_from_document
    from partition import NotAPartition

    with pytest.raises(NotAPartition):
        relation_from_document({"points": ["a", "b", "c"], "blocks": [["a"], ["b"]]})
    with pytest.raises(NotAPartition):
        relation_from_document({"points": ["a", "b"], "blocks": [["a", "b"], ["b"]]})


def test_space_document_round_trip():
    """A written document loads back to the same space"""
    from config import load_space, space_from_document, space_to_document

    space = load_space(str(SPACES / "example_rational.json"))
    document = space_to_document(space, "Copy")
    assert document["name"] == "Copy"
    assert document["distances"][0][1] == "3/2"
    assert space_from_document(json.loads(json.dumps(document))).dist == space.dist


def test_relation_document_round_trip():
    """A written relation document loads back to the same pairs"""
    from config import load_relation, relation_from_document, relation_to_document

    rel = load_relation(str(SPACES / "relation_abc.json"))
    document = relation_to_document(rel)
    assert document["blocks"] == [["a"], ["b", "c"]]
    assert relation_from_document(document).pairs == rel.pairs


def test_defaults():
    """Default bounds"""
    from config import DEFAULTS

    assert DEFAULTS["bound"] == 8
    assert DEFAULTS["search_bound"] >= DEFAULTS["bound"]
