"""
Config - Document loading and validation module

This module handles loading pseudometric spaces and equivalence relations
from JSON documents, validating them against a schema, and holds the
default tunables shared by the analysis modules.
"""

import json
from typing import Any, Dict, List

import jsonschema

from core import PseudometricSpace, format_rational, parse_rational, validate
from partition import EquivalenceRelation, Partition, partition_from_relation, relation_from_blocks


class ConfigValidationError(Exception):
    """Exception raised when a document cannot be read or parsed"""
    pass


RATIONAL_SCHEMA = {
    "oneOf": [
        {"type": "integer"},
        {"type": "string", "pattern": r"^\s*[+-]?\d+\s*(/\s*\d+)?\s*$"}
    ]
}

# JSON Schema for a space document; rows or a flat row-major list
SPACE_SCHEMA = {
    "type": "object",
    "required": ["points", "distances"],
    "properties": {
        "name": {"type": "string"},
        "points": {"type": "array", "items": {"type": "string"}},
        "distances": {
            "oneOf": [
                {"type": "array", "items": {"type": "array", "items": RATIONAL_SCHEMA}, "minItems": 1},
                {"type": "array", "items": RATIONAL_SCHEMA}
            ]
        }
    }
}

RELATION_SCHEMA = {
    "type": "object",
    "required": ["points", "blocks"],
    "properties": {
        "name": {"type": "string"},
        "points": {"type": "array", "items": {"type": "string"}},
        "blocks": {
            "type": "array",
            "items": {"type": "array", "items": {"type": "string"}, "minItems": 1}
        }
    }
}


# Default values for tunables and optional document fields
DEFAULTS = {
    "name": "Space",
    "bound": 8,
    "search_bound": 12,
    "table_limit": 120,
    "format": "document",
}


def _read_json(file_path: str) -> Dict[str, Any]:
    try:
        with open(file_path, 'r') as f:
            return json.load(f)
    except json.JSONDecodeError as e:
        raise ConfigValidationError(f"Invalid JSON syntax: {e}")
    except FileNotFoundError:
        raise ConfigValidationError(f"Document not found: {file_path}")


def _check_schema(document: Any, schema: Dict[str, Any]) -> None:
    try:
        jsonschema.validate(document, schema)
    except jsonschema.ValidationError as e:
        where = "/".join(str(p) for p in e.absolute_path) or "document"
        raise ConfigValidationError(f"Schema violation at {where}: {e.message}")


def distance_rows(document: Dict[str, Any]) -> List[List[Any]]:
    """
    Distances of a space document as rows of parsed rationals.

    A flat list is split row-major by the number of points; a flat list
    whose length is not a perfect square of the point count is returned as
    a single ragged row so that validation reports it as NonSquare.

    Raises:
        ConfigValidationError: If an entry is not a wire-format rational
    """
    entries = document["distances"]
    n = len(document["points"])
    if entries and not isinstance(entries[0], list):
        if n == 0 or len(entries) != n * n:
            rows = [entries]
        else:
            rows = [entries[i * n:(i + 1) * n] for i in range(n)]
    else:
        rows = entries

    parsed = []
    for i, row in enumerate(rows):
        parsed_row = []
        for j, entry in enumerate(row):
            try:
                parsed_row.append(parse_rational(entry))
            except ValueError as e:
                raise ConfigValidationError(f"Entry ({i},{j}): {e}")
        parsed.append(parsed_row)
    return parsed


def space_from_document(document: Dict[str, Any]) -> PseudometricSpace:
    """
    Validate a parsed space document and build the space.

    Raises:
        ConfigValidationError: If the document violates the schema
        SpaceValidationError: If the matrix violates a pseudometric axiom
    """
    _check_schema(document, SPACE_SCHEMA)
    return validate(document["points"], distance_rows(document))


def load_space(file_path: str) -> PseudometricSpace:
    """
    Load and validate a pseudometric space from a JSON file.

    Args:
        file_path: Path to the JSON space document

    Returns:
        Validated PseudometricSpace

    Raises:
        ConfigValidationError: If the file is missing, malformed or off-schema
        SpaceValidationError: If the matrix violates a pseudometric axiom
    """
    return space_from_document(_read_json(file_path))


def relation_from_document(document: Dict[str, Any]) -> EquivalenceRelation:
    """
    Raises:
        ConfigValidationError: If the document violates the schema
        NotAPartition: If the blocks do not partition the points
    """
    _check_schema(document, RELATION_SCHEMA)
    return relation_from_blocks(document["points"], document["blocks"])


def load_relation(file_path: str) -> EquivalenceRelation:
    """Load an equivalence relation given as a block list"""
    return relation_from_document(_read_json(file_path))


def space_to_document(space: PseudometricSpace, name: str = None) -> Dict[str, Any]:
    """Document form of a space, loadable by `load_space`"""
    return {
        "name": name or DEFAULTS["name"],
        "points": list(space.points),
        "distances": [[format_rational(v) for v in row] for row in space.dist],
    }


def relation_to_document(rel: EquivalenceRelation, name: str = None) -> Dict[str, Any]:
    part: Partition = partition_from_relation(rel)
    return {
        "name": name or "Relation",
        "points": list(rel.ground),
        "blocks": [part.ordered_block(b) for b in range(len(part))],
    }
