"""Structured-text (JSON) input formats and the line-oriented dumps.

Graph files:
    {"type": "finite", "rows": [[0,1],[1,0]]}
    {"type": "block",  "classes": [{"card": 2}, {"card": "inf"}], "block": [[1,0],[1,1]]}
    {"type": "banded", "prefix": [], "cutoff": 0, "offsets": [1], "cross": []}

Boundary families:
    "auto"                               (exactly the cluster patterns)
    [{"finite": [1,2], "classes": []}, ...]

Certificates:
    {"A": ..., "B": ..., "R": ..., "S": ..., "lag": k}
    {"A": ..., "B": ..., "chain": [{"R": ..., "S": ...}, ...]}

Malformed input is rejected with the offending field named; JSON syntax
errors keep their line/column diagnostics.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Optional

from .errors import ValidationError
from .graphs import BandedTailGraph, BlockPatternGraph, FiniteGraph, GraphSpec
from .intmat import Matrix, as_matrix
from .pathspace import (BoundaryPattern, MarkovModel, cluster_patterns,
                        make_pattern, validate_model)


def _fail(path: str, message: str) -> ValidationError:
    return ValidationError(f"{path}: {message}")


def loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError(
            f"invalid JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc


def _require(obj: dict, key: str, path: str):
    if key not in obj:
        raise _fail(path, f"missing field {key!r}")
    return obj[key]


def _int_rows(value, path: str) -> list[list[int]]:
    if not isinstance(value, list) or not all(isinstance(r, list) for r in value):
        raise _fail(path, "must be a list of rows")
    return value


def parse_graph(obj) -> GraphSpec:
    """Parse a graph object (already-decoded JSON or a JSON string)."""
    if isinstance(obj, str):
        obj = loads(obj)
    if not isinstance(obj, dict):
        raise _fail("graph", "must be a JSON object")
    kind = _require(obj, "type", "graph")
    if kind == "finite":
        rows = _int_rows(_require(obj, "rows", "graph"), "graph.rows")
        return FiniteGraph(tuple(map(tuple, rows)))
    if kind == "block":
        raw = _require(obj, "classes", "graph")
        if not isinstance(raw, list):
            raise _fail("graph.classes", "must be a list of {card: ...} objects")
        sizes = []
        for k, entry in enumerate(raw):
            path = f"graph.classes[{k}]"
            if not isinstance(entry, dict):
                raise _fail(path, "must be an object with a 'card' field")
            card = _require(entry, "card", path)
            if card == "inf":
                sizes.append(None)
            elif isinstance(card, int) and not isinstance(card, bool):
                sizes.append(card)
            else:
                raise _fail(path + ".card", f"must be a positive integer or 'inf', got {card!r}")
        block = _int_rows(_require(obj, "block", "graph"), "graph.block")
        return BlockPatternGraph(tuple(sizes), tuple(map(tuple, block)))
    if kind == "banded":
        prefix = _int_rows(_require(obj, "prefix", "graph"), "graph.prefix")
        cutoff = _require(obj, "cutoff", "graph")
        if not isinstance(cutoff, int) or isinstance(cutoff, bool) or cutoff < 0:
            raise _fail("graph.cutoff", f"must be a nonnegative integer, got {cutoff!r}")
        offsets = _require(obj, "offsets", "graph")
        if not isinstance(offsets, list):
            raise _fail("graph.offsets", "must be a list of positive integers")
        cross = _int_rows(_require(obj, "cross", "graph"), "graph.cross")
        return BandedTailGraph(tuple(map(tuple, prefix)), cutoff,
                               tuple(offsets), tuple(map(tuple, cross)))
    raise _fail("graph.type", f"unknown graph type {kind!r}")


def parse_boundary(g: GraphSpec, spec) -> frozenset[BoundaryPattern]:
    """Parse a boundary family fragment against a graph."""
    if isinstance(spec, str):
        if spec == "auto":
            return cluster_patterns(g)
        spec = loads(spec)
        if spec == "auto":
            return cluster_patterns(g)
    if not isinstance(spec, list):
        raise _fail("boundary", "must be \"auto\" or a list of pattern objects")
    patterns = set()
    for k, entry in enumerate(spec):
        path = f"boundary[{k}]"
        if not isinstance(entry, dict):
            raise _fail(path, "must be an object with 'finite'/'classes' fields")
        finite = entry.get("finite", [])
        classes = entry.get("classes", [])
        if not isinstance(finite, list) or not isinstance(classes, list):
            raise _fail(path, "'finite' and 'classes' must be lists")
        patterns.add(make_pattern(g, finite=finite, classes=classes))
    return frozenset(patterns)


def parse_model(graph_obj, boundary_spec="auto") -> MarkovModel:
    g = parse_graph(graph_obj)
    return validate_model(g, parse_boundary(g, boundary_spec))


def pattern_to_json(p: BoundaryPattern) -> dict:
    return {"finite": sorted(p.finite), "classes": sorted(p.classes)}


# ---------------------------------------------------------------------------
# Matrices and certificates

def parse_matrix(value, path: str = "matrix") -> Matrix:
    rows = _int_rows(value, path)
    try:
        return as_matrix(rows)
    except ValidationError as exc:
        raise _fail(path, str(exc)) from exc


@dataclass(frozen=True)
class Certificate:
    A: Matrix
    B: Matrix
    pairs: tuple[tuple[Matrix, Matrix], ...]
    lag: Optional[int]  # None = strong chain certificate

    @property
    def is_chain(self) -> bool:
        return self.lag is None


def parse_certificate(obj) -> Certificate:
    if isinstance(obj, str):
        obj = loads(obj)
    if not isinstance(obj, dict):
        raise _fail("certificate", "must be a JSON object")
    A = parse_matrix(_require(obj, "A", "certificate"), "certificate.A")
    B = parse_matrix(_require(obj, "B", "certificate"), "certificate.B")
    if "chain" in obj:
        raw = obj["chain"]
        if not isinstance(raw, list) or not raw:
            raise _fail("certificate.chain", "must be a nonempty list of {R,S} objects")
        pairs = []
        for k, entry in enumerate(raw):
            path = f"certificate.chain[{k}]"
            if not isinstance(entry, dict):
                raise _fail(path, "must be an object with 'R' and 'S'")
            pairs.append((parse_matrix(_require(entry, "R", path), path + ".R"),
                          parse_matrix(_require(entry, "S", path), path + ".S")))
        return Certificate(A, B, tuple(pairs), None)
    R = parse_matrix(_require(obj, "R", "certificate"), "certificate.R")
    S = parse_matrix(_require(obj, "S", "certificate"), "certificate.S")
    lag = obj.get("lag", 1)
    if not isinstance(lag, int) or isinstance(lag, bool) or lag < 1:
        raise _fail("certificate.lag", f"must be a positive integer, got {lag!r}")
    return Certificate(A, B, ((R, S),), lag)


def matrix_to_json(m: Matrix) -> list[list[int]]:
    return [list(row) for row in m]
