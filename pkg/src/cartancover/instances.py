"""Instance files: one JSON document per problem instance.

The format is UTF-8 JSON with all scalars exact: rationals are strings
"a/b" or "a" (or plain integers), prime-field values are decimal
residues. Fiber labels are 1-based in files and 0-based in memory.
Parsing failures name the offending location.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction

from .bundles import BaseGraph, BundleRep, SubalgebraBundle
from .covers import CoverRep, LineBundleOnCover
from .errors import ParseError
from .fields import QQ, field_from_json, field_to_json
from .linalg import Matrix, MatrixSubspace
from .parabolic import BranchPoint, RamifiedCoverData, RamifiedSheet, parse_weight

KINDS = ("cartan", "bundle", "cover", "parabolic")


@dataclass(frozen=True)
class CartanInstance:
    field: object
    dimension: int
    basis: tuple


@dataclass(frozen=True)
class BundleInstance:
    field: object
    bundle: BundleRep
    algebra: SubalgebraBundle | None


@dataclass(frozen=True)
class CoverInstance:
    field: object
    cover: CoverRep
    line_bundle: LineBundleOnCover | None


@dataclass(frozen=True)
class ParabolicInstance:
    field: object
    data: RamifiedCoverData
    line_degree: int


def _expect(obj, key, where):
    if not isinstance(obj, dict) or key not in obj:
        raise ParseError(f"{where}: missing field {key!r}")
    return obj[key]


def _expect_int(value, where):
    if isinstance(value, bool) or not isinstance(value, int):
        raise ParseError(f"{where}: expected an integer, got {value!r}")
    return value


def _expect_list(value, where):
    if not isinstance(value, list):
        raise ParseError(f"{where}: expected a list")
    return value


def parse_scalar(field, value, where):
    if isinstance(value, float):
        raise ParseError(f"{where}: floats are not exact scalars")
    try:
        return field.coerce(value)
    except ParseError as exc:
        raise ParseError(f"{where}: {exc}") from None


def parse_matrix(field, value, where) -> Matrix:
    rows = _expect_list(value, where)
    if not rows:
        raise ParseError(f"{where}: matrix needs at least one row")
    parsed = []
    for i, row in enumerate(rows):
        row = _expect_list(row, f"{where}[{i}]")
        parsed.append(
            [parse_scalar(field, x, f"{where}[{i}][{j}]") for j, x in enumerate(row)]
        )
    width = len(parsed[0])
    if any(len(r) != width for r in parsed) or width == 0:
        raise ParseError(f"{where}: matrix rows must be nonempty and equal length")
    return Matrix(field, parsed)


def matrix_to_json(field, m: Matrix):
    return [[field.render(x) for x in row] for row in m.rows]


def parse_graph(value, where) -> BaseGraph:
    n = _expect_int(_expect(value, "vertices", where), f"{where}.vertices")
    raw_edges = _expect_list(_expect(value, "edges", where), f"{where}.edges")
    edges = []
    for i, e in enumerate(raw_edges):
        e = _expect_list(e, f"{where}.edges[{i}]")
        if len(e) != 2:
            raise ParseError(f"{where}.edges[{i}]: expected a pair [u, v]")
        edges.append((_expect_int(e[0], where), _expect_int(e[1], where)))
    try:
        return BaseGraph(n, tuple(edges))
    except Exception as exc:
        raise ParseError(f"{where}: {exc}") from None


def graph_to_json(graph: BaseGraph):
    return {"vertices": graph.num_vertices, "edges": [list(e) for e in graph.edges]}


def _parse_cartan(field, payload):
    d = _expect_int(_expect(payload, "d", "payload"), "payload.d")
    raw = _expect_list(_expect(payload, "basis", "payload"), "payload.basis")
    basis = []
    for i, m in enumerate(raw):
        mat = parse_matrix(field, m, f"payload.basis[{i}]")
        if mat.nrows != d or mat.ncols != d:
            raise ParseError(f"payload.basis[{i}]: expected a {d}x{d} matrix")
        basis.append(mat)
    if not basis:
        raise ParseError("payload.basis: at least one matrix required")
    return CartanInstance(field, d, tuple(basis))


def _parse_bundle(field, payload):
    graph = parse_graph(_expect(payload, "graph", "payload"), "payload.graph")
    rank = _expect_int(_expect(payload, "rank", "payload"), "payload.rank")
    raw = _expect_list(_expect(payload, "transitions", "payload"), "payload.transitions")
    if len(raw) != len(graph.edges):
        raise ParseError("payload.transitions: one matrix per edge required")
    transitions = []
    for i, m in enumerate(raw):
        mat = parse_matrix(field, m, f"payload.transitions[{i}]")
        if mat.nrows != rank or mat.ncols != rank:
            raise ParseError(f"payload.transitions[{i}]: expected {rank}x{rank}")
        transitions.append(mat)
    bundle = BundleRep(field, graph, rank, tuple(transitions))
    algebra = None
    if "cartan_bundle" in payload:
        raw_fibers = _expect_list(payload["cartan_bundle"], "payload.cartan_bundle")
        if len(raw_fibers) != graph.num_vertices:
            raise ParseError("payload.cartan_bundle: one basis list per vertex required")
        fibers = []
        for v, mats in enumerate(raw_fibers):
            mats = _expect_list(mats, f"payload.cartan_bundle[{v}]")
            parsed = [
                parse_matrix(field, m, f"payload.cartan_bundle[{v}][{i}]")
                for i, m in enumerate(mats)
            ]
            fibers.append(MatrixSubspace(field, rank, parsed))
        algebra = SubalgebraBundle(bundle, tuple(fibers))
    return BundleInstance(field, bundle, algebra)


def _parse_cover(field, payload):
    graph = parse_graph(_expect(payload, "graph", "payload"), "payload.graph")
    degree = _expect_int(_expect(payload, "degree", "payload"), "payload.degree")
    raw_sigma = _expect_list(_expect(payload, "sigma", "payload"), "payload.sigma")
    if len(raw_sigma) != len(graph.edges):
        raise ParseError("payload.sigma: one permutation per edge required")
    sigma = []
    for i, images in enumerate(raw_sigma):
        images = _expect_list(images, f"payload.sigma[{i}]")
        vals = [_expect_int(x, f"payload.sigma[{i}]") for x in images]
        if sorted(vals) != list(range(1, degree + 1)):
            raise ParseError(
                f"payload.sigma[{i}]: expected a 1-based image list of 1..{degree}"
            )
        sigma.append(tuple(x - 1 for x in vals))
    try:
        cover = CoverRep(graph, degree, tuple(sigma))
    except Exception as exc:
        raise ParseError(f"payload: {exc}") from None
    line = None
    if "scalars" in payload:
        raw_scalars = _expect_list(payload["scalars"], "payload.scalars")
        if len(raw_scalars) != len(graph.edges):
            raise ParseError("payload.scalars: one scalar list per edge required")
        scalars = []
        for i, per_label in enumerate(raw_scalars):
            per_label = _expect_list(per_label, f"payload.scalars[{i}]")
            if len(per_label) != degree:
                raise ParseError(f"payload.scalars[{i}]: one scalar per label required")
            row = [
                parse_scalar(field, x, f"payload.scalars[{i}][{j}]")
                for j, x in enumerate(per_label)
            ]
            if any(x == 0 for x in row):
                raise ParseError(f"payload.scalars[{i}]: scalars must be nonzero")
            scalars.append(tuple(row))
        line = LineBundleOnCover(cover, field, tuple(scalars))
    return CoverInstance(field, cover, line)


def _parse_parabolic(field, payload):
    g_x = _expect_int(_expect(payload, "gX", "payload"), "payload.gX")
    degree = _expect_int(_expect(payload, "degree", "payload"), "payload.degree")
    comps = _expect_list(_expect(payload, "components", "payload"), "payload.components")
    component_degrees = tuple(_expect_int(x, "payload.components") for x in comps)
    branch = []
    for i, bp in enumerate(_expect_list(payload.get("branch_points", []), "payload.branch_points")):
        where = f"payload.branch_points[{i}]"
        profiles = [
            _expect_int(x, f"{where}.profiles")
            for x in _expect_list(_expect(bp, "profiles", where), f"{where}.profiles")
        ]
        weights = bp.get("weights", ["0"] * len(profiles))
        weights = _expect_list(weights, f"{where}.weights")
        if len(weights) != len(profiles):
            raise ParseError(f"{where}: one weight per profile entry required")
        comps_of = bp.get("component_of_sheet", [0] * len(profiles))
        comps_of = _expect_list(comps_of, f"{where}.component_of_sheet")
        if len(comps_of) != len(profiles):
            raise ParseError(f"{where}: one component per profile entry required")
        sheets = []
        for b, w, c in zip(profiles, weights, comps_of):
            try:
                weight = parse_weight(w)
            except ParseError as exc:
                raise ParseError(f"{where}.weights: {exc}") from None
            sheets.append(RamifiedSheet(b, weight, _expect_int(c, where)))
        branch.append(BranchPoint(tuple(sheets)))
    extra = []
    for i, weights in enumerate(
        _expect_list(payload.get("unramified_weights", []), "payload.unramified_weights")
    ):
        weights = _expect_list(weights, f"payload.unramified_weights[{i}]")
        parsed = []
        for w in weights:
            try:
                parsed.append(parse_weight(w))
            except ParseError as exc:
                raise ParseError(f"payload.unramified_weights[{i}]: {exc}") from None
        extra.append(tuple(parsed))
    deg_l = _expect_int(_expect(payload, "degL", "payload"), "payload.degL")
    data = RamifiedCoverData(g_x, degree, component_degrees, tuple(branch), tuple(extra))
    return ParabolicInstance(field, data, deg_l)


def parse_instance_text(text: str):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict):
        raise ParseError("instance must be a JSON object")
    field = field_from_json(_expect(doc, "field", "instance"))
    kind = _expect(doc, "kind", "instance")
    if kind not in KINDS:
        raise ParseError(f"kind: expected one of {KINDS}, got {kind!r}")
    payload = _expect(doc, "payload", "instance")
    if kind == "cartan":
        return _parse_cartan(field, payload)
    if kind == "bundle":
        return _parse_bundle(field, payload)
    if kind == "cover":
        return _parse_cover(field, payload)
    return _parse_parabolic(field, payload)


def load_instance(path: str):
    import sys

    if path == "-":
        return parse_instance_text(sys.stdin.read())
    try:
        with open(path, "r", encoding="utf-8") as fh:
            return parse_instance_text(fh.read())
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc}") from None


def cover_instance_to_json(field, cover: CoverRep, line: LineBundleOnCover | None = None):
    payload = {
        "graph": graph_to_json(cover.base),
        "degree": cover.degree,
        "sigma": [[x + 1 for x in s] for s in cover.sigma],
    }
    if line is not None:
        payload["scalars"] = [[field.render(x) for x in row] for row in line.scalars]
    return {"field": field_to_json(field), "kind": "cover", "payload": payload}


def bundle_instance_to_json(field, bundle: BundleRep, algebra: SubalgebraBundle | None = None):
    payload = {
        "graph": graph_to_json(bundle.graph),
        "rank": bundle.rank,
        "transitions": [matrix_to_json(field, t) for t in bundle.transitions],
    }
    if algebra is not None:
        payload["cartan_bundle"] = [
            [matrix_to_json(field, m) for m in fiber.basis_matrices()]
            for fiber in algebra.fibers
        ]
    return {"field": field_to_json(field), "kind": "bundle", "payload": payload}


def weight_to_str(w: Fraction) -> str:
    return str(w)
