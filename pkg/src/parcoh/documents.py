"""Serialized forms of graphs, rules, morphisms and scenarios.

Documents are JSON objects with an explicit ``kind`` and ``format_version``.
Serialization is canonical (sorted keys, two-space indent, trailing newline),
so re-serializing a parsed document is byte-identical and every CLI output is
reproducible.  A scenario bundles one host graph with a list of rules and
chosen match indices, which keeps every morphism in a run explicit.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Any

from .errors import DocumentValidationError, ParseError
from .graphs import Edge, Graph, Morphism, Node, validate_graph
from .rewriting import WeakSpan, validate_rule

FORMAT_VERSION = "1"
KINDS = ("graph", "rule", "morphism", "scenario")


@dataclass(frozen=True)
class ScenarioStep:
    rule: WeakSpan
    match_index: int


@dataclass(frozen=True)
class Scenario:
    host: Graph
    steps: tuple[ScenarioStep, ...]


@dataclass(frozen=True)
class Document:
    kind: str
    payload: Graph | WeakSpan | Morphism | Scenario
    format_version: str = FORMAT_VERSION


# --------------------------------------------------------------------------
# to plain objects
# --------------------------------------------------------------------------


def graph_to_obj(g: Graph) -> dict:
    return {
        "nodes": [{"id": n.id, "label": n.label} for n in g.nodes],
        "edges": [
            {"id": e.id, "src": e.src, "tgt": e.tgt, "label": e.label}
            for e in g.edges
        ],
    }


def _map_to_obj(m: Morphism) -> dict:
    return {
        "nodes": dict(sorted(m.node_map.items())),
        "edges": dict(sorted(m.edge_map.items())),
    }


def rule_to_obj(rule: WeakSpan) -> dict:
    return {
        "name": rule.name,
        "L": graph_to_obj(rule.L),
        "K": graph_to_obj(rule.K),
        "I": graph_to_obj(rule.I),
        "R": graph_to_obj(rule.R),
        "l": _map_to_obj(rule.l),
        "i": _map_to_obj(rule.i),
        "r": _map_to_obj(rule.r),
    }


def morphism_to_obj(m: Morphism) -> dict:
    return {
        "dom": graph_to_obj(m.dom),
        "cod": graph_to_obj(m.cod),
        "nodes": dict(sorted(m.node_map.items())),
        "edges": dict(sorted(m.edge_map.items())),
    }


def scenario_to_obj(s: Scenario) -> dict:
    return {
        "host": graph_to_obj(s.host),
        "steps": [
            {"rule": rule_to_obj(step.rule), "match": step.match_index}
            for step in s.steps
        ],
    }


def document_to_obj(doc: Document) -> dict:
    payload_obj: dict
    if doc.kind == "graph":
        payload_obj = graph_to_obj(doc.payload)
    elif doc.kind == "rule":
        payload_obj = rule_to_obj(doc.payload)
    elif doc.kind == "morphism":
        payload_obj = morphism_to_obj(doc.payload)
    elif doc.kind == "scenario":
        payload_obj = scenario_to_obj(doc.payload)
    else:
        raise DocumentValidationError("kind", f"unknown kind {doc.kind!r}")
    return {"format_version": doc.format_version, "kind": doc.kind, doc.kind: payload_obj}


def dumps(obj: Any) -> str:
    """Canonical JSON text used for every document and CLI output."""
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def serialize_document(doc: Document) -> str:
    return dumps(document_to_obj(doc))


def graph_document(g: Graph) -> Document:
    return Document("graph", g)


def rule_document(rule: WeakSpan) -> Document:
    return Document("rule", rule)


def morphism_document(m: Morphism) -> Document:
    return Document("morphism", m)


def scenario_document(s: Scenario) -> Document:
    return Document("scenario", s)


# --------------------------------------------------------------------------
# from plain objects
# --------------------------------------------------------------------------


def _expect(obj: Any, type_: type, where: str) -> Any:
    if not isinstance(obj, type_):
        raise DocumentValidationError(
            where, f"expected {type_.__name__}, got {type(obj).__name__}"
        )
    return obj


def _expect_str_field(obj: dict, key: str, where: str) -> str:
    if key not in obj:
        raise DocumentValidationError(where, f"missing field {key!r}")
    return _expect(obj[key], str, f"{where}.{key}")


def graph_from_obj(obj: Any, where: str = "graph") -> Graph:
    body = _expect(obj, dict, where)
    nodes = []
    for i, item in enumerate(_expect(body.get("nodes", []), list, f"{where}.nodes")):
        row = _expect(item, dict, f"{where}.nodes[{i}]")
        nodes.append(
            Node(
                _expect_str_field(row, "id", f"{where}.nodes[{i}]"),
                _expect_str_field(row, "label", f"{where}.nodes[{i}]"),
            )
        )
    edges = []
    for i, item in enumerate(_expect(body.get("edges", []), list, f"{where}.edges")):
        row = _expect(item, dict, f"{where}.edges[{i}]")
        edges.append(
            Edge(
                _expect_str_field(row, "id", f"{where}.edges[{i}]"),
                _expect_str_field(row, "src", f"{where}.edges[{i}]"),
                _expect_str_field(row, "tgt", f"{where}.edges[{i}]"),
                _expect_str_field(row, "label", f"{where}.edges[{i}]"),
            )
        )
    g = Graph(tuple(nodes), tuple(edges))
    problem = validate_graph(g)
    if problem is not None:
        raise DocumentValidationError(where, problem)
    return g


def _str_map_from_obj(obj: Any, where: str) -> dict[str, str]:
    body = _expect(obj, dict, where)
    out = {}
    for key, value in body.items():
        out[_expect(key, str, where)] = _expect(value, str, f"{where}.{key}")
    return out


def morphism_between(dom: Graph, cod: Graph, obj: Any, where: str) -> Morphism:
    body = _expect(obj, dict, where)
    try:
        return Morphism(
            dom,
            cod,
            _str_map_from_obj(body.get("nodes", {}), f"{where}.nodes"),
            _str_map_from_obj(body.get("edges", {}), f"{where}.edges"),
        )
    except ValueError as exc:
        raise DocumentValidationError(where, str(exc)) from exc


def rule_from_obj(obj: Any, where: str = "rule") -> WeakSpan:
    body = _expect(obj, dict, where)
    name = _expect_str_field(body, "name", where)
    graphs = {}
    for part in ("L", "K", "I", "R"):
        if part not in body:
            raise DocumentValidationError(where, f"missing graph {part!r}")
        graphs[part] = graph_from_obj(body[part], f"{where}.{part}")
    rule = WeakSpan(
        name=name,
        L=graphs["L"],
        K=graphs["K"],
        I=graphs["I"],
        R=graphs["R"],
        l=morphism_between(graphs["K"], graphs["L"], body.get("l", {}), f"{where}.l"),
        i=morphism_between(graphs["I"], graphs["K"], body.get("i", {}), f"{where}.i"),
        r=morphism_between(graphs["I"], graphs["R"], body.get("r", {}), f"{where}.r"),
    )
    problem = validate_rule(rule)
    if problem is not None:
        raise DocumentValidationError(where, problem)
    return rule


def morphism_from_obj(obj: Any, where: str = "morphism") -> Morphism:
    body = _expect(obj, dict, where)
    for part in ("dom", "cod"):
        if part not in body:
            raise DocumentValidationError(where, f"missing graph {part!r}")
    dom = graph_from_obj(body["dom"], f"{where}.dom")
    cod = graph_from_obj(body["cod"], f"{where}.cod")
    return morphism_between(dom, cod, body, where)


def scenario_from_obj(obj: Any, where: str = "scenario") -> Scenario:
    body = _expect(obj, dict, where)
    if "host" not in body:
        raise DocumentValidationError(where, "missing field 'host'")
    host = graph_from_obj(body["host"], f"{where}.host")
    steps = []
    for i, item in enumerate(_expect(body.get("steps", []), list, f"{where}.steps")):
        row = _expect(item, dict, f"{where}.steps[{i}]")
        if "rule" not in row:
            raise DocumentValidationError(f"{where}.steps[{i}]", "missing field 'rule'")
        rule = rule_from_obj(row["rule"], f"{where}.steps[{i}].rule")
        index = row.get("match", 0)
        if not isinstance(index, int) or isinstance(index, bool) or index < 0:
            raise DocumentValidationError(
                f"{where}.steps[{i}].match", "match index must be a nonnegative integer"
            )
        steps.append(ScenarioStep(rule, index))
    if not steps:
        raise DocumentValidationError(where, "scenario needs at least one step")
    return Scenario(host, tuple(steps))


def document_from_obj(obj: Any) -> Document:
    body = _expect(obj, dict, "document")
    version = body.get("format_version")
    if version != FORMAT_VERSION:
        raise DocumentValidationError(
            "format_version", f"expected {FORMAT_VERSION!r}, got {version!r}"
        )
    kind = body.get("kind")
    if kind not in KINDS:
        raise DocumentValidationError("kind", f"expected one of {KINDS}, got {kind!r}")
    if kind not in body:
        raise DocumentValidationError(kind, f"missing payload field {kind!r}")
    payload_obj = body[kind]
    if kind == "graph":
        payload = graph_from_obj(payload_obj)
    elif kind == "rule":
        payload = rule_from_obj(payload_obj)
    elif kind == "morphism":
        payload = morphism_from_obj(payload_obj)
    else:
        payload = scenario_from_obj(payload_obj)
    return Document(kind, payload)


def parse_document(text: str) -> Document:
    """Parse and validate one document; raises ``ParseError`` with position
    info for malformed JSON and ``DocumentValidationError`` for structural
    problems."""
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(
            f"line {exc.lineno}, column {exc.colno}: {exc.msg}"
        ) from exc
    return document_from_obj(obj)


# --------------------------------------------------------------------------
# DOT export
# --------------------------------------------------------------------------


def _dot_quote(text: str) -> str:
    return '"' + text.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(g: Graph) -> str:
    """Deterministic DOT rendering: ids and labels, stable order."""
    lines = ["digraph {"]
    for n in g.nodes:
        lines.append(f"  {_dot_quote(n.id)} [label={_dot_quote(n.id + ':' + n.label)}];")
    for e in g.edges:
        lines.append(
            f"  {_dot_quote(e.src)} -> {_dot_quote(e.tgt)}"
            f" [label={_dot_quote(e.id + ':' + e.label)}];"
        )
    lines.append("}")
    return "\n".join(lines) + "\n"
