"""Readers and writers: distance-matrix CSV/JSON, trim chains, trees, forests, DOT."""
from __future__ import annotations

import csv
import io
import json

from .errors import AxiomViolation
from .forest import MetricForest, MetricTree
from .metric import PseudometricSpace, as_rational, format_rational, validate_space
from .trimming import QuotientStep, TrimChain


class FormatError(ValueError):
    """Input that cannot be parsed at all (CLI exit status 2)."""


def _rational(text):
    try:
        return as_rational(text)
    except (TypeError, ValueError, ZeroDivisionError):
        raise AxiomViolation("value", (), f"not a rational literal: {text!r}") from None


# distance matrices

def space_from_csv(text: str) -> PseudometricSpace:
    rows = [r for r in csv.reader(io.StringIO(text)) if any(c.strip() for c in r)]
    if not rows:
        raise FormatError("empty CSV input")
    header = [c.strip() for c in rows[0]]
    if not header or header[0] != "label":
        raise FormatError("CSV header must start with 'label'")
    labels = header[1:]
    body = rows[1:]
    if len(body) != len(labels):
        raise AxiomViolation("shape", labels[:3], f"{len(labels)} labels but {len(body)} rows")
    matrix = []
    for i, row in enumerate(body):
        row = [c.strip() for c in row]
        if row[0] != labels[i]:
            raise AxiomViolation("shape", (row[0],), f"row {i + 1} should be labeled {labels[i]!r}")
        if len(row) - 1 != len(labels):
            raise AxiomViolation("shape", (row[0],), "row length does not match the header")
        matrix.append([_rational(c) for c in row[1:]])
    return validate_space(labels, matrix)


def space_to_csv(space: PseudometricSpace) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["label", *space.labels])
    for lab, row in zip(space.labels, space.to_rows()):
        writer.writerow([lab, *row])
    return buf.getvalue()


def space_to_dict(space: PseudometricSpace) -> dict:
    return {"points": list(space.labels), "dist": space.to_rows()}


def space_from_dict(data) -> PseudometricSpace:
    if not isinstance(data, dict) or "points" not in data or "dist" not in data:
        raise FormatError("space JSON needs 'points' and 'dist'")
    dist = data["dist"]
    if not isinstance(dist, list) or not all(isinstance(r, list) for r in dist):
        raise AxiomViolation("shape", (), "'dist' must be a list of rows")
    return validate_space(data["points"], [[_rational(str(v)) for v in row] for row in dist])


def space_from_json(text: str) -> PseudometricSpace:
    return space_from_dict(_load_json(text))


def space_to_json(space: PseudometricSpace) -> str:
    return json.dumps(space_to_dict(space), indent=2) + "\n"


def parse_space(text: str) -> PseudometricSpace:
    """JSON if the text starts with ``{``, CSV otherwise."""
    if text.lstrip().startswith("{"):
        return space_from_json(text)
    return space_from_csv(text)


def _load_json(text):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"invalid JSON: {exc}") from None


# trimming

def step_to_dict(step: QuotientStep) -> dict:
    return {
        "source": space_to_dict(step.source),
        "dbar": [format_rational(step.dbar[lab]) for lab in step.source.labels],
        "bullet": space_to_dict(step.bullet),
        "target": space_to_dict(step.target),
        "map": [step.projection(lab) for lab in step.source.labels],
    }


def chain_to_dict(chain: TrimChain) -> dict:
    return {
        "height": chain.height,
        "spaces": [space_to_dict(s) for s in chain.spaces],
        "dbar": [[format_rational(s.dbar[lab]) for lab in s.source.labels] for s in chain.steps],
        "maps": [[s.projection(lab) for lab in s.source.labels] for s in chain.steps],
        "core": space_to_dict(chain.core),
        "q": [chain.q(lab) for lab in chain.source.labels],
    }


# trees and forests

def tree_to_dict(tree: MetricTree) -> dict:
    out = {
        "vertices": list(tree.vertices),
        "edges": [[u, v, format_rational(w)] for u, v, w in tree.edges],
    }
    if tree.root is not None:
        out["root"] = tree.root
    return out


def tree_from_dict(data) -> MetricTree:
    try:
        raw = [(u, v, str(w)) for u, v, w in data["edges"]]
        vertices = tuple(data["vertices"])
        root = data.get("root")
    except (KeyError, TypeError, ValueError) as exc:
        raise FormatError(f"malformed tree JSON: {exc!r}") from None
    edges = tuple((u, v, _rational(w)) for u, v, w in raw)
    return MetricTree(vertices, edges, root)


def forest_to_dict(forest: MetricForest) -> dict:
    out = {
        "base": space_to_dict(forest.base),
        "components": {a: tree_to_dict(t) for a, t in forest.components.items()},
    }
    if forest.leaf_order is not None:
        out["leaves"] = list(forest.leaf_order)
    return out


def forest_from_dict(data) -> MetricForest:
    if not isinstance(data, dict) or "base" not in data or "components" not in data:
        raise FormatError("forest JSON needs 'base' and 'components'")
    base = space_from_dict(data["base"])
    comps = {a: tree_from_dict(t) for a, t in data["components"].items()}
    return MetricForest(base, comps, data.get("leaves"))


def forest_to_json(forest: MetricForest) -> str:
    return json.dumps(forest_to_dict(forest), indent=2) + "\n"


def parse_structure(text: str):
    """A :class:`MetricForest` or :class:`MetricTree` from JSON text."""
    data = _load_json(text)
    if isinstance(data, dict) and "base" in data:
        return forest_from_dict(data)
    if isinstance(data, dict) and "vertices" in data:
        return tree_from_dict(data)
    raise FormatError("expected a forest or tree JSON document")


def _dot_id(v):
    return json.dumps(str(v))


def _tree_dot_lines(tree: MetricTree, indent="  "):
    lines = []
    leaves = set(tree.leaves)
    for v in tree.vertices:
        if v == tree.root:
            shape = "doublecircle"
        elif v in leaves:
            shape = "box"
        else:
            shape = "circle"
        lines.append(f"{indent}{_dot_id(v)} [shape={shape}];")
    for u, v, w in tree.edges:
        lines.append(f"{indent}{_dot_id(u)} -- {_dot_id(v)} [label={_dot_id(format_rational(w))}];")
    return lines


def tree_to_dot(tree: MetricTree) -> str:
    return "\n".join(["graph tree {", *_tree_dot_lines(tree), "}"]) + "\n"


def forest_to_dot(forest: MetricForest) -> str:
    lines = ["graph forest {"]
    for k, (a, tree) in enumerate(forest.components.items()):
        lines.append(f"  subgraph cluster_{k} {{")
        lines.append(f"    label={_dot_id(a)};")
        lines.extend(_tree_dot_lines(tree, "    "))
        lines.append("  }")
    lines.append("}")
    return "\n".join(lines) + "\n"
