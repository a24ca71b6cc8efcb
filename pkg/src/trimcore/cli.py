"""Command-line front end: ``trimcore <verb> [files] [options]``.

Exit status is 0 on success, 1 on domain errors (axiom violations, size
bounds, mismatched forests) and 2 on I/O or parse errors.  Nothing is written
to the output stream unless the command succeeds.
"""
from __future__ import annotations

import argparse
import json
import random
import sys

from . import formats
from .errors import SizeBound, TrimcoreError
from .forest import (
    MetricForest,
    canonical_forest,
    canonical_forest_for_theorem1,
    compose_forests,
    leaf_space,
    leaf_space_unrooted,
    rooted_leaf_space,
)
from .generators import random_forest, random_metric_space, random_space, random_tree
from .metric import check_axioms, find_isometry, is_trim
from .trimming import trim_core, trim_step

VERBS = ("validate", "trim", "core", "forest", "leafspace", "check-trim", "isometric", "gen", "compose")
ARITY = {"isometric": 2, "compose": 2, "gen": 0}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="trimcore", description=__doc__.splitlines()[0])
    parser.add_argument("verb", choices=VERBS)
    parser.add_argument("inputs", nargs="*", help="input files ('-' for standard input); "
                        "for gen, the kind: space, metric, tree or forest")
    parser.add_argument("--seed", type=int, default=0)
    parser.add_argument("--points", type=int, default=6)
    parser.add_argument("--depth", type=int)
    parser.add_argument("--format", choices=("json", "csv", "dot"))
    parser.add_argument("--output", default="-")
    return parser


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _space_out(space, fmt):
    if fmt == "json":
        return formats.space_to_json(space)
    if fmt in (None, "csv"):
        return formats.space_to_csv(space)
    raise formats.FormatError("spaces cannot be written as DOT")


def _json(data) -> str:
    return json.dumps(data, indent=2) + "\n"


def _forest_out(forest, fmt):
    if fmt == "dot":
        return formats.forest_to_dot(forest)
    if fmt in (None, "json"):
        return formats.forest_to_json(forest)
    raise formats.FormatError("forests are written as json or dot")


def execute(args) -> str:
    """Run one command and return its serialized output."""
    verb, fmt = args.verb, args.format
    want = ARITY.get(verb, 1)
    if verb == "gen":
        if len(args.inputs) > 1:
            raise formats.FormatError("gen takes at most one kind argument")
    elif len(args.inputs) != want:
        raise formats.FormatError(f"{verb} expects {want} input path(s)")
    if args.points < 1:
        raise formats.FormatError("--points must be positive")
    if args.depth is not None and args.depth < 1:
        raise formats.FormatError("--depth must be positive")

    if verb == "gen":
        return _gen(args)
    if verb in ("leafspace", "compose"):
        docs = [formats.parse_structure(_read(p)) for p in args.inputs]
        if verb == "compose":
            zeta, eta = docs
            if not (isinstance(zeta, MetricForest) and isinstance(eta, MetricForest)):
                raise formats.FormatError("compose needs two forest files")
            return _forest_out(compose_forests(zeta, eta), fmt)
        (doc,) = docs
        if isinstance(doc, MetricForest):
            space = leaf_space(doc).space
        elif doc.is_rooted:
            space = rooted_leaf_space(doc)
        else:
            space = leaf_space_unrooted(doc)
        return _space_out(space, fmt)

    spaces = [formats.parse_space(_read(p)) for p in args.inputs]
    space = spaces[0]
    if verb == "validate":
        check_axioms(space)
        kind = "metric" if space.is_metric() else "pseudometric"
        return f"valid {kind} space with {len(space)} points\n"
    if verb == "check-trim":
        return "true\n" if is_trim(space) else "false\n"
    if verb == "trim":
        if fmt in ("csv",):
            return _space_out(trim_step(space).target, fmt)
        return _json(formats.step_to_dict(trim_step(space)))
    if verb == "core":
        chain = trim_core(space)
        if fmt == "csv":
            return _space_out(chain.core, fmt)
        return _json(formats.chain_to_dict(chain))
    if verb == "forest":
        if args.depth is None:
            forest = canonical_forest_for_theorem1(space)
        else:
            forest = canonical_forest(trim_core(space), args.depth)
        return _forest_out(forest, fmt)
    if verb == "isometric":
        try:
            iso = find_isometry(spaces[0], spaces[1])
        except SizeBound as exc:
            raise SizeBound(f"refusing isometry search: {exc}") from None
        return "none\n" if iso is None else _json(iso)
    raise AssertionError(verb)


def _gen(args) -> str:
    kind = args.inputs[0] if args.inputs else "space"
    rng = random.Random(args.seed)
    n = args.points
    if kind == "space":
        return _space_out(random_space(rng, n), args.format)
    if kind == "metric":
        return _space_out(random_metric_space(rng, n), args.format)
    if kind == "tree":
        tree = random_tree(rng, max(n, 2))
        if args.format == "dot":
            return formats.tree_to_dot(tree)
        return _json(formats.tree_to_dict(tree))
    if kind == "forest":
        return _forest_out(random_forest(rng, random_metric_space(rng, n)), args.format)
    raise formats.FormatError(f"unknown gen kind {kind!r}")


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        out = execute(args)
    except TrimcoreError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (formats.FormatError, OSError, UnicodeDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.output == "-":
        sys.stdout.write(out)
    else:
        try:
            with open(args.output, "w", encoding="utf-8") as fh:
                fh.write(out)
        except OSError as exc:
            print(f"error: {exc}", file=sys.stderr)
            return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
