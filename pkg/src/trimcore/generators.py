"""Seeded random spaces, trees and forests, plus the standard trim examples.

All randomness goes through a :class:`random.Random` instance passed in by the
caller, so a seed reproduces the output exactly.
"""
from __future__ import annotations

import math
import random
from fractions import Fraction
from itertools import product

from .forest import MetricForest, MetricTree, leaf_space, leaf_space_unrooted
from .metric import PseudometricSpace, is_trim
from .trimming import trim_core

LENGTH_GRID = tuple(Fraction(k, 2) for k in range(0, 9))


def _labels(n, prefix="p"):
    return tuple(f"{prefix}{i}" for i in range(n))


def metric_closure(rows) -> list:
    """Shortest-path closure of a symmetric non-negative matrix (Floyd-Warshall)."""
    fr = [[Fraction(v) for v in r] for r in rows]
    denom = math.lcm(1, *(v.denominator for r in fr for v in r))
    d = [[v.numerator * (denom // v.denominator) for v in r] for r in fr]
    n = len(d)
    for k in range(n):
        dk = d[k]
        for i in range(n):
            dik = d[i][k]
            di = d[i]
            for j in range(n):
                if dik + dk[j] < di[j]:
                    di[j] = dik + dk[j]
    return [[Fraction(v, denom) for v in r] for r in d]


def random_space(rng: random.Random, n: int, zero_prob: float = 0.1, prefix="p") -> PseudometricSpace:
    """Random pseudometric: grid-sampled distances repaired by metric closure."""
    rows = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < zero_prob:
                v = Fraction(0)
            else:
                v = Fraction(rng.randint(1, 12), rng.choice((1, 2, 3)))
            rows[i][j] = rows[j][i] = v
    return PseudometricSpace(_labels(n, prefix), metric_closure(rows))


def random_metric_space(rng: random.Random, n: int, prefix="b") -> PseudometricSpace:
    return random_space(rng, n, zero_prob=0.0, prefix=prefix)


def prufer_edges(rng: random.Random, n: int) -> list:
    """Edges of a uniformly random labeled tree on ``range(n)``, ``n >= 2``."""
    if n == 2:
        return [(0, 1)]
    seq = [rng.randrange(n) for _ in range(n - 2)]
    degree = [1] * n
    for v in seq:
        degree[v] += 1
    edges = []
    for v in seq:
        leaf = next(u for u in range(n) if degree[u] == 1)
        edges.append((leaf, v))
        degree[leaf] -= 1
        degree[v] -= 1
    u, w = (x for x in range(n) if degree[x] == 1)
    edges.append((u, w))
    return edges


def random_tree(rng: random.Random, n_vertices: int, prefix="v", lengths=LENGTH_GRID) -> MetricTree:
    """Unrooted tree from a random Prüfer sequence with grid lengths (zeros included)."""
    names = _labels(n_vertices, prefix)
    edges = tuple(
        (names[u], names[v], rng.choice(lengths)) for u, v in prufer_edges(rng, n_vertices)
    )
    return MetricTree(names, edges)


def random_rooted_tree(rng: random.Random, n_vertices: int, prefix="v", lengths=LENGTH_GRID) -> MetricTree:
    tree = random_tree(rng, n_vertices, prefix, lengths)
    return tree.with_root(rng.choice(tree.vertices))


def random_forest(rng: random.Random, base: PseudometricSpace, max_vertices: int = 6, lengths=LENGTH_GRID) -> MetricForest:
    """One random rooted tree (2..max_vertices vertices) per base point."""
    comps = {}
    for a in base.labels:
        comps[a] = random_rooted_tree(rng, rng.randint(2, max_vertices), prefix=f"{a}.", lengths=lengths)
    return MetricForest(base, comps)


def hamming_space(length: int, alphabet: int = 2) -> PseudometricSpace:
    words = ["".join(map(str, w)) for w in product(range(alphabet), repeat=length)]
    rows = [[sum(a != b for a, b in zip(u, v)) for v in words] for u in words]
    return PseudometricSpace(tuple(words), rows)


def circle_space(positions, circumference) -> PseudometricSpace:
    """Points on a circle with the shorter-arc distance."""
    c = Fraction(circumference)
    pos = [Fraction(p) % c for p in positions]
    rows = [[min(abs(p - q), c - abs(p - q)) for q in pos] for p in pos]
    return PseudometricSpace(_labels(len(pos), "c"), rows)


def four_point_example(r=1, s=2) -> PseudometricSpace:
    """Two pairs of antipodal points: ``d(a,b)=d(c,e)=r``, ``d(a,c)=d(b,e)=s``,
    ``d(a,e)=d(b,c)=r+s``."""
    r, s = Fraction(r), Fraction(s)
    d = {("a", "b"): r, ("c", "e"): r, ("a", "c"): s, ("b", "e"): s, ("a", "e"): r + s, ("b", "c"): r + s}
    labels = ("a", "b", "c", "e")
    rows = [
        [Fraction(0) if x == y else d.get((x, y), d.get((y, x))) for y in labels]
        for x in labels
    ]
    return PseudometricSpace(labels, rows)


def octagon() -> PseudometricSpace:
    return circle_space(range(8), 8)


def random_circle_trim(rng: random.Random, max_points: int = 10) -> PseudometricSpace:
    """Random circle subset meeting every half-circle in at least three points."""
    while True:
        c = 2 * rng.randint(4, 10)
        k = rng.randint(6, min(max_points, c))
        pts = sorted(rng.sample(range(c), k))
        space = circle_space(pts, c)
        if is_trim(space) and space.is_metric():
            return space


def random_trim_base(rng: random.Random, allow_point: bool = True) -> PseudometricSpace:
    """A trim metric space: a fixed example, a random circle arrangement, or
    the trim core of a random space."""
    kind = rng.randrange(6 if allow_point else 5)
    if kind == 0:
        return four_point_example(rng.randint(1, 4), Fraction(rng.randint(1, 6), 2))
    if kind == 1:
        return hamming_space(rng.choice((2, 3)))
    if kind == 2:
        return octagon()
    if kind in (3, 4):
        return random_circle_trim(rng)
    return trim_core(random_space(rng, rng.randint(2, 8))).core


def random_rich_space(rng: random.Random, n: int) -> PseudometricSpace:
    """Random ``n``-point pseudometric drawn from several families so that
    trim heights and cores vary: closures, tree leaf spaces and forest leaf
    spaces over trim bases (restricted to ``n`` leaves)."""
    kind = rng.randrange(3) if n >= 2 else 0
    if kind == 0:
        return random_space(rng, n)
    if kind == 1:
        while True:
            tree = random_tree(rng, rng.randint(2, 2 * n + 2))
            space = leaf_space_unrooted(tree)
            if len(space) >= n:
                return _relabel(space.restrict(rng.sample(space.labels, n)))
    while True:
        forest = random_forest(rng, random_trim_base(rng, allow_point=False), max_vertices=4)
        space = leaf_space(forest).space
        if len(space) >= n:
            return _relabel(space.restrict(rng.sample(space.labels, n)))


def _relabel(space: PseudometricSpace) -> PseudometricSpace:
    return PseudometricSpace(_labels(len(space)), space.dist)
