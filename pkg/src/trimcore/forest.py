"""Metric trees, metric forests and their leaf spaces.

A :class:`MetricTree` is unrooted when ``root`` is ``None``.  Leaves of a
rooted tree are its degree-1 vertices other than the root; for an unrooted
tree every degree-1 vertex is a leaf.
"""
from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Mapping, Optional

from .errors import (
    BadDepth,
    BaseMismatch,
    InvalidForest,
    InvalidTree,
    NoLeaves,
    UnknownVertex,
)
from .metric import PseudometricSpace, as_rational, check_axioms
from .trimming import TrimChain, trim_core


@dataclass(frozen=True, eq=False)
class MetricTree:
    vertices: tuple
    edges: tuple
    root: Optional[str] = None

    def __post_init__(self):
        verts = tuple(str(v) for v in self.vertices)
        edges = tuple((str(u), str(v), as_rational(w)) for u, v, w in self.edges)
        object.__setattr__(self, "vertices", verts)
        object.__setattr__(self, "edges", edges)
        if self.root is not None:
            object.__setattr__(self, "root", str(self.root))
        if len(set(verts)) != len(verts):
            raise InvalidTree("duplicate vertex ids")
        if not edges:
            raise InvalidTree("a tree needs at least one edge")
        if len(edges) != len(verts) - 1:
            raise InvalidTree(f"{len(verts)} vertices but {len(edges)} edges")
        known = set(verts)
        for u, v, w in edges:
            if u not in known or v not in known:
                raise UnknownVertex(u if u not in known else v)
            if u == v:
                raise InvalidTree(f"self-loop at {u!r}")
            if w < 0:
                raise InvalidTree(f"negative length on edge {u}-{v}")
        if self.root is not None and self.root not in known:
            raise UnknownVertex(self.root)
        if len(self._reach(verts[0])) != len(verts):
            raise InvalidTree("graph is not connected")

    @cached_property
    def adjacency(self) -> dict:
        adj = {v: [] for v in self.vertices}
        for u, v, w in self.edges:
            adj[u].append((v, w))
            adj[v].append((u, w))
        return adj

    def degree(self, v) -> int:
        try:
            return len(self.adjacency[v])
        except KeyError:
            raise UnknownVertex(v) from None

    @property
    def is_rooted(self) -> bool:
        return self.root is not None

    @cached_property
    def leaves(self) -> tuple:
        return tuple(
            v for v in self.vertices if len(self.adjacency[v]) == 1 and v != self.root
        )

    def neighbor(self, leaf) -> str:
        return self.adjacency[leaf][0][0]

    def _reach(self, source) -> dict:
        # parent-pointer traversal; acyclic so each vertex is reached once
        dist = {source: Fraction(0)}
        stack = [source]
        while stack:
            u = stack.pop()
            for v, w in self.adjacency[u]:
                if v not in dist:
                    dist[v] = dist[u] + w
                    stack.append(v)
        return dist

    def distances_from(self, source) -> dict:
        if source not in self.adjacency:
            raise UnknownVertex(source)
        return self._reach(source)

    def with_root(self, root) -> "MetricTree":
        return MetricTree(self.vertices, self.edges, root)

    def unrooted(self) -> "MetricTree":
        return MetricTree(self.vertices, self.edges, None)

    def total_length(self) -> Fraction:
        return sum((w for _, _, w in self.edges), Fraction(0))

    def __len__(self):
        return len(self.edges)

    def __repr__(self):
        return f"MetricTree({len(self.vertices)} vertices, root={self.root!r})"


RootedMetricTree = MetricTree


def tree_path_metric(tree: MetricTree, u, v) -> Fraction:
    """Sum of edge lengths along the unique simple ``u``-``v`` path."""
    if v not in tree.adjacency:
        raise UnknownVertex(v)
    return tree.distances_from(u)[v]


def _restricted_path_metric(tree: MetricTree, points) -> PseudometricSpace:
    rows = []
    for p in points:
        dist = tree.distances_from(p)
        rows.append(tuple(dist[q] for q in points))
    return PseudometricSpace(tuple(points), tuple(rows))


def leaf_space_unrooted(tree: MetricTree) -> PseudometricSpace:
    """Path metric restricted to all degree-1 vertices (any root is ignored)."""
    points = [v for v in tree.vertices if tree.degree(v) == 1]
    return _restricted_path_metric(tree, points)


def rooted_leaf_space(tree: MetricTree) -> PseudometricSpace:
    return _restricted_path_metric(tree, list(tree.leaves))


@dataclass(frozen=True, eq=False)
class MetricForest:
    """Metric base plus one rooted tree per base point.

    ``leaf_order`` optionally fixes the point order of the leaf space;
    otherwise leaves are listed component by component in base order.
    """

    base: PseudometricSpace
    components: Mapping
    leaf_order: Optional[tuple] = None

    def __post_init__(self):
        comps = dict(self.components)
        check_axioms(self.base)
        if not self.base.is_metric():
            raise InvalidForest("forest base must be a metric space")
        if set(comps) != set(self.base.labels):
            raise InvalidForest("components must be indexed by the base points")
        comps = {a: comps[a] for a in self.base.labels}
        seen = set()
        for a, tree in comps.items():
            if not tree.is_rooted:
                raise InvalidForest(f"component {a!r} has no root")
            clash = seen.intersection(tree.vertices)
            if clash:
                raise InvalidForest(f"vertex ids reused across components: {sorted(clash)}")
            seen.update(tree.vertices)
        object.__setattr__(self, "components", comps)
        if self.leaf_order is not None:
            order = tuple(self.leaf_order)
            leaves = [x for t in comps.values() for x in t.leaves]
            if sorted(order) != sorted(leaves):
                raise InvalidForest("leaf_order does not list the leaves exactly once")
            object.__setattr__(self, "leaf_order", order)

    def __len__(self):
        return sum(len(t) for t in self.components.values())

    def __repr__(self):
        return f"MetricForest(base={list(self.base.labels)!r}, edges={len(self)})"


@dataclass(frozen=True)
class LeafSpaceResult:
    space: PseudometricSpace
    leaf_origin: dict = field(repr=False)  # leaf -> (base point, vertex id)


def leaf_space(forest: MetricForest) -> LeafSpaceResult:
    """Leaf pseudometric: tree path metric inside a component, routed through
    both roots and the base distance across components."""
    origin = {}
    to_root = {}
    within = {}
    for a, tree in forest.components.items():
        if not tree.leaves:
            raise NoLeaves(a)
        from_root = tree.distances_from(tree.root)
        for x in tree.leaves:
            origin[x] = (a, x)
            to_root[x] = from_root[x]
            within[x] = tree.distances_from(x)
    order = forest.leaf_order or tuple(origin)
    base = forest.base
    rows = []
    for x in order:
        a = origin[x][0]
        row = []
        for y in order:
            b = origin[y][0]
            if a == b:
                row.append(within[x][y])
            else:
                row.append(to_root[x] + base.d(a, b) + to_root[y])
        rows.append(tuple(row))
    space = PseudometricSpace(order, tuple(rows))
    return LeafSpaceResult(space, {x: origin[x] for x in order})


def _level_namer(labels, n):
    sep = "@"
    taken = set(labels)
    while True:
        if all(f"{lab}{sep}{i}" not in taken for lab in labels for i in range(1, n + 1)):
            return lambda lab, i: lab if i == 0 else f"{lab}{sep}{i}"
        sep += "@"


def canonical_forest(chain: TrimChain, n: int) -> MetricForest:
    """Forest with base ``t^n(X)`` and leaf space ``X``.

    Vertices are the points of every stage ``X_0 .. X_n``; each point ``v`` of
    ``X_i`` is joined to its image in ``X_(i+1)`` by an edge of length
    ``dbar_i(v)``.  Stage-``i`` vertices are named ``<label>@<i>`` and the
    leaves keep the original labels.  Depths beyond the height append identity
    levels with zero-length edges.
    """
    if not isinstance(n, int) or n < 1:
        raise BadDepth(f"depth must be a positive integer, got {n!r}")
    source = chain.source
    stages = chain.spaces
    height = chain.height
    name = _level_namer(source.labels, n)
    parent: dict = {}
    length: dict = {}
    for i in range(n):
        if i < height:
            step = chain.steps[i]
            for lab in step.source.labels:
                parent[(i, lab)] = (i + 1, step.projection(lab))
                length[(i, lab)] = step.dbar[lab]
        else:
            for lab in chain.core.labels:
                parent[(i, lab)] = (i + 1, lab)
                length[(i, lab)] = Fraction(0)

    root_of = {}

    def find_root(node):
        path = []
        while node[0] < n and node not in root_of:
            path.append(node)
            node = parent[node]
        r = root_of.get(node, node)
        for p in path:
            root_of[p] = r
        return r

    top = stages[min(n, height)]
    verts = {lab: [] for lab in top.labels}
    edges = {lab: [] for lab in top.labels}
    for i in range(n):
        labels = stages[min(i, height)].labels
        for lab in labels:
            node = (i, lab)
            r = find_root(node)[1]
            verts[r].append(name(lab, i))
            p = parent[node]
            edges[r].append((name(lab, i), name(p[1], p[0]), length[node]))
    components = {}
    for lab in top.labels:
        root = name(lab, n)
        components[lab] = MetricTree(tuple(verts[lab]) + (root,), tuple(edges[lab]), root)
    return MetricForest(top, components, tuple(source.labels))


def canonical_forest_for_theorem1(space: PseudometricSpace) -> MetricForest:
    """Canonical forest with leaf space ``space`` and base its trim core.

    Height 0 gives the segment forest (one zero-length edge per point).
    """
    if len(space) == 0:
        return MetricForest(space, {}, ())
    chain = trim_core(space)
    return canonical_forest(chain, max(chain.height, 1))


def segment_forest(base: PseudometricSpace) -> MetricForest:
    """One zero-length edge per base point; its leaf space is ``base`` itself."""
    name = _level_namer(base.labels, 1)
    comps = {
        lab: MetricTree((lab, name(lab, 1)), ((lab, name(lab, 1), 0),), name(lab, 1))
        for lab in base.labels
    }
    return MetricForest(base, comps, tuple(base.labels))


def _leaf_like(tree: MetricTree, v) -> bool:
    return tree.degree(v) == 1 and (tree.root is None or v != tree.root)


def tree_bullet(tree: MetricTree) -> MetricTree:
    """Zero the lengths of all leaf-adjacent edges, keeping the others."""
    edges = tuple(
        (u, v, Fraction(0) if _leaf_like(tree, u) or _leaf_like(tree, v) else w)
        for u, v, w in tree.edges
    )
    return MetricTree(tree.vertices, edges, tree.root)


def forest_bullet(forest: MetricForest) -> MetricForest:
    comps = {a: tree_bullet(t) for a, t in forest.components.items()}
    return MetricForest(forest.base, comps, forest.leaf_order)


def reduce_tree(tree: MetricTree) -> MetricTree:
    """Remove non-root degree-2 vertices (lengths add up) and contract
    zero-length edges whose endpoints both have degree != 1.

    Leaf-space distances are unchanged and the root is preserved.
    """
    verts = list(tree.vertices)
    edges = [list(e) for e in tree.edges]
    root = tree.root
    while True:
        deg = defaultdict(int)
        for u, v, _ in edges:
            deg[u] += 1
            deg[v] += 1
        mid = next((v for v in verts if deg[v] == 2 and v != root), None)
        if mid is not None:
            (e1, e2) = [e for e in edges if mid in e[:2]]
            a = e1[0] if e1[1] == mid else e1[1]
            b = e2[0] if e2[1] == mid else e2[1]
            edges = [e for e in edges if e is not e1 and e is not e2]
            edges.append([a, b, e1[2] + e2[2]])
            verts.remove(mid)
            continue
        zero = next(
            (e for e in edges if e[2] == 0 and deg[e[0]] != 1 and deg[e[1]] != 1), None
        )
        if zero is None:
            break
        u, v = zero[0], zero[1]
        keep, drop = (v, u) if v == root or (u != root and verts.index(v) < verts.index(u)) else (u, v)
        edges = [e for e in edges if e is not zero]
        for e in edges:
            if e[0] == drop:
                e[0] = keep
            if e[1] == drop:
                e[1] = keep
        verts.remove(drop)
    return MetricTree(tuple(verts), tuple(tuple(e) for e in edges), root)


def reduce_forest(forest: MetricForest) -> MetricForest:
    comps = {a: reduce_tree(t) for a, t in forest.components.items()}
    return MetricForest(forest.base, comps, forest.leaf_order)


def is_reduced(tree: MetricTree) -> bool:
    """No degree-2 vertices except possibly the root."""
    return all(tree.degree(v) != 2 or v == tree.root for v in tree.vertices)


def contiguous_leaves(tree: MetricTree) -> set:
    """Unordered pairs of leaves with the same neighbor, as tuples in vertex order."""
    groups = defaultdict(list)
    for x in tree.leaves:
        groups[tree.neighbor(x)].append(x)
    return {pair for group in groups.values() for pair in combinations(group, 2)}


def compose_forests(zeta: MetricForest, eta: MetricForest) -> MetricForest:
    """Glue ``zeta`` (over ``A``) onto ``eta`` (over ``B``) where ``A`` is the
    leaf space of ``eta``: each leaf ``a`` of ``eta_b`` is identified with the
    root of ``zeta_a``.  The result lives over ``B`` and has the leaf space of
    ``zeta``.

    Vertex ids of ``zeta`` are kept; clashing internal ids of ``eta`` get
    primes appended.
    """
    eta_leaves = leaf_space(eta).space
    if not zeta.base.same_labeled(eta_leaves):
        raise BaseMismatch("base of the first forest is not the leaf space of the second")
    zeta_ids = {v for t in zeta.components.values() for v in t.vertices}
    eta_ids = {v for t in eta.components.values() for v in t.vertices}
    rename = {}
    for v in sorted(eta_ids):
        new = v
        while new in zeta_ids or (new != v and new in eta_ids):
            new += "'"
        rename[v] = new
    comps = {}
    for b, tree in eta.components.items():
        glue = {a: zeta.components[a].root for a in tree.leaves}
        verts = [rename[v] for v in tree.vertices if v not in glue]
        edges = [
            (glue.get(u, rename[u]), glue.get(v, rename[v]), w) for u, v, w in tree.edges
        ]
        for a in tree.leaves:
            sub = zeta.components[a]
            verts.extend(sub.vertices)
            edges.extend(sub.edges)
        comps[b] = MetricTree(tuple(verts), tuple(edges), rename[tree.root])
    order = zeta.leaf_order or tuple(leaf_space(zeta).space.labels)
    return MetricForest(eta.base, comps, order)


def rooted_to_unrooted(tree: MetricTree) -> MetricTree:
    """Unrooted tree with the same leaf space as a rooted one.

    While the root has degree 1 it is deleted along with its edge and the
    neighbor becomes the root.  Fails if the leaf space is a single point.
    """
    verts, edges, root = list(tree.vertices), list(tree.edges), tree.root
    current = tree
    while root is not None and current.degree(root) == 1:
        nxt = current.neighbor(root)
        if current.degree(nxt) == 1:
            raise ValueError("leaf space has a single point; no unrooted witness")
        edges = [e for e in edges if root not in e[:2]]
        verts.remove(root)
        root = nxt
        current = MetricTree(tuple(verts), tuple(edges), root)
    return current.unrooted()
