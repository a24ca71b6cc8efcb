import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from trimcore import (
    BadDepth,
    BaseMismatch,
    InvalidForest,
    InvalidTree,
    MetricForest,
    MetricTree,
    UnknownVertex,
    canonical_forest,
    canonical_forest_for_theorem1,
    compose_forests,
    contiguous_leaves,
    d_bullet,
    drift,
    find_isometry,
    forest_bullet,
    is_reduced,
    leaf_space,
    leaf_space_unrooted,
    reduce_forest,
    reduce_tree,
    rooted_leaf_space,
    rooted_to_unrooted,
    segment_forest,
    trim_core,
    tree_bullet,
    tree_path_metric,
    validate_space,
)
from trimcore.generators import (
    hamming_space,
    random_forest,
    random_metric_space,
    random_rich_space,
    random_rooted_tree,
    random_trim_base,
    random_tree,
)
from trimcore.metric import zero_space


def star(legs, center="c", root=None):
    names = tuple(f"l{i + 1}" for i in range(len(legs)))
    return MetricTree(names + (center,), tuple((n, center, w) for n, w in zip(names, legs)), root)


def test_tree_validation():
    with pytest.raises(InvalidTree):
        MetricTree(("a",), ())
    with pytest.raises(InvalidTree):
        MetricTree(("a", "b", "c", "d"), (("a", "b", 1), ("c", "d", 1), ("a", "b", 1)))
    with pytest.raises(InvalidTree):
        MetricTree(("a", "b"), (("a", "b", -1),))
    with pytest.raises(UnknownVertex):
        MetricTree(("a", "b"), (("a", "z", 1),))


def test_tree_path_metric():
    path = MetricTree(("a", "b", "c"), (("a", "b", 2), ("b", "c", 3)))
    assert tree_path_metric(path, "a", "a") == 0
    assert tree_path_metric(path, "a", "c") == 5
    assert tree_path_metric(star([1, 2, 3]), "l1", "l3") == 4
    with pytest.raises(UnknownVertex):
        tree_path_metric(path, "a", "q")


def test_rooted_leaves_exclude_root():
    seg = MetricTree(("r", "x"), (("r", "x", 0),), "r")
    assert seg.leaves == ("x",)
    assert star([1, 2, 3], root="c").leaves == ("l1", "l2", "l3")


def test_leaf_space_unrooted():
    edge = MetricTree(("a", "b"), (("a", "b", 3),))
    assert leaf_space_unrooted(edge) == validate_space("ab", [[0, 3], [3, 0]])
    assert leaf_space_unrooted(star([1, 2, 3])) == validate_space(
        ["l1", "l2", "l3"], [[0, 3, 4], [3, 0, 5], [4, 5, 0]]
    )
    cat = MetricTree(
        ("a", "b", "u", "v", "c", "d"),
        (("a", "u", 1), ("b", "u", 2), ("u", "v", 0), ("v", "c", 3), ("v", "d", 4)),
    )
    contracted = MetricTree(
        ("a", "b", "u", "c", "d"),
        (("a", "u", 1), ("b", "u", 2), ("u", "c", 3), ("u", "d", 4)),
    )
    assert leaf_space_unrooted(cat) == leaf_space_unrooted(contracted)


def test_leaf_space_of_forests(four_point):
    seg = segment_forest(four_point)
    assert leaf_space(seg).space == four_point
    single = MetricForest(zero_space(["o"]), {"o": star([1, 2, 3], root="c")})
    assert leaf_space(single).space == rooted_leaf_space(star([1, 2, 3], root="c"))
    base = validate_space("AB", [[0, 5], [5, 0]])
    two = MetricForest(
        base,
        {
            "A": MetricTree(("ra", "x"), (("ra", "x", 1),), "ra"),
            "B": MetricTree(("rb", "y"), (("rb", "y", 1),), "rb"),
        },
    )
    res = leaf_space(two)
    assert res.space.d("x", "y") == 7
    assert res.leaf_origin == {"x": ("A", "x"), "y": ("B", "y")}


def test_forest_validation():
    base = validate_space("AB", [[0, 1], [1, 0]])
    t = MetricTree(("r", "x"), (("r", "x", 1),), "r")
    with pytest.raises(InvalidForest):
        MetricForest(base, {"A": t, "B": t})
    with pytest.raises(InvalidForest):
        MetricForest(zero_space("AB"), {"A": t, "B": MetricTree(("s", "y"), (("s", "y", 1),), "s")})
    with pytest.raises(InvalidForest):
        MetricForest(zero_space("A"), {"A": t.unrooted()})


def test_canonical_forest_triangle(triangle):
    forest = canonical_forest(trim_core(triangle), 1)
    assert list(forest.components) == ["x"]
    tree = forest.components["x"]
    assert tree.root == "x@1"
    assert sorted((u, w) for u, _, w in tree.edges) == [("x", 1), ("y", 2), ("z", 3)]
    assert leaf_space(forest).space == triangle


def test_canonical_forest_height_zero_is_segment_forest(four_point):
    forest = canonical_forest_for_theorem1(four_point)
    assert forest.base == four_point
    for a, tree in forest.components.items():
        assert tree.edges == ((a, f"{a}@1", 0),)
    assert leaf_space(forest).space == four_point


def test_canonical_forest_degenerate_cases():
    one = zero_space(["p"])
    forest = canonical_forest_for_theorem1(one)
    assert len(forest.components) == 1 and len(forest) == 1
    assert leaf_space(forest).space == one
    two = validate_space("ab", [[0, 1], [1, 0]])
    forest = canonical_forest_for_theorem1(two)
    (tree,) = forest.components.values()
    assert sorted(w for _, _, w in tree.edges) == [Fraction(1, 2), Fraction(1, 2)]
    assert leaf_space(forest).space.d("a", "b") == 1
    with pytest.raises(BadDepth):
        canonical_forest(trim_core(two), 0)


def test_canonical_forest_deeper_than_height(rng):
    for _ in range(20):
        space = random_rich_space(rng, 7)
        chain = trim_core(space)
        for n in range(1, chain.height + 3):
            forest = canonical_forest(chain, n)
            assert forest.base == chain.stage(n)
            assert leaf_space(forest).space == space


def test_label_collision_gets_longer_separator():
    space = validate_space(["a", "a@1", "b"], [[0, 3, 4], [3, 0, 5], [4, 5, 0]])
    forest = canonical_forest_for_theorem1(space)
    assert leaf_space(forest).space == space
    assert forest.components["a"].root == "a@@1"


def test_tree_bullet():
    zeroed = tree_bullet(star([1, 2, 3]))
    assert [w for *_, w in zeroed.edges] == [0, 0, 0]
    joined = MetricTree(
        ("a", "b", "u", "v", "c", "d"),
        (("a", "u", 1), ("b", "u", 2), ("u", "v", 5), ("v", "c", 3), ("v", "d", 4)),
    )
    assert [w for *_, w in tree_bullet(joined).edges] == [0, 0, 5, 0, 0]
    rooted = MetricTree(("r", "u", "x", "y"), (("r", "u", 2), ("u", "x", 1), ("u", "y", 1)), "r")
    assert [w for *_, w in tree_bullet(rooted).edges] == [2, 0, 0]


def test_lemma_4_1_random_reduced_trees(rng):
    checked = 0
    while checked < 40:
        tree = reduce_tree(random_tree(rng, rng.randint(3, 14)))
        if len(leaf_space_unrooted(tree)) < 3:
            continue
        checked += 1
        assert all(tree.degree(v) != 2 for v in tree.vertices)
        lhs = leaf_space_unrooted(tree_bullet(tree))
        assert lhs == d_bullet(leaf_space_unrooted(tree))


def test_reduce_tree_examples():
    path = MetricTree(("a", "b", "c"), (("a", "b", 2), ("b", "c", 3)))
    red = reduce_tree(path)
    assert red.vertices == ("a", "c") and red.edges == (("a", "c", 5),)
    zero_mid = MetricTree(
        ("a", "b", "u", "v", "c", "d"),
        (("a", "u", 1), ("b", "u", 2), ("u", "v", 0), ("v", "c", 3), ("v", "d", 4)),
    )
    red = reduce_tree(zero_mid)
    assert len(red.vertices) == 5
    assert leaf_space_unrooted(red) == leaf_space_unrooted(zero_mid)
    s = star([1, 2, 3])
    assert reduce_tree(s).edges == s.edges and reduce_tree(s).vertices == s.vertices


def test_reduce_keeps_degree_two_root_and_leaf_zero_edges():
    t = MetricTree(("r", "x", "y"), (("r", "x", 0), ("r", "y", 1)), "r")
    assert reduce_tree(t).edges == t.edges


def test_contiguous_leaves():
    assert contiguous_leaves(star([1, 2, 3], root="c")) == {("l1", "l2"), ("l1", "l3"), ("l2", "l3")}
    assert contiguous_leaves(MetricTree(("r", "x"), (("r", "x", 1),), "r")) == set()


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 2**32), st.integers(2, 12))
def test_reduced_rooted_trees_have_contiguous_leaves(seed, n):
    tree = reduce_tree(random_rooted_tree(random.Random(seed), n))
    assert is_reduced(tree)
    if len(tree) >= 2:
        assert contiguous_leaves(tree)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**32), st.integers(2, 12), st.booleans())
def test_reduction_preserves_leaf_space(seed, n, rooted):
    rng = random.Random(seed)
    tree = random_rooted_tree(rng, n) if rooted else random_tree(rng, n)
    red = reduce_tree(tree)
    assert red.root == tree.root
    if rooted:
        assert rooted_leaf_space(red) == rooted_leaf_space(tree)
    else:
        assert leaf_space_unrooted(red) == leaf_space_unrooted(tree)
    assert reduce_tree(red).edges == red.edges


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**32), st.integers(1, 10))
def test_round_trip(seed, n):
    space = random_rich_space(random.Random(seed), n)
    forest = canonical_forest_for_theorem1(space)
    assert leaf_space(forest).space == space
    assert forest.base == trim_core(space).core
    assert set(forest.components) == set(forest.base.labels)


def test_point_core_witness(rng):
    done = 0
    while done < 30:
        space = random_rich_space(rng, rng.randint(2, 9))
        if len(trim_core(space).core) != 1:
            continue
        done += 1
        forest = canonical_forest_for_theorem1(space)
        assert len(forest.base) == 1
        (tree,) = forest.components.values()
        witness = rooted_to_unrooted(tree)
        assert witness.root is None
        assert find_isometry(leaf_space_unrooted(witness), space) is not None


def test_forest_bullet_examples(four_point, rng):
    seg = segment_forest(four_point)
    assert leaf_space(forest_bullet(seg)).space == leaf_space(seg).space
    single = MetricForest(zero_space(["o"]), {"o": star([1, 2, 3], root="c")})
    assert forest_bullet(single).components["o"].edges == tree_bullet(star([1, 2, 3], root="c")).edges


def test_lemma_5_2_on_random_reduced_forests(rng):
    for _ in range(25):
        base = random_trim_base(rng, allow_point=False)
        forest = reduce_forest(random_forest(rng, base, max_vertices=5))
        ls = leaf_space(forest).space
        assert leaf_space(forest_bullet(forest)).space == d_bullet(ls)


def test_single_edge_forests_are_drifts(rng):
    for _ in range(25):
        base = random_trim_base(rng, allow_point=False)
        forest = reduce_forest(random_forest(rng, base, max_vertices=2))
        assert len(forest) == len(base)
        res = leaf_space(forest)
        leaf_of = {a: x for x, (a, _) in res.leaf_origin.items()}
        d = res.space
        a0, b0, c0 = base.labels[:3]

        def excess(p, q):
            return d.d(leaf_of[p], leaf_of[q]) - base.d(p, q)

        f = {}
        for a in base.labels:
            b, c = [p for p in (a0, b0, c0, base.labels[3]) if p != a][:2]
            f[a] = (excess(a, b) + excess(a, c) - excess(b, c)) / 2
        drifted = drift(base, f).relabel(leaf_of)
        assert drifted.same_labeled(d)


def test_compose_examples(rng):
    base = random_metric_space(rng, 4)
    eta = segment_forest(base)
    zeta = random_forest(rng, leaf_space(eta).space)
    glued = compose_forests(zeta, eta)
    assert glued.base == base
    assert leaf_space(glued).space == leaf_space(zeta).space
    segs = compose_forests(segment_forest(leaf_space(eta).space), eta)
    assert all(len(t) == 2 for t in segs.components.values())
    assert leaf_space(segs).space.same_labeled(base)
    with pytest.raises(BaseMismatch):
        compose_forests(zeta, segment_forest(random_metric_space(rng, 4, prefix="z")))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32))
def test_compose_random_pairs(seed):
    rng = random.Random(seed)
    eta = random_forest(rng, random_metric_space(rng, rng.randint(1, 4)), max_vertices=5)
    a_space = leaf_space(eta).space
    if not a_space.is_metric():
        return
    zeta = random_forest(rng, a_space, max_vertices=4)
    glued = compose_forests(zeta, eta)
    assert glued.base == eta.base
    assert leaf_space(glued).space == leaf_space(zeta).space


def test_compose_canonical_forests_renames_clashes(rng):
    space = random_rich_space(rng, 6)
    zeta = canonical_forest_for_theorem1(space)
    eta = segment_forest(zeta.base)
    glued = compose_forests(zeta, eta)
    assert leaf_space(glued).space == space


def test_hamming_base_forest_core(rng):
    base = hamming_space(2)
    forest = random_forest(rng, base)
    core = trim_core(leaf_space(forest).space).core
    assert find_isometry(core, base) is not None



@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32))
def test_glued_witness_determines_core(seed):
    rng = random.Random(seed)
    trim_base = random_trim_base(rng)
    eta = random_forest(rng, trim_base, max_vertices=3)
    middle = leaf_space(eta).space
    if not middle.is_metric():
        return
    zeta = random_forest(rng, middle, max_vertices=3)
    glued = compose_forests(zeta, eta)
    x = leaf_space(glued).space
    assert x == leaf_space(zeta).space
    assert find_isometry(trim_core(x).core, trim_base) is not None
