import random
from fractions import Fraction
from itertools import combinations

import pytest

from trimcore import validate_space
from trimcore.generators import four_point_example


def brute_dbar(labels, d):
    """Reference d-underline straight from the definition, on plain dicts."""
    n = len(labels)
    if n == 1:
        return {labels[0]: Fraction(0)}
    if n == 2:
        x, y = labels
        return {x: Fraction(d[x][y], 2), y: Fraction(d[x][y], 2)}
    out = {}
    for x in labels:
        rest = [p for p in labels if p != x]
        out[x] = min(
            Fraction(d[x][y] + d[x][z] - d[y][z], 2) for y, z in combinations(rest, 2)
        )
    return out


def as_dict(space):
    return {a: {b: space.d(a, b) for b in space.labels} for a in space.labels}


@pytest.fixture
def triangle():
    # vertices opposite the sides 5, 4, 3
    return validate_space(["x", "y", "z"], [[0, 3, 4], [3, 0, 5], [4, 5, 0]])


@pytest.fixture
def four_point():
    return four_point_example(1, 2)


@pytest.fixture
def xyab():
    labels = ["x", "y", "a", "b"]
    far = {("x", "a"), ("x", "b"), ("y", "a"), ("y", "b")}
    rows = [[1 if (p, q) in far or (q, p) in far else 0 for q in labels] for p in labels]
    return validate_space(labels, rows)


@pytest.fixture
def rng():
    return random.Random(20261015)
