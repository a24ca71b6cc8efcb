"""Finite pseudometric spaces with exact rational distances.

Everything here works on :class:`fractions.Fraction` values, so zero tests
(trimness, quotient classes) are exact.  Hot loops run on an integer copy of
the matrix scaled by the common denominator.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from itertools import combinations
from typing import Iterable, Mapping, Sequence, Union

from .errors import (
    AxiomViolation,
    DriftTooNegative,
    EmptySpace,
    SizeBound,
    TooSmall,
    UnknownPoint,
)

Point = Union[str, int]
PointFunction = dict  # label -> Fraction, in point order

DEFAULT_ISOMETRY_BOUND = 12


def as_rational(value) -> Fraction:
    """Convert ``value`` to an exact Fraction.

    Strings may be integers, decimals (``"0.25"``) or ``"p/q"`` literals.
    Floats are read through their shortest repr, so ``0.1`` becomes 1/10.
    """
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not distances")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"non-finite value {value!r}")
        return Fraction(repr(value))
    if isinstance(value, str):
        return Fraction(value.strip())
    return Fraction(value)


def format_rational(value: Fraction) -> str:
    """Lowest-terms ``p/q``; integers without ``/1``."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


@dataclass(frozen=True, eq=False)
class PseudometricSpace:
    """Labeled finite point set with a symmetric matrix of exact rationals.

    The constructor only checks shape and label uniqueness; use
    :func:`validate_space` to check the pseudometric axioms.
    """

    labels: tuple
    dist: tuple = field(repr=False)

    def __post_init__(self):
        labels = tuple(str(lab) for lab in self.labels)
        if len(set(labels)) != len(labels):
            dup = next(lab for lab in labels if labels.count(lab) > 1)
            raise AxiomViolation("shape", (dup,), "duplicate label")
        n = len(labels)
        rows = tuple(self.dist)
        if len(rows) != n or any(len(row) != n for row in rows):
            raise AxiomViolation(
                "shape", labels[:3], f"matrix is not {n}x{n}"
            )
        try:
            dist = tuple(tuple(as_rational(v) for v in row) for row in rows)
        except (TypeError, ValueError, ZeroDivisionError) as exc:
            raise AxiomViolation("value", (), str(exc)) from None
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "dist", dist)

    def __len__(self):
        return len(self.labels)

    def __iter__(self):
        return iter(self.labels)

    def __eq__(self, other):
        # order-sensitive; see same_labeled for an order-free comparison
        if not isinstance(other, PseudometricSpace):
            return NotImplemented
        return self.labels == other.labels and self.dist == other.dist

    def __hash__(self):
        return hash((self.labels, self.dist))

    def __repr__(self):
        return f"PseudometricSpace({list(self.labels)!r})"

    @cached_property
    def _index(self):
        return {lab: i for i, lab in enumerate(self.labels)}

    def index(self, point: Point) -> int:
        if isinstance(point, int) and not isinstance(point, bool):
            if 0 <= point < len(self.labels):
                return point
            raise UnknownPoint(point)
        try:
            return self._index[point]
        except KeyError:
            raise UnknownPoint(point) from None

    def d(self, x: Point, y: Point) -> Fraction:
        return self.dist[self.index(x)][self.index(y)]

    @cached_property
    def scaled(self):
        """``(M, D)`` with ``M`` an integer matrix and ``dist == M / D``."""
        denom = 1
        for row in self.dist:
            for v in row:
                denom = math.lcm(denom, v.denominator)
        mat = [[v.numerator * (denom // v.denominator) for v in row] for row in self.dist]
        return mat, denom

    def is_metric(self) -> bool:
        return all(self.dist[i][j] > 0 for i, j in combinations(range(len(self)), 2))

    def restrict(self, points: Iterable[Point]) -> "PseudometricSpace":
        idx = [self.index(p) for p in points]
        return PseudometricSpace(
            tuple(self.labels[i] for i in idx),
            tuple(tuple(self.dist[i][j] for j in idx) for i in idx),
        )

    def relabel(self, mapping: Mapping[str, str]) -> "PseudometricSpace":
        return PseudometricSpace(tuple(mapping.get(l, l) for l in self.labels), self.dist)

    def same_labeled(self, other: "PseudometricSpace") -> bool:
        """Equal as labeled matrices, ignoring point order."""
        if set(self.labels) != set(other.labels):
            return False
        return self == other.restrict(self.labels)

    def to_rows(self):
        return [[format_rational(v) for v in row] for row in self.dist]


def validate_space(labels: Sequence, matrix: Sequence[Sequence]) -> PseudometricSpace:
    """Build a space and check the pseudometric axioms exactly.

    Raises :class:`AxiomViolation` naming the offending labels.
    """
    space = PseudometricSpace(tuple(labels), tuple(tuple(r) for r in matrix))
    check_axioms(space)
    return space


def check_axioms(space: PseudometricSpace) -> None:
    lab, dist = space.labels, space.dist
    n = len(lab)
    for i in range(n):
        if dist[i][i] != 0:
            raise AxiomViolation("diagonal", (lab[i],))
    for i, j in combinations(range(n), 2):
        if dist[i][j] != dist[j][i]:
            raise AxiomViolation("symmetry", (lab[i], lab[j]))
        if dist[i][j] < 0:
            raise AxiomViolation("negativity", (lab[i], lab[j]))
    mat, _ = space.scaled
    for i in range(n):
        row_i = mat[i]
        for j in range(n):
            dij = row_i[j]
            row_j = mat[j]
            for k in range(n):
                if dij + row_j[k] < row_i[k]:
                    raise AxiomViolation(
                        "triangle",
                        (lab[i], lab[j], lab[k]),
                        f"d({lab[i]},{lab[j]}) + d({lab[j]},{lab[k]}) < d({lab[i]},{lab[k]})",
                    )


def gromov(space: PseudometricSpace, x: Point, y: Point, z: Point) -> Fraction:
    """Triple function ``(d(x,y) + d(x,z) - d(y,z)) / 2``."""
    return (space.d(x, y) + space.d(x, z) - space.d(y, z)) / 2


def underline_d(space: PseudometricSpace) -> PointFunction:
    """Per-point minimum of the Gromov product over distinct pairs of other points.

    One-point spaces get 0 and two-point spaces get half the distance.
    """
    n = len(space)
    if n == 0:
        raise EmptySpace("underline_d of an empty space")
    if n == 1:
        return {space.labels[0]: Fraction(0)}
    if n == 2:
        half = space.dist[0][1] / 2
        return {space.labels[0]: half, space.labels[1]: half}
    mat, denom = space.scaled
    out = {}
    for x in range(n):
        row = mat[x]
        others = [i for i in range(n) if i != x]
        best = None
        for a, y in enumerate(others):
            rxy = row[y]
            row_y = mat[y]
            for z in others[a + 1:]:
                val = rxy + row[z] - row_y[z]
                if best is None or val < best:
                    best = val
        out[space.labels[x]] = Fraction(best, 2 * denom)
    return out


def underline_d_short(space: PseudometricSpace) -> PointFunction:
    """Same values as :func:`underline_d`, minimising over pairs with ``y == z`` allowed."""
    n = len(space)
    if n < 3:
        raise TooSmall("underline_d_short needs at least 3 points")
    out = {}
    for x in space.labels:
        others = [p for p in space.labels if p != x]
        out[x] = min(gromov(space, x, y, z) for y in others for z in others)
    return out


def is_trim(space: PseudometricSpace) -> bool:
    if len(space) <= 1:
        return True
    return all(v == 0 for v in underline_d(space).values())


def _function_values(space, f) -> list:
    if isinstance(f, Mapping):
        try:
            return [as_rational(f[lab]) for lab in space.labels]
        except KeyError as exc:
            raise UnknownPoint(exc.args[0]) from None
    vals = [as_rational(v) for v in f]
    if len(vals) != len(space):
        raise ValueError("function length does not match the space")
    return vals


def _shifted(space: PseudometricSpace, vals) -> PseudometricSpace:
    n = len(space)
    rows = tuple(
        tuple(
            Fraction(0) if i == j else space.dist[i][j] + vals[i] + vals[j]
            for j in range(n)
        )
        for i in range(n)
    )
    return PseudometricSpace(space.labels, rows)


def drift(space: PseudometricSpace, f) -> PseudometricSpace:
    """Push every point away from the others: ``d(x,y) + f(x) + f(y)`` off the diagonal.

    ``f`` is a mapping label -> value or a sequence in point order.  Raises
    :class:`DriftTooNegative` if ``f(x) < -dbar(x)`` somewhere, since the result
    could then fail the axioms.
    """
    vals = _function_values(space, f)
    if len(space) == 0:
        return space
    dbar = underline_d(space)
    for lab, v in zip(space.labels, vals):
        if v < -dbar[lab]:
            raise DriftTooNegative(lab, v, dbar[lab])
    return _shifted(space, vals)


def d_bullet(space: PseudometricSpace) -> PseudometricSpace:
    """Drift by ``-underline_d``; the result is always trim."""
    if len(space) == 0:
        return space
    dbar = underline_d(space)
    return _shifted(space, [-dbar[lab] for lab in space.labels])


@dataclass(frozen=True, eq=False)
class QuotientMap:
    """Surjection ``source -> target``; ``assignment[i]`` is a target index."""

    source: PseudometricSpace
    target: PseudometricSpace
    assignment: tuple

    def __call__(self, point: Point) -> str:
        return self.target.labels[self.assignment[self.source.index(point)]]

    def as_dict(self) -> dict:
        return {lab: self.target.labels[t] for lab, t in zip(self.source.labels, self.assignment)}

    def then(self, other: "QuotientMap") -> "QuotientMap":
        """Composite map: first ``self``, then ``other``."""
        return QuotientMap(
            self.source, other.target, tuple(other.assignment[t] for t in self.assignment)
        )

    def is_surjective(self) -> bool:
        return set(self.assignment) == set(range(len(self.target)))

    def is_non_expansive(self) -> bool:
        src, tgt, a = self.source.dist, self.target.dist, self.assignment
        n = len(a)
        return all(tgt[a[i]][a[j]] <= src[i][j] for i in range(n) for j in range(n))

    @classmethod
    def identity(cls, space: PseudometricSpace) -> "QuotientMap":
        return cls(space, space, tuple(range(len(space))))


def metric_quotient(space: PseudometricSpace) -> QuotientMap:
    """Collapse zero-distance classes.

    Each class is named by its lowest-index member, and target points appear
    in order of first appearance.
    """
    reps: list[int] = []
    assignment = []
    for i, row in enumerate(space.dist):
        for cls, r in enumerate(reps):
            if row[r] == 0:
                assignment.append(cls)
                break
        else:
            assignment.append(len(reps))
            reps.append(i)
    target = space.restrict(reps)
    return QuotientMap(space, target, tuple(assignment))


def find_isometry(
    a: PseudometricSpace, b: PseudometricSpace, bound: int = DEFAULT_ISOMETRY_BOUND
):
    """Distance-preserving bijection ``a -> b`` as a label dict, or ``None``.

    Backtracking search; candidates for each point are restricted to points of
    ``b`` with the same sorted distance row.
    """
    n = len(a)
    if n > bound or len(b) > bound:
        raise SizeBound(f"isometry search limited to {bound} points (got {n} and {len(b)})")
    if n != len(b):
        return None
    da, db = a.dist, b.dist
    sig_a = [tuple(sorted(row)) for row in da]
    sig_b = [tuple(sorted(row)) for row in db]
    if sorted(sig_a) != sorted(sig_b):
        return None
    candidates = [[j for j in range(n) if sig_b[j] == sig_a[i]] for i in range(n)]
    order = sorted(range(n), key=lambda i: len(candidates[i]))
    image = [-1] * n
    used = [False] * n

    def extend(k):
        if k == n:
            return True
        i = order[k]
        for j in candidates[i]:
            if used[j]:
                continue
            if all(da[i][p] == db[j][image[p]] for p in order[:k]):
                image[i], used[j] = j, True
                if extend(k + 1):
                    return True
                image[i], used[j] = -1, False
        return False

    if not extend(0):
        return None
    return {a.labels[i]: b.labels[image[i]] for i in range(n)}


def zero_space(labels: Sequence) -> PseudometricSpace:
    n = len(labels)
    return PseudometricSpace(tuple(labels), tuple((Fraction(0),) * n for _ in range(n)))
