"""Trimming, iterated trimming and the trim core."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations, permutations
from typing import Optional, Sequence

import numpy as np

from .errors import EmptySpace, TooSmall
from .metric import (
    PointFunction,
    PseudometricSpace,
    QuotientMap,
    _shifted,
    as_rational,
    check_axioms,
    metric_quotient,
    underline_d,
)


@dataclass(frozen=True, eq=False)
class QuotientStep:
    """One trimming step ``source -> t(source)``."""

    source: PseudometricSpace
    dbar: PointFunction
    bullet: PseudometricSpace
    projection: QuotientMap

    @property
    def target(self) -> PseudometricSpace:
        return self.projection.target


@dataclass(frozen=True, eq=False)
class TrimChain:
    """``X = t^0(X) -> t(X) -> ... -> c(X)`` with every intermediate stage kept."""

    steps: tuple
    height: int
    core: PseudometricSpace
    q: QuotientMap

    @property
    def spaces(self) -> list:
        """All stages ``X_0, ..., X_height``."""
        if not self.steps:
            return [self.core]
        return [s.source for s in self.steps] + [self.core]

    @property
    def source(self) -> PseudometricSpace:
        return self.q.source

    def stage(self, i: int) -> PseudometricSpace:
        """``t^i(X)``; stages past the height repeat the core."""
        spaces = self.spaces
        return spaces[min(i, len(spaces) - 1)]


def trim_step(space: PseudometricSpace, dbar: Optional[PointFunction] = None) -> QuotientStep:
    if len(space) == 0:
        raise EmptySpace("cannot trim an empty space")
    if dbar is None:
        dbar = underline_d(space)
    bullet = _shifted(space, [-dbar[lab] for lab in space.labels])
    proj = metric_quotient(bullet)
    # projection maps from the original space, not from its d-bullet copy
    proj = QuotientMap(space, proj.target, proj.assignment)
    return QuotientStep(space, dbar, bullet, proj)


def trim_core(space: PseudometricSpace) -> TrimChain:
    """Iterate :func:`trim_step` until the stage is a trim metric space."""
    steps = []
    q = QuotientMap.identity(space)
    current = space
    while True:
        dbar = underline_d(current) if len(current) > 1 else None
        if current.is_metric() and (dbar is None or not any(dbar.values())):
            break
        if len(steps) > len(space):
            raise RuntimeError("trimming failed to terminate; input is not a pseudometric")
        step = trim_step(current, dbar)
        steps.append(step)
        q = q.then(step.projection)
        current = step.target
    return TrimChain(tuple(steps), len(steps), current, q)


def related_oracle(space: PseudometricSpace, x, y) -> bool:
    """Decide ``d_bullet(x, y) == 0`` from the four-point inequality over all
    distinct pairs ``x', x''`` avoiding ``x`` and ``y', y''`` avoiding ``y``.

    Brute force over every quadruple; kept separate from the d-bullet path so
    each can check the other.
    """
    n = len(space)
    if n < 3:
        raise TooSmall("related_oracle needs at least 3 points")
    i, j = space.index(x), space.index(y)
    if i == j:
        raise ValueError("related_oracle needs two distinct points")
    mat, _ = space.scaled
    dtype = np.int64 if max(max(r) for r in mat) < 2**60 // 8 else object
    m = np.array(mat, dtype=dtype)

    def slack(p):
        others = [k for k in range(n) if k != p]
        return np.array(
            [m[p, a] + m[p, b] - m[a, b] for a, b in combinations(others, 2)], dtype=dtype
        )

    return bool(np.all(slack(i)[:, None] + slack(j)[None, :] >= 2 * m[i, j]))


def admissible_shift(h: Sequence[Sequence]) -> Fraction:
    """Smallest ``r >= 0`` making ``h + r`` (off the diagonal) a pseudometric."""
    n = len(h)
    r = Fraction(0)
    for a in range(n):
        for b in range(n):
            if a != b:
                r = max(r, -h[a][b])
    for a, b, c in permutations(range(n), 3):
        r = max(r, h[a][b] - h[a][c] - h[c][b])
    return r


def shifted_symmetric(labels: Sequence, h: Sequence[Sequence], r=None) -> PseudometricSpace:
    """The pseudometric ``h_r``; ``r`` defaults to :func:`admissible_shift`."""
    n = len(labels)
    hq = [[as_rational(v) for v in row] for row in h]
    if len(hq) != n or any(len(row) != n for row in hq):
        raise ValueError("h must be a square matrix matching the labels")
    for a, b in combinations(range(n), 2):
        if hq[a][b] != hq[b][a]:
            raise ValueError(f"h is not symmetric at ({labels[a]}, {labels[b]})")
    r = admissible_shift(hq) if r is None else as_rational(r)
    rows = [[Fraction(0) if a == b else hq[a][b] + r for b in range(n)] for a in range(n)]
    space = PseudometricSpace(tuple(labels), rows)
    check_axioms(space)
    return space


def symmetric_trimming(labels: Sequence, h: Sequence[Sequence], r=None) -> PseudometricSpace:
    """``t(X, h)``: the trimming of ``h_r``, which does not depend on ``r``."""
    space = shifted_symmetric(labels, h, r)
    if len(space) == 0:
        return space
    return trim_step(space).target


def trim_symmetric(
    labels: Sequence, h: Sequence[Sequence], r: Optional[object] = None
) -> TrimChain:
    """Trim chain of ``(X, h_r)``; its core is the trim core of the pair ``(X, h)``."""
    return trim_core(shifted_symmetric(labels, h, r))
