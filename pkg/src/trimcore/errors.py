"""Exception hierarchy shared by all modules."""


class TrimcoreError(Exception):
    """Base class for domain errors (CLI exit status 1)."""


class AxiomViolation(TrimcoreError, ValueError):
    """A matrix fails one of the pseudometric axioms or is malformed.

    ``kind`` is one of ``diagonal``, ``symmetry``, ``negativity``,
    ``triangle``, ``shape`` or ``value``; ``witness`` holds the offending
    labels.
    """

    def __init__(self, kind, witness=(), detail=""):
        self.kind = kind
        self.witness = tuple(witness)
        msg = f"{kind} axiom violated at ({', '.join(map(str, self.witness))})"
        if detail:
            msg += f": {detail}"
        super().__init__(msg)


class UnknownPoint(TrimcoreError, KeyError):
    def __str__(self):
        return f"unknown point {self.args[0]!r}"


class UnknownVertex(TrimcoreError, KeyError):
    def __str__(self):
        return f"unknown vertex {self.args[0]!r}"


class EmptySpace(TrimcoreError, ValueError):
    pass


class TooSmall(TrimcoreError, ValueError):
    pass


class DriftTooNegative(TrimcoreError, ValueError):
    def __init__(self, point, value, bound):
        self.point = point
        super().__init__(
            f"drift value {value} at {point!r} is below -dbar = {-bound}"
        )


class SizeBound(TrimcoreError, ValueError):
    pass


class BadDepth(TrimcoreError, ValueError):
    pass


class NoLeaves(TrimcoreError, ValueError):
    pass


class BaseMismatch(TrimcoreError, ValueError):
    pass


class InvalidTree(TrimcoreError, ValueError):
    pass


class InvalidForest(TrimcoreError, ValueError):
    pass
