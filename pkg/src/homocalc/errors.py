"""Error types shared across the package.

Every error carries the name of the operation that raised it, so CLI output and
check reports can point at the failing step without parsing the message.
"""


class CalculusError(Exception):
    def __init__(self, operation, message):
        self.operation = operation
        self.message = message
        super().__init__(f"{operation}: {message}")


class DimensionMismatch(CalculusError):
    """Operands live in different coordinate dimensions."""


class LatticeMismatch(CalculusError):
    """Operands belong to different lattices or incompatible shapes."""


class NoConvergence(CalculusError):
    """An iterative solve stopped above its optimality tolerance."""


class EmptyIntersection(CalculusError):
    """Alternating projections stalled above tolerance; sets likely disjoint."""


class EmptyFamily(CalculusError):
    """A family evaluation was asked for with no members on the chosen side."""


class EnvelopeViolation(CalculusError):
    """Computed norm envelopes fail to bracket the function on the sphere grid."""


class NotOrdered(CalculusError):
    """A saddle build found a superlinear member above a sublinear member."""


class SaddleGap(CalculusError):
    """The two saddle evaluation orders disagree beyond tolerance."""


class UnknownBuiltin(CalculusError):
    """Requested builtin name is not registered."""


class IndexOutOfRange(CalculusError):
    """A coordinate or piece index is outside the element's range."""


class SchemaError(CalculusError):
    """A JSON document does not match the expected shape.

    Carries the source (file name or '<inline>') and the path within the
    document, so messages read like: family.maps[2].sublinear.subdiff: ...
    """

    def __init__(self, source, path, reason):
        self.source = source
        self.path = path
        super().__init__("load", f"{source}: {path}: {reason}")
