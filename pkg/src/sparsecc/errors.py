"""Exception types shared across the package."""


class SparseCCError(Exception):
    """Base class for all sparsecc errors."""


class MalformedFile(SparseCCError):
    """Input file could not be parsed in the declared format."""


class NonFiniteEntry(SparseCCError):
    """Ingested data contains NaN or infinite values."""


class DimensionMismatch(SparseCCError):
    """Matrix dimensions disagree with each other or with declared metadata."""


class ZeroVarianceNode(SparseCCError):
    """A node's signal is constant, so centering/scaling is undefined."""


class NodeSetMismatch(SparseCCError):
    """Two graphs or datasets do not share the same node set."""


class CurveMismatch(SparseCCError):
    """Two filtration curves are not comparable (kind or node count differ)."""
