"""Exception hierarchy shared by all subpackages."""


class RobinSpecError(Exception):
    """Base class for every error raised by robinspec."""


class DomainError(RobinSpecError, ValueError):
    """An argument lies outside the domain of the operation."""


class NoSignChangeError(RobinSpecError, ValueError):
    """A bracket does not enclose a sign change."""


class ConvergenceError(RobinSpecError, RuntimeError):
    """An iterative method hit its iteration cap or tolerance floor."""


class BracketScanError(RobinSpecError, RuntimeError):
    """A root scan ended before the requested root index was reached."""


class PoleError(RobinSpecError, ArithmeticError):
    """A quotient hit a zero denominator inside its domain."""


class GeometryError(RobinSpecError, ValueError):
    """Invalid polygon: self-intersecting, degenerate or wrongly oriented."""


class MeshError(RobinSpecError, RuntimeError):
    """Mesh construction or mesh file parsing failed."""


class RefinementCapError(MeshError):
    """Uniform refinement would exceed the node budget."""


class SolverError(RobinSpecError, RuntimeError):
    """Eigensolver failure or an inconsistent assembled system."""


class ConvexityError(RobinSpecError, ValueError):
    """The operation requires a convex domain."""


class CrossingError(RobinSpecError, RuntimeError):
    """More than one significant crossing of two rearranged profiles."""

    def __init__(self, message, comparison=None):
        super().__init__(message)
        self.comparison = comparison


class ConfigError(RobinSpecError, ValueError):
    """Invalid run configuration."""
