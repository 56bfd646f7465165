"""Exception hierarchy shared by every module."""


class SingminError(Exception):
    """Base class for all library errors."""


class DomainError(SingminError, ValueError):
    """A point lies outside the open validity domain of a profile or surface."""


class UnsupportedOrder(SingminError):
    """A profile backend cannot supply the requested derivative order."""


class DegenerateMetric(SingminError, ArithmeticError):
    """The induced metric is singular or non-finite at a point."""


class DegenerateCurve(SingminError, ArithmeticError):
    """A planar curve has zero speed at a point."""


class UnsupportedPair(SingminError):
    """No closed-form mean curvature exists for a (surface type, connection) pair."""


class UnsupportedConnection(SingminError):
    """The requested operation is only defined for the Levi-Civita connection."""


class HalfspaceViolation(SingminError, ValueError):
    """A point left the open halfspace <p, u> > 0."""


class BadParam(SingminError, ValueError):
    """A parameter violates the constraints of its solution family."""


class ConstraintError(BadParam):
    """Parameter constraint failure detected while validating a spec."""


class StepFailure(SingminError, RuntimeError):
    """The ODE integrator could not continue (step underflow or blow-up)."""

    def __init__(self, message, x=None, step=None):
        super().__init__(message)
        self.x = x
        self.step = step


class ParseError(SingminError, ValueError):
    """A spec file is malformed."""

    def __init__(self, message, line=None, field=None):
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field '{field}'")
        prefix = f"{', '.join(where)}: " if where else ""
        super().__init__(prefix + message)
        self.line = line
        self.field = field


class FlatSolution(UserWarning):
    """An autonomous-ODE trajectory came out with vanishing second derivative."""
