"""Exception hierarchy.

Two families: :class:`InputError` for configurations or arguments that are
invalid before any iteration happens, and :class:`NumericFault` for conditions
that arise while evaluating a map.  The CLI maps them to exit codes 2 and 3.
"""


class SimplexDynamicsError(Exception):
    """Base class.  ``step`` is filled in by the orbit runner."""

    step: int | None = None


class InputError(SimplexDynamicsError, ValueError):
    pass


class NumericFault(SimplexDynamicsError, ArithmeticError):
    pass


class InvalidConfiguration(InputError):
    pass


class NotUnitCircumradius(InputError):
    pass


class PlanarInput(InputError):
    pass


class NonPlanarInput(InputError):
    pass


class NonConvexLabeling(InputError):
    pass


class InsufficientData(InputError):
    pass


class DegenerateRay(NumericFault):
    pass


class NonPositiveG(NumericFault):
    pass


class VanishingPower(NumericFault):
    pass


class DomainError(NumericFault):
    pass


class ConsistencyFault(NumericFault):
    pass


class UnderflowTail(NumericFault):
    pass


class RejectionExhausted(NumericFault):
    pass
