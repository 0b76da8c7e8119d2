"""
Exceptions raised by the simulator.

Each exception carries a category and the exit status the command line reports for it.
"""


class SuperJCError(Exception):
    """Base class for all simulator errors."""

    category = 'error'
    exit_code = 1


class InvalidParameterError(SuperJCError, ValueError):
    """A model, drive or grid parameter is outside its allowed range."""

    category = 'parse'
    exit_code = 2


class NumericalError(SuperJCError):
    """Base class for failures of the numerical core."""

    category = 'numerical'
    exit_code = 3


class ConvergenceError(NumericalError):
    """The Jacobi eigensolver exhausted its sweep budget."""


class DimensionMismatchError(NumericalError, ValueError):
    """A vector or matrix does not match the manifold dimension."""


class StateNotInManifoldError(NumericalError, KeyError):
    """A basis state does not carry the manifold's excitation number."""

    def __str__(self):
        return Exception.__str__(self)


class NormalizationError(NumericalError, ValueError):
    """A state vector is not normalized within tolerance."""


class SingularDetuningError(NumericalError, ZeroDivisionError):
    """A closed-form expression has a vanishing detuning denominator."""


class InsufficientPhotonsError(NumericalError, ValueError):
    """An operation needs more photons in a mode than the state holds."""


class NoResonanceError(NumericalError, ValueError):
    """A resonance condition has no real solution."""


class ScanPointError(NumericalError):
    """A detuning scan failed at one grid point."""

    def __init__(self, row, col, delta1, delta2, cause):
        super().__init__(
            f"scan failed at grid point ({row}, {col}) "
            f"delta1={delta1:g}, delta2={delta2:g}: {cause}"
        )
        self.row = row
        self.col = col
        self.delta1 = delta1
        self.delta2 = delta2
        self.cause = cause


class OutputError(SuperJCError, OSError):
    """An output file could not be written."""

    category = 'io'
    exit_code = 4
