"""The exceptions raised by mlcech.

Mathematical failures derive from `MathError` (an `ArithmeticError`), input that
does not match a schema raises `SchemaError` (a `ValueError`). The CLI maps the
two families to different exit codes.
"""


class MathError(ArithmeticError):
    """Base class of all mathematical failures."""


class ZeroFunctionError(MathError):
    """An order or expansion of the zero function was requested."""


class WindowOverflowError(MathError):
    """Laurent window arithmetic produced a coefficient outside the window."""


class RootsInsufficientError(MathError):
    """The supplied roots do not split a polynomial over the Gaussian rationals."""


class InconsistentDatumError(MathError):
    """Restrictions do not compose, a cocycle condition fails, or d∘d != 0."""


class StabilizationError(MathError):
    """Truncated dimensions changed between window M and M + step."""


class GeometryError(MathError):
    """A point, pole or path violates the geometry of the domain or lattice."""


class BudgetUnreachableError(MathError):
    """An approximation could not meet its error budget within the hard caps."""


class UnsolvableError(MathError):
    """A Mittag-Leffler distribution fails its solvability criterion."""


class SchemaError(ValueError):
    """An input document does not match the schema of its subcommand."""
