"""Exception types shared across the package.

Plain ``ValueError`` is raised for domain/validation failures (bad
parameters, arguments outside a function's domain); the classes below mark
conditions that arise *during* a numerically valid computation.
"""


class NonConvergenceError(ArithmeticError):
    """A series or quadrature exhausted its budget before reaching tolerance."""


class DegenerateSpectrumError(ArithmeticError):
    """Eigenvalues too close for a determinant-ratio evaluation."""


class NumericalConsistencyError(ArithmeticError):
    """A computed value violates a hard analytic bound (e.g. a CDF far outside [0, 1])."""
