"""Exception hierarchy shared by the library and the command line."""


class DualCharError(Exception):
    """Base class for all errors raised by dualchar."""


class InvalidDeformationError(DualCharError, ValueError):
    """Deformation gradient with a non-positive determinant."""


class SingularDeformationError(InvalidDeformationError):
    """Deformation gradient whose volume ratio is numerically zero."""


class NumericalError(DualCharError, ArithmeticError):
    """A numerical routine failed (eigensolve, quadrature, non-finite output)."""


class IncompressibleLimitError(DualCharError, ValueError):
    """Poisson ratio at or beyond the incompressible limit of 0.5."""


class ParameterError(DualCharError, ValueError):
    """Material or region parameters outside their admissible range."""


class CrushError(DualCharError, ValueError):
    """Indentation depth reaching the effective tissue height."""


class ExtrapolationError(DualCharError, ValueError):
    """Resampling requested outside the abscissa hull of a curve."""


class DegenerateNormalizationError(DualCharError, ValueError):
    """Experimental curve with a zero mean cannot normalise an NMSE."""


class CurveError(DualCharError, ValueError):
    """Curve with too few points or non-monotone abscissae."""


class ConfigError(DualCharError):
    """Invalid run configuration. Carries every problem found."""

    def __init__(self, problems):
        if isinstance(problems, str):
            problems = [problems]
        self.problems = list(problems)
        super().__init__("; ".join(self.problems))


class DataError(DualCharError):
    """Malformed experimental data file."""
