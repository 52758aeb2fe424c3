"""Exception hierarchy shared by all modules."""


class ShellError(Exception):
    """Base class for errors raised by shellframes."""


class InvalidParameterError(ShellError, ValueError):
    pass


class DomainError(ShellError, ValueError):
    """A point or flowed point lies outside the surface domain."""


class InvalidSurfaceError(ShellError, ValueError):
    """Lamé/curvature data violate the Gauss-Codazzi integrability conditions."""


class DegenerateFrameError(ShellError, ValueError):
    """|z * kappa| >= 1: the shell is thicker than a radius of curvature."""


class DegreeError(ShellError, ValueError):
    pass


class AliasingError(ShellError, ValueError):
    """Wavenumber not commensurate with the periodic grid."""


class DivergenceError(ShellError, FloatingPointError):
    """Time integration produced non-finite values."""

    def __init__(self, message, step=None, index=None):
        super().__init__(message)
        self.step = step
        self.index = index


class FieldFileError(ShellError, ValueError):
    pass
