"""Exception types shared across the package."""


class DegenerateDensityError(Exception):
    """Quadrature density fell below the floor; mean velocity and
    temperature are undefined for a (near-)empty distribution."""

    def __init__(self, density, floor):
        super().__init__(
            f"density {density:.3e} below floor {floor:.3e}; moments undefined")
        self.density = density
        self.floor = floor


class NotSpdError(Exception):
    """Symmetric matrix failed Cholesky factorization (not positive definite)."""

    def __init__(self, pivot, value, matrix=None):
        super().__init__(
            f"matrix not positive definite: pivot {pivot} is {value:.6e}"
            + ("" if matrix is None else f"\n{matrix}"))
        self.pivot = pivot
        self.value = value
        self.matrix = matrix


class NoConvergenceError(Exception):
    """Discrete moment-matching Newton iteration failed to converge.

    Usually means the velocity grid is too coarse for the requested
    parameters or the distribution's support is clipped by the domain.
    """


class InsufficientWindowError(Exception):
    """Decay series has too few samples inside the fit window."""


class SingularPrefactorError(Exception):
    """An expansion prefactor denominator vanished for these parameters."""


class CflError(Exception):
    """Advection step violates the CFL bound."""


class ConfigError(Exception):
    """Base class for configuration problems."""


class MissingKeyError(ConfigError):
    def __init__(self, key):
        super().__init__(f"missing required config key: {key}")
        self.key = key


class UnknownVariantError(ConfigError):
    def __init__(self, name):
        super().__init__(f"unknown model variant: {name!r}")
        self.name = name


class ValidationFailureError(ConfigError):
    """Parameter bundle violates one or more admissibility bounds."""

    def __init__(self, violations):
        super().__init__("; ".join(violations))
        self.violations = list(violations)
