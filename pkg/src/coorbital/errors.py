"""Exception hierarchy shared across the toolkit."""


class CoorbitalError(Exception):
    """Base class for all toolkit errors."""


class DomainError(CoorbitalError, ValueError):
    """Inputs outside the mathematical domain (inconsistent C, bad modulus)."""


class CollisionError(CoorbitalError):
    """Bodies approached closer than the collision guard."""

    def __init__(self, message, state=None, time=None):
        super().__init__(message)
        self.state = state
        self.time = time


class StepFailure(CoorbitalError):
    """Integrator step size underflowed before reaching the target time."""


class SingularIntegrand(CoorbitalError, ValueError):
    """Averaged-model integral evaluated at a collision configuration."""


class NoConvergence(CoorbitalError):
    """Iterative solver exhausted its iteration budget."""

    def __init__(self, message, residual_norm=None, iterations=None):
        super().__init__(message)
        self.residual_norm = residual_norm
        self.iterations = iterations


class RankDeficiency(CoorbitalError):
    """Section Jacobian lost rank; carries the near-null direction."""

    def __init__(self, message, direction=None):
        super().__init__(message)
        self.direction = direction


class ContinuationStalled(CoorbitalError):
    """Family continuation aborted; carries the last good orbit and branch."""

    def __init__(self, message, last_orbit=None, branch=None):
        super().__init__(message)
        self.last_orbit = last_orbit
        self.branch = branch


class BracketInvalid(CoorbitalError, ValueError):
    """Bisection bracket endpoints do not straddle a transition."""


class DegenerateEquilibrium(CoorbitalError):
    """Averaged fixed point at the family junction (vanishing curvature)."""


class BranchExhausted(CoorbitalError):
    """Averaged-family continuation ran past the branch junction."""


class InterpolationError(CoorbitalError):
    """Grids of two families could not be aligned for comparison."""
