"""Exception and warning types shared across the simulator."""


class PhotonLoopError(Exception):
    """Base class for all simulator errors."""


class ShapeMismatch(PhotonLoopError):
    """Operands have non-conformable shapes."""


class SingularMatrix(PhotonLoopError):
    """Direct elimination hit a pivot below the singularity threshold."""


class ZeroReference(PhotonLoopError):
    """Accuracy requested against a zero-norm reference."""


class VoltageOutOfRange(PhotonLoopError):
    """Drive voltage outside the calibrated sweep range."""


class UnreachableWeight(PhotonLoopError):
    """No grid voltage realizes the requested weight within tolerance."""


class NotEncodable(PhotonLoopError):
    """Matrix has entries outside the passive transmission range [-1, 1].

    ``violations`` lists offending ``(row, col, value)`` triples.
    """

    def __init__(self, violations):
        self.violations = list(violations)
        worst = max(self.violations, key=lambda v: abs(v[2]))
        super().__init__(
            f"{len(self.violations)} entries outside [-1, 1], "
            f"worst at ({worst[0]}, {worst[1]}) = {worst[2]:.6g}"
        )


class NoConvergentOmega(PhotonLoopError):
    """No relaxation factor makes the loop both convergent and encodable."""


class NotConverged(PhotonLoopError):
    """Circulation budget exhausted before the stop threshold was met."""

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace


class Diverged(PhotonLoopError):
    """Circulating signal grew past the divergence cap."""

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace


class DimensionNotTileable(PhotonLoopError):
    """Matrix dimension is not a multiple of the tile size."""


class SingularLeadingBlock(PhotonLoopError):
    """A leading block in the recursive inversion could not be inverted."""

    def __init__(self, level, message=""):
        self.level = level
        super().__init__(message or f"singular leading block at recursion level {level}")


class VerificationFailed(PhotonLoopError):
    """Residual check of an assembled inverse exceeded the threshold."""

    def __init__(self, residual, threshold):
        self.residual = residual
        self.threshold = threshold
        super().__init__(f"residual {residual:.3e} exceeds threshold {threshold:.3e}")


class ConfigInvalid(PhotonLoopError):
    """Experiment configuration failed validation."""


class SignAmbiguityWarning(UserWarning):
    """Direct detection dropped the sign of a significantly negative amplitude."""
