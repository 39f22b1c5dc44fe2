"""Exception hierarchy for approxem."""


class ApproxEMError(Exception):
    """Base class for every error raised by the library."""


class NoClosedFormEStep(ApproxEMError):
    """The model has no exact posterior expectation of its sufficient statistic."""


class DegenerateStatistics(ApproxEMError):
    """Expected statistics fall outside the domain of the M-step.

    Raised e.g. when a mixture component loses all its mass or its
    covariance collapses below the eigenvalue floor. ``trace`` holds the
    partial RunTrace when the error escapes from a full EM run.
    """

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace


class NonFiniteWeight(ApproxEMError):
    """An E-step produced NaN or infinite posterior weights."""


class AllZeroMass(ApproxEMError):
    """Every grid value of the complete likelihood is zero."""


class InitOutsideK0(ApproxEMError):
    """The initial parameter does not belong to the first compact."""


class SingularCovariance(ApproxEMError):
    """A covariance matrix is not numerically positive definite."""


class UnknownIntegrand(ApproxEMError, KeyError):
    pass


class UnknownFamily(ApproxEMError, KeyError):
    pass


class TooFewPoints(ApproxEMError, ValueError):
    pass


class DimensionMismatch(ApproxEMError, ValueError):
    pass


class InvalidConfig(ApproxEMError, ValueError):
    pass


class VariantUnsupported(ApproxEMError):
    """The requested E-step variant cannot be applied to this model."""
