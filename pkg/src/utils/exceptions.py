class DrmBoundsException(Exception):

    def __init__(self, message, code=500):
        """Initialize the exception."""
        super().__init__(message)
        self.code = code
        self.message = message


class InputException(DrmBoundsException):
    """Invalid levels, parameters, grammar or tabulations. Default code is 400."""

    def __init__(self, message, code=400):
        super().__init__(message, code)


class DistortionException(InputException):
    """A distortion is malformed or does not support the requested operation. Default code is 400."""

    def __init__(self, message, code=400):
        super().__init__(message, code)


class BoundaryException(InputException):
    """The distortion puts weight on an essential bound the requested side cannot handle. Default code is 422."""

    def __init__(self, message, code=422):
        super().__init__(message, code)


class NotAttainableException(InputException):
    """An extremal law was requested for a bound that is approached but never attained. Default code is 409."""

    def __init__(self, message, code=409):
        super().__init__(message, code)


class OracleViolationException(DrmBoundsException):
    """A feasible candidate beat an analytic bound beyond tolerance. Default code is 500."""

    def __init__(self, message, code=500):
        super().__init__(message, code)


class QuadratureException(DrmBoundsException):
    """Adaptive quadrature missed its tolerance; ``estimate`` holds the best value found."""

    def __init__(self, message, estimate=None, code=500):
        super().__init__(message, code)
        self.estimate = estimate
