"""Exception types shared across the package."""


class TermCapExceeded(RuntimeError):
    """A sparse polynomial operation would produce more terms than the cap allows."""

    def __init__(self, message, cap=None):
        super().__init__(message)
        self.cap = cap


class EmptyPolynomialError(ValueError):
    """An operation that is undefined for the zero polynomial was asked to run on one."""


class IndexOverflowError(OverflowError):
    """A reconstructed Dirichlet index exceeds the portable 64-bit range."""
