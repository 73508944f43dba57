from typing import Optional


class JackMeasuresError(Exception):
    """Base class for every error raised by the engines."""

    pass


class DomainError(JackMeasuresError, ValueError):
    """Raised when an input violates the precondition of an operation."""

    pass


class InconsistencyError(JackMeasuresError):
    """Raised when two independent computations of the same quantity disagree."""

    def __init__(self, quantity: str, first: object, second: object, tolerance: Optional[float] = None):
        """
        Args:
            quantity: A short name of the quantity that was computed twice.
            first: The value from the first route.
            second: The value from the second route.
            tolerance: The tolerance that was exceeded, if any.
        """
        message = f"Inconsistent {quantity}: {first!r} != {second!r}"
        if tolerance is not None:
            message += f" (tolerance {tolerance:g})"
        super(InconsistencyError, self).__init__(message)


class TruncationError(JackMeasuresError):
    """Raised when a cutoff is too small for the requested computation to be exact."""

    def __init__(self, name: str, value: int, required: int):
        """
        Args:
            name: The name of the cutoff, e.g. 'Jmax'.
            value: The cutoff that was supplied.
            required: The smallest cutoff for which the result is exact.
        """
        message = f"Cutoff {name}={value} is below the required reach {required}."
        super(TruncationError, self).__init__(message)


class PoleProximityError(JackMeasuresError):
    """Raised when a resolvent is evaluated too close to the spectrum."""

    def __init__(self, u: complex, eigenvalue: float):
        """
        Args:
            u: The spectral parameter.
            eigenvalue: The eigenvalue closest to ``u``.
        """
        message = f"Spectral parameter {u} lies within tolerance of the eigenvalue {eigenvalue}."
        super(PoleProximityError, self).__init__(message)


class DegenerateSpectrumError(JackMeasuresError):
    """Raised when Jack eigenvectors cannot be separated by the commuting operators available."""

    def __init__(self, degree: int, cluster_size: int):
        """
        Args:
            degree: The degree of the Fock space block.
            cluster_size: The dimension of the unresolved eigenspace.
        """
        message = f"Degree {degree} block has an unresolved eigenspace of dimension {cluster_size}."
        super(DegenerateSpectrumError, self).__init__(message)


class TailThresholdError(JackMeasuresError):
    """Raised when a measure table leaves too much mass outside its cutoff to sample from."""

    def __init__(self, tail_mass: float, threshold: float):
        """
        Args:
            tail_mass: The probability mass beyond the table cutoff.
            threshold: The largest tail mass the caller accepts.
        """
        message = f"Tail mass {tail_mass:.3e} exceeds the threshold {threshold:.3e}; increase the degree cutoff."
        super(TailThresholdError, self).__init__(message)


class SpecializationNotFoundError(JackMeasuresError):
    """Raised when a specialization file cannot be read."""

    def __init__(self, path: str):
        """
        Args:
            path: The path that was attempted.
        """
        message = f"Specialization file '{path}' does not exist or is not readable."
        super(SpecializationNotFoundError, self).__init__(message)


class VerificationError(JackMeasuresError):
    """Raised when a verification check fails."""

    pass
