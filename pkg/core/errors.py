"""
Exception hierarchy for the spectral toolkit.

- SpectrumError: root of everything raised on purpose
- InvalidInputError: arguments outside an operation's domain
- NumericFailure: a numerical routine could not certify its result
"""

from typing import Optional, Tuple


class SpectrumError(Exception):
    """Base class for toolkit errors."""


class InvalidInputError(SpectrumError, ValueError):
    """Raised when an operation receives arguments outside its domain."""


class NumericFailure(SpectrumError, RuntimeError):
    """
    Raised when root refinement, zero counting or a consistency
    cross-check fails.

    Carries the quasi-momentum index k, the band/cell index n and the
    offending bracket (in z = sqrt(lambda)) when they are known.
    """

    def __init__(
        self,
        message: str,
        k: Optional[int] = None,
        n: Optional[int] = None,
        bracket: Optional[Tuple[float, float]] = None
    ):
        super().__init__(message)
        self.message = message
        self.k = k
        self.n = n
        self.bracket = bracket

    def context(self) -> str:
        """Short '(k=.., n=..)' description of where the failure happened."""
        parts = []
        if self.k is not None:
            parts.append(f"k={self.k}")
        if self.n is not None:
            parts.append(f"n={self.n}")
        if self.bracket is not None:
            parts.append(f"bracket=({self.bracket[0]:.12g}, {self.bracket[1]:.12g})")
        return ", ".join(parts)

    def __str__(self):
        ctx = self.context()
        return f"{self.message} ({ctx})" if ctx else self.message
