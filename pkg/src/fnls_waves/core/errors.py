"""Exceptions raised by the fnls-waves library."""

from typing import Tuple


class FnlsError(Exception):
    """Base class for computation failures."""


class DegenerateFactorError(FnlsError):
    """The stabilizing factor denominator (f³, f) vanished: the iterate collapsed to zero."""


class NonFiniteIterateError(FnlsError):
    """An iterate contained NaN or Inf."""

    def __init__(self, iteration: int):
        super().__init__(f"Non-finite values in iterate {iteration}")
        self.iteration = iteration


class BracketError(FnlsError):
    """No sign change of the root function inside the scanned bracket."""

    def __init__(self, message: str, bracket: Tuple[float, float]):
        super().__init__(f"{message} (bracket [{bracket[0]:.6g}, {bracket[1]:.6g}])")
        self.bracket = bracket


class SweepError(FnlsError):
    """A frequency sweep produced too few converged points."""
