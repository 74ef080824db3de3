"""Exception types shared across the library."""

from __future__ import annotations


class InfeasibleError(ValueError):
    """No admissible rational tuning exists within the configured bounds."""


class UnresolvableIntervalError(InfeasibleError):
    """No fraction with a small enough denominator approximates the interval."""

    def __init__(self, cents: float, jnd_cents: float, qmax: int,
                 window: tuple[float, float]):
        self.cents = cents
        self.jnd_cents = jnd_cents
        self.qmax = qmax
        self.window = window
        super().__init__(
            f"no fraction with denominator <= {qmax} approximates {cents:g} cents "
            f"within {jnd_cents:g} cents (ratio window [{window[0]:.9g}, {window[1]:.9g}])"
        )


class UnresolvableChordError(InfeasibleError):
    """No joint rational tuning of the chord satisfies the detuning bounds."""


class UnresolvableProgressionError(InfeasibleError):
    """No joint rational tuning of a chord progression satisfies the bounds."""
