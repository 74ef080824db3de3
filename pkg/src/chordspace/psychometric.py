"""Cumulative-Gaussian response curves and Gaussian smoothing of fields.

The discrimination curve for pitch comparison is modeled as a Heaviside step
convolved with a Gaussian, i.e. a cumulative Gaussian.  Its median is the
point of subjective equality (PSE); the just-noticeable difference (JND) is
half the interquartile range, which ties the two width conventions together:
``sigma = jnd / 0.674490``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .field import ScalarField

#: Upper-quartile z-score of the standard normal, at the precision used
#: throughout (making jnd == THIRD_QUARTILE_Z * sigma an exact identity here).
THIRD_QUARTILE_Z = 0.674490


def jnd_from_quartiles(c25: float, c75: float) -> float:
    """Half the interquartile range of a discrimination curve, in cents."""
    if not c75 > c25:
        raise ValueError(f"quartiles must increase, got c25={c25}, c75={c75}")
    return (c75 - c25) / 2.0


def sigma_from_jnd(jnd_cents: float) -> float:
    """Standard deviation of the cumulative-Gaussian curve with this JND."""
    if not (jnd_cents > 0 and math.isfinite(jnd_cents)):
        raise ValueError(f"jnd must be positive, got {jnd_cents!r}")
    return jnd_cents / THIRD_QUARTILE_Z


@dataclass(frozen=True)
class PsychometricCurve:
    """Cumulative Gaussian with median ``pse_cents`` and width ``sigma_cents``."""

    pse_cents: float
    sigma_cents: float

    def __post_init__(self):
        if not (self.sigma_cents > 0 and math.isfinite(self.sigma_cents)):
            raise ValueError(f"sigma must be positive, got {self.sigma_cents!r}")

    @property
    def jnd_cents(self) -> float:
        return THIRD_QUARTILE_Z * self.sigma_cents


def curve_value(curve: PsychometricCurve, c: float) -> float:
    """Response probability at comparison pitch ``c`` (cents)."""
    z = (c - curve.pse_cents) / curve.sigma_cents
    return 0.5 * (1.0 + math.erf(z / math.sqrt(2.0)))


def expected_pitch(curve: PsychometricCurve) -> float:
    """Mean perceived pitch, by quadrature of c * density(c); equals the PSE."""
    s = curve.sigma_cents
    xs = np.linspace(curve.pse_cents - 10.0 * s, curve.pse_cents + 10.0 * s, 4001)
    density = np.exp(-0.5 * ((xs - curve.pse_cents) / s) ** 2) / (
        s * math.sqrt(2.0 * math.pi)
    )
    trapezoid = getattr(np, "trapezoid", None) or np.trapz
    return float(trapezoid(xs * density, xs))


def gaussian_product_sigma(s1: float, s2: float) -> float:
    """Width of the (renormalized) product of two Gaussians; below min(s1, s2)."""
    if not (s1 > 0 and s2 > 0):
        raise ValueError("standard deviations must be positive")
    return s1 * s2 / math.hypot(s1, s2)


def _kernel(sigma_cents: float, resolution: int) -> np.ndarray:
    radius = int(6.0 * sigma_cents // resolution)
    offsets = np.arange(-radius, radius + 1, dtype=float) * resolution
    k = np.exp(-0.5 * (offsets / sigma_cents) ** 2)
    return k / k.sum()


def gaussian_smooth(field: ScalarField, sigma_cents: float) -> ScalarField:
    """Separable Gaussian convolution of a field along every axis.

    The kernel is truncated at six standard deviations and renormalized to
    unit mass.  Boundary handling is replicate-edge padding: the chord domain
    ends at 0 and 1200 cents without wrapping, and replication avoids
    inventing mass beyond the edges.  Simplex fields are smoothed on their
    symmetric extension (mirrored across note reordering) and restricted
    back, so the diagonal sees its true surroundings.  ``sigma_cents = 0``
    returns the field unchanged.
    """
    if sigma_cents < 0:
        raise ValueError("sigma must be nonnegative")
    if sigma_cents == 0:
        return field
    kernel = _kernel(sigma_cents, field.resolution)
    radius = (len(kernel) - 1) // 2
    dense = field.dense()
    if radius > 0:
        for axis in range(field.dims):
            padded = np.pad(
                dense, [(radius, radius) if k == axis else (0, 0) for k in range(field.dims)],
                mode="edge",
            )
            dense = np.apply_along_axis(
                lambda line: np.convolve(line, kernel, mode="valid"), axis, padded
            )
    if field.simplex:
        values = [
            dense[
                tuple(
                    int(round((c - field.origins[k]) / field.resolution))
                    for k, c in enumerate(coords)
                )
            ]
            for coords in field.cells
        ]
    else:
        values = dense.reshape(-1)
    return field.with_values(
        np.asarray(values, dtype=float),
        meta_updates={"sigma_cents": float(sigma_cents)},
    )
