import math
import random

import numpy as np
import pytest

from chordspace.field import local_minima
from chordspace.pitch import normalize
from chordspace.roughness import (
    PURE_SINE,
    RoughnessParams,
    Spectrum,
    chord_roughness,
    harmonic_spectrum,
    pair_roughness,
    roughness_field,
)


def test_identical_partials_do_not_beat():
    assert pair_roughness(440.0, 440.0) == 0.0


def test_wide_separation_kills_interference():
    peak = pair_roughness(440.0, 465.0)
    assert pair_roughness(440.0, 880.0) < 0.01 * peak


def test_near_peak_location():
    # the pairwise curve for a 400 Hz lower partial peaks near a 25 Hz gap
    gaps = np.linspace(0.2, 150.0, 3000)
    vals = [pair_roughness(400.0, 400.0 + g) for g in gaps]
    best = gaps[int(np.argmax(vals))]
    assert 15.0 < best < 40.0
    assert pair_roughness(400.0, 420.0) > 0.95 * max(vals)


def test_pair_symmetry_and_limits():
    rng = random.Random(8)
    for _ in range(200):
        f1, f2 = rng.uniform(50, 2000), rng.uniform(50, 2000)
        a1, a2 = rng.uniform(0.1, 2), rng.uniform(0.1, 2)
        assert pair_roughness(f1, f2, a1, a2) == pair_roughness(f2, f1, a2, a1)
    assert pair_roughness(440.0, 440.0 + 1e-7) < 1e-6
    assert pair_roughness(440.0, 440.0 * 64) < 1e-6


def test_pair_rejects_nonpositive_frequency():
    with pytest.raises(ValueError):
        pair_roughness(0.0, 440.0)


def test_single_sine_note_has_zero_roughness():
    assert chord_roughness(normalize([0]), PURE_SINE) == 0.0


def test_quadratic_amplitude_scaling():
    spec = harmonic_spectrum()
    lam = 1.7
    scaled = Spectrum(tuple((r, lam * a) for r, a in spec.partials))
    c = normalize([0, 4, 7])
    assert chord_roughness(c, scaled) == pytest.approx(
        lam**2 * chord_roughness(c, spec), rel=1e-9
    )


def test_permutation_invariance_through_normalization():
    spec = harmonic_spectrum()
    assert chord_roughness(normalize([7, 0, 4]), spec) == chord_roughness(
        normalize([0, 4, 7]), spec
    )


@pytest.mark.parametrize("ratio", [2.0, 1.5])
def test_simple_ratio_notches(ratio):
    spec = harmonic_spectrum()
    interval = 12.0 * math.log2(ratio)
    mid = chord_roughness(normalize([0.0, interval]), spec)
    for sign in (-1, 1):
        neighbor = interval + sign * 12.0 * math.log2(1.02)
        assert mid < chord_roughness(normalize([0.0, neighbor]), spec)


def test_dyad_curve_minima_near_simple_ratios():
    fld = roughness_field(2, 1)
    minima = [c[0] for c, _ in local_minima(fld)]
    for num, den in ((6, 5), (5, 4), (4, 3), (3, 2), (2, 1)):
        target = num / den
        assert any(abs(2 ** (m / 1200.0) - target) <= 0.01 * target for m in minima)


def test_pure_sine_curve_has_no_interior_minima():
    fld = roughness_field(2, 1, PURE_SINE)
    vals = fld.values
    peak = int(np.argmax(vals))
    tail = vals[peak:]
    assert all(b <= a + 1e-12 for a, b in zip(tail, tail[1:]))
    assert fld.value_at((0.0,)) == 0.0


def test_peak_interval_narrows_with_register():
    # critical bandwidth grows slower than frequency, so the peak of the
    # pairwise curve sits at ever smaller musical intervals as register rises
    def peak_cents(fmin):
        cents = np.linspace(1.0, 400.0, 1600)
        vals = [pair_roughness(fmin, fmin * 2 ** (c / 1200.0)) for c in cents]
        return cents[int(np.argmax(vals))]

    peaks = [peak_cents(f) for f in (130.0, 261.0, 523.0, 1046.0)]
    assert all(b < a for a, b in zip(peaks, peaks[1:]))


def test_roughness_field_triad_and_validation():
    fld = roughness_field(3, 300)
    assert fld.dims == 2
    with pytest.raises(ValueError):
        roughness_field(4, 100)


def test_spectrum_validation():
    with pytest.raises(ValueError):
        Spectrum(((1.0, 1.0), (1.0, 0.5)))
    with pytest.raises(ValueError):
        Spectrum(((0.5, 1.0),))
    with pytest.raises(ValueError):
        Spectrum(((1.0, 0.0),))
    with pytest.raises(ValueError):
        Spectrum(())


def test_params_validation():
    with pytest.raises(ValueError):
        RoughnessParams(slow_decay=6.0, fast_decay=5.75)
    with pytest.raises(ValueError):
        RoughnessParams(scale=0.0)
