import math
import random

import numpy as np
import pytest

from chordspace.errors import UnresolvableProgressionError
from chordspace.field import make_simplex_field
from chordspace.harmonicity import PeriodicityConfig, chord_periodicity, periodicity_field
from chordspace.pitch import Chord, normalize, parse_chord, shift
from chordspace.psychometric import gaussian_smooth
from chordspace.resolve import (
    Progression,
    TransitiveConfig,
    chan_transitional_harmony,
    combined_chord,
    directional_derivative,
    relative_periodicity_to_first,
    sweep_transitive_field,
    transitive_field,
    transitive_periodicity,
)

from oracles import exhaustive_relative_to_first, exhaustive_transitive

TRITONE = parse_chord("[3,9]")
EIGHT_TARGETS = ["[2,8]", "[2,9]", "[2,10]", "[3,8]", "[3,10]", "[4,8]", "[4,9]", "[4,10]"]


def test_combined_chord_examples():
    assert combined_chord(
        Progression(parse_chord("[0,4,7,10]"), parse_chord("[0,5,9]"))
    ).notes == (0.0, 4.0, 5.0, 7.0, 9.0, 10.0)
    c = parse_chord("[0,4,7]")
    assert combined_chord(Progression(c, c)) == c
    assert combined_chord(Progression(parse_chord("[0]"), parse_chord("[12]"))).notes == (0.0, 12.0)


@pytest.mark.parametrize("chord", ["[0,7]", "[3,9]", "[0,4,7]", "[0]", "[2,5,9]"])
def test_self_progression_resolves_to_one(chord):
    c = parse_chord(chord)
    assert transitive_periodicity(Progression(c, c)) == 1
    assert relative_periodicity_to_first(Progression(c, c)) == 1
    assert chan_transitional_harmony(Progression(c, c)) == 0.0


def test_transitive_matches_exhaustive_oracle_on_tritone_targets():
    for target in EIGHT_TARGETS + ["[3.5,8.5]", "[2.5,9.5]"]:
        c2 = parse_chord(target)
        got = transitive_periodicity(Progression(TRITONE, c2))
        assert got == exhaustive_transitive(TRITONE, c2)


def test_transitive_frozen_tritone_values():
    values = {
        target: transitive_periodicity(Progression(TRITONE, parse_chord(target)))
        for target in EIGHT_TARGETS
    }
    assert values == {
        "[2,8]": 7, "[2,9]": 8, "[2,10]": 6, "[3,8]": 4,
        "[3,10]": 6, "[4,8]": 9, "[4,9]": 6, "[4,10]": 13,
    }


def test_transitive_matches_oracle_on_random_progressions():
    rng = random.Random(55)
    cfg = TransitiveConfig()
    for _ in range(15):
        lo = round(rng.uniform(0, 5), 2)
        hi = lo + round(rng.uniform(1, 6), 2)
        first = Chord((lo, hi))
        second = Chord((lo + rng.choice([-1.0, -0.5, 0.5, 1.0]), hi + rng.choice([-1.0, 0.0, 1.0])))
        assert transitive_periodicity(Progression(first, second), cfg) == exhaustive_transitive(
            first, second
        )


def test_quarter_tone_fifth_exceeds_twelve_tet_resolutions():
    # the just-positioned targets carry far higher transitive periodicity
    to_fifth = transitive_periodicity(Progression(TRITONE, parse_chord("[2.5,9.5]")))
    to_fourth = transitive_periodicity(Progression(TRITONE, parse_chord("[3.5,8.5]")))
    to_third = transitive_periodicity(Progression(TRITONE, parse_chord("[4,8]")))
    assert to_fifth > to_third
    assert to_fourth >= to_third


def test_order_sensitivity_witness():
    fwd = transitive_periodicity(Progression(TRITONE, parse_chord("[2,8]")))
    rev = transitive_periodicity(Progression(parse_chord("[2,8]"), TRITONE))
    assert fwd == 7 and rev == 13
    assert fwd != rev


def test_relative_periodicity_examples_and_oracle():
    assert relative_periodicity_to_first(
        Progression(parse_chord("[0]"), parse_chord("[0,12]"))
    ) == 1
    for target in ["[2,10]", "[4,8]", "[3,8]"]:
        c2 = parse_chord(target)
        got = relative_periodicity_to_first(Progression(TRITONE, c2))
        assert got == exhaustive_relative_to_first(TRITONE, c2)
    assert relative_periodicity_to_first(Progression(TRITONE, parse_chord("[2,10]"))) == 2


def test_infeasible_progression_raises():
    cfg = TransitiveConfig(jnd_cents=18.0, qmax=7)
    with pytest.raises(UnresolvableProgressionError):
        transitive_periodicity(Progression(parse_chord("[0,5.5]"), parse_chord("[0,1]")), cfg)


def test_chan_zero_for_perfectly_tuned_chords():
    just_fifth = Chord((0.0, 12.0 * math.log2(1.5)))
    just_major = Chord((0.0, 12.0 * math.log2(1.25), 12.0 * math.log2(1.5)))
    prog = Progression(just_fifth, just_major)
    assert chan_transitional_harmony(prog) == pytest.approx(0.0, abs=1e-12)


def test_chan_equal_tempered_value_against_direct_arithmetic():
    # recompute from the tuning witnesses with independent period arithmetic
    prog = Progression(TRITONE, parse_chord("[4,8]"))
    cfg = PeriodicityConfig()

    def spread(chord):
        rooted = shift(chord, chord.root)
        period, tuning = chord_periodicity(rooted, cfg)
        f_root = 261.626 * 2.0 ** (chord.root / 12.0)
        kts = []
        for note, ratio in zip(chord.notes, tuning.ratios):
            f = 261.626 * 2.0 ** (note / 12.0)
            kts.append(int(period * ratio) / f)
        return max(kts) - min(kts), period / f_root

    dt_p, _ = spread(prog.first)
    dt_s, t_s = spread(prog.second)
    assert chan_transitional_harmony(prog) == pytest.approx((dt_p - dt_s) / t_s, rel=1e-12)


def test_chan_small_pitch_change_sensitivity():
    # a one-cent move of the first chord's upper note crosses a tuning
    # boundary and shifts the result by far more than the pitch moved
    base = Progression(Chord((0.0, 6.005)), parse_chord("[0,12]"))
    prt = Progression(Chord((0.0, 6.015)), parse_chord("[0,12]"))
    delta = abs(chan_transitional_harmony(prt) - chan_transitional_harmony(base))
    relative_pitch_change = 2.0 ** (1.0 / 1200.0) - 1.0
    assert delta > 10.0 * relative_pitch_change


def test_chan_coincidence_tolerance_knob():
    prog = Progression(TRITONE, parse_chord("[4,8]"))
    strict = chan_transitional_harmony(prog)
    loose = chan_transitional_harmony(prog, coincidence_tol_cents=50.0)
    assert math.isfinite(strict) and math.isfinite(loose)


def test_transitive_field_pair_and_sweep_equality():
    cfg = TransitiveConfig(scope_cents=200.0)
    trans, companion = transitive_field(TRITONE, 2, cfg, resolution=100)
    sweep = sweep_transitive_field(TRITONE, 2, cfg, resolution=100)
    assert np.array_equal(trans.values, sweep.values)
    assert trans.value_at((300.0, 900.0)) == 0.0  # self-resolution cell

    # companion panel equals the one-octave periodicity of each shifted target
    pcfg = cfg.periodicity_config()
    for coords, value in zip(companion.cells, companion.values):
        c2 = Chord(tuple(x / 100.0 for x in coords))
        assert value == math.log2(chord_periodicity(shift(c2, c2.root), pcfg)[0])


def test_transitive_field_rejects_overlapping_windows():
    with pytest.raises(ValueError):
        transitive_field(parse_chord("[0,1]"), 2, TransitiveConfig(scope_cents=200.0), 50)
    with pytest.raises(ValueError):
        transitive_field(TRITONE, 3, TransitiveConfig(), 50)


def _smooth_dyad_field(resolution=1):
    return gaussian_smooth(periodicity_field(2, resolution), 6.0)


def test_directional_derivative_transposition_is_exactly_zero():
    fld = _smooth_dyad_field(2)
    assert directional_derivative(fld, (600.0,), (1.0, 1.0)) == 0.0


def test_directional_derivative_constant_field_zero():
    fld = make_simplex_field(1, 100, [4.0] * 13, "value", {"sigma_cents": 6.0, "domain": "intervals"})
    assert directional_derivative(fld, (600.0,), (1.0, -1.0)) == pytest.approx(0.0, abs=1e-12)


def test_directional_derivative_sign_stable_across_resolutions():
    d1 = directional_derivative(_smooth_dyad_field(1), (600.0,), (1.0, -1.0))
    d2 = directional_derivative(_smooth_dyad_field(2), (600.0,), (1.0, -1.0))
    assert d1 * d2 > 0


def test_directional_derivative_second_order_convergence():
    xs = np.arange(0, 1201, 1, dtype=float)
    vals = np.sin(2 * np.pi * xs / 1200.0)
    fld = make_simplex_field(1, 1, vals, "value", {"sigma_cents": 1.0, "domain": "intervals"})
    exact = (2 * np.pi / 1200.0) * math.cos(2 * np.pi * 0.5) * (-200.0)
    e_coarse = abs(directional_derivative(fld, (600.0,), (1.0, -1.0), step_cents=8.0) - exact)
    e_fine = abs(directional_derivative(fld, (600.0,), (1.0, -1.0), step_cents=4.0) - exact)
    assert math.log2(e_coarse / e_fine) >= 1.9


def test_directional_derivative_matches_one_sided_differences():
    fld = _smooth_dyad_field(1)
    h = 4.0
    central = directional_derivative(fld, (600.0,), (1.0, -1.0), step_cents=h)
    s = h / 100.0
    fwd = (fld.interpolate((600.0 - 2 * h,)) - fld.interpolate((600.0,))) / s
    assert central == pytest.approx(fwd, abs=abs(central) * 0.5 + 0.5)


def test_directional_derivative_requires_smoothed_field():
    raw = periodicity_field(2, 10)
    with pytest.raises(ValueError):
        directional_derivative(raw, (600.0,), (1.0, -1.0))


def test_directional_derivative_domain_and_dimension_checks():
    fld = _smooth_dyad_field(2)
    with pytest.raises(ValueError):
        directional_derivative(fld, (2.0,), (1.0, -1.0))  # stencil leaves the grid
    with pytest.raises(ValueError):
        directional_derivative(fld, (600.0,), (1.0, 0.0, -1.0))


def test_directional_derivative_speed_normalization():
    fld = _smooth_dyad_field(2)
    raw = directional_derivative(fld, (600.0,), (1.0, -1.0))
    unit = directional_derivative(fld, (600.0,), (1.0, -1.0), normalize_by_speed=True)
    assert unit == pytest.approx(raw / math.sqrt(2.0))


def test_transitive_config_validation():
    with pytest.raises(ValueError):
        TransitiveConfig(scope_cents=-1.0)
    with pytest.raises(ValueError):
        TransitiveConfig(jnd_cents=0.0)
