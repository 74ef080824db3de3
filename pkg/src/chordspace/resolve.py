"""Directional (horizontal) quantities for ordered chord progressions.

The central quantity is the transitive periodicity of ``c1 -> c2``: the
number of periods of the second chord needed to line up with a period
multiple of the first, computed from a joint rational tuning of both chords
over the second chord's root.  Order matters everywhere in this module;
progressions are not symmetric pairs.

A joint tuning assigns one reduced fraction per note of the concatenated
(second, first) coordinate tuple, with the second chord's root pinned to an
exact 1/1.  All per-note detunings stay within the JND and all pairwise
detuning differences across both chords stay within the JND as well.  The
second chord's sub-tuning is additionally required to realize that chord's
own minimal periodicity: the ratio lcm(all)/lcm(second) is only meaningful
relative to the second chord as actually heard, and without this consistency
requirement the minimization could drive the ratio to 1 everywhere by
inflating the second chord's denominators.

Tangent vectors are plain sequences of per-note rates (semitones per unit
time) aligned with a chord's sorted notes.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product

import numpy as np

from .errors import UnresolvableProgressionError
from .field import ScalarField, make_box_field
from .harmonicity import (
    PeriodicityConfig,
    chord_periodicity,
    ratio_candidates,
)
from .pitch import CENTS_PER_SEMITONE, Chord, DEFAULT_F0_HZ, freq_from_pitch, normalize, shift

__all__ = [
    "Progression",
    "TransitiveConfig",
    "combined_chord",
    "transitive_periodicity",
    "relative_periodicity_to_first",
    "chan_transitional_harmony",
    "transitive_field",
    "sweep_transitive_field",
    "directional_derivative",
]


@dataclass(frozen=True)
class Progression:
    """Ordered pair of chords: ``first`` precedes ``second``."""

    first: Chord
    second: Chord


@dataclass(frozen=True)
class TransitiveConfig:
    jnd_cents: float = 18.0
    qmax: int = 100
    scope_cents: float = 200.0

    def __post_init__(self):
        if self.scope_cents < 0:
            raise ValueError("scope must be nonnegative")
        self.periodicity_config()  # validates jnd/qmax

    def periodicity_config(self) -> PeriodicityConfig:
        return PeriodicityConfig(jnd_cents=self.jnd_cents, qmax=self.qmax)


def combined_chord(prog: Progression) -> Chord:
    """Set-theoretic union of the two chords, normalized."""
    return normalize(prog.first.notes + prog.second.notes)


# -- joint tuning search ------------------------------------------------------


def _window_ok(ds: list[float], jnd: float) -> bool:
    return max(ds) - min(ds) <= jnd


def _all_tunings_with_lcm(
    cents_list: list[float],
    cfg: PeriodicityConfig,
    target: int,
    seed_ds: tuple[float, ...],
) -> list[tuple[tuple[Fraction, ...], tuple[float, ...]]]:
    """Every joint tuning of the free coordinates with lcm exactly ``target``."""
    lists = []
    for c in cents_list:
        filtered = [
            (f, d)
            for f, d in ratio_candidates(c, cfg, clamp=False)
            if target % f.denominator == 0
        ]
        if not filtered:
            return []
        lists.append(filtered)
    out = []
    base_lo = min(seed_ds) if seed_ds else math.inf
    base_hi = max(seed_ds) if seed_ds else -math.inf

    def walk(i, cur, lo, hi, chosen):
        if i == len(lists):
            if cur == target:
                out.append((tuple(f for f, _ in chosen), tuple(d for _, d in chosen)))
            return
        for f, d in lists[i]:
            nlo, nhi = min(lo, d), max(hi, d)
            if nhi - nlo > cfg.jnd_cents:
                continue
            chosen.append((f, d))
            walk(i + 1, math.lcm(cur, f.denominator), nlo, nhi, chosen)
            chosen.pop()

    walk(0, 1, base_lo, base_hi, [])
    return out


def _min_extension_lcm(
    cents_list: list[float],
    cfg: PeriodicityConfig,
    base_lcm: int,
    seed_ds: tuple[float, ...],
    bound: int | None,
) -> int | None:
    """Minimal lcm(base, chosen denominators) over feasible extensions."""
    lists = [ratio_candidates(c, cfg, clamp=False) for c in cents_list]
    if any(not lst for lst in lists):
        return None
    best = [bound]

    def walk(i, cur, lo, hi):
        if best[0] is not None and cur >= best[0]:
            return
        if i == len(lists):
            best[0] = cur
            return
        for f, d in lists[i]:
            nxt = math.lcm(cur, f.denominator)
            if best[0] is not None and nxt >= best[0]:
                continue
            nlo, nhi = min(lo, d), max(hi, d)
            if nhi - nlo > cfg.jnd_cents:
                continue
            walk(i + 1, nxt, nlo, nhi)

    walk(0, base_lcm, min(seed_ds), max(seed_ds))
    if best[0] is None or (bound is not None and best[0] == bound):
        return None  # nothing found, or nothing strictly better than the bound
    return best[0]


def _minimal_sub_lcm(
    cents_list: list[float], cfg: PeriodicityConfig, seed_ds: tuple[float, ...]
) -> int | None:
    """Minimal lcm of a sub-chord's own tuning (used to pin one side)."""
    lists = [ratio_candidates(c, cfg, clamp=False) for c in cents_list]
    if any(not lst for lst in lists):
        return None
    best = [None]

    def walk(i, cur, lo, hi):
        if best[0] is not None and cur >= best[0]:
            return
        if i == len(lists):
            best[0] = cur
            return
        for f, d in lists[i]:
            nxt = math.lcm(cur, f.denominator)
            if best[0] is not None and nxt >= best[0]:
                continue
            nlo, nhi = min(lo, d), max(hi, d)
            if nhi - nlo > cfg.jnd_cents:
                continue
            walk(i + 1, nxt, nlo, nhi)

    lo = min(seed_ds) if seed_ds else math.inf
    hi = max(seed_ds) if seed_ds else -math.inf
    walk(0, 1, lo, hi)
    return best[0]


def _shifted(prog: Progression) -> tuple[Chord, Chord]:
    s = prog.second.root
    return shift(prog.first, s), shift(prog.second, s)


def transitive_periodicity(prog: Progression, cfg: TransitiveConfig = TransitiveConfig()) -> int:
    """Periods of the second chord needed to match a period multiple of the first.

    Both chords are shifted so the second chord's lowest note is 0.  Over all
    of the second chord's minimal-periodicity tunings (root pinned to 1/1)
    and all admissible fraction choices for the first chord's notes, subject
    to the joint per-note and pairwise detuning bounds, the result is the
    minimal value of lcm(all denominators) / periodicity(second).

    Self-progressions resolve to 1: the first chord can copy the second
    chord's tuning outright.
    """
    pcfg = cfg.periodicity_config()
    c1, c2 = _shifted(prog)
    c2_cents = [p * CENTS_PER_SEMITONE for p in c2.notes[1:]]
    p2 = _minimal_sub_lcm(c2_cents, pcfg, (0.0,))
    if p2 is None:
        raise UnresolvableProgressionError(
            f"second chord {prog.second} admits no rational tuning within bounds"
        )
    c1_cents = [p * CENTS_PER_SEMITONE for p in c1.notes]
    best: int | None = None
    for _, ds2 in _all_tunings_with_lcm(c2_cents, pcfg, p2, (0.0,)):
        bound = None if best is None else best * p2
        ext = _min_extension_lcm(c1_cents, pcfg, p2, (0.0,) + ds2, bound)
        if ext is not None and (best is None or ext // p2 < best):
            best = ext // p2
    if best is None:
        raise UnresolvableProgressionError(
            f"no joint tuning of {prog.first} -> {prog.second} within bounds"
        )
    return best


def relative_periodicity_to_first(
    prog: Progression, cfg: TransitiveConfig = TransitiveConfig()
) -> int:
    """Periodicity of the combined chord relative to the *first* chord.

    Mirror image of :func:`transitive_periodicity`: the first chord's
    sub-tuning is pinned to its own minimal lcm (its notes live over the
    second chord's root, so no coordinate is pinned to 1/1 unless the first
    chord contains that root), and the second chord's coordinates extend it.
    """
    pcfg = cfg.periodicity_config()
    c1, c2 = _shifted(prog)
    c1_cents = [p * CENTS_PER_SEMITONE for p in c1.notes]
    p1 = _minimal_sub_lcm(c1_cents, pcfg, ())
    if p1 is None:
        raise UnresolvableProgressionError(
            f"first chord {prog.first} admits no rational tuning within bounds"
        )
    c2_cents = [p * CENTS_PER_SEMITONE for p in c2.notes[1:]]  # root pinned 1/1
    best: int | None = None
    for _, ds1 in _all_tunings_with_lcm(c1_cents, pcfg, p1, ()):
        if not _window_ok(list(ds1) + [0.0], pcfg.jnd_cents):
            continue  # the second chord's root joins the window with detuning 0
        bound = None if best is None else best * p1
        ext = _min_extension_lcm(c2_cents, pcfg, p1, (0.0,) + ds1, bound)
        if ext is not None and (best is None or ext // p1 < best):
            best = ext // p1
    if best is None:
        raise UnresolvableProgressionError(
            f"no joint tuning of {prog.first} -> {prog.second} within bounds"
        )
    return best


def chan_transitional_harmony(
    prog: Progression,
    cfg: TransitiveConfig = TransitiveConfig(),
    f0: float = DEFAULT_F0_HZ,
    coincidence_tol_cents: float | None = None,
) -> float:
    """Normalized spread difference of near-coincident period multiples.

    For each chord, every tone period is multiplied up to the chord period
    implied by its rational-tuning witness; with detuned (e.g. equal
    tempered) tones the multiples no longer coincide exactly and their spread
    measures the mismatch.  The result is (spread_first - spread_second)
    divided by the second chord's period.  By default the multipliers come
    from the tuning witness; with ``coincidence_tol_cents`` the nearest
    integer multiple is used instead whenever it lies within that tolerance
    of the chord period.

    This quantity is deliberately fragile: sub-cent pitch changes move it a
    lot, which is exactly the criticism the regression tests document.
    """
    pcfg = cfg.periodicity_config()

    def spread(chord: Chord) -> tuple[float, float]:
        rooted = shift(chord, chord.root)
        period, tuning = chord_periodicity(rooted, pcfg)
        f_root = freq_from_pitch(chord.root, f0)
        t_sub = period / f_root
        kts = []
        for note, ratio in zip(chord.notes, tuning.ratios):
            fi = freq_from_pitch(note, f0)
            k = period * ratio
            assert k.denominator == 1  # denominators divide the chord period
            k = int(k)
            if coincidence_tol_cents is not None:
                near = round(t_sub * fi)
                if near >= 1 and abs(1200.0 * math.log2(near / (fi * t_sub))) <= coincidence_tol_cents:
                    k = near
            kts.append(k / fi)
        return max(kts) - min(kts), t_sub

    dt_first, _ = spread(prog.first)
    dt_second, t_sub_second = spread(prog.second)
    return (dt_first - dt_second) / t_sub_second


# -- fields over target windows ----------------------------------------------


def _window_axes(c1: Chord, n: int, cfg: TransitiveConfig, resolution: int):
    if n != len(c1):
        raise ValueError(
            "window fields currently require the target size to match the "
            f"starting chord ({len(c1)} notes), got {n}"
        )
    if len(c1) > 1:
        min_gap_cents = min(
            (b - a) * CENTS_PER_SEMITONE for a, b in zip(c1.notes, c1.notes[1:])
        )
        if 2 * cfg.scope_cents >= min_gap_cents:
            raise ValueError(
                f"scope {cfg.scope_cents:g} cents makes note windows overlap "
                f"(minimal note gap is {min_gap_cents:g} cents)"
            )
    k = int(cfg.scope_cents // resolution)
    origins = tuple(p * CENTS_PER_SEMITONE - k * resolution for p in c1.notes)
    counts = (2 * k + 1,) * len(c1)
    return origins, counts


def _window_cells(origins, counts, resolution):
    axes = [
        [o + resolution * i for i in range(c)] for o, c in zip(origins, counts)
    ]
    return list(product(*axes))


def transitive_field(
    c1: Chord,
    n: int,
    cfg: TransitiveConfig = TransitiveConfig(),
    resolution: int = 50,
) -> tuple[ScalarField, ScalarField]:
    """Transitive periodicity over a window of target chords around ``c1``.

    Returns the pair (log2 transitive periodicity of ``c1 -> c2``, log2
    periodicity of ``c2``) on the same grid: one axis per note of the target
    chord, each spanning ``scope`` cents around the corresponding note of
    ``c1``.  Windows must not overlap, so every grid tuple is already sorted.
    """
    pcfg = cfg.periodicity_config()
    origins, counts = _window_axes(c1, n, cfg, resolution)
    cells = _window_cells(origins, counts, resolution)
    trans_vals = []
    comp_vals = []
    for coords in cells:
        c2 = Chord(tuple(x / CENTS_PER_SEMITONE for x in coords))
        trans_vals.append(
            math.log2(transitive_periodicity(Progression(c1, c2), cfg))
        )
        comp_vals.append(
            math.log2(chord_periodicity(shift(c2, c2.root), pcfg)[0])
        )
    meta = {
        "domain": "notes",
        "from_chord": list(c1.notes),
        "scope_cents": cfg.scope_cents,
        "resolution_cents": resolution,
        "jnd_cents": cfg.jnd_cents,
        "qmax": cfg.qmax,
        "sigma_cents": 0.0,
    }
    names = tuple(f"x{i + 1}" for i in range(len(c1)))
    trans = make_box_field(
        resolution, origins, counts, trans_vals, names,
        "log2_transitive_periodicity", dict(meta, generator="transitive"),
    )
    comp = make_box_field(
        resolution, origins, counts, comp_vals, names,
        "log2_periodicity", dict(meta, generator="periodicity_of_second"),
    )
    return trans, comp


def _feasible_at_ratio(prog: Progression, cfg: TransitiveConfig, ratio: int) -> bool:
    """True iff some admissible joint tuning realizes exactly this ratio."""
    pcfg = cfg.periodicity_config()
    c1, c2 = _shifted(prog)
    c2_cents = [p * CENTS_PER_SEMITONE for p in c2.notes[1:]]
    p2 = _minimal_sub_lcm(c2_cents, pcfg, (0.0,))
    if p2 is None:
        return False
    target = ratio * p2
    c1_cents = [p * CENTS_PER_SEMITONE for p in c1.notes]
    for _, ds2 in _all_tunings_with_lcm(c2_cents, pcfg, p2, (0.0,)):
        lists = []
        for c in c1_cents:
            filtered = [
                (f, d)
                for f, d in ratio_candidates(c, pcfg, clamp=False)
                if target % f.denominator == 0
            ]
            if not filtered:
                lists = None
                break
            lists.append(filtered)
        if lists is None:
            continue
        seed = (0.0,) + ds2

        def walk(i, cur, lo, hi):
            if i == len(lists):
                return cur == target
            for f, d in lists[i]:
                nlo, nhi = min(lo, d), max(hi, d)
                if nhi - nlo > pcfg.jnd_cents:
                    continue
                if walk(i + 1, math.lcm(cur, f.denominator), nlo, nhi):
                    return True
            return False

        if walk(0, p2, min(seed), max(seed)):
            return True
    return False


def sweep_transitive_field(
    c1: Chord,
    n: int,
    cfg: TransitiveConfig = TransitiveConfig(),
    resolution: int = 50,
    max_ratio: int = 100_000,
) -> ScalarField:
    """Ascending-ratio sweep formulation of :func:`transitive_field`.

    Stamps each window cell at the first ratio p = 1, 2, ... for which a
    joint tuning exists; kept as the order-independent cross-check of the
    cell-local minimization.
    """
    origins, counts = _window_axes(c1, n, cfg, resolution)
    cells = _window_cells(origins, counts, resolution)
    values = np.full(len(cells), np.nan)
    remaining = set(range(len(cells)))
    p = 1
    while remaining and p <= max_ratio:
        stamped = []
        for i in remaining:
            c2 = Chord(tuple(x / CENTS_PER_SEMITONE for x in cells[i]))
            if _feasible_at_ratio(Progression(c1, c2), cfg, p):
                stamped.append(i)
        for i in stamped:
            values[i] = math.log2(p)
            remaining.discard(i)
        p += 1
    if remaining:
        residual = [cells[i] for i in sorted(remaining)]
        raise UnresolvableProgressionError(
            f"sweep exhausted ratios <= {max_ratio} with unassigned cells: {residual[:10]}"
        )
    meta = {
        "domain": "notes",
        "from_chord": list(c1.notes),
        "scope_cents": cfg.scope_cents,
        "resolution_cents": resolution,
        "jnd_cents": cfg.jnd_cents,
        "qmax": cfg.qmax,
        "sigma_cents": 0.0,
        "generator": "transitive",
    }
    names = tuple(f"x{i + 1}" for i in range(len(c1)))
    return make_box_field(
        resolution, origins, counts, values, names, "log2_transitive_periodicity", meta
    )


# -- derivatives --------------------------------------------------------------


def directional_derivative(
    fld: ScalarField,
    at: tuple[float, ...],
    velocity: tuple[float, ...],
    step_cents: float = 4.0,
    normalize_by_speed: bool = False,
) -> float:
    """Central-difference rate of change of a smoothed field along a voice motion.

    ``velocity`` has one rate per chord note (semitones per unit time).  On
    interval-domain fields the root rate is subtracted coordinate-wise, so
    pure transposition gives exactly zero without touching the grid.  The
    stencil uses multilinear interpolation and converges at second order in
    ``step_cents`` on smooth fields.  Raw step fields are rejected: their
    derivative is not meaningful, so the field must carry a positive
    smoothing width in its metadata.
    """
    if float(fld.meta.get("sigma_cents", 0.0)) <= 0.0:
        raise ValueError("directional derivatives require a smoothed field (sigma > 0)")
    domain = fld.meta.get("domain", "intervals")
    if domain == "intervals":
        if len(velocity) != fld.dims + 1:
            raise ValueError(
                f"expected {fld.dims + 1} per-note rates, got {len(velocity)}"
            )
        u = [
            CENTS_PER_SEMITONE * (velocity[k + 1] - velocity[0])
            for k in range(fld.dims)
        ]
    else:
        if len(velocity) != fld.dims:
            raise ValueError(f"expected {fld.dims} per-note rates, got {len(velocity)}")
        u = [CENTS_PER_SEMITONE * v for v in velocity]
    if all(x == 0.0 for x in u):
        return 0.0
    if step_cents <= 0:
        raise ValueError("step_cents must be positive")
    s = step_cents / CENTS_PER_SEMITONE
    plus = [c + s * x for c, x in zip(at, u)]
    minus = [c - s * x for c, x in zip(at, u)]
    value = (fld.interpolate(plus) - fld.interpolate(minus)) / (2.0 * s)
    if normalize_by_speed:
        value /= math.sqrt(sum(v * v for v in velocity))
    return value
