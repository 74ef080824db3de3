"""Rational tuning and periodicity of chords.

An interval is heard as the simplest frequency ratio within a just-noticeable
difference; the periodicity of a dyad is the denominator of that ratio, and
the periodicity of a chord is the least common multiple of the denominators
of a joint rational tuning of all notes relative to the root.  The search for
a joint tuning keeps every per-note detuning within the JND and, by default,
every pairwise detuning difference within the JND as well.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .errors import UnresolvableChordError, UnresolvableIntervalError
from .field import ScalarField, make_simplex_field, simplex_cells
from .pitch import CENTS_PER_SEMITONE, Chord, normalize

__all__ = [
    "PeriodicityConfig",
    "RationalTuning",
    "min_denominator_ratio",
    "dyad_periodicity",
    "chord_periodicity",
    "rerooted_periodicity",
    "periodicity_field",
    "sweep_periodicity_field",
    "ratio_candidates",
]


@dataclass(frozen=True)
class PeriodicityConfig:
    """Tolerances for the rational-tuning search.

    ``pairwise_constraint`` toggles the pairwise detuning bound; disabling it
    leaves only the per-note bound (the looser convention used by earlier
    periodicity models).
    """

    jnd_cents: float = 18.0
    qmax: int = 100
    pairwise_constraint: bool = True

    def __post_init__(self):
        if not (self.jnd_cents > 0 and math.isfinite(self.jnd_cents)):
            raise ValueError(f"jnd_cents must be positive, got {self.jnd_cents!r}")
        if self.qmax < 2:
            raise ValueError(f"qmax must be >= 2, got {self.qmax!r}")


@dataclass(frozen=True)
class RationalTuning:
    """A joint rational tuning: one reduced fraction per note, plus detunings."""

    ratios: tuple[Fraction, ...]
    detunings_cents: tuple[float, ...]
    periodicity: int

    def __post_init__(self):
        if len(self.ratios) != len(self.detunings_cents):
            raise ValueError("ratios and detunings must align")
        if self.periodicity != math.lcm(*(r.denominator for r in self.ratios)):
            raise ValueError("periodicity must equal the lcm of the denominators")


def _cents_of(ratio: Fraction) -> float:
    return 1200.0 * math.log2(ratio)


def _ratio_window(cents: float, jnd_cents: float) -> tuple[Fraction, Fraction]:
    # Exact Fraction bounds from the float powers keep comparisons deterministic.
    lo = Fraction(2.0 ** ((cents - jnd_cents) / 1200.0))
    hi = Fraction(2.0 ** ((cents + jnd_cents) / 1200.0))
    return lo, hi


def _simplest_in_closed(lo: Fraction, hi: Fraction) -> Fraction:
    """Minimal-denominator fraction in [lo, hi], 0 < lo <= hi (Stern-Brocot)."""
    a = math.ceil(lo)
    if a <= math.floor(hi):
        return Fraction(a)
    whole = math.floor(lo)
    inner = _simplest_in_closed(1 / (hi - whole), 1 / (lo - whole))
    return whole + 1 / inner


def min_denominator_ratio(
    interval: float, cfg: PeriodicityConfig = PeriodicityConfig()
) -> Fraction:
    """Smallest-denominator fraction approximating an interval within the JND.

    ``interval`` is in semitones, restricted to one octave; the search window
    is the JND band around it intersected with [1, 2].  Ties between equal
    denominators resolve to the smaller numerator.
    """
    if not 0 <= interval <= 12:
        raise ValueError(f"interval must lie in [0, 12] semitones, got {interval!r}")
    cents = interval * CENTS_PER_SEMITONE
    lo, hi = _ratio_window(cents, cfg.jnd_cents)
    lo, hi = max(lo, Fraction(1)), min(hi, Fraction(2))
    if lo > hi:
        raise UnresolvableIntervalError(cents, cfg.jnd_cents, cfg.qmax, (float(lo), float(hi)))
    simplest = _simplest_in_closed(lo, hi)
    q = simplest.denominator
    if q > cfg.qmax:
        raise UnresolvableIntervalError(cents, cfg.jnd_cents, cfg.qmax, (float(lo), float(hi)))
    # Any in-window numerator over the minimal q is automatically coprime.
    return Fraction(math.ceil(lo * q), q)


def dyad_periodicity(interval: float, cfg: PeriodicityConfig = PeriodicityConfig()) -> int:
    """Denominator of :func:`min_denominator_ratio`."""
    return min_denominator_ratio(interval, cfg).denominator


@lru_cache(maxsize=65536)
def _candidates_cached(
    cents: float, jnd_cents: float, qmax: int, clamp: bool
) -> tuple[tuple[Fraction, float], ...]:
    lo, hi = _ratio_window(cents, jnd_cents)
    if clamp:
        lo, hi = max(lo, Fraction(1)), min(hi, Fraction(2))
    out = []
    for q in range(1, qmax + 1):
        p_lo = math.ceil(lo * q)
        p_hi = math.floor(hi * q)
        for p in range(max(p_lo, 1), p_hi + 1):
            if math.gcd(p, q) == 1:
                frac = Fraction(p, q)
                out.append((frac, _cents_of(frac) - cents))
    return tuple(out)


def ratio_candidates(
    cents: float, cfg: PeriodicityConfig, clamp: bool = True
) -> tuple[tuple[Fraction, float], ...]:
    """All reduced fractions within the JND of a cent value, by denominator.

    With ``clamp`` the window is intersected with the octave [1, 2], matching
    chords normalized to one octave; without it any positive ratio is
    admitted, which covers notes outside the reference octave.
    """
    return _candidates_cached(float(cents), cfg.jnd_cents, cfg.qmax, clamp)


def _min_lcm_tuning(
    cents_list: list[float],
    cfg: PeriodicityConfig,
    clamp: bool = True,
    pinned: tuple[int, ...] = (1,),
    pinned_detunings: tuple[float, ...] = (0.0,),
):
    """Branch-and-bound for the minimal-lcm joint tuning of free coordinates.

    ``pinned`` denominators and ``pinned_detunings`` seed the running lcm and
    the pairwise detuning window (the root's exact 1/1 contributes 0).
    Returns (lcm, fractions, detunings) for the free coordinates or None.
    """
    cand_lists = [ratio_candidates(c, cfg, clamp) for c in cents_list]
    if any(not lst for lst in cand_lists):
        return None
    base_lcm = math.lcm(*pinned) if pinned else 1
    d_lo = min(pinned_detunings) if pinned_detunings else 0.0
    d_hi = max(pinned_detunings) if pinned_detunings else 0.0

    best: list = [None, None]

    def search(i: int, cur_lcm: int, lo: float, hi: float, chosen: list):
        if best[0] is not None and cur_lcm >= best[0]:
            return
        if i == len(cand_lists):
            best[0] = cur_lcm
            best[1] = list(chosen)
            return
        for frac, d in cand_lists[i]:
            nxt = math.lcm(cur_lcm, frac.denominator)
            if best[0] is not None and nxt >= best[0]:
                continue
            if cfg.pairwise_constraint:
                nlo, nhi = min(lo, d), max(hi, d)
                if nhi - nlo > cfg.jnd_cents:
                    continue
            else:
                nlo, nhi = lo, hi
            chosen.append((frac, d))
            search(i + 1, nxt, nlo, nhi, chosen)
            chosen.pop()

    search(0, base_lcm, d_lo, d_hi, [])
    if best[0] is None:
        return None
    fracs = tuple(f for f, _ in best[1])
    ds = tuple(d for _, d in best[1])
    return best[0], fracs, ds


def chord_periodicity(
    c: Chord, cfg: PeriodicityConfig = PeriodicityConfig()
) -> tuple[int, RationalTuning]:
    """Minimal chord periodicity and a tuning witness.

    The chord must be rooted at 0 with all notes inside one octave.  The root
    is tuned to exactly 1/1 (zero detuning); every other note ranges over the
    reduced fractions within the JND of its interval from the root, and the
    search minimizes the lcm of the denominators subject to the per-note and
    (by default) pairwise detuning bounds.

    Returns
    -------
    (periodicity, tuning):
        ``periodicity`` is the minimal lcm; ``tuning`` is the first minimal
        witness in (denominator, numerator) search order, which makes the
        result deterministic.
    """
    if c.notes[0] != 0:
        raise ValueError(f"chord must be rooted at 0, got root {c.notes[0]!r}")
    if c.notes[-1] > 12:
        raise ValueError(f"chord must stay within one octave, got {c.notes}")
    cents = [p * CENTS_PER_SEMITONE for p in c.notes[1:]]
    found = _min_lcm_tuning(cents, cfg, clamp=True)
    if found is None:
        raise UnresolvableChordError(
            f"no joint rational tuning of {c} within {cfg.jnd_cents:g} cents "
            f"and denominators <= {cfg.qmax}"
        )
    lcm, fracs, ds = found
    tuning = RationalTuning(
        ratios=(Fraction(1),) + fracs,
        detunings_cents=(0.0,) + ds,
        periodicity=lcm,
    )
    return lcm, tuning


def rerooted_periodicity(
    c: Chord, cfg: PeriodicityConfig = PeriodicityConfig()
) -> tuple[int, dict[float, int | None]]:
    """Minimum of the pinned-root periodicity over every choice of root note.

    Investigation helper: re-rooting moves the exact-1/1 pin to each note in
    turn (other notes may then fall outside [1, 2] and use unclamped ratio
    windows).  Returns the overall minimum and the per-root values, ``None``
    where no tuning is feasible.
    """
    per_root: dict[float, int | None] = {}
    best = None
    for r in c.notes:
        cents = [(p - r) * CENTS_PER_SEMITONE for p in c.notes if p != r]
        found = _min_lcm_tuning(cents, cfg, clamp=False)
        per_root[r] = found[0] if found else None
        if found and (best is None or found[0] < best):
            best = found[0]
    if best is None:
        raise UnresolvableChordError(f"no rational tuning of {c} under any re-rooting")
    return best, per_root


def _field_meta(cfg: PeriodicityConfig, resolution: int, generator: str) -> dict:
    return {
        "generator": generator,
        "domain": "intervals",
        "resolution_cents": resolution,
        "jnd_cents": cfg.jnd_cents,
        "qmax": cfg.qmax,
        "pairwise_constraint": cfg.pairwise_constraint,
        "sigma_cents": 0.0,
    }


def _cell_chord(coords: tuple[float, ...]) -> Chord:
    return normalize((0.0,) + tuple(c / CENTS_PER_SEMITONE for c in coords))


def periodicity_field(
    n: int, resolution: int, cfg: PeriodicityConfig = PeriodicityConfig()
) -> ScalarField:
    """log2 chord periodicity on the one-octave grid of n-note chords.

    Cells are evaluated independently through :func:`chord_periodicity`; the
    ascending sweep formulation (:func:`sweep_periodicity_field`) computes
    the same function and is kept as a cross-check, but cell-local evaluation
    has no stamping-order dependence and parallelizes trivially.
    """
    if n not in (2, 3, 4):
        raise ValueError(f"field generation supports 2 to 4 notes, got {n}")
    cells = simplex_cells(n - 1, resolution)
    values = [math.log2(chord_periodicity(_cell_chord(c), cfg)[0]) for c in cells]
    return make_simplex_field(
        n - 1, resolution, values, "log2_periodicity", _field_meta(cfg, resolution, "periodicity")
    )


def _stampable_at(
    cand_lists: list[tuple[tuple[Fraction, float], ...]],
    q: int,
    cfg: PeriodicityConfig,
) -> bool:
    """True iff some joint tuning with lcm exactly ``q`` fits the bounds."""
    sub = []
    for lst in cand_lists:
        filtered = [(f, d) for f, d in lst if q % f.denominator == 0]
        if not filtered:
            return False
        sub.append(filtered)

    def walk(i: int, cur: int, lo: float, hi: float) -> bool:
        if i == len(sub):
            return cur == q
        for frac, d in sub[i]:
            if cfg.pairwise_constraint:
                nlo, nhi = min(lo, d), max(hi, d)
                if nhi - nlo > cfg.jnd_cents:
                    continue
            else:
                nlo, nhi = lo, hi
            if walk(i + 1, math.lcm(cur, frac.denominator), nlo, nhi):
                return True
        return False

    return walk(0, 1, 0.0, 0.0)


def sweep_periodicity_field(
    n: int,
    resolution: int,
    cfg: PeriodicityConfig = PeriodicityConfig(),
    max_periodicity: int = 100_000,
) -> ScalarField:
    """Ascending-periodicity sweep over the same grid as :func:`periodicity_field`.

    Walks q = 1, 2, ... and stamps every not-yet-assigned cell whose JND
    neighborhood contains a chord of periodicity exactly q.  Only tunings
    near remaining cells are ever considered, which is the standard
    efficiency shortcut; the assigned values are unchanged by it.
    """
    if n not in (2, 3, 4):
        raise ValueError(f"field generation supports 2 to 4 notes, got {n}")
    cells = simplex_cells(n - 1, resolution)
    cand_per_cell = [
        [ratio_candidates(x, cfg, clamp=True) for x in coords] for coords in cells
    ]
    values = np.full(len(cells), np.nan)
    remaining = set(range(len(cells)))
    for i, lists in enumerate(cand_per_cell):
        if any(not lst for lst in lists):
            raise UnresolvableChordError(
                f"cell {cells[i]} has a note with no admissible fraction"
            )
    q = 1
    while remaining and q <= max_periodicity:
        stamped = [i for i in remaining if _stampable_at(cand_per_cell[i], q, cfg)]
        for i in stamped:
            values[i] = math.log2(q)
            remaining.discard(i)
        q += 1
    if remaining:
        residual = [cells[i] for i in sorted(remaining)]
        raise UnresolvableChordError(
            f"sweep exhausted q <= {max_periodicity} with unassigned cells: {residual[:10]}"
        )
    return make_simplex_field(
        n - 1, resolution, values, "log2_periodicity", _field_meta(cfg, resolution, "periodicity")
    )
