"""Independent brute-force oracles used by the test suite.

Everything here is deliberately dumb: permutations instead of sorted
matching, full candidate products instead of branch-and-bound, shortest
paths over explicit chord graphs instead of the grouping dynamic program.
The production code must agree with these on small instances.
"""

from __future__ import annotations

import heapq
import itertools
import math
from fractions import Fraction

from chordspace.harmonicity import PeriodicityConfig, ratio_candidates
from chordspace.metric import NormChoice
from chordspace.pitch import Chord


def perm_distance(a, b, norm=NormChoice.MANHATTAN) -> float:
    """Minimum matching cost over every permutation."""
    best = math.inf
    for perm in itertools.permutations(b):
        if norm is NormChoice.MANHATTAN:
            d = sum(abs(x - y) for x, y in zip(a, perm))
        else:
            d = math.sqrt(sum((x - y) ** 2 for x, y in zip(a, perm)))
        best = min(best, d)
    return best


def expansions(notes: tuple[float, ...], n: int):
    for mult in itertools.product(range(1, n + 1), repeat=len(notes)):
        if sum(mult) == n:
            out = []
            for note, m in zip(notes, mult):
                out.extend([note] * m)
            yield tuple(out)


def expansion_distance(c1: Chord, c2: Chord, n: int, norm=NormChoice.MANHATTAN) -> float:
    best = math.inf
    for e1 in expansions(c1.notes, n):
        for e2 in expansions(c2.notes, n):
            best = min(best, perm_distance(e1, e2, norm))
    return best


def _sorted_match(a, b) -> float:
    return sum(abs(x - y) for x, y in zip(sorted(a), sorted(b)))


def expansion_distance_fast(c1: Chord, c2: Chord, n: int) -> float:
    """Expansion oracle with sorted matching in place of permutations.

    Sorted matching itself is validated against :func:`perm_distance` in a
    separate exhaustive test, so this stays independent of the production
    grouping code.
    """
    best = math.inf
    for e1 in expansions(c1.notes, n):
        for e2 in expansions(c2.notes, n):
            best = min(best, _sorted_match(e1, e2))
    return best


def duplication_distance(c1: Chord, c2: Chord, max_extra: int = 0) -> float:
    """min over n of the expansion/matching distance, optionally scanning wider."""
    hi = len(c1) + len(c2) + max_extra
    return min(
        expansion_distance_fast(c1, c2, n)
        for n in range(max(len(c1), len(c2)), hi + 1)
    )


def geodesic_apsp(nodes: list[Chord]) -> dict[tuple[tuple, tuple], float]:
    """All-pairs shortest concatenation of duplication-distance legs.

    Every optimal split/merge path between chords over a discrete pitch pool
    can be realized with intermediate chords drawn from that pool (merge
    points of an optimal grouping sit on member notes), so shortest paths in
    this explicit graph equal the geodesic distance.
    """
    k = len(nodes)
    dist = [[0.0] * k for _ in range(k)]
    for i in range(k):
        for j in range(i + 1, k):
            w = duplication_distance(nodes[i], nodes[j])
            dist[i][j] = dist[j][i] = w
    for m in range(k):
        dm = dist[m]
        for i in range(k):
            di = dist[i]
            via = di[m]
            for j in range(k):
                alt = via + dm[j]
                if alt < di[j]:
                    di[j] = alt
    return {
        (nodes[i].notes, nodes[j].notes): dist[i][j]
        for i in range(k)
        for j in range(k)
    }


def geodesic_shortest_path(c1: Chord, c2: Chord) -> float:
    """Single-pair geodesic oracle over the union-note chord graph."""
    pool = sorted(set(c1.notes) | set(c2.notes))
    max_card = max(len(c1), len(c2))
    nodes = [
        Chord(tuple(sub))
        for r in range(1, max_card + 1)
        for sub in itertools.combinations(pool, r)
    ]
    table = geodesic_apsp(nodes)
    return table[(c1.notes, c2.notes)]


def scan_min_denominator(cents: float, jnd_cents: float, qmax: int) -> Fraction | None:
    """Exhaustive denominator scan for the simplest in-window octave ratio."""
    for q in range(1, qmax + 1):
        for p in range(q, 2 * q + 1):
            if math.gcd(p, q) == 1:
                if abs(1200.0 * math.log2(Fraction(p, q)) - cents) <= jnd_cents:
                    return Fraction(p, q)
    return None


def exhaustive_chord_periodicity(
    notes_semitones: tuple[float, ...], cfg: PeriodicityConfig
) -> tuple[int, tuple[Fraction, ...]] | None:
    """Full product over per-note candidates; no pruning anywhere."""
    assert notes_semitones[0] == 0
    cents = [p * 100.0 for p in notes_semitones[1:]]
    lists = [ratio_candidates(x, cfg, clamp=True) for x in cents]
    if any(not lst for lst in lists):
        return None
    best = None
    best_fracs = None
    for combo in itertools.product(*lists):
        ds = [0.0] + [d for _, d in combo]
        if any(abs(d) > cfg.jnd_cents for d in ds):
            continue
        if cfg.pairwise_constraint and max(ds) - min(ds) > cfg.jnd_cents:
            continue
        value = math.lcm(*(f.denominator for f, _ in combo)) if combo else 1
        if best is None or value < best:
            best = value
            best_fracs = tuple(f for f, _ in combo)
    if best is None:
        return None
    return best, best_fracs


def exhaustive_transitive(
    first: Chord, second: Chord, jnd_cents: float = 18.0, qmax: int = 100
) -> int | None:
    """Transitive periodicity by full enumeration.

    Pins the second chord's sub-tuning to its own minimal periodicity (root
    exactly 1/1) and scans the full product of the first chord's candidates
    under the joint pairwise window.
    """
    cfg = PeriodicityConfig(jnd_cents=jnd_cents, qmax=qmax)
    s = second.root
    c1 = [p - s for p in first.notes]
    c2 = [p - s for p in second.notes]
    c2_lists = [ratio_candidates(x * 100.0, cfg, clamp=False) for x in c2[1:]]
    c1_lists = [ratio_candidates(x * 100.0, cfg, clamp=False) for x in c1]
    if any(not lst for lst in c2_lists) or any(not lst for lst in c1_lists):
        return None

    second_tunings = []
    p2 = None
    for combo in itertools.product(*c2_lists):
        ds = [0.0] + [d for _, d in combo]
        if max(ds) - min(ds) > jnd_cents:
            continue
        value = math.lcm(1, *(f.denominator for f, _ in combo))
        if p2 is None or value < p2:
            p2 = value
    if p2 is None:
        return None
    for combo in itertools.product(*c2_lists):
        ds = [0.0] + [d for _, d in combo]
        if max(ds) - min(ds) > jnd_cents:
            continue
        if math.lcm(1, *(f.denominator for f, _ in combo)) == p2:
            second_tunings.append(tuple(ds))

    best = None
    for ds2 in second_tunings:
        for combo in itertools.product(*c1_lists):
            ds = list(ds2) + [d for _, d in combo]
            if max(ds) - min(ds) > jnd_cents:
                continue
            total = math.lcm(p2, *(f.denominator for f, _ in combo))
            ratio = total // p2
            if best is None or ratio < best:
                best = ratio
    return best


def exhaustive_relative_to_first(
    first: Chord, second: Chord, jnd_cents: float = 18.0, qmax: int = 100
) -> int | None:
    """Combined periodicity relative to the first chord, by full enumeration."""
    cfg = PeriodicityConfig(jnd_cents=jnd_cents, qmax=qmax)
    s = second.root
    c1 = [p - s for p in first.notes]
    c2 = [p - s for p in second.notes]
    c1_lists = [ratio_candidates(x * 100.0, cfg, clamp=False) for x in c1]
    c2_lists = [ratio_candidates(x * 100.0, cfg, clamp=False) for x in c2[1:]]
    if any(not lst for lst in c1_lists) or any(not lst for lst in c2_lists):
        return None

    p1 = None
    for combo in itertools.product(*c1_lists):
        ds = [d for _, d in combo]
        if max(ds) - min(ds) > jnd_cents:
            continue
        value = math.lcm(*(f.denominator for f, _ in combo))
        if p1 is None or value < p1:
            p1 = value
    if p1 is None:
        return None

    best = None
    for combo1 in itertools.product(*c1_lists):
        ds1 = [d for _, d in combo1]
        if max(ds1) - min(ds1) > jnd_cents:
            continue
        if math.lcm(*(f.denominator for f, _ in combo1)) != p1:
            continue
        for combo2 in itertools.product(*c2_lists):
            ds = ds1 + [0.0] + [d for _, d in combo2]
            if max(ds) - min(ds) > jnd_cents:
                continue
            total = math.lcm(p1, 1, *(f.denominator for f, _ in combo2))
            ratio = total // p1
            if best is None or ratio < best:
                best = ratio
    return best
