"""Regular-grid scalar fields over normalized chord domains.

A field stores one real value per grid cell.  Two domain flavors exist:

* interval grids: coordinates are the non-root notes of a chord rooted at 0,
  constrained to ``0 <= x2 <= ... <= xn <= 1200`` cents (simplex storage --
  the rest of the hypercube is redundant under note reordering);
* note-window grids: a box of candidate chords around a reference chord, one
  axis per note, no simplex constraint.

Cells are ordered lexicographically by coordinates; that order is total,
stable and shared by the CSV export, which makes outputs hashable in CI.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field as dc_field
from functools import cached_property
from typing import Callable, Iterator, Sequence

import numpy as np

__all__ = [
    "ScalarField",
    "make_simplex_field",
    "make_box_field",
    "simplex_cells",
    "local_minima",
    "slice_field",
    "export_csv",
    "import_csv",
    "export_matrix",
]


def _fmt_coord(c: float) -> str:
    if abs(c - round(c)) < 1e-9:
        return str(int(round(c)))
    return f"{c:.4f}"


@dataclass(frozen=True, eq=False)
class ScalarField:
    """Dense scalar values on a regular (possibly simplex-constrained) grid.

    ``values`` holds one float per included cell, in lexicographic coordinate
    order.  ``meta`` carries the generator name and configuration snapshot; it
    is excluded from equality.
    """

    resolution: int
    origins: tuple[float, ...]
    counts: tuple[int, ...]
    simplex: bool
    axis_names: tuple[str, ...]
    values: np.ndarray
    value_name: str = "value"
    meta: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        if self.resolution <= 0:
            raise ValueError("resolution must be a positive number of cents")
        if not (len(self.origins) == len(self.counts) == len(self.axis_names)):
            raise ValueError("origins, counts and axis_names must align")
        if any(c < 1 for c in self.counts):
            raise ValueError("every axis needs at least one grid point")
        vals = np.asarray(self.values, dtype=float)
        vals.flags.writeable = False
        object.__setattr__(self, "values", vals)
        # Canonical flag: simplex that excludes nothing is stored as a box.
        simplex = self.simplex and len(self.counts) >= 2
        if simplex:
            n_simplex = sum(1 for _ in self._iter_cells(True))
            if n_simplex == int(np.prod(self.counts)):
                simplex = False
        object.__setattr__(self, "simplex", simplex)
        if len(vals) != self.n_cells:
            raise ValueError(
                f"value count {len(vals)} does not match cell count {self.n_cells}"
            )

    # -- geometry ----------------------------------------------------------

    @property
    def dims(self) -> int:
        return len(self.counts)

    def axis_coords(self, k: int) -> np.ndarray:
        return self.origins[k] + self.resolution * np.arange(self.counts[k], dtype=float)

    def _iter_cells(self, simplex: bool) -> Iterator[tuple[float, ...]]:
        axes = [list(self.axis_coords(k)) for k in range(len(self.counts))]
        for coords in itertools.product(*axes):
            if not simplex or all(a <= b + 1e-9 for a, b in zip(coords, coords[1:])):
                yield coords

    @cached_property
    def cells(self) -> tuple[tuple[float, ...], ...]:
        """Included cell coordinates (cents), lexicographic order."""
        return tuple(self._iter_cells(self.simplex))

    @cached_property
    def _index(self) -> dict[tuple[float, ...], int]:
        return {c: i for i, c in enumerate(self.cells)}

    @property
    def n_cells(self) -> int:
        if self.simplex:
            return len(self.cells)
        return int(np.prod(self.counts))

    def index_of(self, coords: Sequence[float]) -> int:
        key = tuple(float(c) for c in coords)
        try:
            return self._index[key]
        except KeyError:
            raise ValueError(f"coordinates {key} are not a grid cell") from None

    def value_at(self, coords: Sequence[float]) -> float:
        return float(self.values[self.index_of(coords)])

    def dense(self) -> np.ndarray:
        """Full box array of values.

        Simplex fields are extended symmetrically (a cell reads the value of
        its sorted coordinates), which is the natural extension of a function
        on unordered note sets.
        """
        if self.dims == 0:
            return self.values.reshape(())
        if not self.simplex:
            return self.values.reshape(self.counts)
        out = np.empty(self.counts, dtype=float)
        for idx in np.ndindex(*self.counts):
            coords = tuple(
                self.origins[k] + self.resolution * i for k, i in enumerate(idx)
            )
            out[idx] = self.values[self._index[tuple(sorted(coords))]]
        return out

    def with_values(
        self,
        values: np.ndarray,
        value_name: str | None = None,
        meta_updates: dict | None = None,
    ) -> "ScalarField":
        meta = dict(self.meta)
        if meta_updates:
            meta.update(meta_updates)
        return ScalarField(
            resolution=self.resolution,
            origins=self.origins,
            counts=self.counts,
            simplex=self.simplex,
            axis_names=self.axis_names,
            values=np.asarray(values, dtype=float),
            value_name=value_name or self.value_name,
            meta=meta,
        )

    def interpolate(self, coords: Sequence[float]) -> float:
        """Multilinear interpolation at off-grid coordinates (cents)."""
        if len(coords) != self.dims:
            raise ValueError(f"expected {self.dims} coordinates, got {len(coords)}")
        dense = self.dense()
        pos = []
        for k, c in enumerate(coords):
            t = (float(c) - self.origins[k]) / self.resolution
            if t < -1e-9 or t > self.counts[k] - 1 + 1e-9:
                raise ValueError(
                    f"coordinate {c} is outside axis {self.axis_names[k]}"
                )
            pos.append(min(max(t, 0.0), self.counts[k] - 1.0))
        lo = [min(int(math.floor(t)), self.counts[k] - 1) for k, t in enumerate(pos)]
        out = 0.0
        for corner in itertools.product((0, 1), repeat=self.dims):
            idx = []
            w = 1.0
            for k, bit in enumerate(corner):
                i = min(lo[k] + bit, self.counts[k] - 1)
                frac = pos[k] - lo[k]
                w *= frac if bit else 1.0 - frac
                idx.append(i)
            if w:
                out += w * float(dense[tuple(idx)])
        return out

    def __eq__(self, other) -> bool:
        if not isinstance(other, ScalarField):
            return NotImplemented
        return (
            self.resolution == other.resolution
            and self.origins == other.origins
            and self.counts == other.counts
            and self.simplex == other.simplex
            and self.axis_names == other.axis_names
            and self.value_name == other.value_name
            and np.array_equal(self.values, other.values)
        )


def simplex_cells(dims: int, resolution: int) -> list[tuple[float, ...]]:
    """Grid cells of the one-octave interval simplex, lexicographic order."""
    if 1200 % resolution != 0:
        raise ValueError(f"resolution {resolution} does not divide 1200")
    axis = [float(c) for c in range(0, 1201, resolution)]
    return [
        coords
        for coords in itertools.product(axis, repeat=dims)
        if all(a <= b for a, b in zip(coords, coords[1:]))
    ]


def make_simplex_field(
    dims: int,
    resolution: int,
    values: Sequence[float],
    value_name: str,
    meta: dict,
) -> ScalarField:
    n = 1200 // resolution + 1
    return ScalarField(
        resolution=resolution,
        origins=(0.0,) * dims,
        counts=(n,) * dims,
        simplex=dims >= 2,
        axis_names=tuple(f"x{k + 2}" for k in range(dims)),
        values=np.asarray(values, dtype=float),
        value_name=value_name,
        meta=meta,
    )


def make_box_field(
    resolution: int,
    origins: Sequence[float],
    counts: Sequence[int],
    values: Sequence[float],
    axis_names: Sequence[str],
    value_name: str,
    meta: dict,
) -> ScalarField:
    return ScalarField(
        resolution=resolution,
        origins=tuple(float(o) for o in origins),
        counts=tuple(int(c) for c in counts),
        simplex=False,
        axis_names=tuple(axis_names),
        values=np.asarray(values, dtype=float),
        value_name=value_name,
        meta=meta,
    )


def evaluate_on_cells(
    cells: Sequence[tuple[float, ...]], fn: Callable[[tuple[float, ...]], float]
) -> np.ndarray:
    return np.array([fn(c) for c in cells], dtype=float)


# -- analysis ---------------------------------------------------------------


def local_minima(
    field: ScalarField, radius: int = 1
) -> list[tuple[tuple[float, ...], float]]:
    """Cells strictly below every neighbor within a Chebyshev radius.

    Equal-valued plateaus count as one minimum, reported at the
    lexicographically smallest member, provided no cell reachable through the
    plateau sees a smaller neighbor.  Neighbor values of simplex fields come
    from the symmetric extension, so cells near the diagonal are compared
    against their mirrored surroundings as well.
    """
    if radius < 1:
        raise ValueError("radius must be >= 1")
    if field.dims == 0:
        return []
    dense = field.dense()
    counts = field.counts

    def neighbors(idx):
        ranges = [
            range(max(0, i - radius), min(counts[k], i + radius + 1))
            for k, i in enumerate(idx)
        ]
        for nb in itertools.product(*ranges):
            if nb != idx:
                yield nb

    def coords_of(idx):
        return tuple(
            field.origins[k] + field.resolution * i for k, i in enumerate(idx)
        )

    included = []
    for idx in np.ndindex(*counts):
        coords = coords_of(idx)
        if not field.simplex or all(a <= b for a, b in zip(coords, coords[1:])):
            included.append(idx)

    no_smaller = {}
    for idx in included:
        me = dense[idx]
        no_smaller[idx] = all(dense[nb] >= me for nb in neighbors(idx))

    reported = []
    seen = set()
    for idx in included:
        if idx in seen or not no_smaller[idx]:
            continue
        me = dense[idx]
        # Flood across equal-valued neighbors; a plateau leaking to a cell
        # with a smaller neighbor is not a minimum.
        component = {idx}
        queue = [idx]
        valid = True
        has_uphill = False
        while queue:
            cur = queue.pop()
            for nb in neighbors(cur):
                if dense[nb] > me:
                    has_uphill = True
                if dense[nb] == me and nb not in component:
                    component.add(nb)
                    if not no_smaller.get(nb, all(dense[x] >= me for x in neighbors(nb))):
                        valid = False
                    queue.append(nb)
        seen |= component
        # A plateau with no strictly greater surroundings (e.g. a constant
        # field) is not a minimum.
        if valid and has_uphill:
            members = sorted(
                coords_of(i)
                for i in component
                if not field.simplex
                or all(a <= b for a, b in zip(coords_of(i), coords_of(i)[1:]))
            )
            if members:
                reported.append((members[0], float(me)))
    reported.sort(key=lambda item: item[0])
    return reported


def slice_field(field: ScalarField, axis: int, value_cents: float) -> ScalarField:
    """Pin one axis at an on-grid value; returns a field of one fewer dims."""
    if not 0 <= axis < field.dims:
        raise ValueError(f"axis {axis} out of range for {field.dims}-d field")
    t = (float(value_cents) - field.origins[axis]) / field.resolution
    if abs(t - round(t)) > 1e-9 or not 0 <= round(t) < field.counts[axis]:
        raise ValueError(f"{value_cents} cents is not on the grid of axis {axis}")

    origins, counts, names = [], [], []
    for k in range(field.dims):
        if k == axis:
            continue
        o, c = field.origins[k], field.counts[k]
        if field.simplex and k < axis:
            c = min(c, int((value_cents - o) // field.resolution) + 1)
        if field.simplex and k > axis:
            drop = int((value_cents - o) // field.resolution)
            o, c = o + drop * field.resolution, c - drop
        origins.append(o)
        counts.append(c)
        names.append(field.axis_names[k])

    values = []
    # Enumerate target cells directly so ordering matches the constructor.
    axes = [
        [o + field.resolution * i for i in range(c)] for o, c in zip(origins, counts)
    ]
    keep_simplex = field.simplex and len(counts) >= 2
    for coords in itertools.product(*axes):
        if keep_simplex and not all(a <= b for a, b in zip(coords, coords[1:])):
            continue
        full = list(coords)
        full.insert(axis, float(value_cents))
        values.append(field.value_at(full))
    return ScalarField(
        resolution=field.resolution,
        origins=tuple(origins),
        counts=tuple(counts),
        simplex=keep_simplex,
        axis_names=tuple(names),
        values=np.asarray(values, dtype=float),
        value_name=field.value_name,
        meta=dict(field.meta, sliced_axis=field.axis_names[axis], sliced_at=value_cents),
    )


# -- serialization ----------------------------------------------------------


def export_csv(field: ScalarField, path) -> None:
    """Write cells as CSV: coordinate columns, then the value at 6 decimals."""
    lines = [",".join(field.axis_names + (field.value_name,))]
    for coords, v in zip(field.cells if field.dims else [()], field.values.reshape(-1)):
        parts = [_fmt_coord(c) for c in coords]
        parts.append(f"{float(v):.6f}")
        lines.append(",".join(parts))
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("\n".join(lines) + "\n")


def import_csv(path) -> ScalarField:
    """Rebuild a field from :func:`export_csv` output.

    Grid structure (origins, counts, resolution, simplex flag) is inferred
    from the coordinate columns.  Malformed rows raise ``ValueError`` with
    the offending line number.
    """
    with open(path, "r", encoding="utf-8") as fh:
        lines = [ln.rstrip("\n") for ln in fh]
    lines = [ln for ln in lines if ln.strip() != ""]
    if not lines:
        raise ValueError(f"{path}: line 1: empty file")
    header = lines[0].split(",")
    if len(header) < 1:
        raise ValueError(f"{path}: line 1: malformed header")
    axis_names = tuple(header[:-1])
    value_name = header[-1]
    dims = len(axis_names)

    coords_rows: list[tuple[float, ...]] = []
    values: list[float] = []
    for lineno, ln in enumerate(lines[1:], start=2):
        parts = ln.split(",")
        if len(parts) != dims + 1:
            raise ValueError(
                f"{path}: line {lineno}: expected {dims + 1} columns, got {len(parts)}"
            )
        try:
            coords_rows.append(tuple(float(p) for p in parts[:-1]))
            values.append(float(parts[-1]))
        except ValueError:
            raise ValueError(f"{path}: line {lineno}: malformed number") from None

    if dims == 0:
        if len(values) != 1:
            raise ValueError(f"{path}: expected exactly one value row for 0-d field")
        return ScalarField(
            resolution=1, origins=(), counts=(), simplex=False, axis_names=(),
            values=np.asarray(values), value_name=value_name, meta={},
        )

    uniques = [sorted(set(c[k] for c in coords_rows)) for k in range(dims)]
    steps = [
        min(b - a for a, b in zip(u, u[1:])) for u in uniques if len(u) >= 2
    ]
    resolution = int(round(min(steps))) if steps else 1
    origins = tuple(u[0] for u in uniques)
    counts = tuple(int(round((u[-1] - u[0]) / resolution)) + 1 for u in uniques)

    box_count = int(np.prod(counts))
    simplex = dims >= 2 and len(coords_rows) < box_count
    try:
        fld = ScalarField(
            resolution=resolution,
            origins=origins,
            counts=counts,
            simplex=simplex,
            axis_names=axis_names,
            values=np.asarray(values),
            value_name=value_name,
            meta={},
        )
    except ValueError as exc:
        raise ValueError(
            f"{path}: row count {len(coords_rows)} does not match the inferred grid ({exc})"
        ) from None
    for lineno, (got, want) in enumerate(zip(coords_rows, fld.cells), start=2):
        if any(abs(a - b) > 1e-6 for a, b in zip(got, want)):
            raise ValueError(
                f"{path}: line {lineno}: coordinates {got} break lexicographic order"
            )
    return fld


def export_matrix(field: ScalarField, path) -> None:
    """Whitespace-separated dense matrix (rows follow the first axis)."""
    if field.dims != 2:
        raise ValueError("matrix export is defined for 2-d fields only")
    dense = field.dense()
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for row in dense:
            fh.write(" ".join(f"{v:.6f}" for v in row) + "\n")
