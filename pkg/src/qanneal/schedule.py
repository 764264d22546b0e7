"""Annealing schedules A(s), B(s) with per-qubit offsets.

A schedule is a table of knots on normalized time s in [0, 1].  A per-qubit
offset delta shifts the schedule argument (s -> s + delta), so negative
offsets delay that qubit's anneal.  Outside the knot range the end segments
are continued linearly; negative amplitudes are clipped to zero.

extend_schedule() prepends and appends a fraction of flat schedule and
renormalizes back to [0, 1].  Offsets keep their original meaning through the
table's offset_scale, and because the added end segments are flat, every
qubit with |delta| <= fraction starts and ends at the common endpoint values.
"""

from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import InputError, ParameterBoundError

DEFAULT_AMPLITUDE = 5.0


@dataclass(eq=False)
class ScheduleTable:
    """Piecewise-linear amplitudes: a = transverse field, b = problem scale."""

    s: np.ndarray
    a: np.ndarray
    b: np.ndarray
    offset_scale: float = 1.0  # multiplies deltas before shifting the argument
    time_dilation: float = 1.0  # total run time relative to the base window
    max_abs_offset: float | None = None  # enforced at simulation time if set

    def __post_init__(self):
        self.s = np.asarray(self.s, dtype=float)
        self.a = np.asarray(self.a, dtype=float)
        self.b = np.asarray(self.b, dtype=float)
        if not (len(self.s) == len(self.a) == len(self.b)):
            raise InputError("schedule columns must have equal length")
        if len(self.s) < 2:
            raise InputError("schedule needs at least two knots")
        if np.any(np.diff(self.s) <= 0):
            raise InputError("schedule knots must be strictly increasing")
        if self.s[0] != 0.0 or self.s[-1] != 1.0:
            raise InputError("schedule knots must span [0, 1]")
        if np.any(self.a < 0) or np.any(self.b < 0):
            raise InputError("schedule amplitudes must be non-negative")
        if np.any(np.diff(self.a) > 0) or np.any(np.diff(self.b) < 0):
            warnings.warn(
                "schedule is not monotone (A should fall, B should rise)",
                stacklevel=3,
            )

    @classmethod
    def linear(
        cls, a_max: float = DEFAULT_AMPLITUDE, b_max: float = DEFAULT_AMPLITUDE
    ) -> "ScheduleTable":
        """A(s) = a_max (1 - s), B(s) = b_max s."""
        return cls(s=[0.0, 1.0], a=[a_max, 0.0], b=[0.0, b_max])

    @classmethod
    def constant_transverse(cls, a_value: float) -> "ScheduleTable":
        """A(s) = a_value, B(s) = 0; used for simulator self-checks."""
        return cls(s=[0.0, 1.0], a=[a_value, a_value], b=[0.0, 0.0])

    @classmethod
    def from_csv(cls, path) -> "ScheduleTable":
        rows = []
        with open(path, newline="") as handle:
            reader = csv.reader(handle)
            header = next(reader, None)
            if header is None or [c.strip() for c in header] != ["s", "A", "B"]:
                raise InputError(f"{path}: expected header 's,A,B'")
            for line in reader:
                if not line:
                    continue
                rows.append([float(v) for v in line])
        if not rows:
            raise InputError(f"{path}: empty schedule")
        data = np.array(rows)
        return cls(s=data[:, 0], a=data[:, 1], b=data[:, 2])

    def to_csv(self, path):
        with open(path, "w", newline="") as handle:
            writer = csv.writer(handle)
            writer.writerow(["s", "A", "B"])
            for row in zip(self.s, self.a, self.b):
                writer.writerow([repr(float(v)) for v in row])

    def _interpolate(self, values: np.ndarray, x: np.ndarray) -> np.ndarray:
        idx = np.clip(np.searchsorted(self.s, x, side="right") - 1, 0, len(self.s) - 2)
        x0, x1 = self.s[idx], self.s[idx + 1]
        t = (x - x0) / (x1 - x0)
        return values[idx] * (1.0 - t) + values[idx + 1] * t

    def evaluate_many(self, s: float, deltas) -> tuple[np.ndarray, np.ndarray]:
        """(A_i, B_i) for one normalized time and a vector of offsets."""
        x = s + np.asarray(deltas, dtype=float) * self.offset_scale
        a = np.maximum(self._interpolate(self.a, x), 0.0)
        b = np.maximum(self._interpolate(self.b, x), 0.0)
        return a, b

    def evaluate(self, s: float, delta: float = 0.0) -> tuple[float, float]:
        a, b = self.evaluate_many(s, [delta])
        return float(a[0]), float(b[0])


def extend_schedule(table: ScheduleTable, fraction: float = 0.1) -> ScheduleTable:
    """Add a flat head and tail of the given fraction and renormalize to [0, 1].

    The returned table runs (1 + 2 fraction) times longer and rescales offsets
    internally, so callers keep expressing deltas in the original units.
    Offsets beyond the fraction are rejected at simulation time because they
    would leave the flat region and reintroduce endpoint systematics.
    """
    if not 0.0 < fraction < 1.0:
        raise ParameterBoundError("extension fraction must be in (0, 1)")
    stretch = 1.0 + 2.0 * fraction
    knots = np.concatenate(([0.0], (table.s + fraction) / stretch, [1.0]))
    a = np.concatenate(([table.a[0]], table.a, [table.a[-1]]))
    b = np.concatenate(([table.b[0]], table.b, [table.b[-1]]))
    return ScheduleTable(
        s=knots,
        a=a,
        b=b,
        offset_scale=table.offset_scale / stretch,
        time_dilation=table.time_dilation * stretch,
        max_abs_offset=fraction if table.max_abs_offset is None
        else min(fraction, table.max_abs_offset),
    )


OFFSET_MODES = ("s", "w", "none")


@dataclass
class OffsetAssignment:
    """Per-qubit schedule offsets plus the group label each qubit fell in."""

    delta: tuple[float, ...]
    groups: tuple[str, ...] = field(default=None)  # "strong" | "weak" | "none"

    def __post_init__(self):
        self.delta = tuple(float(d) for d in self.delta)
        if self.groups is None:
            self.groups = ("none",) * len(self.delta)
        self.groups = tuple(self.groups)
        if len(self.groups) != len(self.delta):
            raise InputError("group labels must match delta length")

    @classmethod
    def zeros(cls, n: int) -> "OffsetAssignment":
        return cls(delta=(0.0,) * n)

    @classmethod
    def explicit(cls, delta, allow_positive: bool = False) -> "OffsetAssignment":
        delta = tuple(float(d) for d in delta)
        if not allow_positive and any(d > 0 for d in delta):
            raise ParameterBoundError(
                "positive offsets require allow_positive=True"
            )
        return cls(delta=delta)

    @property
    def num_qubits(self) -> int:
        return len(self.delta)

    def max_magnitude(self) -> float:
        return max((abs(d) for d in self.delta), default=0.0)


def assign_offsets(
    strong: set[int],
    weak: set[int],
    magnitude: float,
    mode: str,
    allow_positive: bool = False,
) -> OffsetAssignment:
    """Delay one field group by `magnitude` (mode "s" = strong, "w" = weak)."""
    if mode not in OFFSET_MODES:
        raise InputError(f"offset mode must be one of {OFFSET_MODES}")
    n = len(strong) + len(weak)
    if strong & weak or set(range(n)) != strong | weak:
        raise InputError("strong/weak groups must partition the qubits")
    magnitude = float(magnitude)
    if magnitude > 0 and not allow_positive:
        raise ParameterBoundError(
            "positive offsets require allow_positive=True"
        )
    groups = tuple("strong" if q in strong else "weak" for q in range(n))
    if mode == "none":
        delta = (0.0,) * n
    elif mode == "s":
        delta = tuple(magnitude if q in strong else 0.0 for q in range(n))
    else:
        delta = tuple(magnitude if q in weak else 0.0 for q in range(n))
    return OffsetAssignment(delta=delta, groups=groups)
