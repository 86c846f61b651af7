"""Step functions, distribution functions and decreasing rearrangements.

Functions with finitely many values on sets of finite measure are modelled
exactly: rearrangement, distribution and averaged rearrangement involve only
sorting and partial sums.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Iterable

import numpy as np

from .youngfn import DomainError


class InputFormatError(ValueError):
    """Malformed step-function or grid input; carries a line and column."""

    def __init__(self, message: str, line: int, column: int, source: str = "<input>"):
        super().__init__(f"{source}:{line}:{column}: {message}")
        self.line = line
        self.column = column
        self.source = source


@dataclass(frozen=True)
class MeasureStepFunction:
    """Finite list of (value, measure) cells. No cells means the zero function."""

    values: tuple[float, ...]
    measures: tuple[float, ...]
    ambient_dim: int = 1

    def __post_init__(self):
        if len(self.values) != len(self.measures):
            raise ValueError("values and measures differ in length")
        for v in self.values:
            if not (math.isfinite(v) and v >= 0):
                raise ValueError(f"cell values must be finite and >= 0, got {v}")
        for m in self.measures:
            if not (math.isfinite(m) and m > 0):
                raise ValueError(f"cell measures must be finite and > 0, got {m}")
        if self.ambient_dim < 1:
            raise ValueError("ambient_dim must be a positive integer")

    @classmethod
    def from_cells(cls, cells: Iterable[tuple[float, float]], ambient_dim: int = 1):
        cells = list(cells)
        return cls(
            tuple(float(v) for v, _ in cells),
            tuple(float(m) for _, m in cells),
            ambient_dim,
        )

    @classmethod
    def indicator(cls, measure: float) -> "MeasureStepFunction":
        return cls((1.0,), (float(measure),))

    @classmethod
    def zero(cls) -> "MeasureStepFunction":
        return cls((), ())

    @property
    def cells(self) -> list[tuple[float, float]]:
        return list(zip(self.values, self.measures))

    def scaled(self, c: float) -> "MeasureStepFunction":
        """c |f| for c >= 0."""
        return MeasureStepFunction(tuple(c * v for v in self.values), self.measures, self.ambient_dim)

    def dilated(self, s: float) -> "MeasureStepFunction":
        """f(x / s^(1/n)): every cell measure is multiplied by s."""
        return MeasureStepFunction(self.values, tuple(s * m for m in self.measures), self.ambient_dim)

    def total_measure(self) -> float:
        return float(sum(self.measures))


@dataclass(frozen=True)
class RearrangementStep:
    """Non-increasing right-continuous step on (0, inf).

    ``values[j]`` holds on [breakpoints[j], breakpoints[j+1]); the function
    is zero from breakpoints[-1] on. ``rearrangement`` always produces
    strictly decreasing positive levels; hand-built steps may repeat a value.
    """

    breakpoints: tuple[float, ...]
    values: tuple[float, ...]

    def __post_init__(self):
        if not self.values:
            if self.breakpoints not in ((), (0.0,)):
                raise ValueError("empty rearrangement must have no pieces")
            return
        if len(self.breakpoints) != len(self.values) + 1 or self.breakpoints[0] != 0.0:
            raise ValueError("breakpoints must be 0 = t0 < t1 < ... < tm, one more than values")
        if any(b <= a for a, b in zip(self.breakpoints, self.breakpoints[1:])):
            raise ValueError("breakpoints must be strictly increasing")
        if any(b > a for a, b in zip(self.values, self.values[1:])) or self.values[-1] < 0:
            raise ValueError("values must be non-increasing and non-negative")

    @classmethod
    def from_pieces(cls, pieces: Iterable[tuple[float, float]]) -> "RearrangementStep":
        """Build from (value, length) pieces given in order from t = 0."""
        bps = [0.0]
        vals = []
        for v, length in pieces:
            bps.append(bps[-1] + float(length))
            vals.append(float(v))
        return cls(tuple(bps), tuple(vals))

    @property
    def is_zero(self) -> bool:
        return not self.values

    @property
    def lengths(self) -> np.ndarray:
        return np.diff(np.asarray(self.breakpoints, dtype=float))

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        if not self.values:
            return np.zeros_like(t) if t.ndim else 0.0
        bps = np.asarray(self.breakpoints)
        vals = np.append(np.asarray(self.values), 0.0)
        idx = np.searchsorted(bps, t, side="right") - 1
        out = vals[np.clip(idx, 0, len(vals) - 1)]
        return out if t.ndim else float(out)

    def distribution(self, lam: float) -> float:
        """Lebesgue measure of {s > 0 : f*(s) > lam}."""
        if lam < 0:
            raise DomainError("distribution level must be >= 0")
        total = 0.0
        for v, length in zip(self.values, self.lengths):
            if v > lam:
                total += float(length)
        return total

    def integral(self, t: float) -> float:
        """Integral of the step over (0, t)."""
        acc = 0.0
        for v, a, b in zip(self.values, self.breakpoints, self.breakpoints[1:]):
            if t <= a:
                break
            acc += v * (min(b, t) - a)
        return acc


def distribution(f: MeasureStepFunction, t: float) -> float:
    """m(f, t): total measure of the cells whose value exceeds t."""
    if not t >= 0:
        raise DomainError(f"distribution level must be >= 0, got {t}")
    return float(sum(m for v, m in zip(f.values, f.measures) if v > t))


def rearrangement(f: MeasureStepFunction) -> RearrangementStep:
    """Decreasing rearrangement; equal values merge into one level."""
    levels: dict[float, float] = {}
    for v, m in zip(f.values, f.measures):
        if v > 0:
            levels[v] = levels.get(v, 0.0) + m
    if not levels:
        return RearrangementStep((), ())
    ordered = sorted(levels.items(), key=lambda kv: -kv[0])
    return RearrangementStep.from_pieces(ordered)


def radial_profile_nd(g: RearrangementStep, n: int) -> MeasureStepFunction:
    """Cells of x -> g(nu_n |x|^n) on the shells where it is constant.

    The shell between radii with nu_n r^n = t_{j-1} and t_j has measure
    t_j - t_{j-1}, so the unit-ball volume never has to be evaluated.
    """
    if n < 1:
        raise DomainError("dimension must be a positive integer")
    cells = [(v, float(length)) for v, length in zip(g.values, g.lengths) if v > 0]
    return MeasureStepFunction.from_cells(cells, ambient_dim=n)


def averaged_rearrangement(f: MeasureStepFunction | RearrangementStep, t: float) -> float:
    """f**(t) = (1/t) times the integral of f* over (0, t)."""
    if not t > 0:
        raise DomainError(f"f** is defined for t > 0, got {t}")
    r = f if isinstance(f, RearrangementStep) else rearrangement(f)
    return r.integral(t) / t


def rearrangement_pairing(f: RearrangementStep, g: RearrangementStep) -> float:
    """Integral over (0, inf) of f*(t) g*(t), exact for step functions."""
    if f.is_zero or g.is_zero:
        return 0.0
    edges = np.union1d(f.breakpoints, g.breakpoints)
    mids = 0.5 * (edges[:-1] + edges[1:])
    return float(np.sum(f(mids) * g(mids) * np.diff(edges)))


@dataclass(frozen=True)
class GridFunction1D:
    """Piecewise constant on cells [origin + i w, origin + (i+1) w); zero outside."""

    origin: float
    cell_width: float
    samples: tuple[float, ...]

    def __post_init__(self):
        if not (self.cell_width > 0 and math.isfinite(self.cell_width)):
            raise ValueError("cell_width must be positive and finite")
        if not math.isfinite(self.origin):
            raise ValueError("origin must be finite")
        for s in self.samples:
            if not (math.isfinite(s) and s >= 0):
                raise ValueError(f"grid samples must be finite and >= 0, got {s}")

    @classmethod
    def from_array(cls, samples, origin: float = 0.0, cell_width: float = 1.0):
        return cls(float(origin), float(cell_width), tuple(float(x) for x in np.asarray(samples).ravel()))

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.samples, dtype=float)

    @property
    def edges(self) -> np.ndarray:
        return self.origin + self.cell_width * np.arange(len(self.samples) + 1)

    @property
    def midpoints(self) -> np.ndarray:
        return self.origin + self.cell_width * (np.arange(len(self.samples)) + 0.5)

    def padded(self, left: int, right: int) -> "GridFunction1D":
        """Same function on a grid extended by zero cells on each side."""
        arr = np.concatenate([np.zeros(left), self.array, np.zeros(right)])
        return GridFunction1D.from_array(arr, self.origin - left * self.cell_width, self.cell_width)

    def scaled(self, c: float) -> "GridFunction1D":
        return GridFunction1D.from_array(c * self.array, self.origin, self.cell_width)

    def to_step(self) -> MeasureStepFunction:
        cells = [(v, self.cell_width) for v in self.samples if v > 0]
        return MeasureStepFunction.from_cells(cells)

    def same_geometry(self, other: "GridFunction1D") -> bool:
        return (
            self.origin == other.origin
            and self.cell_width == other.cell_width
            and len(self.samples) == len(other.samples)
        )


def grid_product_integral(f: GridFunction1D, g: GridFunction1D) -> float:
    """Integral of |f g| on a shared grid."""
    if not f.same_geometry(g):
        raise DomainError("grid functions must share geometry")
    return float(np.sum(f.array * g.array) * f.cell_width)


# --- CSV formats -----------------------------------------------------------


def _parse_number(cell: str, line: int, col: int, source: str) -> float:
    try:
        x = float(cell.strip())
    except ValueError:
        raise InputFormatError(f"expected a number, got {cell.strip()!r}", line, col, source) from None
    if not math.isfinite(x):
        raise InputFormatError(f"expected a finite number, got {cell.strip()!r}", line, col, source)
    return x


def _rows(text: str):
    for lineno, row in enumerate(csv.reader(io.StringIO(text)), start=1):
        if row and any(c.strip() for c in row):
            yield lineno, row


def _check_header(row, expected, line, source):
    names = [c.strip().lower() for c in row]
    if names != list(expected):
        raise InputFormatError(f"expected header {','.join(expected)!r}", line, 1, source)


def parse_step_csv(text: str, source: str = "<input>") -> MeasureStepFunction:
    """Header ``value,measure`` then one cell per row."""
    rows = list(_rows(text))
    if not rows:
        raise InputFormatError("empty file; expected header value,measure", 1, 1, source)
    _check_header(rows[0][1], ("value", "measure"), rows[0][0], source)
    values, measures = [], []
    for line, row in rows[1:]:
        if len(row) != 2:
            raise InputFormatError(f"expected 2 fields, got {len(row)}", line, 1, source)
        v = _parse_number(row[0], line, 1, source)
        m = _parse_number(row[1], line, len(row[0]) + 2, source)
        if v < 0:
            raise InputFormatError("value must be >= 0", line, 1, source)
        if m <= 0:
            raise InputFormatError("measure must be > 0", line, len(row[0]) + 2, source)
        values.append(v)
        measures.append(m)
    return MeasureStepFunction(tuple(values), tuple(measures))


def format_step_csv(f: MeasureStepFunction) -> str:
    lines = ["value,measure"] + [f"{v!r},{m!r}" for v, m in zip(f.values, f.measures)]
    return "\n".join(lines) + "\n"


def parse_grid_csv(text: str, source: str = "<input>") -> GridFunction1D:
    """Header ``origin,cell_width``, a row with those two numbers, then one sample per row."""
    rows = list(_rows(text))
    if not rows:
        raise InputFormatError("empty file; expected header origin,cell_width", 1, 1, source)
    _check_header(rows[0][1], ("origin", "cell_width"), rows[0][0], source)
    if len(rows) < 2:
        raise InputFormatError("missing origin,cell_width row", rows[0][0] + 1, 1, source)
    line, geo = rows[1]
    if len(geo) != 2:
        raise InputFormatError(f"expected 2 fields, got {len(geo)}", line, 1, source)
    origin = _parse_number(geo[0], line, 1, source)
    width = _parse_number(geo[1], line, len(geo[0]) + 2, source)
    if width <= 0:
        raise InputFormatError("cell_width must be > 0", line, len(geo[0]) + 2, source)
    samples = []
    for line, row in rows[2:]:
        if len(row) != 1:
            raise InputFormatError(f"expected 1 field, got {len(row)}", line, 1, source)
        s = _parse_number(row[0], line, 1, source)
        if s < 0:
            raise InputFormatError("samples must be >= 0", line, 1, source)
        samples.append(s)
    return GridFunction1D(origin, width, tuple(samples))


def format_grid_csv(f: GridFunction1D) -> str:
    lines = ["origin,cell_width", f"{f.origin!r},{f.cell_width!r}"] + [repr(s) for s in f.samples]
    return "\n".join(lines) + "\n"
