"""Hardy-Littlewood maximal operators on grid functions and weight criteria.

One dimension is handled exactly: for x in a cell, the supremum of interval
averages is attained with endpoints on the grid, and any interval containing
x splits into a left and a right part, so

    Mf(x) = max( max_L avg[L, x],  max_R avg[x, R] )

where both one-sided sups run over grid points (and x itself for the
degenerate side). Prefix sums make each evaluation O(N). The oracle mode
enumerates every pair of breakpoints instead, with averages built from a
cell-overlap matrix rather than prefix sums.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

import numpy as np

from . import quadrature
from .rearrange import (
    GridFunction1D,
    InputFormatError,
    MeasureStepFunction,
    RearrangementStep,
    averaged_rearrangement,
    rearrangement,
)
from .youngfn import INF, DomainError

MODES = ("exact", "oracle")
_ROWS = 256  # evaluation points per block in the exact mode


# --- one dimension ---------------------------------------------------------------


def _cumulative(f: GridFunction1D) -> tuple[np.ndarray, np.ndarray]:
    # extended precision keeps prefix-sum cancellation far below 1e-12
    edges = f.edges.astype(np.longdouble)
    F = np.concatenate([[0.0], np.cumsum(f.array.astype(np.longdouble) * f.cell_width)])
    return edges, F


def _one_sided(edges: np.ndarray, F: np.ndarray, x: np.ndarray, Fx: np.ndarray, vals: np.ndarray):
    """max over grid points L < x of avg[L, x] and over R > x of avg[x, R].

    ``vals`` is the value of f at x (the limit of shrinking intervals).
    """
    with np.errstate(divide="ignore", invalid="ignore"):
        left = (Fx[:, None] - F[None, :]) / (x[:, None] - edges[None, :])
        right = (F[None, :] - Fx[:, None]) / (edges[None, :] - x[:, None])
    left = np.where(edges[None, :] < x[:, None], left, -INF)
    right = np.where(edges[None, :] > x[:, None], right, -INF)
    best = np.maximum(np.maximum(left.max(axis=1), right.max(axis=1)), vals)
    return best.astype(float)


def maximal_at(f: GridFunction1D, x) -> np.ndarray:
    """Uncentered maximal function at arbitrary points x (exact)."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if not f.samples:
        return np.zeros_like(x)
    edges, F = _cumulative(f)
    xl = x.astype(np.longdouble)
    idx = np.searchsorted(f.edges, x, side="right") - 1
    inside = (idx >= 0) & (idx < len(f.samples))
    cell = np.clip(idx, 0, len(f.samples) - 1)
    vals = np.where(inside, f.array[cell], 0.0)
    # F at x: prefix sum up to the cell plus the partial cell
    Fx = np.where(idx < 0, 0.0, F[cell] + vals.astype(np.longdouble) * (xl - edges[cell]))
    Fx = np.where(idx >= len(f.samples), F[-1], Fx)
    out = np.empty(x.size)
    for i in range(0, x.size, _ROWS):
        sl = slice(i, i + _ROWS)
        out[sl] = _one_sided(edges, F, xl[sl], Fx[sl], vals[sl])
    return out


def _oracle(f: GridFunction1D) -> np.ndarray:
    """Brute force over all intervals [a, b] containing the midpoint x.

    Endpoints range over the grid breakpoints together with x itself (an
    interval may stop at x). Integrals are cell-overlap sums, never prefix
    sums, so the two modes share no arithmetic shortcut.
    """
    edges = f.edges
    vals = f.array
    out = np.empty(len(vals))
    for k, x in enumerate(f.midpoints):
        pts = np.append(edges, x)
        a = pts[pts <= x]
        b = pts[pts >= x]
        A, B = np.meshgrid(a, b, indexing="ij")
        overlap = np.clip(
            np.minimum(B[..., None], edges[None, None, 1:]) - np.maximum(A[..., None], edges[None, None, :-1]),
            0.0,
            None,
        )
        integral = overlap @ vals
        length = B - A
        with np.errstate(divide="ignore", invalid="ignore"):
            avg = np.where(length > 0, integral / length, -INF)
        out[k] = max(float(avg.max()), float(vals[k]))
    return out


def maximal_1d(f: GridFunction1D, mode: str = "exact") -> GridFunction1D:
    """Mf sampled at the cell midpoints of f's grid.

    Pad f with zero cells first to see Mf outside the support.
    """
    if mode not in MODES:
        raise DomainError(f"mode must be one of {MODES}, got {mode!r}")
    if not f.samples or not np.any(f.array > 0):
        return GridFunction1D(f.origin, f.cell_width, tuple(0.0 for _ in f.samples))
    if mode == "exact":
        out = maximal_at(f, f.midpoints)
    else:
        out = _oracle(f)
    return GridFunction1D.from_array(out, f.origin, f.cell_width)


# --- dyadic n-D ------------------------------------------------------------------


@dataclass(frozen=True)
class GridFieldND:
    """Dyadic grid field: ``side`` = 2^k cells per axis in ``dim`` dimensions."""

    samples: np.ndarray
    cell_volume: float = 1.0

    def __post_init__(self):
        a = np.asarray(self.samples, dtype=float)
        if a.ndim not in (1, 2, 3):
            raise ValueError("dim must be 1, 2 or 3")
        side = a.shape[0]
        if any(s != side for s in a.shape):
            raise ValueError("all axes must have the same number of cells")
        if side < 1 or side & (side - 1):
            raise ValueError(f"side must be a power of two, got {side}")
        if not np.all(np.isfinite(a)) or np.any(a < 0):
            raise ValueError("samples must be finite and >= 0")
        if not (self.cell_volume > 0 and math.isfinite(self.cell_volume)):
            raise ValueError("cell_volume must be positive and finite")
        a.setflags(write=False)
        object.__setattr__(self, "samples", a)

    @property
    def dim(self) -> int:
        return self.samples.ndim

    @property
    def side(self) -> int:
        return self.samples.shape[0]

    def to_step(self) -> MeasureStepFunction:
        flat = self.samples.ravel()
        flat = flat[flat > 0]
        return MeasureStepFunction(tuple(flat.tolist()), tuple([self.cell_volume] * flat.size), self.dim)


def _coarsen(a: np.ndarray) -> np.ndarray:
    """Average over 2x...x2 blocks."""
    n = a.ndim
    shape = []
    for s in a.shape:
        shape += [s // 2, 2]
    b = a.reshape(shape)
    return b.mean(axis=tuple(range(1, 2 * n, 2)))


def _expand(a: np.ndarray, factor: int) -> np.ndarray:
    for axis in range(a.ndim):
        a = np.repeat(a, factor, axis=axis)
    return a


def dyadic_maximal(f: GridFieldND) -> GridFieldND:
    """Max over the dyadic ancestors of each cell of the ancestor's average."""
    level = np.asarray(f.samples, dtype=float)
    best = level.copy()
    factor = 1
    while level.shape[0] > 1:
        level = _coarsen(level)
        factor *= 2
        best = np.maximum(best, _expand(level, factor))
    return GridFieldND(best, f.cell_volume)


def grid_to_field(f: GridFunction1D) -> GridFieldND:
    n = len(f.samples)
    side = 1 << max(0, (n - 1).bit_length())
    arr = np.concatenate([f.array, np.zeros(side - n)])
    return GridFieldND(arr, f.cell_width)


def parse_field_csv(text: str, source: str = "<input>") -> GridFieldND:
    """Header ``dim,side,cell_volume``, a row with those values, then samples row-major."""
    rows = [(i, r) for i, r in enumerate(csv.reader(io.StringIO(text)), start=1) if r and any(c.strip() for c in r)]
    if not rows:
        raise InputFormatError("empty file; expected header dim,side,cell_volume", 1, 1, source)
    line, head = rows[0]
    if [c.strip().lower() for c in head] != ["dim", "side", "cell_volume"]:
        raise InputFormatError("expected header 'dim,side,cell_volume'", line, 1, source)
    if len(rows) < 2:
        raise InputFormatError("missing dim,side,cell_volume row", line + 1, 1, source)
    line, geo = rows[1]
    if len(geo) != 3:
        raise InputFormatError(f"expected 3 fields, got {len(geo)}", line, 1, source)
    try:
        dim, side = int(geo[0]), int(geo[1])
    except ValueError:
        raise InputFormatError("dim and side must be integers", line, 1, source) from None
    try:
        vol = float(geo[2])
    except ValueError:
        raise InputFormatError("cell_volume must be a number", line, len(geo[0]) + len(geo[1]) + 3, source) from None
    values = []
    for line, row in rows[2:]:
        col = 1
        for cell in row:
            try:
                values.append(float(cell))
            except ValueError:
                raise InputFormatError(f"expected a number, got {cell.strip()!r}", line, col, source) from None
            col += len(cell) + 1
    if dim not in (1, 2, 3):
        raise InputFormatError("dim must be 1, 2 or 3", rows[1][0], 1, source)
    if len(values) != side**dim:
        raise InputFormatError(f"expected {side**dim} samples, got {len(values)}", rows[-1][0], 1, source)
    try:
        return GridFieldND(np.asarray(values).reshape((side,) * dim), vol)
    except ValueError as exc:
        raise InputFormatError(str(exc), rows[1][0], 1, source) from None


def format_field_csv(f: GridFieldND) -> str:
    lines = ["dim,side,cell_volume", f"{f.dim},{f.side},{f.cell_volume!r}"]
    lines += [repr(float(v)) for v in f.samples.ravel()]
    return "\n".join(lines) + "\n"


# --- vector-valued -----------------------------------------------------------------


@dataclass(frozen=True)
class VectorField:
    members: tuple

    def __post_init__(self):
        if not self.members:
            raise ValueError("a vector field needs at least one member")
        first = self.members[0]
        for m in self.members[1:]:
            if type(m) is not type(first):
                raise ValueError("members must share geometry")
            if isinstance(first, GridFunction1D) and not first.same_geometry(m):
                raise ValueError("members must share geometry")
            if isinstance(first, GridFieldND) and (
                m.samples.shape != first.samples.shape or m.cell_volume != first.cell_volume
            ):
                raise ValueError("members must share geometry")


def aggregate(arrays: list[np.ndarray], q: float) -> np.ndarray:
    """Pointwise l^q aggregate; q = inf is the pointwise sup."""
    if not q > 0:
        raise DomainError(f"q must be positive, got {q}")
    stack = np.stack(arrays)
    if math.isinf(q):
        return stack.max(axis=0)
    with np.errstate(over="ignore"):
        return (stack**q).sum(axis=0) ** (1.0 / q)


def vector_maximal(fs: VectorField, q: float, mode: str = "exact"):
    """(sum_j (M f_j)^q)^(1/q) cellwise; ``mode`` = exact | oracle | dyadic."""
    if not q > 0:
        raise DomainError(f"q must be positive, got {q}")
    first = fs.members[0]
    if isinstance(first, GridFieldND) or mode == "dyadic":
        fields = [m if isinstance(m, GridFieldND) else grid_to_field(m) for m in fs.members]
        out = aggregate([dyadic_maximal(m).samples for m in fields], q)
        return GridFieldND(out, fields[0].cell_volume)
    out = aggregate([maximal_1d(m, mode).array for m in fs.members], q)
    return GridFunction1D.from_array(out, first.origin, first.cell_width)


# --- weight criteria -------------------------------------------------------------------


@dataclass(frozen=True)
class CriterionResult:
    sup_ratio: float
    per_r: tuple[tuple[float, float], ...]

    def to_dict(self) -> dict:
        def num(x):
            return "inf" if x == INF else x

        return {"sup_ratio": num(self.sup_ratio), "per_r": [[r, num(v)] for r, v in self.per_r]}


def weight_criterion_q(w, q: float, r_grid) -> CriterionResult:
    """Ratio of  int_r^inf (w(t)/t)^q dt/t  to  r^{-q} int_0^r w(t)^q dt/t.

    Tails are taken once, beyond the largest and below the smallest r; the
    pieces between consecutive grid points are shared by every r. A
    divergent tail makes every ratio inf.
    """
    if not (q > 0 and math.isfinite(q)):
        raise DomainError("q must be positive and finite")
    r_in = np.asarray(r_grid, dtype=float).ravel()
    if r_in.size == 0 or np.any(~(r_in > 0)):
        raise DomainError("r_grid must be non-empty and positive")
    rs = np.unique(r_in)

    def upper_g(t):
        return (np.asarray(w(t), dtype=float) / t) ** q

    def lower_g(t):
        return np.asarray(w(t), dtype=float) ** q

    top_tail = quadrature.log_tail(upper_g, rs[-1], toward="inf")
    bottom_tail = quadrature.log_tail(lower_g, rs[0], toward="zero")
    if top_tail.diverged or bottom_tail.diverged:
        ratios = np.full(rs.size, INF)
    else:
        if rs.size > 1:
            up, _ = quadrature.integrate_dt_over_t(upper_g, rs[:-1], rs[1:])
            lo, _ = quadrature.integrate_dt_over_t(lower_g, rs[:-1], rs[1:])
        else:
            up = lo = np.zeros(0)
        top = top_tail.value + np.concatenate([np.cumsum(up[::-1])[::-1], [0.0]])
        bottom = bottom_tail.value + np.concatenate([[0.0], np.cumsum(lo)])
        denom = bottom / rs**q
        with np.errstate(divide="ignore", invalid="ignore"):
            ratios = np.where(denom > 0, top / denom, INF)
    lookup = dict(zip(rs.tolist(), ratios.tolist()))
    per_r = tuple((float(r), float(lookup[float(r)])) for r in r_in)
    return CriterionResult(float(ratios.max()), per_r)


def weight_criterion_inf(w, t_grid, per_decade: int = 64) -> float:
    """sup over t of (w(t)/t) int_0^t ds / sup_{tau < s} w(tau).

    For a non-decreasing w the running sup is w and the inner integral is
    done by adaptive quadrature. Otherwise the running sup is taken on a log
    refinement grid reaching eight decades below the smallest t, and the
    head (0, s_0) is a log tail of s / w(s), treating w as monotone there.
    """
    t_grid = np.asarray(t_grid, dtype=float)
    if t_grid.size == 0 or np.any(t_grid <= 0):
        raise DomainError("t_grid must be non-empty and positive")
    ts = np.unique(t_grid)
    if getattr(w, "monotone", False):
        # the running sup is w itself: adaptive quadrature between grid points
        def g(x):
            return x / np.asarray(w(x), dtype=float)

        head = quadrature.log_tail(g, ts[0], toward="zero")
        if head.diverged:
            return INF
        body, _ = quadrature.integrate_dt_over_t(g, ts[:-1], ts[1:]) if ts.size > 1 else (np.zeros(0), None)
        cum = head.value + np.concatenate([[0.0], np.cumsum(body)])
    else:
        lo = math.log10(ts[0]) - 8
        n = max(2, int(math.ceil((math.log10(ts[-1]) - lo) * per_decade)) + 1)
        s = np.union1d(np.logspace(lo, math.log10(ts[-1]), n), ts)
        run = np.maximum.accumulate(np.asarray(w(s), dtype=float))
        head = quadrature.log_tail(lambda x: x / np.asarray(w(x), dtype=float), s[0], toward="zero")
        if head.diverged:
            return INF
        f = s / run
        cum_all = np.concatenate([[0.0], np.cumsum(0.5 * (f[1:] + f[:-1]) * np.diff(np.log(s)))]) + head.value
        cum = cum_all[np.searchsorted(s, ts)]
    vals = np.asarray(w(ts), dtype=float) / ts * cum
    return float(vals.max())


# --- Herz relation -----------------------------------------------------------------------


def maximal_rearrangement(f: GridFunction1D, pad: int | None = None) -> RearrangementStep:
    """(Mf)* from Mf sampled on a padded grid (pads with zero cells on both sides)."""
    n = len(f.samples)
    pad = 4 * n if pad is None else pad
    g = f.padded(pad, pad)
    m = maximal_1d(g).array
    return rearrangement(MeasureStepFunction(tuple(m[m > 0].tolist()), tuple([f.cell_width] * int(np.sum(m > 0)))))


def herz_ratio(f: GridFunction1D, t_grid, pad: int | None = None) -> list[tuple[float, float]]:
    """(Mf)*(t) / f**(t) at each t; Mf is sampled at the cell midpoints of a padded grid."""
    step = f.to_step()
    if not step.values:
        raise DomainError("Herz ratio is undefined for the zero function")
    mstar = maximal_rearrangement(f, pad)
    fstar = rearrangement(step)
    out = []
    for t in np.asarray(t_grid, dtype=float):
        out.append((float(t), float(mstar(t)) / averaged_rearrangement(fstar, float(t))))
    return out
