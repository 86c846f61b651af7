"""Quadrature helpers shared by the norm evaluators and weight criteria.

Integrals against dt/t are computed in x = log t. ``adaptive_simpson``
handles many intervals at once and reports an error bound per interval;
``log_tail`` integrates out to t -> 0 or t -> inf in chunks of doubling
log-length and decides convergence from the chunk increments.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass
from typing import Callable

import numpy as np

DEFAULT_RTOL = 1e-8
MAX_ROUNDS = 48
MAX_CHUNKS = 60
# chunk increments shrinking slower than this ratio read as divergence
DIVERGENCE_RATIO = 0.97
CONVERGED_RTOL = 1e-14
CHUNK_BATCH = 4
LOG_FLOOR = -690.0
LOG_CEIL = 690.0


def default_rtol() -> float:
    """Relative quadrature target, overridable through ORLICZ_KIT_TOL."""
    raw = os.environ.get("ORLICZ_KIT_TOL")
    if raw:
        try:
            val = float(raw)
        except ValueError:
            raise ValueError(f"ORLICZ_KIT_TOL must be a number, got {raw!r}") from None
        if val > 0:
            return val
    return DEFAULT_RTOL


def _simpson(fa, fm, fb, h):
    return h / 6.0 * (fa + 4.0 * fm + fb)


def adaptive_simpson(g: Callable, a, b, rtol: float | None = None):
    """Integrate a vectorized ``g`` over each [a_i, b_i].

    Returns (values, errors); errors are |S2 - S1| summed over accepted
    leaves, fifteen times the usual Richardson estimate. Local acceptance is
    relative to the leaf, which bounds the total relative error for the
    non-negative integrands used in this package.
    """
    rtol = default_rtol() if rtol is None else rtol
    a = np.atleast_1d(np.asarray(a, dtype=float))
    b = np.atleast_1d(np.asarray(b, dtype=float))
    total = np.zeros(a.shape)
    err = np.zeros(a.shape)
    owner = np.arange(a.size)
    keep = b > a
    owner, lo, hi = owner[keep], a[keep], b[keep]
    if owner.size == 0:
        return total, err

    def G(x):
        with np.errstate(over="ignore", invalid="ignore"):
            return np.asarray(g(x), dtype=float)

    mid = 0.5 * (lo + hi)
    flo, fmid, fhi = G(lo), G(mid), G(hi)
    whole = _simpson(flo, fmid, fhi, hi - lo)
    for depth in range(MAX_ROUNDS):
        q1 = 0.5 * (lo + mid)
        q3 = 0.5 * (mid + hi)
        fq1, fq3 = G(q1), G(q3)
        left = _simpson(flo, fq1, fmid, mid - lo)
        right = _simpson(fmid, fq3, fhi, hi - mid)
        s2 = left + right
        diff = np.abs(s2 - whole)
        bad = ~np.isfinite(s2)
        done = (diff <= 15.0 * rtol * np.abs(s2)) | (diff <= 1e-300) | bad
        if depth == MAX_ROUNDS - 1:
            done[:] = True
        if np.any(done):
            val = np.where(bad, np.inf, s2 + (s2 - whole) / 15.0)
            np.add.at(total, owner[done], val[done])
            np.add.at(err, owner[done], np.where(bad[done], 0.0, diff[done]))
        go = ~done
        if not np.any(go):
            break
        owner = np.concatenate([owner[go], owner[go]])
        lo, mid, hi = (
            np.concatenate([lo[go], mid[go]]),
            np.concatenate([q1[go], q3[go]]),
            np.concatenate([mid[go], hi[go]]),
        )
        flo, fmid, fhi = (
            np.concatenate([flo[go], fmid[go]]),
            np.concatenate([fq1[go], fq3[go]]),
            np.concatenate([fmid[go], fhi[go]]),
        )
        whole = np.concatenate([left[go], right[go]])
    return total, err


def integrate_dt_over_t(g: Callable, t0, t1, rtol: float | None = None):
    """Integral of g(t) dt/t over each [t0_i, t1_i] with 0 < t0 <= t1 < inf."""
    x0 = np.log(np.atleast_1d(np.asarray(t0, dtype=float)))
    x1 = np.log(np.atleast_1d(np.asarray(t1, dtype=float)))
    return adaptive_simpson(lambda x: g(np.exp(x)), x0, x1, rtol)


@dataclass(frozen=True)
class TailResult:
    value: float
    error: float
    diverged: bool
    chunks: int

    @property
    def lower(self) -> float:
        return math.inf if self.diverged else max(self.value - self.error, 0.0)

    @property
    def upper(self) -> float:
        return math.inf if self.diverged else self.value + self.error


def log_tail(g: Callable, t0: float, toward: str = "zero", rtol: float | None = None) -> TailResult:
    """Integral of g(t) dt/t from t0 toward 0 or toward infinity.

    In y = |log(t/t0)| the chunks are [0,1], [1,2], [2,4], ... For an
    integrand decaying like a power of t the increments collapse; for one
    decaying like a power y^-alpha of the log-distance they shrink by
    2^(1-alpha) per chunk, so a ratio near one flags divergence. An
    unfinished geometric tail is extrapolated and the extrapolation is added
    to the error bound.
    """
    if toward not in ("zero", "inf"):
        raise ValueError("toward must be 'zero' or 'inf'")
    sign = -1.0 if toward == "zero" else 1.0
    x0 = math.log(t0)
    room = (x0 - LOG_FLOOR) if toward == "zero" else (LOG_CEIL - x0)
    edges = [0.0, 1.0]
    while edges[-1] * 2 <= room and len(edges) <= MAX_CHUNKS:
        edges.append(edges[-1] * 2)
    if edges[-1] < room and len(edges) <= MAX_CHUNKS:
        edges.append(room)
    edges = np.array(edges)
    lo = x0 + sign * edges[:-1]
    hi = x0 + sign * edges[1:]
    a, b = np.minimum(lo, hi), np.maximum(lo, hi)

    def G(x):
        return g(np.exp(x))

    # chunks go in batches so a converged tail stops early
    inc = np.zeros(0)
    err = np.zeros(0)
    for start in range(0, len(a), CHUNK_BATCH):
        stop = start + CHUNK_BATCH
        v, e = adaptive_simpson(G, a[start:stop], b[start:stop], rtol)
        inc = np.concatenate([inc, v])
        err = np.concatenate([err, e])
        if np.any(~np.isfinite(inc)):
            return TailResult(math.inf, 0.0, True, len(inc))
        total = float(inc.sum())
        if total > 0 and inc[-1] <= CONVERGED_RTOL * total:
            break
    edges = edges[: len(inc) + 1]
    total = float(inc.sum())
    error = float(err.sum())
    if total == 0.0:
        return TailResult(0.0, error, False, len(inc))
    last = float(inc[-1])
    # final chunk may be shorter than a doubling; compare per unit of length
    widths = edges[1:] - edges[:-1]
    if last <= CONVERGED_RTOL * total:
        return TailResult(total, error + last, False, len(inc))
    if len(inc) < 3:
        return TailResult(math.inf, 0.0, True, len(inc))
    full = inc[:-1] if widths[-1] < widths[-2] else inc
    prev, cur = float(full[-2]), float(full[-1])
    ratio = cur / prev if prev > 0 else math.inf
    if ratio >= DIVERGENCE_RATIO:
        return TailResult(math.inf, 0.0, True, len(inc))
    extra = cur * ratio / (1.0 - ratio)
    return TailResult(total + extra, error + 2.0 * extra, False, len(inc))
