"""Quasi-norm evaluators on step functions.

All evaluators take a :class:`MeasureStepFunction` (or work on its
rearrangement) and return a :class:`NormResult` carrying a certified
interval. Lorentz-type norms integrate ``[w(t) f*(t)]^q dt/t`` piece by piece
over the rearrangement; the head piece (0, t1) is a log tail, which is where
divergence shows up.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import quadrature
from .rearrange import (
    GridFunction1D,
    MeasureStepFunction,
    RearrangementStep,
    grid_product_integral,
    rearrangement,
    rearrangement_pairing,
)
from .report import CheckRecord, Report, json_number
from .youngfn import (
    INF,
    DescriptionError,
    DomainError,
    YoungFunction,
    classify,
    conjugate,
    from_desc,
)

EXACT = "exact"
NUMERIC = "bisection+quadrature"
BISECTION_RTOL = 1e-10
# relative width of the inverse bracket returned by threshold_inverse
INVERSE_RTOL = 1e-12


@dataclass(frozen=True)
class NormResult:
    value: float
    method: str
    lower: float
    upper: float

    @classmethod
    def exact(cls, value: float) -> "NormResult":
        return cls(value, EXACT, value, value)

    def to_dict(self) -> dict:
        return {
            "value": json_number(self.value),
            "lower": json_number(self.lower),
            "upper": json_number(self.upper),
            "method": self.method,
        }


# --- weights -----------------------------------------------------------------


class WeightFunction:
    """Positive weight on (0, inf) for the generalized Lorentz norm."""

    monotone = False  # non-decreasing

    def __call__(self, t):
        raise NotImplementedError

    @property
    def label(self) -> str:
        return "weight"

    def to_desc(self) -> dict:
        raise NotImplementedError


class PowerWeight(WeightFunction):
    """t^alpha with alpha >= 0."""

    monotone = True

    def __init__(self, alpha: float):
        if not (alpha >= 0 and math.isfinite(alpha)):
            raise DescriptionError(f"power weight exponent must be finite and >= 0, got {alpha}")
        self.alpha = float(alpha)

    def __call__(self, t):
        return np.asarray(t, dtype=float) ** self.alpha

    @property
    def label(self):
        return f"t^{self.alpha:g}"

    def to_desc(self):
        return {"kind": "power", "alpha": self.alpha}


class OrliczWeight(WeightFunction):
    """t -> 1 / Phi^{-1}(1/t), the weight behind the Orlicz-Lorentz norm."""

    monotone = True

    def __init__(self, phi: YoungFunction):
        self.phi = phi

    def __call__(self, t):
        t = np.asarray(t, dtype=float)
        with np.errstate(divide="ignore"):
            return 1.0 / np.asarray(self.phi.inverse(1.0 / t), dtype=float)

    @property
    def label(self):
        return f"1/inv({self.phi.label})(1/t)"

    def to_desc(self):
        return {"kind": "orlicz", "phi": self.phi.to_desc()}


class CallableWeight(WeightFunction):
    """Wraps an arbitrary positive vectorized callable."""

    def __init__(self, fn, label: str = "custom", monotone: bool = False):
        self.fn = fn
        self._label = label
        self.monotone = monotone

    def __call__(self, t):
        return np.asarray(self.fn(np.asarray(t, dtype=float)), dtype=float)

    @property
    def label(self):
        return self._label

    def to_desc(self):
        raise DescriptionError("callable weights have no description")


def weight_from_desc(desc) -> WeightFunction:
    if not isinstance(desc, dict):
        raise DescriptionError("weight description must be an object")
    kind = desc.get("kind")
    if kind == "power":
        alpha = desc.get("alpha")
        if isinstance(alpha, bool) or not isinstance(alpha, (int, float)):
            raise DescriptionError("'power' weight requires numeric 'alpha'")
        return PowerWeight(alpha)
    if kind == "orlicz":
        if "phi" not in desc:
            raise DescriptionError("'orlicz' weight requires 'phi'")
        return OrliczWeight(from_desc(desc["phi"]))
    raise DescriptionError(f"unknown weight kind {kind!r}")


# --- Luxemburg ---------------------------------------------------------------


def _bisect_decreasing(ok, start: float, rtol: float = BISECTION_RTOL):
    """Smallest lam with ok(lam) true, for ok monotone (false then true).

    Returns (lo, hi) with ok(hi) true and ok(lo) false, or (0, 0) if ok holds
    arbitrarily close to 0 and (inf, inf) if it never holds.
    """
    hi = start
    for _ in range(2100):
        if ok(hi):
            break
        hi *= 2
        if hi > 1e300:
            return INF, INF
    lo = hi / 2
    for _ in range(2100):
        if not ok(lo):
            break
        hi, lo = lo, lo / 2
        if lo < 1e-300:
            return 0.0, 0.0
    while hi - lo > rtol * hi:
        mid = 0.5 * (lo + hi)
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return lo, hi


def modular(phi: YoungFunction, f: MeasureStepFunction, lam: float) -> float:
    """Integral of Phi(|f| / lam), summed exactly over cells."""
    if not f.values:
        return 0.0
    v = np.asarray(f.values)
    m = np.asarray(f.measures)
    with np.errstate(over="ignore", invalid="ignore"):
        terms = phi(v / lam)
    # 0 * inf = 0 never arises: measures are positive
    return float(np.sum(terms * m))


def luxemburg_norm(phi: YoungFunction, f: MeasureStepFunction) -> NormResult:
    """inf{lam > 0 : modular(f / lam) <= 1} by bisection."""
    if not any(v > 0 for v in f.values):
        return NormResult.exact(0.0)
    lo, hi = _bisect_decreasing(lambda lam: modular(phi, f, lam) <= 1.0, max(f.values))
    return NormResult(hi, NUMERIC, lo, hi)


# --- weak-type norms -----------------------------------------------------------


def _levels(f: MeasureStepFunction) -> tuple[np.ndarray, np.ndarray]:
    """Distinct positive values v_1 > ... > v_m and M_j = |{|f| >= v_j}|."""
    r = rearrangement(f)
    return np.asarray(r.values, dtype=float), np.asarray(r.breakpoints[1:], dtype=float)


def weak_modular(phi: YoungFunction, f: MeasureStepFunction, lam: float) -> float:
    """sup over t > 0 of Phi(t) m(f / lam, t), attained at the levels of f."""
    v, M = _levels(f)
    if v.size == 0:
        return 0.0
    with np.errstate(over="ignore", invalid="ignore"):
        return float(np.max(phi(v / lam) * M))


def _inverse_with_bracket(phi: YoungFunction, u: np.ndarray):
    """(value, lower, upper) enclosing Phi^{-1}(u)."""
    x = np.asarray(phi.inverse(u), dtype=float)
    if phi.__class__._inverse_closed is not YoungFunction._inverse_closed:
        return x, x, x, True
    return x, x, x * (1 + INVERSE_RTOL), False


def _level_sup(phi: YoungFunction, v: np.ndarray, M: np.ndarray) -> NormResult:
    """max_j v_j / Phi^{-1}(1 / M_j) with a certified interval."""
    x, xlo, xhi, closed = _inverse_with_bracket(phi, 1.0 / M)
    with np.errstate(divide="ignore"):
        val = float(np.max(v / x))
        lower = float(np.max(v / xhi))
    return NormResult(val, EXACT if closed else NUMERIC, lower, val)


def weak_norm_family(phi: YoungFunction, f: MeasureStepFunction):
    """(wL, WL, L^{Phi,inf}) computed by three independent routes.

    * wL: bisection on lam against the weak modular;
    * WL: sup over levels t of t / Phi^{-1}(1 / m(f, t)), read off just
      below each distinct value;
    * L^{Phi,inf}: sup over rearrangement pieces of f*(t) / Phi^{-1}(1/t)
      at the right end of each piece.
    """
    r = rearrangement(f)
    if r.is_zero:
        z = NormResult.exact(0.0)
        return z, z, z
    lo, hi = _bisect_decreasing(lambda lam: weak_modular(phi, f, lam) <= 1.0, r.values[0])
    wl = NormResult(hi, NUMERIC, lo, hi)

    # WL: walk the values of f itself, measuring {|f| > t} just below each one
    vals = np.unique(np.asarray([v for v in f.values if v > 0]))
    meas = np.array([sum(m for w, m in zip(f.values, f.measures) if w >= v) for v in vals])
    big_wl = _level_sup(phi, vals, meas)

    # L^{Phi,inf}: right endpoints of the rearrangement pieces
    linf = _level_sup(phi, np.asarray(r.values), np.asarray(r.breakpoints[1:]))
    return wl, big_wl, linf


def weak_norm(phi: YoungFunction, f: MeasureStepFunction) -> NormResult:
    return weak_norm_family(phi, f)[0]


# --- Lorentz-type norms --------------------------------------------------------


class _PieceIntegrals:
    """W(t_j) - W(t_{j-1}) for W(t) = integral of w(s)^q ds/s over (0, t)."""

    def __init__(self, w: WeightFunction, q: float, r: RearrangementStep, rtol: float | None):
        self.w = w
        self.q = q
        self.r = r
        self.rtol = quadrature.default_rtol() if rtol is None else rtol

    @cached_property
    def pieces(self):
        bps = np.asarray(self.r.breakpoints, dtype=float)
        q = self.q
        w = self.w

        def g(t):
            with np.errstate(over="ignore", invalid="ignore"):
                return w(t) ** q

        # the head (0, t1) is split at a power-of-two anchor whose tail is cached
        anchor = 2.0 ** math.floor(math.log2(bps[1]))
        head = _cached_head(w, q, g, anchor, self.rtol)
        starts = np.concatenate([[anchor], bps[1:-1]])
        body, berr = quadrature.integrate_dt_over_t(g, starts, bps[1:], self.rtol)
        vals = body.copy()
        errs = berr.copy()
        vals[0] += head.value
        errs[0] += head.error
        return vals, errs, head.diverged


_HEAD_CACHE: dict = {}
_HEAD_CACHE_SIZE = 4096


def _cached_head(w: WeightFunction, q: float, g, anchor: float, rtol: float) -> quadrature.TailResult:
    try:
        key = (json.dumps(w.to_desc(), sort_keys=True), q, anchor, rtol)
    except (NotImplementedError, DescriptionError):
        key = None
    if key is not None and key in _HEAD_CACHE:
        return _HEAD_CACHE[key]
    out = quadrature.log_tail(g, anchor, toward="zero", rtol=rtol)
    if key is not None:
        if len(_HEAD_CACHE) >= _HEAD_CACHE_SIZE:
            _HEAD_CACHE.clear()
        _HEAD_CACHE[key] = out
    return out


def _lorentz_from_pieces(w: WeightFunction, q: float, f: MeasureStepFunction, rtol=None) -> NormResult:
    r = rearrangement(f)
    if r.is_zero:
        return NormResult.exact(0.0)
    vals, errs, diverged = _PieceIntegrals(w, q, r, rtol).pieces
    if diverged or not np.all(np.isfinite(vals)):
        return NormResult(INF, NUMERIC, INF, INF)
    c = np.asarray(r.values) ** q
    total = float(np.sum(c * vals))
    err = float(np.sum(c * errs))
    inv = 1.0 / q
    return NormResult(total**inv, NUMERIC, max(total - err, 0.0) ** inv, (total + err) ** inv)


def _weight_sup(w: WeightFunction, a: float, b: float, samples: int = 257) -> float:
    """sup of w over (a, b); right endpoint for monotone weights."""
    if w.monotone:
        return float(w(b * (1 - 1e-15)))
    lo = a if a > 0 else b * 1e-12
    ts = np.exp(np.linspace(math.log(lo), math.log(b), samples))[:-1]
    ts = np.append(ts, b * (1 - 1e-15))
    return float(np.max(w(ts)))


def generalized_lorentz_norm(w: WeightFunction, q: float, f: MeasureStepFunction, rtol=None) -> NormResult:
    """Lambda^{w,q} quasi-norm of f; q may be inf."""
    if not q > 0:
        raise DomainError(f"q must be positive, got {q}")
    if math.isinf(q):
        r = rearrangement(f)
        if r.is_zero:
            return NormResult.exact(0.0)
        bps = r.breakpoints
        best = max(c * _weight_sup(w, a, b) for c, a, b in zip(r.values, bps, bps[1:]))
        method = EXACT if w.monotone else NUMERIC
        return NormResult(best, method, best, best)
    return _lorentz_from_pieces(w, q, f, rtol)


def lorentz_norm(phi: YoungFunction, q: float, f: MeasureStepFunction, rtol=None) -> NormResult:
    """L^{Phi,q} quasi-norm; q = inf is the L^{Phi,inf} route of the weak family."""
    if not q > 0:
        raise DomainError(f"q must be positive, got {q}")
    if math.isinf(q):
        return weak_norm_family(phi, f)[2]
    return _lorentz_from_pieces(OrliczWeight(phi), q, f, rtol)


# --- characteristic functions ----------------------------------------------------


def doubling_exponent(phi: YoungFunction) -> tuple[float, float] | None:
    """(q, C) = (log2 k, k) from the doubling witness k, when Phi is doubling.

    With this pair, (1/t) Phi^{-1}(1/t)^{-q} <= C (1/s) Phi^{-1}(1/s)^{-q}
    for t <= s, hence the L^{Phi,q} norm of chi_E is at most C^{1/q} times
    1 / Phi^{-1}(1/|E|).
    """
    cls = classify(phi)
    if not cls.delta2 or cls.delta2_witness is None:
        return None
    k = max(cls.delta2_witness, 2.0 * (1 + 1e-12))
    return math.log2(k), k


@dataclass(frozen=True)
class CharNormBounds:
    lower: float
    closed_form: float
    computed: NormResult
    upper_factor: float | None = None  # C^{1/q} when the doubling bound applies

    @property
    def ratio(self) -> float:
        return self.computed.value / self.closed_form

    def to_dict(self) -> dict:
        return {
            "lower": json_number(self.lower),
            "closed_form": json_number(self.closed_form),
            "computed": self.computed.to_dict(),
            "upper_factor": json_number(self.upper_factor),
        }


def char_norm_bounds(phi: YoungFunction, q: float, E_measure: float, rtol=None) -> CharNormBounds:
    """Lower bound, closed form and computed L^{Phi,q} norm of an indicator."""
    if not E_measure > 0:
        raise DomainError("E_measure must be > 0")
    closed = 1.0 / float(phi.inverse(1.0 / E_measure))
    lower = q ** (-1.0 / q) * closed if math.isfinite(q) else closed
    computed = lorentz_norm(phi, q, MeasureStepFunction.indicator(E_measure), rtol)
    factor = None
    pair = doubling_exponent(phi)
    if pair is not None and math.isfinite(q) and abs(q - pair[0]) <= 1e-12 * pair[0]:
        factor = pair[1] ** (1.0 / q)
    return CharNormBounds(lower, closed, computed, factor)


# --- pairing ---------------------------------------------------------------------


PAIRING_ANCHOR = "pairing bound between L^{Phi,1} and weak conjugate space"


def pairing_case(phi: YoungFunction, f: GridFunction1D, g: GridFunction1D, rec: CheckRecord, rtol=None):
    """Add one (f, g) pair of the pairing chain to ``rec``."""
    if not f.same_geometry(g):
        raise DomainError("pairing needs grid functions on the same grid")
    fs, gs = f.to_step(), g.to_step()
    direct = grid_product_integral(f, g)
    paired = rearrangement_pairing(rearrangement(fs), rearrangement(gs))
    slack = 1e-12 * max(paired, 1e-300)
    rec.record(direct <= paired + slack, f"int|fg|={direct!r} > int f*g*={paired!r}")
    nf = lorentz_norm(phi, 1.0, fs, rtol)
    ng = weak_norm(conjugate(phi), gs)
    if not (math.isfinite(nf.value) and math.isfinite(ng.value)):
        rec.skip("infinite norm: pairing bound vacuous")
        return
    rhs = 2.0 * nf.value * ng.value
    rhs_upper = 2.0 * nf.upper * ng.upper
    rec.intervals.append((2.0 * nf.lower * ng.lower, rhs_upper))
    rec.constants.append(("pairing/bound", paired / rhs if rhs > 0 else 0.0))
    rec.record(paired <= rhs_upper, f"int f*g*={paired!r} > 2|f||g|={rhs_upper!r}")


def pairing_checks(phi: YoungFunction, f: GridFunction1D, g: GridFunction1D, rtol=None) -> Report:
    """Check  int|fg| <= int f* g* <= 2 ||f||_{L^{Phi,1}} ||g||_{wL^{conj Phi}}.

    The first link is exact arithmetic. The second compares the exact
    rearrangement pairing with the certified upper end of the norm product;
    infinite norms make it vacuous rather than failed.
    """
    rec = CheckRecord(PAIRING_ANCHOR, "pairing")
    pairing_case(phi, f, g, rec, rtol)
    return Report([rec])
