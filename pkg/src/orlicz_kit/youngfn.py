"""Young functions and their algebra.

A Young function is represented by an evaluator object. Every evaluator
accepts scalars or numpy arrays and follows the extended-real conventions
Phi(0) = 0, Phi(t) = 0 on [0, a], Phi(t) = inf for t > b and Phi(inf) = inf.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable

import numpy as np

INF = math.inf

# classification grid: 512 log-spaced points per decade over [1e-8, 1e8]
GRID_DECADES = (-8.0, 8.0)
GRID_PER_DECADE = 512
ELASTICITY_CAP = 1e3
# p_- within this distance of 1 is read as p_- = 1
INDEX_TOL = 1e-3
WITNESS_MARGIN = 1e-6


class DomainError(ValueError):
    """Argument outside the domain of a Young-function operation."""


class PreconditionError(ValueError):
    """Hypothesis of an operation is not met."""


class DescriptionError(ValueError):
    """Malformed Young-function description."""


def _arr(x) -> np.ndarray:
    return np.asarray(x, dtype=float)


def _unwrap(out: np.ndarray, like: np.ndarray):
    return float(out) if like.ndim == 0 else out


class YoungFunction:
    """Base evaluator; subclasses implement ``_finite`` on (a, b]."""

    kind = "abstract"
    a: float = 0.0
    b: float = INF
    has_derivative = False

    @property
    def label(self) -> str:
        return self.kind

    def _finite(self, t: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _derivative(self, t: np.ndarray) -> np.ndarray:
        # central difference in log scale, right-biased to approximate Phi'_+
        h = 1e-6
        return (self._call(t * (1 + 2 * h)) - self._call(t * (1 + h))) / (t * h)

    def _inverse_closed(self, u: np.ndarray) -> np.ndarray | None:
        return None

    def _derivative_inverse(self, r: np.ndarray) -> np.ndarray | None:
        """inf{s : Phi'(s) > r} in closed form, when known."""
        return None

    def to_desc(self) -> dict:
        raise NotImplementedError

    def _call(self, t: np.ndarray) -> np.ndarray:
        out = np.zeros_like(t)
        out[t > self.b] = INF
        mid = (t > self.a) & (t <= self.b) & np.isfinite(t)
        if np.any(mid):
            with np.errstate(over="ignore", invalid="ignore"):
                out[mid] = self._finite(t[mid])
        return out

    def __call__(self, t):
        arr = _arr(t)
        if np.any(np.isnan(arr)) or np.any(arr < 0):
            raise DomainError(f"Young functions are defined on [0, inf]; got {t!r}")
        return _unwrap(self._call(np.atleast_1d(arr)).reshape(arr.shape), arr)

    def derivative(self, t):
        """Right derivative; 0 below a(Phi) and inf from b(Phi) on."""
        arr = _arr(t)
        flat = np.atleast_1d(arr)
        out = np.zeros_like(flat)
        out[flat >= self.b] = INF
        mid = (flat >= self.a) & (flat < self.b)
        if np.any(mid):
            with np.errstate(over="ignore", invalid="ignore"):
                out[mid] = self._derivative(flat[mid])
        return _unwrap(out.reshape(arr.shape), arr)

    def elasticity(self, t):
        """t Phi'(t) / Phi(t) on (a, b)."""
        arr = _arr(t)
        with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
            return arr * self.derivative(arr) / self(arr)

    def inverse(self, u):
        """Generalized inverse, closed form when the catalog knows one."""
        arr = _arr(u)
        flat = np.atleast_1d(arr)
        if np.any(np.isnan(flat)) or np.any(flat < 0):
            raise DomainError(f"inverse is defined on [0, inf]; got {u!r}")
        closed = self._inverse_closed(flat)
        if closed is None:
            return gen_inverse(self, u)
        closed = np.where(np.isinf(flat), INF, closed)
        return _unwrap(closed.reshape(arr.shape), arr)

    def __repr__(self) -> str:
        return f"<{self.label}>"


class PowerLaw(YoungFunction):
    kind = "power"
    has_derivative = True

    def __init__(self, p: float):
        if not p >= 1:
            raise DescriptionError(f"power exponent must be >= 1, got {p}")
        self.p = float(p)

    @property
    def label(self):
        return f"t^{self.p:g}"

    def _finite(self, t):
        return t**self.p

    def _derivative(self, t):
        return self.p * t ** (self.p - 1)

    def _inverse_closed(self, u):
        return u ** (1.0 / self.p)

    def _derivative_inverse(self, r):
        if self.p == 1:
            return None
        return (r / self.p) ** (1.0 / (self.p - 1))

    def to_desc(self):
        return {"kind": "power", "p": self.p}


class PowerLog(YoungFunction):
    """t log(3 + t)."""

    kind = "power_log"
    has_derivative = True

    @property
    def label(self):
        return "t*log(3+t)"

    def _finite(self, t):
        return t * np.log(3.0 + t)

    def _derivative(self, t):
        return np.log(3.0 + t) + t / (3.0 + t)

    def elasticity(self, t):
        t = _arr(t)
        return 1.0 + t / ((3.0 + t) * np.log(3.0 + t))

    def to_desc(self):
        return {"kind": "power_log"}


class ExpMinusOne(YoungFunction):
    kind = "exp_minus_one"
    has_derivative = True

    @property
    def label(self):
        return "exp(t)-1"

    def _finite(self, t):
        return np.expm1(t)

    def _derivative(self, t):
        return np.exp(t)

    def elasticity(self, t):
        t = _arr(t)
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(t > 0, t / -np.expm1(-t), 1.0)

    def _inverse_closed(self, u):
        return np.log1p(u)

    def to_desc(self):
        return {"kind": "exp_minus_one"}


class Deadzone(YoungFunction):
    """0 on [0, a], t - a beyond."""

    kind = "deadzone"
    has_derivative = True

    def __init__(self, a: float = 1.0):
        if not a > 0:
            raise DescriptionError(f"deadzone threshold must be > 0, got {a}")
        self.a = float(a)

    @property
    def label(self):
        return f"max(0,t-{self.a:g})"

    def _finite(self, t):
        return t - self.a

    def _derivative(self, t):
        return np.ones_like(t)

    def elasticity(self, t):
        t = _arr(t)
        with np.errstate(divide="ignore"):
            return t / (t - self.a)

    def _inverse_closed(self, u):
        return u + self.a

    def to_desc(self):
        d = {"kind": "deadzone"}
        if self.a != 1.0:
            d["a"] = self.a
        return d


class Capped(YoungFunction):
    """t^p on [0, b] and inf beyond."""

    kind = "capped"
    has_derivative = True

    def __init__(self, b: float = 1.0, p: float = 1.0):
        if not b > 0 or not math.isfinite(b):
            raise DescriptionError(f"capped threshold must be finite and > 0, got {b}")
        if not p >= 1:
            raise DescriptionError(f"capped exponent must be >= 1, got {p}")
        self.b = float(b)
        self.p = float(p)

    @property
    def label(self):
        return f"t^{self.p:g} on [0,{self.b:g}]"

    def _finite(self, t):
        return t**self.p

    def _derivative(self, t):
        return self.p * t ** (self.p - 1)

    def _inverse_closed(self, u):
        return np.minimum(u ** (1.0 / self.p), self.b)

    def to_desc(self):
        d = {"kind": "capped", "b": self.b}
        if self.p != 1.0:
            d["p"] = self.p
        return d


class Conjugate(YoungFunction):
    """Complementary function sup_s {r s - Phi(s)} evaluated numerically.

    With a base derivative the maximizer is the generalized inverse of
    Phi'_+ at r; otherwise golden-section search on the concave objective.
    The right derivative of the conjugate is that maximizer.
    """

    kind = "conjugate"
    has_derivative = True

    def __init__(self, base: YoungFunction, use_derivative: bool = True):
        self.base = base
        self.use_derivative = use_derivative and base.has_derivative
        self.a = self._left_slope()
        self.b = self._right_slope()

    @property
    def label(self):
        return f"conj({self.base.label})"

    def _left_slope(self) -> float:
        base = self.base
        if base.a > 0:
            return 0.0
        if base.has_derivative:
            return float(max(base.derivative(0.0), 0.0))
        s = np.array([1e-300, 1e-200, 1e-100])
        r = base(s) / s
        return float(r[0]) if abs(r[0] - r[1]) <= 1e-9 * max(r[1], 1e-300) else 0.0

    def _right_slope(self) -> float:
        base = self.base
        if base.b < INF:
            return INF
        s = np.array([1e100, 1e200, 1e300])
        with np.errstate(over="ignore", invalid="ignore"):
            r = base(s) / s
        if np.all(np.isfinite(r)) and abs(r[2] - r[1]) <= 1e-9 * r[2] and abs(r[1] - r[0]) <= 1e-9 * r[1]:
            return float(r[2])
        return INF

    def argmax(self, r) -> np.ndarray:
        """Maximizer s*(r) of r s - Phi(s); inf where none exists."""
        return self._solve(np.atleast_1d(_arr(r)))[1]

    def _solve(self, r: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        base = self.base
        vals = np.zeros_like(r)
        args = np.zeros_like(r)
        pos = r > 0
        if not np.any(pos):
            return vals, args
        rp = r[pos]
        closed = base._derivative_inverse(rp) if self.use_derivative else None
        if closed is not None:
            s = np.minimum(closed, base.b)
        elif self.use_derivative:
            s = threshold_inverse(base.derivative, rp, cap=base.b)
        else:
            s = np.array([_golden_argmax(base, x) for x in rp])
        v = np.full_like(rp, np.nan)
        ok = np.isfinite(s)
        with np.errstate(over="ignore", invalid="ignore"):
            v[ok] = rp[ok] * s[ok] - base(s[ok])
        if np.any(~ok):
            v[~ok] = [_doubling_sup(base, x) for x in rp[~ok]]
        vals[pos] = np.maximum(v, 0.0)
        args[pos] = s
        return vals, args

    def _finite(self, t):
        return self._solve(t)[0]

    def _derivative(self, t):
        return self._solve(t)[1]

    def elasticity(self, t):
        t = _arr(t)
        vals, args = self._solve(np.atleast_1d(t))
        with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
            out = np.atleast_1d(t) * args / vals
        return _unwrap(out.reshape(t.shape), t)

    def to_desc(self):
        return {"kind": "conjugate", "base": self.base.to_desc()}


def _doubling_sup(phi: YoungFunction, r: float) -> float:
    """sup of r s - Phi(s) when the maximizer escapes every bracket.

    The objective is sampled along s = 2^k; three consecutive strict
    increases at the end of the sweep mean linear growth, i.e. +inf.
    """
    ks = np.arange(-20, 61)
    s = np.ldexp(1.0, ks)
    with np.errstate(over="ignore", invalid="ignore"):
        h = r * s - phi(s)
    h = h[np.isfinite(h)]
    if h.size == 0:
        return INF
    tail = h[-4:]
    if tail.size == 4 and np.all(np.diff(tail) > 1e-9 * np.abs(tail[1:]).max()):
        return INF
    return float(max(h.max(), 0.0))


def _golden_argmax(phi: YoungFunction, r: float) -> float:
    """Golden-section maximizer of r s - Phi(s) on an expanding bracket."""

    def h(s):
        with np.errstate(over="ignore", invalid="ignore"):
            v = r * s - phi(s)
        return -INF if not np.isfinite(v) else v

    cap = phi.b
    hi = min(1.0, cap)
    prev = h(hi)
    doublings = 0
    while hi < cap:
        nxt = min(2 * hi, cap)
        hn = h(nxt)
        if hn <= prev:
            break
        hi, prev = nxt, hn
        doublings += 1
        if hi > 1e300:
            return INF
    lo = 0.0
    hi = min(2 * hi, cap)
    g = (math.sqrt(5) - 1) / 2
    x1 = hi - g * (hi - lo)
    x2 = lo + g * (hi - lo)
    f1, f2 = h(x1), h(x2)
    for _ in range(200):
        if hi - lo <= 1e-13 * max(hi, 1e-300):
            break
        if f1 < f2:
            lo, x1, f1 = x1, x2, f2
            x2 = lo + g * (hi - lo)
            f2 = h(x2)
        else:
            hi, x2, f2 = x2, x1, f1
            x1 = hi - g * (hi - lo)
            f1 = h(x1)
    best = 0.5 * (lo + hi)
    if cap < INF and h(cap) > h(best):
        best = cap
    return best


class PhiTheta(YoungFunction):
    """r -> integral over (0, r^theta) of Phi(t)/t dt.

    The integral is tabulated once on a log-spaced grid in x = log t with an
    8-point Gauss-Legendre rule per cell; evaluation adds a partial cell.
    """

    kind = "phi_theta"
    has_derivative = True
    _NODES, _WEIGHTS = np.polynomial.legendre.leggauss(8)
    CELLS_PER_UNIT = 32

    def __init__(self, base: YoungFunction, theta: float):
        theta = float(theta)
        if not (theta > 0 and math.isfinite(theta)):
            raise PreconditionError(f"theta must be positive and finite, got {theta}")
        if theta < 1:
            pm = classify(base).p_minus
            if not (pm > 0) or theta < 1.0 / pm - 1e-12:
                raise PreconditionError(
                    f"theta={theta:g} is below 1/p_-(Phi) = {1.0 / pm:g}"
                )
        self.base = base
        self.theta = theta
        self.a = base.a ** (1.0 / theta) if base.a > 0 else 0.0
        self.b = base.b ** (1.0 / theta) if base.b < INF else INF

    @property
    def label(self):
        return f"phi_theta({self.base.label}, {self.theta:g})"

    def _gl(self, x0: np.ndarray, x1: np.ndarray) -> np.ndarray:
        half = 0.5 * (x1 - x0)
        mid = 0.5 * (x1 + x0)
        x = mid[:, None] + half[:, None] * self._NODES[None, :]
        with np.errstate(over="ignore", invalid="ignore"):
            vals = self.base(np.exp(x))
        return half * (vals @ self._WEIGHTS)

    @cached_property
    def _table(self):
        base = self.base
        t_lo = base.a if base.a > 0 else 1e-300
        if base.b < INF:
            t_hi = base.b
        else:
            t_hi = 1.0
            with np.errstate(over="ignore"):
                while t_hi < 1e300 and np.isfinite(base(2 * t_hi)):
                    t_hi *= 2
                while np.isfinite(base(1.01 * t_hi)) and t_hi < 1e300:
                    t_hi *= 1.01
        x_lo, x_hi = math.log(t_lo), math.log(t_hi)
        n = max(1, int(math.ceil((x_hi - x_lo) * self.CELLS_PER_UNIT)))
        xs = np.linspace(x_lo, x_hi, n + 1)
        cells = self._gl(xs[:-1], xs[1:])
        with np.errstate(over="ignore", invalid="ignore"):
            cum = np.concatenate([[0.0], np.cumsum(cells)])
        return xs, cum, t_lo, t_hi

    def primitive(self, x) -> np.ndarray:
        """Integral of Phi(t)/t over (0, x) for x >= 0."""
        x = np.atleast_1d(_arr(x))
        xs, cum, t_lo, t_hi = self._table
        out = np.zeros_like(x)
        over = x > t_hi
        out[over] = INF
        small = (x > 0) & (x < t_lo) & ~over
        if np.any(small):
            lx = np.log(x[small])
            out[small] = self._gl(lx - 40.0, lx)
        body = (x >= t_lo) & ~over
        if np.any(body):
            lx = np.log(x[body])
            idx = np.clip(np.searchsorted(xs, lx, side="right") - 1, 0, len(xs) - 2)
            out[body] = cum[idx] + self._gl(xs[idx], lx)
        return out

    def _finite(self, r):
        return self.primitive(r**self.theta)

    def _derivative(self, r):
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.where(r > 0, self.theta * self.base(r**self.theta) / r, 0.0)

    def elasticity(self, r):
        r = _arr(r)
        x = np.atleast_1d(r) ** self.theta
        with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
            out = self.theta * self.base(x) / self.primitive(x)
        return _unwrap(out.reshape(r.shape), r)

    def to_desc(self):
        return {"kind": "phi_theta", "base": self.base.to_desc(), "theta": self.theta}


def threshold_inverse(fn: Callable, y, cap: float = INF, rtol: float = 1e-12) -> np.ndarray:
    """inf{s >= 0 : fn(s) > y} for a non-decreasing ``fn``, vectorized in y.

    A bracket fn(lo) <= y < fn(hi) is grown geometrically from s = 1, then
    narrowed by Illinois (weighted regula falsi) steps with a bisection step
    every fourth round so jumps and flat pieces still converge. The lower end
    of the final bracket is returned, so fn(result) <= y. When fn never
    exceeds y on [0, cap] the answer is ``cap`` (inf when cap is inf).
    """
    y = np.atleast_1d(_arr(y)).astype(float)
    out = np.full_like(y, np.nan)
    out[np.isinf(y)] = INF
    todo = np.flatnonzero(np.isfinite(y))
    if todo.size == 0:
        return out

    def f(x):
        with np.errstate(over="ignore", invalid="ignore"):
            return np.asarray(fn(x), dtype=float)

    yy = y[todo]
    if cap < INF:
        at_cap = f(np.full_like(yy, cap)) <= yy
        out[todo[at_cap]] = cap
        todo, yy = todo[~at_cap], yy[~at_cap]
    if todo.size == 0:
        return out

    hi = np.full_like(yy, min(1.0, cap))
    fhi = f(hi)
    lo = np.zeros_like(yy)
    flo = np.zeros_like(yy)
    above = fhi > yy
    fac = np.full_like(yy, 2.0)

    # grow upward: lo trails hi
    m = ~above
    lo[m], flo[m] = hi[m], fhi[m]
    for _ in range(200):
        if not np.any(m):
            break
        idx = np.flatnonzero(m)
        lo[idx], flo[idx] = hi[idx], fhi[idx]
        hi[idx] = np.minimum(hi[idx] * fac[idx], cap)
        fhi[idx] = f(hi[idx])
        fac[idx] = np.minimum(fac[idx] ** 2, 1e16)
        m[idx] = (fhi[idx] <= yy[idx]) & (hi[idx] < 1e307)
    # an infinite upper end means fn never exceeded y at any finite point
    escaped = (fhi <= yy) | (np.isinf(hi) & (cap == INF))

    # shrink downward for points that started above the target
    m = above.copy()
    fac[:] = 2.0
    for _ in range(200):
        if not np.any(m):
            break
        idx = np.flatnonzero(m)
        cand = hi[idx] / fac[idx]
        fc = f(cand)
        tiny = cand < 1e-307
        up = (fc > yy[idx]) & ~tiny
        hi[idx[up]], fhi[idx[up]] = cand[up], fc[up]
        fac[idx[up]] = np.minimum(fac[idx[up]] ** 2, 1e16)
        settle = idx[~up & ~tiny]
        lo[settle], flo[settle] = cand[~up & ~tiny], fc[~up & ~tiny]
        floor = idx[tiny]
        lo[floor] = 0.0
        if floor.size:
            flo[floor] = f(np.zeros(floor.size))
        m[idx[~up]] = False
    at_zero = (lo == 0) & (flo > yy) & ~escaped
    out[todo[escaped]] = INF
    out[todo[at_zero]] = 0.0
    keep = ~escaped & ~at_zero
    todo, yy, lo, hi, flo, fhi = todo[keep], yy[keep], lo[keep], hi[keep], flo[keep], fhi[keep]

    gl, gh = flo - yy, fhi - yy
    side = np.zeros_like(yy)  # +1: hi moved last, -1: lo moved last
    for it in range(400):
        active = np.flatnonzero(hi - lo > rtol * hi)
        if active.size == 0:
            break
        l, h = lo[active], hi[active]
        a_gl, a_gh = gl[active], gh[active]
        with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
            x = (l * a_gh - h * a_gl) / (a_gh - a_gl)
        wide = (l <= 0) | (h > 4 * l)
        plain = (it % 4 == 3) | ~np.isfinite(a_gh) | ~np.isfinite(x)
        # keep probes a hair inside the bracket so a converged iterate closes it
        eps = 0.25 * rtol * h
        x = np.clip(np.where(plain, 0.5 * (l + h), x), l + eps, h - eps)
        with np.errstate(invalid="ignore"):
            x = np.where(wide & (l > 0), np.sqrt(l) * np.sqrt(h), x)
        x = np.where(wide & (l <= 0), 0.5 * h, x)
        gx = f(x) - yy[active]
        illinois = ~(plain | wide)
        up = gx > 0
        iu, il = active[up], active[~up]
        hi[iu], gh[iu] = x[up], gx[up]
        lo[il], gl[il] = x[~up], gx[~up]
        # Illinois: halve the stale end when the same side moves twice
        stale_lo = active[up & illinois & (side[active] > 0)]
        stale_hi = active[~up & illinois & (side[active] < 0)]
        gl[stale_lo] *= 0.5
        gh[stale_hi] *= 0.5
        side[active] = np.where(up, 1.0, -1.0)
    out[todo] = lo
    return out


def evaluate(phi: YoungFunction, t):
    """Phi(t) with the extended-real conventions."""
    return phi(t)


def gen_inverse(phi: YoungFunction, u):
    """Phi^{-1}(u) = inf{t >= 0 : Phi(t) > u} by bracketing and root finding."""
    arr = _arr(u)
    flat = np.atleast_1d(arr)
    if np.any(np.isnan(flat)) or np.any(flat < 0):
        raise DomainError(f"inverse is defined on [0, inf]; got {u!r}")
    out = threshold_inverse(phi, flat, cap=phi.b)
    return _unwrap(out.reshape(arr.shape), arr)


def conjugate(phi: YoungFunction, simplify: bool = True) -> YoungFunction:
    """Complementary function; a conjugate of a conjugate returns its base."""
    if simplify and isinstance(phi, Conjugate):
        return phi.base
    return Conjugate(phi)


def phi_theta(phi: YoungFunction, theta: float) -> PhiTheta:
    return PhiTheta(phi, theta)


def conjugate_exponent(p: float) -> float:
    if p == 1:
        return INF
    if math.isinf(p):
        return 1.0
    return p / (p - 1)


@dataclass(frozen=True)
class ClassifyResult:
    delta2: bool | None
    nabla2: bool | None
    p_plus: float
    p_minus: float
    delta2_witness: float | None = None
    nabla2_witness: float | None = None
    notes: tuple[str, ...] = field(default_factory=tuple)

    def to_dict(self) -> dict:
        def num(x):
            if x is None or (isinstance(x, float) and math.isnan(x)):
                return None
            return "inf" if x == INF else x

        return {
            "delta2": self.delta2,
            "delta2_witness": num(self.delta2_witness),
            "nabla2": self.nabla2,
            "nabla2_witness": num(self.nabla2_witness),
            "p_plus": num(self.p_plus),
            "p_minus": num(self.p_minus),
            "notes": list(self.notes),
        }


def classification_grid() -> np.ndarray:
    lo, hi = GRID_DECADES
    return np.logspace(lo, hi, int((hi - lo) * GRID_PER_DECADE) + 1)


def _delta2_witness(phi: YoungFunction, grid: np.ndarray) -> float | None:
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        ratio = phi(2 * grid) / phi(grid)
    ratio = ratio[np.isfinite(ratio)]
    if ratio.size == 0:
        return None
    i = int(np.argmax(ratio))
    best = float(ratio[i])
    # refine around the sampled maximum
    xs = np.log(grid)
    lo, hi = xs[max(i - 1, 0)], xs[min(i + 1, len(xs) - 1)]
    fine = np.exp(np.linspace(lo, hi, 257))
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        fr = phi(2 * fine) / phi(fine)
    fr = fr[np.isfinite(fr)]
    if fr.size:
        best = max(best, float(fr.max()))
    return max(best * (1 + WITNESS_MARGIN), 1 + WITNESS_MARGIN)


def _nabla2_witness(phi: YoungFunction, grid: np.ndarray, p_minus: float) -> float | None:
    k = 2.0 ** (1.0 / (p_minus - 1.0)) * (1 + WITNESS_MARGIN) if p_minus > 1 else 2.0
    k = max(k, 1 + WITNESS_MARGIN)
    base = phi(grid)
    for _ in range(60):
        with np.errstate(over="ignore", invalid="ignore"):
            ok = np.all(2 * k * base <= phi(k * grid))
        if ok:
            return float(k)
        k *= 2
        if k > 1e12:
            break
    return None


def classify(phi: YoungFunction) -> ClassifyResult:
    """Estimate p_+/p_- from the elasticity and set the Delta_2/nabla_2 flags.

    Flags follow the index criteria (Delta_2 iff p_+ < inf, nabla_2 iff
    p_- > 1); witnesses come from a direct search and a flag whose witness
    cannot be confirmed is reported as unknown (None).
    """
    grid = classification_grid()
    notes: list[str] = []
    inside = grid[(grid > phi.a) & (grid < phi.b)]
    if inside.size < 2:
        return ClassifyResult(None, None, math.nan, math.nan, notes=("grid misses (a, b)",))
    with np.errstate(over="ignore", invalid="ignore", divide="ignore"):
        vals = phi(inside)
        el = np.asarray(phi.elasticity(inside), dtype=float)
    finite = np.isfinite(el) & (vals > 0)
    t_ok, e_ok = inside[finite], el[finite]
    if e_ok.size == 0:
        return ClassifyResult(None, None, math.nan, math.nan, notes=("no finite elasticity",))
    truncated = phi.b == INF and not finite[-1]

    p_minus = float(max(1.0, e_ok.min()))

    if phi.a > 0:
        p_plus = INF
        notes.append("vanishes on [0, a] with a > 0")
    elif phi.b < INF:
        p_plus = INF
        notes.append("infinite beyond b < inf")
    elif e_ok.max() > ELASTICITY_CAP:
        p_plus = INF
        notes.append("elasticity exceeds cap")
    elif truncated:
        top = t_ok[-1]
        prev = e_ok[t_ok <= top / 10]
        growth = e_ok[-1] / prev[-1] if prev.size else math.nan
        if growth >= 1.5:
            p_plus = INF
            notes.append("elasticity still growing where Phi overflows")
        elif growth <= 1.01:
            p_plus = float(e_ok.max())
            notes.append("elasticity flat where Phi overflows")
        else:
            p_plus = math.nan
            notes.append("overflow before the elasticity settles")
    else:
        p_plus = float(e_ok.max())

    delta2: bool | None
    d_wit = None
    if math.isnan(p_plus):
        delta2 = None
    elif p_plus < INF:
        d_wit = _delta2_witness(phi, grid)
        if d_wit is None:
            delta2 = None
            notes.append("no Delta_2 witness found")
        else:
            delta2 = True
            if d_wit > 2.0**p_plus * (1 + 1e-6) + 1e-9:
                notes.append("Delta_2 witness exceeds 2^p_+")
    else:
        delta2 = False

    nabla2: bool | None
    n_wit = None
    if p_minus > 1 + INDEX_TOL:
        n_wit = _nabla2_witness(phi, grid, p_minus)
        nabla2 = True if n_wit is not None else None
        if n_wit is None:
            notes.append("no nabla_2 witness found")
    else:
        nabla2 = False
    return ClassifyResult(delta2, nabla2, p_plus, p_minus, d_wit, n_wit, tuple(notes))


def from_desc(desc) -> YoungFunction:
    """Build an evaluator from its JSON description."""
    if not isinstance(desc, dict):
        raise DescriptionError(f"description must be an object, got {type(desc).__name__}")
    kind = desc.get("kind")

    def num(key, default=None):
        if key not in desc:
            if default is None:
                raise DescriptionError(f"'{kind}' requires '{key}'")
            return default
        v = desc[key]
        if isinstance(v, bool) or not isinstance(v, (int, float)):
            raise DescriptionError(f"'{key}' must be a number")
        return float(v)

    def sub(key):
        if key not in desc:
            raise DescriptionError(f"'{kind}' requires '{key}'")
        return from_desc(desc[key])

    if kind == "power":
        return PowerLaw(num("p"))
    if kind == "power_log":
        return PowerLog()
    if kind == "exp_minus_one":
        return ExpMinusOne()
    if kind == "deadzone":
        return Deadzone(num("a", 1.0))
    if kind == "capped":
        return Capped(num("b"), num("p", 1.0))
    if kind == "conjugate":
        return Conjugate(sub("base"))
    if kind == "phi_theta":
        return PhiTheta(sub("base"), num("theta"))
    raise DescriptionError(f"unknown Young-function kind {kind!r}")


def default_catalog() -> list[YoungFunction]:
    """Seven representatives covering every catalog kind."""
    return [
        PowerLaw(2.0),
        PowerLog(),
        ExpMinusOne(),
        Deadzone(),
        Capped(1.0),
        Conjugate(PowerLaw(3.0)),
        PhiTheta(PowerLog(), 2.0),
    ]
