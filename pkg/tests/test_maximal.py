import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from orlicz_kit import maximal as mx
from orlicz_kit import norms as nm
from orlicz_kit.rearrange import GridFunction1D, InputFormatError
from orlicz_kit.youngfn import DomainError, PowerLaw

from strategies import grid_pairs, grids


def brute_force(f: GridFunction1D) -> np.ndarray:
    """Plain-Python enumeration of intervals with endpoints in edges plus x."""
    edges = [float(e) for e in f.edges]
    vals = list(f.samples)

    def integral(a, b):
        s = 0.0
        for v, lo, hi in zip(vals, edges, edges[1:]):
            s += v * max(0.0, min(b, hi) - max(a, lo))
        return s

    out = []
    for k, x in enumerate(f.midpoints):
        x = float(x)
        best = vals[k]
        pts = edges + [x]
        for a in pts:
            for b in pts:
                if a <= x <= b and b > a:
                    best = max(best, integral(a, b) / (b - a))
        out.append(best)
    return np.array(out)


@given(grids())
def test_exact_matches_oracle(f):
    a = mx.maximal_1d(f).array
    b = mx.maximal_1d(f, "oracle").array
    assert np.allclose(a, b, rtol=1e-12, atol=0)


@given(grids())
def test_exact_matches_plain_enumeration(f):
    f = GridFunction1D.from_array(f.array[:10], f.origin, f.cell_width)
    assert np.allclose(mx.maximal_1d(f).array, brute_force(f), rtol=1e-10, atol=0)


def test_indicator_closed_form():
    n = 8
    chi = GridFunction1D.from_array([1.0] * n, 0.0, 1.0 / n).padded(3 * n, 3 * n)
    x = chi.midpoints
    oracle = np.where(x < 0, 1 / (1 - x), np.where(x > 1, 1 / x, 1.0))
    assert np.allclose(mx.maximal_1d(chi).array, oracle, rtol=1e-12)


def test_maximal_at_off_grid():
    f = GridFunction1D.from_array([1.0], 0.0, 1.0)
    assert np.allclose(mx.maximal_at(f, [-1.0, 0.5, 3.0]), [0.5, 1.0, 1 / 3])


@given(grids())
def test_dominates_f(f):
    assert np.all(mx.maximal_1d(f).array >= f.array)


@given(grid_pairs())
def test_sublinear(pair):
    f, g = pair
    s = GridFunction1D.from_array(f.array + g.array, f.origin, f.cell_width)
    lhs = mx.maximal_1d(s).array
    rhs = mx.maximal_1d(f).array + mx.maximal_1d(g).array
    assert np.all(lhs <= rhs * (1 + 1e-12))


@given(grids(), st.floats(1e-3, 1e3), st.floats(-100, 100), st.floats(1e-2, 1e2))
def test_symmetries(f, c, shift, dil):
    base = mx.maximal_1d(f).array
    moved = GridFunction1D.from_array(c * f.array, f.origin * dil + shift, f.cell_width * dil)
    assert np.allclose(mx.maximal_1d(moved).array, c * base, rtol=1e-9)


def test_bad_mode():
    with pytest.raises(DomainError):
        mx.maximal_1d(GridFunction1D.from_array([1.0]), "centered")


def test_zero_grid():
    z = mx.maximal_1d(GridFunction1D.from_array([0.0, 0.0]))
    assert list(z.samples) == [0.0, 0.0]


# --- dyadic ----------------------------------------------------------------------------


def test_dyadic_example():
    f = mx.GridFieldND(np.array([1.0, 0.0, 0.0, 0.0]), 0.25)
    assert list(mx.dyadic_maximal(f).samples) == [1.0, 0.5, 0.25, 0.25]


@given(st.integers(1, 3), st.integers(0, 3), st.integers(0, 2**31))
def test_dyadic_properties(dim, k, seed):
    side = 2**k
    rng = np.random.default_rng(seed)
    a = rng.uniform(0, 1, (side,) * dim)
    f = mx.GridFieldND(a, 1.0)
    m = mx.dyadic_maximal(f).samples
    assert m.shape == a.shape
    assert np.all(m >= a)
    # the whole cube average is a lower bound everywhere
    assert np.all(m >= a.mean() * (1 - 1e-12))


@given(grids())
def test_dyadic_below_uncentered(f):
    field = mx.grid_to_field(f)
    d = mx.dyadic_maximal(field).samples
    padded = GridFunction1D.from_array(field.samples, f.origin, f.cell_width)
    assert np.all(d <= mx.maximal_1d(padded).array * (1 + 1e-12))


def test_field_validation_and_csv():
    with pytest.raises(ValueError):
        mx.GridFieldND(np.zeros(3), 1.0)
    f = mx.GridFieldND(np.arange(16.0).reshape(4, 4), 0.5)
    back = mx.parse_field_csv(mx.format_field_csv(f))
    assert np.array_equal(back.samples, f.samples) and back.cell_volume == 0.5
    with pytest.raises(InputFormatError) as exc:
        mx.parse_field_csv("dim,side,cell_volume\n2,2,1\n1,2\n3,x\n", "fld")
    assert str(exc.value).startswith("fld:4:3")
    with pytest.raises(InputFormatError):
        mx.parse_field_csv("dim,side,cell_volume\n2,2,1\n1,2,3\n", "fld")


# --- vector-valued ----------------------------------------------------------------------


def test_vector_l2_example():
    f1 = GridFunction1D.from_array([1.0, 0.0, 0.0, 0.0, 0.0, 0.0])
    f2 = GridFunction1D.from_array([0.0, 1.0, 0.0, 0.0, 0.0, 0.0])
    out = mx.vector_maximal(mx.VectorField((f1, f2)), 2.0)
    # at x = 5.5 the best intervals are [0, 5.5] and [1, 5.5]
    assert out.array[-1] == pytest.approx(math.hypot(1 / 5.5, 1 / 4.5), rel=1e-12)


@given(grid_pairs(), st.sampled_from([1.0, 2.0, math.inf]))
def test_vector_single_member_and_bounds(pair, q):
    f, g = pair
    one = mx.vector_maximal(mx.VectorField((f,)), q).array
    assert np.allclose(one, mx.maximal_1d(f).array)
    both = mx.vector_maximal(mx.VectorField((f, g)), q).array
    assert np.all(both >= np.maximum(mx.maximal_1d(f).array, mx.maximal_1d(g).array) * (1 - 1e-12))
    if q == 2.0:
        return
    agg = GridFunction1D.from_array(mx.aggregate([f.array, g.array], q), f.origin, f.cell_width)
    m_agg = mx.maximal_1d(agg).array
    if q == 1.0:  # sublinearity
        assert np.all(m_agg <= both * (1 + 1e-12))
    else:  # monotonicity of M under the pointwise sup
        assert np.all(both <= m_agg * (1 + 1e-12))


def test_vector_field_geometry():
    with pytest.raises(ValueError):
        mx.VectorField((GridFunction1D.from_array([1.0]), GridFunction1D.from_array([1.0, 2.0])))
    with pytest.raises(DomainError):
        mx.aggregate([np.ones(2)], 0.0)


# --- weight criteria -----------------------------------------------------------------------


@pytest.mark.parametrize("p", [1.5, 2.0, 4.0])
@pytest.mark.parametrize("q", [0.5, 1.0, 2.0])
def test_criterion_q_power(p, q):
    res = mx.weight_criterion_q(nm.PowerWeight(1 / p), q, np.logspace(-3, 3, 7))
    assert res.sup_ratio == pytest.approx(1 / (p - 1), rel=1e-6)
    assert all(v == pytest.approx(1 / (p - 1), rel=1e-6) for _, v in res.per_r)


@pytest.mark.parametrize("p", [1.5, 2.0, 4.0])
def test_criterion_inf_power(p):
    got = mx.weight_criterion_inf(nm.PowerWeight(1 / p), np.logspace(-3, 3, 7))
    assert got == pytest.approx(p / (p - 1), rel=1e-6)
    # the same weight through the non-monotone route (running sup on a grid)
    w = nm.CallableWeight(lambda t: t ** (1 / p), "power", monotone=False)
    assert mx.weight_criterion_inf(w, np.logspace(-3, 3, 7)) == pytest.approx(p / (p - 1), rel=1e-3)


def test_criterion_diverges_for_linear_weight():
    assert math.isinf(mx.weight_criterion_q(nm.PowerWeight(1.0), 2.0, [1.0]).sup_ratio)
    assert math.isinf(mx.weight_criterion_inf(nm.PowerWeight(1.0), [1.0]))


def test_orlicz_weight_criteria():
    w = nm.OrliczWeight(PowerLaw(2))
    assert mx.weight_criterion_q(w, 1.0, np.logspace(-2, 2, 5)).sup_ratio == pytest.approx(1.0, rel=1e-6)
    assert mx.weight_criterion_inf(w, np.logspace(-2, 2, 5)) == pytest.approx(2.0, rel=1e-6)


def test_criterion_domain():
    with pytest.raises(DomainError):
        mx.weight_criterion_q(nm.PowerWeight(0.5), 1.0, [0.0])
    with pytest.raises(DomainError):
        mx.weight_criterion_inf(nm.PowerWeight(0.5), [])


# --- Herz -------------------------------------------------------------------------------------


def test_herz_indicator():
    n = 32
    chi = GridFunction1D.from_array([1.0] * n, 0.0, 1.0 / n)
    (t, r), = mx.herz_ratio(chi, [1.0])
    assert abs(r - 1.0) <= 1.0 / n


@given(grids(), st.floats(1e-3, 1e3))
def test_herz_scale_invariant(f, c):
    a = [r for _, r in mx.herz_ratio(f, [0.5, 2.0])]
    b = [r for _, r in mx.herz_ratio(f.scaled(c), [0.5, 2.0])]
    assert np.allclose(a, b, rtol=1e-10)


def test_herz_zero_function():
    with pytest.raises(DomainError):
        mx.herz_ratio(GridFunction1D.from_array([0.0]), [1.0])
