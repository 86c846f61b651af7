import pytest
from hypothesis import given
from hypothesis import strategies as st

from orlicz_kit.rearrange import (
    GridFunction1D,
    InputFormatError,
    MeasureStepFunction,
    RearrangementStep,
    averaged_rearrangement,
    distribution,
    format_grid_csv,
    format_step_csv,
    grid_product_integral,
    parse_grid_csv,
    parse_step_csv,
    radial_profile_nd,
    rearrangement,
    rearrangement_pairing,
)
from orlicz_kit.youngfn import DomainError

from strategies import grid_pairs, grids, step_functions


def test_rearrangement_merges_ties_and_drops_zeros():
    f = MeasureStepFunction.from_cells([(1.0, 2.0), (3.0, 1.0), (1.0, 0.5), (0.0, 7.0)])
    r = rearrangement(f)
    assert r.breakpoints == (0.0, 1.0, 3.5)
    assert r.values == (3.0, 1.0)
    assert r(0.0) == 3.0 and r(1.0) == 1.0 and r(3.5) == 0.0


def test_zero_function():
    r = rearrangement(MeasureStepFunction.zero())
    assert r.is_zero and r(1.0) == 0.0
    with pytest.raises(DomainError):
        averaged_rearrangement(r, 0.0)


def test_rearrangement_step_validation():
    with pytest.raises(ValueError):
        RearrangementStep((0.0, 1.0, 2.0), (1.0, 2.0))
    with pytest.raises(ValueError):
        RearrangementStep((0.5, 1.0), (1.0,))
    with pytest.raises(ValueError):
        MeasureStepFunction((1.0,), (0.0,))


@given(step_functions, st.floats(0, 2e3))
def test_equimeasurable(f, t):
    r = rearrangement(f)
    assert r.distribution(t) == pytest.approx(distribution(f, t), rel=1e-12, abs=1e-12)


@given(step_functions)
def test_rearrangement_preserves_integral_and_sup(f):
    r = rearrangement(f)
    total = sum(v * m for v, m in f.cells)
    assert r.integral(r.breakpoints[-1]) == pytest.approx(total, rel=1e-12)
    assert r(0.0) == max(f.values)


@given(step_functions, st.floats(1e-3, 1e4))
def test_maximal_average_is_at_least_value(f, t):
    # f** >= f*, and f** is non-increasing
    r = rearrangement(f)
    a = averaged_rearrangement(r, t)
    assert a >= r(t) * (1 - 1e-12)
    assert averaged_rearrangement(r, 2 * t) <= a * (1 + 1e-12)


@given(step_functions, st.integers(1, 3))
def test_radial_profile_round_trip(f, n):
    r = rearrangement(f)
    g = radial_profile_nd(r, n)
    assert g.ambient_dim == n
    assert rearrangement(g) == r


@given(grid_pairs())
def test_hardy_littlewood_pairing(pair):
    f, g = pair
    direct = grid_product_integral(f, g)
    paired = rearrangement_pairing(rearrangement(f.to_step()), rearrangement(g.to_step()))
    assert direct <= paired * (1 + 1e-12) + 1e-300


def test_pairing_oracle():
    # f* = chi_(0,2), g* = 3 chi_(0,1) + chi_(1,4): integral 3 + 1
    f = RearrangementStep.from_pieces([(1.0, 2.0)])
    g = RearrangementStep.from_pieces([(3.0, 1.0), (1.0, 3.0)])
    assert rearrangement_pairing(f, g) == 4.0


@given(step_functions)
def test_step_csv_round_trip(f):
    assert parse_step_csv(format_step_csv(f)) == f


@given(grids())
def test_grid_csv_round_trip(f):
    assert parse_grid_csv(format_grid_csv(f)) == f


def test_grid_geometry():
    f = GridFunction1D.from_array([1.0, 2.0], origin=-1.0, cell_width=0.5)
    assert list(f.edges) == [-1.0, -0.5, 0.0]
    assert list(f.midpoints) == [-0.75, -0.25]
    p = f.padded(1, 2)
    assert p.origin == -1.5 and list(p.samples) == [0.0, 1.0, 2.0, 0.0, 0.0]
    assert f.to_step().cells == [(1.0, 0.5), (2.0, 0.5)]


@pytest.mark.parametrize(
    "text, where",
    [
        ("value,measure\n1,2\nx,1\n", "src:3:1"),
        ("value,measure\n1,-2\n", "src:2:3"),
        ("val,measure\n1,2\n", "src:1:1"),
        ("value,measure\n1,2,3\n", "src:2:1"),
    ],
)
def test_step_csv_diagnostics(text, where):
    with pytest.raises(InputFormatError) as exc:
        parse_step_csv(text, "src")
    assert str(exc.value).startswith(where)


def test_grid_csv_diagnostics():
    with pytest.raises(InputFormatError) as exc:
        parse_grid_csv("origin,cell_width\n0,0\n1\n", "g")
    assert str(exc.value).startswith("g:2:3")
    with pytest.raises(InputFormatError) as exc:
        parse_grid_csv("origin,cell_width\n0,1\n1\nnan\n", "g")
    assert str(exc.value).startswith("g:4:1")
