import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from orlicz_kit import norms as nm
from orlicz_kit.rearrange import GridFunction1D, MeasureStepFunction, rearrangement
from orlicz_kit.youngfn import (
    INF,
    Capped,
    Conjugate,
    Deadzone,
    DescriptionError,
    DomainError,
    ExpMinusOne,
    PhiTheta,
    PowerLaw,
    PowerLog,
    default_catalog,
)

from strategies import grid_pairs, step_functions

CATALOG = default_catalog()
IDS = [phi.label for phi in CATALOG]
powers = st.sampled_from([1.0, 1.5, 2.0, 3.0])


# --- independent oracles for the power case ------------------------------------------


def luxemburg_power_oracle(p, f):
    return sum(v**p * m for v, m in f.cells) ** (1 / p)


def weak_power_oracle(p, f):
    r = rearrangement(f)
    return max(v * t ** (1 / p) for v, t in zip(r.values, r.breakpoints[1:]))


def lorentz_power_oracle(p, q, f):
    # w(t) = t^(1/p); each piece contributes c^q (p/q)(b^(q/p) - a^(q/p))
    r = rearrangement(f)
    s = sum(c**q * p / q * (b ** (q / p) - a ** (q / p)) for c, a, b in zip(r.values, r.breakpoints, r.breakpoints[1:]))
    return s ** (1 / q)


@given(powers, step_functions)
def test_luxemburg_power(p, f):
    got = nm.luxemburg_norm(PowerLaw(p), f)
    assert got.value == pytest.approx(luxemburg_power_oracle(p, f), rel=1e-9)
    assert got.lower <= got.value <= got.upper


@given(powers, step_functions)
def test_weak_power(p, f):
    oracle = weak_power_oracle(p, f)
    for res in nm.weak_norm_family(PowerLaw(p), f):
        assert res.value == pytest.approx(oracle, rel=1e-9)


@given(powers, st.sampled_from([0.5, 1.0, 2.0, 3.0]), step_functions)
def test_lorentz_power(p, q, f):
    got = nm.lorentz_norm(PowerLaw(p), q, f)
    oracle = lorentz_power_oracle(p, q, f)
    assert got.value == pytest.approx(oracle, rel=1e-7)
    assert got.lower <= oracle * (1 + 1e-12) and oracle <= got.upper * (1 + 1e-12)


def test_lorentz_equals_lebesgue_when_q_equals_p():
    f = MeasureStepFunction.from_cells([(2.0, 0.5), (1.0, 3.0)])
    assert nm.lorentz_norm(PowerLaw(2), 2.0, f).value == pytest.approx(math.sqrt(4 * 0.5 + 3.0), rel=1e-8)


def test_luxemburg_small_examples():
    assert nm.luxemburg_norm(PowerLaw(2), MeasureStepFunction.indicator(4.0)).value == pytest.approx(2.0, rel=1e-9)
    assert nm.luxemburg_norm(Capped(1.0), MeasureStepFunction.indicator(0.5)).value == pytest.approx(1.0, rel=1e-9)
    assert nm.luxemburg_norm(PowerLog(), MeasureStepFunction.zero()).value == 0.0


@pytest.mark.parametrize("phi", CATALOG, ids=IDS)
@given(f=step_functions, c=st.floats(1e-3, 1e3))
def test_homogeneity(phi, f, c):
    a = nm.weak_norm(phi, f).value
    b = nm.weak_norm(phi, f.scaled(c)).value
    assert b == pytest.approx(c * a, rel=1e-8)
    a = nm.luxemburg_norm(phi, f).value
    b = nm.luxemburg_norm(phi, f.scaled(c)).value
    assert b == pytest.approx(c * a, rel=1e-8)


@pytest.mark.parametrize("phi", CATALOG, ids=IDS)
@given(f=step_functions)
def test_weak_family_agrees(phi, f):
    a, b, c = nm.weak_norm_family(phi, f)
    assert a.value == pytest.approx(b.value, rel=1e-8)
    assert c.value == pytest.approx(b.value, rel=1e-8)


@pytest.mark.parametrize("phi", [PowerLaw(2), PowerLog(), ExpMinusOne()], ids=lambda p: p.label)
@given(f=step_functions)
def test_weak_below_luxemburg(phi, f):
    # Phi(t) m(f, t) <= modular, so the weak norm never exceeds the Luxemburg norm
    assert nm.weak_norm(phi, f).value <= nm.luxemburg_norm(phi, f).value * (1 + 1e-8)


@given(f=step_functions, bump=st.floats(1.0, 10.0))
def test_lorentz_monotone(f, bump):
    phi = PowerLog()
    g = MeasureStepFunction(tuple(v * bump for v in f.values[:1]) + f.values[1:], f.measures)
    assert nm.lorentz_norm(phi, 1.0, f).value <= nm.lorentz_norm(phi, 1.0, g).value * (1 + 1e-8)


def test_deadzone_lorentz_closed_form():
    for e in (math.e - 1, 0.01, 10.0, 1e4):
        got = nm.lorentz_norm(Deadzone(), 1.0, MeasureStepFunction.indicator(e))
        assert got.value == pytest.approx(math.log1p(e), rel=1e-6)


def test_exp_lorentz_is_infinite():
    got = nm.lorentz_norm(ExpMinusOne(), 1.0, MeasureStepFunction.indicator(1.0))
    assert math.isinf(got.value) and math.isinf(got.lower)


@pytest.mark.parametrize("phi", CATALOG, ids=IDS)
def test_indicator_weak_norm(phi):
    for e in (1e-3, 0.7, 5.0, 1e3):
        got = nm.lorentz_norm(phi, INF, MeasureStepFunction.indicator(e)).value
        assert got == pytest.approx(1.0 / float(phi.inverse(1.0 / e)), rel=1e-10)


@pytest.mark.parametrize("phi", [PowerLaw(2), PowerLog(), Conjugate(PowerLaw(3)), PhiTheta(PowerLog(), 2.0)],
                         ids=lambda p: p.label)
def test_char_norm_upper_factor(phi):
    q, k = nm.doubling_exponent(phi)
    assert q == pytest.approx(math.log2(k))
    for e in (1e-3, 1.0, 1e3):
        b = nm.char_norm_bounds(phi, q, e)
        assert b.lower <= b.computed.upper
        assert b.computed.lower <= b.upper_factor * b.closed_form


def test_char_norm_power_oracle():
    # t^3, q = 2, |E| = 2: (3/2)^(1/2) 2^(1/3)
    b = nm.char_norm_bounds(PowerLaw(3), 2.0, 2.0)
    assert b.computed.value == pytest.approx(math.sqrt(1.5) * 2 ** (1 / 3), rel=1e-8)
    assert nm.doubling_exponent(Deadzone()) is None


def test_generalized_lorentz():
    f = MeasureStepFunction.indicator(4.0)
    # w = t^(1/2), q = 1: int_0^4 t^(1/2) dt/t = 4
    assert nm.generalized_lorentz_norm(nm.PowerWeight(0.5), 1.0, f).value == pytest.approx(4.0, rel=1e-8)
    assert nm.generalized_lorentz_norm(nm.PowerWeight(0.5), INF, f).value == pytest.approx(2.0, rel=1e-12)
    w = nm.CallableWeight(lambda t: np.sqrt(t), "sqrt", monotone=True)
    assert nm.generalized_lorentz_norm(w, 1.0, f).value == pytest.approx(4.0, rel=1e-8)
    with pytest.raises(DomainError):
        nm.generalized_lorentz_norm(w, 0.0, f)


def test_weight_descriptions():
    w = nm.weight_from_desc({"kind": "orlicz", "phi": {"kind": "power", "p": 2}})
    assert w(4.0) == pytest.approx(2.0)
    assert nm.weight_from_desc(w.to_desc()).to_desc() == w.to_desc()
    for bad in ({"kind": "power"}, {"kind": "other"}, {"kind": "power", "alpha": -1}):
        with pytest.raises(DescriptionError):
            nm.weight_from_desc(bad)


@pytest.mark.parametrize("phi", [PowerLaw(1.5), PowerLaw(2.0), PowerLog()], ids=lambda p: p.label)
@given(pair=grid_pairs())
def test_pairing_chain(phi, pair):
    f, g = pair
    rep = nm.pairing_checks(phi, f, g)
    assert rep.passed, rep.records[0].messages


def test_pairing_rejects_mismatched_grids():
    f = GridFunction1D.from_array([1.0, 2.0])
    g = GridFunction1D.from_array([1.0, 2.0], origin=1.0)
    with pytest.raises(DomainError):
        nm.pairing_checks(PowerLaw(2), f, g)


def test_pairing_vacuous_when_norm_infinite():
    # exp(t)-1 has an infinite L^{Phi,1} norm on every nonzero function
    f = GridFunction1D.from_array([1.0])
    rep = nm.pairing_checks(ExpMinusOne(), f, f)
    assert rep.passed and rep.records[0].vacuous == 1
