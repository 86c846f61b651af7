"""Shared hypothesis strategies."""

import numpy as np
from hypothesis import strategies as st

from orlicz_kit.rearrange import GridFunction1D, MeasureStepFunction

level = st.floats(min_value=1e-3, max_value=1e3, allow_nan=False, allow_infinity=False)
cells = st.lists(st.tuples(level, level), min_size=1, max_size=12)
step_functions = cells.map(MeasureStepFunction.from_cells)

sample = st.one_of(st.just(0.0), level)
grid_samples = st.lists(sample, min_size=1, max_size=24).filter(lambda s: any(v > 0 for v in s))


@st.composite
def grids(draw, n=None):
    samples = draw(grid_samples if n is None else st.lists(sample, min_size=n, max_size=n))
    if not any(v > 0 for v in samples):
        samples[0] = 1.0
    origin = draw(st.floats(-5, 5))
    width = draw(st.floats(0.01, 10))
    return GridFunction1D.from_array(np.asarray(samples), origin, width)


@st.composite
def grid_pairs(draw):
    f = draw(grids())
    g = draw(grids(len(f.samples)))
    return f, GridFunction1D.from_array(g.array, f.origin, f.cell_width)
