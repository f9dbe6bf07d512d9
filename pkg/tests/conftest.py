import math

import hypothesis.strategies as st
import numpy as np
import pytest
from hypothesis import assume

from partial_eraser import Axis, Branch, IntensityQuadruple, PolarizationState

finite = dict(allow_nan=False, allow_infinity=False)

alphas = st.floats(min_value=0.0, max_value=1.0, **finite)
alphas_positive = st.floats(min_value=1e-6, max_value=1.0, **finite)
axes = st.sampled_from(list(Axis))
branches = st.sampled_from(list(Branch))


@st.composite
def polarization_states(draw, complex_amps: bool = True):
    """Random normalized single-photon state, bounded away from basis poles."""
    parts = [draw(st.floats(min_value=-1.0, max_value=1.0, **finite)) for _ in range(4)]
    up = complex(parts[0], parts[1] if complex_amps else 0.0)
    right = complex(parts[2], parts[3] if complex_amps else 0.0)
    norm = math.sqrt(abs(up) ** 2 + abs(right) ** 2)
    assume(norm > 1e-3)
    return PolarizationState(up / norm, right / norm)


@st.composite
def balanced_states(draw):
    """Random state with both linear components well away from zero."""
    state = draw(polarization_states())
    assume(abs(state.amp_up) > 1e-2 and abs(state.amp_right) > 1e-2)
    return state


@st.composite
def quadruples(draw, low: float = 0.01):
    values = [
        draw(st.floats(min_value=low, max_value=1.0, **finite)) for _ in range(4)
    ]
    return IntensityQuadruple(*values)


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
