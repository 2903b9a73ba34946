import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from mixint import convex_body as cb

settings.register_profile("default", max_examples=40, deadline=None, suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def polygons(min_area=0.05, coord=3):
    """Hypothesis strategy: full-dimensional lattice-free random polygons."""
    pt = st.tuples(st.floats(-coord, coord, allow_nan=False), st.floats(-coord, coord, allow_nan=False))
    return (
        st.lists(pt, min_size=3, max_size=9)
        .map(lambda pts: cb.hull(np.array(pts), 2))
        .filter(lambda p: p.volume > min_area)
    )


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
