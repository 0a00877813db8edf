import os

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from mumford_diffusion.padic import FieldParams

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("ci", max_examples=200, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

FIELDS = [(2, 1), (3, 1), (5, 1), (3, 2), (2, 2)]


@st.composite
def fields(draw, choices=FIELDS, precision=16):
    p, f = draw(st.sampled_from(choices))
    return FieldParams(p, f, precision=precision)


@st.composite
def scalars(draw, params, vmin=-3, vmax=4, nonzero=False, ndigits=6):
    val = draw(st.integers(vmin, vmax))
    digits = [tuple(draw(st.integers(0, params.p - 1)) for _ in range(params.f)) for _ in range(ndigits)]
    if nonzero and not any(digits[0]):
        digits[0] = (1,) + (0,) * (params.f - 1)
    x = params.from_digits(digits, val=val)
    return x


@st.composite
def field_and_scalars(draw, n=2, nonzero=False, **kw):
    params = draw(fields(**kw))
    return (params,) + tuple(draw(scalars(params, nonzero=nonzero)) for _ in range(n))


@pytest.fixture
def F5():
    return FieldParams(5)


@pytest.fixture
def F3():
    return FieldParams(3)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import LINES
    except ImportError:
        return
    if LINES:
        terminalreporter.section("acceptance criteria")
        for line in LINES:
            terminalreporter.write_line(line)
