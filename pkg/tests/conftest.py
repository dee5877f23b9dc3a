import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from predual import kernels
from predual.catalog import c3, m3, s2
from predual.exemplars import gen_structure

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow, HealthCheck.function_scoped_fixture]
)
settings.load_profile("default")

BACKENDS = [b for b in kernels.BACKENDS if b != "numba" or kernels.HAVE_NUMBA]


@pytest.fixture(params=BACKENDS)
def backend(request):
    with kernels.use_backend(request.param):
        yield request.param


def structures(max_n=7, modes=("subset", "transitive", "leq", "arbitrary")):
    return st.builds(
        gen_structure,
        st.integers(1, max_n),
        st.integers(0, 10**6),
        st.sampled_from(modes),
    )


@pytest.fixture
def C3():
    return c3()


@pytest.fixture
def M3():
    return m3()


@pytest.fixture
def S2_low():
    """S2 with 0 < 0 and 0 < a only."""
    return s2(prec=np.array([[True, True], [False, False]]))


VERDICTS: list[str] = []


@pytest.fixture
def verdict():
    """Record one PASS/FAIL line for an acceptance criterion, then assert it."""
    def report(label: str, ok: bool, detail: str = "") -> None:
        line = f"{'PASS' if ok else 'FAIL'} {label}" + (f": {detail}" if detail else "")
        VERDICTS.append(line)
        print(line)
        assert ok, line
    return report


def pytest_terminal_summary(terminalreporter):
    if VERDICTS:
        terminalreporter.section("acceptance")
        for line in VERDICTS:
            terminalreporter.write_line(line)
