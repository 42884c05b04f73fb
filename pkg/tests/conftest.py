import time

import pytest

_SESSION_START = time.perf_counter()


@pytest.fixture(scope="session")
def session_elapsed():
    """Callable returning the wall-clock seconds since the session began."""
    return lambda: time.perf_counter() - _SESSION_START
