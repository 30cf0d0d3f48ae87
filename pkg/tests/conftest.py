import pytest
from mpmath import mp


@pytest.fixture(autouse=True)
def _restore_mp_precision():
    # library code uses local workprec blocks; this guards against a test
    # leaking a changed global precision into the next one
    saved = mp.prec
    yield
    mp.prec = saved
