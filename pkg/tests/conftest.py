import numpy as np
import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", deadline=None, max_examples=40, suppress_health_check=[HealthCheck.too_slow]
)
settings.load_profile("default")


@pytest.fixture
def rng():
    return np.random.default_rng(20261016)


def random_hermitian(rng, dim, complex_=True, scale=1.0):
    """Random Hermitian matrix with spectral norm ``scale``."""
    a = rng.standard_normal((dim, dim))
    if complex_:
        a = a + 1j * rng.standard_normal((dim, dim))
    h = a + a.conj().T
    return scale * h / np.linalg.norm(h, 2)
