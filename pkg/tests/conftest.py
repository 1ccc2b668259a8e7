import numpy as np
import pytest

from decayscope import BumpsProfile, random_hpd
from decayscope.matrix_kernel import principal_log_hpd

TWO_PI = 2.0 * np.pi


def random_bumps_profile(rng, n=2, count=None, strength=1.0):
    """Random disjoint-bump profile with PSD damping matrices.

    Bump amplitudes are logs of random HPD factors, scaled; this keeps
    the per-bump cocycle factors well conditioned.
    """
    count = count if count is not None else int(rng.integers(1, 4))
    arc = TWO_PI / count
    width = float(rng.uniform(0.3, 0.9)) * arc
    centers = [(i + 0.5) * arc for i in range(count)]
    bumps = tuple(
        (c, strength * -principal_log_hpd(random_hpd(n, rng))) for c in centers
    )
    return BumpsProfile(bumps, width)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)
