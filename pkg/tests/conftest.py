import numpy as np
import pytest

from opofar import OpoParams, QuadratureSpec


@pytest.fixture
def ref_params():
    """Reference parameter set: unit linewidths/diffraction, detunings
    -0.25, walk-off only on the second field, pump at 0.99."""
    return OpoParams()


@pytest.fixture
def quad():
    return QuadratureSpec(omega_max=50.0, rel_tol=1e-9, abs_tol=1e-10)


@pytest.fixture
def rng():
    return np.random.default_rng(20240811)


def random_params(rng, a0_max=0.999):
    return OpoParams(
        gamma1=rng.uniform(0.5, 2.0), gamma2=rng.uniform(0.5, 2.0),
        delta1=rng.uniform(-0.6, 0.2), delta2=rng.uniform(-0.6, 0.2),
        a1=rng.uniform(0.5, 2.0), a2=rng.uniform(0.5, 2.0),
        rho1=rng.uniform(-0.5, 0.5), rho2=rng.uniform(-1.5, 1.5),
        a0=rng.uniform(0.0, a0_max), sigma=1.0,
    )
