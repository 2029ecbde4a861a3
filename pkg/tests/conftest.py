import numpy as np
import pytest

from symest._backend import available_backends
from symest.dynamics import iterate, simulate_symbolic

#: Table of reference values for the generating parameters (-1.71, 0.8):
#: (true orbit point, averaged candidate, refined candidate) for i = 0..4.
REFERENCE_FIRST_FIVE = (
    (0.80000000, 0.80023055, 0.79999129),
    (-0.09440000, -0.09502181, -0.09434708),
    (0.98476157, 0.98446928, 0.98477906),
    (-0.65828166, -0.65722148, -0.65829647),
    (0.25899758, 0.26034877, 0.25898394),
)

TRUE_THETA = -1.71
TRUE_Y0 = 0.8


@pytest.fixture(scope="session")
def paper_bits_1000() -> np.ndarray:
    return simulate_symbolic(TRUE_THETA, TRUE_Y0, 1000)


@pytest.fixture(scope="session")
def true_orbit_1000() -> np.ndarray:
    return iterate(TRUE_THETA, TRUE_Y0, 1000).full()


def backend_items() -> list:
    return sorted(available_backends().items())


@pytest.fixture(params=[name for name, _ in backend_items()])
def kernel_backend(request):
    return available_backends()[request.param]
