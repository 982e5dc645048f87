import numpy as np
import pytest

from maxdiv import available_backends, get_backend, set_backend
from maxdiv import kernels


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    """Trigger JIT compilation up front so timed sections measure algorithms,
    not compiler work."""
    z = np.eye(2)
    kernels.scan_subsets(z, 1e-9, 1e-10)
    kernels.grid_best(z, np.array([0.0, 1.0, 2.0, np.inf]), 4)


@pytest.fixture(params=available_backends())
def each_backend(request):
    old = get_backend()
    set_backend(request.param)
    yield request.param
    set_backend(old)
