import numpy as np
import pytest

from qcorr import linalg


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    # force any JIT compilation before timed tests run
    linalg.hermitian_eigensystem(np.eye(8, dtype=np.complex128))
    linalg.hermitian_eigensystem(np.eye(4, dtype=np.complex128))
    linalg.hermitian_eigensystem(np.eye(3, dtype=np.complex128))
