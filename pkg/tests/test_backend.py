import os
import subprocess
import sys
from fractions import Fraction as F

import pytest

from meanmedian import BACKEND
from meanmedian import _kernel_py

try:
    from meanmedian import _kernel_cy
except ImportError:
    _kernel_cy = None

DRIVING_73 = (1, 2, 4, 5, 6, 7, 9, 8, 10, 17, 18, 13, 14, 21, 15, 22, 16, 29, 30, 31,
              32, 37, 38, 39, 40, 41, 42, 11, 45, 46, 47, 48, 49, 50, 51, 27, 52, 73,
              53, 25, 54, 28, 26, 12, 23, 24, 33, 59, 60, 61, 62, 63, 34, 64, 65, 66,
              67, 68, 69, 70, 71, 72, 19, 20, 35, 36, 57, 58, 55, 43, 56, 44, 3)


def test_backend_name_valid():
    assert BACKEND in ("pure", "compiled")


@pytest.mark.skipif(_kernel_cy is None, reason="compiled kernel unavailable")
def test_replay_kernels_agree():
    assert _kernel_py.replay_core(DRIVING_73) == _kernel_cy.replay_core(DRIVING_73)


@pytest.mark.skipif(_kernel_cy is None, reason="compiled kernel unavailable")
def test_traj_kernels_agree_on_non_terminating_prefix():
    x = F(501, 1000)
    args = (x.numerator, x.denominator, 60)  # below L = 73: both return partials
    assert _kernel_py.traj_core(*args) == _kernel_cy.traj_core(*args)


def test_pure_kernel_env_override():
    code = "import meanmedian; print(meanmedian.BACKEND)"
    env = dict(os.environ, MMM_PURE_KERNEL="1")
    out = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, env=env)
    assert out.stdout.strip() == "pure"
