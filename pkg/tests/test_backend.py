"""The numba kernels and the pure-numpy fallback must agree."""

import os
import subprocess
import sys

import numpy as np
import pytest

from pptq import _kernels_numpy
from conftest import random_hermitian

numba_kernels = pytest.importorskip("pptq._kernels_numba")


def test_backend_names():
    assert _kernels_numpy.BACKEND_NAME == "numpy"
    assert numba_kernels.BACKEND_NAME == "numba"


def test_pt_matrix_agrees():
    rng = np.random.default_rng(0)
    for d_a, d_b in ((2, 2), (2, 3), (3, 3), (1, 4)):
        m = random_hermitian(d_a * d_b, rng).astype(np.complex128)
        a = _kernels_numpy.pt_matrix(m, d_a, d_b)
        b = numba_kernels.pt_matrix(m, d_a, d_b)
        assert np.abs(a - b).max() == 0.0


def test_dykstra_diag_agrees():
    rng = np.random.default_rng(1)
    from pptq import max_entangled
    rho = np.ascontiguousarray(max_entangled(2).matrix)
    x0 = np.eye(4, dtype=np.complex128)
    for t in (1.5, 1.95, 2.05):
        xa, fa, ia = _kernels_numpy.dykstra_diag(x0, rho, 2, 2, t,
                                                 2000, 1e-8, 10, 30)
        xb, fb, ib = numba_kernels.dykstra_diag(x0, rho, 2, 2, t,
                                                2000, 1e-8, 10, 30)
        assert fa == fb
        assert np.abs(xa - xb).max() < 1e-9


def test_dykstra_cross_agrees():
    from pptq import max_entangled, random_state
    sigma = np.ascontiguousarray(random_state(2, 2, 5).matrix)
    rho = np.ascontiguousarray(max_entangled(2).matrix)
    x0 = np.eye(4, dtype=np.complex128)
    for s in (1.05, 1.4):
        xa, fa, _ = _kernels_numpy.dykstra_cross(x0, 1.0, sigma, rho, 2, 2, s,
                                                 2000, 1e-8, 10, 30)
        xb, fb, _ = numba_kernels.dykstra_cross(x0, 1.0, sigma, rho, 2, 2, s,
                                                2000, 1e-8, 10, 30)
        assert fa == fb
        assert np.abs(xa - xb).max() < 1e-9


def test_epi_projection_agrees():
    rng = np.random.default_rng(2)
    for _ in range(50):
        w = rng.standard_normal(6) * 3
        v = float(rng.standard_normal() * 2)
        wa, ua = _kernels_numpy._proj_epi_linf(w, v)
        wb, ub = numba_kernels._proj_epi_linf(w, v)
        assert abs(ua - ub) < 1e-12
        assert np.abs(wa - wb).max() < 1e-12
        assert np.abs(wa).max() <= ua + 1e-12


def test_epi_projection_is_projection():
    # projecting a point already in the epigraph is the identity
    w = np.array([0.5, -0.2, 0.1])
    wa, ua = _kernels_numpy._proj_epi_linf(w, 0.6)
    assert ua == 0.6 and np.array_equal(wa, w)
    # heavily negative scalar part clamps to the apex
    wb, ub = _kernels_numpy._proj_epi_linf(np.zeros(3), -5.0)
    assert ub == 0.0 and np.abs(wb).max() == 0.0


def test_env_flag_forces_numpy():
    env = dict(os.environ, PPTQ_BACKEND="numpy")
    proc = subprocess.run(
        [sys.executable, "-c",
         "import pptq; print(pptq.backend_name())"],
        capture_output=True, text=True, env=env,
    )
    assert proc.returncode == 0
    assert proc.stdout.strip() == "numpy"


def test_env_flag_rejects_unknown():
    env = dict(os.environ, PPTQ_BACKEND="cuda")
    proc = subprocess.run(
        [sys.executable, "-c", "import pptq"],
        capture_output=True, text=True, env=env,
    )
    assert proc.returncode != 0


def test_full_solve_agrees_across_backends(tmp_path):
    # end to end: tempered negativity of the same state on both backends
    script = (
        "import pptq\n"
        "from pptq import max_entangled\n"
        "res = pptq.tempered_negativity(max_entangled(2))\n"
        "print(repr(res.n_tau))\n"
    )
    outs = {}
    for backend in ("numpy", "numba"):
        env = dict(os.environ, PPTQ_BACKEND=backend)
        proc = subprocess.run([sys.executable, "-c", script],
                              capture_output=True, text=True, env=env)
        assert proc.returncode == 0, proc.stderr
        outs[backend] = float(proc.stdout.strip())
    assert abs(outs["numpy"] - outs["numba"]) < 1e-9
