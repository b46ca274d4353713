"""Parity between the compiled kernels and the pure-Python fallback."""

import numpy as np
import pytest

from flatlab import _backend, _corepy

speedups = pytest.importorskip(
    "flatlab._speedups", reason="compiled extension not built")


def _tail(p):
    # the primitive-cubic tail actually used for this prime
    from flatlab.singer import _find_primitive_cubic
    _, tail = _find_primitive_cubic(p)
    return tail


@pytest.mark.parametrize("p", [2, 3, 5, 13, 31])
def test_singer_scan_parity(p):
    q = p * p + p + 1
    tail = _tail(p)
    a = speedups.singer_exponent_scan(p, tail[0], tail[1], tail[2], q)
    b = _corepy.singer_exponent_scan(p, tail[0], tail[1], tail[2], q)
    assert np.array_equal(a, b)
    assert len(a) == p + 1


def test_direct_grid_eval_parity():
    rng = np.random.default_rng(0)
    freqs = np.unique(rng.integers(-200, 200, size=15)).astype(np.int64)
    coeffs = (rng.normal(size=freqs.size)
              + 1j * rng.normal(size=freqs.size)).astype(np.complex128)
    for m, off in ((7, 0.0), (128, 0.25), (211, 1e-3)):
        a = speedups.direct_grid_eval(freqs, coeffs, m, off)
        b = _corepy.direct_grid_eval(freqs, coeffs, m, off)
        assert np.max(np.abs(a - b)) < 1e-12


def test_direct_angle_eval_parity():
    rng = np.random.default_rng(1)
    freqs = np.unique(rng.integers(-50, 50, size=10)).astype(np.int64)
    coeffs = (rng.normal(size=freqs.size)
              + 1j * rng.normal(size=freqs.size)).astype(np.complex128)
    angles = rng.random(64)
    a = speedups.direct_angle_eval(freqs, coeffs, angles)
    b = _corepy.direct_angle_eval(freqs, coeffs, angles)
    assert np.max(np.abs(a - b)) < 1e-11


def test_active_backend_reports_name():
    assert _backend.backend_name() in ("cython", "python")


def test_pure_env_forces_python_backend():
    import subprocess
    import sys

    out = subprocess.run(
        [sys.executable, "-c",
         "import flatlab; print(flatlab.backend_name())"],
        capture_output=True, text=True, env={"FLATLAB_PURE": "1", "PATH": ""},
        check=True)
    assert out.stdout.strip() == "python"
