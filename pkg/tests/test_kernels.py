"""Tests for stagbench.kernels: numpy/numba parity and formula identities."""

from __future__ import annotations

import json
import os
import subprocess
import sys

import numpy as np
import pytest

from stagbench import kernels

NAMES = ("zhou1", "zhou2", "zhou3", "sphere")


def _sample(n=64, dim=4, seed=7, lo=-3.0, hi=3.0):
    gen = np.random.Generator(np.random.PCG64(seed))
    return gen.uniform(lo, hi, size=(n, dim))


class TestReferenceFormulas:
    """Pin each kernel against a direct, independent transcription."""

    def test_zhou1_value_matches_direct_sum(self):
        X = _sample()
        w = kernels.FREQ
        expected = np.empty(X.shape[0])
        for r, x in enumerate(X):
            total = (x[0] - 1.0) ** 2 + np.sin(w * (x[0] - 1.0) ** 2) ** 2
            for i in range(x.size - 1):
                res = x[i + 1] - 2.0 * x[i] ** 2
                total += w * res**2 + w * np.sin(w * res) ** 2
            expected[r] = total
        assert np.allclose(kernels.zhou1_value_np(X), expected, rtol=1e-13, atol=0)

    def test_zhou2_value_matches_direct_sum(self):
        X = _sample()
        w = kernels.FREQ
        expected = np.empty(X.shape[0])
        for r, x in enumerate(X):
            total = (x[0] + 1.0) ** 2 + np.sin(w * (x[0] + 1.0) ** 2) ** 2
            for i in range(x.size - 1):
                s = x[i + 1] ** 2 + 2.0 * x[i]
                total += w * s**2 + w * np.sin(w * s**2) ** 2
            expected[r] = total
        assert np.allclose(kernels.zhou2_value_np(X), expected, rtol=1e-13, atol=0)

    def test_zhou3_value_matches_direct_sum(self):
        X = _sample()
        w = kernels.FREQ
        expected = np.empty(X.shape[0])
        for r, x in enumerate(X):
            v = x[0] + 1.0
            total = v**2 * (1.0 + np.sin(w * v**2) ** 2)
            for i in range(x.size - 1):
                t = x[i + 1] ** 2 + 2.0 ** (i + 1) * x[i]
                total += w * t**2 * (1.0 + w * np.sin(w * t**2) ** 2)
            expected[r] = total
        assert np.allclose(kernels.zhou3_value_np(X), expected, rtol=1e-13, atol=0)

    def test_sphere_identities(self):
        X = _sample()
        assert np.allclose(kernels.sphere_value_np(X), np.sum(X**2, axis=1))
        assert np.allclose(kernels.sphere_grad_np(X), 2.0 * X)


class TestPathParity:
    """The scalar-loop path must agree with the vectorized numpy path."""

    @pytest.mark.parametrize("name", NAMES)
    def test_loop_matches_numpy_exactly(self, name):
        X = _sample(n=128, dim=5)
        loop_val = kernels.NUMPY_VALUE[name]
        loop_grad = kernels.NUMPY_GRAD[name]
        # NUMPY_* dicts hold the loop kernels when numba is active; compare
        # whichever pair is mounted against the explicit vectorized forms.
        vec_val = getattr(kernels, f"{name}_value_np")
        vec_grad = getattr(kernels, f"{name}_grad_np")
        np.testing.assert_allclose(loop_val(X), vec_val(X), rtol=1e-13, atol=0)
        np.testing.assert_allclose(loop_grad(X), vec_grad(X), rtol=1e-12, atol=1e-8)

    @pytest.mark.parametrize("name", NAMES)
    def test_active_dispatch_tables_complete(self, name):
        X = _sample(n=8, dim=3)
        v = kernels.VALUE[name](X)
        g = kernels.GRAD[name](X)
        assert v.shape == (8,)
        assert g.shape == (8, 3)
        assert np.all(np.isfinite(v)) and np.all(np.isfinite(g))


_PARITY_SNIPPET = """
import json
import numpy as np
from stagbench import kernels
gen = np.random.Generator(np.random.PCG64(123))
X = gen.uniform(-3.0, 3.0, size=(32, 4))
out = {"using_numba": kernels.USING_NUMBA}
for name in __NAMES__:
    out[name + ".value"] = kernels.VALUE[name](X).tolist()
    out[name + ".grad"] = kernels.GRAD[name](X).tolist()
print(json.dumps(out))
""".replace("__NAMES__", repr(list(NAMES)))


def _run_kernels_subprocess(disable_numba: bool) -> dict:
    env = dict(os.environ)
    env["STAGBENCH_DISABLE_NUMBA"] = "1" if disable_numba else "0"
    proc = subprocess.run(
        [sys.executable, "-c", _PARITY_SNIPPET],
        capture_output=True,
        text=True,
        env=env,
        check=True,
    )
    return json.loads(proc.stdout)


class TestEnvFlagDualPath:
    def test_env_flag_selects_path(self):
        disabled = _run_kernels_subprocess(disable_numba=True)
        assert disabled["using_numba"] is False

    def test_numba_and_numpy_paths_agree_exactly(self):
        enabled = _run_kernels_subprocess(disable_numba=False)
        disabled = _run_kernels_subprocess(disable_numba=True)
        if not enabled["using_numba"]:
            pytest.skip("numba unavailable in this environment")
        for name in NAMES:
            for part in (".value", ".grad"):
                a = np.asarray(enabled[name + part])
                b = np.asarray(disabled[name + part])
                # identical accumulation order -> bit-for-bit equality
                assert np.array_equal(a, b), f"{name}{part} diverged between paths"


class TestGradientConsistency:
    """Analytic gradients must match a high-order finite difference of the
    same kernel — catches transcription slips in either form."""

    @pytest.mark.parametrize("name", ("zhou1", "zhou2", "zhou3"))
    def test_grad_matches_fd_on_smooth_scale(self, name):
        # Use a tiny h appropriate for the 1e4-frequency oscillation.
        gen = np.random.Generator(np.random.PCG64(5))
        X = gen.uniform(-1.5, 1.5, size=(20, 3))
        G = kernels.NUMPY_GRAD[name](X)
        h = 1e-9
        for r, x in enumerate(X):
            for d in range(3):
                xp = x.copy()
                xm = x.copy()
                xp[d] += h
                xm[d] -= h
                fd = (
                    kernels.NUMPY_VALUE[name](xp[None, :])[0]
                    - kernels.NUMPY_VALUE[name](xm[None, :])[0]
                ) / (2.0 * h)
                scale = max(1.0, abs(G[r, d]))
                assert abs(G[r, d] - fd) / scale < 5e-2
