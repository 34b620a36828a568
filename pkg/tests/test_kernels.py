from __future__ import annotations

import numpy as np
import pytest

from bachflat import _kernels
from bachflat.acceptance import random_algebra
from bachflat.bach import bach_tensor, cov_ricci
from bachflat.conformal import div4_weyl
from bachflat.curvature import curvature
from bachflat.lie import family_algebra, thm1_algebra
from bachflat.weyl import weyl_tensor

needs_numba = pytest.mark.skipif(not _kernels.HAVE_NUMBA, reason="numba not installed")


@pytest.fixture(scope="module")
def batch():
    rng = np.random.default_rng(21)
    return np.array([random_algebra(rng).c for _ in range(40)])


def test_env_flag(monkeypatch):
    monkeypatch.setenv("BACHFLAT_DISABLE_NUMBA", "1")
    assert _kernels.backend_name() == "numpy"
    monkeypatch.setenv("BACHFLAT_DISABLE_NUMBA", "0")
    assert _kernels.backend_name() == ("numba" if _kernels.HAVE_NUMBA else "numpy")


@needs_numba
def test_numba_matches_numpy(batch):
    a = _kernels.numba_curvature_batch(batch)
    b = _kernels.numpy_curvature_batch(batch)
    for k in a:
        scale = max(1.0, np.abs(b[k]).max())
        assert np.abs(a[k] - b[k]).max() <= 1e-10 * scale, k
    assert np.allclose(_kernels.numba_bach_batch(batch), b["B"], atol=1e-9)
    assert np.allclose(_kernels.numpy_bach_batch(batch), b["B"], atol=1e-9)


def test_kernels_match_generic_pipeline(batch):
    t = _kernels.numpy_curvature_batch(batch[:8])
    for n in range(8):
        from bachflat.lie import StructureConstants

        cu = curvature(StructureConstants(batch[n]))
        W = weyl_tensor(cu.R, cu.rho, cu.tau)
        B = bach_tensor(cu.rho, cu.tau, cov_ricci(cu.gamma, cu.rho).d2)
        D = div4_weyl(cu.gamma, W)
        assert np.allclose(t["gamma"][n], cu.gamma.astype(float), atol=1e-12)
        assert np.allclose(t["R"][n], cu.R.astype(float), atol=1e-10)
        assert np.allclose(t["W"][n], W.astype(float), atol=1e-10)
        assert np.allclose(t["B"][n], B.astype(float), atol=1e-9)
        assert np.allclose(t["D"][n], D.astype(float), atol=1e-9)


def test_g_r1r2_through_kernels():
    t = _kernels.curvature_batch(thm1_algebra().to_float().c[None])
    assert np.abs(t["B"]).max() < 1e-12
    assert t["tau"][0] == pytest.approx(-4.5, abs=1e-12)


def test_family_batch_and_norm():
    c = _kernels.family_batch([0.3], [-1.2])
    assert np.array_equal(c[0], family_algebra(0.3, -1.2).c)
    A, B = np.meshgrid(np.linspace(-1, 1, 5), np.linspace(-1, 1, 7), indexing="ij")
    n2 = _kernels.family_bach_norm2(A, B)
    assert n2.shape == (5, 7)
    assert n2[4, 6] == pytest.approx(0.0, abs=1e-20)  # (1, 1)


def test_numpy_chunking_consistent(monkeypatch, batch):
    monkeypatch.setattr(_kernels, "_CHUNK", 7)
    assert np.allclose(_kernels.numpy_bach_batch(batch), _kernels.numpy_curvature_batch(batch)["B"], atol=1e-12)


def test_dispatch_without_numba(monkeypatch, batch):
    monkeypatch.setenv("BACHFLAT_DISABLE_NUMBA", "1")
    B = _kernels.bach_batch(batch)
    monkeypatch.delenv("BACHFLAT_DISABLE_NUMBA")
    assert np.allclose(B, _kernels.bach_batch(batch), atol=1e-9)
