"""Tests for backend selection and numba/numpy kernel agreement."""

import numpy as np
import pytest

from gaborlab import _kernels_numpy
from gaborlab.backend import (
    HAS_NUMBA,
    active_backend,
    get_kernels,
    requested_backend,
)
from gaborlab.elliptic import build_context
from gaborlab.errors import ConfigError
from gaborlab.lattice import from_generators


def test_requested_backend_env(monkeypatch):
    monkeypatch.delenv("GABORLAB_BACKEND", raising=False)
    assert requested_backend() == "auto"
    monkeypatch.setenv("GABORLAB_BACKEND", "numpy")
    assert requested_backend() == "numpy"
    monkeypatch.setenv("GABORLAB_BACKEND", "bogus")
    with pytest.raises(ConfigError):
        requested_backend()


def test_active_backend_numpy(monkeypatch):
    monkeypatch.setenv("GABORLAB_BACKEND", "numpy")
    assert active_backend() == "numpy"
    assert get_kernels() is _kernels_numpy


def test_active_backend_auto(monkeypatch):
    monkeypatch.delenv("GABORLAB_BACKEND", raising=False)
    expect = "numba" if HAS_NUMBA else "numpy"
    assert active_backend() == expect


def test_numba_request_without_numba(monkeypatch):
    if HAS_NUMBA:
        pytest.skip("numba importable here")
    monkeypatch.setenv("GABORLAB_BACKEND", "numba")
    with pytest.raises(ConfigError):
        active_backend()


def test_backend_read_per_call(monkeypatch):
    monkeypatch.setenv("GABORLAB_BACKEND", "numpy")
    first = get_kernels()
    monkeypatch.delenv("GABORLAB_BACKEND")
    second = get_kernels()
    assert first is _kernels_numpy
    if HAS_NUMBA:
        assert second is not _kernels_numpy


@pytest.mark.skipif(not HAS_NUMBA, reason="numba not importable")
def test_kernels_agree_weier_core():
    from gaborlab import _kernels_numba

    ctx = build_context(from_generators(np.array([[1.0, 0.3], [0.0, 1.1]])))
    rng = np.random.default_rng(111)
    z = (rng.random(500) - 0.5) * 10 + 1j * (rng.random(500) - 0.5) * 10
    args = (z, ctx._cz, ctx._cs, ctx._cp, ctx._cp1, ctx._g2, ctx._rsafe)
    ref = _kernels_numpy.weier_core(*args)
    got = _kernels_numba.weier_core(*args)
    for a, b in zip(ref, got):
        scale = np.maximum(np.abs(a), 1.0)
        assert np.max(np.abs(a - b) / scale) < 1e-10


@pytest.mark.skipif(not HAS_NUMBA, reason="numba not importable")
def test_kernels_agree_hermite_rec():
    from gaborlab import _kernels_numba

    rng = np.random.default_rng(113)
    t = (rng.random(2000) - 0.5) * 8.0
    ref = _kernels_numpy.hermite_rec(t, 12)
    got = _kernels_numba.hermite_rec(t, 12)
    assert np.max(np.abs(ref - got)) < 1e-13 * max(1.0, np.max(np.abs(ref)))


@pytest.mark.skipif(not HAS_NUMBA, reason="numba not importable")
def test_kernels_agree_zak_sums():
    from gaborlab import _kernels_numba

    rng = np.random.default_rng(115)
    fvals = (rng.random((9, 64)) - 0.5) + 1j * (rng.random((9, 64)) - 0.5)
    phases = np.exp(2j * np.pi * rng.random((9, 48)))
    ref = _kernels_numpy.zak_sums(np.ascontiguousarray(fvals),
                                  np.ascontiguousarray(phases))
    got = _kernels_numba.zak_sums(np.ascontiguousarray(fvals),
                                  np.ascontiguousarray(phases))
    assert ref.shape == (64, 48)
    assert np.max(np.abs(ref - got)) < 1e-13 * max(1.0, np.max(np.abs(ref)))
    # Complex windows must survive the numba wrapper intact.
    assert np.max(np.abs(got.imag)) > 1e-3
