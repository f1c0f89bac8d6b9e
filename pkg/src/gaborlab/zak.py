"""Zak transform and the half-integer-density frame criterion.

The Zak transform Z_a f(x, xi) = sum_k f(x - a k) e^{2 pi i a k xi} turns
the frame property of a Gabor system over a Z x b Z with ab = 1/2 into a
multiplication-operator criterion: the system is a frame exactly when

    m(x, xi) = |Z_a f(x, xi)|^2 + |Z_a f(x - a/2, xi)|^2

is bounded away from 0 on Q_{a,1}. Odd windows force m(0,0) = m(a/2,0) = 0,
so odd Hermite windows fail at half-integer density even though the density
itself would allow a frame; the criterion certifies that numerically.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .backend import get_kernels
from .errors import ConfigError, TruncationDomainError
from .hermite_bargmann import ORDER_CAP, SampledSignal, hermite_batch

_DECAY_FLOOR = 1e-14
_DEFAULT_GRID = 512
_REFINE_FACTOR = 8
_FRAME_THRESHOLD = 1e-6


@dataclass(frozen=True, eq=False)
class ZakGrid:
    """Zak-transform samples on the fundamental domain Q_{a,1/a}.

    values[i, j] = Z_a f(x_i, xi_j) with x_i = a i / nx on [0, a) and
    xi_j = j / (a nxi) on [0, 1/a). unitarity_residual is the Riemann-sum
    check | ||Z_a f||_{L^2(Q)} - ||f||_2 | (None when the input norm is
    unknown).
    """

    a: float
    nx: int
    nxi: int
    values: np.ndarray
    unitarity_residual: float = None

    @property
    def x(self) -> np.ndarray:
        return self.a * np.arange(self.nx) / self.nx

    @property
    def xi(self) -> np.ndarray:
        return np.arange(self.nxi) / (self.a * self.nxi)


def _hermite_cutoff(n: int) -> float:
    """Radius beyond which |H_n| is provably below the decay floor.

    Uses the polynomial envelope |H_n(t)| <= 2^{1/4} (2 sqrt(pi) t + 1)^n
    e^{-pi t^2} / sqrt(n!), scanned past its peak where it is monotone.
    """
    t = max(1.0, np.sqrt(n / np.pi) + 1.0)
    while t < 256.0:
        bound = (2.0 ** 0.25
                 * np.exp(n * np.log(2.0 * np.sqrt(np.pi) * t + 1.0)
                          - np.pi * t * t
                          - 0.5 * math.lgamma(n + 1)))
        if bound < _DECAY_FLOOR:
            return t
        t += 0.25
    raise TruncationDomainError("window decay too slow for Zak truncation")


def _hermite_truncation(n: int, a: float, x_span: float) -> int:
    """Smallest K whose nearest omitted sample lies past the decay cutoff."""
    return int(np.ceil((_hermite_cutoff(n) + x_span) / a))


def _zak_values(f, a: float, x: np.ndarray, xi: np.ndarray) -> np.ndarray:
    """Truncated Zak series on an arbitrary rectangular grid."""
    if a <= 0:
        raise ConfigError("Zak parameter a must be positive")
    kernels = get_kernels()
    if isinstance(f, (int, np.integer)):
        n = int(f)
        if not 0 <= n <= ORDER_CAP:
            raise ConfigError(f"Hermite order {n} outside [0, {ORDER_CAP}]")
        K = _hermite_truncation(n, a, float(np.max(np.abs(x))))
        karr = np.arange(-K, K + 1)
        ts = (x[None, :] - a * karr[:, None]).ravel()
        fvals = hermite_batch(ts, n)[n].reshape(2 * K + 1, x.size)
        fvals = fvals.astype(complex)
    elif isinstance(f, SampledSignal):
        edge = max(abs(f.samples[0]), abs(f.samples[-1]))
        if edge > _DECAY_FLOOR:
            raise TruncationDomainError(
                f"sampled window does not decay below {_DECAY_FLOOR:g} "
                "at the grid edges")
        t_max = f.t_min + (f.length - 1) * f.dt
        K = int(np.ceil((max(abs(f.t_min), abs(t_max))
                         + float(np.max(np.abs(x)))) / a)) + 1
        karr = np.arange(-K, K + 1)
        ts = x[None, :] - a * karr[:, None]
        re = np.interp(ts.ravel(), f.t, f.samples.real, left=0.0, right=0.0)
        im = np.interp(ts.ravel(), f.t, f.samples.imag, left=0.0, right=0.0)
        fvals = (re + 1j * im).reshape(2 * K + 1, x.size)
    else:
        raise ConfigError("window spec must be a Hermite order or SampledSignal")
    phases = np.exp(2j * np.pi * a * karr[:, None] * xi[None, :])
    return kernels.zak_sums(np.ascontiguousarray(fvals),
                            np.ascontiguousarray(phases))


def zak_transform(f, a: float, nx: int = _DEFAULT_GRID,
                  nxi: int = _DEFAULT_GRID) -> ZakGrid:
    """Zak transform of a window on the fundamental domain Q_{a,1/a}.

    Parameters
    ----------
    f : int or SampledSignal
        Hermite order, or a sampled window with decayed edges.
    a : float
        Zak parameter; the domain is [0, a) x [0, 1/a).
    nx, nxi : int
        Grid sizes.

    Returns
    -------
    ZakGrid
        The sampled transform with a Riemann-sum unitarity residual
        against the window L^2 norm.
    """
    if nx < 2 or nxi < 2:
        raise ConfigError("Zak grid sizes must be at least 2")
    x = a * np.arange(nx) / nx
    xi = np.arange(nxi) / (a * nxi)
    vals = _zak_values(f, a, x, xi)
    if isinstance(f, (int, np.integer)):
        fnorm = 1.0
    else:
        fnorm = f.norm()
    # Mean of |Z|^2 over Q_{a,1/a} is ||f||^2 / a for this normalization.
    resid = abs(float(np.sqrt(a * np.mean(np.abs(vals) ** 2))) - fnorm)
    return ZakGrid(a=float(a), nx=int(nx), nxi=int(nxi), values=vals,
                   unitarity_residual=resid)


def quasi_periodicity_residual(f, a: float, nsample: int = 32,
                               seed: int = 0) -> float:
    """max |Z_a f(x+a, xi) - e^{2 pi i a xi} Z_a f(x, xi)| on random samples.

    Exact for the infinite series; numerically this measures truncation
    consistency of the summation window.
    """
    rng = np.random.default_rng(seed)
    x = a * rng.random(nsample)
    xi = rng.random(nsample) / a
    lhs = np.array([_zak_values(f, a, np.array([xv + a]), np.array([xiv]))[0, 0]
                    for xv, xiv in zip(x, xi)])
    rhs = np.array([_zak_values(f, a, np.array([xv]), np.array([xiv]))[0, 0]
                    for xv, xiv in zip(x, xi)])
    return float(np.max(np.abs(lhs - np.exp(2j * np.pi * a * xi) * rhs)))


def half_integer_criterion(n: int, a: float, nx: int = _DEFAULT_GRID,
                           nxi: int = _DEFAULT_GRID):
    """Frame decision for the Hermite window H_n over a Z x b Z, ab = 1/2.

    Evaluates m(x, xi) = |Z_a H_n(x, xi)|^2 + |Z_a H_n(x - a/2, xi)|^2 on
    Q_{a,1}, refines once around the grid minimum, and decides by a
    threshold on the refined infimum. Grid certification relies on the
    continuity of the truncated series; the threshold is a harness
    parameter, not part of the mathematical criterion.

    Returns
    -------
    (inf_val, sup_val, is_frame)
    """
    if a <= 0:
        raise ConfigError("Zak parameter a must be positive")
    x = a * np.arange(nx) / nx
    xi = np.arange(nxi) / nxi

    def m_surface(xarr):
        z1 = _zak_values(n, a, xarr, xi)
        z2 = _zak_values(n, a, xarr - a / 2.0, xi)
        return np.abs(z1) ** 2 + np.abs(z2) ** 2

    m = m_surface(x)
    sup_val = float(np.max(m))
    i0, j0 = np.unravel_index(np.argmin(m), m.shape)
    inf_val = float(m[i0, j0])

    hx = a / nx
    hxi = 1.0 / nxi
    fine = _REFINE_FACTOR
    x_fine = x[i0] + hx * np.arange(-fine, fine + 1) / fine
    xi_fine = xi[j0] + hxi * np.arange(-fine, fine + 1) / fine
    z1 = _zak_values(n, a, x_fine, xi_fine)
    z2 = _zak_values(n, a, x_fine - a / 2.0, xi_fine)
    m_fine = np.abs(z1) ** 2 + np.abs(z2) ** 2
    inf_val = min(inf_val, float(np.min(m_fine)))

    return inf_val, sup_val, bool(inf_val > _FRAME_THRESHOLD)


def criterion_minimum_location(n: int, a: float, nx: int = _DEFAULT_GRID,
                               nxi: int = _DEFAULT_GRID):
    """Grid argmin of the half-integer criterion surface, as (x, xi)."""
    x = a * np.arange(nx) / nx
    xi = np.arange(nxi) / nxi
    z1 = _zak_values(n, a, x, xi)
    z2 = _zak_values(n, a, x - a / 2.0, xi)
    m = np.abs(z1) ** 2 + np.abs(z2) ** 2
    i0, j0 = np.unravel_index(np.argmin(m), m.shape)
    return float(x[i0]), float(xi[j0])
