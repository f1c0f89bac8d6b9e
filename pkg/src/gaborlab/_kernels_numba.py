"""Numba-jitted implementations of the hot kernels.

Same contract as _kernels_numpy (that module's docstrings are the
reference). Kernels are serial njit with cache=True so repeated runs are
deterministic and warm-up cost is paid once per machine.
"""

import cmath

import numpy as np
from numba import njit

BACKEND_NAME = "numba"


@njit(cache=True)
def _weier_core_impl(z, cz, cs, cp, cp1, g2, rsafe):
    n = z.size
    zeta = np.empty(n, dtype=np.complex128)
    logsig = np.empty(n, dtype=np.complex128)
    wp = np.empty(n, dtype=np.complex128)
    wp1 = np.empty(n, dtype=np.complex128)
    ncoef = cz.size
    for i in range(n):
        zi = z[i]
        r = abs(zi)
        depth = 0
        while r > rsafe:
            r *= 0.5
            depth += 1
        w = zi / (2.0 ** depth)
        u = w * w
        acc_z = 0.0 + 0.0j
        acc_s = 0.0 + 0.0j
        acc_p = 0.0 + 0.0j
        acc_p1 = 0.0 + 0.0j
        for j in range(ncoef - 1, -1, -1):
            acc_z = acc_z * u + cz[j]
            acc_s = acc_s * u + cs[j]
            acc_p = acc_p * u + cp[j]
            acc_p1 = acc_p1 * u + cp1[j]
        ze = 1.0 / w - w * u * acc_z
        ls = cmath.log(w) - u * u * acc_s
        p = 1.0 / u + u * acc_p
        p1 = -2.0 / (u * w) + w * acc_p1
        for _ in range(depth):
            A = (6.0 * p * p - 0.5 * g2) / p1
            ze = 2.0 * ze + 0.5 * A
            ls = 4.0 * ls + cmath.log(-p1)
            pn = 0.25 * A * A - 2.0 * p
            p1n = 0.25 * A * (12.0 * p - A * A) - p1
            p = pn
            p1 = p1n
        zeta[i] = ze
        logsig[i] = ls
        wp[i] = p
        wp1[i] = p1
    return zeta, logsig, wp, wp1


def weier_core(z, cz, cs, cp, cp1, g2, rsafe):
    z = np.ascontiguousarray(z, dtype=np.complex128)
    return _weier_core_impl(
        z,
        np.ascontiguousarray(cz, dtype=np.complex128),
        np.ascontiguousarray(cs, dtype=np.complex128),
        np.ascontiguousarray(cp, dtype=np.complex128),
        np.ascontiguousarray(cp1, dtype=np.complex128),
        complex(g2),
        float(rsafe),
    )


@njit(cache=True)
def _hermite_rec_impl(t, nmax):
    nt = t.size
    out = np.empty((nmax + 1, nt), dtype=np.float64)
    c0 = 2.0 ** 0.25
    sq = np.sqrt(np.pi)
    for i in range(nt):
        out[0, i] = c0 * np.exp(-np.pi * t[i] * t[i])
    if nmax >= 1:
        for i in range(nt):
            out[1, i] = 2.0 * sq * t[i] * out[0, i]
    for n in range(1, nmax):
        a = 2.0 * sq / np.sqrt(n + 1.0)
        b = np.sqrt(n / (n + 1.0))
        for i in range(nt):
            out[n + 1, i] = a * t[i] * out[n, i] - b * out[n - 1, i]
    return out


def hermite_rec(t, nmax):
    t = np.ascontiguousarray(t, dtype=np.float64)
    return _hermite_rec_impl(t, int(nmax))


@njit(cache=True)
def _zak_sums_impl(fvals, phases):
    nk, nx = fvals.shape
    nxi = phases.shape[1]
    out = np.zeros((nx, nxi), dtype=np.complex128)
    for k in range(nk):
        for i in range(nx):
            fv = fvals[k, i]
            if fv == 0.0:
                continue
            for j in range(nxi):
                out[i, j] += fv * phases[k, j]
    return out


def zak_sums(fvals, phases):
    return _zak_sums_impl(
        np.ascontiguousarray(fvals, dtype=np.complex128),
        np.ascontiguousarray(phases, dtype=np.complex128),
    )
