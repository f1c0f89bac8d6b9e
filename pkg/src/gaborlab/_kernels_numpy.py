"""Pure-numpy implementations of the hot kernels.

Shared contract with _kernels_numba — see weier_core for the argument
reduction scheme. All functions are deterministic and allocation-light.
"""

import numpy as np

BACKEND_NAME = "numpy"


def weier_core(z, cz, cs, cp, cp1, g2, rsafe):
    """Evaluate (zeta, log sigma, wp, wp') at points z by series + halving.

    The Laurent/Taylor series around 0 converge on |z| < shortest lattice
    vector; each input is halved until it lies within ``rsafe`` and the
    values are propagated back up with the algebraic duplication identities,
    tracking the pair (wp, wp') so no series is ever evaluated outside its
    disk:

        A        = wp''/wp' = (6 wp^2 - g2/2) / wp'
        wp(2w)   = A^2/4 - 2 wp(w)
        wp'(2w)  = A (12 wp(w) - A^2)/4 - wp'(w)
        zeta(2w) = 2 zeta(w) + A/2
        log sigma(2w) = 4 log sigma(w) + log(-wp'(w))

    Parameters
    ----------
    z : complex ndarray, nonzero entries (poles are the caller's problem).
    cz, cs, cp, cp1 : complex ndarrays
        Series tail coefficients in ascending powers of u = w^2 for
        zeta, log(sigma/z), wp, wp' respectively (index j corresponds
        to lattice-sum order 2(j+2)).
    g2 : complex
        Weierstrass invariant 60*G4.
    rsafe : float
        Series radius actually used (a fraction of the shortest vector).

    Returns
    -------
    (zeta, logsig, wp, wp1) : complex ndarrays, logsig is *a* branch of
    log sigma (imaginary part only meaningful modulo 2 pi).
    """
    z = np.ascontiguousarray(z, dtype=np.complex128)
    r = np.abs(z)
    with np.errstate(divide="ignore", invalid="ignore"):
        depth = np.ceil(np.log2(r / rsafe))
    depth = np.where(np.isfinite(depth), depth, 0.0)
    depth = np.maximum(depth, 0.0).astype(np.int64)
    w = z / np.exp2(depth)

    u = w * w
    acc_z = np.zeros_like(u)
    acc_s = np.zeros_like(u)
    acc_p = np.zeros_like(u)
    acc_p1 = np.zeros_like(u)
    for j in range(len(cz) - 1, -1, -1):
        acc_z = acc_z * u + cz[j]
        acc_s = acc_s * u + cs[j]
        acc_p = acc_p * u + cp[j]
        acc_p1 = acc_p1 * u + cp1[j]
    zeta = 1.0 / w - w * u * acc_z
    logsig = np.log(w) - u * u * acc_s
    wp = 1.0 / u + u * acc_p
    wp1 = -2.0 / (u * w) + w * acc_p1

    dmax = int(depth.max()) if depth.size else 0
    for lvl in range(dmax):
        act = depth > lvl
        if not np.any(act):
            break
        wpa = wp[act]
        wp1a = wp1[act]
        A = (6.0 * wpa * wpa - 0.5 * g2) / wp1a
        zeta[act] = 2.0 * zeta[act] + 0.5 * A
        logsig[act] = 4.0 * logsig[act] + np.log(-wp1a)
        wp[act] = 0.25 * A * A - 2.0 * wpa
        wp1[act] = 0.25 * A * (12.0 * wpa - A * A) - wp1a
    return zeta, logsig, wp, wp1


def hermite_rec(t, nmax):
    """All Hermite window values H_0..H_nmax on the grid t.

    Three-term recurrence in the e^{-pi t^2} convention;
    H_0(t) = 2^{1/4} exp(-pi t^2), each H_n has unit L^2 norm.
    """
    t = np.ascontiguousarray(t, dtype=np.float64)
    out = np.empty((nmax + 1, t.size), dtype=np.float64)
    out[0] = 2.0 ** 0.25 * np.exp(-np.pi * t * t)
    if nmax >= 1:
        out[1] = 2.0 * np.sqrt(np.pi) * t * out[0]
    for n in range(1, nmax):
        out[n + 1] = (2.0 * np.sqrt(np.pi) / np.sqrt(n + 1.0)) * t * out[n] \
            - np.sqrt(n / (n + 1.0)) * out[n - 1]
    return out


def zak_sums(fvals, phases):
    """Zak accumulation Z[i, j] = sum_k fvals[k, i] * phases[k, j].

    fvals holds window samples f(x_i - a k), phases holds e^{2 pi i a k xi_j}.
    """
    return np.ascontiguousarray(fvals.T, dtype=np.complex128) @ phases
