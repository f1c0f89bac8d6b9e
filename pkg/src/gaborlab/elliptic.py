"""Weierstrass elliptic machinery for a planar lattice.

Provides sigma, zeta, wp and the modified sigma_mod(z) = sigma(z) e^{a z^2}
whose modulus obeys |sigma_mod(z)| <= c(Lambda) e^{alpha |z|^2} with
alpha = pi / (2 s(Lambda)). The context precomputes the quasi-period
constants eta1, eta2 (Legendre-checked), the series coefficients used by
the evaluation kernel, and the growth constant c(Lambda).

Evaluation strategy: arguments are reduced to the centered fundamental
cell with the quasi-periodicity laws, then handed to a series-plus-halving
kernel (see _kernels_numpy.weier_core). Direct truncated sums and products
are kept here as slow reference evaluators; their accuracy is limited by
the O(1/R^2) lattice-sum tails, so the production path does not use them.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np

from .backend import get_kernels
from .errors import AccuracyError, ConfigError, PoleError
from .lattice import Lattice2D, enumerate_points, reduce_nearest, shortest_vector

_POLE_THRESHOLD = 1e-12
_LEGENDRE_TOL = 1e-9


@dataclass(frozen=True, eq=False)
class WeierstrassContext:
    """Precomputed sigma-machinery for one lattice. Immutable; evaluations
    are pure and safe for concurrent use."""

    lattice: Lattice2D
    eta1: complex
    eta2: complex
    alpha: float
    a_const: complex
    c_growth: float
    trunc_radius: float
    tolerance: float
    _cz: np.ndarray = field(repr=False, default=None)
    _cs: np.ndarray = field(repr=False, default=None)
    _cp: np.ndarray = field(repr=False, default=None)
    _cp1: np.ndarray = field(repr=False, default=None)
    _g2: complex = field(repr=False, default=0j)
    _g3: complex = field(repr=False, default=0j)
    _rsafe: float = field(repr=False, default=0.0)
    _wmin: float = field(repr=False, default=0.0)


def _gauss_reduced_basis(L: Lattice2D):
    """Shortest basis (b1, b2) of the lattice with Im(b2/b1) > 0.

    The Eisenstein q-series below converge like q^N with
    q = exp(2 pi i b2/b1); reduction pushes |q| below ~0.005 regardless of
    how skew the input generators are. The reduced basis spans the same
    lattice, and the series seeds are lattice invariants, so this does not
    affect which function is computed.
    """
    b1, b2 = L.omega1, L.omega2
    if abs(b1) > abs(b2):
        b1, b2 = b2, b1
    for _ in range(64):
        mu = (b2.real * b1.real + b2.imag * b1.imag) / abs(b1) ** 2
        b2 = b2 - round(mu) * b1
        if abs(b2) >= abs(b1):
            break
        b1, b2 = b2, b1
    if (b2 / b1).imag < 0:
        b2 = -b2
    return b1, b2


def _eisenstein_seeds(b1: complex, b2: complex, nterms: int):
    """G4 and G6 by Lambert q-series on a reduced basis."""
    tau = b2 / b1
    q = np.exp(2j * np.pi * tau)
    d = np.arange(1, nterms + 1, dtype=float)
    qd = q ** d
    lam3 = np.sum(d ** 3 * qd / (1.0 - qd))
    lam5 = np.sum(d ** 5 * qd / (1.0 - qd))
    G4 = np.pi ** 4 / (45.0 * b1 ** 4) * (1.0 + 240.0 * lam3)
    G6 = 2.0 * np.pi ** 6 / (945.0 * b1 ** 6) * (1.0 - 504.0 * lam5)
    return complex(G4), complex(G6)


def _series_weights(G4: complex, G6: complex, K: int):
    """Eisenstein weights G_{2k}, k = 2..K, via the quadratic recursion
    c_k = 3 sum c_m c_{k-m} / ((2k+1)(k-3)) with c_k = (2k-1) G_{2k}."""
    c = np.zeros(K + 1, dtype=complex)
    c[2] = 3.0 * G4
    c[3] = 5.0 * G6
    for k in range(4, K + 1):
        acc = 0.0 + 0.0j
        for m in range(2, k - 1):
            acc += c[m] * c[k - m]
        c[k] = 3.0 * acc / ((2.0 * k + 1.0) * (k - 3.0))
    ks = np.arange(2, K + 1, dtype=float)
    G = c[2:] / (2.0 * ks - 1.0)
    return G, c


def _kernel_arrays(G: np.ndarray):
    """Per-function Horner coefficient arrays from the weights G_{2k}."""
    K = len(G) + 1
    ks = np.arange(2, K + 1, dtype=float)
    cz = G.copy()
    cs = G / (2.0 * ks)
    cp = (2.0 * ks - 1.0) * G
    cp1 = cp * (2.0 * ks - 2.0)
    return cz, cs, cp, cp1


def _core(ctx: WeierstrassContext, z0: np.ndarray):
    k = get_kernels()
    return k.weier_core(z0, ctx._cz, ctx._cs, ctx._cp, ctx._cp1,
                        ctx._g2, ctx._rsafe)


def build_context(L: Lattice2D, tol: float = 1e-12) -> WeierstrassContext:
    """Precompute eta constants, series coefficients and c(Lambda).

    The quasi-period constants are computed as the difference
    eta_k = zeta(z0 + omega_k) - zeta(z0) at the base point z0 = -omega_k/2;
    that choice keeps every halving step of the evaluation kernel away from
    the zeros of wp' (a dyadic multiple of omega_k can only hit a
    half-period when omega2/omega1 is real, which the lattice normalization
    forbids). The Legendre relation is then verified to 1e-9; the series
    order and q-series length are escalated once before giving up.
    """
    if not (0.0 < tol <= 1e-3):
        raise ConfigError("tolerance must lie in (0, 1e-3]")
    wmin = shortest_vector(L)
    rsafe = 0.45 * wmin
    b1, b2 = _gauss_reduced_basis(L)
    base_R = 40.0 * max(abs(L.omega1), abs(L.omega2))

    last_resid = np.inf
    for attempt, (K, nterms) in enumerate([(40, 4000), (60, 8000), (80, 16000)]):
        G4, G6 = _eisenstein_seeds(b1, b2, nterms)
        G, _ = _series_weights(G4, G6, K)
        cz, cs, cp, cp1 = _kernel_arrays(G)
        for arr in (cz, cs, cp, cp1):
            arr.setflags(write=False)
        ctx = WeierstrassContext(
            lattice=L,
            eta1=0j, eta2=0j,
            alpha=np.pi / (2.0 * L.area),
            a_const=0j,
            c_growth=1.0,
            trunc_radius=base_R * 2.0 ** attempt,
            tolerance=tol,
            _cz=cz, _cs=cs, _cp=cp, _cp1=cp1,
            _g2=complex(60.0 * G4), _g3=complex(140.0 * G6),
            _rsafe=rsafe, _wmin=wmin,
        )
        etas = []
        for wk in (L.omega1, L.omega2):
            z0 = -wk / 2.0
            zv, _, _, _ = _core(ctx, np.array([z0 + wk, z0]))
            etas.append(complex(zv[0] - zv[1]))
        eta1, eta2 = etas
        resid = abs(eta1 * L.omega2 - eta2 * L.omega1 - 2j * np.pi)
        last_resid = min(last_resid, resid)
        if resid < _LEGENDRE_TOL:
            break
    else:
        raise AccuracyError(
            f"Legendre residual {last_resid:.3e} exceeds {_LEGENDRE_TOL:.0e} "
            "after escalating the series order; lattice too degenerate"
        )

    w1, w2 = L.omega1, L.omega2
    a_const = (eta2 * np.conj(w1) - eta1 * np.conj(w2)) / (
        2.0 * (w1 * np.conj(w2) - w2 * np.conj(w1))
    )
    ctx = replace(ctx, eta1=eta1, eta2=eta2, a_const=complex(a_const))
    return replace(ctx, c_growth=growth_sup(ctx, 256, polish=True))


def _reduce(ctx: WeierstrassContext, z):
    z = np.asarray(z, dtype=complex)
    z0, m1, m2 = reduce_nearest(ctx.lattice, z)
    return z, z0, m1, m2


def sigma(ctx: WeierstrassContext, z):
    """Weierstrass sigma. Entire, odd, simple zeros exactly on the lattice.

    Arguments are reduced to the centered cell; the unwinding uses
    sigma(z0 + w) = (-1)^{m1+m2+m1 m2} sigma(z0) e^{eta_w (z0 + w/2)} with
    eta_w = m1 eta1 + m2 eta2. Lattice points return exactly 0. The true
    function grows like e^{alpha |z|^2}, so very large arguments overflow
    float64; use log_sigma for those.
    """
    z, z0, m1, m2 = _reduce(ctx, z)
    scalar = z.ndim == 0
    z0f = np.atleast_1d(z0)
    m1f, m2f = np.atleast_1d(m1), np.atleast_1d(m2)
    out = np.zeros(z0f.shape, dtype=complex)
    ok = np.abs(z0f) >= _POLE_THRESHOLD
    if np.any(ok):
        _, logsig, _, _ = _core(ctx, z0f[ok])
        w = m1f[ok] * ctx.lattice.omega1 + m2f[ok] * ctx.lattice.omega2
        eta_w = m1f[ok] * ctx.eta1 + m2f[ok] * ctx.eta2
        sign = 1.0 - 2.0 * ((m1f[ok] + m2f[ok] + m1f[ok] * m2f[ok]) % 2)
        out[ok] = sign * np.exp(logsig + eta_w * (z0f[ok] + 0.5 * w))
    return complex(out[0]) if scalar else out.reshape(z.shape)


def log_sigma(ctx: WeierstrassContext, z):
    """A branch of log sigma(z); imaginary part meaningful modulo 2 pi.

    Overflow-safe route for building large products of sigma values:
    exp(log_sigma) reproduces sigma exactly. Lattice points return
    -inf + 0j (log of the zero value).
    """
    z, z0, m1, m2 = _reduce(ctx, z)
    scalar = z.ndim == 0
    z0f = np.atleast_1d(z0)
    m1f, m2f = np.atleast_1d(m1), np.atleast_1d(m2)
    out = np.full(z0f.shape, -np.inf + 0j, dtype=complex)
    ok = np.abs(z0f) >= _POLE_THRESHOLD
    if np.any(ok):
        _, logsig, _, _ = _core(ctx, z0f[ok])
        w = m1f[ok] * ctx.lattice.omega1 + m2f[ok] * ctx.lattice.omega2
        eta_w = m1f[ok] * ctx.eta1 + m2f[ok] * ctx.eta2
        par = (m1f[ok] + m2f[ok] + m1f[ok] * m2f[ok]) % 2
        out[ok] = logsig + eta_w * (z0f[ok] + 0.5 * w) + 1j * np.pi * par
    return complex(out[0]) if scalar else out.reshape(z.shape)


def zeta_fn(ctx: WeierstrassContext, z):
    """Weierstrass zeta; zeta(z0 + w) = zeta(z0) + m1 eta1 + m2 eta2."""
    z, z0, m1, m2 = _reduce(ctx, z)
    scalar = z.ndim == 0
    z0f = np.atleast_1d(z0)
    if np.any(np.abs(z0f) < _POLE_THRESHOLD):
        raise PoleError("zeta has a pole at every lattice point")
    zv, _, _, _ = _core(ctx, z0f)
    out = zv + np.atleast_1d(m1) * ctx.eta1 + np.atleast_1d(m2) * ctx.eta2
    return complex(out[0]) if scalar else out.reshape(z.shape)


def weierstrass_p(ctx: WeierstrassContext, z):
    """Weierstrass wp; fully periodic, so reduction is exact."""
    z, z0, _, _ = _reduce(ctx, z)
    scalar = z.ndim == 0
    z0f = np.atleast_1d(z0)
    if np.any(np.abs(z0f) < _POLE_THRESHOLD):
        raise PoleError("wp has a pole at every lattice point")
    _, _, wp, _ = _core(ctx, z0f)
    return complex(wp[0]) if scalar else wp.reshape(z.shape)


def weierstrass_p_prime(ctx: WeierstrassContext, z):
    """Derivative wp'; satisfies wp'^2 = 4 wp^3 - g2 wp - g3."""
    z, z0, _, _ = _reduce(ctx, z)
    scalar = z.ndim == 0
    z0f = np.atleast_1d(z0)
    if np.any(np.abs(z0f) < _POLE_THRESHOLD):
        raise PoleError("wp' has a pole at every lattice point")
    _, _, _, wp1 = _core(ctx, z0f)
    return complex(wp1[0]) if scalar else wp1.reshape(z.shape)


def sigma_mod(ctx: WeierstrassContext, z):
    """Modified sigma: sigma(z) e^{a(Lambda) z^2}.

    |sigma_mod(z)| e^{-alpha |z|^2} is doubly periodic, which is what makes
    the growth constant c(Lambda) finite.
    """
    z = np.asarray(z, dtype=complex)
    return sigma(ctx, z) * np.exp(ctx.a_const * z * z)


def log_sigma_mod(ctx: WeierstrassContext, z):
    """A branch of log sigma_mod; -inf + 0j at lattice points."""
    z = np.asarray(z, dtype=complex)
    return log_sigma(ctx, z) + ctx.a_const * z * z


def growth_constant(ctx: WeierstrassContext) -> float:
    """c(Lambda) = sup over the fundamental cell of |sigma_mod| e^{-alpha|z|^2}."""
    return ctx.c_growth


def _envelope(ctx: WeierstrassContext, z):
    z = np.asarray(z, dtype=complex)
    val = np.real(log_sigma_mod(ctx, z)) - ctx.alpha * np.abs(z) ** 2
    return np.exp(val)


def _golden_max(f, a: float, b: float, iters: int = 60):
    invphi = (np.sqrt(5.0) - 1.0) / 2.0
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    for _ in range(iters):
        if fc > fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    return (c, fc) if fc > fd else (d, fd)


def growth_sup(ctx: WeierstrassContext, ngrid: int = 256,
               polish: bool = True) -> float:
    """Grid supremum of the periodic envelope, plus local refinement.

    The envelope is exactly periodic under the lattice, so the search can
    move freely in cell coordinates (u, v); polish alternates golden-section
    sweeps along u and v around the best grid node.
    """
    L = ctx.lattice
    u = np.arange(ngrid) / ngrid
    uu, vv = np.meshgrid(u, u, indexing="ij")
    zz = uu * L.omega1 + vv * L.omega2
    vals = _envelope(ctx, zz.ravel()).reshape(ngrid, ngrid)
    idx = np.unravel_index(np.argmax(vals), vals.shape)
    best = float(vals[idx])
    if not polish:
        return best
    u0, v0 = u[idx[0]], u[idx[1]]
    h = 1.5 / ngrid

    def at(uc, vc):
        return float(_envelope(ctx, np.array([uc * L.omega1 + vc * L.omega2]))[0])

    for _ in range(3):
        u0, fu = _golden_max(lambda x: at(x, v0), u0 - h, u0 + h)
        v0, fv = _golden_max(lambda y: at(u0, y), v0 - h, v0 + h)
        best = max(best, fu, fv)
    return best


# -- direct-summation references -------------------------------------------
# Slow evaluators straight from the defining sums/products, used to
# cross-check the kernel route in tests. Their truncation error decays only
# polynomially in the radius, so tolerances in tests are set accordingly.

def _ring(L: Lattice2D, R: float):
    pts = enumerate_points(L, R)
    return pts[np.abs(pts) > _POLE_THRESHOLD]


def eisenstein_direct(L: Lattice2D, k: int, R: float) -> complex:
    """Direct lattice sum of lambda^{-k} over 0 < |lambda| <= R (k >= 4 even)."""
    lam = _ring(L, R)
    return complex(np.sum(lam ** (-float(k))))


def zeta_direct(L: Lattice2D, z: complex, R: float) -> complex:
    """Truncated zeta(z) = 1/z + sum [1/(z-lam) + 1/lam + z/lam^2]."""
    lam = _ring(L, R)
    return complex(1.0 / z + np.sum(1.0 / (z - lam) + 1.0 / lam + z / lam ** 2))


def wp_direct(L: Lattice2D, z: complex, R: float) -> complex:
    """Truncated wp(z) = 1/z^2 + sum [(z-lam)^{-2} - lam^{-2}]."""
    lam = _ring(L, R)
    return complex(1.0 / z ** 2 + np.sum((z - lam) ** (-2.0) - lam ** (-2.0)))


def sigma_direct(L: Lattice2D, z: complex, R: float) -> complex:
    """Truncated product sigma(z) = z prod (1 - z/lam) e^{z/lam + z^2/(2 lam^2)}."""
    lam = _ring(L, R)
    logs = np.log(1.0 - z / lam) + z / lam + z * z / (2.0 * lam ** 2)
    return complex(z * np.exp(np.sum(logs)))
