"""Hermite windows, the Bargmann transform, and Fock-space utilities.

Conventions. Time-frequency shifts act as
pi_{(x,xi)} f(t) = e^{2 pi i xi t} f(t - x), with the plane identified
with C through z = x + i xi. Hermite functions are L^2-normalized in the
pi convention, H_0(t) = 2^{1/4} e^{-pi t^2}, and the Bargmann transform

    Bf(z) = 2^{1/4} e^{-pi z^2 / 2} int f(t) e^{-pi t^2} e^{2 pi t z} dt

maps H_n to the normalized monomial e_n(z) = sqrt(pi^n / n!) z^n. The
short-time Fourier transform against a Hermite window has the closed form

    <f, pi_zeta H_n> = (1 / sqrt(pi^n n!)) e^{-i pi xi eta}
                       e^{-pi |zeta|^2 / 2}
                       sum_k binom(n, k) (-pi zeta)^k F^{(n-k)}(conj(zeta))

with F = Bf and zeta = xi + i eta. All phases here are pinned by a
numerical intertwining audit in the test suite.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb, factorial

import numpy as np

from .backend import get_kernels
from .errors import (
    AccuracyError,
    ConfigError,
    DivergenceError,
    OrderCapError,
    TruncationDomainError,
)

ORDER_CAP = 64
DEFAULT_TMAX = 8.0
DEFAULT_DT = 1.0 / 256.0
_ENDPOINT_DROP = 1e-12
_TAYLOR_SWITCH = 1e-3
_CONTOUR_NODES = 64


def _check_order(n: int):
    if not (0 <= int(n) == n):
        raise ConfigError("Hermite order must be a nonnegative integer")
    if n > ORDER_CAP:
        raise OrderCapError(
            f"Hermite order {n} above the stability cap {ORDER_CAP}"
        )


def hermite_batch(t, nmax: int) -> np.ndarray:
    """Rows H_0(t) .. H_nmax(t) by the three-term recurrence."""
    _check_order(nmax)
    t = np.atleast_1d(np.asarray(t, dtype=float))
    return get_kernels().hermite_rec(t, nmax)


def hermite_eval(n: int, t):
    """L^2-normalized Hermite function H_n on the grid t."""
    _check_order(n)
    t_arr = np.asarray(t, dtype=float)
    vals = hermite_batch(np.atleast_1d(t_arr), n)[n]
    return float(vals[0]) if t_arr.ndim == 0 else vals.reshape(t_arr.shape)


@dataclass(frozen=True, eq=False)
class HermiteWindow:
    """The window vector h = (H_0, ..., H_n)."""

    order: int

    def __post_init__(self):
        _check_order(self.order)

    def sample(self, t) -> np.ndarray:
        return hermite_batch(t, self.order)


@dataclass(frozen=True, eq=False)
class SampledSignal:
    """Complex samples on a uniform time grid.

    The grid must have an odd number of points so composite Simpson
    weights are exact; all bundled signals use [-8, 8] at dt = 1/256.
    """

    samples: np.ndarray
    t_min: float
    dt: float

    def __post_init__(self):
        arr = np.ascontiguousarray(self.samples, dtype=complex)
        if arr.ndim != 1 or arr.size < 3 or arr.size % 2 == 0:
            raise ConfigError("samples must be a 1-D odd-length array")
        arr.setflags(write=False)
        object.__setattr__(self, "samples", arr)

    @property
    def length(self) -> int:
        return self.samples.size

    @property
    def t(self) -> np.ndarray:
        return self.t_min + self.dt * np.arange(self.samples.size)

    def quad_weights(self) -> np.ndarray:
        w = np.ones(self.samples.size)
        w[1:-1:2] = 4.0
        w[2:-1:2] = 2.0
        return w * (self.dt / 3.0)

    def inner(self, other: "SampledSignal") -> complex:
        if (other.length != self.length or abs(other.t_min - self.t_min) > 1e-12
                or abs(other.dt - self.dt) > 1e-15):
            raise ConfigError("signals live on different grids")
        return complex(np.sum(self.quad_weights() * self.samples
                              * np.conj(other.samples)))

    def norm(self) -> float:
        return float(np.sqrt(max(self.inner(self).real, 0.0)))

    def to_csv(self, path, **provenance):
        with open(path, "w", encoding="utf-8") as fh:
            for key, val in provenance.items():
                fh.write(f"# {key}: {val}\n")
            fh.write(f"# t_min: {self.t_min:.17g}\n")
            fh.write(f"# dt: {self.dt:.17g}\n")
            fh.write("t,re,im\n")
            for tv, sv in zip(self.t, self.samples):
                fh.write(f"{tv:.17g},{sv.real:.17g},{sv.imag:.17g}\n")

    @staticmethod
    def from_csv(path) -> "SampledSignal":
        ts, res, ims = [], [], []
        with open(path, "r", encoding="utf-8") as fh:
            for line in fh:
                line = line.strip()
                if not line or line.startswith("#") or line.startswith("t,"):
                    continue
                parts = line.split(",")
                if len(parts) != 3:
                    raise ConfigError(f"malformed CSV row: {line!r}")
                ts.append(float(parts[0]))
                res.append(float(parts[1]))
                ims.append(float(parts[2]))
        if len(ts) < 3:
            raise ConfigError("CSV holds fewer than 3 samples")
        dts = np.diff(ts)
        if np.max(np.abs(dts - dts[0])) > 1e-9 * max(abs(dts[0]), 1e-30):
            raise ConfigError("CSV grid is not uniform")
        return SampledSignal(np.asarray(res) + 1j * np.asarray(ims),
                             t_min=ts[0], dt=float(dts[0]))


def default_grid(t_max: float = DEFAULT_TMAX, dt: float = DEFAULT_DT):
    return np.arange(-t_max, t_max + dt / 2.0, dt)


def hermite_signal(n: int, t_max: float = DEFAULT_TMAX,
                   dt: float = DEFAULT_DT) -> SampledSignal:
    """H_n sampled on the default quadrature grid."""
    t = default_grid(t_max, dt)
    return SampledSignal(hermite_batch(t, n)[n].astype(complex), -t_max, dt)


def pi_shift_hermite(n: int, z: complex, t) -> np.ndarray:
    """pi_z H_n on the grid t, exactly (no resampling)."""
    x, xi = z.real, z.imag
    t = np.asarray(t, dtype=float)
    return np.exp(2j * np.pi * xi * t) * hermite_eval(n, t - x)


def bargmann(f: SampledSignal, z):
    """Bargmann transform of a sampled signal at z (scalar or array).

    Composite Simpson on the signal grid; raises when the damped integrand
    has visible mass at the grid endpoints (grid too short for this z).
    """
    z_in = np.asarray(z, dtype=complex)
    zv = np.atleast_1d(z_in)
    t = f.t
    w = f.quad_weights()
    core = f.samples * np.exp(-np.pi * t * t) * w
    mag = np.abs(f.samples)
    peak_ref = mag.max()
    if peak_ref == 0.0:
        out = np.zeros(zv.shape, dtype=complex)
        return complex(out[0]) if z_in.ndim == 0 else out.reshape(z_in.shape)
    with np.errstate(divide="ignore"):
        logmag = np.where(mag > 0, np.log(mag), -np.inf) - np.pi * t * t
    for zz in zv:
        lm = logmag + 2.0 * np.pi * t * zz.real
        peak = lm.max()
        edge = max(lm[0], lm[-1])
        if edge > peak + np.log(_ENDPOINT_DROP):
            raise TruncationDomainError(
                f"integrand endpoint mass too large at z={zz:.3g}; "
                "extend the sampling grid"
            )
    E = np.exp(2.0 * np.pi * np.outer(t, zv))
    vals = 2.0 ** 0.25 * np.exp(-np.pi * zv * zv / 2.0) * (core @ E)
    return complex(vals[0]) if z_in.ndim == 0 else vals.reshape(z_in.shape)


def stft_time_quadrature(f: SampledSignal, n: int, zeta: complex) -> complex:
    """Reference <f, pi_zeta H_n> by direct time-domain quadrature."""
    shifted = pi_shift_hermite(n, zeta, f.t)
    return complex(np.sum(f.quad_weights() * f.samples * np.conj(shifted)))


# -- Fock functions ----------------------------------------------------------

def contour_derivatives(func, w: complex, order: int, radius: float = 0.5,
                        nodes: int = _CONTOUR_NODES) -> np.ndarray:
    """F^{(0)}(w) .. F^{(order)}(w) by a trapezoidal Cauchy integral.

    Spectrally accurate for entire functions; the aliasing error on the
    j-th Taylor coefficient is sum_m c_{j + m*nodes} radius^{m*nodes}.
    """
    if order >= nodes:
        raise ConfigError("contour node count must exceed derivative order")
    k = np.arange(nodes)
    ring = w + radius * np.exp(2j * np.pi * k / nodes)
    vals = np.asarray(func(ring), dtype=complex)
    coeffs = np.fft.fft(vals)[: order + 1] / nodes
    js = np.arange(order + 1)
    coeffs = coeffs / radius ** js
    fact = np.array([factorial(j) for j in js], dtype=float)
    return coeffs * fact


class FockFunction:
    """Entire function on C with optional growth certificate.

    Subclasses provide vectorized evaluation; derivatives default to the
    contour rule and are overridden where exact formulas exist.
    """

    def __call__(self, z):
        raise NotImplementedError

    def derivatives_at(self, w: complex, order: int) -> np.ndarray:
        return contour_derivatives(self, w, order)

    def log_abs(self, z):
        """log |F(z)|, overridden where direct evaluation can overflow."""
        with np.errstate(divide="ignore"):
            return np.log(np.abs(self(z)))

    def growth_certificate(self):
        """(C, theta) with |F(z)| <= C e^{pi theta |z|^2 / 2}, or None."""
        return None


class MonomialBasis(FockFunction):
    """e_k(z) = sqrt(pi^k / k!) z^k, the image of H_k under B."""

    def __init__(self, k: int):
        _check_order(k)
        self.k = int(k)
        self.coef = np.sqrt(np.pi ** k / float(factorial(k)))

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        return self.coef * z ** self.k

    def log_eval(self, z):
        z = np.asarray(z, dtype=complex)
        if self.k == 0:
            return np.full(z.shape, np.log(self.coef), dtype=complex)
        zf = np.atleast_1d(z)
        out = np.full(zf.shape, -np.inf, dtype=complex)
        nz = zf != 0
        out[nz] = np.log(self.coef) + self.k * np.log(zf[nz])
        return out.reshape(z.shape)

    def derivatives_at(self, w: complex, order: int) -> np.ndarray:
        out = np.zeros(order + 1, dtype=complex)
        for m in range(min(order, self.k) + 1):
            out[m] = (self.coef * factorial(self.k)
                      / factorial(self.k - m) * w ** (self.k - m))
        return out

    def growth_certificate(self):
        if self.k == 0:
            return 1.0, 0.5
        # max of r^k e^{-pi r^2/4} is attained at r^2 = 2k/pi
        C = self.coef * (2.0 * self.k / (np.pi * np.e)) ** (self.k / 2.0)
        return float(C), 0.5


class SigmaPower(FockFunction):
    """sigma_mod(z)^power / z^divisor for the context lattice.

    The divisor must not exceed the zero order of the numerator at 0, so
    the quotient is entire; evaluation below |z| = 1e-3 switches to a
    contour-extracted Taylor polynomial because the direct quotient is
    numerically delicate there.
    """

    def __init__(self, ctx, power: int, divisor: int, taylor_degree: int = None):
        from .elliptic import growth_constant  # local import, no cycle at module load

        if divisor < 0 or divisor > power:
            raise ConfigError("divisor must lie in [0, power]")
        self.ctx = ctx
        self.power = int(power)
        self.divisor = int(divisor)
        self.contour_radius = min(0.5, ctx._wmin / 2.0)
        deg = taylor_degree if taylor_degree is not None else 2 * power + 4
        coeffs = contour_derivatives(
            self._eval_direct_guarded, 0.0 + 0.0j, deg,
            radius=self.contour_radius,
        )
        fact = np.array([factorial(j) for j in range(deg + 1)], dtype=float)
        self.taylor = coeffs / fact
        self._c_growth = growth_constant(ctx)

    def log_eval(self, z):
        """A branch of log of the function; -inf at the numerator zeros."""
        from .elliptic import log_sigma_mod

        z = np.asarray(z, dtype=complex)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = self.power * log_sigma_mod(self.ctx, z)
            if self.divisor:
                out = out - self.divisor * np.log(z)
        return out

    def _eval_direct_guarded(self, z):
        # Contour ring stays away from 0, so the direct quotient is safe.
        return np.exp(self.log_eval(z))

    def __call__(self, z):
        z_in = np.asarray(z, dtype=complex)
        zf = np.atleast_1d(z_in).ravel()
        out = np.empty(zf.shape, dtype=complex)
        near = np.abs(zf) < _TAYLOR_SWITCH
        if np.any(~near):
            out[~near] = self._eval_direct_guarded(zf[~near])
        if np.any(near):
            out[near] = np.polyval(self.taylor[::-1], zf[near])
        if z_in.ndim == 0:
            return complex(out[0])
        return out.reshape(z_in.shape)

    def log_abs(self, z):
        return self.log_eval(z).real

    def derivatives_at(self, w: complex, order: int) -> np.ndarray:
        return contour_derivatives(self, w, order,
                                   radius=self.contour_radius)

    def growth_certificate(self):
        theta = 2.0 * self.power * self.ctx.alpha / np.pi
        C = self._c_growth ** self.power
        if self.divisor:
            # |z| < 1: bound by the max on |z| = 1 (maximum modulus).
            C = C * max(1.0, np.exp(np.pi * theta / 2.0))
        return float(C), float(theta)


class LinearCombination(FockFunction):
    """sum_i coeff_i * part_i."""

    def __init__(self, coeffs, parts):
        coeffs = np.asarray(coeffs, dtype=complex)
        if coeffs.size != len(parts):
            raise ConfigError("one coefficient per part required")
        self.coeffs = coeffs
        self.parts = list(parts)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        acc = np.zeros(z.shape, dtype=complex)
        for c, p in zip(self.coeffs, self.parts):
            acc = acc + c * p(z)
        return acc

    def log_abs(self, z):
        # Log-sum-exp over the parts' complex logs keeps the combination
        # finite when individual parts overflow in direct evaluation.
        logs = []
        for c, p in zip(self.coeffs, self.parts):
            if c == 0:
                continue
            le = getattr(p, "log_eval", None)
            if le is None:
                return super().log_abs(z)
            with np.errstate(divide="ignore"):
                logs.append(le(z) + np.log(complex(c)))
        if not logs:
            return np.full(np.asarray(z).shape, -np.inf)
        stack = np.stack(logs)
        m = np.max(stack.real, axis=0)
        m = np.where(np.isfinite(m), m, 0.0)
        total = np.sum(np.exp(stack - m[None, ...]), axis=0)
        with np.errstate(divide="ignore"):
            return m + np.log(np.abs(total))

    def derivatives_at(self, w: complex, order: int) -> np.ndarray:
        acc = np.zeros(order + 1, dtype=complex)
        for c, p in zip(self.coeffs, self.parts):
            acc += c * p.derivatives_at(w, order)
        return acc

    def growth_certificate(self):
        C_total, theta_max = 0.0, 0.0
        for c, p in zip(self.coeffs, self.parts):
            cert = p.growth_certificate()
            if cert is None:
                return None
            C_total += abs(c) * cert[0]
            theta_max = max(theta_max, cert[1])
        return float(C_total), float(theta_max)


class ShiftedFock(FockFunction):
    """beta_zeta F(z) = e^{i pi xi eta} e^{-pi |zeta|^2/2} e^{pi zeta z} F(z - conj(zeta))."""

    def __init__(self, zeta: complex, base: FockFunction):
        self.zeta = complex(zeta)
        self.base = base
        xi, eta = self.zeta.real, self.zeta.imag
        self.prefactor = np.exp(1j * np.pi * xi * eta
                                - np.pi * abs(self.zeta) ** 2 / 2.0)

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        return (self.prefactor * np.exp(np.pi * self.zeta * z)
                * self.base(z - np.conj(self.zeta)))

    def growth_certificate(self):
        cert = self.base.growth_certificate()
        if cert is None:
            return None
        C, theta = cert
        theta_new = (1.0 + theta) / 2.0
        b = abs(self.zeta)
        if b == 0.0:
            return C, theta
        # max_r of theta (r+b)^2 + 2 b r - theta_new r^2 (quadratic in r)
        phi_max = theta * b * b + (b * (theta + 1.0)) ** 2 / (theta_new - theta)
        C_new = C * np.exp(-np.pi * b * b / 2.0 + np.pi * phi_max / 2.0)
        return float(C_new), float(theta_new)


def fock_shift(zeta: complex, F: FockFunction) -> FockFunction:
    """Fock-side time-frequency shift; intertwines with pi_zeta through B."""
    if zeta == 0:
        return F
    return ShiftedFock(zeta, F)


def _stft_from_derivs(derivs: np.ndarray, n: int, zeta: complex) -> complex:
    acc = 0.0 + 0.0j
    for k in range(n + 1):
        acc += comb(n, k) * (-np.pi * zeta) ** k * derivs[n - k]
    xi, eta = zeta.real, zeta.imag
    return complex(
        acc * np.exp(-1j * np.pi * xi * eta)
        * np.exp(-np.pi * abs(zeta) ** 2 / 2.0)
        / np.sqrt(np.pi ** n * factorial(n))
    )


def stft_hermite(F: FockFunction, n: int, zeta: complex) -> complex:
    """Closed-form <f, pi_zeta H_n> for the signal with Bargmann image F."""
    _check_order(n)
    zeta = complex(zeta)
    derivs = F.derivatives_at(np.conj(zeta), n)
    return _stft_from_derivs(derivs, n, zeta)


def stft_hermite_batch(F: FockFunction, nmax: int, zeta: complex) -> np.ndarray:
    """<f, pi_zeta H_n> for all n = 0..nmax from one derivative extraction."""
    _check_order(nmax)
    zeta = complex(zeta)
    derivs = F.derivatives_at(np.conj(zeta), nmax)
    return np.array([_stft_from_derivs(derivs[: n + 1], n, zeta)
                     for n in range(nmax + 1)])


_MONOMIAL_CACHE: dict = {}


def _monomial(k: int) -> MonomialBasis:
    if k not in _MONOMIAL_CACHE:
        _MONOMIAL_CACHE[k] = MonomialBasis(k)
    return _MONOMIAL_CACHE[k]


def hermite_gram_entry(k: int, l: int, mu: complex) -> complex:
    """<H_k, pi_mu H_l> in closed form."""
    _check_order(k)
    _check_order(l)
    return stft_hermite(_monomial(k), l, mu)


# -- Fock-space norms --------------------------------------------------------

def _gl_panels(a: float, b: float, max_width: float, deg: int = 12):
    npanels = max(1, int(np.ceil((b - a) / max_width)))
    xs, ws = np.polynomial.legendre.leggauss(deg)
    edges = np.linspace(a, b, npanels + 1)
    mid = (edges[:-1] + edges[1:]) / 2.0
    half = (edges[1:] - edges[:-1]) / 2.0
    nodes = (mid[:, None] + half[:, None] * xs[None, :]).ravel()
    wts = (half[:, None] * ws[None, :]).ravel()
    return nodes, wts


def tail_radius(C: float, theta: float, tol: float = 1e-10) -> float:
    """Radius making both Gaussian tail bounds below tol."""
    if theta >= 1.0:
        raise DivergenceError("growth exponent theta must be < 1")
    gap = 1.0 - theta
    r2_m1 = 2.0 / (np.pi * gap) * np.log(max(2.0 * C / (gap * tol), 2.0))
    r2_l2 = 1.0 / (np.pi * gap) * np.log(max(C * C / (gap * tol), 2.0))
    return float(np.sqrt(max(r2_m1, r2_l2, 1.0)))


def fock_norms(F: FockFunction, trunc_R: float, certificate=None,
               tolerance: float = 1e-9, feature: float = 0.5):
    """(l2_fock, m1) of F by polar quadrature plus analytic tail bounds.

    l2_fock is the Fock norm (square root of the Gaussian-weighted L^2
    integral); m1 is int |F(z)| e^{-pi |z|^2 / 2} dm(z), which equals the
    M^1 norm of the time-domain signal against the Gaussian window. The
    caller must supply (or the function must carry) a growth certificate
    (C, theta) with theta < 1 so the truncation tail is bounded.
    """
    cert = certificate if certificate is not None else F.growth_certificate()
    if cert is None:
        raise ConfigError("fock_norms needs a growth certificate (C, theta)")
    C, theta = float(cert[0]), float(cert[1])
    if theta >= 1.0:
        raise DivergenceError(
            f"growth exponent theta={theta:.3f} >= 1: Fock integrals diverge"
        )
    if trunc_R <= 0:
        raise ConfigError("truncation radius must be positive")

    gap = 1.0 - theta
    l2_tail = C * C * np.exp(-np.pi * gap * trunc_R ** 2) / gap
    m1_tail = 2.0 * C * np.exp(-np.pi * gap * trunc_R ** 2 / 2.0) / gap
    if max(l2_tail, m1_tail) > tolerance:
        raise AccuracyError(
            f"tail bound {max(l2_tail, m1_tail):.3e} above tolerance "
            f"{tolerance:.1e}; increase trunc_R"
        )

    r_nodes, r_wts = _gl_panels(0.0, trunc_R, feature / 2.0)
    M = max(64, 4 * int(np.ceil(2.0 * np.pi * trunc_R / feature)))
    phi = 2.0 * np.pi * np.arange(M) / M
    zgrid = r_nodes[:, None] * np.exp(1j * phi)[None, :]
    # The certified integrands e^{k log|F| - k pi r^2 / 2} stay bounded for
    # theta < 1 even where F alone overflows, so combine in log space.
    logF = F.log_abs(zgrid)
    ang_w = 2.0 * np.pi / M
    r2 = r_nodes * r_nodes
    l2_sq = float(np.sum(
        r_wts * r_nodes * ang_w
        * np.sum(np.exp(2.0 * logF - np.pi * r2[:, None]), axis=1)
    ))
    m1 = float(np.sum(
        r_wts * r_nodes * ang_w
        * np.sum(np.exp(logF - np.pi * r2[:, None] / 2.0), axis=1)
    ))
    return float(np.sqrt(max(l2_sq, 0.0))), m1
