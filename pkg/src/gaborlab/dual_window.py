"""Explicit dual windows for Hermite superframes below critical density.

Construction: on the conjugate adjoint lattice, S(z) = sigma_mod(z)^{n+1}
vanishes to order n+1 at every adjoint point. The shifted generators
S_m(z) = S(z)/z^{n+1-m} (m = 0..n) still vanish to order n+1 away from the
origin but only to order m at 0, so a triangular solve produces

    G_j = sum_{m=j}^{n} c_{m,j} S_m

with (1/sqrt(pi^l l!)) G_j^{(l)}(0) = s(Lambda) delta_{jl}. Those G_j are
the Bargmann images of Wexler-Raz dual windows gamma_j: their short-time
Fourier coefficients against pi_mu H_l vanish at every nonzero adjoint mu
(all derivatives through order n vanish there) and reproduce the scaled
delta at mu = 0. Time-domain windows come from inverting the Bargmann
transform by quadrature.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import factorial

import numpy as np

from .elliptic import WeierstrassContext, build_context
from .errors import AccuracyError, ConfigError, DensityError
from .hermite_bargmann import (
    FockFunction,
    LinearCombination,
    SigmaPower,
    _check_order,
    tail_radius,
)
from .lattice import Lattice2D, adjoint, conjugate

_CRITICAL_WINDOW = 1e-12
_DIAG_FLOOR = 1e-10


def adjoint_conjugate_context(L: Lattice2D, tol: float = 1e-12) -> WeierstrassContext:
    """Weierstrass context for the conjugate adjoint lattice."""
    return build_context(conjugate(adjoint(L)), tol)


def build_S(L: Lattice2D, n: int, ctx: WeierstrassContext = None) -> SigmaPower:
    """S(z) = sigma_mod(z)^{n+1} on the conjugate adjoint lattice.

    Zero set is exactly that lattice, each zero of multiplicity n+1;
    |S(z)| <= c^{n+1} e^{(pi/2)(n+1) s(Lambda) |z|^2}.
    """
    if ctx is None:
        ctx = adjoint_conjugate_context(L)
    return SigmaPower(ctx, n + 1, 0)


def build_S_m(S: SigmaPower, n: int, m: int) -> SigmaPower:
    """S_m(z) = S(z) / z^{n+1-m}; entire, vanishing to order exactly m at 0."""
    if not (0 <= m <= n):
        raise ConfigError("divisor index m must lie in 0..n")
    return SigmaPower(S.ctx, n + 1, n + 1 - m)


@dataclass(frozen=True, eq=False)
class DualWindowModel:
    """Solved dual-window family for (Lambda, n).

    coeffs[m, j] holds c_{m,j}; column j is supported on rows m >= j with
    nonzero diagonal. rho = 1 - (n+1) s(Lambda) > 0 measures the distance
    to critical density and controls every estimate downstream;
    kappa_decay = rho / (2 + rho) is the Gaussian decay rate of gamma_j.
    """

    n: int
    lattice: Lattice2D
    adjoint_ctx: WeierstrassContext
    coeffs: np.ndarray
    rho: float
    kappa_decay: float
    _s_parts: tuple = field(repr=False, default=())
    _s_taylor: np.ndarray = field(repr=False, default=None)

    def fock_dual(self, j: int) -> LinearCombination:
        """Bargmann image G_j of the j-th dual window."""
        if not (0 <= j <= self.n):
            raise ConfigError("component index out of range")
        return LinearCombination(self.coeffs[j:, j], self._s_parts[j:])

    def dual_poly(self, j: int) -> np.ndarray:
        """Coefficients p such that G_j(z) = T(z) * sum_m p[m] z^m with
        T = S / z^{n+1} (ascending order, length n+1)."""
        p = np.zeros(self.n + 1, dtype=complex)
        p[j:] = self.coeffs[j:, j]
        return p

    def growth_certificate(self, j: int):
        return self.fock_dual(j).growth_certificate()


def solve_coefficients(L: Lattice2D, n: int, ctx: WeierstrassContext = None,
                       tol: float = 1e-12) -> DualWindowModel:
    """Solve the triangular interpolation system for the dual family.

    The Taylor coefficients s_k of S at 0 give the derivative data
    d_{l,m} = sqrt(l!/pi^l) s_{l+n+1-m}; the target is
    sum_m c_{m,j} d_{l,m} = s(Lambda) delta_{lj}. d is lower triangular
    with diagonal sqrt(m!/pi^m) s_{n+1}, and s_{n+1} = sigma'(0)^{n+1} = 1
    up to contour error, so the system is well conditioned whenever the
    density condition holds.
    """
    _check_order(n)
    s_area = L.area
    theta = (n + 1) * s_area
    if theta >= 1.0 - _CRITICAL_WINDOW:
        if abs(theta - 1.0) < _CRITICAL_WINDOW:
            raise DensityError(
                f"critical density: (n+1) s(Lambda) = {theta:.12f}; the "
                "construction has no solution there"
            )
        raise DensityError(
            f"(n+1) s(Lambda) = {theta:.6f} >= 1: no dual window family "
            "exists at or above critical density"
        )
    rho = 1.0 - theta

    if ctx is None:
        ctx = adjoint_conjugate_context(L, tol)
    S = build_S(L, n, ctx)
    parts = tuple(build_S_m(S, n, m) for m in range(n + 1))

    # Taylor coefficients of S at 0: S.taylor was extracted for divisor 0,
    # so s_k = S.taylor[k]; indices up to 2n+1 are needed below.
    s_taylor = S.taylor
    dmat = np.zeros((n + 1, n + 1), dtype=complex)
    for l in range(n + 1):
        scale = np.sqrt(factorial(l) / np.pi ** l)
        for m in range(l + 1):
            dmat[l, m] = scale * s_taylor[l + n + 1 - m]
    if np.min(np.abs(np.diag(dmat))) < _DIAG_FLOOR:
        raise AccuracyError(
            "triangular diagonal below 1e-10: S derivative data degenerate"
        )
    rhs = s_area * np.eye(n + 1, dtype=complex)
    coeffs = np.zeros((n + 1, n + 1), dtype=complex)
    for l in range(n + 1):
        coeffs[l] = (rhs[l] - dmat[l, :l] @ coeffs[:l]) / dmat[l, l]
    coeffs[np.abs(coeffs) < 1e-300] = 0.0
    coeffs.setflags(write=False)

    return DualWindowModel(
        n=n,
        lattice=L,
        adjoint_ctx=ctx,
        coeffs=coeffs,
        rho=rho,
        kappa_decay=rho / (2.0 + rho),
        _s_parts=parts,
        _s_taylor=s_taylor,
    )


def _gl_line(a: float, b: float, max_width: float, deg: int = 12):
    npanels = max(1, int(np.ceil((b - a) / max_width)))
    xs, ws = np.polynomial.legendre.leggauss(deg)
    edges = np.linspace(a, b, npanels + 1)
    mid = (edges[:-1] + edges[1:]) / 2.0
    half = (edges[1:] - edges[:-1]) / 2.0
    return ((mid[:, None] + half[:, None] * xs[None, :]).ravel(),
            (half[:, None] * ws[None, :]).ravel())


def gamma_time(model: DualWindowModel, j: int, t,
               tolerance: float = 1e-9):
    """Time-domain dual window gamma_j on the grid t.

    Inverts the Bargmann transform,

        gamma(t) = 2^{1/4} e^{-pi t^2}
                   int G_j(z) e^{-pi conj(z)^2/2 + 2 pi t conj(z) - pi |z|^2} dm_z,

    written as a separable contraction: with z = x + i y the t-dependence
    enters only through e^{-pi (x-t)^2} and e^{-2 pi i y t}, so one
    evaluation of G_j on an (x, y) product grid serves every t. The
    integrand envelope decays like e^{-pi rho |z|^2 / 2}, which sets the
    y-extent; the radius is capped at 8/sqrt(rho).
    """
    if not (0 <= j <= model.n):
        raise ConfigError("component index out of range")
    t_in = np.asarray(t, dtype=float)
    tv = np.atleast_1d(t_in).ravel()
    rho = model.rho

    cert = model.growth_certificate(j)
    Cg = max(cert[0], 1.0)
    r_need = np.sqrt(2.0 * (np.log(Cg * 1e3 / tolerance) + 1.0)
                     / (np.pi * rho))
    r_cap = 8.0 / np.sqrt(rho)
    Ry = min(r_need, r_cap)
    residual_bound = Cg * 1e3 * np.exp(-np.pi * rho * Ry * Ry / 2.0)
    if residual_bound > tolerance:
        raise AccuracyError(
            f"tail bound {residual_bound:.2e} above tolerance at the "
            f"radius cap 8/sqrt(rho) = {r_cap:.2f}"
        )

    # x-integrand ~ e^{-pi (x-t)^2 - pi rho x^2 / 2}: center 2t/(2+rho).
    centers = 2.0 * tv / (2.0 + rho)
    wx = 4.5
    h = min(0.25, model.adjoint_ctx._wmin / 2.0)
    xn, xw = _gl_line(centers.min() - wx, centers.max() + wx, h)
    yn, yw = _gl_line(-Ry, Ry, h)

    Z = xn[:, None] + 1j * yn[None, :]
    Tfun = SigmaPower(model.adjoint_ctx, model.n + 1, model.n + 1)
    poly = model.dual_poly(j)
    # Assemble in log space: Re(log G) - pi |z|^2 / 2 <= -pi rho |z|^2 / 2
    # stays bounded even when G itself would overflow near critical density.
    with np.errstate(divide="ignore"):
        logG = (Tfun.log_eval(Z)
                + np.log(np.polyval(poly[::-1], Z).astype(complex)))
    A = (np.exp(logG
                - np.pi * (xn * xn)[:, None] / 2.0
                - np.pi * (yn * yn)[None, :] / 2.0
                + 1j * np.pi * xn[:, None] * yn[None, :])
         * xw[:, None] * yw[None, :])
    V = np.exp(-2j * np.pi * np.outer(yn, tv))
    B = A @ V
    U = np.exp(-np.pi * (xn[:, None] - tv[None, :]) ** 2)
    vals = 2.0 ** 0.25 * np.sum(U * B, axis=0)
    return complex(vals[0]) if t_in.ndim == 0 else vals.reshape(t_in.shape)


def dual_norms(model: DualWindowModel, j: int,
               tolerance: float = 1e-9):
    """(l2, m1_bound, m1_quadrature) for the j-th dual window.

    Norms refer to the dual normalized to unit coefficient on S_j, i.e.
    G_j / (s(Lambda) sqrt(pi^j / j!)); for j = n that is exactly S_n, the
    function the closed-form bound m1_bound = 4 c^{n+1} / rho controls.
    The Wexler-Raz-normalized dual is this function times
    s(Lambda) sqrt(pi^j / j!).
    """
    from .hermite_bargmann import fock_norms

    if not (0 <= j <= model.n):
        raise ConfigError("component index out of range")
    scale = model.lattice.area * np.sqrt(np.pi ** j / factorial(j))
    G = model.fock_dual(j)
    Gtilde = LinearCombination(G.coeffs / scale, G.parts)
    C, theta = Gtilde.growth_certificate()
    R = tail_radius(C, theta, tolerance * 1e-1)
    feature = min(0.5, model.adjoint_ctx._wmin / 2.0)
    l2, m1 = fock_norms(Gtilde, R, certificate=(C, theta),
                        tolerance=tolerance, feature=feature)
    c_adj = model.adjoint_ctx.c_growth
    m1_bound = 4.0 * c_adj ** (model.n + 1) / model.rho
    return l2, float(m1_bound), m1


def wr_m1_norm(model: DualWindowModel, j: int,
               tolerance: float = 1e-9) -> float:
    """M^1 norm of the Wexler-Raz-normalized dual gamma_j itself."""
    from .hermite_bargmann import fock_norms

    G = model.fock_dual(j)
    C, theta = G.growth_certificate()
    R = tail_radius(C, theta, tolerance * 1e-1)
    feature = min(0.5, model.adjoint_ctx._wmin / 2.0)
    _, m1 = fock_norms(G, R, certificate=(C, theta),
                       tolerance=tolerance, feature=feature)
    return m1
