"""Frame analysis for Hermite windows and their constructed duals.

Certification routes:
  * density classification against the threshold s(Lambda) < 1/(n+1);
  * Wexler-Raz biorthogonality residuals on the adjoint lattice;
  * Janssen representation bounds (head sum over adjoint points plus an
    analytic Gaussian tail bound on the remainder);
  * packing-count Bessel bounds through M^1 norms;
  * truncated frame-expansion reconstruction;
  * a truncated-Gram Riesz-sequence probe on the adjoint system.

All inner products against Hermite windows go through the closed-form
short-time Fourier transform in the Bargmann domain; no route here relies
on another route's output, so the certificates cross-check each other.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb, factorial

import numpy as np
from scipy.interpolate import CubicSpline
from scipy.special import erfc

from .dual_window import DualWindowModel, gamma_time, solve_coefficients, wr_m1_norm
from .errors import ConfigError, ResourceError
from .hermite_bargmann import (
    HermiteWindow,
    MonomialBasis,
    SampledSignal,
    fock_norms,
    hermite_batch,
    hermite_gram_entry,
    stft_hermite_batch,
)
from .lattice import Lattice2D, adjoint, enumerate_points, packing_count

_CRITICAL_WINDOW = 1e-12
_GRAM_DIM_CAP = 2000
_GAMMA_GRID_TMAX = 9.0
_GAMMA_GRID_DT = 1.0 / 64.0


def classify(L: Lattice2D, n: int) -> str:
    """'frame', 'not-frame', or 'critical' by the density threshold."""
    t = L.area * (n + 1)
    if abs(t - 1.0) < _CRITICAL_WINDOW:
        return "critical"
    return "frame" if t < 1.0 else "not-frame"


@dataclass(frozen=True, eq=False)
class GammaMatrix:
    """Janssen weight Gamma(mu)_{kl} = s(Lambda)^{-1} <gamma_k, pi_mu g_l>."""

    mu: complex
    entries: np.ndarray


def gamma_matrix(g_model, gamma_model, mu: complex,
                 L: Lattice2D = None) -> GammaMatrix:
    """Janssen matrix for the window pair (g, gamma) at one adjoint point.

    Supported pairs: both Hermite, or Hermite analysis window g with a
    constructed dual family gamma (and the transposed combination).
    """
    if isinstance(g_model, DualWindowModel) and isinstance(gamma_model, DualWindowModel):
        raise ConfigError("dual/dual Janssen matrices are not supported")
    if isinstance(gamma_model, DualWindowModel):
        L = gamma_model.lattice
        n = gamma_model.n
        if not isinstance(g_model, HermiteWindow) or g_model.order != n:
            raise ConfigError("window orders must match")
        ent = np.empty((n + 1, n + 1), dtype=complex)
        for k in range(n + 1):
            ent[k, :] = stft_hermite_batch(gamma_model.fock_dual(k), n, mu)
    elif isinstance(g_model, DualWindowModel):
        L = g_model.lattice
        n = g_model.n
        if not isinstance(gamma_model, HermiteWindow) or gamma_model.order != n:
            raise ConfigError("window orders must match")
        # <H_k, pi_mu gamma_l> = e^{-2 pi i mu1 mu2} conj(<gamma_l, pi_{-mu} H_k>)
        phase = np.exp(-2j * np.pi * mu.real * mu.imag)
        ent = np.empty((n + 1, n + 1), dtype=complex)
        for l in range(n + 1):
            col = stft_hermite_batch(g_model.fock_dual(l), n, -mu)
            ent[:, l] = phase * np.conj(col)
    else:
        if L is None:
            raise ConfigError("lattice required for the Hermite/Hermite pair")
        n = g_model.order
        if gamma_model.order != n:
            raise ConfigError("window orders must match")
        ent = np.array([[hermite_gram_entry(k, l, mu) for l in range(n + 1)]
                        for k in range(n + 1)])
    return GammaMatrix(mu=complex(mu), entries=ent / L.area)


def wexler_raz_residual(model: DualWindowModel, R: float) -> float:
    """max |s^{-1} <gamma_l, pi_mu H_j> - delta_{0,mu} delta_{lj}| on |mu| <= R."""
    L = model.lattice
    n = model.n
    pts = enumerate_points(adjoint(L), R)
    resid = 0.0
    for l in range(n + 1):
        G = model.fock_dual(l)
        for mu in pts:
            vals = stft_hermite_batch(G, n, complex(mu)) / L.area
            target = np.zeros(n + 1)
            if abs(mu) < 1e-12:
                target[l] = 1.0
            resid = max(resid, float(np.max(np.abs(vals - target))))
    return resid


def _lattice_gaussian_tail(L_adj: Lattice2D, a: float, R: float) -> float:
    """Upper bound on sum over adjoint mu with |mu| > R of e^{-a |mu|^2}.

    Integral comparison: every lattice point owns a fundamental cell of
    area s contained in {|z| > R - d} with d the cell diameter, and
    |mu| >= |z| - d on its own cell.
    """
    s0 = L_adj.area
    d = abs(L_adj.omega1) + abs(L_adj.omega2)
    u0 = max(R - 2.0 * d, 0.0)
    integral = (np.exp(-a * u0 * u0) / (2.0 * a)
                + d * 0.5 * np.sqrt(np.pi / a) * erfc(np.sqrt(a) * u0))
    return float(2.0 * np.pi / s0 * integral)


def _hh_entry_envelope(k: int, l: int, r: np.ndarray) -> np.ndarray:
    """Pointwise bound on |<H_k, pi_mu H_l>| at |mu| = r (without e^{-pi r^2/2})."""
    acc = np.zeros_like(r)
    ck = np.sqrt(np.pi ** k / factorial(k))
    for i in range(l + 1):
        m = l - i
        if m > k:
            continue
        acc += (comb(l, i) * (np.pi * r) ** i
                * ck * factorial(k) / factorial(k - m) * r ** (k - m))
    return acc / np.sqrt(np.pi ** l * factorial(l))


@dataclass(frozen=True, eq=False)
class JanssenBounds:
    """Frame-operator bounds from the Janssen head plus tail estimate.

    ``inconclusive`` is set when the deviation (head beyond the identity
    term plus the analytic tail) reaches 1, so the lower bound clamps to 0
    and certifies nothing.
    """

    lower: float
    upper: float
    tail: float
    inconclusive: bool

    def __iter__(self):
        return iter((self.lower, self.upper, self.tail))


def janssen_bounds(model, L: Lattice2D = None, R: float = 3.0,
                   n: int = None) -> JanssenBounds:
    """Frame bounds via the Janssen representation.

    With a Hermite window family (pass HermiteWindow and the lattice):
    Gamma(0) = s^{-1} I exactly, and the deviation is bounded by the head
    sum of ||Gamma(mu)||_op over 0 < |mu| <= R plus a Gaussian tail using
    |<H_k, pi_mu H_l>| <= C_{kl} e^{-pi |mu|^2 / 4}.

    With a DualWindowModel: bounds on the mixed operator (analysis with h,
    synthesis with the dual), which equals the identity exactly when
    Wexler-Raz holds; the tail uses the dual's growth certificate.
    """
    if isinstance(model, DualWindowModel):
        L = model.lattice
        n = model.n
        mixed = True
    else:
        if L is None:
            raise ConfigError("lattice required for the Hermite-window case")
        n = model.order if isinstance(model, HermiteWindow) else int(n)
        mixed = False
    s = L.area
    L_adj = adjoint(L)
    d = abs(L_adj.omega1) + abs(L_adj.omega2)
    R_big = R + 2.0 * d + 6.0

    # Head: exact operator norms on |mu| <= R (deterministic order).
    pts = enumerate_points(L_adj, R)
    pts = pts[np.argsort(np.abs(pts), kind="stable")]
    head = 0.0
    dev0 = 0.0
    for mu in pts:
        mu = complex(mu)
        if mixed:
            M = gamma_matrix(HermiteWindow(n), model, mu).entries
        else:
            M = gamma_matrix(HermiteWindow(n), HermiteWindow(n), mu, L).entries * s
        if abs(mu) < 1e-12:
            dev0 = float(np.linalg.norm(M - np.eye(n + 1), 2))
        else:
            head += float(np.linalg.norm(M, 2))

    # Frobenius envelope e(r) bounding the matrix norm at radius |mu| = r.
    # Mixed case: Cauchy derivative bounds on the dual's Fock function with
    # circle radius min(1, 1/r), which keeps the pure e^{-pi rho r^2 / 2}
    # decay at the cost of a bounded e^{3 pi theta / 2} factor.
    if mixed:
        rho = model.rho
        theta = 1.0 - rho
        a = np.pi * rho / 4.0
        csum = sum(model.growth_certificate(k)[0] ** 2 for k in range(n + 1))
    else:
        a = np.pi / 4.0

    def env_log_fn(r):
        r = np.asarray(r, dtype=float)
        acc = np.zeros_like(r)
        with np.errstate(divide="ignore"):
            if mixed:
                tc = np.minimum(1.0, 1.0 / np.maximum(r, 1e-30))
                for l in range(n + 1):
                    poly = np.zeros_like(r)
                    for i in range(l + 1):
                        poly += (comb(l, i) * (np.pi * r) ** i
                                 * factorial(l - i) / tc ** (l - i))
                    acc += poly ** 2 / (np.pi ** l * factorial(l))
                return (np.log(np.sqrt(csum * acc) / s)
                        + np.pi * theta * (r + tc) ** 2 / 2.0
                        - np.pi * r * r / 2.0)
            for k in range(n + 1):
                for l in range(n + 1):
                    acc += _hh_entry_envelope(k, l, r) ** 2
            return np.log(np.sqrt(acc)) - np.pi * r * r / 2.0

    # Midrange: envelope summed over actual points R < |mu| <= R_big.
    pts_big = enumerate_points(L_adj, R_big)
    rr = np.abs(pts_big)
    mid = float(np.sum(np.exp(env_log_fn(rr[rr > R + 1e-9]))))

    # Far field: e(r) <= CF e^{-a r^2} beyond R_big, summed by cell integral.
    rgrid = np.linspace(0.0, R_big + 10.0, int(50 * R_big) + 501)
    logCF = float(np.max(env_log_fn(rgrid) + a * rgrid ** 2))
    far = float(np.exp(logCF) * _lattice_gaussian_tail(L_adj, a, R_big))

    tail = mid + far
    deviation = dev0 + head + tail
    if mixed:
        lower = max(0.0, 1.0 - deviation)
        upper = 1.0 + deviation
    else:
        lower = max(0.0, (1.0 - deviation) / s)
        upper = (1.0 + deviation) / s
    return JanssenBounds(lower=lower, upper=upper, tail=float(tail),
                         inconclusive=bool(lower <= 0.0))


_HERMITE_M1_CACHE: dict = {}


def hermite_m1_norm(k: int) -> float:
    """M^1 norm of H_k (Gaussian STFT absolutely integrated)."""
    if k not in _HERMITE_M1_CACHE:
        _, m1 = fock_norms(MonomialBasis(k), 8.0)
        _HERMITE_M1_CACHE[k] = m1
    return _HERMITE_M1_CACHE[k]


def upper_bound_estimate(L: Lattice2D, n: int) -> float:
    """Bessel bound: packing count times summed squared window M^1 norms
    (absolute constant reported as 1)."""
    nL = packing_count(L)
    return float(nL * sum(hermite_m1_norm(k) ** 2 for k in range(n + 1)))


def lower_bound_estimate(model: DualWindowModel) -> float:
    """Relative lower frame bound n(Lambda)^{-1} max_j ||gamma_j||_{M^1}^{-2}.

    Uses the Wexler-Raz-normalized dual family; the vector case takes the
    worst component M^1 norm, a conservative heuristic extension of the
    scalar statement. Absolute constant reported as 1.
    """
    nL = packing_count(model.lattice)
    worst = max(wr_m1_norm(model, j) for j in range(model.n + 1))
    return float(1.0 / (nL * worst ** 2))


def reconstruct(model: DualWindowModel, f_components, R: float):
    """Truncated frame expansion of a vector signal against the dual family.

    f_rec = sum over lattice |lambda| <= R of
            (sum_k <f_k, pi_lambda H_k>) pi_lambda gamma  componentwise;
    returns (list of SampledSignal, relative L^2 error). The dual windows
    are sampled once on a master grid and shifted by cubic splines.
    """
    n = model.n
    comps = list(f_components)
    if len(comps) != n + 1:
        raise ConfigError(f"expected {n + 1} signal components")
    base = comps[0]
    total = np.sqrt(sum(c.norm() ** 2 for c in comps))
    if total == 0.0:
        raise ConfigError("zero input signal cannot be reconstructed")

    t = base.t
    w = base.quad_weights()
    pts = enumerate_points(model.lattice, R)
    pts = pts[np.lexsort((pts.imag, pts.real))]

    tg = np.arange(-_GAMMA_GRID_TMAX, _GAMMA_GRID_TMAX + _GAMMA_GRID_DT / 2,
                   _GAMMA_GRID_DT)
    splines = []
    for j in range(n + 1):
        gj = gamma_time(model, j, tg)
        splines.append((CubicSpline(tg, gj.real), CubicSpline(tg, gj.imag)))

    rec = [np.zeros(base.length, dtype=complex) for _ in range(n + 1)]
    for lam in pts:
        x, xi = lam.real, lam.imag
        phase = np.exp(2j * np.pi * xi * t)
        Hs = hermite_batch(t - x, n)
        coef = 0.0 + 0.0j
        for k in range(n + 1):
            coef += np.sum(w * comps[k].samples * np.conj(phase * Hs[k]))
        inside = (t - x >= tg[0]) & (t - x <= tg[-1])
        if not np.any(inside):
            continue
        ts = t[inside] - x
        for j in range(n + 1):
            gshift = splines[j][0](ts) + 1j * splines[j][1](ts)
            rec[j][inside] += coef * phase[inside] * gshift

    err = np.sqrt(sum(
        float(np.sum(w * np.abs(comps[j].samples - rec[j]) ** 2))
        for j in range(n + 1)
    ))
    out = [SampledSignal(rec[j], base.t_min, base.dt) for j in range(n + 1)]
    return out, float(err / total)


def riesz_check(L: Lattice2D, n: int, R: float):
    """Extreme eigenvalues of the truncated Gram matrix of the adjoint
    system {pi_mu H_j}.

    A consistency probe only: the truncated minimum eigenvalue staying away
    from 0 under growing R is consistent with the Riesz property, never a
    certificate of it.
    """
    pts = enumerate_points(adjoint(L), R)
    pts = pts[np.lexsort((pts.imag, pts.real))]
    dim = (n + 1) * pts.size
    if dim > _GRAM_DIM_CAP:
        raise ResourceError(f"Gram dimension {dim} above cap {_GRAM_DIM_CAP}")
    gram = np.empty((dim, dim), dtype=complex)
    # <pi_mu H_j, pi_nu H_k> = e^{-2 pi i nu1 (nu2 - mu2)} <pi_{mu-nu} H_j, H_k>
    # and <pi_d H_j, H_k> = conj(<H_k, pi_d H_j>).
    for b, nu in enumerate(pts):
        for a, mu in enumerate(pts):
            d = complex(mu - nu)
            phase = np.exp(-2j * np.pi * nu.real * (nu.imag - mu.imag))
            for j in range(n + 1):
                for k in range(n + 1):
                    gram[a * (n + 1) + j, b * (n + 1) + k] = (
                        phase * np.conj(hermite_gram_entry(k, j, d))
                    )
    vals = np.linalg.eigvalsh(gram)
    return float(vals[0]), float(vals[-1])


@dataclass(frozen=True, eq=False)
class FrameReport:
    """Assembled certification record for one (lattice, n) configuration."""

    lattice: Lattice2D
    n: int
    density_classification: str
    wexler_raz_residual: float = None
    janssen_tail: float = None
    lower_bound_estimate: float = None
    upper_bound_estimate: float = None
    reconstruction_error: float = None
    provenance: dict = field(default_factory=dict)

    def to_json_dict(self) -> dict:
        def num(v):
            return None if v is None else float(v)

        return {
            "schema": "frame-report/1",
            "lattice": self.lattice.to_json_dict(),
            "n": self.n,
            "density": self.lattice.area,
            "density_classification": self.density_classification,
            "wexler_raz_residual": num(self.wexler_raz_residual),
            "janssen_tail": num(self.janssen_tail),
            "lower_bound_estimate": num(self.lower_bound_estimate),
            "upper_bound_estimate": num(self.upper_bound_estimate),
            "reconstruction_error": num(self.reconstruction_error),
            "provenance": dict(self.provenance),
        }


def analyze(L: Lattice2D, n: int, radius: float = 3.0,
            reconstruction_radius: float = None) -> FrameReport:
    """Full certification pipeline for one configuration.

    The dual-window routes run only in the frame regime; the Bessel upper
    bound and the classification are always reported. Reconstruction is
    optional because it dominates the runtime.
    """
    cls = classify(L, n)
    prov = {
        "density_classification": "density threshold s(Lambda) < 1/(n+1)",
        "upper_bound_estimate":
            "Bessel bound: packing count times window M1 norms (kappa=1)",
        "janssen_tail":
            "Janssen head+tail for the Hermite frame operator at the report radius",
    }
    upper = upper_bound_estimate(L, n)
    jt = janssen_bounds(HermiteWindow(n), L=L, R=radius).tail
    wr = lower = rec = None
    if cls == "frame":
        model = solve_coefficients(L, n)
        wr = wexler_raz_residual(model, radius)
        prov["wexler_raz_residual"] = (
            "Wexler-Raz biorthogonality residual on the adjoint lattice")
        lower = lower_bound_estimate(model)
        prov["lower_bound_estimate"] = (
            "inverse packing count over squared dual M1 norm (kappa=1)")
        if reconstruction_radius is not None:
            from .hermite_bargmann import hermite_signal

            f = [hermite_signal(k) for k in range(n + 1)]
            _, rec = reconstruct(model, f, reconstruction_radius)
            prov["reconstruction_error"] = (
                "relative L2 error of the truncated frame expansion")
    else:
        prov["note"] = (
            "dual-window certificates skipped: density at or above critical")
    return FrameReport(
        lattice=L,
        n=n,
        density_classification=cls,
        wexler_raz_residual=wr,
        janssen_tail=jt,
        lower_bound_estimate=lower,
        upper_bound_estimate=upper,
        reconstruction_error=rec,
        provenance=prov,
    )
