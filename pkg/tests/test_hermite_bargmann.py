"""Tests for Hermite windows and the Bargmann-Fock machinery.

Closed-form paths are checked against independent oracles: scipy's
Hermite polynomials for time-domain values, direct time quadrature for
inner products, and polar Gamma integrals for Fock norms.
"""

from math import factorial

import numpy as np
import pytest
from scipy.special import eval_hermite, gamma

from gaborlab.elliptic import build_context, sigma_mod
from gaborlab.errors import (
    AccuracyError,
    ConfigError,
    DivergenceError,
    OrderCapError,
    TruncationDomainError,
)
from gaborlab.hermite_bargmann import (
    FockFunction,
    LinearCombination,
    MonomialBasis,
    SampledSignal,
    SigmaPower,
    bargmann,
    contour_derivatives,
    default_grid,
    fock_norms,
    fock_shift,
    hermite_batch,
    hermite_eval,
    hermite_gram_entry,
    hermite_signal,
    pi_shift_hermite,
    stft_hermite,
    stft_hermite_batch,
    stft_time_quadrature,
    tail_radius,
)
from gaborlab.lattice import square


def scipy_hermite(n, t):
    """Oracle: H_n(t) = (2 pi)^{1/4} psi_n(sqrt(2 pi) t) with psi_n the
    unit-variance Hermite function built from scipy's polynomials."""
    x = np.sqrt(2.0 * np.pi) * np.asarray(t, dtype=float)
    norm = np.sqrt(2.0 ** n * float(factorial(n)) * np.sqrt(np.pi))
    psi = eval_hermite(n, x) * np.exp(-x * x / 2.0) / norm
    return (2.0 * np.pi) ** 0.25 * psi


def m1_monomial_exact(k):
    """Oracle: int |e_k| e^{-pi |z|^2/2} dm(z) in polar coordinates."""
    coef = np.sqrt(np.pi ** k / float(factorial(k)))
    return coef * np.pi * (2.0 / np.pi) ** ((k + 2) / 2.0) * gamma(k / 2.0 + 1.0)


def test_hermite_matches_scipy():
    t = np.linspace(-4.0, 4.0, 257)
    for n in range(9):
        ref = scipy_hermite(n, t)
        got = hermite_eval(n, t)
        assert np.max(np.abs(got - ref)) < 1e-12 * max(1.0, np.max(np.abs(ref)))


def test_hermite_batch_layout():
    t = np.linspace(-2, 2, 41)
    rows = hermite_batch(t, 5)
    assert rows.shape == (6, t.size)
    for n in range(6):
        assert np.max(np.abs(rows[n] - hermite_eval(n, t))) < 1e-14


def test_hermite_eval_scalar():
    v = hermite_eval(0, 0.0)
    assert isinstance(v, float)
    assert abs(v - 2.0 ** 0.25) < 1e-14


def test_hermite_orthonormality():
    sigs = [hermite_signal(n) for n in range(7)]
    for k in range(7):
        for l in range(k, 7):
            val = sigs[k].inner(sigs[l])
            assert abs(val - (1.0 if k == l else 0.0)) < 1e-10


def test_order_guards():
    with pytest.raises(OrderCapError):
        hermite_eval(65, 0.0)
    with pytest.raises(ConfigError):
        hermite_eval(-1, 0.0)
    with pytest.raises(ConfigError):
        hermite_eval(1.5, 0.0)


def test_bargmann_of_hermite_is_monomial():
    rng = np.random.default_rng(83)
    z = 3.0 * rng.uniform(0, 1, 20) * np.exp(2j * np.pi * rng.uniform(0, 1, 20))
    for n in range(6):
        sig = hermite_signal(n)
        got = bargmann(sig, z)
        ref = MonomialBasis(n)(z)
        assert np.max(np.abs(got - ref)) < 1e-7


def test_bargmann_scalar_and_zero_signal():
    sig = hermite_signal(0)
    v = bargmann(sig, 0.5 + 0.25j)
    assert isinstance(v, complex)
    zero = SampledSignal(np.zeros(129, dtype=complex), -2.0, 1.0 / 32.0)
    assert bargmann(zero, 1.0 + 1.0j) == 0


def test_bargmann_truncation_guard():
    sig = hermite_signal(0, t_max=3.0)
    with pytest.raises(TruncationDomainError):
        bargmann(sig, 3.0 + 0.0j)


def test_stft_hermite_vs_time_quadrature():
    rng = np.random.default_rng(89)
    zetas = 2.0 * rng.uniform(0.1, 1, 5) * np.exp(2j * np.pi * rng.uniform(0, 1, 5))
    for l in range(5):
        sig = hermite_signal(l)
        F = MonomialBasis(l)
        for n in range(5):
            for zeta in zetas:
                ref = stft_time_quadrature(sig, n, complex(zeta))
                got = stft_hermite(F, n, complex(zeta))
                assert abs(got - ref) < 1e-7


def test_stft_batch_matches_singles():
    F = MonomialBasis(2)
    zeta = 0.7 - 0.4j
    batch = stft_hermite_batch(F, 4, zeta)
    for n in range(5):
        assert abs(batch[n] - stft_hermite(F, n, zeta)) < 1e-13


def test_gram_entry_values():
    # Gaussian ambiguity function: |<H_0, pi_mu H_0>| = e^{-pi |mu|^2 / 2}.
    assert abs(abs(hermite_gram_entry(0, 0, 1.0 + 1.0j)) - np.exp(-np.pi)) < 1e-12
    for k in range(4):
        for l in range(4):
            val = hermite_gram_entry(k, l, 0.0)
            assert abs(val - (1.0 if k == l else 0.0)) < 1e-12


def test_two_shift_gram_law():
    # <pi_mu H_j, pi_nu H_k> = e^{-2 pi i nu_1 (nu_2 - mu_2)}
    #                          conj(<H_k, pi_{mu - nu} H_j>),
    # the identity the Gram assembly relies on, against time quadrature.
    t = default_grid()
    rng = np.random.default_rng(97)
    for _ in range(6):
        mu = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
        nu = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
        j, k = rng.integers(0, 3, 2)
        a = SampledSignal(pi_shift_hermite(int(j), mu, t), t[0], t[1] - t[0])
        b = SampledSignal(pi_shift_hermite(int(k), nu, t), t[0], t[1] - t[0])
        direct = a.inner(b)
        phase = np.exp(-2j * np.pi * nu.real * (nu.imag - mu.imag))
        law = phase * np.conj(hermite_gram_entry(int(k), int(j), mu - nu))
        assert abs(direct - law) < 1e-9


def test_fock_shift_intertwining():
    # B(pi_mu f) = fock_shift(mu, B f) pointwise.
    t = default_grid()
    rng = np.random.default_rng(101)
    for n in (0, 2):
        mu = complex(rng.uniform(-1, 1), rng.uniform(-1, 1))
        sig = SampledSignal(pi_shift_hermite(n, mu, t), t[0], t[1] - t[0])
        F = fock_shift(mu, MonomialBasis(n))
        for _ in range(4):
            z = complex(rng.uniform(-1.5, 1.5), rng.uniform(-1.5, 1.5))
            assert abs(bargmann(sig, z) - F(z)) < 1e-7
    assert fock_shift(0.0, MonomialBasis(1)) is not None


def test_contour_derivatives_exact():
    a = 0.7 - 0.3j
    w = 0.3 + 0.2j

    def f(z):
        return np.exp(a * np.asarray(z, dtype=complex))

    got = contour_derivatives(f, w, 6)
    ref = np.array([a ** k * np.exp(a * w) for k in range(7)])
    assert np.max(np.abs(got - ref)) < 1e-10
    with pytest.raises(ConfigError):
        contour_derivatives(f, w, 6, nodes=4)


def test_monomial_exact_derivatives():
    F = MonomialBasis(3)
    w = 0.4 - 0.1j
    got = F.derivatives_at(w, 5)
    ref = contour_derivatives(F, w, 5)
    assert np.max(np.abs(got - ref)) < 1e-10


def test_fock_norms_monomial_oracle():
    for k in range(5):
        F = MonomialBasis(k)
        C, theta = F.growth_certificate()
        R = tail_radius(C, theta, 1e-11)
        l2, m1 = fock_norms(F, R, tolerance=1e-10)
        assert abs(l2 - 1.0) < 1e-8
        assert abs(m1 - m1_monomial_exact(k)) < 1e-8


def test_fock_norms_guards():
    F = MonomialBasis(0)
    with pytest.raises(DivergenceError):
        fock_norms(F, 5.0, certificate=(1.0, 1.0))
    with pytest.raises(DivergenceError):
        tail_radius(1.0, 1.2)
    with pytest.raises(ConfigError):
        fock_norms(F, -1.0)
    with pytest.raises(AccuracyError):
        fock_norms(F, 0.5, tolerance=1e-12)

    class Plain(FockFunction):
        def __call__(self, z):
            return np.ones_like(np.asarray(z, dtype=complex))

    with pytest.raises(ConfigError):
        fock_norms(Plain(), 5.0)


def test_sigma_power_matches_elliptic():
    ctx = build_context(square(0.8))
    S = SigmaPower(ctx, 2, 1)
    rng = np.random.default_rng(103)
    for _ in range(6):
        z = complex(rng.uniform(0.2, 1.0), rng.uniform(0.2, 1.0))
        ref = sigma_mod(ctx, z) ** 2 / z
        assert abs(S(z) - ref) < 1e-10 * max(1.0, abs(ref))


def test_sigma_power_taylor_switch_agreement():
    # White-box: just below the switch radius the Taylor route used by
    # __call__ must match the direct quotient at the same point.
    ctx = build_context(square(0.8))
    S = SigmaPower(ctx, 2, 1)
    for phi in (0.3, 1.7, 4.0):
        z = 0.9e-3 * np.exp(1j * phi)
        taylor = S(complex(z))
        direct = complex(S._eval_direct_guarded(np.array([z]))[0])
        assert abs(taylor - direct) < 1e-11


def test_sigma_power_unit_derivative_quotient():
    # sigma'(0) = 1, so sigma_mod(z)/z -> 1 at the origin.
    ctx = build_context(square(0.8))
    S = SigmaPower(ctx, 1, 1)
    assert abs(S(1e-6 + 0j) - 1.0) < 1e-9


def test_sigma_power_growth_certificate():
    ctx = build_context(square(0.8))
    S = SigmaPower(ctx, 3, 2)
    C, theta = S.growth_certificate()
    rng = np.random.default_rng(107)
    z = rng.uniform(-4, 4, 100) + 1j * rng.uniform(-4, 4, 100)
    bound = np.log(C) + np.pi * theta * np.abs(z) ** 2 / 2.0
    assert np.all(S.log_abs(z).real <= bound + 1e-9)
    with pytest.raises(ConfigError):
        SigmaPower(ctx, 1, 2)


def test_linear_combination():
    parts = (MonomialBasis(0), MonomialBasis(2))
    F = LinearCombination(np.array([0.5, -2.0j]), parts)
    z = np.array([0.3 + 0.1j, -1.0 + 2.0j, 0.0 + 0.0j])
    ref = 0.5 * parts[0](z) - 2.0j * parts[1](z)
    assert np.max(np.abs(F(z) - ref)) < 1e-14
    la = F.log_abs(z)
    assert np.max(np.abs(np.exp(la) - np.abs(ref))) < 1e-12
    with pytest.raises(ConfigError):
        LinearCombination(np.array([1.0]), parts)


def test_sampled_signal_csv_round_trip(tmp_path):
    t = default_grid(2.0, 1.0 / 64.0)
    samples = hermite_batch(t, 2)[2] * (1.0 + 0.5j)
    sig = SampledSignal(samples, -2.0, 1.0 / 64.0)
    path = tmp_path / "sig.csv"
    sig.to_csv(path, tool="test", content="H2 scaled")
    text = path.read_text()
    assert text.startswith("#")
    assert "# t_min" in text
    back = SampledSignal.from_csv(path)
    assert back.length == sig.length
    assert abs(back.t_min - sig.t_min) < 1e-15
    assert np.max(np.abs(back.samples - sig.samples)) < 1e-15


def test_sampled_signal_guards(tmp_path):
    with pytest.raises(ConfigError):
        SampledSignal(np.zeros(4, dtype=complex), 0.0, 0.1)
    a = hermite_signal(0, t_max=2.0)
    b = hermite_signal(0, t_max=3.0)
    with pytest.raises(ConfigError):
        a.inner(b)
    bad = tmp_path / "bad.csv"
    bad.write_text("t,re,im\n0.0,1.0\n0.1,1.0,0.0\n0.2,1.0,0.0\n")
    with pytest.raises(ConfigError):
        SampledSignal.from_csv(bad)
    short = tmp_path / "short.csv"
    short.write_text("t,re,im\n0.0,1.0,0.0\n")
    with pytest.raises(ConfigError):
        SampledSignal.from_csv(short)


def test_pi_shift_isometry():
    t = default_grid()
    for n in (0, 3):
        vals = pi_shift_hermite(n, 0.8 - 0.6j, t)
        sig = SampledSignal(vals, t[0], t[1] - t[0])
        assert abs(sig.norm() - 1.0) < 1e-9
