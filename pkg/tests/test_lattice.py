"""Tests for planar lattice handling: adjoints, enumeration, reduction."""

import numpy as np
import pytest

from gaborlab.errors import ConfigError, ResourceError
from gaborlab.lattice import (
    Lattice2D,
    adjoint,
    conjugate,
    enumerate_points,
    from_generators,
    packing_count,
    rect,
    reduce_nearest,
    reduce_to_fundamental,
    scale,
    shortest_vector,
    square,
)


def random_lattice(rng, smin=0.2, smax=1.5):
    """Random generator matrix with determinant in [smin, smax]."""
    while True:
        A = rng.uniform(-1.5, 1.5, size=(2, 2))
        d = abs(np.linalg.det(A))
        if 0.05 < d:
            target = rng.uniform(smin, smax)
            return from_generators(A * np.sqrt(target / d))


def lattice_coords(L, z):
    """Coordinates of z in the basis of L."""
    return np.linalg.solve(L.generator, [z.real, z.imag])


def test_constructors_and_area():
    L = rect(0.5, 0.8)
    assert abs(L.area - 0.4) < 1e-15
    assert abs(L.omega1 - 0.5) < 1e-15
    assert abs(L.omega2 - 0.8j) < 1e-15

    S = square(0.49)
    assert abs(S.area - 0.49) < 1e-14
    assert abs(S.omega1.real - 0.7) < 1e-14

    Q = scale(square(1.0), 0.9)
    assert abs(Q.area - 0.81) < 1e-14


def test_orientation_normalized():
    # Columns get swapped if needed so Im(omega2 / omega1) > 0.
    L = from_generators(np.array([[0.0, 1.0], [1.0, 0.0]]))
    assert (L.omega2 / L.omega1).imag > 0


def test_adjoint_area_reciprocal():
    rng = np.random.default_rng(7)
    for _ in range(20):
        L = random_lattice(rng)
        assert abs(adjoint(L).area - 1.0 / L.area) < 1e-12 / L.area


def test_adjoint_involution():
    rng = np.random.default_rng(11)
    for _ in range(10):
        L = random_lattice(rng)
        M = adjoint(adjoint(L))
        # Same point set: basis vectors of each are integer combinations
        # of the other's.
        for z in (M.omega1, M.omega2):
            c = lattice_coords(L, z)
            assert np.max(np.abs(c - np.round(c))) < 1e-10
        for z in (L.omega1, L.omega2):
            c = lattice_coords(M, z)
            assert np.max(np.abs(c - np.round(c))) < 1e-10


def test_adjoint_commutation_characterization():
    # mu in the adjoint iff exp(2 pi i Im(mu conj(lam))) = 1 for all lam.
    rng = np.random.default_rng(3)
    for _ in range(5):
        L = random_lattice(rng)
        La = adjoint(L)
        for mu in enumerate_points(La, 2.0):
            for lam in enumerate_points(L, 2.0):
                phase = (mu * np.conj(lam)).imag
                assert abs(phase - round(phase)) < 1e-10


def test_enumerate_points_basic():
    L = square(1.0)
    pts = enumerate_points(L, 2.0)
    assert np.min(np.abs(pts)) == 0.0
    assert np.max(np.abs(pts)) <= 2.0 + 1e-12
    # Symmetric set.
    for p in pts:
        assert np.min(np.abs(pts + p)) < 1e-12
    # Z^2 inside radius 2: 13 points.
    assert pts.size == 13


def test_enumerate_count_asymptotics():
    rng = np.random.default_rng(5)
    for _ in range(5):
        L = random_lattice(rng, smin=0.3, smax=1.0)
        R = 12.0
        pts = enumerate_points(L, R)
        expect = np.pi * R * R / L.area
        assert abs(pts.size - expect) < 0.2 * expect


def test_enumerate_rejects():
    with pytest.raises(ConfigError):
        enumerate_points(square(1.0), -1.0)
    with pytest.raises(ResourceError):
        enumerate_points(square(1e-4), 50.0)


def test_packing_count_oracle():
    assert packing_count(square(1.0)) == 1
    assert packing_count(rect(0.5, 0.5)) == 4
    assert packing_count(rect(0.5, 1.0)) == 2
    # Shear leaves the per-cell count of the underlying point set bounded
    # by area reciprocal rounded up; check against a direct count.
    L = from_generators(np.array([[0.7, 0.3], [0.0, 0.7]]))
    pts = enumerate_points(L, 40.0)
    kx = np.floor(pts.real)
    ky = np.floor(pts.imag)
    inner = (np.abs(kx) <= 3) & (np.abs(ky) <= 3)
    keys = [(a, b) for a, b in zip(kx[inner], ky[inner])]
    direct = max(keys.count(k) for k in set(keys))
    assert packing_count(L) >= direct


def test_reduce_to_fundamental():
    rng = np.random.default_rng(13)
    for _ in range(50):
        L = random_lattice(rng)
        z = complex(rng.uniform(-8, 8), rng.uniform(-8, 8))
        z0, m1, m2 = reduce_to_fundamental(L, z)
        back = z0 + m1 * L.omega1 + m2 * L.omega2
        assert abs(back - z) < 1e-10
        c = lattice_coords(L, z0)
        assert -1e-9 <= c[0] < 1.0 + 1e-9
        assert -1e-9 <= c[1] < 1.0 + 1e-9
    z0, m1, m2 = reduce_to_fundamental(square(1.0), 1.0 + 0j)
    assert (m1, m2) == (1, 0)
    assert abs(z0) < 1e-14


def test_reduce_nearest():
    rng = np.random.default_rng(17)
    L = random_lattice(rng)
    z = rng.uniform(-5, 5, 40) + 1j * rng.uniform(-5, 5, 40)
    z0, m1, m2 = reduce_nearest(L, z)
    back = z0 + m1 * L.omega1 + m2 * L.omega2
    assert np.max(np.abs(back - z)) < 1e-10
    c = np.linalg.solve(L.generator, np.stack([z0.real, z0.imag]))
    assert np.max(np.abs(c)) <= 0.5 + 1e-9


def test_shortest_vector_brute_force():
    rng = np.random.default_rng(19)
    for _ in range(20):
        L = random_lattice(rng)
        sv = shortest_vector(L)
        pts = enumerate_points(L, 4.0 * sv)
        nz = pts[np.abs(pts) > 1e-12]
        assert abs(sv - np.min(np.abs(nz))) < 1e-10


def test_conjugate():
    L = from_generators(np.array([[1.0, 0.2], [0.1, 0.8]]))
    Lc = conjugate(L)
    assert abs(Lc.area - L.area) < 1e-14
    pts = set(np.round(enumerate_points(L, 2.5), 9))
    ptsc = set(np.round(enumerate_points(Lc, 2.5), 9))
    assert {np.conj(p) for p in pts} == ptsc


def test_json_round_trip():
    L = from_generators(np.array([[0.9, 0.25], [0.0, 0.7]]))
    M = Lattice2D.from_json_dict(L.to_json_dict())
    assert np.max(np.abs(M.generator - L.generator)) < 1e-15
    with pytest.raises(ConfigError):
        Lattice2D.from_json_dict({"B": [[1, 0], [0, 1]]})


def test_constructor_rejects():
    with pytest.raises(ConfigError):
        from_generators(np.array([[1.0, 2.0], [2.0, 4.0]]))
    with pytest.raises(ConfigError):
        from_generators(np.array([[np.inf, 0.0], [0.0, 1.0]]))
    with pytest.raises(ConfigError):
        rect(-1.0, 1.0)
    with pytest.raises(ConfigError):
        square(0.0)
    with pytest.raises(ConfigError):
        scale(square(1.0), 0.0)
