"""Planar lattice algebra.

A lattice is A*Z^2 for a nonsingular real 2x2 generator A. Columns of A
are read as complex periods omega1, omega2 under the R^2 = C
identification; construction normalizes the orientation so that
Im(omega2/omega1) > 0, which every downstream consumer (notably the
Weierstrass machinery) relies on. The density s(Lambda) is the area
|det A| of the fundamental parallelogram.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError, ResourceError

_ENUM_CANDIDATE_CAP = 4_000_000


@dataclass(frozen=True, eq=False)
class Lattice2D:
    """Normalized planar lattice.

    Fields
    ------
    generator : (2, 2) float ndarray, columns are the basis vectors.
    omega1, omega2 : complex periods (the columns), Im(omega2/omega1) > 0.
    area : s(Lambda) = |det generator|.

    Instances are immutable by convention; the generator array must not be
    written to. Safe to share across threads.
    """

    generator: np.ndarray
    omega1: complex
    omega2: complex
    area: float

    def __repr__(self):
        return (
            f"Lattice2D(omega1={self.omega1:.6g}, omega2={self.omega2:.6g}, "
            f"area={self.area:.6g})"
        )

    def to_json_dict(self) -> dict:
        return {"A": [[float(v) for v in row] for row in self.generator]}

    @staticmethod
    def from_json_dict(d: dict) -> "Lattice2D":
        try:
            A = np.asarray(d["A"], dtype=float)
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"lattice JSON must look like {{'A': [[..]]}}: {exc}")
        return from_generators(A)


def from_generators(A) -> Lattice2D:
    """Build a normalized lattice from a 2x2 generator matrix.

    If det A < 0 the second column is negated, which flips the sign of
    Im(conj(omega1)*omega2) = det A without changing the point set.
    """
    A = np.array(A, dtype=float)
    if A.shape != (2, 2) or not np.all(np.isfinite(A)):
        raise ConfigError("generator must be a finite 2x2 real matrix")
    det = A[0, 0] * A[1, 1] - A[0, 1] * A[1, 0]
    scale = max(np.abs(A).max(), 1.0)
    if abs(det) <= 1e-14 * scale * scale:
        raise ConfigError("generator matrix is singular")
    if det < 0:
        A = A.copy()
        A[:, 1] = -A[:, 1]
    A.setflags(write=False)
    w1 = complex(A[0, 0], A[1, 0])
    w2 = complex(A[0, 1], A[1, 1])
    return Lattice2D(generator=A, omega1=w1, omega2=w2, area=abs(det))


def rect(a: float, b: float) -> Lattice2D:
    """aZ x bZ."""
    if a <= 0 or b <= 0:
        raise ConfigError("rect lattice needs positive side lengths")
    return from_generators([[a, 0.0], [0.0, b]])


def square(s: float) -> Lattice2D:
    """Square lattice of area s, i.e. sqrt(s) * Z^2."""
    if s <= 0:
        raise ConfigError("square lattice needs positive area")
    r = np.sqrt(s)
    return from_generators([[r, 0.0], [0.0, r]])


def scale(L: Lattice2D, q: float) -> Lattice2D:
    """q * Lambda."""
    if q == 0:
        raise ConfigError("scale factor must be nonzero")
    return from_generators(q * L.generator)


def adjoint(L: Lattice2D) -> Lattice2D:
    """Adjoint lattice J (A^T)^{-1} Z^2 with J = [[0, 1], [-1, 0]].

    Its time-frequency shifts commute with those of Lambda, and
    s(adjoint) = 1/s(Lambda).
    """
    J = np.array([[0.0, 1.0], [-1.0, 0.0]])
    return from_generators(J @ np.linalg.inv(L.generator.T))


def conjugate(L: Lattice2D) -> Lattice2D:
    """Complex conjugate lattice (omega -> conj(omega))."""
    A = L.generator.copy()
    A[1, :] = -A[1, :]
    return from_generators(A)


def enumerate_points(L: Lattice2D, R: float) -> np.ndarray:
    """All lattice points with |point| <= R, in lexicographic (m, n) order.

    Scans the integer box of half-width ceil(R * ||A^{-1}||_op) + 1 and
    filters by modulus; exact and deterministic.
    """
    if R < 0:
        raise ConfigError("enumeration radius must be nonnegative")
    Ainv = np.linalg.inv(L.generator)
    opnorm = np.linalg.norm(Ainv, ord=2)
    M = int(np.ceil(R * opnorm)) + 1
    if (2 * M + 1) ** 2 > _ENUM_CANDIDATE_CAP:
        raise ResourceError(
            f"enumeration box {(2 * M + 1)}^2 exceeds the candidate cap"
        )
    m = np.arange(-M, M + 1)
    mm, nn = np.meshgrid(m, m, indexing="ij")
    pts = mm.ravel() * L.omega1 + nn.ravel() * L.omega2
    keep = np.abs(pts) <= R
    return pts[keep]


def enumerate_with_coords(L: Lattice2D, R: float):
    """Like enumerate_points but also returns the integer coordinates."""
    if R < 0:
        raise ConfigError("enumeration radius must be nonnegative")
    Ainv = np.linalg.inv(L.generator)
    M = int(np.ceil(R * np.linalg.norm(Ainv, ord=2))) + 1
    if (2 * M + 1) ** 2 > _ENUM_CANDIDATE_CAP:
        raise ResourceError(
            f"enumeration box {(2 * M + 1)}^2 exceeds the candidate cap"
        )
    m = np.arange(-M, M + 1)
    mm, nn = np.meshgrid(m, m, indexing="ij")
    mm, nn = mm.ravel(), nn.ravel()
    pts = mm * L.omega1 + nn * L.omega2
    keep = np.abs(pts) <= R
    return pts[keep], mm[keep], nn[keep]


def packing_count(L: Lattice2D, window: int = 10) -> int:
    """Max number of lattice points in a unit square k + [0,1)^2.

    Scans k over [-window, window]^2; the per-square count of a lattice is
    eventually periodic, so a finite window suffices. The absolute constant
    multiplying this count in the Bessel bound is reported as 1 elsewhere
    ("up to kappa" convention).
    """
    reach = float(window) + 1.0
    Ainv = np.linalg.inv(L.generator)
    M = int(np.ceil(np.sqrt(2.0) * reach * np.linalg.norm(Ainv, ord=2))) + 1
    m = np.arange(-M, M + 1)
    mm, nn = np.meshgrid(m, m, indexing="ij")
    pts = mm.ravel() * L.omega1 + nn.ravel() * L.omega2
    kx = np.floor(pts.real).astype(np.int64)
    ky = np.floor(pts.imag).astype(np.int64)
    inwin = (np.abs(kx) <= window) & (np.abs(ky) <= window)
    if not np.any(inwin):
        return 1
    kx, ky = kx[inwin], ky[inwin]
    keys = (kx + window) * (2 * window + 1) + (ky + window)
    counts = np.bincount(keys)
    return int(counts.max())


def reduce_to_fundamental(L: Lattice2D, z: complex):
    """Split z = z0 + m1*omega1 + m2*omega2 with z0 in the fundamental cell.

    The cell is A*[0,1)^2 (closed-open), so z = omega1 maps to (0, 1, 0).
    """
    c = np.linalg.solve(L.generator, [z.real, z.imag])
    m1 = int(np.floor(c[0]))
    m2 = int(np.floor(c[1]))
    # Guard against floor(0.99999999999) style roundoff at cell edges.
    for _ in range(2):
        f1, f2 = c[0] - m1, c[1] - m2
        if f1 >= 1.0 - 1e-14 and abs(round(c[0]) - c[0]) < 1e-12:
            m1 = int(round(c[0]))
        if f2 >= 1.0 - 1e-14 and abs(round(c[1]) - c[1]) < 1e-12:
            m2 = int(round(c[1]))
    z0 = z - (m1 * L.omega1 + m2 * L.omega2)
    return z0, m1, m2


def reduce_nearest(L: Lattice2D, z):
    """Reduce to the centered cell: z = z0 + m1*omega1 + m2*omega2, |coeffs| <= 1/2.

    Vectorized over z. Used by evaluation paths that want |z0| small.
    """
    z = np.asarray(z, dtype=complex)
    shape = z.shape
    zf = z.ravel()
    c = np.linalg.solve(
        L.generator, np.stack([zf.real, zf.imag], axis=0)
    )
    m = np.round(c)
    m1 = m[0].astype(np.int64)
    m2 = m[1].astype(np.int64)
    z0 = zf - (m1 * L.omega1 + m2 * L.omega2)
    return z0.reshape(shape), m1.reshape(shape), m2.reshape(shape)


def shortest_vector(L: Lattice2D) -> float:
    """Length of the shortest nonzero lattice vector (Gauss reduction)."""
    b1, b2 = L.omega1, L.omega2
    if abs(b1) > abs(b2):
        b1, b2 = b2, b1
    for _ in range(64):
        # b1 is the shorter vector; subtract its nearest multiple from b2.
        mu = (b2.real * b1.real + b2.imag * b1.imag) / abs(b1) ** 2
        b2 = b2 - round(mu) * b1
        if abs(b2) >= abs(b1):
            break
        b1, b2 = b2, b1
    return float(abs(b1))
