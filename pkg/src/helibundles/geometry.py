"""Momentum-space geometry for massless waves.

Everything topological about a massless particle lives on the sphere of
momentum directions, so this module supplies the sphere-side toolkit:
points on the forward lightcone, a two-chart atlas of polarization frames
(no single smooth frame covers the sphere), axis-angle rotations, and
proper orthochronous Lorentz matrices. All kernels are small and dense:
real/complex 3-vectors, 3x3 rotations, 4x4 Lorentz matrices.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import ChartSingularity, InvalidLorentz, ZeroMomentum

ZERO_MOMENTUM_EPS = 1e-12
POLE_GUARD = 1e-6  # rad; a chart is unusable this close to its excluded pole
FRAME_TOL = 1e-12
LORENTZ_TOL = 1e-10

MINKOWSKI = np.diag([1.0, -1.0, -1.0, -1.0])
MINKOWSKI.setflags(write=False)

XHAT = np.array([1.0, 0.0, 0.0])
YHAT = np.array([0.0, 1.0, 0.0])
ZHAT = np.array([0.0, 0.0, 1.0])
for _v in (XHAT, YHAT, ZHAT):
    _v.setflags(write=False)


class Chart(Enum):
    """Frame charts on the momentum sphere.

    NORTH transports the reference frame (x, y, z) from the north pole and
    is singular at the south pole; SOUTH transports (x, -y, -z) from the
    south pole and is singular at the north pole.
    """

    NORTH = "north"
    SOUTH = "south"

    @property
    def excluded_pole(self) -> np.ndarray:
        return -ZHAT if self is Chart.NORTH else ZHAT


def _readonly(a: np.ndarray) -> np.ndarray:
    a = np.array(a, dtype=float, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class MomentumPoint:
    """A point on the forward lightcone: spatial 3-vector plus frequency |k|."""

    k: np.ndarray
    omega: float

    @property
    def khat(self) -> np.ndarray:
        return self.k / self.omega

    def four_vector(self) -> np.ndarray:
        return np.concatenate(([self.omega], self.k))


def make_momentum(k, eps: float = ZERO_MOMENTUM_EPS) -> MomentumPoint:
    """Build a lightcone point from a spatial 3-vector; omega = |k|.

    Raises ZeroMomentum when |k| < eps: massless particles have no rest
    frame, so the origin is excluded.
    """
    k = _readonly(k)
    if k.shape != (3,):
        raise ValueError(f"expected a 3-vector, got shape {k.shape}")
    omega = float(np.linalg.norm(k))
    if omega < eps:
        raise ZeroMomentum(f"|k| = {omega:.3e} is below the cutoff {eps:.3e}")
    return MomentumPoint(k=k, omega=omega)


@dataclass(frozen=True)
class Frame:
    """Right-handed orthonormal triple (e1, e2, khat) tagged by its chart."""

    e1: np.ndarray
    e2: np.ndarray
    khat: np.ndarray
    chart: Chart

    def validate(self, tol: float = FRAME_TOL) -> None:
        vecs = (self.e1, self.e2, self.khat)
        for v in vecs:
            if abs(np.linalg.norm(v) - 1.0) > tol:
                raise ValueError("frame vector is not unit norm")
        for i in range(3):
            for j in range(i + 1, 3):
                if abs(float(vecs[i] @ vecs[j])) > tol:
                    raise ValueError("frame vectors are not orthogonal")
        if np.max(np.abs(np.cross(self.e1, self.e2) - self.khat)) > tol:
            raise ValueError("frame is not right-handed")


def unit(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    n = np.linalg.norm(v)
    if n == 0.0:
        raise ValueError("cannot normalize the zero vector")
    return v / n


def rotation_from_axis_angle(axis, theta: float) -> np.ndarray:
    """Proper rotation by theta about a unit axis (Rodrigues form)."""
    n = np.asarray(axis, dtype=float)
    k = np.array([[0.0, -n[2], n[1]], [n[2], 0.0, -n[0]], [-n[1], n[0], 0.0]])
    return np.eye(3) + np.sin(theta) * k + (1.0 - np.cos(theta)) * (k @ k)


def rotation_to_direction(khat) -> np.ndarray:
    """Rotation taking the z axis to khat, well conditioned everywhere.

    Uses the minimal-geodesic rotation about z x khat; near the antipode
    it is composed with a half turn about x to stay finite.
    """
    khat = np.asarray(khat, dtype=float)
    c = khat[2]
    if c > -1.0 + 1e-9:
        return _align(ZHAT, khat)
    # near the antipode: align -z to khat (well conditioned), then flip z to -z
    return _align(-ZHAT, khat) @ rotation_from_axis_angle(XHAT, np.pi)


def _align(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Minimal rotation taking unit vector a to unit vector b (a != -b)."""
    v = np.cross(a, b)
    c = float(a @ b)
    vx = np.array([[0.0, -v[2], v[1]], [v[2], 0.0, -v[0]], [-v[1], v[0], 0.0]])
    return np.eye(3) + vx + (vx @ vx) / (1.0 + c)


def chart_for(khat) -> Chart:
    """Default chart assignment: NORTH on the closed upper hemisphere."""
    return Chart.NORTH if float(np.asarray(khat)[2]) >= 0.0 else Chart.SOUTH


def chart_valid(khat, chart: Chart, pole_guard: float = POLE_GUARD) -> bool:
    z = float(np.asarray(khat)[2])
    limit = -np.cos(pole_guard)
    return z > limit if chart is Chart.NORTH else -z > limit


def frame_arrays(khats: np.ndarray, chart: Chart,
                 pole_guard: float = POLE_GUARD) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized transport frames for an (n, 3) array of unit directions.

    Returns (e1, e2), each (n, 3). The frame at khat is the chart's pole
    reference frame carried along the minimal geodesic rotation, which is
    the standard clutching picture with an equatorial overlap.
    """
    khats = np.atleast_2d(np.asarray(khats, dtype=float))
    kx, ky, kz = khats[:, 0], khats[:, 1], khats[:, 2]
    limit = -np.cos(pole_guard)
    if chart is Chart.NORTH:
        if np.any(kz <= limit):
            raise ChartSingularity("direction within pole_guard of the south pole")
        d = 1.0 + kz
        e1 = np.stack([1.0 - kx * kx / d, -kx * ky / d, -kx], axis=1)
        e2 = np.stack([-kx * ky / d, 1.0 - ky * ky / d, -ky], axis=1)
    else:
        if np.any(-kz <= limit):
            raise ChartSingularity("direction within pole_guard of the north pole")
        d = 1.0 - kz
        e1 = np.stack([1.0 - kx * kx / d, -kx * ky / d, kx], axis=1)
        e2 = np.stack([kx * ky / d, -(1.0 - ky * ky / d), -ky], axis=1)
    return e1, e2


def standard_frame(khat, chart: Chart, pole_guard: float = POLE_GUARD) -> Frame:
    """Transport frame at a unit direction in the given chart.

    NORTH carries (x, y, z) from the north pole by the unique rotation
    about z x khat; SOUTH carries (x, -y, -z) from the south pole. Raises
    ChartSingularity within pole_guard of the excluded pole.
    """
    khat = unit(khat)
    e1, e2 = frame_arrays(khat[None, :], chart, pole_guard)
    return Frame(e1=_readonly(e1[0]), e2=_readonly(e2[0]),
                 khat=_readonly(khat), chart=chart)


@dataclass(frozen=True)
class LorentzTransform:
    """Real 4x4 matrix in SO+(3,1), row 0 = time. Validated on construction."""

    m: np.ndarray

    def __post_init__(self):
        m = np.array(self.m, dtype=float, copy=True)
        if m.shape != (4, 4):
            raise InvalidLorentz(f"expected 4x4 matrix, got shape {m.shape}")
        err = np.max(np.abs(m.T @ MINKOWSKI @ m - MINKOWSKI))
        if err > LORENTZ_TOL:
            raise InvalidLorentz(f"metric not preserved: max error {err:.3e}")
        if abs(np.linalg.det(m) - 1.0) > LORENTZ_TOL:
            raise InvalidLorentz("determinant differs from +1")
        if m[0, 0] < 1.0 - LORENTZ_TOL:
            raise InvalidLorentz("not orthochronous (m[0][0] < 1)")
        m.setflags(write=False)
        object.__setattr__(self, "m", m)

    def __matmul__(self, other: "LorentzTransform") -> "LorentzTransform":
        return LorentzTransform(self.m @ other.m)

    def inverse(self) -> "LorentzTransform":
        # eta m^T eta is the exact inverse for a metric-preserving matrix
        return LorentzTransform(MINKOWSKI @ self.m.T @ MINKOWSKI)


def identity_lorentz() -> LorentzTransform:
    return LorentzTransform(np.eye(4))


def rotation4(r: np.ndarray) -> LorentzTransform:
    """Embed a 3x3 rotation as a spatial Lorentz transform."""
    m = np.eye(4)
    m[1:, 1:] = np.asarray(r, dtype=float)
    return LorentzTransform(m)


def boost_from_rapidity(direction, eta: float) -> LorentzTransform:
    """Pure boost with rapidity eta along a unit direction.

    Acting on 4-vectors, a boost along +z with eta > 0 maps (1,0,0,1) to
    (e^eta, 0, 0, e^eta).
    """
    d = unit(direction)
    m = np.eye(4)
    ch, sh = np.cosh(eta), np.sinh(eta)
    m[0, 0] = ch
    m[0, 1:] = sh * d
    m[1:, 0] = sh * d
    m[1:, 1:] = np.eye(3) + (ch - 1.0) * np.outer(d, d)
    return LorentzTransform(m)


def boost_from_velocity(beta) -> LorentzTransform:
    """Pure boost with velocity 3-vector beta, |beta| < 1."""
    beta = np.asarray(beta, dtype=float)
    b2 = float(beta @ beta)
    if b2 >= 1.0:
        raise InvalidLorentz("superluminal velocity")
    if b2 == 0.0:
        return identity_lorentz()
    gamma = 1.0 / np.sqrt(1.0 - b2)
    m = np.eye(4)
    m[0, 0] = gamma
    m[0, 1:] = gamma * beta
    m[1:, 0] = gamma * beta
    m[1:, 1:] = np.eye(3) + (gamma - 1.0) * np.outer(beta, beta) / b2
    return LorentzTransform(m)


def transform_momentum(L: LorentzTransform, p: MomentumPoint) -> MomentumPoint:
    """Apply a Lorentz transform to a lightcone point; stays on the cone."""
    k4 = L.m @ p.four_vector()
    out = make_momentum(k4[1:])
    if abs(out.omega - k4[0]) > 1e-9 * max(1.0, out.omega):
        raise InvalidLorentz("image left the lightcone beyond tolerance")
    return out
