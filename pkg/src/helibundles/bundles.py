"""Helicity line bundles over the momentum sphere.

The photon bundles carry fibers spanned by circular polarizations
v = (e1 +/- i e2)/sqrt(2); every integer helicity h is reached by tensor
powers of the photon fiber (conjugate powers for h < 0). Two
representations coexist: explicit rank-|h| tensors for |h| <= 3, and a
(chart, coefficient) form whose overlaps are powers of the photon
overlap, cheap at any h. Inner products conjugate the first argument.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DegenerateOverlap, FiberMismatch, ModeMismatch
from .geometry import (Chart, MomentumPoint, chart_for, frame_arrays,
                       make_momentum, unit)

EXPLICIT_MAX_RANK = 3
DEGENERATE_OVERLAP_TOL = 1e-8
TRANSVERSALITY_TOL = 1e-10


class Mode(Enum):
    EXPLICIT_TENSOR = "explicit"
    OVERLAP_POWER = "power"


@dataclass(frozen=True)
class HelicityBundle:
    """Helicity-h line bundle with a chosen fiber representation mode."""

    h: int
    mode: Mode = Mode.OVERLAP_POWER

    def __post_init__(self):
        if self.h != int(self.h):
            raise ValueError("helicity must be an integer")
        if self.mode is Mode.EXPLICIT_TENSOR and abs(self.h) > EXPLICIT_MAX_RANK:
            raise ModeMismatch(
                f"explicit tensors are limited to |h| <= {EXPLICIT_MAX_RANK}")

    @property
    def rank(self) -> int:
        return abs(self.h)


def helicity_bundle(h: int, mode: str | Mode = Mode.OVERLAP_POWER) -> HelicityBundle:
    if isinstance(mode, str):
        mode = Mode(mode)
    return HelicityBundle(h=int(h), mode=mode)


@dataclass(frozen=True)
class PolarizationVector:
    """Complex transverse 3-vector attached to a lightcone point."""

    v: np.ndarray
    k: MomentumPoint

    def __post_init__(self):
        v = np.asarray(self.v, dtype=complex)
        resid = abs(np.sum(self.k.k * v)) / max(self.k.omega, 1.0)
        if resid > TRANSVERSALITY_TOL:
            raise ValueError(f"polarization not transverse: |k.v| = {resid:.3e}")
        v.setflags(write=False)
        object.__setattr__(self, "v", v)


@dataclass(frozen=True)
class FiberElement:
    """Element of a helicity-h fiber.

    Either an explicit complex tensor of rank |h| (`tensor`) or a
    coefficient relative to the chart's standard section (`chart`, `coeff`).
    """

    bundle: HelicityBundle
    at: MomentumPoint
    tensor: np.ndarray | None = None
    chart: Chart | None = None
    coeff: complex | None = None

    def __post_init__(self):
        if self.bundle.mode is Mode.EXPLICIT_TENSOR:
            if self.tensor is None:
                raise ModeMismatch("explicit element needs a tensor value")
            t = np.asarray(self.tensor, dtype=complex)
            if t.shape != (3,) * self.bundle.rank:
                raise ValueError(
                    f"rank-{self.bundle.rank} tensor expected, got shape {t.shape}")
            t.setflags(write=False)
            object.__setattr__(self, "tensor", t)
        else:
            if self.chart is None or self.coeff is None:
                raise ModeMismatch("overlap-power element needs (chart, coeff)")
            object.__setattr__(self, "coeff", complex(self.coeff))

    def norm(self) -> float:
        if self.tensor is not None:
            return float(np.linalg.norm(self.tensor.ravel()))
        return abs(self.coeff)


@dataclass(frozen=True)
class GravitonTensor:
    """Symmetric transverse traceless complex 3x3 tensor at a lightcone point."""

    t: np.ndarray
    k: MomentumPoint
    sign: int

    def __post_init__(self):
        t = np.asarray(self.t, dtype=complex)
        scale = max(float(np.linalg.norm(t)), 1.0)
        if np.max(np.abs(t - t.T)) > 1e-10 * scale:
            raise ValueError("graviton tensor is not symmetric")
        if np.max(np.abs(t @ self.k.khat)) > 1e-10 * scale:
            raise ValueError("graviton tensor is not transverse")
        if abs(np.trace(t)) > 1e-10 * scale:
            raise ValueError("graviton tensor is not traceless")
        t.setflags(write=False)
        object.__setattr__(self, "t", t)


def photon_section_rows(khats: np.ndarray, south_mask=None) -> np.ndarray:
    """Right-circular sections v+ = (e1 + i e2)/sqrt(2) for (n, 3) directions.

    Rows flagged in south_mask use the SOUTH chart frame; the default
    policy is NORTH on the closed upper hemisphere.
    """
    khats = np.atleast_2d(np.asarray(khats, dtype=float))
    if south_mask is None:
        south_mask = khats[:, 2] < 0.0
    south_mask = np.asarray(south_mask, dtype=bool)
    out = np.empty((khats.shape[0], 3), dtype=complex)
    north = ~south_mask
    if np.any(north):
        e1, e2 = frame_arrays(khats[north], Chart.NORTH)
        out[north] = (e1 + 1j * e2) / np.sqrt(2.0)
    if np.any(south_mask):
        e1, e2 = frame_arrays(khats[south_mask], Chart.SOUTH)
        out[south_mask] = (e1 + 1j * e2) / np.sqrt(2.0)
    return out


def tensor_section_rows(h: int, khats: np.ndarray, south_mask=None) -> np.ndarray:
    """Flattened rank-|h| tensor-power sections, shape (n, 3**|h|).

    h > 0 uses powers of v+, h < 0 powers of v- = conj(v+), h = 0 the
    constant scalar section 1.
    """
    if abs(h) > EXPLICIT_MAX_RANK:
        raise ModeMismatch(f"explicit tensors are limited to |h| <= {EXPLICIT_MAX_RANK}")
    khats = np.atleast_2d(np.asarray(khats, dtype=float))
    n = khats.shape[0]
    if h == 0:
        return np.ones((n, 1), dtype=complex)
    v = photon_section_rows(khats, south_mask)
    if h < 0:
        v = np.conj(v)
    rows = v
    for _ in range(abs(h) - 1):
        rows = (rows[:, :, None] * v[:, None, :]).reshape(n, -1)
    return rows


def standard_polarization(khat, chart: Chart | None = None,
                          sign: int = +1) -> PolarizationVector:
    """Unit circular polarization (e1 + sign * i e2)/sqrt(2) at a direction."""
    if sign not in (+1, -1):
        raise ValueError("sign must be +1 or -1")
    khat = unit(khat)
    if chart is None:
        chart = chart_for(khat)
    e1, e2 = frame_arrays(khat[None, :], chart)
    v = (e1[0] + 1j * sign * e2[0]) / np.sqrt(2.0)
    return PolarizationVector(v=v, k=make_momentum(khat))


def section(bundle: HelicityBundle, khat, chart: Chart | None = None) -> FiberElement:
    """Standard unit-norm section of the bundle at a unit direction.

    Explicit mode returns the tensor power of the circular polarization;
    overlap-power mode returns coefficient 1 relative to the chart section.
    """
    khat = unit(khat)
    if chart is None:
        chart = chart_for(khat)
    at = make_momentum(khat)
    if bundle.mode is Mode.OVERLAP_POWER:
        if not _chart_ok(khat, chart):
            # frame_arrays raises for explicit mode; mirror it here
            frame_arrays(khat[None, :], chart)
        return FiberElement(bundle=bundle, at=at, chart=chart, coeff=1.0 + 0.0j)
    south = np.array([chart is Chart.SOUTH])
    row = tensor_section_rows(bundle.h, khat[None, :], south)[0]
    return FiberElement(bundle=bundle, at=at,
                        tensor=row.reshape((3,) * bundle.rank))


def _chart_ok(khat, chart: Chart) -> bool:
    from .geometry import chart_valid
    return chart_valid(khat, chart)


def _same_fiber(a: FiberElement, b: FiberElement) -> None:
    if a.bundle.h != b.bundle.h:
        raise FiberMismatch(f"helicities differ: {a.bundle.h} vs {b.bundle.h}")
    if np.max(np.abs(a.at.k - b.at.k)) > 1e-9 * max(a.at.omega, 1.0):
        raise FiberMismatch("elements live over different momenta")


def _as_tensor_row(x: FiberElement) -> np.ndarray:
    if x.tensor is not None:
        return x.tensor.ravel()
    if abs(x.bundle.h) > EXPLICIT_MAX_RANK:
        raise ModeMismatch("cannot expand overlap-power element of rank > 3")
    south = np.array([x.chart is Chart.SOUTH])
    row = tensor_section_rows(x.bundle.h, x.at.khat[None, :], south)[0]
    return x.coeff * row


def fiber_inner(a: FiberElement, b: FiberElement) -> complex:
    """Hermitian product on a fiber, conjugating the first argument.

    Tensor products multiply factorwise, so overlap-power elements reduce
    to coefficient products times a chart transition factor.
    """
    _same_fiber(a, b)
    if a.tensor is None and b.tensor is None:
        trans = 1.0 + 0.0j
        if a.chart is not b.chart:
            trans = _transition_factor(a.bundle.h, a.at.khat, a.chart, b.chart)
        return complex(np.conj(a.coeff) * b.coeff * trans)
    return complex(np.vdot(_as_tensor_row(a), _as_tensor_row(b)))


def _photon_pair(p, q, chart_p, chart_q) -> tuple[np.ndarray, np.ndarray]:
    p, q = unit(p), unit(q)
    sp = photon_section_rows(p[None, :], np.array([chart_p is Chart.SOUTH]))[0]
    sq = photon_section_rows(q[None, :], np.array([chart_q is Chart.SOUTH]))[0]
    return sp, sq


def photon_overlap(p, q, chart_p: Chart | None = None,
                   chart_q: Chart | None = None) -> complex:
    """U1(p, q) = <v+(p), v+(q)> with hemisphere-default charts."""
    chart_p = chart_p or chart_for(p)
    chart_q = chart_q or chart_for(q)
    sp, sq = _photon_pair(p, q, chart_p, chart_q)
    return complex(np.vdot(sp, sq))


def _transition_factor(h: int, khat, chart_a: Chart, chart_b: Chart) -> complex:
    u1 = photon_overlap(khat, khat, chart_a, chart_b)
    return _power(u1, h)


def _power(u1: complex, h: int) -> complex:
    if h >= 0:
        return u1 ** h
    return np.conj(u1) ** (-h)


def overlap(bundle: HelicityBundle, p, q, chart_p: Chart | None = None,
            chart_q: Chart | None = None,
            degenerate_tol: float = DEGENERATE_OVERLAP_TOL) -> complex:
    """Link variable U(p, q) = <s(p), s(q)> between standard sections.

    Overlap-power bundles use U1(p,q)**h for h >= 0 and conj(U1)**|h| for
    h < 0; explicit bundles contract the tensor-power sections directly.
    Raises DegenerateOverlap when |U| falls below degenerate_tol (the two
    points are too far apart to carry a reliable phase).
    """
    chart_p = chart_p or chart_for(p)
    chart_q = chart_q or chart_for(q)
    if bundle.mode is Mode.OVERLAP_POWER:
        u = _power(photon_overlap(p, q, chart_p, chart_q), bundle.h)
    else:
        p_, q_ = unit(p), unit(q)
        sp = tensor_section_rows(bundle.h, p_[None, :],
                                 np.array([chart_p is Chart.SOUTH]))[0]
        sq = tensor_section_rows(bundle.h, q_[None, :],
                                 np.array([chart_q is Chart.SOUTH]))[0]
        u = complex(np.vdot(sp, sq))
    if abs(u) < degenerate_tol:
        raise DegenerateOverlap(
            f"|U| = {abs(u):.3e} below {degenerate_tol:.1e}; refine the sampling")
    return complex(u)


def graviton_fiber(khat, chart: Chart | None = None, sign: int = +1) -> GravitonTensor:
    """Graviton polarization tensor t_ij = v_i v_j from the circular photon.

    Transversality and tracelessness are inherited from v . v = 0 and
    k . v = 0; no gauge fixing is applied anywhere.
    """
    pol = standard_polarization(khat, chart, sign)
    t = np.outer(pol.v, pol.v)
    return GravitonTensor(t=t, k=pol.k, sign=sign)
