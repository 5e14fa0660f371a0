"""Semicomplete driving vector fields G(w, t) = w [iC(t) + ...].

Two branches:

* non-degenerate systems:  G(w,t) = w [ iC(t) + (r'(t)/r(t)) p(w,t) ],
  with p(., t) in the two-measure class over A_{r(t)};
* degenerate systems:      G(w,t) = w [ iC(t) - alpha(t) q(w,t) ],
  with q(., t) a normalized Herglotz function on the disk.

Fields of this shape integrate to evolution families that stay strictly
inside the evolving annuli; the growth bound of ``whvf_bound`` is the
quantitative budget the ODE engine and the verifier rely on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from ._core import (
    STATUS_OK,
    caratheodory_core,
    caratheodory_many,
    p_eval_core,
    p_eval_many,
)
from .domains import MIXED, DomainSystem, RadiusPath, contains, validate
from .drivers import HerglotzPath, MeasurePath, ScalarDriver
from .errors import ConvergenceError, DomainError, NormalizationError
from .kernels import DEFAULT_KERNEL_CONFIG, KernelEvalConfig
from .measures import MASS_TOL, CircleMeasure


def _negated(driver: ScalarDriver) -> ScalarDriver:
    desc = driver.descriptor
    if desc is not None:
        kind = desc.get("kind")
        if kind == "constant":
            return ScalarDriver.constant(-desc["value"])
        if kind == "cosine":
            return ScalarDriver.cosine(-desc["amplitude"], desc["omega"], desc["phase"])
        if kind == "piecewise_constant":
            return ScalarDriver.piecewise_constant(
                desc["times"], [-v for v in desc["values"]]
            )
    return ScalarDriver(
        fn=lambda t: -driver.value(t),
        breakpoints=driver.breakpoints,
        left_fn=lambda t: -driver.value_left(t),
    )


@dataclass(frozen=True)
class FieldSpec:
    """Driving data for one vector field over a validated domain system."""

    ds: DomainSystem
    C: ScalarDriver = field(default_factory=lambda: ScalarDriver.constant(0.0))
    measures: Optional[MeasurePath] = None
    alpha: Optional[ScalarDriver] = None
    herglotz: Optional[HerglotzPath] = None
    kernel_cfg: KernelEvalConfig = DEFAULT_KERNEL_CONFIG

    def __post_init__(self):
        if self.ds.classification == MIXED:
            raise DomainError(
                "mixed domain systems have no driving branch here; "
                "split the run at the degeneracy time"
            )
        if self.ds.degenerate:
            if self.alpha is None or self.herglotz is None:
                raise DomainError("degenerate fields need alpha and a Herglotz path")
            if self.measures is not None:
                raise DomainError("degenerate fields take no two-measure path")
        else:
            if self.measures is None:
                raise DomainError("non-degenerate fields need a measure path")
            if self.alpha is not None or self.herglotz is not None:
                raise DomainError("alpha/Herglotz data is for the degenerate branch")

    @property
    def degenerate(self) -> bool:
        return self.ds.degenerate

    def breakpoints(self):
        pts = set(self.ds.path.breakpoints) | set(self.C.breakpoints)
        if self.measures is not None:
            pts |= set(self.measures.breakpoints)
        if self.alpha is not None:
            pts |= set(self.alpha.breakpoints)
        if self.herglotz is not None:
            pts |= set(self.herglotz.breakpoints)
        return tuple(sorted(pts))


def _checked_atom_arrays(measures: MeasurePath, t: float, left: bool):
    # Static and fixed-point paths are normalized by construction; the
    # callable kind re-validates inside measures() on every call.
    return measures.atom_arrays(t, left)


def field_eval(
    spec: FieldSpec,
    w: complex,
    t: float,
    strict: bool = True,
    left: bool = False,
) -> complex:
    """Evaluate G(w, t).

    ``strict`` enforces (w, t) inside the evolution domain; the integrator
    relaxes it for intermediate stage points, which may graze the rim.
    ``left`` selects left limits of the drivers at jump times.
    """
    w = complex(w)
    if strict and not contains(spec.ds, w, t):
        raise DomainError(f"(w={w}, t={t}) outside the evolution domain")
    cfg = spec.kernel_cfg
    cval = spec.C.value_left(t) if left else spec.C.value(t)
    if spec.degenerate:
        aval = spec.alpha.value_left(t) if left else spec.alpha.value(t)
        if aval < 0.0:
            raise DomainError(f"alpha({t}) = {aval} must be >= 0")
        ang, mass, uni = spec.herglotz.atom_arrays(t, left)
        q = caratheodory_core(ang, mass, uni, w)
        return w * (1j * cval - aval * q)
    rv = spec.ds.radius(t)
    drv = spec.ds.radius_derivative(t)
    if drv == 0.0:
        return w * (1j * cval)
    a1, m1, u1, a2, m2, u2 = _checked_atom_arrays(spec.measures, t, left)
    p, status = p_eval_core(rv, a1, m1, u1, a2, m2, u2, w, cfg.rel_tol, cfg.max_terms)
    if status != STATUS_OK:
        raise ConvergenceError(f"kernel series failed in field evaluation at t = {t}")
    return w * (1j * cval + (drv / rv) * p)


def field_eval_many(
    spec: FieldSpec, ws: np.ndarray, t: float, left: bool = False
) -> np.ndarray:
    """Vectorized G(., t) over an array of points (no strict domain check)."""
    ws = np.ascontiguousarray(ws, dtype=np.complex128)
    cfg = spec.kernel_cfg
    cval = spec.C.value_left(t) if left else spec.C.value(t)
    if spec.degenerate:
        aval = spec.alpha.value_left(t) if left else spec.alpha.value(t)
        ang, mass, uni = spec.herglotz.atom_arrays(t, left)
        q = caratheodory_many(ang, mass, uni, ws.ravel()).reshape(ws.shape)
        return ws * (1j * cval - aval * q)
    rv = spec.ds.radius(t)
    drv = spec.ds.radius_derivative(t)
    if drv == 0.0:
        return ws * (1j * cval)
    a1, m1, u1, a2, m2, u2 = _checked_atom_arrays(spec.measures, t, left)
    p, status = p_eval_many(
        rv, a1, m1, u1, a2, m2, u2, ws.ravel(), cfg.rel_tol, cfg.max_terms
    )
    if status != STATUS_OK:
        raise ConvergenceError(f"kernel series failed in field evaluation at t = {t}")
    return ws * (1j * cval + (drv / rv) * p.reshape(ws.shape))


def field_conjugate(spec: FieldSpec) -> FieldSpec:
    """Spec of the reflected family r(t)/phi_{s,t}(r(s)/z).

    C flips sign and the measure slots swap with conjugated angles, so the
    new driving function is 1 - p(r(t)/w) pointwise.
    """
    if spec.degenerate:
        raise DomainError("conjugation is defined for non-degenerate fields only")
    return FieldSpec(
        ds=spec.ds,
        C=_negated(spec.C),
        measures=spec.measures.reflected_swapped(),
        kernel_cfg=spec.kernel_cfg,
    )


def _majorant_fn(spec: FieldSpec, band, t_start: float, t_end: float):
    a, b = float(band[0]), float(band[1])
    if not (0.0 <= a < b < 1.0):
        raise DomainError(f"band [{a}, {b}] must satisfy 0 <= a < b < 1")
    r_start = spec.ds.radius(t_start)
    if a <= r_start:
        raise DomainError(f"band floor {a} must exceed r({t_start}) = {r_start}")
    delta = min(a - r_start, 1.0 - b)
    if spec.degenerate:
        cap = (1.0 + b) / (1.0 - b)
        return lambda t: abs(spec.C.value(t)) + spec.alpha.value(t) * cap
    r_end = spec.ds.radius(t_end)
    if r_end <= 0.0:
        raise DomainError("band bound needs r(T) > 0")
    box_factor = (1.0 + (4.0 / delta) / (1.0 - r_start)) / r_end
    return lambda t: abs(spec.C.value(t)) + abs(spec.ds.radius_derivative(t)) * box_factor


def _time_grid(spec: FieldSpec, t_start: float, t_end: float, n_grid: int):
    ts = list(np.linspace(t_start, t_end, n_grid))
    ts.extend(bp for bp in spec.breakpoints() if t_start < bp < t_end)
    return sorted(ts)


def whvf_bound(spec: FieldSpec, band, t_end: float, n_grid: int = 512) -> float:
    """Sup over the box band x [0, t_end] of the field's growth majorant.

    Non-degenerate majorant: |C(t)| + (|r'(t)|/r(T)) (1 + (4/delta)/(1-r(0)))
    with delta the band margin; degenerate analogue replaces the measure
    bound with the Herglotz cap (1+b)/(1-b).
    """
    k = _majorant_fn(spec, band, 0.0, t_end)
    return max(k(t) for t in _time_grid(spec, 0.0, t_end, n_grid))


def whvf_majorant_integral(
    spec: FieldSpec, band, t_start: float, t_end: float, n_grid: int = 512
) -> float:
    """Trapezoid integral of the growth majorant over [t_start, t_end].

    The band must sit strictly inside every annulus of the interval, i.e.
    its floor must exceed r(t_start).
    """
    if t_end < t_start:
        raise DomainError("t_end must be >= t_start")
    if t_end == t_start:
        return 0.0
    k = _majorant_fn(spec, band, t_start, t_end)
    ts = _time_grid(spec, t_start, t_end, n_grid)
    vals = [k(t) for t in ts]
    return float(np.trapezoid(vals, ts))


# -- convenience builders ----------------------------------------------------

def rotation_field(
    r0: float, c_driver: ScalarDriver, horizon: float
) -> FieldSpec:
    """Static annulus driven by C(t) alone: G(w, t) = i C(t) w."""
    ds = validate(RadiusPath.constant(r0), horizon)
    half = CircleMeasure.uniform(0.5)
    return FieldSpec(ds=ds, C=c_driver, measures=MeasurePath.static(half, half))


def fixed_point_field(
    n_points: int,
    r0: float,
    r_star: float,
    horizon: float,
    alpha_offset: float = 0.0,
    rate: float = 1.0,
) -> FieldSpec:
    """Field over r(t) = r0 e^{-rate t} pinning the scaled roots of unity.

    With zero offset the points r_star e^{2 pi i j / n} are zeros of G for
    every t, hence fixed points of the generated family.
    """
    if not (0.0 < r0 < r_star < 1.0):
        raise DomainError("need 0 < r0 < r_star < 1")
    path = RadiusPath.exponential(r0, rate)
    ds = validate(path, horizon)
    measures = MeasurePath.fixed_points(path, n_points, r_star, alpha_offset)
    return FieldSpec(ds=ds, C=ScalarDriver.constant(0.0), measures=measures)


def degenerate_field(
    alpha: ScalarDriver,
    herglotz: HerglotzPath,
    horizon: float,
    c_driver: Optional[ScalarDriver] = None,
) -> FieldSpec:
    """Punctured-disk field G(w, t) = w [iC(t) - alpha(t) q(w, t)]."""
    ds = validate(RadiusPath.zero(), horizon)
    return FieldSpec(
        ds=ds,
        C=c_driver if c_driver is not None else ScalarDriver.constant(0.0),
        alpha=alpha,
        herglotz=herglotz,
    )


def radial_degenerate_field(horizon: float) -> FieldSpec:
    """The plain radial contraction w' = -w (alpha = 1, q = 1, C = 0)."""
    return degenerate_field(
        ScalarDriver.constant(1.0), HerglotzPath.static(CircleMeasure.uniform(1.0)), horizon
    )
