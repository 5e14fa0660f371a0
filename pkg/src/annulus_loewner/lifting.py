"""Covering and conformal maps onto the strip, and the lifting consistency
check for evolution families.

W_t(zeta) = exp(zeta log r(t)) covers the annulus A_{r(t)} by the vertical
strip {0 < Re zeta < 1}.  A family phi_{s,t} on the annuli lifts to a unique
family Psi_{s,t} on the strip with W_t o Psi_{s,t} = phi_{s,t} o W_s once the
branch at the start time is pinned; the lift is computed here by tracking a
continuous argument along the ODE trajectory.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .domains import DomainSystem
from .errors import BranchCutError, DomainError, LiftingError, PoleProximityError
from .ode import EvolutionMap, IntegratorConfig, integrate


@dataclass(frozen=True)
class StripPoint:
    """Point of the vertical strip 0 < Re zeta < 1."""

    zeta: complex

    def __post_init__(self):
        z = complex(self.zeta)
        if not (0.0 < z.real < 1.0):
            raise DomainError(f"Re zeta = {z.real} outside (0, 1)")
        object.__setattr__(self, "zeta", z)


def _strip_value(zeta) -> complex:
    if isinstance(zeta, StripPoint):
        return zeta.zeta
    return StripPoint(complex(zeta)).zeta


def covering_W(t: float, ds: DomainSystem, zeta) -> complex:
    """Covering map exp(zeta log r(t)) of the strip onto A_{r(t)}."""
    if not ds.non_degenerate:
        raise DomainError("the strip covers non-degenerate annuli only")
    z = _strip_value(zeta)
    return cmath.exp(z * math.log(ds.radius(t)))


def map_Q(w: complex, omega: float) -> complex:
    """Conformal map of the upper half-plane onto a horizontal-modulus strip.

    Q(w, omega) = (i/omega) log((1 + omega w)/(1 - omega w)) with the
    principal branch, and Q(w, 0) = 2iw.  For omega > 0 the image is the
    strip {log r < Re < 0} with r = exp(-pi/omega); for omega = 0 it is the
    left half-plane.
    """
    w = complex(w)
    if omega < 0.0:
        raise DomainError(f"omega must be >= 0, got {omega}")
    if omega == 0.0:
        return 2j * w
    u = omega * w
    if u.imag == 0.0 and abs(u.real) >= 1.0:
        raise BranchCutError(f"omega*w = {u} lies on the branch cut")
    ratio = (1.0 + u) / (1.0 - u)
    if ratio.imag == 0.0 and ratio.real <= 0.0:
        raise BranchCutError(f"log argument {ratio} lies on (-inf, 0]")
    return (1j / omega) * cmath.log(ratio)


def map_R(zeta: complex, omega: float) -> complex:
    """Inverse of map_Q on its range; R(zeta, 0) = -i zeta / 2."""
    zeta = complex(zeta)
    if omega < 0.0:
        raise DomainError(f"omega must be >= 0, got {omega}")
    if omega == 0.0:
        return -0.5j * zeta
    e = cmath.exp(-1j * zeta * omega)
    if abs(e + 1.0) < 1e-12:
        raise PoleProximityError(f"zeta*omega = {zeta * omega} is at a pole")
    return (1.0 / omega) * (e - 1.0) / (e + 1.0)


def disk_to_strip_F(z: complex) -> complex:
    """Conformal map of the disk onto {0 < Re < 1} with F(0) = 1/2."""
    z = complex(z)
    if abs(z) >= 1.0:
        raise DomainError(f"|z| = {abs(z)} must be < 1")
    return cmath.log(1j * (1.0 + z) / (1.0 - z)) / (math.pi * 1j)


@dataclass
class LiftResult:
    """Strip lift of one family evaluation and its commutation residual."""

    psi: complex
    residual: float
    refinements: int


def lift_commutation_check(
    emap: EvolutionMap,
    s: float,
    t: float,
    zeta,
    max_refinements: int = 6,
    arg_jump_threshold: float = math.pi / 2.0,
) -> LiftResult:
    """Lift phi_{s,t} through the covering maps and measure the residual.

    Computes Psi_{s,t}(zeta) by integrating u -> phi_{s,u}(W_s(zeta)),
    accumulating the principal argument increments along the samples (the
    branch is pinned by zeta at u = s), and dividing the continued
    logarithm by log r(t).  Returns |W_t(Psi) - phi_{s,t}(W_s(zeta))|
    together with Psi.  Sampling is refined when consecutive samples turn
    by more than ``arg_jump_threshold``; increments of pi or more after all
    refinements raise LiftingError.
    """
    ds = emap.spec.ds
    if not ds.non_degenerate:
        raise DomainError("lifting requires a non-degenerate system")
    z0 = _strip_value(zeta)
    if t < s:
        raise DomainError("need t >= s")
    w0 = covering_W(s, ds, z0)
    if t == s:
        return LiftResult(psi=z0, residual=0.0, refinements=0)

    cfg = emap.cfg
    refinements = 0
    while True:
        traj = (
            emap.trajectory(s, t, w0)
            if refinements == 0
            else integrate(emap.spec, s, w0, t, cfg)
        )
        if not traj.complete:
            raise LiftingError(f"trajectory terminated with status {traj.status}")
        ratios = traj.values[1:] / traj.values[:-1]
        deltas = np.angle(ratios)
        worst = float(np.max(np.abs(deltas))) if len(deltas) else 0.0
        if worst < arg_jump_threshold:
            break
        if worst >= math.pi - 1e-9 and refinements >= max_refinements:
            raise LiftingError(
                f"argument jump {worst} persists after {refinements} refinements"
            )
        if refinements >= max_refinements:
            break
        refinements += 1
        cfg = IntegratorConfig(
            rel_tol=cfg.rel_tol,
            abs_tol=cfg.abs_tol,
            h_init=cfg.h_init / 2.0,
            h_min=cfg.h_min,
            h_max=cfg.h_max / 2.0,
            boundary_guard=cfg.boundary_guard,
        )

    log_r_s = math.log(ds.radius(s))
    theta = (z0 * log_r_s).imag + float(np.sum(deltas))
    log_w_end = math.log(abs(traj.endpoint)) + 1j * theta
    psi = log_w_end / math.log(ds.radius(t))
    residual = abs(covering_W(t, ds, psi) - emap.evolve(s, t, w0))
    return LiftResult(psi=psi, residual=residual, refinements=refinements)
