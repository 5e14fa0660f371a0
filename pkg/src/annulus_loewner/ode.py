"""Adaptive integration of w' = G(w, t) and evolution-family evaluation.

The stepper is an embedded Dormand-Prince 5(4) pair with PI step-size
control.  Driver jump times are forced step boundaries, a boundary guard
terminates trajectories that approach the rim of the evolving annulus (for
well-formed driving fields this never fires), and all stepping is
deterministic: repeated runs are bit-identical.
"""

from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .domains import DomainSystem, contains
from .errors import BoundaryTermination, DomainError, StepFailure
from .fields import FieldSpec, field_eval

COMPLETE = "complete"
BLEW_UP = "blew_up_at_boundary"
STEP_FAILURE = "step_failure"

# Dormand-Prince 5(4) tableau.
_C = (0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0)
_A = (
    (),
    (1.0 / 5.0,),
    (3.0 / 40.0, 9.0 / 40.0),
    (44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0),
    (19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0),
    (9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0),
    (35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0),
)
_B5 = _A[6] + (0.0,)
_B4 = (
    5179.0 / 57600.0, 0.0, 7571.0 / 16695.0, 393.0 / 640.0,
    -92097.0 / 339200.0, 187.0 / 2100.0, 1.0 / 40.0,
)
_ERR = tuple(b5 - b4 for b5, b4 in zip(_B5, _B4))

_SAFETY = 0.9
_ALPHA = 0.7 / 5.0
_BETA = 0.4 / 5.0
_FAC_MIN = 0.2
_FAC_MAX = 5.0


@dataclass(frozen=True)
class IntegratorConfig:
    """Step control and boundary-guard parameters."""

    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    h_init: float = 1e-3
    h_min: float = 1e-14
    h_max: float = 0.1
    boundary_guard: float = 1e-9

    def __post_init__(self):
        if not (0.0 < self.rel_tol <= 1e-3) or not (0.0 < self.abs_tol <= 1e-3):
            raise DomainError("tolerances must lie in (0, 1e-3]")
        if not (0.0 < self.h_min <= self.h_init <= self.h_max):
            raise DomainError("need 0 < h_min <= h_init <= h_max")
        if self.boundary_guard <= 0.0:
            raise DomainError("boundary_guard must be positive")

    def tightened(self, factor: float) -> "IntegratorConfig":
        return IntegratorConfig(
            rel_tol=self.rel_tol * factor,
            abs_tol=self.abs_tol * factor,
            h_init=self.h_init,
            h_min=self.h_min,
            h_max=self.h_max,
            boundary_guard=self.boundary_guard,
        )

    def key(self):
        return (
            self.rel_tol, self.abs_tol, self.h_init,
            self.h_min, self.h_max, self.boundary_guard,
        )


@dataclass
class Trajectory:
    """Time-stamped solution path with its termination status."""

    s: float
    z0: complex
    times: np.ndarray
    values: np.ndarray
    radii: np.ndarray
    status: str
    validity_end: float

    @property
    def endpoint(self) -> complex:
        return complex(self.values[-1])

    @property
    def complete(self) -> bool:
        return self.status == COMPLETE

    def write_csv(self, path) -> None:
        """Export as CSV with header t, re_w, im_w, abs_w, r_t."""
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("t,re_w,im_w,abs_w,r_t\n")
            for t, w, r in zip(self.times, self.values, self.radii):
                fh.write(
                    f"{t:.17g},{w.real:.17g},{w.imag:.17g},{abs(w):.17g},{r:.17g}\n"
                )


def adaptive_rk(
    rhs: Callable,
    s: float,
    y0: complex,
    t_end: float,
    cfg: IntegratorConfig,
    breakpoints=(),
    guard: Optional[Callable[[complex, float], Optional[str]]] = None,
):
    """Integrate y' = rhs(y, t, left) from s to t_end.

    ``rhs(y, t, left)`` must accept a ``left`` flag: stages that land
    exactly on a segment's right edge evaluate the drivers' left limits,
    so jumps never leak across forced breakpoints.  ``guard`` inspects each
    accepted iterate and may terminate the run by returning a status
    string.  Returns (times, values, status, validity_end).
    """
    edges = [s]
    for b in sorted(set(float(b) for b in breakpoints)):
        if s < b < t_end:
            edges.append(b)
    edges.append(t_end)

    times = [s]
    values = [complex(y0)]
    y = complex(y0)
    h = cfg.h_init
    err_prev = 1.0

    for seg_start, seg_end in zip(edges[:-1], edges[1:]):
        t = seg_start
        span = seg_end - seg_start
        if span <= 0.0:
            continue
        h = min(h, cfg.h_max, span)
        k1 = rhs(y, t, t >= seg_end)
        while t < seg_end:
            h = min(h, seg_end - t)
            ks = [k1]
            y_new = y
            for i in range(1, 7):
                yi = y
                for aij, kj in zip(_A[i], ks):
                    yi = yi + h * aij * kj
                if i == 6:
                    # Stage 7 sits at the 5th-order solution (FSAL).
                    y_new = yi
                ti = t + _C[i] * h
                ks.append(rhs(yi, ti, ti >= seg_end))
            err = 0.0 + 0.0j
            for e, k in zip(_ERR, ks):
                err = err + e * k
            err = h * err
            scale = cfg.abs_tol + cfg.rel_tol * max(abs(y), abs(y_new))
            err_norm = abs(err) / scale
            if err_norm <= 1.0:
                t_new = t + h
                if seg_end - t_new < 1e-14 * max(1.0, abs(seg_end)):
                    t_new = seg_end
                times.append(t_new)
                values.append(y_new)
                if guard is not None:
                    verdict = guard(y_new, t_new)
                    if verdict is not None:
                        return times, values, verdict, t_new
                y = y_new
                t = t_new
                k1 = ks[6]
                fac = _SAFETY * (err_norm + 1e-20) ** (-_ALPHA) * (err_prev + 1e-20) ** _BETA
                err_prev = max(err_norm, 1e-20)
                h = min(cfg.h_max, h * min(_FAC_MAX, max(_FAC_MIN, fac)))
            else:
                fac = _SAFETY * (err_norm + 1e-20) ** (-_ALPHA)
                h = h * min(1.0, max(_FAC_MIN, fac))
                if h < cfg.h_min:
                    return times, values, STEP_FAILURE, t
        if seg_end < t_end:
            # Re-prime the first stage on the right side of the breakpoint.
            k1 = rhs(y, seg_end, False)
    return times, values, COMPLETE, t_end


def _boundary_guard(ds: DomainSystem, eps: float):
    def guard(w: complex, t: float) -> Optional[str]:
        aw = abs(w)
        if aw >= 1.0 - eps:
            return BLEW_UP
        rv = ds.radius(t)
        inner = eps if rv == 0.0 else rv + eps
        if aw <= inner:
            return BLEW_UP
        return None

    return guard


def integrate(
    spec: FieldSpec,
    s: float,
    z: complex,
    t_end: float,
    cfg: IntegratorConfig = IntegratorConfig(),
) -> Trajectory:
    """Solve w' = G(w, t), w(s) = z forward to t_end.

    The start point must lie inside the evolution domain with at least the
    guard margin.  The returned trajectory carries every accepted step and
    one of the statuses complete / blew_up_at_boundary / step_failure.
    """
    z = complex(z)
    if t_end < s:
        raise DomainError("backward integration is not supported")
    if s < 0.0:
        raise DomainError(f"start time must be >= 0, got {s}")
    guard = _boundary_guard(spec.ds, cfg.boundary_guard)
    if guard(z, s) is not None or not contains(spec.ds, z, s):
        raise DomainError(
            f"start point z = {z} is not inside the domain at t = {s} "
            f"with margin {cfg.boundary_guard}"
        )
    if t_end == s:
        rv = spec.ds.radius(s)
        return Trajectory(
            s, z, np.array([s]), np.array([z]), np.array([rv]), COMPLETE, s
        )

    def rhs(w, t, left):
        return field_eval(spec, w, t, strict=False, left=left)

    times, values, status, validity_end = adaptive_rk(
        rhs, s, z, t_end, cfg, breakpoints=spec.breakpoints(), guard=guard
    )
    times = np.array(times, dtype=np.float64)
    values = np.array(values, dtype=np.complex128)
    radii = np.array([spec.ds.radius(t) for t in times], dtype=np.float64)
    return Trajectory(s, z, times, values, radii, status, validity_end)


class GridEvolutionError(DomainError):
    """Per-point failures inside evolve_grid, with their indices."""

    def __init__(self, failures):
        self.failures = failures
        msg = "; ".join(f"[{i}] {exc}" for i, exc in failures)
        super().__init__(f"grid evolution failed at {len(failures)} point(s): {msg}")


class EvolutionMap:
    """Evaluator for the two-parameter family phi_{s,t} behind one field.

    Trajectories are memoized on exact (s, t, z) float keys, so repeated
    evaluations are bit-identical and composition tests can share paths.
    """

    def __init__(self, spec: FieldSpec, cfg: IntegratorConfig = IntegratorConfig()):
        self.spec = spec
        self.cfg = cfg
        self._memo: dict = {}

    def trajectory(self, s: float, t: float, z: complex) -> Trajectory:
        z = complex(z)
        key = (float(s), float(t), z.real, z.imag)
        hit = self._memo.get(key)
        if hit is None:
            hit = integrate(self.spec, s, z, t, self.cfg)
            self._memo[key] = hit
        return hit

    def evolve(self, s: float, t: float, z: complex) -> complex:
        """phi_{s,t}(z); the identity (no stepping) when t == s."""
        z = complex(z)
        if t == s:
            if not contains(self.spec.ds, z, s):
                raise DomainError(f"z = {z} outside the domain at t = {s}")
            return z
        traj = self.trajectory(s, t, z)
        if traj.status == BLEW_UP:
            raise BoundaryTermination(
                f"trajectory from ({z}, {s}) reached the boundary guard at "
                f"t = {traj.validity_end}"
            )
        if traj.status == STEP_FAILURE:
            raise StepFailure(
                f"step size underflow at t = {traj.validity_end} from ({z}, {s})"
            )
        return traj.endpoint

    def evolve_grid(self, s: float, t: float, points) -> np.ndarray:
        """Elementwise evolve; order-preserving, independent trajectories.

        Point count permitting, trajectories run on a thread pool capped by
        ANNULUS_LOEWNER_THREADS (default: serial).
        """
        pts = list(points)
        threads = int(os.environ.get("ANNULUS_LOEWNER_THREADS", "1"))
        results: list = [None] * len(pts)
        failures = []

        def run(i, z):
            try:
                results[i] = self.evolve(s, t, z)
            except Exception as exc:  # noqa: BLE001 - reported with indices
                failures.append((i, exc))

        if threads > 1 and len(pts) > 1:
            with ThreadPoolExecutor(max_workers=threads) as pool:
                list(pool.map(lambda iz: run(*iz), enumerate(pts)))
        else:
            for i, z in enumerate(pts):
                run(i, z)
        if failures:
            raise GridEvolutionError(sorted(failures, key=lambda f: f[0]))
        return np.array(results, dtype=np.complex128)


@dataclass
class ContainmentCertificate:
    """Analytic modulus envelopes evaluated along a computed trajectory."""

    trajectory: Trajectory
    upper: np.ndarray
    lower: np.ndarray
    max_upper_violation: float
    max_lower_violation: float
    ok: bool


def containment_certificate(
    spec: FieldSpec,
    s: float,
    z: complex,
    t_end: float,
    cfg: IntegratorConfig = IntegratorConfig(),
) -> ContainmentCertificate:
    """Integrate and check |w(t)| against its closed-form envelopes.

    Upper: |w(t)| <= 1 - (1 - |z|) exp(a (r(t) - r(s))) with
    a = 4 / ((|z| - r(s)) (1 - r(s))^2); the lower envelope is the same
    bound applied to the reflected trajectory r(t)/w(t).  Diagnostic only:
    violations are reported, never raised.
    """
    if spec.degenerate:
        raise DomainError("containment envelopes require a non-degenerate system")
    z = complex(z)
    traj = integrate(spec, s, z, t_end, cfg)
    r_s = spec.ds.radius(s)
    rho_s = abs(z)
    alpha_u = 4.0 / ((rho_s - r_s) * (1.0 - r_s) ** 2)
    rho_tilde_s = r_s / rho_s
    alpha_l = 4.0 / ((rho_tilde_s - r_s) * (1.0 - r_s) ** 2)
    dr = traj.radii - r_s
    upper = 1.0 - (1.0 - rho_s) * np.exp(alpha_u * dr)
    lower = traj.radii / (1.0 - (1.0 - rho_tilde_s) * np.exp(alpha_l * dr))
    moduli = np.abs(traj.values)
    slack = 10.0 * cfg.rel_tol + 1e-12
    over = float(np.max(moduli - upper))
    under = float(np.max(lower - moduli))
    return ContainmentCertificate(
        trajectory=traj,
        upper=upper,
        lower=lower,
        max_upper_violation=max(0.0, over),
        max_lower_violation=max(0.0, under),
        ok=(over <= slack) and (under <= slack),
    )
