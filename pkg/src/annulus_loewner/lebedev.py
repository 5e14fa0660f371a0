"""Coupled slit-evolution system on a two-sided annulus A = {m < |z| < M}.

Two ODEs drive a family of univalent slit mappings f(., t) of A:

    f'/f = lam(t) [K_r(k1 m_t / f) - K_r(k1 m_t)]
           - (1 - lam(t)) [K_r(r f / (k2 m_t)) - K_r(r / (k2 m_t))],
    m'/m = -lam(t) Re K_r(k1 m_t)
           - (1 - lam(t)) [1 - Re K_r(r / (k2 m_t))],

with r(t) = exp(-t) m / M, weights lam(t) in [0, 1], and unit-modulus
drivers k1, k2.  The scalar state m_t stays pinned in (r(t), 1).  Under
z = zeta / M, w = r(t) f / m_t the system becomes a canonical driving field
with single-atom measures, which ``to_canonical_field`` emits; the two
integration routes must agree through f = m_t phi_{0,t}(zeta/M) / r(t).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from ._core import STATUS_OK, kernel_series
from .domains import RadiusPath, validate
from .drivers import MeasurePath, ScalarDriver, UnitCircleDriver
from .errors import BandViolation, ConvergenceError, DomainError, StepFailure
from .fields import FieldSpec
from .kernels import DEFAULT_KERNEL_CONFIG, KernelEvalConfig
from .measures import CircleMeasure
from .ode import COMPLETE, IntegratorConfig, STEP_FAILURE, Trajectory, adaptive_rk

#: m_t integration needs dense samples: the cubic Hermite interpolant feeds
#: the slit equation and the canonical field, so its error must stay far
#: below the round-trip tolerance.
MT_CONFIG = IntegratorConfig(rel_tol=1e-11, abs_tol=1e-13, h_max=0.01)

_BAND = "band_violation"


@dataclass(frozen=True)
class LebedevSpec:
    """Slit-evolution driving data on A = {m < |z| < M}."""

    m: float
    M: float
    lam: ScalarDriver
    kappa1: UnitCircleDriver
    kappa2: UnitCircleDriver

    def __post_init__(self):
        if not (0.0 < self.m < 1.0 < self.M):
            raise DomainError(f"need 0 < m < 1 < M, got m={self.m}, M={self.M}")

    def r(self, t: float) -> float:
        return math.exp(-t) * self.m / self.M

    def radius_path(self) -> RadiusPath:
        return RadiusPath.exponential(self.m / self.M, 1.0)

    def breakpoints(self):
        pts = set(self.lam.breakpoints)
        pts |= set(self.kappa1.breakpoints) | set(self.kappa2.breakpoints)
        return tuple(sorted(pts))

    def to_json(self) -> dict:
        return {
            "m": self.m,
            "M": self.M,
            "lambda": self.lam.to_json(),
            "kappa1": self.kappa1.to_json(),
            "kappa2": self.kappa2.to_json(),
        }

    @classmethod
    def from_json(cls, payload: dict) -> "LebedevSpec":
        return cls(
            m=payload["m"],
            M=payload["M"],
            lam=ScalarDriver.from_json(payload["lambda"]),
            kappa1=UnitCircleDriver.from_json(payload["kappa1"]),
            kappa2=UnitCircleDriver.from_json(payload["kappa2"]),
        )


def _kernel(r: float, z: complex, cfg: KernelEvalConfig) -> complex:
    value, status = kernel_series(r, z, cfg.rel_tol, cfg.max_terms)
    if status != STATUS_OK:
        raise ConvergenceError("kernel series failed in the slit system")
    return value


def _mt_rhs(spec: LebedevSpec, cfg: KernelEvalConfig):
    def rhs(m: complex, t: float, left: bool) -> complex:
        mv = m.real
        rv = spec.r(t)
        lam = spec.lam.value_left(t) if left else spec.lam.value(t)
        k1 = spec.kappa1.value(t, left)
        k2 = spec.kappa2.value(t, left)
        drift = -lam * _kernel(rv, k1 * mv, cfg).real
        drift -= (1.0 - lam) * (1.0 - _kernel(rv, rv / (k2 * mv), cfg).real)
        return complex(mv * drift, 0.0)

    return rhs


@dataclass
class MtPath:
    """Dense m_t samples with cubic Hermite evaluation between them."""

    spec: LebedevSpec
    times: np.ndarray
    values: np.ndarray
    derivs: np.ndarray

    @property
    def t_end(self) -> float:
        return float(self.times[-1])

    def __call__(self, t: float) -> float:
        ts = self.times
        if t < ts[0] - 1e-12 or t > ts[-1] + 1e-12:
            raise DomainError(f"t = {t} outside the integrated span [{ts[0]}, {ts[-1]}]")
        if len(ts) == 1:
            return float(self.values[0])
        t = min(max(t, ts[0]), ts[-1])
        i = int(np.searchsorted(ts, t, side="right") - 1)
        i = min(max(i, 0), len(ts) - 2)
        h = ts[i + 1] - ts[i]
        s = (t - ts[i]) / h
        y0, y1 = self.values[i], self.values[i + 1]
        d0, d1 = self.derivs[i], self.derivs[i + 1]
        s2, s3 = s * s, s * s * s
        return float(
            (2 * s3 - 3 * s2 + 1) * y0
            + (s3 - 2 * s2 + s) * h * d0
            + (-2 * s3 + 3 * s2) * y1
            + (s3 - s2) * h * d1
        )

    def write_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("t,m_t\n")
            for t, v in zip(self.times, self.values):
                fh.write(f"{t:.17g},{v:.17g}\n")


def integrate_mt(
    spec: LebedevSpec,
    t_end: float,
    cfg: IntegratorConfig = MT_CONFIG,
    kernel_cfg: KernelEvalConfig = DEFAULT_KERNEL_CONFIG,
) -> MtPath:
    """Integrate the scalar equation for m_t over [0, t_end].

    The state must keep r(t) < m_t < 1; leaving that band is a bug signal
    and raises BandViolation.
    """
    if t_end < 0.0:
        raise DomainError("t_end must be >= 0")
    rhs = _mt_rhs(spec, kernel_cfg)

    def guard(m: complex, t: float):
        mv = m.real
        if mv <= spec.r(t) + cfg.boundary_guard or mv >= 1.0 - cfg.boundary_guard:
            return _BAND
        return None

    if t_end == 0.0:
        times = np.array([0.0])
        vals = np.array([spec.m])
    else:
        raw_t, raw_v, status, v_end = adaptive_rk(
            rhs, 0.0, complex(spec.m), t_end, cfg,
            breakpoints=spec.breakpoints(), guard=guard,
        )
        if status == _BAND:
            raise BandViolation(
                f"m_t left the band (r(t), 1) at t = {v_end}; this contradicts "
                "the confinement the system guarantees and signals a bug"
            )
        if status == STEP_FAILURE:
            raise StepFailure(f"m_t integration stalled at t = {v_end}")
        times = np.array(raw_t)
        vals = np.array([v.real for v in raw_v])
    derivs = np.array([rhs(complex(v), t, False).real for t, v in zip(times, vals)])
    return MtPath(spec=spec, times=times, values=vals, derivs=derivs)


def _slit_rhs(spec: LebedevSpec, mt: MtPath, cfg: KernelEvalConfig):
    def rhs(f: complex, t: float, left: bool) -> complex:
        rv = spec.r(t)
        mv = mt(t)
        lam = spec.lam.value_left(t) if left else spec.lam.value(t)
        k1 = spec.kappa1.value(t, left)
        k2 = spec.kappa2.value(t, left)
        term = lam * (_kernel(rv, k1 * mv / f, cfg) - _kernel(rv, k1 * mv, cfg))
        term -= (1.0 - lam) * (
            _kernel(rv, rv * f / (k2 * mv), cfg) - _kernel(rv, rv / (k2 * mv), cfg)
        )
        return f * term

    return rhs


def integrate_slit(
    spec: LebedevSpec,
    zeta: complex,
    t_end: float,
    cfg: IntegratorConfig = IntegratorConfig(),
    mt: MtPath = None,
    kernel_cfg: KernelEvalConfig = DEFAULT_KERNEL_CONFIG,
    extra_breakpoints=(),
) -> Trajectory:
    """Integrate the slit mapping value f(zeta, t) over [0, t_end].

    ``mt`` may share one m_t path across seeds; it is integrated on demand
    otherwise.  The trajectory records r(t) alongside f.
    ``extra_breakpoints`` are forced onto the sample grid (useful to read
    values at exact intermediate times).
    """
    zeta = complex(zeta)
    if not (spec.m < abs(zeta) < spec.M):
        raise DomainError(f"|zeta| = {abs(zeta)} outside ({spec.m}, {spec.M})")
    if mt is None:
        mt = integrate_mt(spec, t_end, kernel_cfg=kernel_cfg)
    if mt.t_end < t_end:
        raise DomainError("m_t path does not cover the requested horizon")
    rhs = _slit_rhs(spec, mt, kernel_cfg)

    def guard(f: complex, t: float):
        # In canonical variables w = r f / m_t the state must stay inside
        # the annulus; proximity to zero is caught by the inner bound.
        w = spec.r(t) * f / mt(t)
        aw = abs(w)
        if aw >= 1.0 - cfg.boundary_guard or aw <= spec.r(t) + cfg.boundary_guard:
            return "blew_up_at_boundary"
        return None

    if t_end == 0.0:
        return Trajectory(
            0.0, zeta, np.array([0.0]), np.array([zeta]),
            np.array([spec.r(0.0)]), COMPLETE, 0.0,
        )
    breaks = tuple(spec.breakpoints()) + tuple(extra_breakpoints)
    raw_t, raw_v, status, v_end = adaptive_rk(
        rhs, 0.0, zeta, t_end, cfg, breakpoints=breaks, guard=guard
    )
    times = np.array(raw_t)
    values = np.array(raw_v, dtype=np.complex128)
    radii = np.array([spec.r(t) for t in times])
    return Trajectory(0.0, zeta, times, values, radii, status, v_end)


class _SlitMeasurePath(MeasurePath):
    """Atom path of the canonical reduction: kappa2 carries mass 1 - lam
    in the first slot, kappa1 carries lam in the second."""

    def __init__(self, spec: LebedevSpec):
        super().__init__("lebedev", breakpoints=spec.breakpoints())
        self._lspec = spec

    def atom_arrays(self, t: float, left: bool = False):
        spec = self._lspec
        lam = spec.lam.value_left(t) if left else spec.lam.value(t)
        a1 = np.array([spec.kappa2.angle(t, left)])
        m1 = np.array([1.0 - lam])
        a2 = np.array([spec.kappa1.angle(t, left)])
        m2 = np.array([lam])
        return a1, m1, 0.0, a2, m2, 0.0

    def measures(self, t: float, left: bool = False):
        a1, m1, u1, a2, m2, u2 = self.atom_arrays(t, left)
        return (
            CircleMeasure(atoms=((float(a1[0]), float(m1[0])),), uniform_mass=u1),
            CircleMeasure(atoms=((float(a2[0]), float(m2[0])),), uniform_mass=u2),
        )

    def reflected_swapped(self) -> MeasurePath:
        def swapped(t):
            mu1, mu2 = self.measures(t)
            return mu2.reflected(), mu1.reflected()

        return MeasurePath.from_callable(swapped, self.breakpoints)


def to_canonical_field(
    spec: LebedevSpec,
    mt: MtPath,
    kernel_cfg: KernelEvalConfig = DEFAULT_KERNEL_CONFIG,
) -> FieldSpec:
    """Driving field of the slit system in canonical coordinates.

    G(w, t) = w [iC(t) - p(w, t)] over r(t) = exp(-t) m/M, where p carries
    the atom at kappa2(t) with mass 1 - lam(t) in the first slot and the
    atom at kappa1(t) with mass lam(t) in the second, and

        C(t) = (1 - lam) Im K_r(r / (k2 m_t)) - lam Im K_r(m_t k1).
    """

    def c_value(t: float, left: bool) -> float:
        rv = spec.r(t)
        mv = mt(t)
        lam = spec.lam.value_left(t) if left else spec.lam.value(t)
        k1 = spec.kappa1.value(t, left)
        k2 = spec.kappa2.value(t, left)
        return (1.0 - lam) * _kernel(rv, rv / (k2 * mv), kernel_cfg).imag - lam * _kernel(
            rv, mv * k1, kernel_cfg
        ).imag

    c_driver = ScalarDriver(
        fn=lambda t: c_value(t, False),
        breakpoints=spec.breakpoints(),
        left_fn=lambda t: c_value(t, True),
    )
    ds = validate(spec.radius_path(), max(mt.t_end, 1e-6))
    return FieldSpec(ds=ds, C=c_driver, measures=_SlitMeasurePath(spec))


@dataclass
class MonitorTable:
    """Sup of per-horizon increments of f over a seed set; no verdict."""

    horizons: tuple
    sup_increments: tuple
    seeds: tuple

    def rows(self):
        return [
            (self.horizons[k], self.horizons[k + 1], self.sup_increments[k])
            for k in range(len(self.sup_increments))
        ]

    def write_csv(self, path) -> None:
        with open(path, "w", encoding="utf-8") as fh:
            fh.write("t_from,t_to,sup_increment\n")
            for a, b, v in self.rows():
                fh.write(f"{a:.17g},{b:.17g},{v:.17g}\n")


def long_time_monitor(
    spec: LebedevSpec,
    zetas,
    horizons,
    cfg: IntegratorConfig = IntegratorConfig(),
) -> MonitorTable:
    """Tabulate sup_zeta |f(zeta, T_{k+1}) - f(zeta, T_k)| over a horizon ladder.

    Purely observational: the long-time limit is monitored, never asserted.
    """
    horizons = tuple(float(h) for h in horizons)
    if any(b <= a for a, b in zip(horizons, horizons[1:])) or not horizons:
        raise DomainError("horizons must be strictly increasing and non-empty")
    zetas = [complex(z) for z in zetas]
    mt = integrate_mt(spec, horizons[-1])
    finals = {}
    inner = tuple(h for h in horizons[:-1] if h > 0.0)
    for z in zetas:
        traj = integrate_slit(
            spec, z, horizons[-1], cfg, mt=mt, extra_breakpoints=inner
        )
        if traj.status != COMPLETE:
            raise StepFailure(f"slit trajectory from {z} ended with {traj.status}")
        idx = np.searchsorted(traj.times, np.array(horizons))
        idx = np.clip(idx, 0, len(traj.times) - 1)
        finals[z] = traj.values[idx]
    sups = []
    for k in range(len(horizons) - 1):
        sups.append(max(abs(finals[z][k + 1] - finals[z][k]) for z in zetas))
    return MonitorTable(
        horizons=horizons, sup_increments=tuple(sups), seeds=tuple(zetas)
    )
