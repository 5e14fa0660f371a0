"""Canonical domain systems: shrinking annuli t -> A_{r(t)}.

A radius path must stay in [0, 1), never increase, and carry its own
analytic derivative (the field construction consumes r'(t)/r(t) directly,
so numerical differentiation is never used).  Validation samples a grid,
classifies the system as degenerate / non-degenerate / mixed, and freezes
the result.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional

from .errors import DomainError, MonotonicityViolation, RangeViolation

PATH_KINDS = ("constant", "exponential", "zero", "custom")


@dataclass(frozen=True)
class RadiusPath:
    """Inner-radius driver t -> r(t) with analytic derivative.

    Built through the factory classmethods; ``custom`` paths supply their
    own callables plus declared breakpoints (times where smoothness fails,
    forced onto the integrator grid downstream).
    """

    kind: str
    r0: float = 0.0
    rate: float = 0.0
    r_fn: Optional[Callable[[float], float]] = field(default=None, repr=False)
    dr_fn: Optional[Callable[[float], float]] = field(default=None, repr=False)
    breakpoints: tuple = ()

    def __post_init__(self):
        if self.kind not in PATH_KINDS:
            raise DomainError(f"unknown radius path kind {self.kind!r}")
        if self.kind in ("constant", "exponential") and not (0.0 <= self.r0 < 1.0):
            raise RangeViolation(f"r0 = {self.r0} outside [0, 1)")
        if self.kind == "exponential" and self.rate < 0.0:
            raise MonotonicityViolation(
                f"exponential path with rate {self.rate} would increase"
            )
        if self.kind == "custom" and (self.r_fn is None or self.dr_fn is None):
            raise DomainError("custom paths need both r(t) and r'(t) callables")

    @classmethod
    def constant(cls, r0: float) -> "RadiusPath":
        return cls(kind="constant", r0=r0)

    @classmethod
    def exponential(cls, r0: float, rate: float) -> "RadiusPath":
        """r(t) = r0 * exp(-rate * t) with rate >= 0."""
        return cls(kind="exponential", r0=r0, rate=rate)

    @classmethod
    def zero(cls) -> "RadiusPath":
        return cls(kind="zero", r0=0.0)

    @classmethod
    def custom(cls, r_fn, dr_fn, breakpoints=()) -> "RadiusPath":
        return cls(
            kind="custom",
            r_fn=r_fn,
            dr_fn=dr_fn,
            breakpoints=tuple(sorted(float(b) for b in breakpoints)),
        )

    def value(self, t: float) -> float:
        if self.kind == "constant":
            return self.r0
        if self.kind == "exponential":
            return self.r0 * math.exp(-self.rate * t)
        if self.kind == "zero":
            return 0.0
        return float(self.r_fn(t))

    def derivative(self, t: float) -> float:
        if self.kind == "constant" or self.kind == "zero":
            return 0.0
        if self.kind == "exponential":
            return -self.rate * self.r0 * math.exp(-self.rate * t)
        return float(self.dr_fn(t))

    def log_derivative(self, t: float) -> float:
        """r'(t)/r(t); requires r(t) > 0."""
        rv = self.value(t)
        if rv <= 0.0:
            raise DomainError(f"r({t}) = {rv}: log-derivative needs r > 0")
        return self.derivative(t) / rv

    def to_json(self) -> dict:
        if self.kind == "constant":
            return {"kind": "constant", "r0": self.r0}
        if self.kind == "exponential":
            return {"kind": "exponential", "r0": self.r0, "rate": self.rate}
        if self.kind == "zero":
            return {"kind": "zero"}
        raise DomainError("custom radius paths have no JSON encoding")

    @classmethod
    def from_json(cls, payload: dict) -> "RadiusPath":
        kind = payload.get("kind")
        if kind == "constant":
            return cls.constant(payload["r0"])
        if kind == "exponential":
            return cls.exponential(payload["r0"], payload["rate"])
        if kind == "zero":
            return cls.zero()
        raise DomainError(f"unknown radius path kind {kind!r}")


DEGENERATE = "degenerate"
NON_DEGENERATE = "non_degenerate"
MIXED = "mixed"


@dataclass(frozen=True)
class DomainSystem:
    """Validated family of annuli A_{r(t)} with its classification."""

    path: RadiusPath
    classification: str
    horizon: float
    mix_time: Optional[float] = None

    @property
    def degenerate(self) -> bool:
        return self.classification == DEGENERATE

    @property
    def non_degenerate(self) -> bool:
        return self.classification == NON_DEGENERATE

    def radius(self, t: float) -> float:
        return self.path.value(t)

    def radius_derivative(self, t: float) -> float:
        return self.path.derivative(t)

    def to_json(self) -> dict:
        return self.path.to_json()


def validate(path: RadiusPath, horizon: float, grid: int = 256) -> DomainSystem:
    """Check range and monotonicity on a sample grid and classify the system.

    Raises RangeViolation if r leaves [0, 1), MonotonicityViolation if r
    increases between consecutive grid points or r' > 0 anywhere sampled.
    """
    if horizon <= 0.0:
        raise DomainError(f"horizon must be positive, got {horizon}")
    if grid < 2:
        raise DomainError(f"grid must have at least 2 points, got {grid}")
    times = [horizon * k / (grid - 1) for k in range(grid)]
    for b in path.breakpoints:
        if 0.0 < b < horizon:
            times.append(b)
    times.sort()
    values = [path.value(t) for t in times]
    for t, v in zip(times, values):
        if not (0.0 <= v < 1.0) or not math.isfinite(v):
            raise RangeViolation(f"r({t}) = {v} outside [0, 1)")
        if path.derivative(t) > 0.0:
            raise MonotonicityViolation(f"r'({t}) = {path.derivative(t)} > 0")
    for (t0, v0), (t1, v1) in zip(zip(times, values), zip(times[1:], values[1:])):
        if v1 > v0 + 1e-15:
            raise MonotonicityViolation(
                f"r increases from {v0} at t={t0} to {v1} at t={t1}"
            )
    if all(v == 0.0 for v in values):
        return DomainSystem(path, DEGENERATE, horizon)
    if all(v > 0.0 for v in values):
        return DomainSystem(path, NON_DEGENERATE, horizon)
    # Mixed: refine the first vanishing time by bisection.
    idx = next(i for i, v in enumerate(values) if v == 0.0)
    lo, hi = times[idx - 1], times[idx]
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        if path.value(mid) > 0.0:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-14:
            break
    return DomainSystem(path, MIXED, horizon, mix_time=hi)


def contains(ds: DomainSystem, z: complex, t: float) -> bool:
    """Membership of (z, t) in the evolution domain {r(t) < |z| < 1}."""
    if t < 0.0:
        raise DomainError(f"time must be >= 0, got {t}")
    az = abs(complex(z))
    rv = ds.radius(t)
    if rv == 0.0:
        return 0.0 < az < 1.0
    return rv < az < 1.0
