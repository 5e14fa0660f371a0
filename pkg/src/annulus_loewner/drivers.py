"""Time-dependent driving data: scalar drivers, unit-circle drivers, and
measure paths.

Drivers are piecewise-continuous with declared breakpoints; the integrator
forces step boundaries there.  Values are right-continuous at jumps, and
``value_left`` exposes the left limit so a step ending exactly on a jump
uses the correct side.
"""

from __future__ import annotations

import math
from bisect import bisect_left, bisect_right
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from ._core import STATUS_OK, kernel_series
from .domains import RadiusPath
from .errors import ConvergenceError, DomainError, NormalizationError
from .measures import MASS_TOL, CircleMeasure


def _merged(times, values, t, left):
    idx = (bisect_left if left else bisect_right)(times, t)
    return values[idx]


@dataclass(frozen=True)
class ScalarDriver:
    """Piecewise-continuous real driver t -> value."""

    fn: Callable[[float], float] = field(repr=False)
    breakpoints: tuple = ()
    left_fn: Optional[Callable[[float], float]] = field(default=None, repr=False)
    descriptor: Optional[dict] = None

    @classmethod
    def constant(cls, value: float) -> "ScalarDriver":
        return cls(fn=lambda t: value, descriptor={"kind": "constant", "value": value})

    @classmethod
    def cosine(cls, amplitude: float = 1.0, omega: float = 1.0, phase: float = 0.0) -> "ScalarDriver":
        return cls(
            fn=lambda t: amplitude * math.cos(omega * t + phase),
            descriptor={"kind": "cosine", "amplitude": amplitude, "omega": omega, "phase": phase},
        )

    @classmethod
    def piecewise_constant(cls, times, values) -> "ScalarDriver":
        times = tuple(float(t) for t in times)
        values = tuple(float(v) for v in values)
        if len(values) != len(times) + 1:
            raise DomainError("need len(values) == len(times) + 1")
        if any(b >= a for a, b in zip(times[1:], times)):
            raise DomainError("jump times must be strictly increasing")
        return cls(
            fn=lambda t: _merged(times, values, t, left=False),
            breakpoints=times,
            left_fn=lambda t: _merged(times, values, t, left=True),
            descriptor={"kind": "piecewise_constant", "times": list(times), "values": list(values)},
        )

    @classmethod
    def from_callable(cls, fn, breakpoints=()) -> "ScalarDriver":
        return cls(fn=fn, breakpoints=tuple(sorted(float(b) for b in breakpoints)))

    def value(self, t: float) -> float:
        return float(self.fn(t))

    def value_left(self, t: float) -> float:
        if self.left_fn is not None:
            return float(self.left_fn(t))
        return float(self.fn(t))

    def to_json(self) -> dict:
        if self.descriptor is None:
            raise DomainError("driver built from a raw callable has no JSON encoding")
        return dict(self.descriptor)

    @classmethod
    def from_json(cls, payload: dict) -> "ScalarDriver":
        kind = payload.get("kind")
        if kind == "constant":
            return cls.constant(payload["value"])
        if kind == "cosine":
            return cls.cosine(
                payload.get("amplitude", 1.0),
                payload.get("omega", 1.0),
                payload.get("phase", 0.0),
            )
        if kind == "piecewise_constant":
            return cls.piecewise_constant(payload["times"], payload["values"])
        raise DomainError(f"unknown scalar driver kind {kind!r}")


@dataclass(frozen=True)
class UnitCircleDriver:
    """Piecewise-continuous driver t -> point on the unit circle."""

    angle_fn: Callable[[float], float] = field(repr=False)
    breakpoints: tuple = ()
    left_angle_fn: Optional[Callable[[float], float]] = field(default=None, repr=False)
    descriptor: Optional[dict] = None

    @classmethod
    def constant_angle(cls, angle: float) -> "UnitCircleDriver":
        return cls(
            angle_fn=lambda t: angle,
            descriptor={"kind": "constant_angle", "angle": angle},
        )

    @classmethod
    def rotating(cls, omega: float, phase: float = 0.0) -> "UnitCircleDriver":
        return cls(
            angle_fn=lambda t: omega * t + phase,
            descriptor={"kind": "rotating", "omega": omega, "phase": phase},
        )

    @classmethod
    def piecewise_constant_angle(cls, times, angles) -> "UnitCircleDriver":
        times = tuple(float(t) for t in times)
        angles = tuple(float(a) for a in angles)
        if len(angles) != len(times) + 1:
            raise DomainError("need len(angles) == len(times) + 1")
        return cls(
            angle_fn=lambda t: _merged(times, angles, t, left=False),
            breakpoints=times,
            left_angle_fn=lambda t: _merged(times, angles, t, left=True),
            descriptor={"kind": "piecewise_constant_angle", "times": list(times), "angles": list(angles)},
        )

    @classmethod
    def from_callable(cls, angle_fn, breakpoints=()) -> "UnitCircleDriver":
        return cls(angle_fn=angle_fn, breakpoints=tuple(sorted(float(b) for b in breakpoints)))

    def angle(self, t: float, left: bool = False) -> float:
        if left and self.left_angle_fn is not None:
            return float(self.left_angle_fn(t))
        return float(self.angle_fn(t))

    def value(self, t: float, left: bool = False) -> complex:
        a = self.angle(t, left)
        return complex(math.cos(a), math.sin(a))

    def to_json(self) -> dict:
        if self.descriptor is None:
            raise DomainError("driver built from a raw callable has no JSON encoding")
        return dict(self.descriptor)

    @classmethod
    def from_json(cls, payload: dict) -> "UnitCircleDriver":
        kind = payload.get("kind")
        if kind == "constant_angle":
            return cls.constant_angle(payload["angle"])
        if kind == "rotating":
            return cls.rotating(payload["omega"], payload.get("phase", 0.0))
        if kind == "piecewise_constant_angle":
            return cls.piecewise_constant_angle(payload["times"], payload["angles"])
        raise DomainError(f"unknown unit-circle driver kind {kind!r}")


class MeasurePath:
    """Path t -> (mu1, mu2) of unit-total-mass measure pairs.

    ``atom_arrays`` is the hot-loop entry point: it returns plain float
    arrays without building CircleMeasure objects.  Angles and masses must
    vary piecewise-continuously in t.
    """

    def __init__(self, kind, breakpoints=(), descriptor=None, **state):
        self.kind = kind
        self.breakpoints = tuple(breakpoints)
        self.descriptor = descriptor
        self._state = state

    @classmethod
    def static(cls, mu1: CircleMeasure, mu2: CircleMeasure) -> "MeasurePath":
        total = mu1.total_mass + mu2.total_mass
        if abs(total - 1.0) > MASS_TOL:
            raise NormalizationError(f"static measure pair has total mass {total!r}")
        a1, m1 = mu1.as_arrays()
        a2, m2 = mu2.as_arrays()
        return cls(
            "static",
            descriptor={"kind": "static", "mu1": mu1.to_json(), "mu2": mu2.to_json()},
            mu1=mu1, mu2=mu2,
            arrays=(a1, m1, mu1.uniform_mass, a2, m2, mu2.uniform_mass),
        )

    @classmethod
    def fixed_points(
        cls,
        path: RadiusPath,
        n_points: int,
        r_star: float,
        alpha_offset: float = 0.0,
        kernel_rel_tol: float = 1e-13,
        kernel_max_terms: int = 512,
    ) -> "MeasurePath":
        """Measure pair that pins the n-th roots scaled by r_star.

        Splits the uniform atomic measure on the roots of unity between the
        two slots with a time-dependent weight alpha(t) chosen so the
        driving function vanishes at the pinned points; ``alpha_offset``
        shifts the weight to deliberately break the balance (negative
        controls).
        """
        if n_points < 1:
            raise DomainError("need at least one pinned point")
        if not (0.0 < r_star < 1.0):
            raise DomainError(f"r_star = {r_star} outside (0, 1)")
        angles = np.array(
            [2.0 * math.pi * j / n_points for j in range(n_points)], dtype=np.float64
        )
        return cls(
            "fixed_points",
            descriptor={
                "kind": "fixed_points",
                "n_points": n_points,
                "r_star": r_star,
                "alpha_offset": alpha_offset,
            },
            path=path,
            n_points=n_points,
            r_star=r_star,
            alpha_offset=alpha_offset,
            angles=angles,
            rel_tol=kernel_rel_tol,
            max_terms=kernel_max_terms,
        )

    @classmethod
    def from_callable(cls, fn, breakpoints=()) -> "MeasurePath":
        """fn(t) -> (CircleMeasure, CircleMeasure) with unit total mass."""
        return cls("callable", breakpoints=tuple(sorted(breakpoints)), fn=fn)

    def pinned_alpha(self, t: float) -> float:
        """Weight alpha(t) of the fixed-point split, including any offset."""
        if self.kind != "fixed_points":
            raise DomainError("pinned_alpha is only defined for fixed_points paths")
        s = self._state
        big_r = s["path"].value(t) ** s["n_points"]
        big_r_star = s["r_star"] ** s["n_points"]
        k_in, st1 = kernel_series(big_r, complex(big_r / big_r_star), s["rel_tol"], s["max_terms"])
        k_out, st2 = kernel_series(big_r, complex(big_r_star), s["rel_tol"], s["max_terms"])
        if st1 != STATUS_OK or st2 != STATUS_OK:
            raise ConvergenceError("kernel series failed inside the fixed-point weight")
        alpha = (k_in.real - 1.0) / (k_out.real + k_in.real - 1.0) + s["alpha_offset"]
        if not (0.0 <= alpha <= 1.0):
            raise DomainError(f"fixed-point weight {alpha} left [0, 1] at t = {t}")
        return alpha

    def atom_arrays(self, t: float, left: bool = False):
        """(angles1, masses1, uniform1, angles2, masses2, uniform2) at time t."""
        if self.kind == "static":
            return self._state["arrays"]
        if self.kind == "fixed_points":
            s = self._state
            alpha = self.pinned_alpha(t)
            n = s["n_points"]
            m1 = np.full(n, alpha / n)
            m2 = np.full(n, (1.0 - alpha) / n)
            return s["angles"], m1, 0.0, s["angles"], m2, 0.0
        mu1, mu2 = self.measures(t, left)
        a1, m1 = mu1.as_arrays()
        a2, m2 = mu2.as_arrays()
        return a1, m1, mu1.uniform_mass, a2, m2, mu2.uniform_mass

    def measures(self, t: float, left: bool = False):
        """CircleMeasure pair at time t (validated for unit total mass)."""
        if self.kind == "callable":
            mu1, mu2 = self._state["fn"](t)
            total = mu1.total_mass + mu2.total_mass
            if abs(total - 1.0) > MASS_TOL:
                raise NormalizationError(
                    f"measure path has total mass {total!r} at t = {t}"
                )
            return mu1, mu2
        a1, m1, u1, a2, m2, u2 = self.atom_arrays(t, left)
        mu1 = CircleMeasure(atoms=tuple(zip(a1, m1)), uniform_mass=u1)
        mu2 = CircleMeasure(atoms=tuple(zip(a2, m2)), uniform_mass=u2)
        return mu1, mu2

    def reflected_swapped(self) -> "MeasurePath":
        """Path of the conjugate pair: slots swapped, angles negated."""
        if self.kind == "static":
            return MeasurePath.static(
                self._state["mu2"].reflected(), self._state["mu1"].reflected()
            )
        if self.kind == "fixed_points":
            s = self._state
            base = MeasurePath.fixed_points(
                s["path"], s["n_points"], s["r_star"], s["alpha_offset"],
                s["rel_tol"], s["max_terms"],
            )
            # Roots of unity are conjugation-invariant; only the slot swap
            # (alpha <-> 1 - alpha) changes anything.
            return _SwappedFixedPoints(base)
        fn = self._state["fn"]

        def swapped(t):
            mu1, mu2 = fn(t)
            return mu2.reflected(), mu1.reflected()

        return MeasurePath.from_callable(swapped, self.breakpoints)

    def to_json(self) -> dict:
        if self.descriptor is None:
            raise DomainError("measure path built from a raw callable has no JSON encoding")
        return dict(self.descriptor)

    @classmethod
    def from_json(cls, payload: dict, path: RadiusPath = None) -> "MeasurePath":
        kind = payload.get("kind")
        if kind == "static":
            return cls.static(
                CircleMeasure.from_json(payload["mu1"]),
                CircleMeasure.from_json(payload["mu2"]),
            )
        if kind == "fixed_points":
            if path is None:
                raise DomainError("fixed_points measure path needs the radius path")
            return cls.fixed_points(
                path,
                payload["n_points"],
                payload["r_star"],
                payload.get("alpha_offset", 0.0),
            )
        raise DomainError(f"unknown measure path kind {kind!r}")


class _SwappedFixedPoints(MeasurePath):
    """Fixed-point path with the two measure slots exchanged."""

    def __init__(self, base: MeasurePath):
        super().__init__("fixed_points_swapped", breakpoints=base.breakpoints)
        self._base = base

    def atom_arrays(self, t: float, left: bool = False):
        a1, m1, u1, a2, m2, u2 = self._base.atom_arrays(t, left)
        return a2, m2, u2, a1, m1, u1

    def measures(self, t: float, left: bool = False):
        mu1, mu2 = self._base.measures(t, left)
        return mu2.reflected(), mu1.reflected()

    def reflected_swapped(self) -> MeasurePath:
        return self._base


class HerglotzPath:
    """Path t -> unit measure feeding the disk-case driving function."""

    def __init__(self, kind, breakpoints=(), descriptor=None, **state):
        self.kind = kind
        self.breakpoints = tuple(breakpoints)
        self.descriptor = descriptor
        self._state = state

    @classmethod
    def static(cls, measure: CircleMeasure) -> "HerglotzPath":
        if abs(measure.total_mass - 1.0) > MASS_TOL:
            raise NormalizationError(
                f"Herglotz measure must have unit mass, got {measure.total_mass!r}"
            )
        a, m = measure.as_arrays()
        return cls(
            "static",
            descriptor={"kind": "static", "measure": measure.to_json()},
            measure=measure,
            arrays=(a, m, measure.uniform_mass),
        )

    @classmethod
    def from_callable(cls, fn, breakpoints=()) -> "HerglotzPath":
        return cls("callable", breakpoints=tuple(sorted(breakpoints)), fn=fn)

    def atom_arrays(self, t: float, left: bool = False):
        if self.kind == "static":
            return self._state["arrays"]
        mu = self.measure(t, left)
        a, m = mu.as_arrays()
        return a, m, mu.uniform_mass

    def measure(self, t: float, left: bool = False) -> CircleMeasure:
        if self.kind == "static":
            return self._state["measure"]
        mu = self._state["fn"](t)
        if abs(mu.total_mass - 1.0) > MASS_TOL:
            raise NormalizationError(f"Herglotz path has mass {mu.total_mass!r} at t = {t}")
        return mu

    def to_json(self) -> dict:
        if self.descriptor is None:
            raise DomainError("Herglotz path built from a raw callable has no JSON encoding")
        return dict(self.descriptor)

    @classmethod
    def from_json(cls, payload: dict) -> "HerglotzPath":
        if payload.get("kind") == "static":
            return cls.static(CircleMeasure.from_json(payload["measure"]))
        raise DomainError(f"unknown Herglotz path kind {payload.get('kind')!r}")
